//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p eigenbound-cli --test acceptance`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use eigenbound::bound::crossover_diameter;
use eigenbound::radial::monotonicity_report;
use eigenbound::spaceform::{ball_volume, radius_from_volume, sin_ratio};
use eigenbound::verifier::verify::conformal_level;
use eigenbound::verifier::{
    gauss_curvature_range, mesh_star_domain, proof_chain_check, ConformalDomain, FourierBoundary, RevolutionSurface,
    ScenarioSpec,
};
use eigenbound::{constant_c, first_neumann_eigenvalue, BoundInput, RadialProblem, ShootingConfig, SpaceFormBall};
use eigenbound_oracles::euclidean_ball_mu1;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn mu1(k: f64, n: usize, radius: f64) -> Result<f64, String> {
    let problem = RadialProblem::new(k, n, radius).map_err(|e| e.to_string())?;
    first_neumann_eigenvalue(&problem, &ShootingConfig::default())
        .map(|p| p.mu1)
        .map_err(|e| e.to_string())
}

/// Largest radius to draw for curvature k: a hemisphere fraction when k > 0.
fn radius_scale(k: f64) -> f64 {
    if k > 0.0 {
        FRAC_PI_2 / k.sqrt()
    } else {
        2.0
    }
}

fn hemisphere() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_eigenbound"))
        .args(["mu1-ball", "-k", "1", "-n", "2", "-R", &FRAC_PI_2.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "exit {:?}", out.status.code());
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let value = v["mu1"].as_f64().ok_or("no mu1 field")?;
    ensure!((value - 2.0).abs() <= 1e-8, "mu1 = {value}");
    Ok(format!("mu1 = {value}, error {:.1e}", (value - 2.0).abs()))
}

fn bessel(n: usize, reference: f64) -> Outcome {
    let oracle = euclidean_ball_mu1(n, 1.0);
    ensure!((oracle - reference).abs() < 1e-5, "oracle {oracle} disagrees with the tabulated {reference}");
    let value = mu1(0.0, n, 1.0)?;
    ensure!((value - oracle).abs() <= 1e-6, "n = {n}: {value} vs oracle {oracle}");
    Ok(format!("n = {n}: {value} vs oracle {oracle}"))
}

fn bessel_both() -> Outcome {
    let a = bessel(2, 3.38996)?;
    let b = bessel(3, 4.33296)?;
    Ok(format!("{a}; {b}"))
}

fn equal_curvatures() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(2..=4);
        let k: f64 = rng.random_range(-4.0..=1.0);
        let radius = rng.random_range(0.05..0.95) * radius_scale(k);
        let volume = ball_volume(&SpaceFormBall::new(k, n, radius).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let d = rng.random_range(0.02..0.98) * if k > 0.0 { FRAC_PI_2 / k.sqrt() } else { 5.0 };
        let input = BoundInput::new(n, k, k, volume, d).map_err(|e| e.to_string())?;
        let c = constant_c(&input).map_err(|e| format!("(n={n}, k={k}, V={volume}, d={d}): {e}"))?.constant;
        worst = worst.max((c - 1.0).abs());
        ensure!((c - 1.0).abs() <= 1e-9, "(n={n}, k={k}, V={volume}, d={d}): C = {c}");
    }
    Ok(format!("max |C - 1| = {worst:.1e}"))
}

fn sharpness() -> Outcome {
    let disk = ConformalDomain::geodesic_disk(-1.0, 1.0).map_err(|e| e.to_string())?;
    let coarse = conformal_level(&disk, 0.02, -1.0, -1.0).map_err(|e| e.to_string())?;
    let fine = conformal_level(&disk, 0.01, -1.0, -1.0).map_err(|e| e.to_string())?;
    let (m0, m1) = (coarse.margin.abs(), fine.margin.abs());
    let order = (m0 / m1).log2();
    ensure!(m0 <= 0.02, "margin {m0} at h = 0.02");
    ensure!(m1 < m0 && order >= 1.8, "margins {m0:.3e} -> {m1:.3e}, order {order:.2}");
    Ok(format!("margins {m0:.3e} -> {m1:.3e}, observed order {order:.2}"))
}

fn corpus() -> Outcome {
    let dir = workspace().join("corpus");
    let out = Command::new(env!("CARGO_BIN_EXE_eigenbound"))
        .arg("corpus")
        .arg(&dir)
        .output()
        .map_err(|e| e.to_string())?;
    let v: Value = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("{e}: {}", String::from_utf8_lossy(&out.stderr)))?;
    ensure!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    ensure!(v["all_satisfied"] == true, "not all scenarios satisfied");
    let scenarios = v["scenarios"].as_array().ok_or("no scenarios")?;
    ensure!(scenarios.len() >= 5, "only {} scenarios", scenarios.len());
    let (mut hyperbolic, mut spherical, mut revolution) = (0, 0, 0);
    for s in scenarios {
        let file = s["file"].as_str().unwrap_or("?");
        ensure!(s["satisfied"] == true, "{file} not satisfied");
        let k = s["k"].as_f64().ok_or("missing k")?;
        match s["kind"].as_str() {
            Some("conformal") if k == 1.0 => {
                let a = &s["breakdown"]["assumptions"];
                ensure!(a["cond_a"] == "satisfied" && a["cond_b"] == "satisfied", "{file}: assumptions {a}");
                spherical += 1;
            }
            Some("conformal") if s["K"].as_f64() == Some(-1.0) && k == -1.0 => hyperbolic += 1,
            Some("revolution") => {
                let spec = ScenarioSpec::load(&dir.join(file)).map_err(|e| e.to_string())?;
                let ScenarioSpec::Revolution { profile, cap_radius, .. } = spec else {
                    return Err(format!("{file}: kind mismatch"));
                };
                let surface = RevolutionSurface::new(profile, cap_radius).map_err(|e| e.to_string())?;
                let (lo, hi) = gauss_curvature_range(&surface).map_err(|e| e.to_string())?;
                ensure!(s["K"].as_f64() == Some(lo) && k == hi, "{file}: (K, k) differ from the curvature range");
                ensure!(lo < hi, "{file}: curvature is not pinched strictly");
                revolution += 1;
            }
            _ => {}
        }
    }
    ensure!(hyperbolic >= 1 && spherical >= 1 && revolution >= 2, "coverage {hyperbolic}/{spherical}/{revolution}");
    Ok(format!(
        "{} scenarios satisfied ({hyperbolic} hyperbolic, {spherical} spherical cap, {revolution} revolution)",
        scenarios.len()
    ))
}

fn crossover() -> Outcome {
    let (n, k, big_k, volume) = (2, -1.0, -4.0, 3.41228);
    let d = crossover_diameter(n, k, big_k, volume, 20.0, &ShootingConfig::default())
        .map_err(|e| e.to_string())?
        .ok_or("no crossover below 20")?;
    ensure!(d.is_finite() && d <= 20.0, "d* = {d}");
    let b = constant_c(&BoundInput::new(n, k, big_k, volume, 2.0 * d).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure!(b.constant < b.wang, "C(2d*) = {} >= Wang {}", b.constant, b.wang);
    Ok(format!("d* = {d:.9}, C(2d*) = {:.6} < Wang(2d*) = {:.6}", b.constant, b.wang))
}

fn monotonicity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.random_range(2..=4);
        let k: f64 = rng.random_range(-4.0..=1.0);
        let radius = rng.random_range(0.05..1.0) * radius_scale(k);
        let problem = RadialProblem::new(k, n, radius).map_err(|e| e.to_string())?;
        let pair = first_neumann_eigenvalue(&problem, &ShootingConfig::default()).map_err(|e| e.to_string())?;
        let r = monotonicity_report(&pair);
        ensure!(r.f_increasing && r.g_decreasing, "(k={k}, n={n}, R={radius}): {r:?}");
    }
    for _ in 0..20 {
        let k: f64 = rng.random_range(-4.0..=2.0);
        let big_k = k - rng.random_range(0.01..4.0);
        let top = if k > 0.0 { 0.999 * PI / k.sqrt() } else { 3.0 };
        let mut previous = 1.0;
        for i in 1..=1000 {
            let r = top * i as f64 / 1000.0;
            let q = sin_ratio(big_k, k, r).map_err(|e| e.to_string())?;
            ensure!(q >= previous * (1.0 - 1e-14), "(K={big_k}, k={k}) decreases at r = {r}: {previous} -> {q}");
            previous = q;
        }
    }
    Ok("100 eigenpairs with f increasing and G decreasing; 20 sin ratios nondecreasing".into())
}

fn chain() -> Outcome {
    let domain = ConformalDomain::new(
        -1.0,
        FourierBoundary {
            a: vec![1.0, 0.3, 0.1],
            b: vec![0.0, 0.08],
        },
    )
    .map_err(|e| e.to_string())?;
    let mesh = mesh_star_domain(&domain, 0.04).map_err(|e| e.to_string())?;
    let r = proof_chain_check(&domain, &mesh, -1.0, -1.0).map_err(|e| e.to_string())?;
    let tol = r.tolerance;
    ensure!(r.center.residual <= 1e-8, "center residual {}", r.center.residual);
    ensure!(r.mean_zero.iter().all(|&m| m <= 1e-8), "mean-zero {:?}", r.mean_zero);
    ensure!(r.mu1_fem <= r.rayleigh * (1.0 + tol), "mu1_fem {} > Rayleigh {}", r.mu1_fem, r.rayleigh);
    ensure!(
        r.rayleigh <= r.breakdown.mu1_ball * (1.0 + tol),
        "Rayleigh {} > mu1 ball {}",
        r.rayleigh,
        r.breakdown.mu1_ball
    );
    ensure!(r.slacks.min() >= -tol, "slacks {:?}", r.slacks);
    ensure!(r.holds, "chain does not hold");
    Ok(format!(
        "mu1_fem {:.6} <= Rayleigh {:.6} <= mu1 ball {:.6}; min slack {:.1e}; residual {:.1e}",
        r.mu1_fem,
        r.rayleigh,
        r.breakdown.mu1_ball,
        r.slacks.min(),
        r.center.residual
    ))
}

fn scaling_and_roundtrip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..20 {
        let n = rng.random_range(2..=4);
        let k: f64 = rng.random_range(-4.0..=1.0);
        let radius = rng.random_range(0.1..0.9) * radius_scale(k);
        let small = mu1(k, n, radius)?;
        let large = mu1(k / 4.0, n, 2.0 * radius)?;
        ensure!(
            (4.0 * large - small).abs() <= 1e-8 * small.max(1.0),
            "(k={k}, n={n}, R={radius}): {} vs {small}",
            4.0 * large
        );
    }
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=5);
        let k: f64 = rng.random_range(-4.0..=4.0);
        let top = if k > 0.0 { PI / k.sqrt() } else { 3.0 };
        let radius = rng.random_range(0.01..0.99) * top;
        let volume = ball_volume(&SpaceFormBall::new(k, n, radius).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let back = radius_from_volume(k, n, volume).map_err(|e| e.to_string())?;
        let err = (back - radius).abs() / radius;
        worst = worst.max(err);
        ensure!(err <= 1e-10, "(k={k}, n={n}, R={radius}): roundtrip {back}");
    }
    Ok(format!("20 scaling draws within 1e-8; 200 roundtrips, max relative error {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("hemisphere closed form", hemisphere, 1),
        ("Euclidean Bessel oracle", bessel_both, 2),
        ("equal curvatures give C = 1", equal_curvatures, 30),
        ("sharpness on the geodesic disk", sharpness, 120),
        ("scenario corpus", corpus, 600),
        ("crossover against Wang", crossover, 60),
        ("radial monotonicity properties", monotonicity, 60),
        ("test-function chain", chain, 180),
        ("scaling and roundtrip", scaling_and_roundtrip, 30),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("exceeded {limit} s")),
            other => other,
        };
        let secs = elapsed.as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {}. {name} ({secs:.2} s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {}. {name} ({secs:.2} s): {detail}", i + 1);
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
