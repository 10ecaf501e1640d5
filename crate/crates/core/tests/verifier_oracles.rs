use std::f64::consts::PI;

use eigenbound::verifier::com::mass_field;
use eigenbound::verifier::mesh::Mesh;
use eigenbound::verifier::revolution::revolution_diameter;
use eigenbound::verifier::*;
use eigenbound::{first_neumann_eigenvalue, RadialProblem, ShootingConfig};
use eigenbound_oracles::{point_pair_distance, star_domain_area, star_domain_diameter};
use proptest::prelude::*;

fn shooting_mu1(k: f64, radius: f64) -> f64 {
    first_neumann_eigenvalue(&RadialProblem::new(k, 2, radius).unwrap(), &ShootingConfig::default())
        .unwrap()
        .mu1
}

fn ellipse() -> ConformalDomain {
    ConformalDomain::new(-1.0, FourierBoundary { a: vec![0.8, 0.0, 0.2], b: vec![] }).unwrap()
}

#[test]
fn flat_disk_converges_at_second_order() {
    let disk = ConformalDomain::new(0.0, FourierBoundary::circle(1.0)).unwrap();
    let exact = eigenbound_oracles::euclidean_ball_mu1(2, 1.0);
    let errors: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&h| fem_mu1(&mesh_star_domain(&disk, h).unwrap(), 0.0).unwrap().mu1 - exact)
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..=2.2).contains(&order), "order {order}");
    }
}

#[test]
fn unit_square_matches_separation_of_variables() {
    let cells = 64;
    let step = 1.0 / cells as f64;
    let mut vertices = Vec::new();
    let mut boundary = Vec::new();
    for i in 0..=cells {
        for j in 0..=cells {
            vertices.push([i as f64 * step, j as f64 * step]);
            boundary.push(i == 0 || j == 0 || i == cells || j == cells);
        }
    }
    let id = |i: usize, j: usize| i * (cells + 1) + j;
    let mut triangles = Vec::new();
    for i in 0..cells {
        for j in 0..cells {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let mesh = Mesh { vertices, triangles, boundary, h: step };
    let mu = fem_mu1(&mesh, 0.0).unwrap().mu1;
    assert!((mu - PI * PI).abs() < 2e-3 * PI * PI, "{mu}");
}

#[test]
fn geodesic_disks_match_shooting_solver() {
    for (kappa, radius) in [(-1.0, 1.0), (0.0, 1.0), (1.0, 1.0)] {
        let domain = ConformalDomain::geodesic_disk(kappa, radius).unwrap();
        let sigma = domain.boundary.a[0];
        let reference = shooting_mu1(kappa, radius);
        let coarse = fem_mu1(&mesh_star_domain(&domain, sigma / 50.0).unwrap(), kappa).unwrap().mu1;
        let fine = fem_mu1(&mesh_star_domain(&domain, sigma / 100.0).unwrap(), kappa).unwrap().mu1;
        assert!((coarse - reference).abs() < 0.01 * reference, "kappa {kappa}: {coarse} vs {reference}");
        assert!((fine - reference).abs() < (coarse - reference).abs());
    }
}

#[test]
fn volume_and_diameter_match_closed_forms() {
    let domain = ellipse();
    let sigma = |t: f64| domain.boundary.radius(t);
    let area = star_domain_area(-1.0, sigma, 4096);
    let diameter = star_domain_diameter(-1.0, sigma, 720);
    let coarse = mesh_star_domain(&domain, 0.04).unwrap();
    let fine = mesh_star_domain(&domain, 0.02).unwrap();
    let (vc, vf) = (domain_volume(&coarse, -1.0), domain_volume(&fine, -1.0));
    assert!(vf < area && (vf - area).abs() < (vc - area).abs());
    assert!(((4.0 * vf - vc) / 3.0 - area).abs() < 1e-5 * area);
    let d = domain_diameter(&domain, &fine).unwrap();
    assert!(d >= diameter - 1e-12 && d - diameter < 1e-6, "{d} vs {diameter}");
}

#[test]
fn ellipse_regression() {
    // Frozen from the h = 0.01 Richardson estimate.
    let report = verify_conformal(&ellipse(), 0.02, None).unwrap();
    assert!((report.mu1_domain - 2.375_661_456).abs() < 2e-6, "{}", report.mu1_domain);
    assert!(report.satisfied && report.margin > 0.3);
}

#[test]
fn center_of_mass_of_translated_flat_disk() {
    // Unit disk centered at (0.3, 0), written as a Fourier radius about the origin.
    let c = 0.3;
    let sigma = |t: f64| c * t.cos() + (1.0 - (c * t.sin()).powi(2)).sqrt();
    let samples = 256;
    let coefficient = |j: usize| {
        let sum: f64 = (0..samples)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / samples as f64;
                sigma(t) * (j as f64 * t).cos()
            })
            .sum();
        sum * if j == 0 { 1.0 } else { 2.0 } / samples as f64
    };
    let a = (0..40).map(coefficient).collect();
    let domain = ConformalDomain::new(0.0, FourierBoundary { a, b: vec![] }).unwrap();
    let mesh = mesh_star_domain(&domain, 0.03).unwrap();
    let pair = first_neumann_eigenvalue(&RadialProblem::new(0.0, 2, 1.0).unwrap(), &ShootingConfig::default()).unwrap();
    let com = center_of_mass(&domain, &mesh, &pair).unwrap();
    assert!((com.point[0] - c).abs() < 2e-3 && com.point[1].abs() < 1e-8, "{:?}", com.point);
}

#[test]
fn center_of_mass_matches_grid_search() {
    let domain = ConformalDomain::new(-1.0, FourierBoundary { a: vec![1.0, 0.3], b: vec![] }).unwrap();
    let mesh = mesh_star_domain(&domain, 0.05).unwrap();
    let pair = first_neumann_eigenvalue(&RadialProblem::new(-1.0, 2, 1.2).unwrap(), &ShootingConfig::default()).unwrap();
    let com = center_of_mass(&domain, &mesh, &pair).unwrap();
    assert!(com.residual <= 1e-8 && com.inside_hull && com.inside_domain);

    let model = domain.model();
    let norm = |p: [f64; 2]| {
        let m = mass_field(&model, &mesh, &pair, p);
        m[0].hypot(m[1])
    };
    let spacing = 0.01;
    let mut best = ([0.0, 0.0], f64::INFINITY);
    for i in 0..=60 {
        for j in -10..=10 {
            let p = [i as f64 * spacing, j as f64 * spacing];
            let v = norm(p);
            if v < best.1 {
                best = (p, v);
            }
        }
    }
    assert!((best.0[0] - com.point[0]).abs() <= spacing && (best.0[1] - com.point[1]).abs() <= spacing);
    assert!((com.point[0] - 0.3935).abs() < 1e-3, "{:?}", com.point);
}

#[test]
fn chain_with_widened_lower_curvature() {
    let domain = ConformalDomain::new(-1.0, FourierBoundary { a: vec![1.0, 0.3], b: vec![] }).unwrap();
    let mesh = mesh_star_domain(&domain, 0.04).unwrap();
    let report = proof_chain_check(&domain, &mesh, -1.0, -2.0).unwrap();
    assert!(report.holds, "{:?}", report.slacks);
    assert!(report.slacks.function > 0.4 && report.slacks.gradient > 0.1);
    assert!(report.mu1_fem <= report.rayleigh && report.rayleigh <= report.breakdown.bound_value);
}

#[test]
fn perturbed_surface_regression() {
    let surface = RevolutionSurface::new(
        Profile::Perturbed {
            curvature: -1.0,
            amplitude: 0.05,
            width: 0.6,
        },
        1.0,
    )
    .unwrap();
    // Frozen from a 2000-cell grid.
    let fine = [14.728_233_988_449_544, 2.942_858_915_483_235, 7.866_804_814_876_338];
    let spectrum = revolution_mu1(&surface, 3, 200).unwrap();
    for (value, frozen) in spectrum.modes.iter().zip(fine) {
        assert!((value - frozen).abs() < 1e-8 * frozen, "{value} vs {frozen}");
    }
    let (lo, hi) = gauss_curvature_range(&surface).unwrap();
    assert!((lo + 1.3).abs() < 1e-12 && (hi + 0.923_134_829).abs() < 1e-6, "({lo}, {hi})");
    let band = revolution_diameter(&surface, 100).unwrap();
    assert!(band.lower <= band.upper && band.upper <= 2.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn model_distance_agrees_with_point_pair_invariant(
        kappa in prop_oneof![Just(-1.0), Just(-0.3), Just(0.0), Just(0.7), Just(1.0)],
        r1 in 0.0f64..0.9, t1 in 0.0f64..6.3, r2 in 0.0f64..0.9, t2 in 0.0f64..6.3,
    ) {
        let model = ConformalModel::new(kappa);
        let scale = if kappa == 0.0 { 2.0 } else { 2.0 / f64::abs(kappa).sqrt() };
        let x = [scale * r1 * t1.cos(), scale * r1 * t1.sin()];
        let y = [scale * r2 * t2.cos(), scale * r2 * t2.sin()];
        let d = model.distance(x, y).unwrap();
        let oracle = point_pair_distance(kappa, x, y);
        prop_assert!((d - oracle).abs() <= 1e-9 * oracle.max(1.0), "{} vs {}", d, oracle);
    }

    #[test]
    fn revolution_modes_are_monotone(amplitude in -0.05f64..0.05, width in 0.3f64..1.0, kappa in -2.0f64..0.5) {
        let surface = RevolutionSurface::new(Profile::Perturbed { curvature: kappa, amplitude, width }, 1.0).unwrap();
        let modes = revolution_mu1(&surface, 3, 100).unwrap().modes;
        prop_assert!(modes[2] >= modes[1]);
    }
}
