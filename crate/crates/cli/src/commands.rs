use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use eigenbound::bound::{constant_c_with, crossover_diameter, wang_constant};
use eigenbound::spaceform::{ball_volume, SpaceFormBall};
use eigenbound::verifier::{mesh_star_domain, ConformalDomain, ScenarioSpec, VerificationReport};
use eigenbound::{first_neumann_eigenvalue, BoundBreakdown, BoundInput, RadialProblem, ShootingConfig};

use crate::error::{core_exit_code, core_kind, CliError};
use crate::format::sig10;
use crate::{SweepParam, Tolerances};

/// Solver settings echoed into every record.
#[derive(Serialize)]
struct ToleranceEcho {
    ode_tolerance: f64,
    bisection_tolerance: f64,
    grid_intervals: usize,
    start_fraction: f64,
}

fn shooting_config(tol: Tolerances) -> Result<(ShootingConfig, ToleranceEcho), CliError> {
    let config = ShootingConfig {
        ode_tolerance: tol.ode_tol,
        bisection_tolerance: tol.bisection_tol,
        grid_intervals: tol.grid,
        ..ShootingConfig::default()
    };
    config.validate()?;
    let echo = ToleranceEcho {
        ode_tolerance: config.ode_tolerance,
        bisection_tolerance: config.bisection_tolerance,
        grid_intervals: config.grid_intervals,
        start_fraction: config.start_fraction,
    };
    Ok((config, echo))
}

fn elapsed_ms(start: Instant, timing: bool) -> Option<f64> {
    timing.then(|| start.elapsed().as_secs_f64() * 1e3)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("records serialize");
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

#[derive(Serialize)]
struct Mu1Record {
    k: f64,
    n: usize,
    #[serde(rename = "R")]
    radius: f64,
    mu1: f64,
    boundary_slope: f64,
    tolerances: ToleranceEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

pub fn mu1_ball(k: f64, n: usize, radius: f64, tol: Tolerances, timing: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let (config, tolerances) = shooting_config(tol)?;
    let pair = first_neumann_eigenvalue(&RadialProblem::new(k, n, radius)?, &config)?;
    print_json(&Mu1Record {
        k,
        n,
        radius,
        mu1: pair.mu1,
        boundary_slope: pair.boundary_slope,
        tolerances,
        timing_ms: elapsed_ms(start, timing),
    })
}

#[derive(Serialize)]
struct BoundRecord {
    input: BoundInput,
    #[serde(flatten)]
    breakdown: BoundBreakdown,
    tolerances: ToleranceEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

pub fn bound(n: usize, k: f64, big_k: f64, volume: f64, diameter: f64, tol: Tolerances, timing: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let (config, tolerances) = shooting_config(tol)?;
    let input = BoundInput::new(n, k, big_k, volume, diameter)?;
    let breakdown = constant_c_with(&input, &config)?;
    print_json(&BoundRecord {
        input,
        breakdown,
        tolerances,
        timing_ms: elapsed_ms(start, timing),
    })
}

#[derive(Serialize)]
struct WangRecord {
    n: usize,
    k: f64,
    #[serde(rename = "K")]
    big_k: f64,
    d: f64,
    wang: f64,
}

pub fn wang(n: usize, k: f64, big_k: f64, diameter: f64) -> Result<(), CliError> {
    let wang = wang_constant(n, k, big_k, diameter)?;
    print_json(&WangRecord {
        n,
        k,
        big_k,
        d: diameter,
        wang,
    })
}

#[derive(Serialize)]
struct Comparison {
    d: f64,
    #[serde(rename = "C")]
    constant: f64,
    wang: f64,
}

#[derive(Serialize)]
struct CrossoverRecord {
    n: usize,
    k: f64,
    #[serde(rename = "K")]
    big_k: f64,
    volume: f64,
    dmax: f64,
    d_star: Option<f64>,
    /// C and Wang's constant at 2·d*.
    at_twice_d_star: Option<Comparison>,
    tolerances: ToleranceEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

pub fn crossover(n: usize, k: f64, big_k: f64, volume: f64, dmax: f64, tol: Tolerances, timing: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let (config, tolerances) = shooting_config(tol)?;
    let d_star = crossover_diameter(n, k, big_k, volume, dmax, &config)?;
    let at_twice_d_star = match d_star {
        Some(d) => {
            let b = constant_c_with(&BoundInput::new(n, k, big_k, volume, 2.0 * d)?, &config)?;
            Some(Comparison {
                d: 2.0 * d,
                constant: b.constant,
                wang: b.wang,
            })
        }
        None => None,
    };
    print_json(&CrossoverRecord {
        n,
        k,
        big_k,
        volume,
        dmax,
        d_star,
        at_twice_d_star,
        tolerances,
        timing_ms: elapsed_ms(start, timing),
    })
}

fn file_label(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn load_spec(path: &Path) -> Result<ScenarioSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(ScenarioSpec::from_json(&text)?)
}

/// Whether the report passes at the reported diameter and, when present,
/// at the lower end of the diameter band.
fn passes(report: &VerificationReport) -> bool {
    report.satisfied && report.lower_end.as_ref().is_none_or(|l| l.satisfied)
}

#[derive(Serialize)]
struct VerifyRecord {
    file: String,
    #[serde(flatten)]
    report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

pub fn verify(path: &Path, mesh_h: Option<f64>, dump_mesh: Option<&Path>, timing: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let spec = load_spec(path)?;
    if let Some(target) = dump_mesh {
        let ScenarioSpec::Conformal {
            curvature, fourier, ..
        } = &spec
        else {
            return Err(CliError::Usage("--dump-mesh applies to conformal domains only".into()));
        };
        let domain = ConformalDomain::new(*curvature, fourier.clone())?;
        let mesh = mesh_star_domain(&domain, mesh_h.unwrap_or(spec.mesh_h()))?;
        fs::write(target, serde_json::to_string(&mesh).expect("mesh serializes"))?;
    }
    let report = spec.verify(mesh_h)?;
    let ok = passes(&report);
    let name = report.name.clone().unwrap_or_else(|| file_label(path));
    print_json(&VerifyRecord {
        file: file_label(path),
        report,
        timing_ms: elapsed_ms(start, timing),
    })?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Violation(name))
    }
}

#[derive(Serialize)]
struct ScenarioError {
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
#[serde(untagged)]
enum ScenarioOutcome {
    Report(Box<VerifyRecord>),
    Failed { file: String, error: ScenarioError },
}

#[derive(Serialize)]
struct CorpusRecord {
    scenarios: Vec<ScenarioOutcome>,
    all_satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

pub fn corpus(dir: &Path, timing: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let entries = fs::read_dir(dir).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("no scenario files in {}", dir.display())));
    }
    let outcomes: Vec<(ScenarioOutcome, Option<i32>)> = files
        .par_iter()
        .map(|path| {
            let file = file_label(path);
            let scenario_start = Instant::now();
            match load_spec(path).and_then(|spec| Ok(spec.verify(None)?)) {
                Ok(report) => {
                    let code = (!passes(&report)).then_some(4);
                    let record = VerifyRecord {
                        file,
                        report,
                        timing_ms: elapsed_ms(scenario_start, timing),
                    };
                    (ScenarioOutcome::Report(Box::new(record)), code)
                }
                Err(err) => {
                    let (kind, code) = match &err {
                        CliError::Core(e) => (core_kind(e), core_exit_code(e)),
                        other => ("usage", other.exit_code()),
                    };
                    let error = ScenarioError {
                        kind,
                        message: err.to_string(),
                    };
                    (ScenarioOutcome::Failed { file, error }, Some(code))
                }
            }
        })
        .collect();
    let total = outcomes.len();
    let codes: Vec<i32> = outcomes.iter().filter_map(|(_, c)| *c).collect();
    let all_satisfied = codes.is_empty();
    print_json(&CorpusRecord {
        scenarios: outcomes.into_iter().map(|(o, _)| o).collect(),
        all_satisfied,
        timing_ms: elapsed_ms(start, timing),
    })?;
    match corpus_failure(&codes, total) {
        None => Ok(()),
        Some(err) => Err(err),
    }
}

/// Combines per-scenario exit codes; a violation outranks solver or input
/// failures.
fn corpus_failure(codes: &[i32], total: usize) -> Option<CliError> {
    let worst = *codes.iter().max()?;
    if codes.contains(&4) {
        let violated = codes.iter().filter(|&&c| c == 4).count();
        return Some(CliError::Violation(format!("{violated} of {total} scenarios")));
    }
    Some(CliError::Partial {
        failed: codes.len(),
        total,
        code: worst,
    })
}

pub struct SweepSpec {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub dim: usize,
    pub k: Option<f64>,
    pub big_k: Option<f64>,
    pub volume: Option<f64>,
    pub diameter: Option<f64>,
}

impl SweepSpec {
    fn name(&self) -> &'static str {
        match self.param {
            SweepParam::D => "d",
            SweepParam::V => "V",
            SweepParam::BigK => "K",
            SweepParam::K => "k",
            SweepParam::R => "R",
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(CliError::Usage(format!("need lo < hi, got {} and {}", self.lo, self.hi)));
        }
        if self.steps < 2 {
            return Err(CliError::Usage(format!("need at least 2 steps, got {}", self.steps)));
        }
        let fixed = [
            ("k", self.k, self.param == SweepParam::K),
            ("K", self.big_k, self.param == SweepParam::BigK),
            ("V", self.volume, matches!(self.param, SweepParam::V | SweepParam::R)),
            ("d", self.diameter, self.param == SweepParam::D),
        ];
        for (name, value, varying) in fixed {
            match (value.is_some(), varying) {
                (true, true) => {
                    return Err(CliError::Usage(format!("-{name} is determined by the sweep and must not be given")))
                }
                (false, false) => return Err(CliError::Usage(format!("-{name} is required for this sweep"))),
                _ => {}
            }
        }
        Ok(())
    }

    fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
        }
    }

    fn input(&self, value: f64) -> eigenbound::Result<BoundInput> {
        let pick = |p: SweepParam, fixed: Option<f64>| if self.param == p { value } else { fixed.unwrap_or(f64::NAN) };
        let k = pick(SweepParam::K, self.k);
        let big_k = pick(SweepParam::BigK, self.big_k);
        let diameter = pick(SweepParam::D, self.diameter);
        let volume = match self.param {
            SweepParam::R => ball_volume(&SpaceFormBall::new(k, self.dim, value)?)?,
            _ => pick(SweepParam::V, self.volume),
        };
        BoundInput::new(self.dim, k, big_k, volume, diameter)
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_owned()
    }
}

#[derive(Serialize)]
struct SweepSummary {
    records: usize,
    failed: usize,
    out: String,
}

pub fn sweep(spec: SweepSpec, out: Option<&Path>, tol: Tolerances) -> Result<(), CliError> {
    spec.validate()?;
    let (config, _) = shooting_config(tol)?;
    let rows: Vec<(f64, eigenbound::Result<BoundBreakdown>)> = (0..spec.steps)
        .into_par_iter()
        .map(|i| {
            let value = spec.value(i);
            (value, spec.input(value).and_then(|input| constant_c_with(&input, &config)))
        })
        .collect();
    let failed = rows.iter().filter(|(_, r)| r.is_err()).count();

    let mut text = String::from("param,value,R,R_prime,mu1_ball,ratio_R,ratio_d,C,wang,bound");
    if failed > 0 {
        text.push_str(",error");
    }
    text.push('\n');
    for (value, row) in &rows {
        let mut fields = vec![spec.name().to_owned(), sig10(*value)];
        match row {
            Ok(b) => {
                fields.extend(
                    [b.radius, b.radius_prime, b.mu1_ball, b.ratio_radius, b.ratio_diameter, b.constant, b.wang, b.bound_value]
                        .map(sig10),
                );
                if failed > 0 {
                    fields.push(String::new());
                }
            }
            Err(e) => {
                fields.extend(std::iter::repeat_n(String::new(), 8));
                fields.push(csv_field(&e.to_string()));
            }
        }
        text.push_str(&fields.join(","));
        text.push('\n');
    }

    match out {
        Some(path) => {
            fs::write(path, &text)?;
            print_json(&SweepSummary {
                records: rows.len(),
                failed,
                out: path.display().to_string(),
            })?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    if failed > 0 {
        Err(CliError::Partial {
            failed,
            total: rows.len(),
            code: 3,
        })
    } else {
        Ok(())
    }
}
