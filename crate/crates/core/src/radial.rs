//! First Neumann eigenvalue of a geodesic ball by shooting on the radial
//! equation
//!
//! ```text
//! -F'' - (n-1) cos_k/sin_k F' + (n-1)/sin_k² F = mu F,   F(0) = 0, F'(R) = 0.
//! ```
//!
//! The origin is a regular singular point. Integration starts at a small
//! r₀ from the regular series F = r + c₃r³, and μ₁ is the first value at
//! which the miss F'(R) changes sign while F stays positive on (0, R].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::interp::Hermite;
use crate::numeric::ode::DormandPrince;
use crate::numeric::roots;
use crate::spaceform::{cos_m, sin_m, Curvature, SpaceFormBall};

/// The radial eigenproblem on B_k(R) in dimension n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub curvature: Curvature,
    pub dim: usize,
    pub radius: f64,
}

impl RadialProblem {
    pub fn new(curvature: impl Into<Curvature>, dim: usize, radius: f64) -> Result<Self> {
        let ball = SpaceFormBall::new(curvature, dim, radius)?;
        Ok(Self {
            curvature: ball.curvature,
            dim,
            radius,
        })
    }

    fn rhs(&self, mu: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
        let nm1 = (self.dim - 1) as f64;
        move |r, y| {
            let s = sin_m(self.curvature, r).unwrap_or(f64::NAN);
            let c = cos_m(self.curvature, r).unwrap_or(f64::NAN);
            [y[1], -nm1 * c / s * y[1] + (nm1 / (s * s) - mu) * y[0]]
        }
    }

    /// Cubic coefficient of the regular solution F = r + c₃ r³ + O(r⁵).
    pub fn series_cubic_coefficient(&self, mu: f64) -> f64 {
        let n = self.dim as f64;
        (2.0 * self.curvature.0 * (n - 1.0) / 3.0 - mu) / (2.0 * (n + 2.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// r₀ = start_fraction · R.
    pub start_fraction: f64,
    /// Relative (and absolute) tolerance of the Runge–Kutta integrator.
    pub ode_tolerance: f64,
    /// Final width of the eigenvalue bracket, relative to max(1, μ).
    pub bisection_tolerance: f64,
    pub mu_lo: f64,
    /// Initial upper end of the search; `None` picks max(50, 4·Euclidean estimate).
    pub mu_hi: Option<f64>,
    /// Number of intervals of the uniform sample grid on [0, R].
    pub grid_intervals: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            start_fraction: 1e-6,
            ode_tolerance: 1e-12,
            bisection_tolerance: 1e-12,
            mu_lo: 1e-8,
            mu_hi: None,
            grid_intervals: 512,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.start_fraction > 0.0 && self.start_fraction <= 1e-4) {
            return Err(Error::InvalidInput(format!(
                "start_fraction must lie in (0, 1e-4], got {}",
                self.start_fraction
            )));
        }
        if !(self.ode_tolerance > 0.0 && self.bisection_tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if !(self.mu_lo > 0.0) || self.mu_hi.is_some_and(|hi| !(hi > self.mu_lo)) {
            return Err(Error::InvalidInput("eigenvalue bracket must satisfy 0 < mu_lo < mu_hi".into()));
        }
        if self.grid_intervals < 8 {
            return Err(Error::InvalidInput("grid needs at least 8 intervals".into()));
        }
        Ok(())
    }
}

struct Shot {
    /// F(R) and F'(R) with F'(0) = 1.
    end: [f64; 2],
    /// Sign changes of F observed on (r₀, R].
    zeros: usize,
    samples: Vec<[f64; 2]>,
}

fn integrate(problem: &RadialProblem, mu: f64, config: &ShootingConfig, grid: &[f64]) -> Result<Shot> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidInput(format!("mu must be positive, got {mu}")));
    }
    let r0 = config.start_fraction * problem.radius;
    let c3 = problem.series_cubic_coefficient(mu);
    let mut y = [r0 + c3 * r0.powi(3), 1.0 + 3.0 * c3 * r0 * r0];
    let solver = DormandPrince::new(config.ode_tolerance, config.ode_tolerance * 1e-3 * r0);
    let rhs = problem.rhs(mu);
    let mut zeros = 0;
    let mut sign = y[0].signum();
    let mut samples = Vec::with_capacity(grid.len());
    let mut t = r0;
    let mut h = r0;
    let mut stops: Vec<f64> = grid.iter().copied().filter(|&g| g > r0).collect();
    if stops.last() != Some(&problem.radius) {
        stops.push(problem.radius);
    }
    for stop in stops {
        let (y_next, h_next) = solver.integrate(&rhs, t, y, stop, h, |_, state| {
            let s = state[0].signum();
            if s != sign && state[0] != 0.0 {
                zeros += 1;
                sign = s;
            }
        })?;
        y = y_next;
        h = h_next;
        t = stop;
        samples.push(y);
    }
    Ok(Shot {
        end: y,
        zeros,
        samples,
    })
}

/// Miss function F'(R) of the regular solution normalized by F'(0) = 1.
pub fn shoot(problem: &RadialProblem, mu: f64, config: &ShootingConfig) -> Result<f64> {
    config.validate()?;
    Ok(integrate(problem, mu, config, &[])?.end[1])
}

/// First eigenvalue μ₁(B_k(R)) and the radial eigenfunction f, normalized so
/// that f(R) = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialEigenpair {
    pub problem: RadialProblem,
    pub mu1: f64,
    pub grid: Vec<f64>,
    pub f_values: Vec<f64>,
    pub f_prime_values: Vec<f64>,
    /// |f'(R)| after normalization.
    pub boundary_slope: f64,
}

impl RadialEigenpair {
    /// f(r), extended by the constant f(R) beyond the ball (the function h).
    pub fn eval_f(&self, r: f64) -> f64 {
        if r >= self.problem.radius {
            return *self.f_values.last().unwrap();
        }
        self.hermite().eval(r.max(0.0)).0
    }

    /// Derivative of [`RadialEigenpair::eval_f`]; zero for r ≥ R.
    pub fn eval_f_prime(&self, r: f64) -> f64 {
        if r >= self.problem.radius {
            return 0.0;
        }
        self.hermite().eval(r.max(0.0)).1
    }

    fn hermite(&self) -> Hermite<'_> {
        Hermite {
            grid: &self.grid,
            values: &self.f_values,
            slopes: &self.f_prime_values,
        }
    }

    /// Copy with the eigenfunction multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.f_values.iter_mut().for_each(|v| *v *= factor);
        out.f_prime_values.iter_mut().for_each(|v| *v *= factor);
        out.boundary_slope *= factor.abs();
        out
    }

    /// G(r) = f'(r)² + (n-1) f(r)²/sin_k(r)², with its limit n·f'(0)² at 0.
    pub fn gradient_density(&self, r: f64) -> f64 {
        let nm1 = (self.problem.dim - 1) as f64;
        if r == 0.0 {
            return (nm1 + 1.0) * self.f_prime_values[0].powi(2);
        }
        let s = sin_m(self.problem.curvature, r).unwrap_or(f64::NAN);
        self.eval_f_prime(r).powi(2) + nm1 * (self.eval_f(r) / s).powi(2)
    }
}

fn euclidean_estimate(n: usize, radius: f64) -> f64 {
    (n as f64 + 1.4) / (radius * radius)
}

/// Solves for μ₁ of the radial problem.
///
/// The predicate "F'(R) > 0 and F has no zero in (0, R]" holds exactly for
/// μ < μ₁; it is bisected until the bracket is tight enough that the miss
/// changes sign once, and a regula falsi finish refines μ₁.
pub fn first_neumann_eigenvalue(problem: &RadialProblem, config: &ShootingConfig) -> Result<RadialEigenpair> {
    config.validate()?;
    let below = |mu: f64| -> Result<(bool, Shot)> {
        let shot = integrate(problem, mu, config, &[])?;
        Ok((shot.zeros == 0 && shot.end[1] > 0.0, shot))
    };

    let mut lo = config.mu_lo;
    let (lo_ok, _) = below(lo)?;
    if !lo_ok {
        return Err(Error::InvalidInput(format!("mu_lo = {lo} is already above the first eigenvalue")));
    }
    let mut hi = config
        .mu_hi
        .unwrap_or_else(|| 50f64.max(4.0 * euclidean_estimate(problem.dim, problem.radius)));
    let cap = hi * 2f64.powi(20);
    let mut hi_shot = loop {
        let (ok, shot) = below(hi)?;
        if !ok {
            break shot;
        }
        lo = hi;
        hi *= 2.0;
        if hi > cap {
            return Err(Error::BracketExhausted { mu_hi: hi / 2.0 });
        }
    };
    // Narrow until the upper end sits between μ₁ and the first Dirichlet value.
    while hi_shot.zeros > 0 || hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        let (ok, shot) = below(mid)?;
        if ok {
            lo = mid;
        } else {
            hi = mid;
            hi_shot = shot;
        }
    }
    let miss = |mu: f64| integrate(problem, mu, config, &[]).map(|s| s.end[1]);
    let f_lo = miss(lo)?;
    let mu1 = roots::bracketed_root(
        miss,
        lo,
        hi,
        f_lo,
        hi_shot.end[1],
        config.bisection_tolerance * hi.max(1.0),
    )?;

    let intervals = config.grid_intervals;
    let grid: Vec<f64> = (0..=intervals)
        .map(|i| problem.radius * i as f64 / intervals as f64)
        .collect();
    let shot = integrate(problem, mu1, config, &grid[1..])?;
    if shot.zeros > 0 {
        return Err(Error::NoConvergence {
            what: "first-mode certification",
            iterations: 0,
            change: mu1,
            residual: shot.zeros as f64,
        });
    }
    let scale = shot.end[0];
    let mut f_values = vec![0.0];
    let mut f_prime_values = vec![1.0 / scale];
    for s in &shot.samples {
        f_values.push(s[0] / scale);
        f_prime_values.push(s[1] / scale);
    }
    *f_values.last_mut().unwrap() = 1.0;
    Ok(RadialEigenpair {
        problem: *problem,
        mu1,
        grid,
        boundary_slope: (shot.end[1] / scale).abs(),
        f_values,
        f_prime_values,
    })
}

/// Extremes of the grid increments of f and of G.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub min_f_increment: f64,
    pub max_g_increment: f64,
    /// Absolute slacks used for the two verdicts.
    pub f_slack: f64,
    pub g_slack: f64,
    pub f_increasing: bool,
    pub g_decreasing: bool,
}

/// Checks that f is nondecreasing and G nonincreasing on the sample grid,
/// with slack 1e-9 relative to max |f| and max G respectively.
pub fn monotonicity_report(pair: &RadialEigenpair) -> MonotonicityReport {
    const SLACK: f64 = 1e-9;
    let g: Vec<f64> = pair.grid.iter().map(|&r| pair.gradient_density(r)).collect();
    let min_f_increment = pair
        .f_values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let max_g_increment = g.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    let f_slack = SLACK * pair.f_values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let g_slack = SLACK * g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    MonotonicityReport {
        min_f_increment,
        max_g_increment,
        f_slack,
        g_slack,
        f_increasing: min_f_increment >= -f_slack,
        g_decreasing: max_g_increment <= g_slack,
    }
}
