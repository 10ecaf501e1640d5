//! The curvature-comparison upper bound μ₁(Ω) ≤ C·μ₁(B_k(R)) and Wang's
//! earlier constant (sin_K(d)/sin_k(d))^{2n-2}.
//!
//! Inputs are the dimension n, the sectional upper bound k, the Ricci lower
//! bound K (divided by n-1), the domain volume V and its diameter d. R and
//! R' are the radii of balls of volume V in 𝕄_k and 𝕄_K, and
//!
//! ```text
//! C = (sin_K(R)/sin_k(R))^{n-1} · (sin_K(d)/sin_k(d))^{n-1}
//!     · ∫₀^R f² sin_k^{n-1} dr / ∫₀^{R'} f² sin_K^{n-1} dr
//! ```
//!
//! with f the radial eigenfunction of B_k(R).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::quad;
use crate::radial::{first_neumann_eigenvalue, RadialEigenpair, RadialProblem, ShootingConfig};
use crate::spaceform::{radius_from_volume, sin_m, sin_ratio, space_form_volume, Curvature};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInput {
    pub dim: usize,
    /// Sectional curvature upper bound.
    pub k: Curvature,
    /// Ricci lower bound divided by n - 1.
    #[serde(rename = "K")]
    pub big_k: Curvature,
    pub volume: f64,
    pub diameter: f64,
}

impl BoundInput {
    pub fn new(dim: usize, k: f64, big_k: f64, volume: f64, diameter: f64) -> Result<Self> {
        let input = Self {
            dim,
            k: Curvature(k),
            big_k: Curvature(big_k),
            volume,
            diameter,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidInput(format!("dimension must be at least 2, got {}", self.dim)));
        }
        if !self.k.0.is_finite() || !self.big_k.0.is_finite() {
            return Err(Error::InvalidInput("curvature bounds must be finite".into()));
        }
        if self.big_k.0 > self.k.0 {
            return Err(Error::Regime(format!(
                "need K <= k, got K = {} and k = {}",
                self.big_k.0, self.k.0
            )));
        }
        if !(self.volume > 0.0 && self.volume.is_finite()) {
            return Err(Error::InvalidInput(format!("volume must be positive, got {}", self.volume)));
        }
        if !(self.diameter > 0.0 && self.diameter.is_finite()) {
            return Err(Error::InvalidInput(format!("diameter must be positive, got {}", self.diameter)));
        }
        Ok(())
    }
}

/// Outcome of a single size condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    NotApplicable,
    Satisfied,
    Violated,
}

impl Check {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Satisfied
        } else {
            Check::Violated
        }
    }

    pub fn is_violated(self) -> bool {
        self == Check::Violated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// Size conditions apply only when k > 0.
    pub requires_size_conditions: bool,
    /// d < min(π/(2√k), injectivity radius).
    pub cond_a: Check,
    /// vol(hull Ω) ≤ vol(𝕄_k)/2, tested with V in place of the hull volume.
    pub cond_b: Check,
    pub cond_b_uses_volume_proxy: bool,
    #[serde(rename = "K_le_k")]
    pub big_k_le_k: bool,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.big_k_le_k && !self.cond_a.is_violated() && !self.cond_b.is_violated()
    }
}

/// Checks the size conditions needed when k > 0.
///
/// Condition (B) is tested against V; since V ≤ vol(hull Ω) a violation
/// here is a genuine violation, while a pass is only a necessary condition.
pub fn validate_assumptions(
    dim: usize,
    k: f64,
    big_k: f64,
    volume: f64,
    diameter: f64,
    injectivity_radius: Option<f64>,
) -> AssumptionReport {
    let big_k_le_k = big_k <= k;
    if k <= 0.0 {
        return AssumptionReport {
            requires_size_conditions: false,
            cond_a: Check::NotApplicable,
            cond_b: Check::NotApplicable,
            cond_b_uses_volume_proxy: false,
            big_k_le_k,
        };
    }
    let limit = FRAC_PI_2 / k.sqrt();
    let limit = injectivity_radius.map_or(limit, |inj| limit.min(inj));
    let cond_a = Check::from_bool(diameter < limit);
    let cond_b = match space_form_volume(Curvature(k), dim) {
        Ok(Some(total)) => Check::from_bool(volume <= total / 2.0),
        _ => Check::Violated,
    };
    AssumptionReport {
        requires_size_conditions: true,
        cond_a,
        cond_b,
        cond_b_uses_volume_proxy: true,
        big_k_le_k,
    }
}

/// Radii (R, R') of the balls of volume V in 𝕄_k and 𝕄_K.
pub fn matched_radii(dim: usize, k: f64, big_k: f64, volume: f64) -> Result<(f64, f64)> {
    if big_k > k {
        return Err(Error::Regime(format!("need K <= k, got K = {big_k} and k = {k}")));
    }
    let radius = radius_from_volume(k, dim, volume)?;
    let radius_prime = if big_k == k {
        radius
    } else {
        radius_from_volume(big_k, dim, volume)?
    };
    Ok((radius, radius_prime))
}

fn check_diameter(k: f64, diameter: f64) -> Result<()> {
    if !(diameter > 0.0 && diameter.is_finite()) {
        return Err(Error::InvalidInput(format!("diameter must be positive, got {diameter}")));
    }
    if k > 0.0 && diameter >= FRAC_PI_2 / k.sqrt() {
        return Err(Error::Domain(format!(
            "diameter {diameter} must be below pi/(2 sqrt(k)) = {} when k > 0",
            FRAC_PI_2 / k.sqrt()
        )));
    }
    Ok(())
}

/// Wang's constant (sin_K(d)/sin_k(d))^{2n-2}.
pub fn wang_constant(dim: usize, k: f64, big_k: f64, diameter: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!("dimension must be at least 2, got {dim}")));
    }
    check_diameter(k, diameter)?;
    Ok(sin_ratio(big_k, k, diameter)?.powi(2 * dim as i32 - 2))
}

/// Every ingredient of the bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundBreakdown {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "R_prime")]
    pub radius_prime: f64,
    pub mu1_ball: f64,
    /// (sin_K(R)/sin_k(R))^{n-1}
    #[serde(rename = "ratio_R")]
    pub ratio_radius: f64,
    /// (sin_K(d)/sin_k(d))^{n-1}
    #[serde(rename = "ratio_d")]
    pub ratio_diameter: f64,
    /// ∫₀^R f² sin_k^{n-1} dr
    pub integral_num: f64,
    /// ∫₀^{R'} f² sin_K^{n-1} dr
    pub integral_den: f64,
    #[serde(rename = "C")]
    pub constant: f64,
    pub wang: f64,
    #[serde(rename = "bound")]
    pub bound_value: f64,
    pub assumptions: AssumptionReport,
}

/// ∫₀^upper f(r)² sin_m(r)^{n-1} dr by five-point Gauss on the eigenpair grid.
pub fn weighted_f_squared(pair: &RadialEigenpair, m: Curvature, upper: f64) -> Result<f64> {
    sin_m(m, upper)?;
    let power = (pair.problem.dim - 1) as i32;
    let mut breakpoints: Vec<f64> = pair.grid.iter().copied().take_while(|&g| g < upper).collect();
    breakpoints.push(upper);
    Ok(quad::composite_gauss(
        |r| pair.eval_f(r).powi(2) * sin_m(m, r).map(|s| s.powi(power)).unwrap_or(f64::NAN),
        &breakpoints,
    ))
}

/// Assembles the breakdown from an already solved eigenpair of B_k(R).
pub fn breakdown_with_pair(input: &BoundInput, radius_prime: f64, pair: &RadialEigenpair) -> Result<BoundBreakdown> {
    input.validate()?;
    let power = input.dim as i32 - 1;
    let radius = pair.problem.radius;
    let (k, big_k) = (input.k, input.big_k);
    check_diameter(k.0, input.diameter)?;
    let ratio_radius = sin_ratio(big_k, k, radius)?.powi(power);
    let ratio_diameter = sin_ratio(big_k, k, input.diameter)?.powi(power);
    let integral_num = weighted_f_squared(pair, k, radius)?;
    let integral_den = weighted_f_squared(pair, big_k, radius_prime)?;
    let constant = ratio_radius * ratio_diameter * integral_num / integral_den;
    let wang = ratio_diameter * ratio_diameter;
    Ok(BoundBreakdown {
        radius,
        radius_prime,
        mu1_ball: pair.mu1,
        ratio_radius,
        ratio_diameter,
        integral_num,
        integral_den,
        constant,
        wang,
        bound_value: constant * pair.mu1,
        assumptions: validate_assumptions(input.dim, k.0, big_k.0, input.volume, input.diameter, None),
    })
}

/// Solves the ball problem and returns the eigenpair with R'.
pub fn solve_ball(input: &BoundInput, config: &ShootingConfig) -> Result<(RadialEigenpair, f64)> {
    input.validate()?;
    let (radius, radius_prime) = matched_radii(input.dim, input.k.0, input.big_k.0, input.volume)?;
    let pair = first_neumann_eigenvalue(&RadialProblem::new(input.k, input.dim, radius)?, config)?;
    Ok((pair, radius_prime))
}

pub fn constant_c_with(input: &BoundInput, config: &ShootingConfig) -> Result<BoundBreakdown> {
    let (pair, radius_prime) = solve_ball(input, config)?;
    breakdown_with_pair(input, radius_prime, &pair)
}

/// The constant C and all its ingredients, with default solver settings.
pub fn constant_c(input: &BoundInput) -> Result<BoundBreakdown> {
    constant_c_with(input, &ShootingConfig::default())
}

/// C·μ₁(B_k(R)).
pub fn neumann_upper_bound(input: &BoundInput) -> Result<f64> {
    Ok(constant_c(input)?.bound_value)
}

/// Width of the final bracket in [`crossover_diameter`].
pub const CROSSOVER_TOLERANCE: f64 = 1e-8;

/// Smallest d* ≤ d_max at which C(d) equals Wang's constant, for K < k < 0.
///
/// Only the diameter factor depends on d, so C(d) - Wang(d) = s(A - s) with
/// s = (sin_K(d)/sin_k(d))^{n-1} increasing from 1; there is at most one
/// crossing and `None` means C < Wang already or no crossing before d_max.
pub fn crossover_diameter(
    dim: usize,
    k: f64,
    big_k: f64,
    volume: f64,
    d_max: f64,
    config: &ShootingConfig,
) -> Result<Option<f64>> {
    if !(big_k < k && k < 0.0) {
        return Err(Error::Regime(format!(
            "crossover needs K < k < 0, got K = {big_k} and k = {k}"
        )));
    }
    if !(d_max > 0.0 && d_max.is_finite()) {
        return Err(Error::InvalidInput(format!("d_max must be positive, got {d_max}")));
    }
    let input = BoundInput::new(dim, k, big_k, volume, d_max)?;
    let (pair, radius_prime) = solve_ball(&input, config)?;
    let at = |d: f64| -> Result<f64> {
        let b = breakdown_with_pair(&BoundInput { diameter: d, ..input }, radius_prime, &pair)?;
        Ok(b.constant - b.wang)
    };
    let mut hi = d_max;
    if at(hi)? >= 0.0 {
        return Ok(None);
    }
    let mut lo = CROSSOVER_TOLERANCE;
    if at(lo)? <= 0.0 {
        return Ok(None);
    }
    while hi - lo > CROSSOVER_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(hi))
}
