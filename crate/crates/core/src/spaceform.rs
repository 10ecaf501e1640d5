//! Closed-form geometry of the simply connected space forms 𝕄_m.
//!
//! Everything is expressed through the generalized sine `sin_m` and its
//! derivative `cos_m`; a geodesic ball of radius R in 𝕄_m has volume
//! `ω_{n-1} ∫₀^R sin_m(r)^{n-1} dr`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{quad, roots};

/// Below this value of |m|·r² the trigonometric forms are replaced by
/// their Taylor series.
const SERIES_THRESHOLD: f64 = 1e-6;

/// Sectional curvature of a space form, in 1/length².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Curvature(pub f64);

impl Curvature {
    pub const FLAT: Curvature = Curvature(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    /// Distance to the antipodal point for m > 0, `None` otherwise.
    pub fn antipodal_distance(self) -> Option<f64> {
        (self.0 > 0.0).then(|| PI / self.0.sqrt())
    }

    fn check(self) -> Result<f64> {
        if self.0.is_finite() {
            Ok(self.0)
        } else {
            Err(Error::InvalidInput(format!("curvature must be finite, got {}", self.0)))
        }
    }

    fn check_radius(self, r: f64) -> Result<f64> {
        let m = self.check()?;
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius must be finite and non-negative, got {r}")));
        }
        if let Some(limit) = self.antipodal_distance() {
            if r > limit * (1.0 + 4.0 * f64::EPSILON) {
                return Err(Error::Domain(format!(
                    "r = {r} exceeds pi/sqrt(m) = {limit} for curvature {m}"
                )));
            }
        }
        Ok(m)
    }
}

impl From<f64> for Curvature {
    fn from(value: f64) -> Self {
        Curvature(value)
    }
}

/// Generalized sine: sin(√m r)/√m, r, or sinh(√-m r)/√-m.
pub fn sin_m(m: Curvature, r: f64) -> Result<f64> {
    let m = m.check_radius(r)?;
    let x = m * r * r;
    Ok(if x.abs() < SERIES_THRESHOLD {
        // r · Σ_j (-x)^j / (2j+1)!
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..6 {
            term *= -x / ((2 * j) as f64 * (2 * j + 1) as f64);
            sum += term;
        }
        r * sum
    } else if m > 0.0 {
        let s = m.sqrt();
        (s * r).sin() / s
    } else {
        let s = (-m).sqrt();
        (s * r).sinh() / s
    })
}

/// Derivative of [`sin_m`] in r; satisfies cos_m² + m·sin_m² = 1.
pub fn cos_m(m: Curvature, r: f64) -> Result<f64> {
    let m = m.check_radius(r)?;
    let x = m * r * r;
    Ok(if x.abs() < SERIES_THRESHOLD {
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..6 {
            term *= -x / ((2 * j - 1) as f64 * (2 * j) as f64);
            sum += term;
        }
        sum
    } else if m > 0.0 {
        (m.sqrt() * r).cos()
    } else {
        ((-m).sqrt() * r).cosh()
    })
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// Γ(n/2) for integer n ≥ 1.
fn gamma_half(n: usize) -> f64 {
    let (mut value, mut x) = if n % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while x < n as f64 / 2.0 - 0.25 {
        value *= x;
        x += 1.0;
    }
    value
}

/// Area ω_{n-1} = 2π^{n/2}/Γ(n/2) of the unit sphere in ℝⁿ.
pub fn unit_sphere_area(n: usize) -> Result<f64> {
    check_dim(n)?;
    Ok(2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n))
}

/// Geodesic ball B_m(R) in the n-dimensional space form of curvature m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceFormBall {
    pub curvature: Curvature,
    pub dim: usize,
    pub radius: f64,
}

impl SpaceFormBall {
    pub fn new(curvature: impl Into<Curvature>, dim: usize, radius: f64) -> Result<Self> {
        let curvature = curvature.into();
        curvature.check()?;
        check_dim(dim)?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("ball radius must be positive, got {radius}")));
        }
        if let Some(limit) = curvature.antipodal_distance() {
            if radius >= limit {
                return Err(Error::Domain(format!(
                    "ball radius {radius} must be below pi/sqrt(m) = {limit}"
                )));
            }
        }
        Ok(Self {
            curvature,
            dim,
            radius,
        })
    }

    pub fn volume(&self) -> Result<f64> {
        ball_volume(self)
    }
}

/// ∫₀^R sin_m(r)^{n-1} dr; the radial part of a ball volume.
pub(crate) fn radial_volume_integral(m: Curvature, n: usize, radius: f64) -> Result<f64> {
    m.check_radius(radius)?;
    let power = (n - 1) as i32;
    let integrand = |r: f64| sin_m(m, r).map(|s| s.powi(power)).unwrap_or(f64::NAN);
    let result = quad::integrate(integrand, 0.0, radius, 1e-12, 1e-14);
    if result.value.is_finite() {
        Ok(result.value)
    } else {
        Err(Error::Domain(format!("volume integral diverged at radius {radius}")))
    }
}

/// Volume of B_m(R) by adaptive Gauss–Kronrod quadrature of the density.
pub fn ball_volume(ball: &SpaceFormBall) -> Result<f64> {
    let radial = radial_volume_integral(ball.curvature, ball.dim, ball.radius)?;
    Ok(unit_sphere_area(ball.dim)? * radial)
}

/// Total volume of 𝕄_m for m > 0 (the round sphere), `None` otherwise.
pub fn space_form_volume(m: Curvature, n: usize) -> Result<Option<f64>> {
    check_dim(n)?;
    match m.antipodal_distance() {
        Some(limit) => Ok(Some(unit_sphere_area(n)? * radial_volume_integral(m, n, limit)?)),
        None => Ok(None),
    }
}

/// Radius R with vol(B_m(R)) = V.
///
/// Bracketed root finding on the strictly increasing volume function; the
/// Euclidean radius bounds the answer from the appropriate side.
pub fn radius_from_volume(m: impl Into<Curvature>, n: usize, volume: f64) -> Result<f64> {
    let m = m.into();
    m.check()?;
    check_dim(n)?;
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::InvalidInput(format!("volume must be positive and finite, got {volume}")));
    }
    let omega = unit_sphere_area(n)?;
    let euclidean = (volume * n as f64 / omega).powf(1.0 / n as f64);
    if m.0 == 0.0 {
        return Ok(euclidean);
    }
    let excess = |r: f64| -> Result<f64> { Ok(omega * radial_volume_integral(m, n, r)? - volume) };
    let (lo, hi) = match m.antipodal_distance() {
        Some(limit) => {
            let total = omega * radial_volume_integral(m, n, limit)?;
            if volume >= total {
                return Err(Error::InfeasibleVolume {
                    volume,
                    curvature: m.0,
                    dim: n,
                    total,
                });
            }
            (euclidean.min(limit), limit * (1.0 - 1e-14))
        }
        None => (0.0, euclidean),
    };
    let (f_lo, f_hi) = (excess(lo)?, excess(hi)?);
    if f_lo >= 0.0 {
        return Ok(lo);
    }
    if f_hi <= 0.0 {
        return Ok(hi);
    }
    roots::bracketed_root(excess, lo, hi, f_lo, f_hi, 1e-15 * hi)
}

/// sin_K(r)/sin_k(r) for K ≤ k; equals 1 at r = 0 and is nondecreasing in r.
pub fn sin_ratio(big_k: impl Into<Curvature>, k: impl Into<Curvature>, r: f64) -> Result<f64> {
    let (big_k, k) = (big_k.into(), k.into());
    big_k.check()?;
    k.check()?;
    if big_k.0 > k.0 {
        return Err(Error::Regime(format!(
            "sin ratio needs K <= k, got K = {} and k = {}",
            big_k.0, k.0
        )));
    }
    if r == 0.0 || big_k == k {
        k.check_radius(r)?;
        return Ok(1.0);
    }
    let denominator = sin_m(k, r)?;
    if denominator <= 0.0 {
        return Err(Error::Domain(format!("sin_k vanishes at r = {r} for k = {}", k.0)));
    }
    Ok(sin_m(big_k, r)? / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn sin_m_cases() {
        assert_eq!(sin_m(Curvature(0.0), 1.7).unwrap(), 1.7);
        assert!(close(sin_m(Curvature(1.0), PI / 2.0).unwrap(), 1.0, 1e-15));
        // sinh(1) by its power series
        let series: f64 = (0..20).map(|j| 1.0 / (1..=2 * j + 1).map(|i| i as f64).product::<f64>()).sum();
        assert!(close(sin_m(Curvature(-1.0), 1.0).unwrap(), series, 1e-15));
    }

    #[test]
    fn cos_m_cases() {
        assert_eq!(cos_m(Curvature(0.0), 3.0).unwrap(), 1.0);
        assert!(cos_m(Curvature(1.0), PI / 2.0).unwrap().abs() < 1e-15);
        let cosh1: f64 = (0..20).map(|j| 1.0 / (1..=2 * j).map(|i| i as f64).product::<f64>()).sum();
        assert!(close(cos_m(Curvature(-4.0), 0.5).unwrap(), cosh1, 1e-15));
    }

    #[test]
    fn series_branch_is_continuous() {
        for &m in &[1e-12, -1e-12, 1e-7, -1e-7] {
            let r = 2.0;
            let x = (m as f64).abs().sqrt() * r;
            let exact = if m > 0.0 { x.sin() } else { x.sinh() } / (m as f64).abs().sqrt();
            assert!(close(sin_m(Curvature(m), r).unwrap(), exact, 1e-12));
        }
    }

    #[test]
    fn sin_m_rejects_beyond_antipode() {
        assert!(matches!(sin_m(Curvature(1.0), 3.2), Err(Error::Domain(_))));
        assert!(sin_m(Curvature(1.0), PI).is_ok());
        assert!(sin_m(Curvature(0.0), -1.0).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert!(close(unit_sphere_area(2).unwrap(), 2.0 * PI, 1e-15));
        assert!(close(unit_sphere_area(3).unwrap(), 4.0 * PI, 1e-15));
        assert!(close(unit_sphere_area(4).unwrap(), 2.0 * PI * PI, 1e-15));
        assert!(close(unit_sphere_area(5).unwrap(), 8.0 * PI * PI / 3.0, 1e-15));
        assert!(unit_sphere_area(1).is_err());
    }

    #[test]
    fn ball_volumes() {
        let v = |m: f64, n, r| SpaceFormBall::new(m, n, r).unwrap().volume().unwrap();
        assert!(close(v(0.0, 2, 1.0), PI, 1e-14));
        assert!(close(v(1.0, 2, PI / 2.0), 2.0 * PI, 1e-14));
        assert!(close(v(-1.0, 2, 1.0), 2.0 * PI * (1f64.cosh() - 1.0), 1e-14));
        assert!(close(v(0.0, 3, 2.0), 32.0 * PI / 3.0, 1e-14));
    }

    #[test]
    fn ball_invariants() {
        assert!(SpaceFormBall::new(1.0, 2, PI).is_err());
        assert!(SpaceFormBall::new(0.0, 1, 1.0).is_err());
        assert!(SpaceFormBall::new(0.0, 2, 0.0).is_err());
    }

    #[test]
    fn radius_inversion_examples() {
        assert!(close(radius_from_volume(0.0, 2, PI).unwrap(), 1.0, 1e-15));
        assert!(close(radius_from_volume(1.0, 2, 2.0 * PI).unwrap(), PI / 2.0, 1e-13));
        assert!(close(radius_from_volume(-1.0, 2, PI).unwrap(), 1.5f64.acosh(), 1e-13));
    }

    #[test]
    fn infeasible_volume_on_sphere() {
        let err = radius_from_volume(1.0, 2, 4.0 * PI).unwrap_err();
        assert!(matches!(err, Error::InfeasibleVolume { .. }));
        assert!(radius_from_volume(0.0, 2, -1.0).is_err());
    }

    #[test]
    fn sin_ratio_examples() {
        assert_eq!(sin_ratio(-2.0, -2.0, 1.3).unwrap(), 1.0);
        assert!(close(sin_ratio(-4.0, -1.0, 2.0).unwrap(), 2f64.cosh(), 1e-14));
        assert!(close(sin_ratio(-1.0, 0.0, 1.0).unwrap(), 1f64.sinh(), 1e-15));
        assert_eq!(sin_ratio(-1.0, 1.0, 0.0).unwrap(), 1.0);
        assert!(matches!(sin_ratio(1.0, 0.0, 1.0), Err(Error::Regime(_))));
    }
}
