//! End-to-end check μ₁(Ω) ≤ C·μ₁(B_k(R)) on a measured domain.

use serde::{Deserialize, Serialize};

use super::domain::ConformalDomain;
use super::fem::{domain_diameter, domain_volume, fem_mu1};
use super::mesh::mesh_star_domain;
use super::revolution::{
    gauss_curvature_range, mode_eigenvalue, revolution_diameter, revolution_mu1, DiameterBand, RevolutionSurface,
};
use crate::bound::{breakdown_with_pair, solve_ball, BoundBreakdown, BoundInput};
use crate::error::{Error, Result};
use crate::radial::ShootingConfig;

/// Relative slack allowed before μ₁ above the bound counts as a violation.
pub const REPORTING_TOLERANCE: f64 = 1e-3;

/// Measurements at one mesh size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub h: f64,
    pub nodes: usize,
    pub mu1: f64,
    pub volume: f64,
    pub diameter: f64,
    /// Bound evaluated with this level's own (V, d).
    pub bound: f64,
    /// (bound − mu1)/bound at this level.
    pub margin: f64,
}

/// The check repeated at the lower end of a diameter band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub diameter: f64,
    pub bound: f64,
    pub margin: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub k: f64,
    #[serde(rename = "K")]
    pub big_k: f64,
    pub mesh_size: f64,
    pub levels: Vec<Level>,
    /// Richardson-extrapolated μ₁(Ω).
    pub mu1_domain: f64,
    pub volume: f64,
    pub diameter: f64,
    pub breakdown: BoundBreakdown,
    pub satisfied: bool,
    /// (bound − μ₁)/bound
    pub margin: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter_band: Option<DiameterBand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_end: Option<EndpointCheck>,
    /// First eigenvalue of each Fourier mode (surfaces of revolution).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<f64>>,
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

fn margin(bound: f64, mu: f64) -> f64 {
    (bound - mu) / bound
}

fn is_satisfied(bound: f64, mu: f64) -> bool {
    mu <= bound * (1.0 + REPORTING_TOLERANCE)
}

fn bound_for(k: f64, big_k: f64, volume: f64, diameter: f64) -> Result<BoundBreakdown> {
    let input = BoundInput::new(2, k, big_k, volume, diameter)?;
    let (pair, radius_prime) = solve_ball(&input, &ShootingConfig::default())?;
    breakdown_with_pair(&input, radius_prime, &pair)
}

/// Measures one conformal mesh level.
pub fn conformal_level(domain: &ConformalDomain, h: f64, k: f64, big_k: f64) -> Result<Level> {
    let mesh = mesh_star_domain(domain, h)?;
    let kappa = domain.curvature.0;
    let mu1 = fem_mu1(&mesh, kappa)?.mu1;
    let volume = domain_volume(&mesh, kappa);
    let diameter = domain_diameter(domain, &mesh)?;
    let bound = bound_for(k, big_k, volume, diameter)?.bound_value;
    Ok(Level {
        h,
        nodes: mesh.vertices.len(),
        mu1,
        volume,
        diameter,
        bound,
        margin: margin(bound, mu1),
    })
}

/// Verifies the bound on a conformal domain with comparison curvatures
/// (k, K), defaulting to the domain's own curvature.
pub fn verify_conformal(domain: &ConformalDomain, h: f64, bounds: Option<(f64, f64)>) -> Result<VerificationReport> {
    let kappa = domain.curvature.0;
    let (k, big_k) = bounds.unwrap_or((kappa, kappa));
    if !(big_k <= kappa && kappa <= k) {
        return Err(Error::Regime(format!(
            "comparison curvatures must pinch the domain: need K <= kappa <= k, got K = {big_k}, kappa = {kappa}, k = {k}"
        )));
    }
    let coarse = conformal_level(domain, h, k, big_k)?;
    let fine = conformal_level(domain, 0.5 * h, k, big_k)?;
    let mu1_domain = richardson(coarse.mu1, fine.mu1);
    let volume = richardson(coarse.volume, fine.volume);
    // The diameter is polished on the exact boundary curve, so it does not
    // depend on h beyond round-off.
    let diameter = fine.diameter;
    let breakdown = bound_for(k, big_k, volume, diameter)?;
    let bound = breakdown.bound_value;
    Ok(VerificationReport {
        kind: "conformal".into(),
        name: None,
        k,
        big_k,
        mesh_size: h,
        levels: vec![coarse, fine],
        mu1_domain,
        volume,
        diameter,
        satisfied: is_satisfied(bound, mu1_domain),
        margin: margin(bound, mu1_domain),
        breakdown,
        tolerance: REPORTING_TOLERANCE,
        diameter_band: None,
        lower_end: None,
        modes: None,
    })
}

/// Number of Fourier modes examined on surfaces of revolution.
pub const REVOLUTION_MODES: usize = 3;

/// Verifies the bound on a cap of revolution with (K, k) taken from its
/// Gauss curvature range unless given.
///
/// The intrinsic diameter is only known within a band; the primary check
/// uses the upper end and the lower end is reported alongside.
pub fn verify_revolution(surface: &RevolutionSurface, h: f64, bounds: Option<(f64, f64)>) -> Result<VerificationReport> {
    let (curv_lo, curv_hi) = gauss_curvature_range(surface)?;
    let (k, big_k) = bounds.unwrap_or((curv_hi, curv_lo));
    if !(big_k <= curv_lo && curv_hi <= k) {
        return Err(Error::Regime(format!(
            "comparison curvatures must pinch the surface: Gauss curvature spans [{curv_lo}, {curv_hi}], got K = {big_k}, k = {k}"
        )));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("mesh size must be positive, got {h}")));
    }
    let cells = (surface.cap_radius / h).ceil().max(8.0) as usize;
    let volume = surface.volume()?;
    let band = revolution_diameter(surface, cells)?;

    let raw = |cells: usize| -> Result<f64> { Ok(mode_eigenvalue(surface, 0, cells)?.min(mode_eigenvalue(surface, 1, cells)?)) };
    let level = |cells: usize, mu1: f64, bound: f64| Level {
        h: surface.cap_radius / cells as f64,
        nodes: cells + 1,
        mu1,
        volume,
        diameter: band.upper,
        bound,
        margin: margin(bound, mu1),
    };
    let spectrum = revolution_mu1(surface, REVOLUTION_MODES, cells)?;
    let breakdown = bound_for(k, big_k, volume, band.upper)?;
    let bound = breakdown.bound_value;
    let levels = vec![level(cells, raw(cells)?, bound), level(2 * cells, raw(2 * cells)?, bound)];

    let lower = bound_for(k, big_k, volume, band.lower)?.bound_value;
    let mu1_domain = spectrum.mu1;
    Ok(VerificationReport {
        kind: "revolution".into(),
        name: None,
        k,
        big_k,
        mesh_size: h,
        levels,
        mu1_domain,
        volume,
        diameter: band.upper,
        satisfied: is_satisfied(bound, mu1_domain),
        margin: margin(bound, mu1_domain),
        breakdown,
        tolerance: REPORTING_TOLERANCE,
        diameter_band: Some(band),
        lower_end: Some(EndpointCheck {
            diameter: band.lower,
            bound: lower,
            margin: margin(lower, mu1_domain),
            satisfied: is_satisfied(lower, mu1_domain),
        }),
        modes: Some(spectrum.modes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::domain::FourierBoundary;
    use crate::verifier::revolution::Profile;

    #[test]
    fn geodesic_ball_is_nearly_sharp() {
        let domain = ConformalDomain::geodesic_disk(-1.0, 1.0).unwrap();
        let report = verify_conformal(&domain, 0.05, None).unwrap();
        assert!(report.satisfied);
        assert!(report.margin.abs() < 1e-3, "{}", report.margin);
        assert!((report.breakdown.constant - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ellipse_like_domain_has_room() {
        let domain = ConformalDomain::new(-1.0, FourierBoundary { a: vec![0.8, 0.0, 0.2], b: vec![] }).unwrap();
        let report = verify_conformal(&domain, 0.05, None).unwrap();
        assert!(report.satisfied && report.margin > 0.01, "{}", report.margin);
    }

    #[test]
    fn revolution_ball_is_nearly_sharp() {
        let surface = RevolutionSurface::new(Profile::Ball { curvature: -1.0 }, 1.0).unwrap();
        let report = verify_revolution(&surface, 0.01, None).unwrap();
        assert!(report.satisfied && report.margin.abs() < 1e-6, "{}", report.margin);
        let band = report.diameter_band.unwrap();
        assert!(band.lower <= 2.0 && (band.upper - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_pinching_bounds() {
        let domain = ConformalDomain::geodesic_disk(-1.0, 1.0).unwrap();
        assert!(verify_conformal(&domain, 0.1, Some((-2.0, -3.0))).is_err());
    }
}
