//! Weighted Riemannian center of mass of a domain.
//!
//! Zero of m(p) = ∫_Ω h(r_p(x)) exp_p⁻¹(x)/r_p(x) dV, found by Newton's
//! method with a finite-difference Jacobian and backtracking.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::domain::ConformalDomain;
use super::mesh::Mesh;
use super::model::{ConformalModel, Point};
use crate::error::{Error, Result};
use crate::radial::RadialEigenpair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterOfMass {
    pub point: Point,
    /// |m(p)| / ∫_Ω h dV.
    pub residual: f64,
    pub iterations: usize,
    pub inside_domain: bool,
    pub inside_hull: bool,
}

pub const CENTER_TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 100;

/// The vector field m(p), with unit directions taken in the metric at p.
pub fn mass_field(model: &ConformalModel, mesh: &Mesh, h: &RadialEigenpair, p: Point) -> [f64; 2] {
    mesh.integrate_vec(model, |x| {
        let (r, dir) = model.log(p, x);
        let weight = h.eval_f(r);
        [weight * dir[0], weight * dir[1]]
    })
}

/// ∫_Ω h(r_p) dV, the scale of the residual.
fn weight_total(model: &ConformalModel, mesh: &Mesh, h: &RadialEigenpair, p: Point) -> f64 {
    mesh.integrate(model, |x| h.eval_f(model.log(p, x).0))
}

/// Whether `p` lies in the geodesic convex hull of the boundary vertices.
///
/// After moving p to the origin, geodesics through p are straight lines, so
/// p is outside the hull exactly when the boundary fits in an open half-plane
/// through the origin, i.e. its directions leave an angular gap wider than π.
pub fn in_geodesic_hull(model: &ConformalModel, mesh: &Mesh, p: Point) -> bool {
    let mut angles: Vec<f64> = mesh
        .boundary_vertices()
        .map(|x| {
            let y = model.to_origin(p, x);
            y[1].atan2(y[0])
        })
        .collect();
    if angles.len() < 3 {
        return false;
    }
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + TAU - angles[angles.len() - 1];
    let widest = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    widest <= PI
}

pub fn center_of_mass(domain: &ConformalDomain, mesh: &Mesh, h: &RadialEigenpair) -> Result<CenterOfMass> {
    let model = domain.model();
    // Start from the volume centroid in model coordinates.
    let moments = mesh.integrate_vec(&model, |x| [1.0, x[0], x[1]]);
    let mut p = [moments[1] / moments[0], moments[2] / moments[0]];
    let scale = weight_total(&model, mesh, h, p);
    let size = domain.max_radius();
    let norm = |v: [f64; 2]| v[0].hypot(v[1]);

    let mut field = mass_field(&model, mesh, h, p);
    let mut residual = norm(field) / scale;
    for iteration in 0..=MAX_ITERATIONS {
        if residual <= CENTER_TOLERANCE {
            return Ok(CenterOfMass {
                point: p,
                residual,
                iterations: iteration,
                inside_domain: domain.contains(p),
                inside_hull: in_geodesic_hull(&model, mesh, p),
            });
        }
        if iteration == MAX_ITERATIONS {
            break;
        }
        let step = 1e-6 * size;
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let (mut plus, mut minus) = (p, p);
            plus[j] += step;
            minus[j] -= step;
            let (fp, fm) = (mass_field(&model, mesh, h, plus), mass_field(&model, mesh, h, minus));
            for i in 0..2 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * step);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoConvergence {
                what: "center of mass (singular Jacobian)",
                iterations: iteration,
                change: f64::NAN,
                residual,
            });
        }
        let delta = [
            (jac[1][1] * field[0] - jac[0][1] * field[1]) / det,
            (-jac[1][0] * field[0] + jac[0][0] * field[1]) / det,
        ];
        let mut t = 1.0;
        loop {
            let trial = [p[0] - t * delta[0], p[1] - t * delta[1]];
            if model.check_point(trial).is_ok() {
                let trial_field = mass_field(&model, mesh, h, trial);
                let trial_residual = norm(trial_field) / scale;
                if trial_residual < residual || t < 1e-6 {
                    (p, field, residual) = (trial, trial_field, trial_residual);
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return Err(Error::NoConvergence {
                    what: "center of mass (line search)",
                    iterations: iteration,
                    change: t * norm(delta),
                    residual,
                });
            }
        }
    }
    Err(Error::NoConvergence {
        what: "center of mass",
        iterations: MAX_ITERATIONS,
        change: f64::NAN,
        residual,
    })
}
