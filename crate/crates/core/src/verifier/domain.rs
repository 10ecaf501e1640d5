//! Star-shaped domains {s < σ(θ)} in a conformal model.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::model::{ConformalModel, Point};
use crate::error::{Error, Result};
use crate::spaceform::Curvature;

/// σ(θ) = a₀ + Σ_{j≥1} (a_j cos jθ + b_j sin jθ).
///
/// `a` holds a₀..a_J and `b` holds b₁..b_J (b may be shorter than a).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierBoundary {
    pub a: Vec<f64>,
    #[serde(default)]
    pub b: Vec<f64>,
}

impl FourierBoundary {
    pub fn circle(radius: f64) -> Self {
        Self {
            a: vec![radius],
            b: vec![],
        }
    }

    pub fn radius(&self, theta: f64) -> f64 {
        let mut s = self.a.first().copied().unwrap_or(0.0);
        for (j, &aj) in self.a.iter().enumerate().skip(1) {
            s += aj * (j as f64 * theta).cos();
        }
        for (j, &bj) in self.b.iter().enumerate() {
            s += bj * ((j + 1) as f64 * theta).sin();
        }
        s
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        let mut s = 0.0;
        for (j, &aj) in self.a.iter().enumerate().skip(1) {
            s -= j as f64 * aj * (j as f64 * theta).sin();
        }
        for (j, &bj) in self.b.iter().enumerate() {
            let m = (j + 1) as f64;
            s += m * bj * (m * theta).cos();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalDomain {
    pub curvature: Curvature,
    pub boundary: FourierBoundary,
}

/// Samples used to validate σ and to tabulate boundary arclength.
pub(crate) const BOUNDARY_SAMPLES: usize = 4096;

impl ConformalDomain {
    pub fn new(curvature: impl Into<Curvature>, boundary: FourierBoundary) -> Result<Self> {
        let domain = Self {
            curvature: curvature.into(),
            boundary,
        };
        domain.validate()?;
        Ok(domain)
    }

    /// Geodesic disk of radius `radius` centered at the model origin.
    pub fn geodesic_disk(curvature: impl Into<Curvature>, radius: f64) -> Result<Self> {
        let curvature = curvature.into();
        let s = ConformalModel::new(curvature).radius_for_distance(radius);
        Self::new(curvature, FourierBoundary::circle(s))
    }

    pub fn model(&self) -> ConformalModel {
        ConformalModel::new(self.curvature)
    }

    pub fn validate(&self) -> Result<()> {
        if self.boundary.a.is_empty() || self.boundary.a.iter().chain(&self.boundary.b).any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("Fourier coefficients must be finite and include a0".into()));
        }
        let kappa = self.curvature.0;
        // κ > 0: stay inside the hemisphere around the origin, |x| < 2/√κ.
        let limit = if kappa != 0.0 { 2.0 / kappa.abs().sqrt() } else { f64::INFINITY };
        for i in 0..BOUNDARY_SAMPLES {
            let theta = TAU * i as f64 / BOUNDARY_SAMPLES as f64;
            let s = self.boundary.radius(theta);
            if !(s > 0.0) {
                return Err(Error::InvalidInput(format!("boundary radius {s} at theta = {theta} is not positive")));
            }
            if s >= limit {
                return Err(Error::Domain(format!(
                    "boundary radius {s} at theta = {theta} leaves the admissible model disk of radius {limit}"
                )));
            }
        }
        Ok(())
    }

    pub fn boundary_point(&self, theta: f64) -> Point {
        let s = self.boundary.radius(theta);
        [s * theta.cos(), s * theta.sin()]
    }

    pub fn max_radius(&self) -> f64 {
        (0..BOUNDARY_SAMPLES)
            .map(|i| self.boundary.radius(TAU * i as f64 / BOUNDARY_SAMPLES as f64))
            .fold(0.0, f64::max)
    }

    pub fn min_radius(&self) -> f64 {
        (0..BOUNDARY_SAMPLES)
            .map(|i| self.boundary.radius(TAU * i as f64 / BOUNDARY_SAMPLES as f64))
            .fold(f64::INFINITY, f64::min)
    }

    /// True when `p` lies in the open star-shaped region.
    pub fn contains(&self, p: Point) -> bool {
        let s = p[0].hypot(p[1]);
        s == 0.0 || s < self.boundary.radius(p[1].atan2(p[0]))
    }

    /// Euclidean (model-coordinate) arclength element |d/dθ (σ(θ) e^{iθ})|.
    pub(crate) fn speed(&self, theta: f64) -> f64 {
        self.boundary.radius(theta).hypot(self.boundary.derivative(theta))
    }

    /// Angles splitting the boundary curve into `count` arcs of equal
    /// model-coordinate length, starting at fraction `offset` of an arc.
    pub(crate) fn equal_arclength_angles(&self, count: usize, offset: f64) -> Vec<f64> {
        let samples = BOUNDARY_SAMPLES;
        let dtheta = TAU / samples as f64;
        // Cumulative length by the trapezoid rule, exact enough for spacing.
        let mut cumulative = Vec::with_capacity(samples + 1);
        cumulative.push(0.0);
        let mut prev = self.speed(0.0);
        for i in 1..=samples {
            let cur = self.speed(dtheta * i as f64);
            let last = *cumulative.last().unwrap();
            cumulative.push(last + 0.5 * dtheta * (prev + cur));
            prev = cur;
        }
        let total = cumulative[samples];
        (0..count)
            .map(|i| {
                let target = total * (i as f64 + offset) / count as f64;
                let j = cumulative.partition_point(|&c| c <= target).clamp(1, samples);
                let (c0, c1) = (cumulative[j - 1], cumulative[j]);
                let t = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
                (j as f64 - 1.0 + t) * dtheta
            })
            .collect()
    }

    pub(crate) fn perimeter_estimate(&self) -> f64 {
        let samples = BOUNDARY_SAMPLES;
        let dtheta = TAU / samples as f64;
        (0..samples).map(|i| self.speed(dtheta * i as f64)).sum::<f64>() * dtheta
    }
}
