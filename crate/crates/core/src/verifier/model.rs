//! Conformal disk models of the constant-curvature planes.
//!
//! The metric is λ(x)²|dx|² with λ(x) = 1/(1 + κ|x|²/4): the Poincaré disk
//! of radius 2/√-κ for κ < 0, the flat plane for κ = 0 and stereographic
//! coordinates on the sphere for κ > 0. Isometries moving a point to the
//! origin are Möbius maps in the rescaled coordinate u = (√|κ|/2)·x.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::spaceform::Curvature;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalModel {
    pub curvature: Curvature,
}

impl ConformalModel {
    pub fn new(curvature: impl Into<Curvature>) -> Self {
        Self {
            curvature: curvature.into(),
        }
    }

    fn kappa(&self) -> f64 {
        self.curvature.0
    }

    /// √|κ|/2, the factor taking model coordinates to Möbius coordinates.
    fn unit_scale(&self) -> f64 {
        0.5 * self.kappa().abs().sqrt()
    }

    pub fn conformal_factor(&self, x: Point) -> f64 {
        1.0 / (1.0 + self.kappa() * (x[0] * x[0] + x[1] * x[1]) / 4.0)
    }

    /// Euclidean radius of the model disk (infinite unless κ < 0).
    pub fn model_radius(&self) -> f64 {
        if self.kappa() < 0.0 {
            2.0 / (-self.kappa()).sqrt()
        } else {
            f64::INFINITY
        }
    }

    pub fn check_point(&self, x: Point) -> Result<()> {
        let norm = x[0].hypot(x[1]);
        if !norm.is_finite() || norm >= self.model_radius() {
            return Err(Error::Domain(format!(
                "point ({}, {}) lies outside the model disk of radius {}",
                x[0],
                x[1],
                self.model_radius()
            )));
        }
        Ok(())
    }

    /// Geodesic distance from the origin to a point at model radius `s`.
    pub fn radial_distance(&self, s: f64) -> f64 {
        let k = self.kappa();
        if k > 0.0 {
            2.0 / k.sqrt() * (k.sqrt() * s / 2.0).atan()
        } else if k < 0.0 {
            2.0 / (-k).sqrt() * ((-k).sqrt() * s / 2.0).atanh()
        } else {
            s
        }
    }

    /// Model radius of the point at geodesic distance `t` from the origin.
    pub fn radius_for_distance(&self, t: f64) -> f64 {
        let k = self.kappa();
        if k > 0.0 {
            2.0 / k.sqrt() * (k.sqrt() * t / 2.0).tan()
        } else if k < 0.0 {
            2.0 / (-k).sqrt() * ((-k).sqrt() * t / 2.0).tanh()
        } else {
            t
        }
    }

    fn to_unit(&self, x: Point) -> Complex<f64> {
        let c = self.unit_scale();
        Complex::new(c * x[0], c * x[1])
    }

    fn from_unit(&self, u: Complex<f64>) -> Point {
        let c = self.unit_scale();
        [u.re / c, u.im / c]
    }

    /// Image of `x` under the isometry taking `p` to the origin; its
    /// differential at `p` is a positive multiple of the identity.
    pub fn to_origin(&self, p: Point, x: Point) -> Point {
        let k = self.kappa();
        if k == 0.0 {
            return [x[0] - p[0], x[1] - p[1]];
        }
        let (a, z) = (self.to_unit(p), self.to_unit(x));
        let sign = if k < 0.0 { -1.0 } else { 1.0 };
        self.from_unit((z - a) / (Complex::new(1.0, 0.0) + sign * a.conj() * z))
    }

    /// Inverse of [`ConformalModel::to_origin`].
    pub fn from_origin(&self, p: Point, w: Point) -> Point {
        let k = self.kappa();
        if k == 0.0 {
            return [w[0] + p[0], w[1] + p[1]];
        }
        let (a, z) = (self.to_unit(p), self.to_unit(w));
        let sign = if k < 0.0 { -1.0 } else { 1.0 };
        self.from_unit((z + a) / (Complex::new(1.0, 0.0) - sign * a.conj() * z))
    }

    /// Geodesic distance between two points of the model.
    pub fn distance(&self, x: Point, y: Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        let w = self.to_origin(x, y);
        Ok(self.radial_distance(w[0].hypot(w[1])))
    }

    /// Inverse exponential map at `p` as (distance, unit direction), the
    /// direction expressed in the orthonormal frame parallel to the axes.
    pub fn log(&self, p: Point, x: Point) -> (f64, Point) {
        let w = self.to_origin(p, x);
        let s = w[0].hypot(w[1]);
        if s == 0.0 {
            return (0.0, [0.0, 0.0]);
        }
        (self.radial_distance(s), [w[0] / s, w[1] / s])
    }

    /// Exponential map at `p` of a tangent vector given in the same frame.
    pub fn exp(&self, p: Point, v: Point) -> Point {
        let t = v[0].hypot(v[1]);
        if t == 0.0 {
            return p;
        }
        let s = self.radius_for_distance(t);
        self.from_origin(p, [s * v[0] / t, s * v[1] / t])
    }
}
