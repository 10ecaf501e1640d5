//! Piecewise-linear Neumann eigenvalues on conformal domains.
//!
//! In two dimensions the Dirichlet energy is conformally invariant, so the
//! stiffness matrix is the flat one and only the mass matrix sees λ².

use super::domain::ConformalDomain;
use super::eigen::{filler_vector, smallest_nonzero, EigenConfig};
use super::mesh::{signed_area, Mesh};
use super::model::{ConformalModel, Point};
use crate::error::Result;
use crate::numeric::sparse::CsrMatrix;
use crate::spaceform::Curvature;

/// Flat P1 stiffness via cotangent weights. Does not depend on curvature.
pub fn assemble_stiffness(mesh: &Mesh) -> CsrMatrix {
    let mut triplets = Vec::with_capacity(9 * mesh.triangles.len());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = mesh.corners(t);
        let area = signed_area(a, b, c);
        // Gradient of the hat at corner i is (-(y_j - y_k), x_j - x_k)/(2A) up to rotation.
        let pts = [a, b, c];
        let grads: [[f64; 2]; 3] = std::array::from_fn(|i| {
            let (p, q) = (pts[(i + 1) % 3], pts[(i + 2) % 3]);
            [p[1] - q[1], q[0] - p[0]]
        });
        for i in 0..3 {
            for j in 0..3 {
                let value = (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]) / (4.0 * area);
                triplets.push((tri[i], tri[j], value));
            }
        }
    }
    let mut stiffness = CsrMatrix::from_triplets(mesh.vertices.len(), triplets);
    stiffness.zero_row_sums();
    stiffness
}

/// Consistent mass matrix weighted by λ², edge-midpoint quadrature.
pub fn assemble_mass(mesh: &Mesh, model: &ConformalModel) -> CsrMatrix {
    let mut triplets = Vec::with_capacity(9 * mesh.triangles.len());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let pts = mesh.corners(t);
        let area = signed_area(pts[0], pts[1], pts[2]);
        let mut local = [[0.0; 3]; 3];
        for e in 0..3 {
            // Midpoint of the edge opposite corner e: the hats of the other
            // two corners are 1/2 there, the hat of e vanishes.
            let (i, j) = ((e + 1) % 3, (e + 2) % 3);
            let mid = [0.5 * (pts[i][0] + pts[j][0]), 0.5 * (pts[i][1] + pts[j][1])];
            let w = area / 3.0 * model.conformal_factor(mid).powi(2) * 0.25;
            local[i][i] += w;
            local[j][j] += w;
            local[i][j] += w;
            local[j][i] += w;
        }
        for i in 0..3 {
            for j in 0..3 {
                triplets.push((tri[i], tri[j], local[i][j]));
            }
        }
    }
    CsrMatrix::from_triplets(mesh.vertices.len(), triplets)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FemEigenpair {
    pub mu1: f64,
    /// Nodal values, M-normalized and mean-zero.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

pub fn fem_mu1(mesh: &Mesh, curvature: impl Into<Curvature>) -> Result<FemEigenpair> {
    fem_mu1_with(mesh, curvature, &EigenConfig::default())
}

pub fn fem_mu1_with(mesh: &Mesh, curvature: impl Into<Curvature>, config: &EigenConfig) -> Result<FemEigenpair> {
    let model = ConformalModel::new(curvature);
    let stiffness = assemble_stiffness(mesh);
    let mass = assemble_mass(mesh, &model);
    let column = |f: &dyn Fn(Point) -> f64| mesh.vertices.iter().map(|&p| f(p)).collect::<Vec<_>>();
    let start = vec![
        column(&|p| p[0]),
        column(&|p| p[1]),
        column(&|p| p[0] * p[0] - p[1] * p[1]),
        column(&|p| p[0] * p[1]),
        filler_vector(mesh.vertices.len(), 1),
    ];
    let solution = smallest_nonzero(&stiffness, &mass, start, config)?;
    Ok(FemEigenpair {
        mu1: solution.value,
        vector: solution.vector,
        iterations: solution.iterations,
        residual: solution.residual,
    })
}

/// Riemannian area of the meshed polygon.
pub fn domain_volume(mesh: &Mesh, curvature: impl Into<Curvature>) -> f64 {
    mesh.integrate(&ConformalModel::new(curvature), |_| 1.0)
}

/// Diameter: the largest model distance between boundary vertices,
/// then polished on the exact boundary curve by a pattern search.
pub fn domain_diameter(domain: &ConformalDomain, mesh: &Mesh) -> Result<f64> {
    let model = domain.model();
    let boundary: Vec<Point> = mesh.boundary_vertices().collect();
    let mut best = (0.0, [0.0, 0.0]);
    for (i, &p) in boundary.iter().enumerate() {
        for &q in &boundary[i + 1..] {
            let d = model.distance(p, q)?;
            if d > best.0 {
                best = (d, [p[1].atan2(p[0]), q[1].atan2(q[0])]);
            }
        }
    }
    let objective = |t: [f64; 2]| model.distance(domain.boundary_point(t[0]), domain.boundary_point(t[1]));
    let (mut value, mut angles) = (objective(best.1)?, best.1);
    let mut step = 4.0 * std::f64::consts::TAU / boundary.len().max(1) as f64;
    while step > 1e-13 {
        let mut improved = false;
        for (i, s) in [(0, step), (0, -step), (1, step), (1, -step)] {
            let mut trial = angles;
            trial[i] += s;
            let v = objective(trial)?;
            if v > value {
                (value, angles, improved) = (v, trial, true);
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(value.max(best.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::domain::FourierBoundary;
    use crate::verifier::mesh::mesh_star_domain;
    use std::f64::consts::PI;

    #[test]
    fn stiffness_annihilates_constants_and_ignores_curvature() {
        let domain = ConformalDomain::new(-1.0, FourierBoundary { a: vec![0.8, 0.1], b: vec![0.05] }).unwrap();
        let mesh = mesh_star_domain(&domain, 0.1).unwrap();
        let a = assemble_stiffness(&mesh);
        assert!(a.row_sums().iter().all(|&v| v == 0.0));
        assert!(a.mul_vec(&vec![1.0; mesh.vertices.len()]).iter().all(|v| v.abs() < 1e-12));
        assert_eq!(a, assemble_stiffness(&mesh));
    }

    #[test]
    fn flat_mass_integrates_constants() {
        let domain = ConformalDomain::new(0.0, FourierBoundary::circle(1.0)).unwrap();
        let mesh = mesh_star_domain(&domain, 0.1).unwrap();
        let m = assemble_mass(&mesh, &ConformalModel::new(0.0));
        let ones = vec![1.0; mesh.vertices.len()];
        let total: f64 = m.mul_vec(&ones).iter().sum();
        let area: f64 = (0..mesh.triangles.len()).map(|t| mesh.area(t)).sum();
        assert!((total - area).abs() < 1e-12);
        assert!((domain_volume(&mesh, 0.0) - area).abs() < 1e-12);
    }

    #[test]
    fn flat_disk_eigenvalue_is_close() {
        let domain = ConformalDomain::new(0.0, FourierBoundary::circle(1.0)).unwrap();
        let mesh = mesh_star_domain(&domain, 0.05).unwrap();
        let pair = fem_mu1(&mesh, 0.0).unwrap();
        assert!((pair.mu1 - 3.389_957_716_671_89).abs() < 0.02, "{}", pair.mu1);
    }

    #[test]
    fn disk_diameter_is_two() {
        let domain = ConformalDomain::new(0.0, FourierBoundary::circle(1.0)).unwrap();
        let mesh = mesh_star_domain(&domain, 0.1).unwrap();
        assert!((domain_diameter(&domain, &mesh).unwrap() - 2.0).abs() < 1e-12);
        let hyperbolic = ConformalDomain::geodesic_disk(-1.0, 1.0).unwrap();
        let mesh = mesh_star_domain(&hyperbolic, 0.1).unwrap();
        assert!((domain_diameter(&hyperbolic, &mesh).unwrap() - 2.0).abs() < 1e-12);
        assert!((domain_volume(&mesh, -1.0) - 2.0 * PI * (1f64.cosh() - 1.0)).abs() < 0.05);
    }
}
