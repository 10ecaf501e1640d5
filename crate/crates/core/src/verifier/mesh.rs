//! Triangulation of star-shaped domains by polar rings.
//!
//! Ring j of J sits at fraction j/J of the boundary radius; each ring
//! carries points equally spaced in boundary arclength, with a count
//! proportional to its length. Consecutive rings are stitched by merging
//! their angular sequences, then interior vertices are Laplacian-smoothed.

use serde::{Deserialize, Serialize};

use super::domain::ConformalDomain;
use super::model::{ConformalModel, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
    /// Target edge length the mesh was generated for.
    pub h: f64,
}

/// Degree-5 seven-point rule on a triangle: (barycentric coordinates, weight).
const DUNAVANT7: [([f64; 3], f64); 7] = [
    ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
    ([0.059_715_871_789_770, 0.470_142_064_105_115, 0.470_142_064_105_115], 0.132_394_152_788_506),
    ([0.470_142_064_105_115, 0.059_715_871_789_770, 0.470_142_064_105_115], 0.132_394_152_788_506),
    ([0.470_142_064_105_115, 0.470_142_064_105_115, 0.059_715_871_789_770], 0.132_394_152_788_506),
    ([0.797_426_985_353_087, 0.101_286_507_323_456, 0.101_286_507_323_456], 0.125_939_180_544_827),
    ([0.101_286_507_323_456, 0.797_426_985_353_087, 0.101_286_507_323_456], 0.125_939_180_544_827),
    ([0.101_286_507_323_456, 0.101_286_507_323_456, 0.797_426_985_353_087], 0.125_939_180_544_827),
];

pub(crate) fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

impl Mesh {
    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        signed_area(a, b, c)
    }

    pub fn min_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.area(t)).fold(f64::INFINITY, f64::min)
    }

    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(i, j)| {
                let (p, q) = (self.vertices[i], self.vertices[j]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.vertices.iter().zip(&self.boundary).filter(|(_, &b)| b).map(|(&v, _)| v)
    }

    /// ∫_Ω g dV over the polygonal domain in the model metric, with the
    /// seven-point rule applied to g·λ² on every triangle in index order.
    pub fn integrate(&self, model: &ConformalModel, g: impl Fn(Point) -> f64) -> f64 {
        let mut total = 0.0;
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.corners(t);
            let area = signed_area(a, b, c);
            let mut local = 0.0;
            for (bary, w) in DUNAVANT7 {
                let x = [
                    bary[0] * a[0] + bary[1] * b[0] + bary[2] * c[0],
                    bary[0] * a[1] + bary[1] * b[1] + bary[2] * c[1],
                ];
                local += w * g(x) * model.conformal_factor(x).powi(2);
            }
            total += area * local;
        }
        total
    }

    /// Like [`Mesh::integrate`] for vector-valued integrands.
    pub fn integrate_vec<const N: usize>(&self, model: &ConformalModel, g: impl Fn(Point) -> [f64; N]) -> [f64; N] {
        let mut total = [0.0; N];
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.corners(t);
            let area = signed_area(a, b, c);
            for (bary, w) in DUNAVANT7 {
                let x = [
                    bary[0] * a[0] + bary[1] * b[0] + bary[2] * c[0],
                    bary[0] * a[1] + bary[1] * b[1] + bary[2] * c[1],
                ];
                let scale = area * w * model.conformal_factor(x).powi(2);
                let v = g(x);
                for i in 0..N {
                    total[i] += scale * v[i];
                }
            }
        }
        total
    }
}

const SMOOTHING_SWEEPS: usize = 3;
const SMOOTHING_RELAXATION: f64 = 0.5;

/// Meshes `domain` with target edge length `h` (model coordinates).
pub fn mesh_star_domain(domain: &ConformalDomain, h: f64) -> Result<Mesh> {
    domain.validate()?;
    let min_radius = domain.min_radius();
    if !(h > 0.0) || h > 0.5 * min_radius {
        return Err(Error::Mesh(format!(
            "mesh size {h} must be positive and at most half the minimum boundary radius {min_radius}"
        )));
    }
    let rings = (domain.max_radius() / h).ceil().max(2.0) as usize;
    let perimeter = domain.perimeter_estimate();

    let mut vertices: Vec<Point> = vec![[0.0, 0.0]];
    let mut boundary = vec![false];
    // Per ring: vertex indices and their arclength fraction in [0, 1).
    let mut ring_nodes: Vec<(Vec<usize>, Vec<f64>)> = Vec::with_capacity(rings);
    for j in 1..=rings {
        let t = j as f64 / rings as f64;
        let count = ((t * perimeter / h).ceil() as usize).max(6);
        let offset = if j % 2 == 1 && j != rings { 0.5 } else { 0.0 };
        let angles = domain.equal_arclength_angles(count, offset);
        let mut ids = Vec::with_capacity(count);
        let mut fractions = Vec::with_capacity(count);
        for (i, &theta) in angles.iter().enumerate() {
            let s = t * domain.boundary.radius(theta);
            ids.push(vertices.len());
            fractions.push((i as f64 + offset) / count as f64);
            vertices.push([s * theta.cos(), s * theta.sin()]);
            boundary.push(j == rings);
        }
        ring_nodes.push((ids, fractions));
    }

    let mut triangles = Vec::new();
    let (first, _) = &ring_nodes[0];
    for i in 0..first.len() {
        triangles.push([0, first[i], first[(i + 1) % first.len()]]);
    }
    for pair in ring_nodes.windows(2) {
        stitch(&pair[0], &pair[1], &mut triangles);
    }
    for tri in triangles.iter_mut() {
        let [a, b, c] = *tri;
        if signed_area(vertices[a], vertices[b], vertices[c]) < 0.0 {
            *tri = [a, c, b];
        }
    }

    let mut mesh = Mesh {
        vertices,
        triangles,
        boundary,
        h,
    };
    smooth(&mut mesh);
    if !(mesh.min_area() > 0.0) {
        return Err(Error::Mesh("triangulation produced a degenerate triangle".into()));
    }
    Ok(mesh)
}

/// Merges two rings by increasing arclength fraction, emitting one triangle
/// per advance on either ring.
fn stitch(inner: &(Vec<usize>, Vec<f64>), outer: &(Vec<usize>, Vec<f64>), triangles: &mut Vec<[usize; 3]>) {
    let (a_ids, a_pos) = inner;
    let (b_ids, b_pos) = outer;
    let (na, nb) = (a_ids.len(), b_ids.len());
    let pos = |p: &[f64], n: usize, i: usize| p[i % n] + (i / n) as f64;
    let (mut i, mut j) = (0, 0);
    while i < na || j < nb {
        let advance_inner = if i == na {
            false
        } else if j == nb {
            true
        } else {
            pos(a_pos, na, i + 1) < pos(b_pos, nb, j + 1)
        };
        if advance_inner {
            triangles.push([a_ids[i % na], a_ids[(i + 1) % na], b_ids[j % nb]]);
            i += 1;
        } else {
            triangles.push([a_ids[i % na], b_ids[(j + 1) % nb], b_ids[j % nb]]);
            j += 1;
        }
    }
}

fn smooth(mesh: &mut Mesh) {
    let n = mesh.vertices.len();
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &[a, b, c] in &mesh.triangles {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            neighbours[u].push(v);
            neighbours[v].push(u);
        }
    }
    for list in neighbours.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    for _ in 0..SMOOTHING_SWEEPS {
        let previous = mesh.vertices.clone();
        for v in 0..n {
            if mesh.boundary[v] || neighbours[v].is_empty() {
                continue;
            }
            let k = neighbours[v].len() as f64;
            let mean = neighbours[v].iter().fold([0.0, 0.0], |acc, &u| {
                [acc[0] + previous[u][0] / k, acc[1] + previous[u][1] / k]
            });
            let old = previous[v];
            mesh.vertices[v] = [
                old[0] + SMOOTHING_RELAXATION * (mean[0] - old[0]),
                old[1] + SMOOTHING_RELAXATION * (mean[1] - old[1]),
            ];
        }
        if !(mesh.min_area() > 0.0) {
            mesh.vertices = previous;
            return;
        }
    }
}
