//! Rotationally symmetric caps dr² + φ(r)²dθ², 0 ≤ r ≤ L.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::interp::NaturalSpline;
use crate::numeric::quad::{integrate, GAUSS5};
use crate::spaceform::{cos_m, sin_m, Curvature};

/// Warping function of the cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Profile {
    /// φ = sin_κ r: a geodesic ball of the space form.
    Ball { curvature: f64 },
    /// φ = sin_κ r + c·r³·exp(−r²/w²).
    Perturbed { curvature: f64, amplitude: f64, width: f64 },
    /// Natural cubic spline through samples (r_i, φ_i) starting at r = 0.
    Table { r: Vec<f64>, phi: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionSurface {
    pub profile: Profile,
    pub cap_radius: f64,
    spline: Option<NaturalSpline>,
}

/// Samples used when scanning the profile for positivity and curvature.
const PROFILE_SAMPLES: usize = 2000;

impl RevolutionSurface {
    pub fn new(profile: Profile, cap_radius: f64) -> Result<Self> {
        if !(cap_radius > 0.0 && cap_radius.is_finite()) {
            return Err(Error::InvalidInput(format!("cap radius must be positive, got {cap_radius}")));
        }
        let spline = match &profile {
            Profile::Ball { curvature } => {
                check_finite(&[*curvature])?;
                None
            }
            Profile::Perturbed {
                curvature,
                amplitude,
                width,
            } => {
                check_finite(&[*curvature, *amplitude, *width])?;
                if !(*width > 0.0) {
                    return Err(Error::InvalidInput("perturbation width must be positive".into()));
                }
                None
            }
            Profile::Table { r, phi } => {
                check_finite(r)?;
                check_finite(phi)?;
                let spline = NaturalSpline::new(r.clone(), phi.clone())?;
                let (lo, hi) = spline.span();
                if lo != 0.0 || hi < cap_radius {
                    return Err(Error::InvalidInput(format!(
                        "profile table must cover [0, {cap_radius}], got [{lo}, {hi}]"
                    )));
                }
                Some(spline)
            }
        };
        let surface = Self {
            profile,
            cap_radius,
            spline,
        };
        let [phi0, slope0, _, _] = surface.derivatives(0.0)?;
        if phi0.abs() > 1e-12 || (slope0 - 1.0).abs() > 1e-4 {
            return Err(Error::Domain(format!(
                "profile must satisfy phi(0) = 0 and phi'(0) = 1 for a smooth cap, got {phi0} and {slope0}"
            )));
        }
        for i in 1..=PROFILE_SAMPLES {
            let r = cap_radius * i as f64 / PROFILE_SAMPLES as f64;
            let phi = surface.phi(r)?;
            if !(phi > 1e-12 * r) {
                return Err(Error::Domain(format!("profile vanishes or turns negative at r = {r}")));
            }
        }
        Ok(surface)
    }

    pub fn phi(&self, r: f64) -> Result<f64> {
        Ok(self.derivatives(r)?[0])
    }

    /// φ and its first three derivatives.
    pub fn derivatives(&self, r: f64) -> Result<[f64; 4]> {
        let ball = |kappa: f64| -> Result<[f64; 4]> {
            let m = Curvature(kappa);
            let (s, c) = (sin_m(m, r)?, cos_m(m, r)?);
            Ok([s, c, -kappa * s, -kappa * c])
        };
        match &self.profile {
            Profile::Ball { curvature } => ball(*curvature),
            Profile::Perturbed {
                curvature,
                amplitude,
                width,
            } => {
                let base = ball(*curvature)?;
                let (q, w2) = (r * r, width * width);
                let bump = (-q / w2).exp();
                let g = [
                    r * q,
                    3.0 * q - 2.0 * q * q / w2,
                    6.0 * r - 14.0 * r * q / w2 + 4.0 * r * q * q / (w2 * w2),
                    6.0 - 54.0 * q / w2 + 48.0 * q * q / (w2 * w2) - 8.0 * q * q * q / (w2 * w2 * w2),
                ];
                Ok(std::array::from_fn(|i| base[i] + amplitude * bump * g[i]))
            }
            Profile::Table { .. } => Ok(self.spline.as_ref().expect("table profile carries a spline").eval(r)),
        }
    }

    /// Gauss curvature −φ″/φ, with the limit −φ‴(0) at the pole.
    pub fn gauss_curvature(&self, r: f64) -> Result<f64> {
        let [phi, _, phi2, phi3] = self.derivatives(r)?;
        Ok(if r == 0.0 { -phi3 } else { -phi2 / phi })
    }

    /// Area 2π∫₀^L φ dr.
    pub fn volume(&self) -> Result<f64> {
        // Validated at construction, so evaluation cannot fail here.
        let integral = integrate(|r| self.phi(r).unwrap_or(f64::NAN), 0.0, self.cap_radius, 1e-13, 1e-13);
        Ok(TAU * integral.value)
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("profile parameters must be finite".into()))
    }
}

/// (min, max) of the Gauss curvature over a fine grid on [0, L].
pub fn gauss_curvature_range(surface: &RevolutionSurface) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..=PROFILE_SAMPLES {
        let r = surface.cap_radius * i as f64 / PROFILE_SAMPLES as f64;
        let k = surface.gauss_curvature(r)?;
        lo = lo.min(k);
        hi = hi.max(k);
    }
    Ok((lo, hi))
}

/// Symmetric tridiagonal matrix: diagonal and first off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

/// Number of eigenvalues of K u = μ M u below `mu` (Sturm count of K − μM).
fn count_below(k: &Tridiagonal, m: &Tridiagonal, mu: f64) -> usize {
    let mut count = 0;
    let mut pivot = 1.0;
    for i in 0..k.diag.len() {
        let d = k.diag[i] - mu * m.diag[i];
        pivot = if i == 0 {
            d
        } else {
            let e = k.off[i - 1] - mu * m.off[i - 1];
            d - e * e / pivot
        };
        if pivot == 0.0 {
            pivot = -f64::EPSILON * (d.abs() + 1.0);
        }
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalue `index` (0-based) of the pencil by bisection on the Sturm count.
fn pencil_eigenvalue(k: &Tridiagonal, m: &Tridiagonal, index: usize) -> f64 {
    let mut hi = 1.0;
    while count_below(k, m, hi) <= index {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(k, m, mid) <= index {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// P1 eigenvalue of mode ℓ on a uniform grid of `cells` cells.
pub fn mode_eigenvalue(surface: &RevolutionSurface, mode: usize, cells: usize) -> Result<f64> {
    let h = surface.cap_radius / cells as f64;
    let ell2 = (mode * mode) as f64;
    let nodes = cells + 1;
    let mut k = Tridiagonal {
        diag: vec![0.0; nodes],
        off: vec![0.0; cells],
    };
    let mut m = Tridiagonal {
        diag: vec![0.0; nodes],
        off: vec![0.0; cells],
    };
    for c in 0..cells {
        let a = c as f64 * h;
        let (mut k_loc, mut m_loc) = ([0.0; 3], [0.0; 3]);
        for &(x, w) in &GAUSS5 {
            let t = 0.5 * (1.0 + x);
            let r = a + t * h;
            let phi = surface.phi(r)?;
            let wt = 0.5 * w * h;
            let (b0, b1) = (1.0 - t, t);
            // Entries (0,0), (1,1), (0,1).
            let grad = phi / (h * h);
            let potential = ell2 / phi;
            k_loc[0] += wt * (grad + potential * b0 * b0);
            k_loc[1] += wt * (grad + potential * b1 * b1);
            k_loc[2] += wt * (-grad + potential * b0 * b1);
            m_loc[0] += wt * phi * b0 * b0;
            m_loc[1] += wt * phi * b1 * b1;
            m_loc[2] += wt * phi * b0 * b1;
        }
        k.diag[c] += k_loc[0];
        k.diag[c + 1] += k_loc[1];
        k.off[c] += k_loc[2];
        m.diag[c] += m_loc[0];
        m.diag[c + 1] += m_loc[1];
        m.off[c] += m_loc[2];
    }
    Ok(if mode == 0 {
        // Eigenvalue 0 (constants) comes first.
        pencil_eigenvalue(&k, &m, 1)
    } else {
        // Dirichlet at the pole: drop node 0.
        let strip = |t: Tridiagonal| Tridiagonal {
            diag: t.diag[1..].to_vec(),
            off: t.off[1..].to_vec(),
        };
        pencil_eigenvalue(&strip(k), &strip(m), 0)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevolutionSpectrum {
    /// Richardson-extrapolated first eigenvalue of each Fourier mode ℓ = 0, 1, ...
    pub modes: Vec<f64>,
    /// min over ℓ ∈ {0, 1}.
    pub mu1: f64,
}

/// First nonzero Neumann eigenvalue of the cap by Fourier separation.
///
/// Each mode is solved with `grid` and `2·grid` cells and Richardson
/// extrapolated; `modes` (≥ 2) is the number of modes examined.
pub fn revolution_mu1(surface: &RevolutionSurface, modes: usize, grid: usize) -> Result<RevolutionSpectrum> {
    if modes < 2 || grid < 4 {
        return Err(Error::InvalidInput("need at least two modes and four cells".into()));
    }
    let mut values = Vec::with_capacity(modes);
    for mode in 0..modes {
        let coarse = mode_eigenvalue(surface, mode, grid)?;
        let fine = mode_eigenvalue(surface, mode, 2 * grid)?;
        values.push((4.0 * fine - coarse) / 3.0);
    }
    Ok(RevolutionSpectrum {
        mu1: values[0].min(values[1]),
        modes: values,
    })
}

/// Stencil overestimate of 8-neighbor shortest paths: 1/cos(π/8).
pub const STENCIL_OVERESTIMATE: f64 = 1.082_392_200_292_393_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterBand {
    pub lower: f64,
    pub upper: f64,
    /// Raw graph distance before banding.
    pub graph: f64,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Intrinsic diameter estimate: Dijkstra on an 8-neighbor Cartesian grid in
/// geodesic polar coordinates (x, y) = r(cos θ, sin θ), with `half_cells`
/// grid steps per cap radius. By rotational symmetry one boundary source
/// suffices.
pub fn revolution_diameter(surface: &RevolutionSurface, half_cells: usize) -> Result<DiameterBand> {
    let l = surface.cap_radius;
    let n = 2 * half_cells + 1;
    let step = l / half_cells as f64;
    let coord = |i: usize| (i as f64 - half_cells as f64) * step;
    let inside = |i: usize, j: usize| {
        let (x, y) = (coord(i), coord(j));
        x * x + y * y <= l * l * (1.0 + 1e-12)
    };
    // Speed ratio φ(r)/r, tabulated on a radial grid for the edge weights.
    let samples = 4 * n;
    let ratio: Vec<f64> = (0..=samples)
        .map(|i| {
            let r = l * i as f64 / samples as f64;
            if i == 0 {
                Ok(1.0)
            } else {
                Ok(surface.phi(r)? / r)
            }
        })
        .collect::<Result<_>>()?;
    let ratio_at = |r: f64| {
        let t = (r / l * samples as f64).min(samples as f64);
        let i = (t.floor() as usize).min(samples - 1);
        let f = t - i as f64;
        ratio[i] * (1.0 - f) + ratio[i + 1] * f
    };
    let edge = |x0: f64, y0: f64, x1: f64, y1: f64| {
        let (mx, my) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let (dx, dy) = (x1 - x0, y1 - y0);
        let r = mx.hypot(my);
        if r == 0.0 {
            return dx.hypot(dy);
        }
        let (ux, uy) = (mx / r, my / r);
        let radial = dx * ux + dy * uy;
        let tangential = -dx * uy + dy * ux;
        radial.hypot(ratio_at(r) * tangential)
    };

    let index = |i: usize, j: usize| i * n + j;
    let mut dist = vec![f64::INFINITY; n * n];
    let source = index(n - 1, half_cells);
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        let (i, j) = (v / n, v % n);
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                    continue;
                }
                let (ni, nj) = (ni as usize, nj as usize);
                if !inside(ni, nj) {
                    continue;
                }
                let w = edge(coord(i), coord(j), coord(ni), coord(nj));
                let u = index(ni, nj);
                if d + w < dist[u] {
                    dist[u] = d + w;
                    heap.push(Entry(d + w, u));
                }
            }
        }
    }
    let graph = dist.iter().copied().filter(|d| d.is_finite()).fold(0.0, f64::max);
    Ok(DiameterBand {
        lower: graph / STENCIL_OVERESTIMATE,
        upper: graph.min(2.0 * l),
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn hemisphere_closed_form() {
        let s = RevolutionSurface::new(Profile::Ball { curvature: 1.0 }, FRAC_PI_2).unwrap();
        let spec = revolution_mu1(&s, 3, 400).unwrap();
        assert!((spec.mu1 - 2.0).abs() < 1e-7, "{}", spec.mu1);
        assert!((s.volume().unwrap() - TAU).abs() < 1e-12);
    }

    #[test]
    fn flat_disk_matches_bessel() {
        let s = RevolutionSurface::new(Profile::Ball { curvature: 0.0 }, 1.0).unwrap();
        let spec = revolution_mu1(&s, 3, 400).unwrap();
        assert!((spec.mu1 - 3.389_957_716_671_89).abs() < 1e-6, "{}", spec.mu1);
        assert!(spec.modes[2] >= spec.modes[1]);
    }

    #[test]
    fn curvature_ranges_of_space_forms() {
        for kappa in [1.0, 0.0, -1.0] {
            let s = RevolutionSurface::new(Profile::Ball { curvature: kappa }, 1.0).unwrap();
            let (lo, hi) = gauss_curvature_range(&s).unwrap();
            assert!((lo - kappa).abs() < 1e-9 && (hi - kappa).abs() < 1e-9, "{kappa}: {lo} {hi}");
        }
    }

    #[test]
    fn perturbed_derivatives_match_finite_differences() {
        let s = RevolutionSurface::new(
            Profile::Perturbed {
                curvature: -1.0,
                amplitude: 0.05,
                width: 0.6,
            },
            1.0,
        )
        .unwrap();
        let h = 1e-5;
        for r in [0.1, 0.4, 0.9] {
            let d = s.derivatives(r).unwrap();
            let p = s.derivatives(r + h).unwrap();
            let m = s.derivatives(r - h).unwrap();
            for k in 0..3 {
                assert!(((p[k] - m[k]) / (2.0 * h) - d[k + 1]).abs() < 1e-7, "r={r} order {}", k + 1);
            }
        }
        assert!((s.gauss_curvature(0.0).unwrap() - (-1.0 - 6.0 * 0.05)).abs() < 1e-12);
    }

    #[test]
    fn table_profile_tracks_its_source() {
        let r: Vec<f64> = (0..=200).map(|i| 1.2 * i as f64 / 200.0).collect();
        let phi = r.iter().map(|x| x.sinh()).collect();
        let s = RevolutionSurface::new(Profile::Table { r, phi }, 1.0).unwrap();
        let exact = RevolutionSurface::new(Profile::Ball { curvature: -1.0 }, 1.0).unwrap();
        let a = revolution_mu1(&s, 2, 200).unwrap().mu1;
        let b = revolution_mu1(&exact, 2, 200).unwrap().mu1;
        assert!((a - b).abs() < 1e-5 * b, "{a} vs {b}");
    }

    #[test]
    fn rejects_singular_profiles() {
        assert!(RevolutionSurface::new(Profile::Ball { curvature: 1.0 }, PI).is_err());
        let r = vec![0.0, 0.5, 1.0];
        assert!(RevolutionSurface::new(Profile::Table { r, phi: vec![0.1, 0.6, 1.1] }, 1.0).is_err());
    }

    #[test]
    fn flat_disk_diameter_band_contains_two() {
        let s = RevolutionSurface::new(Profile::Ball { curvature: -1.0 }, 1.0).unwrap();
        let band = revolution_diameter(&s, 100).unwrap();
        assert!(band.lower <= 2.0 && 2.0 <= band.upper + 1e-12, "{band:?}");
    }
}
