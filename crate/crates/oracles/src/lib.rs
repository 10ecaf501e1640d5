//! Reference values computed by routes that share no code with `eigenbound`.
//!
//! Everything here is deliberately naive: power series, bisection, and a
//! second-order finite-difference discretisation with Richardson
//! extrapolation. Slow is fine; independent is the point.

use std::f64::consts::PI;

/// Closed-form generalized sine, written out case by case.
pub fn sin_m(m: f64, r: f64) -> f64 {
    if m > 0.0 {
        (m.sqrt() * r).sin() / m.sqrt()
    } else if m < 0.0 {
        ((-m).sqrt() * r).sinh() / (-m).sqrt()
    } else {
        r
    }
}

/// Γ(x) for x a positive integer or half-integer.
fn gamma_half_integer(x: f64) -> f64 {
    let twice = (2.0 * x).round() as i64;
    assert!(twice >= 1 && ((2.0 * x) - twice as f64).abs() < 1e-12);
    let (mut g, mut a) = if twice % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while a < x - 0.25 {
        g *= a;
        a += 1.0;
    }
    g
}

/// Derivative of x^{1-n/2} J_{n/2}(x) by its power series.
///
/// The radial Euclidean eigenfunction of the first Neumann mode on the unit
/// n-ball is r^{1-n/2} J_{n/2}(sqrt(mu) r); its critical point gives mu.
pub fn euclidean_profile_derivative(n: usize, x: f64) -> f64 {
    let nu = n as f64 / 2.0;
    let mut sum = 0.0;
    let mut m_fact = 1.0;
    for m in 0..60 {
        if m > 0 {
            m_fact *= m as f64;
        }
        let mf = m as f64;
        let denom = m_fact * gamma_half_integer(mf + nu + 1.0) * 2f64.powf(2.0 * mf + nu);
        let term = (2.0 * mf + 1.0) * x.powi(2 * m as i32) / denom;
        sum += if m % 2 == 0 { term } else { -term };
    }
    sum
}

/// First positive zero of [`euclidean_profile_derivative`] by plain bisection.
///
/// n = 2 gives j'_{1,1} ≈ 1.841184, n = 3 gives the spherical-Bessel value
/// ≈ 2.081576.
pub fn euclidean_first_critical_point(n: usize) -> f64 {
    let (mut lo, mut hi) = (0.5, 4.0);
    let f_lo = euclidean_profile_derivative(n, lo);
    assert!(f_lo > 0.0 && euclidean_profile_derivative(n, hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if euclidean_profile_derivative(n, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// μ₁ of the Euclidean n-ball of radius `radius`.
pub fn euclidean_ball_mu1(n: usize, radius: f64) -> f64 {
    let x = euclidean_first_critical_point(n);
    (x / radius).powi(2)
}

/// Discretised radial problem on a uniform grid of `cells` intervals.
///
/// Vertex-centred flux form of -(w F')' + q F = mu w F with w = s^{n-1},
/// q = (n-1) s^{n-3}; F(0) = 0 is eliminated and F'(R) = 0 uses a half cell.
struct FdPencil {
    diag: Vec<f64>,
    off: Vec<f64>,
    weight: Vec<f64>,
}

fn fd_pencil(k: f64, n: usize, radius: f64, cells: usize) -> FdPencil {
    let h = radius / cells as f64;
    let nm1 = (n - 1) as i32;
    let w = |r: f64| sin_m(k, r).powi(nm1);
    let q = |r: f64| (n - 1) as f64 * sin_m(k, r).powi(nm1 - 2);
    let mut diag = Vec::with_capacity(cells);
    let mut off = Vec::with_capacity(cells);
    let mut weight = Vec::with_capacity(cells);
    for i in 1..=cells {
        let r = i as f64 * h;
        let w_left = w(r - 0.5 * h);
        if i < cells {
            let w_right = w(r + 0.5 * h);
            diag.push((w_left + w_right) / h + h * q(r));
            weight.push(h * w(r));
            off.push(-w_right / h);
        } else {
            diag.push(w_left / h + 0.5 * h * q(r));
            weight.push(0.5 * h * w(r));
        }
    }
    FdPencil { diag, off, weight }
}

impl FdPencil {
    /// Number of eigenvalues of the pencil below `sigma` (Sylvester inertia).
    fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut pivot = 0.0;
        for i in 0..self.diag.len() {
            let a = self.diag[i] - sigma * self.weight[i];
            pivot = if i == 0 {
                a
            } else {
                a - self.off[i - 1] * self.off[i - 1] / pivot
            };
            if pivot == 0.0 {
                pivot = -1e-300;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn smallest(&self) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.count_below(hi) == 0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) == 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for `mu` by the tridiagonal three-term recurrence.
    fn vector(&self, mu: f64) -> Vec<f64> {
        let m = self.diag.len();
        let mut v = vec![0.0; m];
        v[0] = 1.0;
        v[1] = -(self.diag[0] - mu * self.weight[0]) * v[0] / self.off[0];
        for i in 1..m - 1 {
            v[i + 1] = -((self.diag[i] - mu * self.weight[i]) * v[i] + self.off[i - 1] * v[i - 1])
                / self.off[i];
        }
        v
    }
}

/// First eigenvalue of the radial problem by finite differences at
/// `cells` and `2 * cells`, Richardson-extrapolated.
pub fn fd_radial_mu1(k: f64, n: usize, radius: f64, cells: usize) -> f64 {
    let coarse = fd_pencil(k, n, radius, cells).smallest();
    let fine = fd_pencil(k, n, radius, 2 * cells).smallest();
    (4.0 * fine - coarse) / 3.0
}

/// The bound constant C computed from a finite-difference eigenvector.
///
/// R and R' are supplied by the caller (from closed-form volume inversion).
/// Integrals use the trapezoid rule on the FD grid; the whole constant is
/// Richardson-extrapolated across `cells` and `2 * cells`.
pub fn fd_theorem_constant(
    n: usize,
    k: f64,
    big_k: f64,
    radius: f64,
    radius_prime: f64,
    diameter: f64,
    cells: usize,
) -> f64 {
    let nm1 = (n - 1) as i32;
    let ratio_r = (sin_m(big_k, radius) / sin_m(k, radius)).powi(nm1);
    let ratio_d = (sin_m(big_k, diameter) / sin_m(k, diameter)).powi(nm1);
    let integral_ratio = |cells: usize| {
        let pencil = fd_pencil(k, n, radius, cells);
        let mu = pencil.smallest();
        let h = radius / cells as f64;
        let mut f = vec![0.0];
        f.extend(pencil.vector(mu));
        let value = |i: usize| f[i];
        let num = trapezoid(|i| value(i).powi(2) * sin_m(k, i as f64 * h).powi(nm1), h, cells, radius);
        let den = trapezoid_partial(&f, h, radius_prime, |r| sin_m(big_k, r).powi(nm1));
        num / den
    };
    let c1 = integral_ratio(cells);
    let c2 = integral_ratio(2 * cells);
    ratio_r * ratio_d * (4.0 * c2 - c1) / 3.0
}

fn trapezoid(g: impl Fn(usize) -> f64, h: f64, cells: usize, _upper: f64) -> f64 {
    let mut sum = 0.5 * (g(0) + g(cells));
    for i in 1..cells {
        sum += g(i);
    }
    sum * h
}

/// ∫₀^upper F² w dr with F linearly interpolated between grid nodes.
fn trapezoid_partial(f: &[f64], h: f64, upper: f64, w: impl Fn(f64) -> f64) -> f64 {
    let full = (upper / h).floor() as usize;
    let full = full.min(f.len() - 1);
    let mut sum = 0.0;
    for i in 0..full {
        let a = f[i].powi(2) * w(i as f64 * h);
        let b = f[i + 1].powi(2) * w((i + 1) as f64 * h);
        sum += 0.5 * h * (a + b);
    }
    let rest = upper - full as f64 * h;
    if rest > 0.0 && full + 1 < f.len() {
        let t = rest / h;
        let f_end = f[full] + t * (f[full + 1] - f[full]);
        let a = f[full].powi(2) * w(full as f64 * h);
        let b = f_end.powi(2) * w(upper);
        sum += 0.5 * rest * (a + b);
    }
    sum
}

/// ∫₀^R sin_m(r) dr in closed form, times 2π: area of a geodesic disk.
pub fn disk_area(m: f64, radius: f64) -> f64 {
    if m > 0.0 {
        2.0 * PI * (1.0 - (m.sqrt() * radius).cos()) / m
    } else if m < 0.0 {
        2.0 * PI * (((-m).sqrt() * radius).cosh() - 1.0) / (-m)
    } else {
        PI * radius * radius
    }
}

/// Inverse of [`disk_area`] in closed form.
pub fn disk_radius(m: f64, area: f64) -> f64 {
    if m > 0.0 {
        (1.0 - m * area / (2.0 * PI)).acos() / m.sqrt()
    } else if m < 0.0 {
        (1.0 - m * area / (2.0 * PI)).acosh() / (-m).sqrt()
    } else {
        (area / PI).sqrt()
    }
}

/// Length of the model-coordinate segment from the origin to radius `s`
/// under the conformal factor 1/(1 + kappa t²/4), by composite Simpson.
pub fn radial_model_length(kappa: f64, s: f64, panels: usize) -> f64 {
    let lambda = |t: f64| 1.0 / (1.0 + kappa * t * t / 4.0);
    let h = s / panels as f64;
    let mut sum = lambda(0.0) + lambda(s);
    for i in 1..panels {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * lambda(i as f64 * h);
    }
    sum * h / 3.0
}

/// Area of the star-shaped region {s < σ(θ)} in the conformal model with
/// factor 1/(1 + κs²/4): the radial integral is done in closed form,
/// ∫₀^σ λ² s ds = σ²/(2(1 + κσ²/4)), and the angular one by the periodic
/// trapezoid rule.
pub fn star_domain_area(kappa: f64, sigma: impl Fn(f64) -> f64, samples: usize) -> f64 {
    let h = 2.0 * PI / samples as f64;
    (0..samples)
        .map(|i| {
            let s = sigma(i as f64 * h);
            s * s / (2.0 * (1.0 + kappa * s * s / 4.0))
        })
        .sum::<f64>()
        * h
}

/// Geodesic distance from the point-pair invariants of the Poincaré disk
/// (κ < 0) and of stereographic coordinates on the sphere (κ > 0).
pub fn point_pair_distance(kappa: f64, x: [f64; 2], y: [f64; 2]) -> f64 {
    let diff = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
    if kappa == 0.0 {
        return diff.sqrt();
    }
    let c = kappa.abs().sqrt();
    let scale = c * c / 4.0;
    let (u2, v2, d2) = (
        scale * (x[0] * x[0] + x[1] * x[1]),
        scale * (y[0] * y[0] + y[1] * y[1]),
        scale * diff,
    );
    if kappa < 0.0 {
        (1.0 + 2.0 * d2 / ((1.0 - u2) * (1.0 - v2))).acosh() / c
    } else {
        (1.0 - 2.0 * d2 / ((1.0 + u2) * (1.0 + v2))).clamp(-1.0, 1.0).acos() / c
    }
}

/// Largest [`point_pair_distance`] over `samples` equally spaced boundary
/// angles.
pub fn star_domain_diameter(kappa: f64, sigma: impl Fn(f64) -> f64, samples: usize) -> f64 {
    let points: Vec<[f64; 2]> = (0..samples)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / samples as f64;
            let s = sigma(t);
            [s * t.cos(), s * t.sin()]
        })
        .collect();
    let mut best = 0.0f64;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            best = best.max(point_pair_distance(kappa, p, q));
        }
    }
    best
}
