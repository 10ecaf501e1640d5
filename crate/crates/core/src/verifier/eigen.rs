//! Smallest nonzero eigenpair of a singular pencil A u = μ M u whose null
//! space is the constant vector.
//!
//! Shift-invert subspace iteration on (A + εM)⁻¹M with the constant mode
//! projected out in the M inner product after every solve, followed by a
//! Rayleigh-Ritz step on the block.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::numeric::sparse::{CsrMatrix, EnvelopeCholesky};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig {
    /// Relative shift, scaled by trace(A)/trace(M).
    pub relative_shift: f64,
    pub max_iterations: usize,
    /// Stop once the Ritz value changes by less than this (relative).
    pub value_tolerance: f64,
    /// ... and the relative residual of the Ritz vector is below this.
    pub residual_tolerance: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            relative_shift: 1e-8,
            max_iterations: 300,
            value_tolerance: 1e-12,
            residual_tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub value: f64,
    /// M-normalized, M-orthogonal to the constant vector.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Removes the component along the constant vector: x ← x − (1ᵀMx / 1ᵀM1)·1.
fn deflate(x: &mut [f64], m_ones: &[f64], ones_m_ones: f64) {
    let c = dot(m_ones, x) / ones_m_ones;
    x.iter_mut().for_each(|v| *v -= c);
}

/// Deterministic filler in [-1, 1] (splitmix64 on the index).
fn scramble(seed: u64, i: usize) -> f64 {
    let mut z = seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

/// M-orthonormalizes the block in place (two passes of modified
/// Gram-Schmidt), refilling columns that collapse.
fn m_orthonormalize(block: &mut [Vec<f64>], m: &CsrMatrix, m_ones: &[f64], ones_m_ones: f64, refill_seed: &mut u64) {
    for j in 0..block.len() {
        for attempt in 0..3 {
            let before = dot(&block[j], &m.mul_vec(&block[j])).max(0.0).sqrt();
            for _ in 0..2 {
                for i in 0..j {
                    let mi = m.mul_vec(&block[i]);
                    let c = dot(&mi, &block[j]);
                    let (head, tail) = block.split_at_mut(j);
                    tail[0].iter_mut().zip(&head[i]).for_each(|(v, q)| *v -= c * q);
                }
            }
            let after = dot(&block[j], &m.mul_vec(&block[j])).max(0.0).sqrt();
            if after > 1e-10 * before && after > 0.0 {
                block[j].iter_mut().for_each(|v| *v /= after);
                break;
            }
            assert!(attempt < 2, "cannot complete an M-orthonormal block");
            *refill_seed += 1;
            let seed = *refill_seed;
            for (i, v) in block[j].iter_mut().enumerate() {
                *v = scramble(seed, i);
            }
            deflate(&mut block[j], m_ones, ones_m_ones);
        }
    }
}

/// Computes the smallest eigenvalue of A u = μ M u on the M-orthogonal
/// complement of the constant vector. `start` supplies the initial block.
pub fn smallest_nonzero(a: &CsrMatrix, m: &CsrMatrix, start: Vec<Vec<f64>>, config: &EigenConfig) -> Result<EigenSolution> {
    let n = a.dim();
    if m.dim() != n || start.is_empty() || start.iter().any(|v| v.len() != n) {
        return Err(Error::InvalidInput("eigen solver: dimension mismatch".into()));
    }
    if start.len() + 1 > n {
        return Err(Error::InvalidInput("eigen solver: block larger than the problem".into()));
    }
    let shift = config.relative_shift * a.trace() / m.trace();
    let shifted = a.add_scaled(shift, m)?;
    let factor = EnvelopeCholesky::factor(&shifted, shifted.reverse_cuthill_mckee())?;

    let m_ones = m.mul_vec(&vec![1.0; n]);
    let ones_m_ones: f64 = m_ones.iter().sum();
    let mut seed = 0x5EED_u64;

    let mut block = start;
    for v in block.iter_mut() {
        deflate(v, &m_ones, ones_m_ones);
    }
    m_orthonormalize(&mut block, m, &m_ones, ones_m_ones, &mut seed);

    let mut previous = f64::INFINITY;
    let mut last_change = f64::INFINITY;
    let mut last_residual = f64::INFINITY;
    for iteration in 1..=config.max_iterations {
        for v in block.iter_mut() {
            let mut y = factor.solve(&m.mul_vec(v));
            deflate(&mut y, &m_ones, ones_m_ones);
            *v = y;
        }
        m_orthonormalize(&mut block, m, &m_ones, ones_m_ones, &mut seed);

        // Rayleigh-Ritz: block is M-orthonormal, so the projected pencil is
        // the standard symmetric problem QᵀAQ.
        let p = block.len();
        let a_block: Vec<Vec<f64>> = block.iter().map(|v| a.mul_vec(v)).collect();
        let mut projected = DMatrix::<f64>::zeros(p, p);
        for i in 0..p {
            for j in 0..=i {
                let value = 0.5 * (dot(&block[i], &a_block[j]) + dot(&block[j], &a_block[i]));
                projected[(i, j)] = value;
                projected[(j, i)] = value;
            }
        }
        let eig = SymmetricEigen::new(projected);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let rotated: Vec<Vec<f64>> = order
            .iter()
            .map(|&c| {
                let mut x = vec![0.0; n];
                for (k, v) in block.iter().enumerate() {
                    let w = eig.eigenvectors[(k, c)];
                    x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += w * vi);
                }
                x
            })
            .collect();
        block = rotated;

        let value = eig.eigenvalues[order[0]];
        let ax = a.mul_vec(&block[0]);
        let mx = m.mul_vec(&block[0]);
        let r: Vec<f64> = ax.iter().zip(&mx).map(|(p, q)| p - value * q).collect();
        let residual = norm(&r) / (norm(&ax) + value.abs() * norm(&mx)).max(f64::MIN_POSITIVE);
        let change = ((value - previous) / value).abs();
        previous = value;
        last_change = change;
        last_residual = residual;
        if change < config.value_tolerance && residual < config.residual_tolerance {
            return Ok(EigenSolution {
                value,
                vector: block.swap_remove(0),
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "shift-invert subspace iteration",
        iterations: config.max_iterations,
        change: last_change,
        residual: last_residual,
    })
}

/// Pseudo-random start vector used to enrich a block deterministically.
pub(crate) fn filler_vector(n: usize, seed: u64) -> Vec<f64> {
    (0..n).map(|i| scramble(seed, i)).collect()
}
