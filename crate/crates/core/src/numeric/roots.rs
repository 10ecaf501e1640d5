//! Bracketed scalar root finding: regula falsi (Illinois variant) with a
//! bisection fallback whenever the bracket stops shrinking.

use crate::error::{Error, Result};

/// Finds a root of `f` in `[lo, hi]` given values of opposite sign at the
/// ends. Stops once the bracket is narrower than `x_tol`.
pub fn bracketed_root(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f_hi: f64,
    x_tol: f64,
) -> Result<f64> {
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::InvalidInput(format!(
            "root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    // Illinois: halve the stale endpoint's value when the same side is kept twice.
    let mut kept_side = 0i8;
    for iteration in 0..400 {
        let width = hi - lo;
        if width.abs() <= x_tol {
            break;
        }
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let interior = secant > lo.min(hi) && secant < lo.max(hi);
        let x = if interior && iteration % 4 != 3 {
            secant
        } else {
            0.5 * (lo + hi)
        };
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_hi.signum() {
            hi = x;
            f_hi = fx;
            if kept_side == -1 {
                f_lo *= 0.5;
            }
            kept_side = -1;
        } else {
            lo = x;
            f_lo = fx;
            if kept_side == 1 {
                f_hi *= 0.5;
            }
            kept_side = 1;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let f = |x: f64| Ok(x * x - 2.0);
        let r = bracketed_root(f, 0.0, 2.0, -2.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn flat_function_still_converges() {
        let f = |x: f64| Ok((x - 0.3f64).powi(7));
        let r = bracketed_root(f, 0.0, 1.0, f(0.0).unwrap(), f(1.0).unwrap(), 1e-12).unwrap();
        assert!((r - 0.3).abs() < 1e-6);
    }

    #[test]
    fn rejects_unbracketed() {
        let f = |x: f64| Ok(x * x + 1.0);
        assert!(bracketed_root(f, -1.0, 1.0, 2.0, 2.0, 1e-12).is_err());
    }
}
