//! Dormand–Prince 5(4) integrator with embedded error control.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order solution minus embedded fourth-order solution.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl DormandPrince {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            max_steps: 200_000,
        }
    }

    /// Advances `y` from `t0` to `t1` (t1 > t0) starting with trial step `h`.
    ///
    /// `observe` sees every accepted state. Returns the final state and the
    /// step size to try next.
    pub fn integrate<const N: usize>(
        &self,
        rhs: impl Fn(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t1: f64,
        h: f64,
        mut observe: impl FnMut(f64, &[f64; N]),
    ) -> Result<([f64; N], f64)> {
        let mut t = t0;
        let mut y = y0;
        let mut h = h.min(t1 - t0).max(f64::MIN_POSITIVE);
        let mut k = [[0.0; N]; 7];
        let mut steps = 0;
        while t < t1 {
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::Integrator {
                    at: t,
                    reason: format!("exceeded {} steps", self.max_steps),
                });
            }
            let last = t + h >= t1;
            let step = if last { t1 - t } else { h };
            k[0] = rhs(t, &y);
            for s in 1..7 {
                let mut ys = y;
                for (i, yi) in ys.iter_mut().enumerate() {
                    *yi += step * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
                }
                k[s] = rhs(t + C[s] * step, &ys);
            }
            let mut y_new = y;
            let mut err_sq = 0.0;
            for i in 0..N {
                y_new[i] += step * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>();
                let err = step * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err_sq += (err / scale).powi(2);
            }
            let err = (err_sq / N as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::Integrator {
                    at: t,
                    reason: "non-finite state".into(),
                });
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = if last { t1 } else { t + step };
                y = y_new;
                observe(t, &y);
                if !last {
                    h = step * factor;
                }
            } else {
                h = step * factor.min(1.0);
                if h <= 1e-15 * t.abs().max(1e-300) {
                    return Err(Error::Integrator {
                        at: t,
                        reason: format!("step size underflow (h = {h:e})"),
                    });
                }
            }
        }
        Ok((y, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let dp = DormandPrince::new(1e-12, 1e-14);
        let (y, _) = dp
            .integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 10.0, 0.1, |_, _| {})
            .unwrap();
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((y[1] - 10f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn exponential_growth_relative_accuracy() {
        let dp = DormandPrince::new(1e-11, 0.0);
        let (y, _) = dp
            .integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 20.0, 1e-3, |_, _| {})
            .unwrap();
        assert!((y[0] / 20f64.exp() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn singular_rhs_reports_failure() {
        let dp = DormandPrince::new(1e-10, 1e-12);
        let r = dp.integrate(|t, y: &[f64; 1]| [y[0] / (1.0 - t).powi(3)], 0.0, [1.0], 2.0, 0.1, |_, _| {});
        assert!(matches!(r, Err(Error::Integrator { .. })));
    }
}
