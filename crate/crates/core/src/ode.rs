//! Explicit Runge–Kutta integrators for autonomous-or-not first-order
//! systems on fixed-size state arrays.
//!
//! Both methods report states on the uniform grid `t0 + i·h`: RK4 steps on it
//! directly, RK45 adapts its internal steps between consecutive grid points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    /// RK4 step, or output spacing for RK45.
    pub step: f64,
    pub atol: f64,
    pub rtol: f64,
    pub t_end: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk4,
            step: 1e-3,
            atol: 1e-12,
            rtol: 1e-12,
            t_end: 1.0,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(step: f64, t_end: f64) -> Self {
        Self {
            step,
            t_end,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.step.is_finite() && self.step > 0.0) {
            return bad(format!("step must be positive, got {}", self.step));
        }
        if self.atol.is_nan() || self.rtol.is_nan() || self.atol <= 0.0 || self.rtol <= 0.0 {
            return bad(format!(
                "tolerances must be positive, got atol={} rtol={}",
                self.atol, self.rtol
            ));
        }
        if !self.t_end.is_finite() {
            return bad("t_end must be finite".into());
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        Ok(())
    }

    /// Number of grid intervals on `[t0, t_end]` and the adjusted spacing.
    pub fn grid(&self, t0: f64) -> Result<(usize, f64)> {
        self.validate()?;
        let span = self.t_end - t0;
        if span.is_nan() || span <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "t_end {} must exceed the initial time {t0}",
                self.t_end
            )));
        }
        let n = ((span / self.step) - 1e-9).ceil().max(1.0) as usize;
        Ok((n, span / n as f64))
    }
}

/// Grid samples of an integration, possibly cut short by `halt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub halt: Option<Error>,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * k[i])
}

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn locate(err: Error, t: f64) -> Error {
    match err {
        Error::VelocityVanishes { velocity, .. } => Error::VelocityVanishesAt { t, velocity },
        other => other,
    }
}

pub fn rk4_step<const N: usize, F>(rhs: &mut F, t: f64, y: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let k1 = rhs(t, y)?;
    let k2 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k1))?;
    let k3 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k2))?;
    let k4 = rhs(t + h, &axpy(y, h, &k3))?;
    Ok(combine(
        y,
        h / 6.0,
        &[(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)],
    ))
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 1.0 / 5.0;
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step; returns the fifth-order solution and the
/// embedded error estimate.
fn dopri_step<const N: usize, F>(
    rhs: &mut F,
    t: f64,
    y: &[f64; N],
    h: f64,
) -> Result<([f64; N], [f64; N])>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let k1 = rhs(t, y)?;
    let k2 = rhs(t + C[1] * h, &axpy(y, h * A21, &k1))?;
    let k3 = rhs(t + C[2] * h, &combine(y, h, &[(A3[0], &k1), (A3[1], &k2)]))?;
    let k4 = rhs(
        t + C[3] * h,
        &combine(y, h, &[(A4[0], &k1), (A4[1], &k2), (A4[2], &k3)]),
    )?;
    let k5 = rhs(
        t + C[4] * h,
        &combine(
            y,
            h,
            &[(A5[0], &k1), (A5[1], &k2), (A5[2], &k3), (A5[3], &k4)],
        ),
    )?;
    let k6 = rhs(
        t + C[5] * h,
        &combine(
            y,
            h,
            &[
                (A6[0], &k1),
                (A6[1], &k2),
                (A6[2], &k3),
                (A6[3], &k4),
                (A6[4], &k5),
            ],
        ),
    )?;
    let ks = [&k1, &k2, &k3, &k4, &k5, &k6];
    let y5 = combine(
        y,
        h,
        &ks.iter()
            .zip(&B5)
            .map(|(k, &b)| (b, *k))
            .collect::<Vec<_>>(),
    );
    let k7 = rhs(t + h, &y5)?;
    let all = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
    let err = std::array::from_fn(|i| {
        h * all
            .iter()
            .enumerate()
            .map(|(s, k)| (B5[s] - B4[s]) * k[i])
            .sum::<f64>()
    });
    Ok((y5, err))
}

/// Integrates `y' = rhs(t, y)` from `(t0, y0)` to `cfg.t_end`.
///
/// `guard` is called on every recorded state and may stop the run; the
/// samples gathered so far are kept in the returned solution.
pub fn integrate<const N: usize, F, G>(
    t0: f64,
    y0: [f64; N],
    cfg: &IntegratorConfig,
    mut rhs: F,
    mut guard: G,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    G: FnMut(f64, &[f64; N]) -> Result<()>,
{
    let (n, h) = cfg.grid(t0)?;
    guard(t0, &y0)?;
    rhs(t0, &y0).map_err(|e| locate(e, t0))?;

    let mut sol = Solution {
        t: vec![t0],
        y: vec![y0],
        halt: None,
    };
    let mut y = y0;
    let mut steps = 0usize;
    let mut h_adapt = h;

    for i in 0..n {
        let t_start = t0 + i as f64 * h;
        let t_next = if i + 1 == n {
            cfg.t_end
        } else {
            t0 + (i + 1) as f64 * h
        };
        let advanced = match cfg.method {
            Method::Rk4 => {
                steps += 1;
                if steps > cfg.max_steps {
                    Err(Error::StepLimitExceeded {
                        t: t_start,
                        max_steps: cfg.max_steps,
                    })
                } else {
                    rk4_step(&mut rhs, t_start, &y, t_next - t_start)
                }
            }
            Method::Rk45 => {
                adaptive_segment(&mut rhs, t_start, t_next, &y, cfg, &mut h_adapt, &mut steps)
            }
        };
        let next = advanced.and_then(|y_next| {
            guard(t_next, &y_next)?;
            Ok(y_next)
        });
        match next {
            Ok(y_next) => {
                y = y_next;
                sol.t.push(t_next);
                sol.y.push(y);
            }
            Err(e) => {
                sol.halt = Some(locate(e, t_start));
                break;
            }
        }
    }
    Ok(sol)
}

fn adaptive_segment<const N: usize, F>(
    rhs: &mut F,
    t_start: f64,
    t_stop: f64,
    y0: &[f64; N],
    cfg: &IntegratorConfig,
    h: &mut f64,
    steps: &mut usize,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut t = t_start;
    let mut y = *y0;
    while t < t_stop {
        *steps += 1;
        if *steps > cfg.max_steps {
            return Err(Error::StepLimitExceeded {
                t,
                max_steps: cfg.max_steps,
            });
        }
        let remaining = t_stop - t;
        let last = *h >= remaining * (1.0 - 1e-12);
        let h_try = if last { remaining } else { *h };
        if h_try <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }
        let (y_new, err) = dopri_step(rhs, t, &y, h_try).map_err(|e| locate(e, t))?;
        let norm = (err
            .iter()
            .zip(y.iter().zip(&y_new))
            .map(|(e, (a, b))| {
                let scale = cfg.atol + cfg.rtol * a.abs().max(b.abs());
                (e / scale).powi(2)
            })
            .sum::<f64>()
            / N as f64)
            .sqrt();
        let factor = if norm == 0.0 {
            5.0
        } else {
            (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        if norm <= 1.0 {
            t = if last { t_stop } else { t + h_try };
            y = y_new;
            if !last {
                *h = h_try * factor;
            }
        } else {
            *h = h_try * factor;
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], -y[0]])
    }

    #[test]
    fn rk4_is_fourth_order() {
        let run = |h: f64| {
            let cfg = IntegratorConfig::rk4(h, 1.0);
            let sol = integrate(0.0, [1.0, 0.0], &cfg, oscillator, |_, _| Ok(())).unwrap();
            (sol.y.last().unwrap()[0] - 1f64.cos()).abs()
        };
        let ratio = run(0.05) / run(0.025);
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn grid_is_uniform_and_hits_t_end() {
        let cfg = IntegratorConfig::rk4(0.3, 1.0);
        let sol = integrate(0.0, [1.0, 0.0], &cfg, oscillator, |_, _| Ok(())).unwrap();
        assert_eq!(sol.t.len(), 5);
        assert_eq!(*sol.t.last().unwrap(), 1.0);
        assert!((sol.t[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rk45_meets_tolerance_on_grid() {
        let cfg = IntegratorConfig {
            method: Method::Rk45,
            step: 0.1,
            atol: 1e-11,
            rtol: 1e-11,
            ..IntegratorConfig::default()
        };
        let sol = integrate(0.0, [1.0, 0.0], &cfg, oscillator, |_, _| Ok(())).unwrap();
        assert_eq!(sol.t.len(), 11);
        for (t, y) in sol.t.iter().zip(&sol.y) {
            assert!((y[0] - t.cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn guard_and_step_limit_halt_with_partial_output() {
        let cfg = IntegratorConfig::rk4(0.1, 1.0);
        let sol = integrate(0.0, [1.0, 0.0], &cfg, oscillator, |t, _| {
            if t > 0.45 {
                Err(Error::BlowUp { t, value: 0.0 })
            } else {
                Ok(())
            }
        })
        .unwrap();
        assert_eq!(sol.t.len(), 5);
        assert!(matches!(sol.halt, Some(Error::BlowUp { .. })));

        let cfg = IntegratorConfig {
            max_steps: 3,
            ..IntegratorConfig::rk4(0.1, 1.0)
        };
        let sol = integrate(0.0, [1.0, 0.0], &cfg, oscillator, |_, _| Ok(())).unwrap();
        assert_eq!(sol.t.len(), 4);
        assert!(matches!(
            sol.halt,
            Some(Error::StepLimitExceeded { max_steps: 3, .. })
        ));
    }

    #[test]
    fn invalid_config_rejected() {
        let bad = IntegratorConfig {
            step: -1.0,
            ..IntegratorConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = IntegratorConfig {
            t_end: -1.0,
            ..IntegratorConfig::default()
        };
        assert!(integrate(0.0, [0.0], &bad, |_, _| Ok([0.0]), |_, _| Ok(())).is_err());
    }
}
