//! Finite-difference Schwarzian on uniformly sampled trajectories.

use crate::error::{Error, Result};
use crate::schwarzian::{check_velocity, DEFAULT_EPS_VELOCITY};

/// Minimum number of samples a path must carry.
pub const MIN_SAMPLES: usize = 7;

const SPACING_RTOL: f64 = 1e-12;

/// Values `y[i] = ρ(t[i])` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    t: Vec<f64>,
    y: Vec<f64>,
    h: f64,
}

impl SampledPath {
    pub fn new(t: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if t.len() != y.len() {
            return Err(Error::InvalidPath(format!(
                "{} times but {} values",
                t.len(),
                y.len()
            )));
        }
        if t.len() < MIN_SAMPLES {
            return Err(Error::InvalidPath(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                t.len()
            )));
        }
        let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidPath(format!("non-positive spacing {h}")));
        }
        for (i, w) in t.windows(2).enumerate() {
            let step = w[1] - w[0];
            if ((step - h) / h).abs() > SPACING_RTOL {
                return Err(Error::InvalidPath(format!(
                    "non-uniform spacing at index {i}: {step} vs {h}"
                )));
            }
        }
        Ok(Self { t, y, h })
    }

    /// Samples `f` at `t0 + i·h` for `i < n`.
    pub fn from_fn(t0: f64, h: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let t: Vec<f64> = (0..n).map(|i| t0 + i as f64 * h).collect();
        let y = t.iter().map(|&x| f(x)).collect();
        Self::new(t, y)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    /// Second-order central estimates of the first three derivatives at `i`.
    pub fn derivatives_at(&self, i: usize) -> Result<[f64; 3]> {
        if i < 3 || i + 4 > self.len() {
            return Err(Error::IndexOutOfStencil {
                index: i,
                len: self.len(),
            });
        }
        let y = &self.y;
        let h = self.h;
        let d1 = (y[i + 1] - y[i - 1]) / (2.0 * h);
        let d2 = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
        let d3 = (y[i + 2] - 2.0 * y[i + 1] + 2.0 * y[i - 1] - y[i - 2]) / (2.0 * h * h * h);
        Ok([d1, d2, d3])
    }
}

/// Schwarzian estimated from the samples around interior index `i`; the
/// error is O(h²) on smooth paths.
pub fn schwarzian_sampled(p: &SampledPath, i: usize) -> Result<f64> {
    schwarzian_sampled_with(p, i, DEFAULT_EPS_VELOCITY)
}

pub fn schwarzian_sampled_with(p: &SampledPath, i: usize, eps_velocity: f64) -> Result<f64> {
    let [d1, d2, d3] = p.derivatives_at(i)?;
    check_velocity(d1, eps_velocity)?;
    let ratio = d2 / d1;
    Ok(d3 / d1 - 1.5 * ratio * ratio)
}

/// Fourth-order first derivative of uniformly spaced samples: central
/// five-point stencil in the interior, one-sided five-point stencils at the
/// two ends of each boundary.
pub fn derivative_fourth_order(values: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 5 {
        return Err(Error::InvalidPath(format!(
            "need at least 5 samples, got {n}"
        )));
    }
    let f = values;
    let d = 12.0 * h;
    let mut out = vec![0.0; n];
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / d;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / d;
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / d;
    }
    let m = n - 1;
    out[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / d;
    out[m] =
        (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / d;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_uneven_paths() {
        assert!(SampledPath::from_fn(0.0, 0.1, 6, |t| t).is_err());
        let mut t: Vec<f64> = (0..8).map(|i| i as f64 * 0.1).collect();
        t[4] += 1e-6;
        assert!(matches!(
            SampledPath::new(t, vec![0.0; 8]),
            Err(Error::InvalidPath(_))
        ));
        assert!(SampledPath::new(vec![0.0; 8], vec![0.0; 7]).is_err());
    }

    #[test]
    fn stencil_bounds() {
        let p = SampledPath::from_fn(0.0, 0.01, 10, |t| t).unwrap();
        assert!(matches!(
            schwarzian_sampled(&p, 2),
            Err(Error::IndexOutOfStencil { index: 2, len: 10 })
        ));
        assert!(schwarzian_sampled(&p, 3).is_ok());
        assert!(schwarzian_sampled(&p, 6).is_ok());
        assert!(schwarzian_sampled(&p, 7).is_err());
    }

    #[test]
    fn straight_line_is_flat() {
        let p = SampledPath::from_fn(-0.05, 0.01, 11, |t| t).unwrap();
        for i in 3..8 {
            assert!(schwarzian_sampled(&p, i).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn constant_path_is_singular() {
        let p = SampledPath::from_fn(0.0, 0.01, 9, |_| 1.0).unwrap();
        assert!(matches!(
            schwarzian_sampled(&p, 4),
            Err(Error::VelocityVanishes { .. })
        ));
    }

    #[test]
    fn fourth_order_derivative_is_exact_on_quartics() {
        let h = 0.1;
        let f = |t: f64| 1.0 - 2.0 * t + 0.5 * t * t + t.powi(3) - 0.25 * t.powi(4);
        let df = |t: f64| -2.0 + t + 3.0 * t * t - t.powi(3);
        let ts: Vec<f64> = (0..9).map(|i| i as f64 * h).collect();
        let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        let d = derivative_fourth_order(&vals, h).unwrap();
        for (t, got) in ts.iter().zip(d) {
            assert!((got - df(*t)).abs() < 1e-12, "{t}: {got}");
        }
        assert!(derivative_fourth_order(&vals[..4], h).is_err());
    }

    #[test]
    fn tangent_and_exponential() {
        let h = 1e-3;
        let tan = SampledPath::from_fn(-5.0 * h, h, 11, f64::tan).unwrap();
        let s = schwarzian_sampled(&tan, 5).unwrap();
        assert!((s - 2.0).abs() < 10.0 * h * h, "{s}");
        let exp = SampledPath::from_fn(-5.0 * h, h, 11, f64::exp).unwrap();
        let s = schwarzian_sampled(&exp, 5).unwrap();
        assert!((s + 0.5).abs() < 10.0 * h * h, "{s}");
    }
}
