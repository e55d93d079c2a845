//! The Eisenhart metric
//! `ds² = 2(dt dv − 2νs dt dρ + s² dρ² + dρ ds)` in coordinates
//! `(t, v, ρ, s)`, plus the generic point data the curvature code consumes.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub const DIM: usize = 4;
pub const T: usize = 0;
pub const V: usize = 1;
pub const RHO: usize = 2;
pub const S: usize = 3;

pub type Vec4 = [f64; DIM];
pub type Mat4 = [[f64; DIM]; DIM];
/// `a[i][j][k]`, row-major in coordinate order.
pub type Tensor3 = [[[f64; DIM]; DIM]; DIM];
pub type Tensor4 = [[[[f64; DIM]; DIM]; DIM]; DIM];

pub const ZERO3: Tensor3 = [[[0.0; DIM]; DIM]; DIM];
pub const ZERO4: Tensor4 = [[[[0.0; DIM]; DIM]; DIM]; DIM];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coord4 {
    pub t: f64,
    pub v: f64,
    pub rho: f64,
    pub s: f64,
}

impl Coord4 {
    pub const fn new(t: f64, v: f64, rho: f64, s: f64) -> Self {
        Self { t, v, rho, s }
    }

    pub fn to_array(self) -> Vec4 {
        [self.t, self.v, self.rho, self.s]
    }

    pub fn from_array(a: Vec4) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// Shifted along coordinate axis `axis` by `h`.
    pub fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut a = self.to_array();
        a[axis] += h;
        Self::from_array(a)
    }
}

/// Metric data at a point: `g_MN`, `g^MN`, `∂_P g_MN` and `∂_P ∂_Q g_MN`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPoint {
    pub x: Coord4,
    pub g: Mat4,
    pub g_inv: Mat4,
    /// `dg[p][m][n] = ∂_p g_mn`
    pub dg: Tensor3,
    /// `ddg[p][q][m][n] = ∂_p ∂_q g_mn`
    pub ddg: Tensor4,
}

impl MetricPoint {
    /// `∂_p g^{mn} = −g^{ma} ∂_p g_ab g^{bn}`.
    pub fn dg_inv(&self) -> Tensor3 {
        let mut out = ZERO3;
        for p in 0..DIM {
            for m in 0..DIM {
                for n in 0..DIM {
                    let mut acc = 0.0;
                    for a in 0..DIM {
                        for b in 0..DIM {
                            acc += self.g_inv[m][a] * self.dg[p][a][b] * self.g_inv[b][n];
                        }
                    }
                    out[p][m][n] = -acc;
                }
            }
        }
        out
    }

    /// `max |g·g⁻¹ − I|`.
    pub fn inverse_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..DIM {
            for j in 0..DIM {
                let prod: f64 = (0..DIM).map(|k| self.g[i][k] * self.g_inv[k][j]).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod - id).abs());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec4 {
        let m = Matrix4::from_fn(|i, j| self.g[i][j]);
        let eig = SymmetricEigen::new(m);
        let mut vals: Vec4 = std::array::from_fn(|i| eig.eigenvalues[i]);
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }

    /// Numbers of positive and negative eigenvalues.
    pub fn signature(&self) -> (usize, usize) {
        let vals = self.eigenvalues();
        let pos = vals.iter().filter(|&&e| e > 0.0).count();
        let neg = vals.iter().filter(|&&e| e < 0.0).count();
        (pos, neg)
    }

    /// `g^{MN} p_M p_N / 2`.
    pub fn half_norm_covector(&self, p: &Vec4) -> f64 {
        let mut acc = 0.0;
        for m in 0..DIM {
            for n in 0..DIM {
                acc += self.g_inv[m][n] * p[m] * p[n];
            }
        }
        0.5 * acc
    }

    /// `g_{MA} k^A`.
    pub fn lower(&self, k: &Vec4) -> Vec4 {
        std::array::from_fn(|m| (0..DIM).map(|a| self.g[m][a] * k[a]).sum())
    }
}

/// A smooth metric that can be sampled with up to second derivatives.
pub trait MetricField {
    fn metric_at(&self, x: &Coord4) -> MetricPoint;
}

/// The Eisenhart lift of the Schwarzian model with coupling `ν`. Every
/// component depends on `s` alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EisenhartMetric {
    pub nu: f64,
}

impl EisenhartMetric {
    pub fn new(nu: f64) -> Self {
        Self { nu }
    }
}

impl MetricField for EisenhartMetric {
    fn metric_at(&self, x: &Coord4) -> MetricPoint {
        let (nu, s) = (self.nu, x.s);
        let mut g = [[0.0; DIM]; DIM];
        g[T][V] = 1.0;
        g[V][T] = 1.0;
        g[T][RHO] = -2.0 * nu * s;
        g[RHO][T] = -2.0 * nu * s;
        g[RHO][RHO] = 2.0 * s * s;
        g[RHO][S] = 1.0;
        g[S][RHO] = 1.0;

        let mut g_inv = [[0.0; DIM]; DIM];
        g_inv[T][V] = 1.0;
        g_inv[V][T] = 1.0;
        g_inv[V][S] = 2.0 * nu * s;
        g_inv[S][V] = 2.0 * nu * s;
        g_inv[RHO][S] = 1.0;
        g_inv[S][RHO] = 1.0;
        g_inv[S][S] = -2.0 * s * s;

        let mut dg = ZERO3;
        dg[S][T][RHO] = -2.0 * nu;
        dg[S][RHO][T] = -2.0 * nu;
        dg[S][RHO][RHO] = 4.0 * s;

        let mut ddg = ZERO4;
        ddg[S][S][RHO][RHO] = 4.0;

        MetricPoint {
            x: *x,
            g,
            g_inv,
            dg,
            ddg,
        }
    }
}

/// Metric data of the Eisenhart metric at `x`.
pub fn metric_at(x: &Coord4, nu: f64) -> MetricPoint {
    EisenhartMetric::new(nu).metric_at(x)
}

/// Eisenhart metric with `g_ρρ` deformed by `ε s³`. It no longer solves the
/// Einstein equations with the Eisenhart stress tensor, so verification
/// suites run against it must fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbedEisenhart {
    pub nu: f64,
    pub epsilon: f64,
}

impl MetricField for PerturbedEisenhart {
    fn metric_at(&self, x: &Coord4) -> MetricPoint {
        let mut mp = EisenhartMetric::new(self.nu).metric_at(x);
        let (eps, s) = (self.epsilon, x.s);
        mp.g[RHO][RHO] += eps * s * s * s;
        mp.dg[S][RHO][RHO] += 3.0 * eps * s * s;
        mp.ddg[S][S][RHO][RHO] += 6.0 * eps * s;
        let inv = Matrix4::from_fn(|i, j| mp.g[i][j])
            .try_inverse()
            .expect("perturbed metric stays invertible: det g = 1 regardless of g_ρρ");
        mp.g_inv = std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)]));
        mp
    }
}
