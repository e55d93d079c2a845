//! Null-dust stress tensor built from the Killing covectors `ξ = ∂_v` and
//! `χ = ∂_t`, and the Einstein-equation residual.

use std::f64::consts::PI;

use super::curvature::curvature;
use super::metric::{Coord4, Mat4, MetricField, MetricPoint, DIM, T, V};
use super::EisenhartMetric;

/// `T_MN = −(ν²/4π) ξ_M ξ_N − (1/4π)(ξ_M χ_N + ξ_N χ_M)` with
/// `ξ_M = g_{Mv}` and `χ_M = g_{Mt}`.
pub fn stress_tensor_at(mp: &MetricPoint, nu: f64) -> Mat4 {
    let xi: [f64; DIM] = std::array::from_fn(|m| mp.g[m][V]);
    let chi: [f64; DIM] = std::array::from_fn(|m| mp.g[m][T]);
    std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            -(nu * nu / (4.0 * PI)) * xi[m] * xi[n] - (xi[m] * chi[n] + xi[n] * chi[m]) / (4.0 * PI)
        })
    })
}

pub fn stress_tensor(x: &Coord4, nu: f64) -> Mat4 {
    stress_tensor_at(&EisenhartMetric::new(nu).metric_at(x), nu)
}

/// `max |G_MN − 8π T_MN|` for an arbitrary metric field, with the stress
/// tensor built from that field's own `g`.
pub fn einstein_residual_in<M: MetricField + ?Sized>(field: &M, x: &Coord4, nu: f64) -> f64 {
    let mp = field.metric_at(x);
    let c = curvature(field, x);
    let t = stress_tensor_at(&mp, nu);
    let mut worst = 0.0f64;
    for m in 0..DIM {
        for n in 0..DIM {
            worst = worst.max((c.einstein[m][n] - 8.0 * PI * t[m][n]).abs());
        }
    }
    worst
}

pub fn einstein_residual(x: &Coord4, nu: f64) -> f64 {
    einstein_residual_in(&EisenhartMetric::new(nu), x, nu)
}

/// `g^{MN} T_MN`.
pub fn stress_trace(mp: &MetricPoint, nu: f64) -> f64 {
    let t = stress_tensor_at(mp, nu);
    (0..DIM)
        .flat_map(|m| (0..DIM).map(move |n| (m, n)))
        .map(|(m, n)| mp.g_inv[m][n] * t[m][n])
        .sum()
}
