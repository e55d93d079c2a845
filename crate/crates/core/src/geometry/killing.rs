//! The five Killing vector fields of the Eisenhart metric.

use serde::{Deserialize, Serialize};

use super::curvature::christoffel;
use super::metric::{Coord4, Mat4, MetricField, Vec4, DIM, RHO, S, V};
use super::EisenhartMetric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KillingField {
    /// `∂_v`, covariantly constant.
    Xi,
    /// `∂_t`
    Chi,
    /// `∂_ρ`
    Phi,
    /// `ρ∂_ρ − s∂_s`
    Psi,
    /// `ρ²∂_ρ + (1 − 2ρs)∂_s + 2νρ∂_v`
    Zeta,
}

impl KillingField {
    pub const ALL: [KillingField; 5] = [
        KillingField::Xi,
        KillingField::Chi,
        KillingField::Phi,
        KillingField::Psi,
        KillingField::Zeta,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            KillingField::Xi => "xi",
            KillingField::Chi => "chi",
            KillingField::Phi => "phi",
            KillingField::Psi => "psi",
            KillingField::Zeta => "zeta",
        }
    }

    /// Contravariant components `k^M` at `x`.
    pub fn components(&self, x: &Coord4, nu: f64) -> Vec4 {
        let (rho, s) = (x.rho, x.s);
        match self {
            KillingField::Xi => [0.0, 1.0, 0.0, 0.0],
            KillingField::Chi => [1.0, 0.0, 0.0, 0.0],
            KillingField::Phi => [0.0, 0.0, 1.0, 0.0],
            KillingField::Psi => [0.0, 0.0, rho, -s],
            KillingField::Zeta => [0.0, 2.0 * nu * rho, rho * rho, 1.0 - 2.0 * rho * s],
        }
    }

    /// `jac[m][a] = ∂_m k^a`.
    pub fn jacobian(&self, x: &Coord4, nu: f64) -> Mat4 {
        let (rho, s) = (x.rho, x.s);
        let mut j = [[0.0; DIM]; DIM];
        match self {
            KillingField::Xi | KillingField::Chi | KillingField::Phi => {}
            KillingField::Psi => {
                j[RHO][RHO] = 1.0;
                j[S][S] = -1.0;
            }
            KillingField::Zeta => {
                j[RHO][V] = 2.0 * nu;
                j[RHO][RHO] = 2.0 * rho;
                j[RHO][S] = -2.0 * s;
                j[S][S] = -2.0 * rho;
            }
        }
        j
    }

    /// Conserved momentum `k^M p_M` along geodesics.
    pub fn charge(&self, x: &Coord4, p: &Vec4, nu: f64) -> f64 {
        self.components(x, nu)
            .iter()
            .zip(p)
            .map(|(k, p)| k * p)
            .sum()
    }
}

/// `cov[m][n] = ∇_m k_n = ∂_m (g_na k^a) − Γ^a_mn k_a`.
pub fn covariant_derivative_lowered<M: MetricField + ?Sized>(
    field: &M,
    k: KillingField,
    x: &Coord4,
    nu: f64,
) -> Mat4 {
    let mp = field.metric_at(x);
    let gamma = christoffel(&mp);
    let up = k.components(x, nu);
    let jac = k.jacobian(x, nu);
    let down = mp.lower(&up);
    std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            let mut v = 0.0;
            for a in 0..DIM {
                v += mp.dg[m][n][a] * up[a] + mp.g[n][a] * jac[m][a] - gamma[a][m][n] * down[a];
            }
            v
        })
    })
}

/// `max |∇_M k_N + ∇_N k_M|`.
pub fn killing_residual_in<M: MetricField + ?Sized>(
    field: &M,
    k: KillingField,
    x: &Coord4,
    nu: f64,
) -> f64 {
    let cov = covariant_derivative_lowered(field, k, x, nu);
    let mut worst = 0.0f64;
    for m in 0..DIM {
        for n in 0..DIM {
            worst = worst.max((cov[m][n] + cov[n][m]).abs());
        }
    }
    worst
}

pub fn killing_residual(k: KillingField, x: &Coord4, nu: f64) -> f64 {
    killing_residual_in(&EisenhartMetric::new(nu), k, x, nu)
}

/// `max |∇_M ξ_N|` for `ξ = ∂_v`.
pub fn covariant_constancy_residual_in<M: MetricField + ?Sized>(
    field: &M,
    x: &Coord4,
    nu: f64,
) -> f64 {
    covariant_derivative_lowered(field, KillingField::Xi, x, nu)
        .iter()
        .flatten()
        .fold(0.0f64, |w, v| w.max(v.abs()))
}

pub fn covariant_constancy_residual(x: &Coord4, nu: f64) -> f64 {
    covariant_constancy_residual_in(&EisenhartMetric::new(nu), x, nu)
}
