//! Geodesics as the Hamiltonian flow of `H₄ = ½ g^{MN} p_M p_N`, and their
//! null reduction along `v`.

use serde::{Deserialize, Serialize};

use super::metric::{Coord4, MetricField, Vec4, DIM};
use super::EisenhartMetric;
use crate::dynamics::{blow_up_guard, HamiltonState, Trajectory};
use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::ode::{integrate, IntegratorConfig};

/// Index of each momentum in `p`, matching the coordinate order.
pub const P_T: usize = 0;
pub const P_V: usize = 1;
pub const P_RHO: usize = 2;
pub const P_S: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPhase {
    pub x: Coord4,
    /// `(p_t, p_v, p_ρ, p_s)`
    pub p: Vec4,
}

impl GeodesicPhase {
    /// Null initial data: `p_t` is solved from `H₄ = 0`, which requires
    /// `p_v ≠ 0`.
    pub fn null(x: Coord4, p_v: f64, p_rho: f64, p_s: f64, nu: f64) -> Result<Self> {
        if p_v == 0.0 {
            return Err(Error::NonReducible);
        }
        let s = x.s;
        let rest = p_s * (p_rho - s * s * p_s + 2.0 * nu * s * p_v);
        Ok(Self {
            x,
            p: [-rest / p_v, p_v, p_rho, p_s],
        })
    }

    /// Null lift of a point of the two-field phase space with `p_v = 1`.
    pub fn lift(st: &HamiltonState, v: f64, nu: f64) -> Result<Self> {
        Self::null(
            Coord4::new(st.t, v, st.rho, st.s),
            1.0,
            st.p_rho,
            st.p_s,
            nu,
        )
    }

    /// The `(ρ, s, p_ρ, p_s)` sector, stamped with the coordinate time.
    pub fn project(&self) -> HamiltonState {
        HamiltonState {
            t: self.x.t,
            rho: self.x.rho,
            s: self.x.s,
            p_rho: self.p[P_RHO],
            p_s: self.p[P_S],
        }
    }

    /// Jet of `ρ` as a function of the coordinate time `t`, read off the
    /// Eisenhart geodesic equations. Needs `p_v ≠ 0`, since `dt/dτ = p_v`.
    pub fn rho_jet(&self, nu: f64) -> Result<Jet3> {
        let p_v = self.p[P_V];
        if p_v == 0.0 {
            return Err(Error::NonReducible);
        }
        let (s, p_rho, p_s) = (self.x.s, self.p[P_RHO], self.p[P_S]);
        let s_dot = p_rho - 2.0 * s * s * p_s + 2.0 * nu * s * p_v;
        let acc = 2.0 * s * p_s * p_s - 2.0 * nu * p_s * p_v;
        let jerk = 2.0 * s_dot * p_s * p_s + 4.0 * s * p_s * acc - 2.0 * nu * p_v * acc;
        Ok(Jet3::new(
            self.x.t,
            self.x.rho,
            p_s / p_v,
            acc / (p_v * p_v),
            jerk / (p_v * p_v * p_v),
        ))
    }

    fn to_array(self) -> [f64; 8] {
        let x = self.x.to_array();
        [
            x[0], x[1], x[2], x[3], self.p[0], self.p[1], self.p[2], self.p[3],
        ]
    }

    fn from_array(y: &[f64; 8]) -> Self {
        Self {
            x: Coord4::new(y[0], y[1], y[2], y[3]),
            p: [y[4], y[5], y[6], y[7]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    /// Affine parameter.
    pub tau: f64,
    pub phase: GeodesicPhase,
}

pub fn h4d_in<M: MetricField + ?Sized>(field: &M, phase: &GeodesicPhase) -> f64 {
    field.metric_at(&phase.x).half_norm_covector(&phase.p)
}

pub fn h4d(phase: &GeodesicPhase, nu: f64) -> f64 {
    h4d_in(&EisenhartMetric::new(nu), phase)
}

/// `ẋ^M = g^{MN} p_N`, `ṗ_M = −½ ∂_M g^{AB} p_A p_B`.
pub fn geodesic_rhs_in<M: MetricField + ?Sized>(field: &M, phase: &GeodesicPhase) -> [f64; 8] {
    let mp = field.metric_at(&phase.x);
    let dg_inv = mp.dg_inv();
    let p = &phase.p;
    let mut out = [0.0; 8];
    for m in 0..DIM {
        out[m] = (0..DIM).map(|n| mp.g_inv[m][n] * p[n]).sum();
        let mut acc = 0.0;
        for a in 0..DIM {
            for b in 0..DIM {
                acc += dg_inv[m][a][b] * p[a] * p[b];
            }
        }
        out[DIM + m] = -0.5 * acc;
    }
    out
}

pub fn geodesic_flow_in<M: MetricField + ?Sized>(
    field: &M,
    init: &GeodesicPhase,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<GeodesicState>> {
    let sol = integrate(
        0.0,
        init.to_array(),
        cfg,
        |_, y| Ok(geodesic_rhs_in(field, &GeodesicPhase::from_array(y))),
        |tau, y| blow_up_guard(tau, y),
    )?;
    Ok(Trajectory {
        states: sol
            .t
            .iter()
            .zip(&sol.y)
            .map(|(&tau, y)| GeodesicState {
                tau,
                phase: GeodesicPhase::from_array(y),
            })
            .collect(),
        halt: sol.halt,
    })
}

/// Geodesic of the Eisenhart metric; `cfg.t_end` bounds the affine parameter
/// starting from 0.
pub fn geodesic_flow(
    init: &GeodesicPhase,
    nu: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<GeodesicState>> {
    geodesic_flow_in(&EisenhartMetric::new(nu), init, cfg)
}
