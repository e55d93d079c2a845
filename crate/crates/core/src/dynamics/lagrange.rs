//! Two-field Lagrangian `L = ρ̇(ṡ + s²ρ̇ − 2νs)`.

use serde::{Deserialize, Serialize};

use super::{blow_up_guard, Charges, Trajectory};
use crate::coset::impose_constraints;
use crate::error::Result;
use crate::jet::Jet3;
use crate::ode::{integrate, IntegratorConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangeState {
    pub t: f64,
    pub rho: f64,
    pub rho_dot: f64,
    pub s: f64,
    pub s_dot: f64,
}

impl LagrangeState {
    /// Data on the constraint surface `s = ν/ρ̇ + ρ̈/(2ρ̇²)` built from a
    /// third-order ρ-jet.
    pub fn on_shell(rho: &Jet3, nu: f64) -> Result<Self> {
        // μ = ρ̇ puts u at 0; s and ṡ do not depend on μ
        let c = impose_constraints(rho, rho.f1, nu)?;
        Ok(Self {
            t: rho.x0,
            rho: rho.f,
            rho_dot: rho.f1,
            s: c.s,
            s_dot: c.s_dot,
        })
    }

    /// ρ-jet implied by the equations of motion.
    pub fn rho_jet(&self, nu: f64) -> Jet3 {
        let [_, acc, s_dot, _] = lagrange_rhs(self, nu);
        let v = self.rho_dot;
        let jerk = 2.0 * s_dot * v * v + 4.0 * self.s * v * acc - 2.0 * nu * acc;
        Jet3::new(self.t, self.rho, v, acc, jerk)
    }

    fn to_array(self) -> [f64; 4] {
        [self.rho, self.rho_dot, self.s, self.s_dot]
    }

    fn from_array(t: f64, y: &[f64; 4]) -> Self {
        Self {
            t,
            rho: y[0],
            rho_dot: y[1],
            s: y[2],
            s_dot: y[3],
        }
    }
}

/// Euler–Lagrange equations solved for `(ρ̈, s̈)`; returns
/// `(ρ̇, ρ̈, ṡ, s̈)`.
pub fn lagrange_rhs(st: &LagrangeState, nu: f64) -> [f64; 4] {
    let LagrangeState {
        rho_dot: v,
        s,
        s_dot,
        ..
    } = *st;
    let acc = 2.0 * s * v * v - 2.0 * nu * v;
    let s_ddot = -4.0 * s * s_dot * v - 2.0 * s * s * acc + 2.0 * nu * s_dot;
    [v, acc, s_dot, s_ddot]
}

/// Noether charges of the action.
///
/// On the constraint surface `h = λ/2 + ν²`, `p` and `k` coincide with the
/// third-order integrals, and `d` is shifted from them by the constant `−ν`.
pub fn charges_lagrange(st: &LagrangeState, nu: f64) -> Charges {
    let LagrangeState {
        rho,
        rho_dot: v,
        s,
        s_dot,
        ..
    } = *st;
    let p = s_dot + 2.0 * s * s * v - 2.0 * nu * s;
    Charges {
        h: v * (s_dot + s * s * v),
        p,
        d: rho * p - s * v,
        k: rho * rho * p + (1.0 - 2.0 * s * rho) * v + 2.0 * nu * rho,
    }
}

pub fn integrate_lagrange(
    init: &LagrangeState,
    nu: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<LagrangeState>> {
    let sol = integrate(
        init.t,
        init.to_array(),
        cfg,
        |t, y| Ok(lagrange_rhs(&LagrangeState::from_array(t, y), nu)),
        |t, y| blow_up_guard(t, &y[..2]),
    )?;
    Ok(Trajectory {
        states: sol
            .t
            .iter()
            .zip(&sol.y)
            .map(|(&t, y)| LagrangeState::from_array(t, y))
            .collect(),
        halt: sol.halt,
    })
}
