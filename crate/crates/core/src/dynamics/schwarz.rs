//! The third-order equation `S(ρ) = λ`, written as a first-order system in
//! `(ρ, ρ̇, ρ̈)`.

use serde::{Deserialize, Serialize};

use super::{blow_up_guard, Charges, Trajectory};
use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::mobius::Mobius;
use crate::ode::{integrate, IntegratorConfig};
use crate::sampled::derivative_fourth_order;
use crate::schwarzian::{check_velocity, schwarzian_jet, DEFAULT_EPS_VELOCITY};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchwarzState {
    pub t: f64,
    pub rho: f64,
    pub rho_dot: f64,
    pub rho_ddot: f64,
}

impl SchwarzState {
    /// Initial data read off a ρ-jet (the third derivative is implied by λ).
    pub fn from_jet(j: &Jet3) -> Self {
        Self {
            t: j.x0,
            rho: j.f,
            rho_dot: j.f1,
            rho_ddot: j.f2,
        }
    }

    /// Full third-order jet, with `ρ⃛` supplied by the equation of motion.
    pub fn jet(&self, lambda: f64) -> Result<Jet3> {
        let [_, _, jerk] = schwarz_rhs(self, lambda)?;
        Ok(Jet3::new(
            self.t,
            self.rho,
            self.rho_dot,
            self.rho_ddot,
            jerk,
        ))
    }

    fn to_array(self) -> [f64; 3] {
        [self.rho, self.rho_dot, self.rho_ddot]
    }

    fn from_array(t: f64, y: &[f64; 3]) -> Self {
        Self {
            t,
            rho: y[0],
            rho_dot: y[1],
            rho_ddot: y[2],
        }
    }
}

/// `(ρ̇, ρ̈, ρ⃛)` with `ρ⃛ = λρ̇ + (3/2)ρ̈²/ρ̇`.
pub fn schwarz_rhs(st: &SchwarzState, lambda: f64) -> Result<[f64; 3]> {
    check_velocity(st.rho_dot, DEFAULT_EPS_VELOCITY)?;
    let jerk = lambda * st.rho_dot + 1.5 * st.rho_ddot * st.rho_ddot / st.rho_dot;
    Ok([st.rho_dot, st.rho_ddot, jerk])
}

pub fn integrate_schwarz(
    init: &SchwarzState,
    lambda: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<SchwarzState>> {
    let sol = integrate(
        init.t,
        init.to_array(),
        cfg,
        |t, y| schwarz_rhs(&SchwarzState::from_array(t, y), lambda),
        |t, y| {
            blow_up_guard(t, &y[..2])?;
            check_velocity(y[1], DEFAULT_EPS_VELOCITY)
                .map_err(|_| Error::VelocityVanishesAt { t, velocity: y[1] })
        },
    )?;
    Ok(Trajectory {
        states: sol
            .t
            .iter()
            .zip(&sol.y)
            .map(|(&t, y)| SchwarzState::from_array(t, y))
            .collect(),
        halt: sol.halt,
    })
}

/// Seed solution `φ_λ`: `tan(√(λ/2) t)`, `t`, or `e^{√(−2λ) t}` by sign of λ.
fn seed_jet(lambda: f64, t: f64) -> Jet3 {
    let x = Jet3::variable(t);
    if lambda > 0.0 {
        (x * (0.5 * lambda).sqrt()).tan()
    } else if lambda < 0.0 {
        (x * (-2.0 * lambda).sqrt()).exp()
    } else {
        x
    }
}

/// Jet at `t` of the closed-form solution `m ∘ φ_λ`; every solution of
/// `S(ρ) = λ` has this form.
pub fn exact_solution(lambda: f64, m: &Mobius, t: f64) -> Result<Jet3> {
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be finite, got {lambda}"
        )));
    }
    let seed = seed_jet(lambda, t);
    if !seed.is_finite() {
        return Err(Error::PoleCrossing {
            denominator: 0.0,
            eps: 0.0,
        });
    }
    m.apply_jet(&seed)
}

/// Integrals of motion of the third-order equation.
///
/// `h` is reported as `λ/2`: this formulation carries no `ν`, so the
/// Lagrangian energy `λ/2 + ν²` is only available from [`super::charges_lagrange`].
pub fn charges_schwarz(st: &SchwarzState, lambda: f64) -> Result<Charges> {
    check_velocity(st.rho_dot, DEFAULT_EPS_VELOCITY)?;
    let (rho, v, a) = (st.rho, st.rho_dot, st.rho_ddot);
    let ratio = a / v;
    let p = (lambda + 0.5 * ratio * ratio) / (2.0 * v);
    Ok(Charges {
        h: 0.5 * lambda,
        p,
        d: rho * p - a / (2.0 * v),
        k: rho * rho * p + v - rho * a / v,
    })
}

/// Schwarzian along a uniformly sampled trajectory, with `ρ⃛` recovered by
/// fourth-order differencing of the `ρ̈` samples rather than from λ.
pub fn schwarzian_along(states: &[SchwarzState]) -> Result<Vec<f64>> {
    if states.len() < 5 {
        return Err(Error::InvalidPath(format!(
            "need at least 5 states, got {}",
            states.len()
        )));
    }
    let h = (states[states.len() - 1].t - states[0].t) / (states.len() - 1) as f64;
    let acc: Vec<f64> = states.iter().map(|s| s.rho_ddot).collect();
    let jerk = derivative_fourth_order(&acc, h)?;
    states
        .iter()
        .zip(jerk)
        .map(|(s, j)| schwarzian_jet(&Jet3::new(s.t, s.rho, s.rho_dot, s.rho_ddot, j)))
        .collect()
}
