//! Hamiltonian `H₂ = p_s (p_ρ − s² p_s + 2ν s)` of the two-field model.

use serde::{Deserialize, Serialize};

use super::lagrange::LagrangeState;
use super::{blow_up_guard, Trajectory};
use crate::error::Result;
use crate::jet::Jet3;
use crate::ode::{integrate, IntegratorConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonState {
    pub t: f64,
    pub rho: f64,
    pub s: f64,
    pub p_rho: f64,
    pub p_s: f64,
}

impl HamiltonState {
    /// Legendre map `p_ρ = ṡ + 2s²ρ̇ − 2νs`, `p_s = ρ̇`.
    pub fn from_lagrange(st: &LagrangeState, nu: f64) -> Self {
        Self {
            t: st.t,
            rho: st.rho,
            s: st.s,
            p_rho: st.s_dot + 2.0 * st.s * st.s * st.rho_dot - 2.0 * nu * st.s,
            p_s: st.rho_dot,
        }
    }

    /// Inverse Legendre map.
    pub fn to_lagrange(&self, nu: f64) -> LagrangeState {
        let [rho_dot, s_dot, _, _] = hamilton_rhs(self, nu);
        LagrangeState {
            t: self.t,
            rho: self.rho,
            rho_dot,
            s: self.s,
            s_dot,
        }
    }

    /// ρ-jet implied by the canonical equations.
    pub fn rho_jet(&self, nu: f64) -> Jet3 {
        let [v, s_dot, _, acc] = hamilton_rhs(self, nu);
        let jerk =
            2.0 * s_dot * self.p_s * self.p_s + 4.0 * self.s * self.p_s * acc - 2.0 * nu * acc;
        Jet3::new(self.t, self.rho, v, acc, jerk)
    }

    fn to_array(self) -> [f64; 4] {
        [self.rho, self.s, self.p_rho, self.p_s]
    }

    fn from_array(t: f64, y: &[f64; 4]) -> Self {
        Self {
            t,
            rho: y[0],
            s: y[1],
            p_rho: y[2],
            p_s: y[3],
        }
    }
}

pub fn h2d(st: &HamiltonState, nu: f64) -> f64 {
    st.p_s * (st.p_rho - st.s * st.s * st.p_s + 2.0 * nu * st.s)
}

/// Canonical equations; returns `(ρ̇, ṡ, ṗ_ρ, ṗ_s)`. `ṗ_ρ` is identically 0.
pub fn hamilton_rhs(st: &HamiltonState, nu: f64) -> [f64; 4] {
    let HamiltonState { s, p_rho, p_s, .. } = *st;
    [
        p_s,
        p_rho - 2.0 * s * s * p_s + 2.0 * nu * s,
        0.0,
        2.0 * s * p_s * p_s - 2.0 * nu * p_s,
    ]
}

pub fn integrate_hamilton(
    init: &HamiltonState,
    nu: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<HamiltonState>> {
    let sol = integrate(
        init.t,
        init.to_array(),
        cfg,
        |t, y| Ok(hamilton_rhs(&HamiltonState::from_array(t, y), nu)),
        |t, y| blow_up_guard(t, &[y[0], y[3]]),
    )?;
    Ok(Trajectory {
        states: sol
            .t
            .iter()
            .zip(&sol.y)
            .map(|(&t, y)| HamiltonState::from_array(t, y))
            .collect(),
        halt: sol.halt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::lagrange::{charges_lagrange, lagrange_rhs};
    use approx::assert_relative_eq;

    #[test]
    fn degenerate_leaf() {
        let st = HamiltonState {
            t: 0.0,
            rho: 1.0,
            s: 0.5,
            p_rho: 2.0,
            p_s: 0.0,
        };
        let [rho_dot, s_dot, dp_rho, dp_s] = hamilton_rhs(&st, 1.5);
        assert_eq!((rho_dot, dp_rho, dp_s), (0.0, 0.0, 0.0));
        assert_eq!(s_dot, 2.0 + 2.0 * 1.5 * 0.5);
    }

    #[test]
    fn legendre_map_intertwines_flows() {
        let nu = 0.7;
        let l = LagrangeState {
            t: 0.0,
            rho: 0.3,
            rho_dot: 1.2,
            s: -0.4,
            s_dot: 0.9,
        };
        let h = HamiltonState::from_lagrange(&l, nu);
        let back = h.to_lagrange(nu);
        assert_relative_eq!(back.s_dot, l.s_dot, epsilon = 1e-15);
        assert_eq!(h.p_rho, charges_lagrange(&l, nu).p);
        assert_relative_eq!(h2d(&h, nu), charges_lagrange(&l, nu).h, epsilon = 1e-14);

        // ṗ_s = ρ̈ and d/dt p_ρ = 0 = dP/dt
        let [_, acc, _, _] = lagrange_rhs(&l, nu);
        assert_relative_eq!(hamilton_rhs(&h, nu)[3], acc, epsilon = 1e-14);
    }

    #[test]
    fn energy_is_conserved_with_fourth_order_drift() {
        let init = HamiltonState {
            t: 0.0,
            rho: 0.0,
            s: 0.2,
            p_rho: 0.5,
            p_s: 1.0,
        };
        let nu = 0.5;
        let drift = |h: f64| {
            let traj = integrate_hamilton(&init, nu, &IntegratorConfig::rk4(h, 1.0))
                .unwrap()
                .into_result()
                .unwrap();
            let e0 = h2d(&traj[0], nu);
            let worst = traj
                .iter()
                .map(|s| (h2d(s, nu) - e0).abs())
                .fold(0.0, f64::max);
            assert!(traj.iter().all(|s| s.p_rho == init.p_rho));
            worst
        };
        assert!(drift(1e-3) <= 1e-10);
        let ratio = drift(0.02) / drift(0.01);
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }
}
