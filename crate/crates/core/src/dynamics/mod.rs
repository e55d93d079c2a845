//! Schwarzian mechanics `S(ρ) = λ` in three equivalent formulations: the
//! third-order equation itself, the two-field Lagrangian built from the
//! Maurer–Cartan forms, and its Hamiltonian.

pub mod conservation;
pub mod equivalence;
pub mod hamilton;
pub mod lagrange;
pub mod schwarz;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use conservation::{drift, peak, Drift};
pub use equivalence::{equivalence_check, equivalence_check_from, EquivalenceReport};
pub use hamilton::{h2d, hamilton_rhs, integrate_hamilton, HamiltonState};
pub use lagrange::{charges_lagrange, integrate_lagrange, lagrange_rhs, LagrangeState};
pub use schwarz::{
    charges_schwarz, exact_solution, integrate_schwarz, schwarz_rhs, schwarzian_along, SchwarzState,
};

/// Integration halts once `|ρ|` or `|ρ̇|` exceeds this bound.
pub const BLOW_UP_LIMIT: f64 = 1e12;

/// Noether charges of time translation and the three SL(2,R) generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Charges {
    pub h: f64,
    pub p: f64,
    pub d: f64,
    pub k: f64,
}

impl Charges {
    /// `P·K − D² − λ/2`, zero on-shell for the third-order charges.
    pub fn casimir_residual(&self, lambda: f64) -> f64 {
        self.p * self.k - self.d * self.d - 0.5 * lambda
    }
}

/// States recorded on the output grid. `halt` holds the reason when the run
/// stopped before `t_end`; `states` then ends at the last good sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub states: Vec<S>,
    pub halt: Option<Error>,
}

impl<S> Trajectory<S> {
    pub fn completed(&self) -> bool {
        self.halt.is_none()
    }

    pub fn into_result(self) -> Result<Vec<S>> {
        match self.halt {
            None => Ok(self.states),
            Some(e) => Err(e),
        }
    }
}

pub(crate) fn blow_up_guard(t: f64, values: &[f64]) -> Result<()> {
    for &v in values {
        if !v.is_finite() || v.abs() > BLOW_UP_LIMIT {
            return Err(Error::BlowUp { t, value: v });
        }
    }
    Ok(())
}
