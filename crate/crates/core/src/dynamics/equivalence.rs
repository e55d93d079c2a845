//! Cross-check of the three formulations from matched initial data.

use serde::{Deserialize, Serialize};

use super::hamilton::{integrate_hamilton, HamiltonState};
use super::lagrange::{charges_lagrange, integrate_lagrange, LagrangeState};
use super::schwarz::{exact_solution, integrate_schwarz, schwarzian_along, SchwarzState};
use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::mobius::Mobius;
use crate::ode::IntegratorConfig;
use crate::schwarzian::schwarzian_jet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub lambda: f64,
    pub nu: f64,
    pub samples: usize,
    pub max_dev_schwarz_lagrange: f64,
    pub max_dev_schwarz_hamilton: f64,
    pub max_dev_lagrange_hamilton: f64,
    /// Largest of the three pairwise ρ deviations.
    pub max_pairwise_deviation: f64,
    /// Largest ρ deviation of any formulation from the closed-form solution,
    /// when the seed is one.
    pub max_exact_deviation: Option<f64>,
    /// `max |S(ρ(t)) − λ|` over all three trajectories.
    pub schwarzian_drift: f64,
    /// `max |H − (λ/2 + ν²)|` along the Lagrangian trajectory.
    pub energy_residual: f64,
}

/// Runs the comparison from the closed-form seed `φ_λ` at `t = 0`.
pub fn equivalence_check(
    lambda: f64,
    nu: f64,
    cfg: &IntegratorConfig,
) -> Result<EquivalenceReport> {
    let m = Mobius::IDENTITY;
    let seed = exact_solution(lambda, &m, 0.0)?;
    let exact = |t: f64| exact_solution(lambda, &m, t).map(|j| j.f);
    equivalence_check_from(&seed, nu, cfg, Some(&exact))
}

/// Runs the comparison from an arbitrary ρ-jet; λ is its Schwarzian.
pub fn equivalence_check_from(
    seed: &Jet3,
    nu: f64,
    cfg: &IntegratorConfig,
    exact: Option<&dyn Fn(f64) -> Result<f64>>,
) -> Result<EquivalenceReport> {
    let lambda = schwarzian_jet(seed)?;
    let third = integrate_schwarz(&SchwarzState::from_jet(seed), lambda, cfg)?.into_result()?;
    let l0 = LagrangeState::on_shell(seed, nu)?;
    let lag = integrate_lagrange(&l0, nu, cfg)?.into_result()?;
    let ham = integrate_hamilton(&HamiltonState::from_lagrange(&l0, nu), nu, cfg)?.into_result()?;
    if third.len() != lag.len() || lag.len() != ham.len() {
        return Err(Error::InvalidParameter(
            "trajectories are not on a common grid".into(),
        ));
    }

    let max_dev = |a: &dyn Fn(usize) -> f64, b: &dyn Fn(usize) -> f64| {
        (0..third.len())
            .map(|i| (a(i) - b(i)).abs())
            .fold(0.0, f64::max)
    };
    let rho_s = |i: usize| third[i].rho;
    let rho_l = |i: usize| lag[i].rho;
    let rho_h = |i: usize| ham[i].rho;
    let sl = max_dev(&rho_s, &rho_l);
    let sh = max_dev(&rho_s, &rho_h);
    let lh = max_dev(&rho_l, &rho_h);

    let max_exact_deviation = match exact {
        Some(f) => {
            let mut worst = 0.0f64;
            for i in 0..third.len() {
                let e = f(third[i].t)?;
                worst = worst
                    .max((rho_s(i) - e).abs())
                    .max((rho_l(i) - e).abs())
                    .max((rho_h(i) - e).abs());
            }
            Some(worst)
        }
        None => None,
    };

    let mut schwarzian_drift = 0.0f64;
    for s in schwarzian_along(&third)? {
        schwarzian_drift = schwarzian_drift.max((s - lambda).abs());
    }
    for (l, h) in lag.iter().zip(&ham) {
        schwarzian_drift = schwarzian_drift
            .max((schwarzian_jet(&l.rho_jet(nu))? - lambda).abs())
            .max((schwarzian_jet(&h.rho_jet(nu))? - lambda).abs());
    }

    let target = 0.5 * lambda + nu * nu;
    let energy_residual = lag
        .iter()
        .map(|st| (charges_lagrange(st, nu).h - target).abs())
        .fold(0.0, f64::max);

    Ok(EquivalenceReport {
        lambda,
        nu,
        samples: third.len(),
        max_dev_schwarz_lagrange: sl,
        max_dev_schwarz_hamilton: sh,
        max_dev_lagrange_hamilton: lh,
        max_pairwise_deviation: sl.max(sh).max(lh),
        max_exact_deviation,
        schwarzian_drift,
        energy_residual,
    })
}
