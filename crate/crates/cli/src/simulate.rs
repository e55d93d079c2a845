use serde::Serialize;

use schwarzian_core::dynamics::{
    charges_lagrange, charges_schwarz, h2d, integrate_hamilton, integrate_lagrange,
    integrate_schwarz, schwarzian_along, Trajectory,
};
use schwarzian_core::geometry::{geodesic_flow, h4d};
use schwarzian_core::Error;

use crate::charges::{summarize, ChargeParams, ChargeSummary};
use crate::config::{InitialState, RunConfig};
use crate::table::{Schema, Table};
use crate::ARTIFACT_VERSION;

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn from_error(e: &Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug
            .split([' ', '(', '{'])
            .next()
            .unwrap_or_default()
            .to_string();
        Failure {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub command: &'static str,
    pub artifact_version: &'static str,
    pub config: RunConfig,
    pub rows: usize,
    pub completed: bool,
    pub failure: Option<Failure>,
    pub charges: Option<ChargeSummary>,
}

fn split<S>(r: Result<Trajectory<S>, Error>) -> (Vec<S>, Option<Error>) {
    match r {
        Ok(t) => (t.states, t.halt),
        Err(e) => (Vec::new(), Some(e)),
    }
}

/// Integrates from the configured seed. A run that cannot even start
/// yields an empty table and the reason.
pub fn run(cfg: &RunConfig, init: &InitialState) -> (Table, Option<Error>) {
    let ic = &cfg.integrator;
    match *init {
        InitialState::Schwarz(s0) => {
            let lambda = cfg.lambda.unwrap_or_default();
            let (states, halt) = split(integrate_schwarz(&s0, lambda, ic));
            let mut table = Table::new(Schema::Schwarz);
            let s_of_rho =
                schwarzian_along(&states).unwrap_or_else(|_| vec![f64::NAN; states.len()]);
            for (st, s) in states.iter().zip(s_of_rho) {
                let (p, d, k, cas) = match charges_schwarz(st, lambda) {
                    Ok(q) => (q.p, q.d, q.k, q.casimir_residual(lambda)),
                    Err(_) => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
                };
                table.push(vec![st.t, st.rho, st.rho_dot, st.rho_ddot, s, p, d, k, cas]);
            }
            (table, halt)
        }
        InitialState::Lagrange(l0) => {
            let nu = cfg.nu.unwrap_or_default();
            let (states, halt) = split(integrate_lagrange(&l0, nu, ic));
            let mut table = Table::new(Schema::Lagrange);
            for st in &states {
                let q = charges_lagrange(st, nu);
                table.push(vec![
                    st.t, st.rho, st.rho_dot, st.s, st.s_dot, q.h, q.p, q.d, q.k,
                ]);
            }
            (table, halt)
        }
        InitialState::Hamilton(h0) => {
            let nu = cfg.nu.unwrap_or_default();
            let (states, halt) = split(integrate_hamilton(&h0, nu, ic));
            let mut table = Table::new(Schema::Hamilton);
            for st in &states {
                table.push(vec![st.t, st.rho, st.s, st.p_rho, st.p_s, h2d(st, nu)]);
            }
            (table, halt)
        }
        InitialState::Geodesic(g0) => {
            let nu = cfg.nu.unwrap_or_default();
            let (states, halt) = split(geodesic_flow(&g0, nu, ic));
            let mut table = Table::new(Schema::Geodesic);
            for st in &states {
                let (x, p) = (st.phase.x, st.phase.p);
                table.push(vec![
                    st.tau,
                    x.t,
                    x.v,
                    x.rho,
                    x.s,
                    p[0],
                    p[1],
                    p[2],
                    p[3],
                    h4d(&st.phase, nu),
                ]);
            }
            (table, halt)
        }
    }
}

/// Report for a finished run; `charges` is recomputed from the table
/// exactly as `charges` would from the CSV.
pub fn report(cfg: &RunConfig, table: &Table, halt: Option<Error>) -> SimulateReport {
    let mut failure = halt.as_ref().map(Failure::from_error);
    let charges = if table.rows.is_empty() {
        None
    } else {
        match summarize(
            table,
            ChargeParams {
                lambda: cfg.lambda,
                nu: cfg.nu,
            },
        ) {
            Ok(s) => Some(s),
            Err(e) => {
                failure.get_or_insert(Failure {
                    kind: "Charges".into(),
                    message: e.to_string(),
                });
                None
            }
        }
    };
    SimulateReport {
        command: "simulate",
        artifact_version: ARTIFACT_VERSION,
        config: cfg.clone(),
        rows: table.rows.len(),
        completed: halt.is_none(),
        failure,
        charges,
    }
}
