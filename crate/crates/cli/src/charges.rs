//! Conserved quantities recomputed from trajectory columns.

use serde::Serialize;

use schwarzian_core::dynamics::{
    charges_lagrange, charges_schwarz, drift, h2d, peak, Charges, HamiltonState, LagrangeState,
    SchwarzState,
};
use schwarzian_core::geometry::{h4d, Coord4, GeodesicPhase, KillingField};

use crate::error::CliError;
use crate::table::{Schema, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeDrift {
    pub name: String,
    pub initial: f64,
    pub max_drift: f64,
    pub max_rel_drift: f64,
    pub row: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub max_abs: f64,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeSummary {
    pub schema: Schema,
    pub rows: usize,
    pub lambda: Option<f64>,
    pub nu: Option<f64>,
    pub charges: Vec<ChargeDrift>,
    pub casimir: Peak,
}

impl ChargeSummary {
    pub fn get(&self, name: &str) -> Option<&ChargeDrift> {
        self.charges.iter().find(|c| c.name == name)
    }
}

/// Parameters the columns do not carry.
#[derive(Debug, Default, Clone, Copy)]
pub struct ChargeParams {
    /// Schwarz files only; defaults to the median of `S_of_rho`.
    pub lambda: Option<f64>,
    /// Required for every other schema.
    pub nu: Option<f64>,
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    xs.retain(|x| x.is_finite());
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    Some(if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    })
}

/// Casimir of the two-field charges, `P K − (D + ν)² − (H − ν²)`.
fn lagrange_casimir(c: &Charges, nu: f64) -> f64 {
    c.p * c.k - (c.d + nu) * (c.d + nu) - (c.h - nu * nu)
}

fn lagrange_series(
    states: impl Iterator<Item = LagrangeState>,
    nu: f64,
) -> (Vec<(&'static str, Vec<f64>)>, Vec<f64>) {
    let (mut h, mut p, mut d, mut k, mut cas) = (vec![], vec![], vec![], vec![], vec![]);
    for st in states {
        let c = charges_lagrange(&st, nu);
        h.push(c.h);
        p.push(c.p);
        d.push(c.d);
        k.push(c.k);
        cas.push(lagrange_casimir(&c, nu));
    }
    (vec![("H", h), ("P", p), ("D", d), ("K", k)], cas)
}

pub fn summarize(table: &Table, params: ChargeParams) -> Result<ChargeSummary, CliError> {
    let schema = table.schema;
    let need_nu = || {
        params
            .nu
            .ok_or_else(|| CliError::Usage(format!("{schema:?} files need --nu")))
    };
    let c = |name: &str| schema.col(name);
    let (lambda, nu, series, casimir) = match schema {
        Schema::Schwarz => {
            let lambda = match params.lambda {
                Some(l) => l,
                None => median(table.column("S_of_rho")).ok_or_else(|| {
                    CliError::Usage("no finite S_of_rho values; pass --lambda".into())
                })?,
            };
            let (mut p, mut d, mut k, mut cas) = (vec![], vec![], vec![], vec![]);
            for r in &table.rows {
                let st = SchwarzState {
                    t: r[c("t")],
                    rho: r[c("rho")],
                    rho_dot: r[c("rho_dot")],
                    rho_ddot: r[c("rho_ddot")],
                };
                let q = charges_schwarz(&st, lambda)?;
                p.push(q.p);
                d.push(q.d);
                k.push(q.k);
                cas.push(q.casimir_residual(lambda));
            }
            (Some(lambda), None, vec![("P", p), ("D", d), ("K", k)], cas)
        }
        Schema::Lagrange => {
            let nu = need_nu()?;
            let states = table.rows.iter().map(|r| LagrangeState {
                t: r[c("t")],
                rho: r[c("rho")],
                rho_dot: r[c("rho_dot")],
                s: r[c("s")],
                s_dot: r[c("s_dot")],
            });
            let (series, cas) = lagrange_series(states, nu);
            (None, Some(nu), series, cas)
        }
        Schema::Hamilton => {
            let nu = need_nu()?;
            let hs: Vec<HamiltonState> = table
                .rows
                .iter()
                .map(|r| HamiltonState {
                    t: r[c("t")],
                    rho: r[c("rho")],
                    s: r[c("s")],
                    p_rho: r[c("p_rho")],
                    p_s: r[c("p_s")],
                })
                .collect();
            let energy = hs.iter().map(|h| h2d(h, nu)).collect();
            let (mut series, cas) = lagrange_series(hs.iter().map(|h| h.to_lagrange(nu)), nu);
            series.insert(0, ("H2d", energy));
            (None, Some(nu), series, cas)
        }
        Schema::Geodesic => {
            let nu = need_nu()?;
            let phases: Vec<GeodesicPhase> = table
                .rows
                .iter()
                .map(|r| GeodesicPhase {
                    x: Coord4::new(r[c("t")], r[c("v")], r[c("rho")], r[c("s")]),
                    p: [r[c("p_t")], r[c("p_v")], r[c("p_rho")], r[c("p_s")]],
                })
                .collect();
            let mut series = vec![("H4d", phases.iter().map(|g| h4d(g, nu)).collect::<Vec<_>>())];
            for k in KillingField::ALL {
                series.push((
                    k.name(),
                    phases.iter().map(|g| k.charge(&g.x, &g.p, nu)).collect(),
                ));
            }
            // ∂ρ, ψ and ζ give P, D, K; ∂t gives −H scaled by p_v
            let cas = phases
                .iter()
                .map(|g| {
                    let q = |k: KillingField| k.charge(&g.x, &g.p, nu);
                    let (p, d, kk) = (
                        q(KillingField::Phi),
                        q(KillingField::Psi),
                        q(KillingField::Zeta),
                    );
                    let (p_t, p_v) = (g.p[0], g.p[1]);
                    p * kk - (d + nu * p_v).powi(2) + p_t * p_v + nu * nu * p_v * p_v
                })
                .collect();
            (None, Some(nu), series, cas)
        }
    };
    let (max_abs, row) = peak(&casimir);
    Ok(ChargeSummary {
        schema,
        rows: table.rows.len(),
        lambda,
        nu,
        charges: series
            .into_iter()
            .map(|(name, s)| {
                let d = drift(&s);
                ChargeDrift {
                    name: name.into(),
                    initial: d.initial,
                    max_drift: d.max_abs,
                    max_rel_drift: d.max_rel,
                    row: d.row,
                }
            })
            .collect(),
        casimir: Peak { max_abs, row },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line_has_no_drift() {
        let mut t = Table::new(Schema::Schwarz);
        for i in 0..10 {
            let x = i as f64 * 0.1;
            t.push(vec![x, 1.0 + 2.0 * x, 2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0]);
        }
        let s = summarize(&t, ChargeParams::default()).unwrap();
        assert_eq!(s.lambda, Some(0.0));
        for c in &s.charges {
            assert_eq!(c.max_drift, 0.0, "{}", c.name);
        }
        assert_eq!(s.casimir.max_abs, 0.0);
        assert_eq!(s.get("K").unwrap().initial, 2.0);
    }

    #[test]
    fn nu_is_required_off_schwarz() {
        let t = Table::new(Schema::Lagrange);
        assert!(matches!(
            summarize(&t, ChargeParams::default()),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn median_skips_nan() {
        assert_eq!(median(vec![f64::NAN, 3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(vec![4.0, 1.0]), Some(2.5));
        assert_eq!(median(vec![f64::NAN]), None);
    }
}
