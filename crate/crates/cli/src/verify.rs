//! Verification suites: randomized and closed-form checks of the library,
//! each reported with its residual and the tolerance it is held to.

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use schwarzian_core::coset::{
    bracket_relations, impose_constraints, invariance_residual, maurer_cartan, reduced_invariant,
    GoldstonePoint, GroupParams,
};
use schwarzian_core::dynamics::{
    charges_schwarz, drift, equivalence_check, integrate_schwarz, Charges, SchwarzState,
};
use schwarzian_core::geometry::{
    covariant_constancy_residual_in, curvature, einstein_residual_in, geodesic_flow, h4d,
    killing_residual_in, Coord4, EisenhartMetric, GeodesicPhase, KillingField, MetricField,
    PerturbedEisenhart,
};
use schwarzian_core::{
    schwarzian_compose_law_residual, schwarzian_jet, IntegratorConfig, Jet3, Mobius,
};

use crate::config::RunConfig;
use crate::ARTIFACT_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Invariance,
    Reduction,
    Dynamics,
    Geometry,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// NaN residuals fail.
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyEcho {
    pub run: RunConfig,
    /// ν values swept by the geometry suite.
    pub geometry_nu: Vec<f64>,
    pub perturb_metric: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub artifact_version: &'static str,
    pub config: VerifyEcho,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Default ν sweep for the geometry suite when none is configured.
pub const GEOMETRY_NU: [f64; 4] = [0.0, 1.0, -1.0, 2.0];
/// Möbius pairs per sample in the invariance suite.
const PAIRS_PER_SAMPLE: usize = 10;
/// `(μ, ν)` pairs per jet in the reduction suite.
const PAIRS_PER_JET: usize = 10;

pub fn run(suite: Suite, cfg: &RunConfig, perturb_metric: Option<f64>) -> VerifyReport {
    let geometry_nu = cfg.nu.map_or_else(|| GEOMETRY_NU.to_vec(), |nu| vec![nu]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let n = cfg.samples;
    let mut checks = Vec::new();
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Algebra) {
        checks.extend(algebra());
    }
    if wants(Suite::Invariance) {
        checks.extend(invariance(&mut rng, n));
    }
    if wants(Suite::Reduction) {
        checks.extend(reduction(&mut rng, n));
    }
    if wants(Suite::Dynamics) {
        checks.extend(dynamics());
    }
    if wants(Suite::Geometry) {
        for &nu in &geometry_nu {
            checks.extend(geometry(&mut rng, n, nu, perturb_metric));
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    VerifyReport {
        suite,
        artifact_version: ARTIFACT_VERSION,
        config: VerifyEcho {
            run: cfg.clone(),
            geometry_nu,
            perturb_metric,
        },
        checks,
        pass,
    }
}

pub fn algebra() -> Vec<Check> {
    bracket_relations()
        .into_iter()
        .map(|r| Check::new(format!("algebra {}", r.label()), r.residual as f64, 0.0))
        .collect()
}

fn random_jet(rng: &mut impl Rng) -> Jet3 {
    let speed = rng.gen_range(0.2..3.0);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Jet3::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        sign * speed,
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-5.0..5.0),
    )
}

/// Möbius map with `|det| > 0.1` and `|c ρ + d| > 0.1` at the given value.
fn random_mobius_at(rng: &mut impl Rng, rho: f64) -> Mobius {
    loop {
        let [a, b, c, d]: [f64; 4] = [(); 4].map(|_| rng.gen_range(-3.0..3.0));
        if (a * d - b * c).abs() > 0.1 && (c * rho + d).abs() > 0.1 {
            return Mobius::new(a, b, c, d).expect("determinant checked");
        }
    }
}

/// Running maximum that stays NaN once a NaN is seen.
fn worst(acc: f64, x: f64) -> f64 {
    if acc.is_nan() || x.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub fn invariance(rng: &mut impl Rng, samples: usize) -> Vec<Check> {
    let mut max_dev = 0.0f64;
    for _ in 0..samples * PAIRS_PER_SAMPLE {
        let j = random_jet(rng);
        let m = random_mobius_at(rng, j.f);
        let s = schwarzian_jet(&j).unwrap_or(f64::NAN);
        let s_img = m
            .apply_jet(&j)
            .and_then(|x| schwarzian_jet(&x))
            .unwrap_or(f64::NAN);
        max_dev = worst(max_dev, (s_img - s).abs() / (1.0 + s.abs()));
    }

    let mobius = Mobius::new(2.0, 1.0, 1.0, 3.0).expect("det 5");
    let outers: [(&str, Box<dyn Fn(f64) -> Jet3>); 5] = [
        ("tan", Box::new(|x| Jet3::variable(x).tan())),
        ("exp", Box::new(|x| Jet3::variable(x).exp())),
        ("sinh", Box::new(|x| Jet3::variable(x).sinh())),
        (
            "mobius",
            Box::new(move |x| {
                mobius
                    .apply_jet(&Jet3::variable(x))
                    .unwrap_or(Jet3::constant(x, f64::NAN))
            }),
        ),
        (
            "quintic",
            Box::new(|x| {
                let v = Jet3::variable(x);
                v.powi(5) - v.powi(3) * 2.0 + v + 4.0
            }),
        ),
    ];
    let inners = [
        Jet3::variable(0.3).tan(),
        Jet3::variable(-0.2).exp(),
        Jet3::variable(0.5).sinh(),
        Jet3::variable(0.9).powi(3) + Jet3::variable(0.9),
        Jet3::new(0.0, 0.0, 2.0, 0.0, 0.0),
    ];
    let mut compose = 0.0f64;
    for (_, f) in &outers {
        for g in &inners {
            compose = worst(
                compose,
                schwarzian_compose_law_residual(f, g).unwrap_or(f64::NAN),
            );
        }
    }

    let eps = 1e-3;
    let mut ratio_dev = 0.0f64;
    for _ in 0..samples {
        let p = GoldstonePoint {
            t: rng.gen_range(-2.0..2.0),
            rho: rng.gen_range(-2.0..2.0),
            s: rng.gen_range(-2.0..2.0),
            u: rng.gen_range(-2.0..2.0),
            rho_dot: rng.gen_range(-2.0..2.0),
            s_dot: rng.gen_range(-2.0..2.0),
            u_dot: rng.gen_range(-2.0..2.0),
        };
        let g = GroupParams {
            sigma: rng.gen_range(-1.0..1.0),
            alpha: rng.gen_range(-1.0..1.0),
            beta: rng.gen_range(-1.0..1.0),
            gamma: rng.gen_range(-1.0..1.0),
        };
        let r = |e: f64| invariance_residual(&g.scaled(e), &p).unwrap_or(f64::NAN);
        ratio_dev = worst(ratio_dev, (r(eps) / r(eps / 2.0) - 4.0).abs());
    }

    vec![
        Check::new("invariance mobius", max_dev, 1e-9),
        Check::new("invariance composition law", compose, 1e-10),
        Check::new("invariance maurer-cartan halving ratio", ratio_dev, 0.5),
    ]
}

pub fn reduction(rng: &mut impl Rng, samples: usize) -> Vec<Check> {
    let (mut wp, mut wd, mut wr) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let j = random_jet(rng);
        let s = schwarzian_jet(&j).unwrap_or(f64::NAN);
        for _ in 0..PAIRS_PER_JET {
            let mu = j.f1.signum() * rng.gen_range(0.2..3.0);
            let nu = rng.gen_range(-3.0..3.0);
            let forms =
                impose_constraints(&j, mu, nu).and_then(|c| maurer_cartan(&c.goldstone_point(&j)));
            let (op, od) = forms.map_or((f64::NAN, f64::NAN), |f| (f.omega_p, f.omega_d));
            wp = worst(wp, relative(op, mu));
            wd = worst(wd, (od + 2.0 * nu).abs());
            wr = worst(
                wr,
                relative(reduced_invariant(&j, mu, nu).unwrap_or(f64::NAN), s),
            );
        }
    }
    vec![
        Check::new("reduction omega_p = mu", wp, 1e-12),
        Check::new("reduction omega_d = -2 nu", wd, 1e-12),
        Check::new("reduction invariant = schwarzian", wr, 1e-12),
    ]
}

/// Equivalence cases `(λ, ν)`.
pub const EQUIVALENCE_CASES: [(f64, f64); 3] = [(0.0, 1.0), (2.0, 0.0), (-2.0, 1.0)];

pub fn dynamics() -> Vec<Check> {
    let cfg = IntegratorConfig::rk4(1e-3, 1.0);
    let lambda = 2.0;
    let mut checks = Vec::new();
    let seed = SchwarzState {
        t: 0.0,
        rho: 0.0,
        rho_dot: 1.0,
        rho_ddot: 0.0,
    };
    match integrate_schwarz(&seed, lambda, &cfg).and_then(|t| t.into_result()) {
        Ok(states) => {
            let track = states
                .iter()
                .map(|s| (s.rho - s.t.tan()).abs())
                .fold(0.0, worst);
            checks.push(Check::new("dynamics tan tracking", track, 1e-8));
            let charges: Vec<Charges> = states
                .iter()
                .filter_map(|s| charges_schwarz(s, lambda).ok())
                .collect();
            let complete = charges.len() == states.len();
            let series = |f: fn(&Charges) -> f64| {
                let d = drift(&charges.iter().map(f).collect::<Vec<_>>()).max_abs;
                if complete {
                    d
                } else {
                    f64::NAN
                }
            };
            checks.push(Check::new("dynamics drift P", series(|c| c.p), 1e-8));
            checks.push(Check::new("dynamics drift D", series(|c| c.d), 1e-8));
            checks.push(Check::new("dynamics drift K", series(|c| c.k), 1e-8));
            let cas = charges
                .iter()
                .map(|c| c.casimir_residual(lambda).abs())
                .fold(0.0, worst);
            checks.push(Check::new(
                "dynamics casimir",
                if complete { cas } else { f64::NAN },
                1e-8,
            ));
        }
        Err(_) => checks.push(Check::new("dynamics tan tracking", f64::NAN, 1e-8)),
    }
    for (lambda, nu) in EQUIVALENCE_CASES {
        let (dev, energy) = match equivalence_check(lambda, nu, &cfg) {
            Ok(r) => (r.max_pairwise_deviation, r.energy_residual),
            Err(_) => (f64::NAN, f64::NAN),
        };
        checks.push(Check::new(
            format!("dynamics equivalence lambda={lambda} nu={nu}"),
            dev,
            1e-6,
        ));
        checks.push(Check::new(
            format!("dynamics energy lambda={lambda} nu={nu}"),
            energy,
            1e-8,
        ));
    }
    checks
}

pub fn random_point(rng: &mut impl Rng) -> Coord4 {
    Coord4::new(
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-3.0..3.0),
    )
}

pub fn geometry(
    rng: &mut impl Rng,
    samples: usize,
    nu: f64,
    perturb_metric: Option<f64>,
) -> Vec<Check> {
    let field: Box<dyn MetricField> = match perturb_metric {
        Some(epsilon) => Box::new(PerturbedEisenhart { nu, epsilon }),
        None => Box::new(EisenhartMetric::new(nu)),
    };
    let (mut bad_signature, mut einstein, mut constancy, mut symmetry) =
        (0usize, 0.0f64, 0.0f64, 0.0f64);
    let mut killing = [0.0f64; 5];
    for _ in 0..samples {
        let x = random_point(rng);
        let mp = field.metric_at(&x);
        if mp.signature() != (2, 2) {
            bad_signature += 1;
        }
        einstein = worst(einstein, einstein_residual_in(field.as_ref(), &x, nu));
        for (w, k) in killing.iter_mut().zip(KillingField::ALL) {
            *w = worst(*w, killing_residual_in(field.as_ref(), k, &x, nu));
        }
        constancy = worst(
            constancy,
            covariant_constancy_residual_in(field.as_ref(), &x, nu),
        );
        symmetry = worst(
            symmetry,
            curvature(field.as_ref(), &x).symmetry_residuals(&mp).max(),
        );
    }
    let tag = format!("geometry nu={nu}");
    let mut checks = vec![
        Check::new(format!("{tag} signature (2,2)"), bad_signature as f64, 0.0),
        Check::new(format!("{tag} einstein"), einstein, 1e-8),
    ];
    for (w, k) in killing.iter().zip(KillingField::ALL) {
        checks.push(Check::new(format!("{tag} killing {}", k.name()), *w, 1e-9));
    }
    checks.push(Check::new(
        format!("{tag} covariant constancy of xi"),
        constancy,
        1e-9,
    ));
    checks.push(Check::new(
        format!("{tag} riemann symmetries"),
        symmetry,
        1e-9,
    ));
    let (s_dev, h_drift) = null_reduction(nu);
    checks.push(Check::new(
        format!("{tag} null reduction schwarzian"),
        s_dev,
        1e-6,
    ));
    checks.push(Check::new(
        format!("{tag} null reduction H4d drift"),
        h_drift,
        1e-10,
    ));
    checks
}

/// Null geodesic with `p_v = 1` from a fixed start; returns the largest
/// `|S(ρ(t)) − (−2p_t − 2ν²)|` and the largest `|H₄|` along it.
pub fn null_reduction(nu: f64) -> (f64, f64) {
    let Ok(g0) = GeodesicPhase::null(Coord4::new(0.0, 0.0, 0.5, 0.2), 1.0, 0.3, 1.0, nu) else {
        return (f64::NAN, f64::NAN);
    };
    let lambda = -2.0 * g0.p[0] - 2.0 * nu * nu;
    let Ok(traj) =
        geodesic_flow(&g0, nu, &IntegratorConfig::rk4(5e-4, 1.0)).and_then(|t| t.into_result())
    else {
        return (f64::NAN, f64::NAN);
    };
    let mut s_dev = 0.0f64;
    let mut h = 0.0f64;
    for st in &traj {
        let s = st
            .phase
            .rho_jet(nu)
            .and_then(|j| schwarzian_jet(&j))
            .unwrap_or(f64::NAN);
        s_dev = worst(s_dev, (s - lambda).abs());
        h = worst(h, h4d(&st.phase, nu).abs());
    }
    (s_dev, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_is_exact() {
        let checks = algebra();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.pass && c.max_residual == 0.0));
    }

    #[test]
    fn nan_fails() {
        assert!(!Check::new("x", f64::NAN, 1.0).pass);
    }

    #[test]
    fn geometry_single_nu() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let checks = geometry(&mut rng, 20, 1.0, None);
        assert!(checks.iter().all(|c| c.pass), "{checks:#?}");
    }

    #[test]
    fn perturbed_metric_fails_einstein() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let checks = geometry(&mut rng, 20, 1.0, Some(0.1));
        let einstein = checks
            .iter()
            .find(|c| c.name.ends_with("einstein"))
            .unwrap();
        assert!(!einstein.pass);
    }
}
