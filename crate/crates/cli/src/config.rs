//! Run configuration: a versioned TOML file merged with command-line
//! overrides, validated before anything is computed.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use schwarzian_core::dynamics::{exact_solution, HamiltonState, LagrangeState, SchwarzState};
use schwarzian_core::geometry::{Coord4, GeodesicPhase};
use schwarzian_core::{IntegratorConfig, Method, Mobius};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_RNG_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Schwarz,
    Lagrange,
    Hamilton,
    Geodesic,
}

impl Mode {
    /// Layout of `values` for a raw-state seed.
    pub fn state_layout(self) -> &'static [&'static str] {
        match self {
            Mode::Schwarz => &["rho", "rho_dot", "rho_ddot"],
            Mode::Lagrange => &["rho", "rho_dot", "s", "s_dot"],
            Mode::Hamilton => &["rho", "s", "p_rho", "p_s"],
            Mode::Geodesic => &["t", "v", "rho", "s", "p_v", "p_rho", "p_s"],
        }
    }
}

/// Where the initial data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeedSpec {
    /// `m ∘ φ_λ` evaluated at `t0`, converted to the mode's variables.
    ClosedForm {
        #[serde(default = "identity_entries")]
        mobius: [f64; 4],
        #[serde(default)]
        t0: f64,
    },
    /// Raw state in the order given by [`Mode::state_layout`].
    State {
        values: Vec<f64>,
        #[serde(default)]
        t0: f64,
    },
}

fn identity_entries() -> [f64; 4] {
    [1.0, 0.0, 0.0, 1.0]
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec::ClosedForm {
            mobius: identity_entries(),
            t0: 0.0,
        }
    }
}

impl SeedSpec {
    /// Parses the `--seed` flag: `closed-form`, `closed-form:a,b,c,d` or
    /// `state:x1,x2,...`.
    pub fn parse_flag(text: &str) -> Result<Self, CliError> {
        let (kind, rest) = match text.split_once(':') {
            Some((k, r)) => (k, Some(r)),
            None => (text, None),
        };
        let numbers = |r: &str| -> Result<Vec<f64>, CliError> {
            r.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Usage(format!("bad number {x:?} in --seed: {e}")))
                })
                .collect()
        };
        match (kind, rest) {
            ("closed-form", None) => Ok(SeedSpec::default()),
            ("closed-form", Some(r)) => {
                let v = numbers(r)?;
                let mobius: [f64; 4] = v
                    .try_into()
                    .map_err(|_| CliError::Usage("closed-form seed takes exactly four Möbius entries".into()))?;
                Ok(SeedSpec::ClosedForm { mobius, t0: 0.0 })
            }
            ("state", Some(r)) => Ok(SeedSpec::State { values: numbers(r)?, t0: 0.0 }),
            _ => Err(CliError::Usage(format!(
                "unknown --seed {text:?}; expected closed-form, closed-form:a,b,c,d or state:x1,x2,..."
            ))),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegratorSection {
    method: Option<Method>,
    step: Option<f64>,
    atol: Option<f64>,
    rtol: Option<f64>,
    t_end: Option<f64>,
    max_steps: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    csv: Option<PathBuf>,
    report: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifySection {
    samples: Option<usize>,
    rng_seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema_version: u32,
    mode: Option<Mode>,
    lambda: Option<f64>,
    nu: Option<f64>,
    seed: Option<SeedSpec>,
    #[serde(default)]
    integrator: IntegratorSection,
    #[serde(default)]
    output: OutputSection,
    #[serde(default)]
    verify: VerifySection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub lambda: Option<f64>,
    pub nu: Option<f64>,
    pub seed: Option<SeedSpec>,
    pub t_end: Option<f64>,
    pub step: Option<f64>,
    pub out: Option<PathBuf>,
}

/// Effective configuration; serialized verbatim as the config echo in
/// reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub schema_version: u32,
    pub mode: Option<Mode>,
    pub lambda: Option<f64>,
    pub nu: Option<f64>,
    pub seed: SeedSpec,
    pub integrator: IntegratorConfig,
    pub csv: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub samples: usize,
    pub rng_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            mode: None,
            lambda: None,
            nu: None,
            seed: SeedSpec::default(),
            integrator: IntegratorConfig::default(),
            csv: None,
            report: None,
            samples: DEFAULT_SAMPLES,
            rng_seed: DEFAULT_RNG_SEED,
        }
    }
}

impl RunConfig {
    pub fn parse_toml(text: &str) -> Result<Self, CliError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let d = IntegratorConfig::default();
        let i = file.integrator;
        Ok(Self {
            schema_version: file.schema_version,
            mode: file.mode,
            lambda: file.lambda,
            nu: file.nu,
            seed: file.seed.unwrap_or_default(),
            integrator: IntegratorConfig {
                method: i.method.unwrap_or(d.method),
                step: i.step.unwrap_or(d.step),
                atol: i.atol.unwrap_or(d.atol),
                rtol: i.rtol.unwrap_or(d.rtol),
                t_end: i.t_end.unwrap_or(d.t_end),
                max_steps: i.max_steps.unwrap_or(d.max_steps),
            },
            csv: file.output.csv,
            report: file.output.report,
            samples: file.verify.samples.unwrap_or(DEFAULT_SAMPLES),
            rng_seed: file.verify.rng_seed.unwrap_or(DEFAULT_RNG_SEED),
        })
    }

    /// Reads `path` if given, otherwise starts from defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| CliError::Read {
                    path: p.into(),
                    source,
                })?;
                Self::parse_toml(&text)
            }
            None => Ok(Self::default()),
        }
    }

    /// Applies overrides; `out` replaces the path the command writes to.
    pub fn merge(mut self, o: Overrides, out_is_csv: bool) -> Self {
        self.mode = o.mode.or(self.mode);
        self.lambda = o.lambda.or(self.lambda);
        self.nu = o.nu.or(self.nu);
        self.seed = o.seed.unwrap_or(self.seed);
        self.integrator.t_end = o.t_end.unwrap_or(self.integrator.t_end);
        self.integrator.step = o.step.unwrap_or(self.integrator.step);
        if let Some(out) = o.out {
            if out_is_csv {
                self.csv = Some(out);
            } else {
                self.report = Some(out);
            }
        }
        self
    }

    pub fn require_mode(&self) -> Result<Mode, CliError> {
        self.mode
            .ok_or_else(|| CliError::Config("mode is required".into()))
    }

    pub fn require_lambda(&self) -> Result<f64, CliError> {
        finite(
            "lambda",
            self.lambda
                .ok_or_else(|| CliError::Config("lambda is required".into()))?,
        )
    }

    pub fn require_nu(&self) -> Result<f64, CliError> {
        finite(
            "nu",
            self.nu
                .ok_or_else(|| CliError::Config("nu is required".into()))?,
        )
    }

    /// Checks everything `simulate` needs and builds the initial state.
    pub fn initial_state(&self) -> Result<InitialState, CliError> {
        let mode = self.require_mode()?;
        self.integrator
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(l) = self.lambda {
            finite("lambda", l)?;
        }
        if let Some(n) = self.nu {
            finite("nu", n)?;
        }
        let bad_seed = |e: schwarzian_core::Error| CliError::Config(format!("seed: {e}"));
        match &self.seed {
            SeedSpec::ClosedForm { mobius, t0 } => {
                let lambda = self.require_lambda()?;
                let [a, b, c, d] = *mobius;
                let m = Mobius::new(a, b, c, d).map_err(bad_seed)?;
                let jet = exact_solution(lambda, &m, *t0).map_err(bad_seed)?;
                match mode {
                    Mode::Schwarz => Ok(InitialState::Schwarz(SchwarzState::from_jet(&jet))),
                    _ => {
                        let nu = self.require_nu()?;
                        let l = LagrangeState::on_shell(&jet, nu).map_err(bad_seed)?;
                        let h = HamiltonState::from_lagrange(&l, nu);
                        Ok(match mode {
                            Mode::Lagrange => InitialState::Lagrange(l),
                            Mode::Hamilton => InitialState::Hamilton(h),
                            _ => InitialState::Geodesic(
                                GeodesicPhase::lift(&h, 0.0, nu).map_err(bad_seed)?,
                            ),
                        })
                    }
                }
            }
            SeedSpec::State { values, t0 } => {
                let layout = mode.state_layout();
                if values.len() != layout.len() {
                    return Err(CliError::Config(format!(
                        "{mode:?} state seed needs {} values ({}), got {}",
                        layout.len(),
                        layout.join(", "),
                        values.len()
                    )));
                }
                if let Some(x) = values.iter().find(|x| !x.is_finite()) {
                    return Err(CliError::Config(format!("seed value {x} is not finite")));
                }
                let t = *t0;
                let v = values.as_slice();
                Ok(match mode {
                    Mode::Schwarz => {
                        self.require_lambda()?;
                        InitialState::Schwarz(SchwarzState {
                            t,
                            rho: v[0],
                            rho_dot: v[1],
                            rho_ddot: v[2],
                        })
                    }
                    Mode::Lagrange => {
                        self.require_nu()?;
                        InitialState::Lagrange(LagrangeState {
                            t,
                            rho: v[0],
                            rho_dot: v[1],
                            s: v[2],
                            s_dot: v[3],
                        })
                    }
                    Mode::Hamilton => {
                        self.require_nu()?;
                        InitialState::Hamilton(HamiltonState {
                            t,
                            rho: v[0],
                            s: v[1],
                            p_rho: v[2],
                            p_s: v[3],
                        })
                    }
                    Mode::Geodesic => {
                        let nu = self.require_nu()?;
                        let x = Coord4::new(v[0], v[1], v[2], v[3]);
                        InitialState::Geodesic(
                            GeodesicPhase::null(x, v[4], v[5], v[6], nu).map_err(bad_seed)?,
                        )
                    }
                })
            }
        }
    }
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("{name} must be finite, got {x}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Schwarz(SchwarzState),
    Lagrange(LagrangeState),
    Hamilton(HamiltonState),
    Geodesic(GeodesicPhase),
}
