//! Command-line front end: `simulate` writes trajectory CSVs, `verify` runs
//! the verification suites, `charges` recomputes conserved quantities from a
//! trajectory file. Every command prints a JSON report on stdout.
//!
//! Exit codes: 0 success, 1 numerical or check failure, 2 usage or config
//! error.

pub mod charges;
pub mod config;
pub mod error;
pub mod simulate;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use charges::{ChargeParams, ChargeSummary};
use config::{Mode, Overrides, RunConfig, SeedSpec};
use error::CliError;
use table::Table;
use verify::Suite;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "schwarzian",
    version,
    about = "Schwarzian mechanics: simulation and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    /// Output path: the CSV for `simulate`, the JSON report otherwise.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one formulation and write its trajectory as CSV.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// closed-form, closed-form:a,b,c,d or state:x1,x2,...
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        t_end: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Swap in a deformed metric for the geometry checks.
        #[arg(long, hide = true, allow_negative_numbers = true)]
        perturb_metric: Option<f64>,
    },
    /// Recompute conserved quantities from a trajectory CSV.
    Charges {
        #[command(flatten)]
        common: Common,
        csv: PathBuf,
    },
}

#[derive(Serialize)]
struct ChargesReport<'a> {
    command: &'static str,
    artifact_version: &'static str,
    input: &'a Path,
    summary: ChargeSummary,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports are plain data");
    s.push('\n');
    s
}

fn write_file(
    path: &Path,
    write: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let wrap = |source| CliError::Write {
        path: path.into(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(wrap)?);
    write(&mut w).map_err(wrap)?;
    w.flush().map_err(wrap)
}

fn emit(stdout: &mut dyn Write, json: &str, path: Option<&Path>) -> Result<(), CliError> {
    if let Some(p) = path {
        write_file(p, |w| w.write_all(json.as_bytes()))?;
    }
    stdout
        .write_all(json.as_bytes())
        .map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        })
}

fn load(common: &Common, extra: Overrides, out_is_csv: bool) -> Result<RunConfig, CliError> {
    let o = Overrides {
        lambda: common.lambda,
        nu: common.nu,
        out: common.out.clone(),
        ..extra
    };
    Ok(RunConfig::load(common.config.as_deref())?.merge(o, out_is_csv))
}

/// Returns the process exit code.
fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Simulate {
            common,
            mode,
            seed,
            t_end,
            step,
        } => {
            let seed = seed.as_deref().map(SeedSpec::parse_flag).transpose()?;
            let cfg = load(
                &common,
                Overrides {
                    mode,
                    seed,
                    t_end,
                    step,
                    ..Default::default()
                },
                true,
            )?;
            let init = cfg.initial_state()?;
            let csv = cfg.csv.clone().ok_or_else(|| {
                CliError::Config("no CSV path: pass --out or set output.csv".into())
            })?;
            let (table, halt) = simulate::run(&cfg, &init);
            write_file(&csv, |w| table.write_csv(w).map_err(std::io::Error::from))?;
            let report = simulate::report(&cfg, &table, halt);
            emit(stdout, &to_json(&report), cfg.report.as_deref())?;
            Ok(if report.failure.is_none() { 0 } else { 1 })
        }
        Command::Verify {
            common,
            suite,
            perturb_metric,
        } => {
            if let Some(eps) = perturb_metric.filter(|e| !e.is_finite()) {
                return Err(CliError::Usage(format!(
                    "--perturb-metric must be finite, got {eps}"
                )));
            }
            let cfg = load(&common, Overrides::default(), false)?;
            if cfg.samples == 0 {
                return Err(CliError::Config("verify.samples must be positive".into()));
            }
            let report = verify::run(suite, &cfg, perturb_metric);
            emit(stdout, &to_json(&report), cfg.report.as_deref())?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Charges { common, csv } => {
            let cfg = load(&common, Overrides::default(), false)?;
            let file = File::open(&csv).map_err(|source| CliError::Read {
                path: csv.clone(),
                source,
            })?;
            let table = Table::read_csv(std::io::BufReader::new(file))?;
            let summary = charges::summarize(
                &table,
                ChargeParams {
                    lambda: cfg.lambda,
                    nu: cfg.nu,
                },
            )?;
            let report = ChargesReport {
                command: "charges",
                artifact_version: ARTIFACT_VERSION,
                input: &csv,
                summary,
            };
            emit(stdout, &to_json(&report), cfg.report.as_deref())?;
            Ok(0)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
