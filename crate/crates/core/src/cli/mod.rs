//! Batch front end: `simulate`, `analyze`, `theory-eval`, `oracle` and `verify`.
//!
//! Exit codes are 0 on success, 1 when a check or run fails, and 2 on usage or
//! configuration errors.

pub mod analyze;
pub mod config;
pub mod oracle;
pub mod output;
pub mod simulate;
pub mod theory_eval;
pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::error;

use crate::error::{Error, Result};
use config::RunConfig;
use verify::Mutation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "unwrapped-walks", version, about = "Unwrapped two-point functions of walks on the torus")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed; replaces `simulation.seed`.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Independent chains per size; replaces `simulation.chains`.
    #[arg(long, global = true, value_name = "N")]
    pub chains: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Dotted `key=value` override applied to the configuration, repeatable.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the samplers configured in `[simulation]`.
    Simulate,
    /// Fit and compare the tables of one or more simulation runs.
    Analyze {
        /// Run directories written by `simulate`.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
    },
    /// Evaluate the limiting curves configured in `[theory]`.
    TheoryEval,
    /// Tabulate the exact reference configured in `[oracle]`.
    Oracle,
    /// Run the oracle-equivalence scorecard.
    Verify {
        #[arg(long, hide = true, value_enum, default_value = "none")]
        inject: InjectArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum InjectArg {
    None,
    WormAcceptance,
    WrapOffByOne,
}

impl From<InjectArg> for Mutation {
    fn from(a: InjectArg) -> Self {
        match a {
            InjectArg::None => Mutation::None,
            InjectArg::WormAcceptance => Mutation::WormAcceptance,
            InjectArg::WrapOffByOne => Mutation::WrapOffByOne,
        }
    }
}

fn load_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut overrides = g.overrides.clone();
    if let Some(s) = g.seed {
        overrides.push(format!("simulation.seed={s}"));
    }
    if let Some(c) = g.chains {
        overrides.push(format!("simulation.chains={c}"));
    }
    match &g.config {
        Some(p) => RunConfig::load(p, &overrides),
        None => RunConfig::parse("", &overrides),
    }
}

fn out_dir(g: &GlobalArgs, default: &str) -> PathBuf {
    g.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::InvalidParameter(_) | Error::AxisOutOfRange { .. })
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let g = &cli.global;
    let result = (|| -> Result<i32> {
        let cfg = load_config(g)?;
        match &cli.command {
            Command::Simulate => {
                let sim = cfg.simulation()?;
                sim.validate()?;
                let out = g.out.clone().unwrap_or_else(|| sim.output_dir.clone());
                simulate::simulate(&cfg, &out)?;
            }
            Command::Analyze { runs } => {
                analyze::analyze(runs, &cfg.analysis, &out_dir(g, "analysis"))?;
            }
            Command::TheoryEval => theory_eval::theory_eval(&cfg.theory, &out_dir(g, "theory"))?,
            Command::Oracle => oracle::oracle(&cfg.oracle, &out_dir(g, "oracle"))?,
            Command::Verify { inject } => {
                let results = verify::run_checks((*inject).into());
                print!("{}", verify::scorecard(&results));
                if let Some(out) = &g.out {
                    write_scorecard(out, &results)?;
                }
                if results.iter().any(|r| !r.passed) {
                    return Ok(EXIT_FAIL);
                }
            }
        }
        Ok(EXIT_OK)
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            if is_usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            }
        }
    }
}

fn write_scorecard(out: &Path, results: &[verify::CheckResult]) -> Result<()> {
    let mut dir = output::OutputDir::create(out)?;
    dir.write("scorecard.txt", &verify::scorecard(results))?;
    dir.write_json("scorecard.json", &results)?;
    dir.finish(None)
}

/// Parses `args` (including the program name) and runs; clap errors map to exit code 2,
/// `--help` and `--version` to 0.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
