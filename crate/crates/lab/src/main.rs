//! `lab`: deterministic experiment runner for the plurilab models.
//!
//! Each experiment subcommand reads a JSON config (or the committed default),
//! computes one row per checked quantity and writes CSV, JSON and SVG files.
//! The exit status is 0 iff every row passes.

mod config;
mod experiments;
mod fixture;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use config::{Experiment, ExperimentConfig};
use report::Report;

#[derive(Parser)]
#[command(name = "lab", version, about = "Convergence experiments for partial Bergman kernels, envelopes and volumes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Section counts against the volume limit.
    Volume(RunArgs),
    /// Partial Bergman measures against the equilibrium measure.
    Bergman(RunArgs),
    /// Donaldson functional against the partial equilibrium energy.
    Energy(RunArgs),
    /// Bergman approximants of the 𝓘-model envelope.
    Approx(RunArgs),
    /// Envelope invariants and profile plots.
    Envelope(RunArgs),
    /// Invariant suite over the built-in fixtures.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON); defaults to the committed fixture.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated k-schedule, overriding the config.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Multiplies every recorded tolerance; 0 exposes the achievable precision.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Extra serialized profiles to validate.
    #[arg(long = "profile")]
    profiles: Vec<PathBuf>,
}

fn load(exp: Experiment, args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::parse(exp.default_config())?,
    };
    if cfg.experiment != exp {
        bail!("config is for experiment {:?}, not {:?}", cfg.experiment.name(), exp.name());
    }
    if !args.k.is_empty() {
        cfg.k_schedule = args.k.clone();
    }
    if let Some(o) = &args.out {
        cfg.out = Some(o.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(exp: Experiment, args: &RunArgs) -> Result<bool> {
    let cfg = load(exp, args)?;
    let rep: Report = match exp {
        Experiment::Volume => experiments::run_volume(&cfg)?,
        Experiment::Bergman => experiments::run_bergman(&cfg)?,
        Experiment::Energy => experiments::run_energy(&cfg)?,
        Experiment::Approx => experiments::run_approx(&cfg)?,
        Experiment::Envelope => experiments::run_envelope(&cfg)?,
    };
    let files = rep.write(&cfg.out_dir())?;
    for r in rep.failures() {
        eprintln!(
            "FAIL {} k={} value={} reference={} abs_err={} bound={}",
            r.experiment, r.k, r.value, r.reference, r.abs_err, r.bound
        );
    }
    let failed = rep.failures().count();
    println!("{}/{}: {} rows, {} failing", rep.experiment, rep.fixture, rep.rows.len(), failed);
    for f in files {
        println!("  wrote {}", f.display());
    }
    Ok(rep.ok())
}

fn selftest(args: &SelftestArgs) -> Result<bool> {
    let profiles = args.profiles.iter().map(std::fs::read_to_string).collect::<std::io::Result<Vec<_>>>()?;
    let rep = plurilab::selftest::run(&plurilab::selftest::Options { tolerance_scale: args.tolerance_scale, profiles });
    let failures: Vec<_> = rep.failures().into_iter().cloned().collect();
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "ok": rep.ok(), "checks": rep.checks.len(), "failures": failures }))?);
    Ok(rep.ok())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.cmd {
        Cmd::Volume(a) => run(Experiment::Volume, a),
        Cmd::Bergman(a) => run(Experiment::Bergman, a),
        Cmd::Energy(a) => run(Experiment::Energy, a),
        Cmd::Approx(a) => run(Experiment::Approx, a),
        Cmd::Envelope(a) => run(Experiment::Envelope, a),
        Cmd::Selftest(a) => selftest(a),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
