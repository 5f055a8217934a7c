//! `qdsim` command line: `simulate`, `attack-sweep` and `selftest`.
//!
//! Exit codes: 0 success, 1 config or internal error, 2 protocol abort,
//! 3 self-test failure.

mod config;
mod report;
mod selftest;

pub use config::{
    default_sweep, AttackSpec, AttackType, CheckSection, EmParamsSpec, Format, NoiseSection,
    ProtocolSection, RunConfig, RunSection,
};
pub use report::{bit_string, run_id, DialogueSummary, Report, Results, SCHEMA_VERSION};
pub use selftest::{run_selftest, ItemResult, Mutation, Toolkit};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adversary::posterior_entropy;
use crate::analysis::{cabello_efficiency, empirical_leakage, estimate_detection, ProtocolKind};
use crate::protocol::run_dialogue;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ABORT: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qdsim", version, about = "Quantum dialogue over collective-noise channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one dialogue and report its outcome.
    Simulate(RunArgs),
    /// Estimate detection and leakage for a list of attacks.
    AttackSweep(RunArgs),
    /// Run the built-in exhaustive checks.
    Selftest {
        /// Inject a known bug to confirm the checks catch it.
        #[arg(long, value_enum, hide = true)]
        inject: Option<Mutation>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides run.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides run.trials and every sweep row's trial count.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides run.output; without either the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Reads, overrides and validates the config named by `args`.
fn load(args: &RunArgs) -> Result<RunConfig, Vec<String>> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| vec![format!("{}: {e}", args.config.display())])?;
    let mut cfg = RunConfig::from_json(&text)?;
    if let Some(s) = args.seed {
        cfg.run.seed = s;
    }
    if let Some(t) = args.trials {
        cfg.run.trials = t;
        for row in &mut cfg.sweep {
            row.trials = Some(t);
        }
    }
    if let Some(f) = args.format {
        cfg.run.format = f;
    }
    if let Some(o) = &args.out {
        cfg.run.output = Some(o.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the dialogue described by `cfg`. Messages are drawn from the seed.
pub fn simulate(cfg: &RunConfig) -> Result<(Report, bool), String> {
    let started = Instant::now();
    let pcfg = cfg.protocol_config();
    let attack = cfg.attack_model(&cfg.attack)?;
    let mut r = ChaCha8Rng::seed_from_u64(cfg.run.seed);
    r.set_stream(1);
    let k: Vec<bool> = (0..pcfg.n).map(|_| r.gen()).collect();
    let i: Vec<bool> = (0..pcfg.n).map(|_| r.gen()).collect();
    let out = run_dialogue(&pcfg, &k, &i, &attack).map_err(|e| e.to_string())?;

    let eve_entropy = out.eve.as_ref().map(|e| {
        e.posteriors.iter().map(posterior_entropy).sum::<f64>() / e.posteriors.len() as f64
    });
    let summary = DialogueSummary {
        completed: !out.aborted(),
        abort: out.abort.map(|a| a.to_string()),
        k: bit_string(&k),
        i: bit_string(&i),
        k_hat: out.k_hat.as_deref().map(bit_string),
        i_hat: out.i_hat.as_deref().map(bit_string),
        first_check: out.first_check,
        second_check: out.second_check,
        eve_entropy,
        transcript: out.transcript.to_text().lines().map(str::to_string).collect(),
    };
    let results = Results {
        dialogue: Some(summary),
        efficiency: vec![cabello_efficiency(ProtocolKind::ThisWork(pcfg.code))],
        ..Default::default()
    };
    let report = finish("simulate", cfg, results, started);
    Ok((report, !out.aborted()))
}

/// Detection estimate and Monte-Carlo leakage for every sweep row.
pub fn attack_sweep(cfg: &RunConfig) -> Result<Report, String> {
    let started = Instant::now();
    let pcfg = cfg.protocol_config();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.run.seed);
    let mut results = Results::default();
    for row in cfg.sweep_rows() {
        let attack = cfg.attack_model(&row)?;
        let trials = row.trials.unwrap_or(cfg.run.trials);
        results
            .detection
            .push(estimate_detection(&attack, &pcfg, trials, &mut rng).map_err(|e| e.to_string())?);
        results
            .leakage
            .push(empirical_leakage(&attack, &pcfg, trials, &mut rng).map_err(|e| e.to_string())?);
    }
    results.efficiency = vec![
        cabello_efficiency(ProtocolKind::ThisWork(pcfg.code)),
        cabello_efficiency(ProtocolKind::Comparator),
    ];
    Ok(finish("attack-sweep", cfg, results, started))
}

fn finish(command: &str, cfg: &RunConfig, results: Results, started: Instant) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        run_id: run_id(command, cfg),
        seed: cfg.run.seed,
        config: cfg.clone(),
        results,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    }
}

fn emit(report: &Report, cfg: &RunConfig, out: &mut dyn Write) -> std::io::Result<()> {
    let body = match cfg.run.format {
        Format::Doc => report.to_json(),
        Format::Table => report.to_table(),
    };
    match &cfg.run.output {
        Some(path) => std::fs::write(path, body),
        None => out.write_all(body.as_bytes()),
    }
}

fn diagnostics(err: &mut dyn Write, problems: &[String]) -> i32 {
    for p in problems {
        let _ = writeln!(err, "error: {p}");
    }
    EXIT_ERROR
}

/// Parses `args` (program name first) and runs the command, writing
/// reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match cli.command {
        Command::Selftest { inject } => {
            let toolkit = Toolkit { mutation: inject };
            let items = run_selftest(&toolkit);
            for it in &items {
                let verdict = if it.pass { "pass" } else { "FAIL" };
                let _ = match it.detail.is_empty() {
                    true => writeln!(out, "{verdict}  {}", it.name),
                    false => writeln!(out, "{verdict}  {}  ({})", it.name, it.detail),
                };
            }
            if items.iter().all(|i| i.pass) {
                EXIT_OK
            } else {
                EXIT_SELFTEST
            }
        }
        Command::Simulate(args) => {
            let cfg = match load(&args) {
                Ok(c) => c,
                Err(p) => return diagnostics(err, &p),
            };
            match simulate(&cfg) {
                Ok((report, completed)) => match emit(&report, &cfg, out) {
                    Ok(()) if completed => EXIT_OK,
                    Ok(()) => EXIT_ABORT,
                    Err(e) => diagnostics(err, &[e.to_string()]),
                },
                Err(e) => diagnostics(err, &[e]),
            }
        }
        Command::AttackSweep(args) => {
            let cfg = match load(&args) {
                Ok(c) => c,
                Err(p) => return diagnostics(err, &p),
            };
            match attack_sweep(&cfg).map(|r| emit(&r, &cfg, out)) {
                Ok(Ok(())) => EXIT_OK,
                Ok(Err(e)) => diagnostics(err, &[e.to_string()]),
                Err(e) => diagnostics(err, &[e]),
            }
        }
    }
}
