//! `lpp`: growth-diagram RSK, geometric last passage percolation and exact
//! Schur measures from the command line.
//!
//! Machine-readable output goes to stdout as JSON; diagnostics go to stderr.
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors.

mod config;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lpp_core::greene::{check_layers, layers_decompose};
use lpp_core::growth::{grow, rsk_gamma, rsk_gamma_inverse};
use lpp_core::lpp::{g_times, observe, sample_full, sample_half, FullSpaceParams, HalfSpaceParams};
use lpp_core::measure::{enumerate_sequences, Model};
use lpp_core::rational;
use lpp_core::verify::exact::DEFAULT_ENUMERATION_BUDGET;
use lpp_core::verify::fuzz::DEFAULT_FUZZ_BUDGET;
use lpp_core::verify::{exact_compare, fuzz_suite, greene_check, mc_compare};
use lpp_core::{Cell, Filling, Partition, WeightMatrix};
use serde::Serialize;
use serde_json::json;

use crate::config::{path_from_flags, read_json, resolve_side, window, ModeArg, RunArgs, SideArg};

#[derive(Debug, Parser)]
#[command(name = "lpp", version, about = "Growth-diagram RSK and geometric last passage percolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a full-space geometric weight matrix.
    SampleFull {
        /// Parameter file {"x": [...], "y": [...]}.
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        rows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample a symmetric half-space geometric weight matrix.
    SampleHalf {
        /// Parameter file {"x": [...], "c": "..."}.
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Read λ along a path from a weight matrix (given or freshly sampled).
    Observe {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        /// Weight matrix file; sampled from the parameters when absent.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Number of G_k values to report per vertex.
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Apply RSK along a path to a filling.
    Rsk {
        /// Filling file {"shape": [...], "rows": [[...], ...]}.
        #[arg(long)]
        filling: PathBuf,
        /// Path word; defaults to the boundary of the filling's shape.
        #[arg(long)]
        path: Option<String>,
        #[arg(long)]
        start: Option<String>,
        /// Also emit the full growth table.
        #[arg(long)]
        table: bool,
    },
    /// Recover a filling from a partition sequence along a path.
    RskInverse {
        /// Sequence file: an array of partitions.
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        path: String,
        #[arg(long)]
        start: Option<String>,
    },
    /// Exact probability of a partition sequence.
    Measure {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        /// Sequence file: an array of partitions.
        #[arg(long)]
        seq: PathBuf,
    },
    /// Stream every admissible sequence with parts at most the cap, one JSON
    /// line each; with parameters, each line carries its probability.
    Enumerate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        #[arg(long)]
        cap: u64,
    },
    /// Compare growth prefix sums with brute-force g_k and h_k on random matrices.
    GreeneCheck {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 3)]
        max_entry: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Layer decomposition of a disjoint chain family in diagram coordinates.
    Layers {
        /// Chains file: an array of chains, each an array of {"col", "row"}.
        #[arg(long)]
        chains: PathBuf,
        /// The enclosing partition, e.g. "5,4,4,2".
        #[arg(long)]
        lambda: String,
    },
    /// Compare sampled observables with the exact measure.
    Verify(VerifyArgs),
    /// Run the randomised property suite.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FUZZ_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    side: SideArg,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Largest weight enumerated per cell in exact mode.
    #[arg(long)]
    trunc: Option<u64>,
    /// Replica count in Monte Carlo mode.
    #[arg(long)]
    samples: Option<u64>,
    /// Largest part binned individually in Monte Carlo mode.
    #[arg(long)]
    cap: Option<u64>,
    /// Write the report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-sequence observed and exact frequencies here.
    #[arg(long)]
    emit_hist: Option<PathBuf>,
}

/// Whether a command's own check passed.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("LPP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().with_context(|| format!("LPP_THREADS={raw:?} is not an integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn emit(value: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_file(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn outcome(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::SampleFull { params, cols, rows, seed } => {
            let p: FullSpaceParams = read_json(&params)?;
            emit(&sample_full(&p, cols, rows, seed)?)?;
        }
        Command::SampleHalf { params, size, seed } => {
            let p: HalfSpaceParams = read_json(&params)?;
            emit(&sample_half(&p, size, seed)?)?;
        }
        Command::Observe { run, side, matrix, k } => {
            let cfg = run.load()?;
            let side = resolve_side(side, &cfg);
            let gamma = run.path(&cfg, side)?;
            let w: WeightMatrix = match matrix {
                Some(file) => read_json(&file)?,
                None => {
                    let (m, n) = window(&gamma);
                    match run.model(&cfg, side)? {
                        Model::Full(p) => sample_full(&p, m, n, run.seed(&cfg))?,
                        Model::Half(p) => sample_half(&p, m.max(n), run.seed(&cfg))?,
                    }
                }
            };
            let obs = observe(&w, &gamma)?;
            let g = (0..obs.lambdas.len()).map(|i| g_times(&obs, i, k)).collect::<lpp_core::Result<Vec<_>>>()?;
            emit(&json!({ "path": obs.path, "lambdas": obs.lambdas, "g": g }))?;
        }
        Command::Rsk { filling, path, start, table } => {
            let f: Filling = read_json(&filling)?;
            let gamma = match path {
                Some(word) => path_from_flags(&word, start.as_deref(), SideArg::Full)?,
                None => f.shape().boundary_path(f.shape().width(), f.shape().height())?,
            };
            let seq = rsk_gamma(&f, &gamma)?;
            if table {
                emit(&json!({ "path": gamma, "sequence": seq, "table": grow(&f)? }))?;
            } else {
                emit(&json!({ "path": gamma, "sequence": seq }))?;
            }
        }
        Command::RskInverse { seq, path, start } => {
            let seq: Vec<Partition> = read_json(&seq)?;
            let gamma = path_from_flags(&path, start.as_deref(), SideArg::Full)?;
            emit(&rsk_gamma_inverse(&seq, &gamma)?)?;
        }
        Command::Measure { run, side, seq } => {
            let cfg = run.load()?;
            let side = resolve_side(side, &cfg);
            let gamma = run.path(&cfg, side)?;
            let model = run.model(&cfg, side)?;
            let seq: Vec<Partition> = read_json(&seq)?;
            let w = model.weigh(&gamma, &seq)?;
            let labels: Vec<String> = w.factors.iter().map(|f| f.label()).collect();
            emit(&json!({
                "probability": rational::to_f64(&w.probability),
                "weight": w,
                "labels": labels,
            }))?;
        }
        Command::Enumerate { run, side, cap } => {
            let cfg = run.load()?;
            let side = resolve_side(side, &cfg);
            let gamma = run.path(&cfg, side)?;
            let model = if run.params.is_some() || cfg.params.is_some() {
                Some(run.model(&cfg, side)?)
            } else {
                None
            };
            let mut out = BufWriter::new(io::stdout().lock());
            for seq in enumerate_sequences(&gamma, cap) {
                let line = match &model {
                    Some(m) => {
                        let p = m.probability(&gamma, &seq)?;
                        json!({ "sequence": seq, "probability": p.to_string(), "value": rational::to_f64(&p) })
                    }
                    None => json!({ "sequence": seq }),
                };
                serde_json::to_writer(&mut out, &line)?;
                writeln!(out)?;
            }
            out.flush()?;
        }
        Command::GreeneCheck { rows, cols, max_entry, trials, seed } => {
            let report = greene_check(cols, rows, max_entry, trials, seed)?;
            emit(&report)?;
            if let Some(cx) = &report.counterexample {
                eprintln!("greene-check: counterexample ({}): {}", cx.property, cx.message);
            }
            return Ok(outcome(report.pass));
        }
        Command::Layers { chains, lambda } => {
            let chains: Vec<Vec<Cell>> = read_json(&chains)?;
            let parts = lambda
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<u64>().with_context(|| format!("bad part {s:?} in --lambda")))
                .collect::<Result<Vec<_>>>()?;
            let lam = Partition::new(parts)?;
            let layers = layers_decompose(&chains, &lam)?;
            let valid = check_layers(&chains, &lam, &layers);
            emit(&json!({ "lambda": lam, "layers": layers, "valid": valid }))?;
            return Ok(outcome(valid));
        }
        Command::Verify(args) => return verify(args),
        Command::Fuzz { seed, budget, out } => {
            let report = fuzz_suite(seed, budget);
            if let Some(path) = &out {
                write_file(path, &report)?;
            }
            emit(&report)?;
            for cx in &report.failures {
                eprintln!("fuzz: {} failed on a size-{} input: {}", cx.property, cx.size, cx.message);
            }
            return Ok(outcome(report.pass));
        }
    }
    Ok(Outcome::Pass)
}

fn verify(args: VerifyArgs) -> Result<Outcome> {
    let cfg = args.run.load()?;
    if cfg.side.is_some_and(|s| s != args.side) {
        bail!("--config asks for the other side");
    }
    let gamma = args.run.path(&cfg, args.side)?;
    let model = args.run.model(&cfg, args.side)?;
    let mode = args.mode.or(cfg.mode).unwrap_or(ModeArg::Exact);
    let report = match mode {
        ModeArg::Exact => {
            let t = args.trunc.or(cfg.trunc).unwrap_or(6);
            exact_compare(&gamma, &model, t, DEFAULT_ENUMERATION_BUDGET)?
        }
        ModeArg::Mc => {
            let samples = args.samples.or(cfg.samples).unwrap_or(100_000);
            let cap = args.cap.or(cfg.cap).unwrap_or(10);
            mc_compare(&gamma, &model, samples, args.run.seed(&cfg), cap)?
        }
    };
    if let Some(path) = &args.out {
        write_file(path, &report)?;
    }
    if let Some(path) = &args.emit_hist {
        let bins: Vec<_> = report
            .rows
            .iter()
            .map(|r| json!({ "sequence": r.sequence, "observed": r.lhs, "exact": r.rhs, "count": r.count }))
            .collect();
        write_file(path, &json!({ "overflow": report.overflow_count, "bins": bins }))?;
    }
    emit(&report)?;
    for check in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("verify: {} failed: {}", check.name, check.detail);
    }
    Ok(outcome(report.pass))
}
