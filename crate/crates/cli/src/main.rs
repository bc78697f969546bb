//! `cnea`: run the counter-niching EA and its baselines, sweep experiment
//! matrices and render reports from their outputs.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cnea_core::engines::{self, CONFIG_KEYS};
use cnea_core::harness::{
    diversity_report, find_cells, render_diversity_report, render_summary_table,
    render_ttest_table, run_matrix, summarize_cells, ttest_cells, ttest_csv, write_trace,
    ExperimentMatrix,
};
use cnea_core::{Algorithm, BenchmarkFn, EngineConfig, Error, FunctionKind, RngStream};
use serde_json::json;

const OUT_DIR_ENV: &str = "CNEA_OUT_DIR";

#[derive(Parser)]
#[command(name = "cnea", version, about = "Counter-niching EA experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List benchmark functions and algorithms.
    List {
        #[arg(long)]
        json: bool,
        /// Show a single function.
        #[arg(long)]
        function: Option<String>,
    },
    /// Run one algorithm once and write its trace.
    Run(RunArgs),
    /// Run an experiment matrix from a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (default: one per processor).
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory (overrides the config file and $CNEA_OUT_DIR).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Rank-pick tables of finished cells.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Paired t-test between two cells.
    Ttest {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Average diversity over improving generations, per cell.
    DiversityReport {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algo: Algorithm,
    #[arg(long)]
    function: FunctionKind,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    /// Generation budget (default depends on algorithm and dimension).
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    population: Option<usize>,
    /// Trace CSV path (default: <algo>_<function>_<dim>_seed<seed>.csv in
    /// $CNEA_OUT_DIR or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Engine parameter override, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Fill the wall_ms trace column (makes traces non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Write the dense regions of every generation as JSON lines (cnea only).
    #[arg(long, value_name = "PATH")]
    dump_regions: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

/// Failure with the exit code it maps to.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::UnknownFunction(_)
            | Error::UnknownAlgorithm(_)
            | Error::OddRotationDim(_)
            | Error::InvalidSpace(_)
            | Error::DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List { json, function } => list(json, function.as_deref()),
        Command::Run(args) => run(args),
        Command::Sweep {
            config,
            workers,
            out,
            json,
        } => sweep(&config, workers, out, json),
        Command::Summarize { input, json } => summarize(&input, json),
        Command::Ttest { a, b, json } => ttest(&a, &b, json),
        Command::DiversityReport { input, json } => diversity(&input, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn print_json(v: &serde_json::Value) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(v).map_err(runtime)?);
    Ok(())
}

fn list(json: bool, only: Option<&str>) -> Result<(), Failure> {
    let kinds: Vec<FunctionKind> = match only {
        Some(name) => vec![name.parse()?],
        None => FunctionKind::ALL.to_vec(),
    };
    let functions: Vec<serde_json::Value> = kinds
        .iter()
        .map(|&k| {
            let b = k.default_bound();
            Ok(json!({
                "name": k.name(),
                "lower": -b,
                "upper": b,
                "optimum_coordinate": k.optimum_coordinate(),
                "optimum_value": BenchmarkFn::new(k, 2)?.optimum_value(),
                "modality": k.modality(),
            }))
        })
        .collect::<Result<_, Error>>()?;
    let algorithms: Vec<serde_json::Value> = if only.is_some() {
        Vec::new()
    } else {
        Algorithm::ALL
            .iter()
            .map(|&a| {
                let defaults: serde_json::Map<String, serde_json::Value> = EngineConfig::new(a)
                    .entries()
                    .into_iter()
                    .filter(|(k, _)| *k != "generations" && *k != "seed")
                    .map(|(k, v)| (k.to_string(), json!(v)))
                    .collect();
                json!({ "name": a.name(), "description": a.description(), "defaults": defaults })
            })
            .collect()
    };
    if json {
        let mut v = json!({ "functions": functions });
        if only.is_none() {
            v["algorithms"] = json!(algorithms);
        }
        return print_json(&v);
    }
    println!("functions:");
    for f in &functions {
        println!(
            "  {:<14} [{:>6}, {:>6}]  optimum x_i = {:<4} f* = {}  {}",
            f["name"].as_str().unwrap_or_default(),
            f["lower"],
            f["upper"],
            f["optimum_coordinate"],
            f["optimum_value"],
            f["modality"].as_str().unwrap_or_default()
        );
    }
    if only.is_none() {
        println!("algorithms:");
        for a in Algorithm::ALL {
            let c = EngineConfig::new(a);
            println!("  {:<6} N={:<4} {}", a.name(), c.population_size, a.description());
        }
        println!("engine keys (--set key=value):");
        for (k, d) in CONFIG_KEYS {
            println!("  {k:<22} {d}");
        }
    }
    Ok(())
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from)
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let dim = args.dim as usize;
    let function = BenchmarkFn::new(args.function, dim)?;
    let mut cfg = EngineConfig::for_problem(args.algo, dim).with_seed(args.seed);
    if let Some(g) = args.generations {
        cfg.generations = g;
    }
    if let Some(n) = args.population {
        cfg.population_size = n;
    }
    for kv in &args.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects key=value, got `{kv}`")))?;
        if k.trim() == "seed" {
            cfg.seed = v.trim().parse().map_err(|_| Failure::Usage(format!("bad seed `{v}`")))?;
        } else {
            cfg.set(k, v)?;
        }
    }
    if args.dump_regions.is_some() {
        if cfg.algorithm != Algorithm::Cnea {
            return Err(Failure::Usage("--dump-regions applies to cnea only".into()));
        }
        cfg.record_regions = true;
    }
    let mut rng = RngStream::new(cfg.seed);
    let trace = engines::run(&cfg, &function, &mut rng)?;
    let out = args.out.unwrap_or_else(|| {
        default_out_dir().join(format!(
            "{}_{}_{}_seed{}.csv",
            cfg.algorithm,
            function.name(),
            dim,
            cfg.seed
        ))
    });
    write_trace(&out, &trace, args.timing)?;
    if let Some(path) = &args.dump_regions {
        write_regions(path, &trace.regions)?;
    }
    let final_best = trace.final_best();
    let error = cnea_core::stats::error_value(final_best, function.optimum_value());
    if args.json {
        return print_json(&json!({
            "algo": cfg.algorithm.name(),
            "function": function.name(),
            "dim": dim,
            "seed": cfg.seed,
            "generations": trace.generations(),
            "final_best": final_best,
            "final_error": error,
            "trace": out,
        }));
    }
    println!("trace: {}", out.display());
    println!("final error: {error:.16e}");
    Ok(())
}

fn write_regions(path: &Path, regions: &[engines::RegionRecord]) -> Result<(), Failure> {
    let mut out = String::new();
    for r in regions {
        out.push_str(&serde_json::to_string(r).map_err(runtime)?);
        out.push('\n');
    }
    let mut f = std::fs::File::create(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    f.write_all(out.as_bytes())
        .map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn sweep(config: &Path, workers: Option<usize>, out: Option<PathBuf>, json: bool) -> Result<(), Failure> {
    let mut matrix = match ExperimentMatrix::from_file(config) {
        Ok(m) => m,
        Err(e @ Error::Io { .. }) => return Err(Failure::Runtime(e.to_string())),
        Err(e) => return Err(Failure::Usage(e.to_string())),
    };
    if let Some(dir) = out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)) {
        matrix.output_dir = dir;
    }
    if let Some(w) = workers {
        matrix.workers = w;
    }
    let outcomes = run_matrix(&matrix)?;
    let mut failed = 0;
    let mut cells = Vec::new();
    for o in &outcomes {
        match &o.result {
            Ok(c) => cells.push(json!({ "cell": o.key.to_string(), "dir": c.dir, "summary": c.summary })),
            Err(e) => {
                failed += 1;
                eprintln!("cell {} failed: {e}", o.key);
                cells.push(json!({ "cell": o.key.to_string(), "error": e.to_string() }));
            }
        }
    }
    if json {
        print_json(&json!({ "output_dir": matrix.output_dir, "cells": cells }))?;
    } else {
        println!(
            "{} of {} cells completed; outputs in {}",
            outcomes.len() - failed,
            outcomes.len(),
            matrix.output_dir.display()
        );
    }
    if failed > 0 {
        return Err(Failure::Runtime(format!("{failed} cell(s) failed")));
    }
    Ok(())
}

fn summarize(input: &Path, json: bool) -> Result<(), Failure> {
    let cells = summarize_cells(&find_cells(input)?)?;
    if json {
        return print_json(&json!(cells));
    }
    print!("{}", render_summary_table(&cells));
    Ok(())
}

fn ttest(a: &Path, b: &Path, json: bool) -> Result<(), Failure> {
    let row = ttest_cells(a, b)?;
    if json {
        return print_json(&json!(row));
    }
    print!("{}", ttest_csv(std::slice::from_ref(&row)));
    println!();
    print!("{}", render_ttest_table(&[row]));
    Ok(())
}

fn diversity(input: &Path, json: bool) -> Result<(), Failure> {
    let rows = diversity_report(&find_cells(input)?)?;
    if json {
        return print_json(&json!(rows));
    }
    print!("{}", render_diversity_report(&rows));
    Ok(())
}
