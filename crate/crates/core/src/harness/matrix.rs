//! Run matrices: every (algorithm, function, dimension) cell times a number
//! of seeded runs, with one trace file per run and one summary per cell.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::io::{write_runs, write_summary, write_trace, RunRow, SummaryRow};
use super::{detect_stagnation, run_to_stagnation, StagnationRule};
use crate::benchmarks::{BenchmarkFn, FunctionKind};
use crate::engines::{self, Algorithm, EngineConfig, RunTrace};
use crate::error::{Error, Result};
use crate::space::RngStream;
use crate::stats::{error_value, summarize};

/// How long each run lasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    /// A fixed number of generations; `None` uses the per-algorithm default.
    Fixed(Option<usize>),
    /// Until the stagnation rule fires or its cap is reached.
    Stagnation,
}

/// Matrix configuration keys, with a short description each. Engine keys
/// (see `EngineConfig`) are accepted as well and apply to every cell.
pub const MATRIX_KEYS: &[(&str, &str)] = &[
    ("algos", "comma-separated algorithms (default: all five)"),
    ("functions", "comma-separated functions (default: all seven)"),
    ("dims", "comma-separated dimensions (default: 20,50,100)"),
    ("runs", "runs per cell (default: 30)"),
    ("seed_base", "seed of run 0; run i uses seed_base + i (default: 0)"),
    ("output_dir", "output directory (default: results)"),
    ("budget", "fixed or stagnation (default: fixed)"),
    ("stagnation_window", "generations without improvement that mark stagnation (default: 500)"),
    ("stagnation_cap", "hard generation cap in stagnation mode (default: 50000)"),
    ("workers", "worker threads, 0 for one per processor (default: 0)"),
    ("timing", "record wall-clock times in traces and summaries (default: false)"),
];

/// A full experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentMatrix {
    pub algos: Vec<Algorithm>,
    pub functions: Vec<String>,
    pub dims: Vec<usize>,
    pub runs: usize,
    pub budget: Budget,
    pub stagnation: StagnationRule,
    pub seed_base: u64,
    pub output_dir: PathBuf,
    /// 0 means one worker per available processor.
    pub workers: usize,
    pub timing: bool,
    /// Engine `key = value` overrides applied to every cell, in order.
    pub overrides: Vec<(String, String)>,
}

impl Default for ExperimentMatrix {
    fn default() -> Self {
        Self {
            algos: Algorithm::ALL.to_vec(),
            functions: FunctionKind::ALL.iter().map(|k| k.name().to_string()).collect(),
            dims: vec![20, 50, 100],
            runs: 30,
            budget: Budget::Fixed(None),
            stagnation: StagnationRule::default(),
            seed_base: 0,
            output_dir: PathBuf::from("results"),
            workers: 0,
            timing: false,
            overrides: Vec::new(),
        }
    }
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Config(format!("bad entry `{s}` in `{key}`")))
        })
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Config(format!("`{key}` is empty")));
    }
    Ok(items)
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

impl ExperimentMatrix {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "algos" => self.algos = list(key, value)?,
            "functions" => self.functions = list(key, value)?,
            "dims" => self.dims = list(key, value)?,
            "runs" => self.runs = scalar(key, value)?,
            "seed_base" => self.seed_base = scalar(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "budget" => {
                self.budget = match value {
                    "fixed" => Budget::Fixed(self.fixed_generations()),
                    "stagnation" => Budget::Stagnation,
                    _ => return Err(Error::Config(format!("bad value `{value}` for `budget`"))),
                }
            }
            "generations" => self.budget = Budget::Fixed(Some(scalar(key, value)?)),
            "stagnation_window" => self.stagnation.window = scalar(key, value)?,
            "stagnation_cap" => self.stagnation.cap = scalar(key, value)?,
            "workers" => self.workers = scalar(key, value)?,
            "timing" => self.timing = scalar(key, value)?,
            "seed" => {
                return Err(Error::Config(
                    "`seed` is per run in a matrix; set `seed_base`".into(),
                ))
            }
            other => {
                EngineConfig::new(Algorithm::Cnea).set(other, value)?;
                self.overrides.push((other.to_string(), value.to_string()));
            }
        }
        Ok(())
    }

    fn fixed_generations(&self) -> Option<usize> {
        match self.budget {
            Budget::Fixed(g) => g,
            Budget::Stagnation => None,
        }
    }

    /// Parses flat `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Self::default();
        let mut seen = std::collections::BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let k = k.trim();
            if !seen.insert(k.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
            m.set(k, v).map_err(|e| {
                let detail = match e {
                    Error::Config(m) => m,
                    other => other.to_string(),
                };
                Error::Config(format!("line {}: {detail}", lineno + 1))
            })?;
        }
        m.validate()?;
        Ok(m)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::parse(path, e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.algos.is_empty() || self.functions.is_empty() || self.dims.is_empty() {
            return Err(Error::Config("matrix needs algorithms, functions and dimensions".into()));
        }
        if self.runs == 0 {
            return Err(Error::Config("`runs` must be at least 1".into()));
        }
        if self.seed_base.checked_add(self.runs as u64 - 1).is_none() {
            return Err(Error::Config("seed_base + runs overflows".into()));
        }
        self.stagnation.validate()
    }

    /// Cells in row-major order: algorithms, then functions, then dimensions.
    pub fn cells(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for &algo in &self.algos {
            for function in &self.functions {
                for &dim in &self.dims {
                    out.push(CellKey {
                        algo,
                        function: function.clone(),
                        dim,
                    });
                }
            }
        }
        out
    }

    /// Engine configuration of a cell, without the per-run seed.
    pub fn engine_config(&self, key: &CellKey) -> Result<EngineConfig> {
        let mut cfg = EngineConfig::for_problem(key.algo, key.dim);
        for (k, v) in &self.overrides {
            cfg.set(k, v)?;
        }
        if let Budget::Fixed(Some(g)) = self.budget {
            cfg.generations = g;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn cell_dir(&self, key: &CellKey) -> PathBuf {
        self.output_dir.join(key.to_string())
    }
}

/// Seed of run `run` in every cell, so runs pair up across algorithms.
pub fn cell_seed(seed_base: u64, run: usize) -> u64 {
    seed_base + run as u64
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CellKey {
    pub algo: Algorithm,
    pub function: String,
    pub dim: usize,
}

impl fmt::Display for CellKey {
    /// Directory name, `<algo>_<function>_<dim>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.algo, self.function, self.dim)
    }
}

/// Everything a finished cell produced.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub key: CellKey,
    pub dir: PathBuf,
    pub summary: SummaryRow,
    pub runs: Vec<RunRow>,
}

#[derive(Debug)]
pub struct CellOutcome {
    pub key: CellKey,
    pub result: Result<CellResult>,
}

fn one_run(
    matrix: &ExperimentMatrix,
    cfg: &EngineConfig,
    function: &BenchmarkFn,
    run: usize,
) -> Result<(RunTrace, RunRow)> {
    let seed = cell_seed(matrix.seed_base, run);
    let cfg = cfg.clone().with_seed(seed);
    let mut rng = RngStream::new(seed);
    let trace = match matrix.budget {
        Budget::Fixed(_) => engines::run(&cfg, function, &mut rng)?,
        Budget::Stagnation => run_to_stagnation(&cfg, function, &mut rng, &matrix.stagnation)?,
    };
    let final_best = trace.best.as_ref().and_then(|b| b.fitness).unwrap_or(f64::NAN);
    let row = RunRow {
        run,
        seed,
        final_best,
        error: error_value(final_best, function.optimum_value()),
        generations: trace.generations(),
        termination: trace.termination.to_string(),
        stagnation_gen: detect_stagnation(&trace, &matrix.stagnation),
        wall_ms: matrix.timing.then(|| trace.wall_ms()),
    };
    Ok((trace, row))
}

/// Runs and persists one cell: `run_NNN.csv` per run, `runs.csv` and a
/// one-row `summary.csv`.
pub fn run_cell(matrix: &ExperimentMatrix, key: &CellKey) -> Result<CellResult> {
    let function = BenchmarkFn::make(&key.function, key.dim)?;
    let cfg = matrix.engine_config(key)?;
    let dir = matrix.cell_dir(key);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let runs: Vec<RunRow> = (0..matrix.runs)
        .into_par_iter()
        .map(|run| {
            let (trace, row) = one_run(matrix, &cfg, &function, run)?;
            write_trace(&dir.join(format!("run_{run:03}.csv")), &trace, matrix.timing)?;
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let errors: Vec<f64> = runs.iter().map(|r| r.error).collect();
    let s = summarize(&errors)?;
    let mean_of = |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    let summary = SummaryRow {
        algo: key.algo.to_string(),
        function: key.function.clone(),
        dim: key.dim,
        runs: runs.len(),
        best: s.best,
        p23: s.p23,
        median: s.median,
        p73: s.p73,
        worst: s.worst,
        mean: s.mean,
        std: s.std,
        mean_wall_ms: if matrix.timing {
            mean_of(runs.iter().filter_map(|r| r.wall_ms).collect())
        } else {
            None
        },
        stagnation_gen_mean: mean_of(runs.iter().filter_map(|r| r.stagnation_gen).map(|g| g as f64).collect()),
    };
    write_runs(&dir.join("runs.csv"), &runs)?;
    write_summary(&dir.join("summary.csv"), std::slice::from_ref(&summary))?;
    Ok(CellResult {
        key: key.clone(),
        dir,
        summary,
        runs,
    })
}

/// Runs every cell on up to `matrix.workers` threads. A failing cell is
/// reported in its outcome without stopping the others. The summaries of all
/// successful cells are also collected into `<output_dir>/summary.csv`.
pub fn run_matrix(matrix: &ExperimentMatrix) -> Result<Vec<CellOutcome>> {
    matrix.validate()?;
    std::fs::create_dir_all(&matrix.output_dir).map_err(|e| Error::io(&matrix.output_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(matrix.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start workers: {e}")))?;
    let cells = matrix.cells();
    let outcomes: Vec<CellOutcome> = pool.install(|| {
        cells
            .par_iter()
            .map(|key| CellOutcome {
                key: key.clone(),
                result: run_cell(matrix, key),
            })
            .collect()
    });
    let rows: Vec<SummaryRow> = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok().map(|c| c.summary.clone()))
        .collect();
    write_summary(&matrix.output_dir.join("summary.csv"), &rows)?;
    Ok(outcomes)
}
