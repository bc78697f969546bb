//! CSV persistence for traces, per-run results and cell summaries.
//!
//! Floats are written with 17 significant digits; columns that do not apply
//! to a row are left empty.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engines::{GenerationRecord, Mode, RunTrace};
use crate::error::{Error, Result};

pub const TRACE_HEADER: &str =
    "generation,best_fitness,mean_fitness,diversity,mode,victims,replacements,wall_ms";
pub const RUNS_HEADER: &str = "run,seed,final_best,error,generations,termination,stagnation_gen,wall_ms";
pub const SUMMARY_HEADER: &str =
    "algo,function,dim,runs,best,p23,median,p73,worst,mean,std,mean_wall_ms,stagnation_gen_mean";

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn write_lines(path: &Path, header: &str, lines: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut out = String::with_capacity(1024);
    out.push_str(header);
    out.push('\n');
    for fields in lines {
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path, header: &str) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let found = reader.headers().map_err(|e| csv_error(path, e))?;
    let found: Vec<&str> = found.iter().collect();
    if found.join(",") != header {
        return Err(Error::parse(path, format!("unexpected header `{}`", found.join(","))));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(|e| csv_error(path, e)))
        .collect()
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::parse(path, format!("{other:?}")),
        }
    } else {
        Error::parse(path, e.to_string())
    }
}

/// One row of a trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub generation: u64,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub diversity: f64,
    pub mode: Option<String>,
    pub victims: Option<usize>,
    pub replacements: Option<usize>,
    pub wall_ms: Option<f64>,
}

impl TraceRow {
    pub fn to_record(&self) -> GenerationRecord {
        let mode = match self.mode.as_deref() {
            Some("exploit") => Some(Mode::Exploit),
            Some("explore") => Some(Mode::Explore),
            _ => None,
        };
        GenerationRecord {
            generation: self.generation,
            best_fitness: self.best_fitness,
            mean_fitness: self.mean_fitness,
            diversity: self.diversity,
            mode,
            victims: self.victims,
            replacements: self.replacements,
            fallbacks: None,
        }
    }
}

/// Writes one row per generation; `wall_ms` is filled only when `timing` is
/// set, so untimed traces are reproducible byte for byte.
pub fn write_trace(path: &Path, trace: &RunTrace, timing: bool) -> Result<()> {
    let lines = trace.records.iter().enumerate().map(|(i, r)| {
        let wall = if timing { trace.elapsed_ms.get(i).copied() } else { None };
        vec![
            r.generation.to_string(),
            fmt_f64(r.best_fitness),
            fmt_f64(r.mean_fitness),
            fmt_f64(r.diversity),
            opt(r.mode),
            opt(r.victims),
            opt(r.replacements),
            opt_f64(wall),
        ]
    });
    write_lines(path, TRACE_HEADER, lines)
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>> {
    read_rows(path, TRACE_HEADER)
}

/// Final result of one run in a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub run: usize,
    pub seed: u64,
    pub final_best: f64,
    pub error: f64,
    pub generations: u64,
    pub termination: String,
    pub stagnation_gen: Option<u64>,
    pub wall_ms: Option<f64>,
}

pub fn write_runs(path: &Path, rows: &[RunRow]) -> Result<()> {
    let lines = rows.iter().map(|r| {
        vec![
            r.run.to_string(),
            r.seed.to_string(),
            fmt_f64(r.final_best),
            fmt_f64(r.error),
            r.generations.to_string(),
            r.termination.clone(),
            opt(r.stagnation_gen),
            opt_f64(r.wall_ms),
        ]
    });
    write_lines(path, RUNS_HEADER, lines)
}

pub fn read_runs(path: &Path) -> Result<Vec<RunRow>> {
    read_rows(path, RUNS_HEADER)
}

/// Summary of one (algorithm, function, dimension) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algo: String,
    pub function: String,
    pub dim: usize,
    pub runs: usize,
    pub best: f64,
    pub p23: f64,
    pub median: f64,
    pub p73: f64,
    pub worst: f64,
    pub mean: f64,
    pub std: f64,
    pub mean_wall_ms: Option<f64>,
    pub stagnation_gen_mean: Option<f64>,
}

impl SummaryRow {
    fn fields(&self) -> Vec<String> {
        vec![
            self.algo.clone(),
            self.function.clone(),
            self.dim.to_string(),
            self.runs.to_string(),
            fmt_f64(self.best),
            fmt_f64(self.p23),
            fmt_f64(self.median),
            fmt_f64(self.p73),
            fmt_f64(self.worst),
            fmt_f64(self.mean),
            fmt_f64(self.std),
            opt_f64(self.mean_wall_ms),
            opt_f64(self.stagnation_gen_mean),
        ]
    }
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_lines(path, SUMMARY_HEADER, rows.iter().map(SummaryRow::fields))
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    read_rows(path, SUMMARY_HEADER)
}
