//! Reports over finished cells: rank tables, paired t-tests and diversity
//! averages, as text tables and CSV.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::io::{fmt_f64, read_runs, read_summary, read_trace, SummaryRow};
use super::{default_burn_in, diversity_profile};
use crate::engines::GenerationRecord;
use crate::error::{Error, Result};
use crate::stats::{paired_ttest, rank_labels};

/// Cell directories under `dir`: `dir` itself if it holds `runs.csv`,
/// otherwise its immediate subdirectories that do, sorted by name.
pub fn find_cells(dir: &Path) -> Result<Vec<PathBuf>> {
    if dir.join("runs.csv").is_file() {
        return Ok(vec![dir.to_path_buf()]);
    }
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut cells = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.join("runs.csv").is_file() {
            cells.push(path);
        }
    }
    cells.sort();
    if cells.is_empty() {
        return Err(Error::parse(dir, "no cell outputs (runs.csv) found"));
    }
    Ok(cells)
}

fn cell_summary_row(dir: &Path) -> Result<SummaryRow> {
    let path = dir.join("summary.csv");
    read_summary(&path)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::parse(path, "empty summary"))
}

/// A cell summary with the rank labels that go with its run count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub row: SummaryRow,
    pub labels: [String; 5],
}

pub fn summarize_cells(dirs: &[PathBuf]) -> Result<Vec<CellSummary>> {
    dirs.iter()
        .map(|d| {
            let row = cell_summary_row(d)?;
            let labels = rank_labels(row.runs);
            Ok(CellSummary { row, labels })
        })
        .collect()
}

fn sci(v: f64) -> String {
    format!("{v:.2e}").to_uppercase()
}

fn grid(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |r: &[String]| {
        let cells: Vec<String> = r
            .iter()
            .zip(&width)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        cells.join("  ").trim_end().to_string()
    };
    let mut out = line(header);
    out.push('\n');
    out.push_str(&"-".repeat(width.iter().sum::<usize>() + 2 * cols.saturating_sub(1)));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

/// Error-value tables, one block per (algorithm, dimension, run count) with a
/// column per function and rows for the rank picks, mean and std.
pub fn render_summary_table(cells: &[CellSummary]) -> String {
    let mut blocks: BTreeMap<(String, usize, usize), Vec<&CellSummary>> = BTreeMap::new();
    for c in cells {
        blocks
            .entry((c.row.algo.clone(), c.row.dim, c.row.runs))
            .or_default()
            .push(c);
    }
    let mut out = String::new();
    for ((algo, dim, runs), cols) in blocks {
        out.push_str(&format!("{algo}, dim {dim}, {runs} runs\n"));
        let mut header = vec![String::new()];
        header.extend(cols.iter().map(|c| c.row.function.clone()));
        let labels = &cols[0].labels;
        let mut rows: Vec<Vec<String>> = Vec::new();
        for (i, label) in labels.iter().enumerate() {
            let mut r = vec![label.clone()];
            r.extend(cols.iter().map(|c| {
                let v = [c.row.best, c.row.p23, c.row.median, c.row.p73, c.row.worst][i];
                sci(v)
            }));
            rows.push(r);
        }
        let mut mean = vec!["Mean".to_string()];
        mean.extend(cols.iter().map(|c| sci(c.row.mean)));
        let mut std = vec!["Std".to_string()];
        std.extend(cols.iter().map(|c| sci(c.row.std)));
        rows.push(mean);
        rows.push(std);
        out.push_str(&grid(&header, &rows));
        out.push('\n');
    }
    out
}

/// Paired t-test between two cells on the same problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TTestRow {
    pub function: String,
    pub dim: usize,
    pub algo_a: String,
    pub algo_b: String,
    pub t: f64,
    pub df: usize,
    pub p: f64,
}

/// Pairs the runs of two cells by run index and tests their error values.
///
/// Both cells must cover the same problem with the same seeds.
pub fn ttest_cells(a: &Path, b: &Path) -> Result<TTestRow> {
    let sa = cell_summary_row(a)?;
    let sb = cell_summary_row(b)?;
    if (sa.function.as_str(), sa.dim) != (sb.function.as_str(), sb.dim) {
        return Err(Error::Config(format!(
            "cells cover different problems: {} {} vs {} {}",
            sa.function, sa.dim, sb.function, sb.dim
        )));
    }
    let ra = read_runs(&a.join("runs.csv"))?;
    let rb = read_runs(&b.join("runs.csv"))?;
    if ra.len() != rb.len() {
        return Err(Error::LengthMismatch {
            left: ra.len(),
            right: rb.len(),
        });
    }
    if ra.iter().zip(&rb).any(|(x, y)| x.seed != y.seed) {
        return Err(Error::Config("runs are not paired: seeds differ".into()));
    }
    let ea: Vec<f64> = ra.iter().map(|r| r.error).collect();
    let eb: Vec<f64> = rb.iter().map(|r| r.error).collect();
    let r = paired_ttest(&ea, &eb)?;
    Ok(TTestRow {
        function: sa.function,
        dim: sa.dim,
        algo_a: sa.algo,
        algo_b: sb.algo,
        t: r.t_statistic,
        df: r.degrees_of_freedom,
        p: r.p_value,
    })
}

pub fn ttest_csv(rows: &[TTestRow]) -> String {
    let mut out = String::from("function,dim,algo_a,algo_b,t,df,p\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.function,
            r.dim,
            r.algo_a,
            r.algo_b,
            fmt_f64(r.t),
            r.df,
            fmt_f64(r.p)
        ));
    }
    out
}

/// p-value table with a row per problem and a column per algorithm pair.
pub fn render_ttest_table(rows: &[TTestRow]) -> String {
    let mut pairs: Vec<String> = Vec::new();
    let mut table: BTreeMap<(String, usize), BTreeMap<String, &TTestRow>> = BTreeMap::new();
    for r in rows {
        let pair = format!("{} vs {}", r.algo_a, r.algo_b);
        if !pairs.contains(&pair) {
            pairs.push(pair.clone());
        }
        table
            .entry((r.function.clone(), r.dim))
            .or_default()
            .insert(pair, r);
    }
    let mut header = vec!["function".to_string(), "dim".to_string()];
    header.extend(pairs.iter().map(|p| format!("p ({p})")));
    let body: Vec<Vec<String>> = table
        .iter()
        .map(|((f, d), cols)| {
            let mut r = vec![f.clone(), d.to_string()];
            r.extend(pairs.iter().map(|p| {
                cols.get(p)
                    .map_or_else(|| "-".to_string(), |t| format!("{:.4}", t.p))
            }));
            r
        })
        .collect();
    grid(&header, &body)
}

/// Average diversity of one cell over its runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityRow {
    pub algo: String,
    pub function: String,
    pub dim: usize,
    /// Runs with at least one qualifying generation.
    pub runs_counted: usize,
    pub runs: usize,
    /// Mean over runs of each run's profile average; `None` if no run counted.
    pub average_diversity: Option<f64>,
}

/// Diversity profile of every trace in each cell; the burn-in is the default
/// fraction of the trace's own length.
pub fn diversity_report(dirs: &[PathBuf]) -> Result<Vec<DiversityRow>> {
    dirs.iter()
        .map(|dir| {
            let s = cell_summary_row(dir)?;
            let mut traces: Vec<PathBuf> = std::fs::read_dir(dir)
                .map_err(|e| Error::io(dir, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.file_name()
                        .and_then(|n| n.to_str())
                        .is_some_and(|n| n.starts_with("run_") && n.ends_with(".csv"))
                })
                .collect();
            traces.sort();
            let mut averages = Vec::new();
            for t in &traces {
                let records: Vec<GenerationRecord> =
                    read_trace(t)?.iter().map(|r| r.to_record()).collect();
                let budget = records.last().map_or(0, |r| r.generation);
                if let Some(a) = diversity_profile(&records, default_burn_in(budget)).average_diversity {
                    averages.push(a);
                }
            }
            Ok(DiversityRow {
                algo: s.algo,
                function: s.function,
                dim: s.dim,
                runs_counted: averages.len(),
                runs: traces.len(),
                average_diversity: (!averages.is_empty())
                    .then(|| averages.iter().sum::<f64>() / averages.len() as f64),
            })
        })
        .collect()
}

/// One row per (function, dimension), one column per algorithm.
pub fn render_diversity_report(rows: &[DiversityRow]) -> String {
    let mut algos: Vec<String> = Vec::new();
    let mut table: BTreeMap<(String, usize), BTreeMap<String, Option<f64>>> = BTreeMap::new();
    for r in rows {
        if !algos.contains(&r.algo) {
            algos.push(r.algo.clone());
        }
        table
            .entry((r.function.clone(), r.dim))
            .or_default()
            .insert(r.algo.clone(), r.average_diversity);
    }
    let mut header = vec!["function".to_string(), "dim".to_string()];
    header.extend(algos.iter().cloned());
    let body: Vec<Vec<String>> = table
        .iter()
        .map(|((f, d), cols)| {
            let mut r = vec![f.clone(), d.to_string()];
            r.extend(algos.iter().map(|a| match cols.get(a) {
                Some(Some(v)) => sci(*v),
                Some(None) => "n/a".to_string(),
                None => "-".to_string(),
            }));
            r
        })
        .collect();
    grid(&header, &body)
}
