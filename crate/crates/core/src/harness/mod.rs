//! Experiment orchestration: stagnation runs, diversity profiles, timing,
//! run matrices and their on-disk outputs.

mod io;
mod matrix;
mod report;

use std::time::Instant;

use serde::Serialize;

pub use io::{
    read_runs, read_summary, read_trace, write_runs, write_summary, write_trace, RunRow,
    SummaryRow, TraceRow, RUNS_HEADER, SUMMARY_HEADER, TRACE_HEADER,
};
pub use matrix::{
    cell_seed, run_cell, run_matrix, Budget, CellKey, CellOutcome, CellResult, ExperimentMatrix,
    MATRIX_KEYS,
};
pub use report::{
    diversity_report, find_cells, render_diversity_report, render_summary_table,
    render_ttest_table, summarize_cells, ttest_cells, ttest_csv, CellSummary, DiversityRow,
    TTestRow,
};

use crate::benchmarks::BenchmarkFn;
use crate::engines::{self, EngineConfig, GenerationRecord, RunTrace, Runner, Termination};
use crate::error::{Error, Result};
use crate::space::RngStream;

/// A run stagnates once `window` successive generations bring no strict
/// improvement of the best fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StagnationRule {
    pub window: u64,
    /// Hard generation cap for [`run_to_stagnation`].
    pub cap: u64,
}

impl Default for StagnationRule {
    fn default() -> Self {
        Self {
            window: 500,
            cap: 50_000,
        }
    }
}

impl StagnationRule {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 {
            return Err(Error::Config("stagnation window must be at least 1".into()));
        }
        Ok(())
    }
}

/// Smallest generation `g >= window` whose preceding `window` generations
/// `(g - window, g]` hold no strict improvement of `best[0..]`.
///
/// `best[g]` is the best fitness at generation `g`.
pub fn stagnation_generation(best: &[f64], window: u64) -> Option<u64> {
    let window = window.max(1);
    let mut running = f64::INFINITY;
    let mut last_improvement = 0u64;
    for (g, &b) in best.iter().enumerate() {
        let g = g as u64;
        if g > 0 && b < running {
            last_improvement = g;
        }
        running = running.min(b);
        if g >= window && last_improvement <= g - window {
            return Some(g);
        }
    }
    None
}

pub fn detect_stagnation(trace: &RunTrace, rule: &StagnationRule) -> Option<u64> {
    stagnation_generation(&trace.best_series(), rule.window)
}

/// Steps until the stagnation rule fires or `rule.cap` generations have run.
pub fn run_to_stagnation(
    cfg: &EngineConfig,
    function: &BenchmarkFn,
    rng: &mut RngStream,
    rule: &StagnationRule,
) -> Result<RunTrace> {
    rule.validate()?;
    let mut runner = Runner::new(cfg, function, rng)?;
    let mut running = runner.records()[0].best_fitness;
    let mut last_improvement = 0u64;
    loop {
        let g = runner.generation();
        if g >= rule.window && last_improvement <= g - rule.window {
            return Ok(runner.finish(Termination::Stagnation));
        }
        if g >= rule.cap {
            return Ok(runner.finish(Termination::Cap));
        }
        let best = runner.step(rng)?.best_fitness;
        if best < running {
            running = best;
            last_improvement = g + 1;
        }
    }
}

/// Average diversity over the generations after a burn-in where the
/// population mean fitness strictly decreased.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiversityProfile {
    /// `None` when no generation qualified.
    pub average_diversity: Option<f64>,
    pub generations_counted: usize,
    pub burn_in: u64,
}

/// Default burn-in: 5% of the generation budget, rounded down.
pub fn default_burn_in(budget: u64) -> u64 {
    budget / 20
}

pub fn diversity_profile(records: &[GenerationRecord], burn_in: u64) -> DiversityProfile {
    let mut sum = 0.0;
    let mut counted = 0;
    for pair in records.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        if cur.generation > burn_in && cur.mean_fitness < prev.mean_fitness {
            sum += cur.diversity;
            counted += 1;
        }
    }
    DiversityProfile {
        average_diversity: (counted > 0).then(|| sum / counted as f64),
        generations_counted: counted,
        burn_in,
    }
}

/// Runs the fixed budget and returns the wall-clock milliseconds of the loop.
pub fn timed_run(
    cfg: &EngineConfig,
    function: &BenchmarkFn,
    rng: &mut RngStream,
) -> Result<(RunTrace, f64)> {
    let start = Instant::now();
    let trace = engines::run(cfg, function, rng)?;
    Ok((trace, start.elapsed().as_secs_f64() * 1e3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::Algorithm;
    use proptest::prelude::*;

    fn record(generation: u64, mean: f64, diversity: f64) -> GenerationRecord {
        GenerationRecord {
            generation,
            best_fitness: mean,
            mean_fitness: mean,
            diversity,
            mode: None,
            victims: None,
            replacements: None,
            fallbacks: None,
        }
    }

    fn brute_force(best: &[f64], window: u64) -> Option<u64> {
        let improved = |g: usize| g > 0 && best[g] < best[..g].iter().cloned().fold(f64::INFINITY, f64::min);
        (window as usize..best.len())
            .find(|&g| (g + 1 - window as usize..=g).all(|h| !improved(h)))
            .map(|g| g as u64)
    }

    #[test]
    fn stagnation_examples() {
        let mut best: Vec<f64> = (0..=100).map(|g| 1000.0 - g as f64).collect();
        best.extend(std::iter::repeat_n(900.0, 1000));
        assert_eq!(stagnation_generation(&best, 500), Some(600));
        let improving: Vec<f64> = (0..800).map(|g| -(g as f64)).collect();
        assert_eq!(stagnation_generation(&improving, 500), None);
        assert_eq!(stagnation_generation(&[3.0; 10], 1), Some(1));
    }

    #[test]
    fn stagnation_run_hits_the_cap() {
        let f = BenchmarkFn::make("ellipsoid", 2).unwrap();
        let cfg = EngineConfig::new(Algorithm::Sea).with_population(10);
        let rule = StagnationRule { window: 500, cap: 100 };
        let t = run_to_stagnation(&cfg, &f, &mut RngStream::new(1), &rule).unwrap();
        assert_eq!(t.termination, Termination::Cap);
        assert_eq!(t.generations(), 100);
    }

    #[test]
    fn stagnation_run_stops_after_window() {
        let f = BenchmarkFn::make("ellipsoid", 2).unwrap();
        let cfg = EngineConfig::new(Algorithm::Sea).with_population(10);
        let rule = StagnationRule { window: 5, cap: 10_000 };
        let t = run_to_stagnation(&cfg, &f, &mut RngStream::new(2), &rule).unwrap();
        assert_eq!(t.termination, Termination::Stagnation);
        assert_eq!(
            stagnation_generation(&t.best_series(), 5),
            Some(t.generations())
        );
    }

    #[test]
    fn profile_examples() {
        let recs: Vec<_> = (0..10).map(|g| record(g, 100.0 - g as f64, 0.3)).collect();
        let p = diversity_profile(&recs, 0);
        assert_eq!(p.generations_counted, 9);
        assert!((p.average_diversity.unwrap() - 0.3).abs() < 1e-15);

        let flat: Vec<_> = (0..10).map(|g| record(g, 1.0, 0.3)).collect();
        let p = diversity_profile(&flat, 0);
        assert_eq!(p.generations_counted, 0);
        assert_eq!(p.average_diversity, None);

        let mixed: Vec<_> = (0..30)
            .map(|g| {
                let improving = g == 10 || g == 20;
                let mean = if improving { 0.0 } else { 5.0 };
                let d = if improving { 0.2 } else { 0.9 };
                record(g, mean, d)
            })
            .collect();
        let p = diversity_profile(&mixed, 0);
        assert_eq!(p.generations_counted, 2);
        assert!((p.average_diversity.unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn burn_in_skips_early_generations() {
        let recs: Vec<_> = (0..10).map(|g| record(g, 100.0 - g as f64, g as f64)).collect();
        let p = diversity_profile(&recs, 5);
        assert_eq!(p.generations_counted, 4);
        assert_eq!(p.average_diversity, Some(7.5));
        assert_eq!(default_burn_in(1000), 50);
    }

    #[test]
    fn timed_run_reports_elapsed() {
        let f = BenchmarkFn::make("ellipsoid", 2).unwrap();
        let cfg = EngineConfig::new(Algorithm::Dgea).with_population(10);
        let (t, ms) = timed_run(&cfg, &f, &mut RngStream::new(0)).unwrap();
        assert_eq!(t.records.len(), 1);
        assert!(ms >= 0.0);
    }

    proptest! {
        #[test]
        fn detector_matches_brute_force(
            steps in prop::collection::vec(prop_oneof![3 => Just(0.0), 1 => 0.0f64..1.0], 1..120),
            window in 1u64..30,
        ) {
            let mut best = Vec::with_capacity(steps.len());
            let mut cur = 100.0;
            for s in steps {
                cur -= s;
                best.push(cur);
            }
            prop_assert_eq!(stagnation_generation(&best, window), brute_force(&best, window));
        }
    }
}
