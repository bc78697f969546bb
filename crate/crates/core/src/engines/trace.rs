use std::fmt;

use serde::Serialize;

use super::config::{Algorithm, EngineConfig};
use crate::benchmarks::BenchmarkFn;
use crate::niching::{CellKey, Region};
use crate::space::Individual;

/// Search phase of the diversity-guided EA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exploit,
    Explore,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exploit => "exploit",
            Mode::Explore => "explore",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    /// The fixed generation budget was used up.
    Budget,
    /// The stagnation window elapsed without improvement.
    Stagnation,
    /// The hard generation cap was reached first.
    Cap,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Budget => "budget",
            Termination::Stagnation => "stagnation",
            Termination::Cap => "cap",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One generation of a run.
///
/// `mode` is set for the diversity-guided EA only; the informed-mutation
/// counters are set for the counter-niching EA only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationRecord {
    pub generation: u64,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub diversity: f64,
    pub mode: Option<Mode>,
    pub victims: Option<usize>,
    pub replacements: Option<usize>,
    pub fallbacks: Option<usize>,
}

/// Dense-region snapshot for debugging dumps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRecord {
    pub generation: u64,
    pub cell_key: CellKey,
    pub density: usize,
    pub fitness_mean: f64,
    pub fitness_std: f64,
}

impl RegionRecord {
    pub(crate) fn new(generation: u64, r: &Region) -> Self {
        Self {
            generation,
            cell_key: r.cell_key.clone(),
            density: r.density,
            fitness_mean: r.fitness_mean,
            fitness_std: r.fitness_std,
        }
    }
}

/// Everything recorded about one run.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub function: String,
    pub dim: usize,
    pub seed: u64,
    pub records: Vec<GenerationRecord>,
    /// Best individual seen over the whole run.
    pub best: Option<Individual>,
    pub termination: Termination,
    /// Wall-clock milliseconds since the run started, per record.
    ///
    /// Not reproducible; kept apart from `records`.
    pub elapsed_ms: Vec<f64>,
    pub regions: Vec<RegionRecord>,
}

impl RunTrace {
    pub(crate) fn new(cfg: &EngineConfig, function: &BenchmarkFn) -> Self {
        Self {
            algorithm: cfg.algorithm,
            function: function.name().to_string(),
            dim: function.dim(),
            seed: cfg.seed,
            records: Vec::new(),
            best: None,
            termination: Termination::Budget,
            elapsed_ms: Vec::new(),
            regions: Vec::new(),
        }
    }

    pub fn final_best(&self) -> f64 {
        self.records
            .last()
            .map_or(f64::NAN, |r| r.best_fitness)
    }

    pub fn best_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.best_fitness).collect()
    }

    /// Number of generations produced after initialization.
    pub fn generations(&self) -> u64 {
        self.records.last().map_or(0, |r| r.generation)
    }

    /// Total wall-clock milliseconds of the run loop.
    pub fn wall_ms(&self) -> f64 {
        self.elapsed_ms.last().copied().unwrap_or(0.0)
    }
}
