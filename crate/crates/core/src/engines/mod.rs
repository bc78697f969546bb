//! Run loops for the counter-niching EA and the four baselines.
//!
//! Every engine is driven one generation at a time by a [`Runner`], which
//! records a [`GenerationRecord`] per generation (generation 0 is the random
//! initial population). [`run`] drives a fixed budget.

mod cea;
mod cnea;
mod config;
mod dgea;
pub mod operators;
mod sea;
mod trace;

use std::time::Instant;

pub use cea::{torus_neighbors, CellularGrid};
pub use cnea::survivor_selection;
pub use config::{default_generations, Algorithm, EngineConfig, SeaVariance, CONFIG_KEYS};
pub use dgea::next_mode;
pub use operators::{pow_sample, PowerLaw};
pub use sea::sea_variance;
pub use trace::{GenerationRecord, Mode, RegionRecord, RunTrace, Termination};

use crate::benchmarks::BenchmarkFn;
use crate::diversity::distance_to_average;
use crate::error::Result;
use crate::informed::InformedOutcome;
use crate::niching::Region;
use crate::space::{Individual, Population, RngStream};

/// What one generation step reports besides the new population.
#[derive(Debug, Default)]
pub(crate) struct StepInfo {
    pub mode: Option<Mode>,
    pub informed: Option<InformedOutcome>,
    pub regions: Vec<Region>,
}

pub(crate) trait Engine: Send {
    fn population(&self) -> &Population;
    /// Mode recorded for the initial generation.
    fn initial_mode(&self) -> Option<Mode> {
        None
    }
    fn step(&mut self, function: &BenchmarkFn, rng: &mut RngStream) -> Result<StepInfo>;
}

pub(crate) fn random_population(n: usize, function: &BenchmarkFn, rng: &mut RngStream) -> Population {
    let members = (0..n)
        .map(|_| {
            let g = function.space().random_genome(rng);
            let f = function.value(&g);
            Individual::evaluated(g, f)
        })
        .collect();
    Population::new(members)
}

/// Steps an engine and accumulates its trace.
pub struct Runner<'a> {
    cfg: EngineConfig,
    function: &'a BenchmarkFn,
    engine: Box<dyn Engine + 'a>,
    trace: RunTrace,
    started: Instant,
}

impl<'a> Runner<'a> {
    /// Validates `cfg`, initializes and evaluates the first population.
    pub fn new(cfg: &EngineConfig, function: &'a BenchmarkFn, rng: &mut RngStream) -> Result<Self> {
        cfg.validate()?;
        let started = Instant::now();
        let engine: Box<dyn Engine + 'a> = match cfg.algorithm {
            Algorithm::Cnea => Box::new(cnea::Cnea::new(cfg, function, rng)?),
            Algorithm::Sea | Algorithm::Socea => Box::new(sea::Sea::new(cfg, function, rng)),
            Algorithm::Cea => Box::new(cea::Cea::new(cfg, function, rng)?),
            Algorithm::Dgea => Box::new(dgea::Dgea::new(cfg, function, rng)),
        };
        let mut runner = Self {
            cfg: cfg.clone(),
            function,
            trace: RunTrace::new(cfg, function),
            engine,
            started,
        };
        let mode = runner.engine.initial_mode();
        runner.record(StepInfo {
            mode,
            ..StepInfo::default()
        })?;
        Ok(runner)
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn population(&self) -> &Population {
        self.engine.population()
    }

    /// Number of generations produced after initialization.
    pub fn generation(&self) -> u64 {
        self.trace.records.last().map_or(0, |r| r.generation)
    }

    pub fn records(&self) -> &[GenerationRecord] {
        &self.trace.records
    }

    pub fn step(&mut self, rng: &mut RngStream) -> Result<&GenerationRecord> {
        let info = self.engine.step(self.function, rng)?;
        self.record(info)?;
        Ok(self.trace.records.last().expect("just recorded"))
    }

    pub fn finish(mut self, termination: Termination) -> RunTrace {
        self.trace.termination = termination;
        self.trace
    }

    fn record(&mut self, info: StepInfo) -> Result<()> {
        let generation = self.trace.records.len() as u64;
        let pop = self.engine.population();
        let best = pop.best().expect("non-empty evaluated population").clone();
        let diversity = distance_to_average(&pop.members, self.function.space())?.value();
        let (victims, replacements, fallbacks) = match &info.informed {
            Some(o) => (
                Some(o.victims_detected),
                Some(o.members_replaced),
                Some(o.sampling_fallbacks),
            ),
            None if self.cfg.algorithm == Algorithm::Cnea => (Some(0), Some(0), Some(0)),
            None => (None, None, None),
        };
        if self.cfg.record_regions {
            self.trace
                .regions
                .extend(info.regions.iter().map(|r| RegionRecord::new(generation, r)));
        }
        self.trace.records.push(GenerationRecord {
            generation,
            best_fitness: best.cost(),
            mean_fitness: pop.mean_fitness().expect("evaluated population"),
            diversity,
            mode: info.mode,
            victims,
            replacements,
            fallbacks,
        });
        self.trace
            .elapsed_ms
            .push(self.started.elapsed().as_secs_f64() * 1e3);
        if self.trace.best.as_ref().is_none_or(|b| best.cost() < b.cost()) {
            self.trace.best = Some(best);
        }
        Ok(())
    }
}

/// Runs `cfg.generations` generations.
pub fn run(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Result<RunTrace> {
    let mut runner = Runner::new(cfg, function, rng)?;
    for _ in 0..cfg.generations {
        runner.step(rng)?;
    }
    Ok(runner.finish(Termination::Budget))
}

fn run_as(
    algorithm: Algorithm,
    cfg: &EngineConfig,
    function: &BenchmarkFn,
    rng: &mut RngStream,
) -> Result<RunTrace> {
    if cfg.algorithm != algorithm {
        return Err(crate::Error::Config(format!(
            "configuration is for {}, not {}",
            cfg.algorithm, algorithm
        )));
    }
    run(cfg, function, rng)
}

pub fn run_cnea(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Result<RunTrace> {
    run_as(Algorithm::Cnea, cfg, function, rng)
}

pub fn run_sea(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Result<RunTrace> {
    run_as(Algorithm::Sea, cfg, function, rng)
}

pub fn run_socea(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Result<RunTrace> {
    run_as(Algorithm::Socea, cfg, function, rng)
}

pub fn run_cea(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Result<RunTrace> {
    run_as(Algorithm::Cea, cfg, function, rng)
}

pub fn run_dgea(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Result<RunTrace> {
    run_as(Algorithm::Dgea, cfg, function, rng)
}

/// Copies the `count` best members (ties by index) of `pop`.
pub(crate) fn elites(pop: &Population, count: usize) -> Vec<Individual> {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| {
        pop.members[a]
            .cost()
            .total_cmp(&pop.members[b].cost())
            .then(a.cmp(&b))
    });
    order
        .into_iter()
        .take(count.min(pop.len()))
        .map(|i| pop.members[i].clone())
        .collect()
}
