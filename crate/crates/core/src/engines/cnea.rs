use super::config::EngineConfig;
use super::{random_population, Engine, StepInfo};
use crate::benchmarks::BenchmarkFn;
use crate::error::Result;
use crate::informed::{detect_victims, informed_mutation, regular_ops, InformedConfig};
use crate::niching::{high_density_regions, GridLayout, MemoryArchive};
use crate::space::{Individual, Population, RngStream};

/// Keeps the `elitism` best of `parents` and `offspring`, then fills the
/// remaining slots by binary tournaments over the rest of the union, each
/// winner leaving the pool.
pub fn survivor_selection(
    parents: &Population,
    offspring: &Population,
    size: usize,
    elitism: usize,
    rng: &mut RngStream,
) -> Population {
    let union: Vec<Individual> = parents
        .members
        .iter()
        .chain(&offspring.members)
        .cloned()
        .collect();
    let mut order: Vec<usize> = (0..union.len()).collect();
    order.sort_by(|&a, &b| union[a].cost().total_cmp(&union[b].cost()).then(a.cmp(&b)));
    let keep = elitism.min(size).min(union.len());
    let mut next: Vec<Individual> = order[..keep].iter().map(|&i| union[i].clone()).collect();
    let mut pool: Vec<usize> = order[keep..].to_vec();
    pool.sort_unstable();
    while next.len() < size && !pool.is_empty() {
        let a = rng.index(pool.len());
        let b = rng.index(pool.len());
        let win = if union[pool[b]].cost() < union[pool[a]].cost() { b } else { a };
        next.push(union[pool.swap_remove(win)].clone());
    }
    Population {
        members: next,
        generation: parents.generation + 1,
    }
}

pub(crate) struct Cnea {
    pop: Population,
    layout: GridLayout,
    archive: MemoryArchive,
    informed: InformedConfig,
    density_fraction: f64,
    elitism: usize,
    record_regions: bool,
}

impl Cnea {
    pub(crate) fn new(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Result<Self> {
        let layout = GridLayout::new(function.space(), &cfg.niching, rng)?;
        let pop = random_population(cfg.population_size, function, rng);
        let mut informed = cfg.informed.clone();
        informed.crossover_prob = cfg.crossover_prob;
        Ok(Self {
            pop,
            layout,
            archive: MemoryArchive::new(),
            informed,
            density_fraction: cfg.niching.density_fraction,
            elitism: cfg.elitism,
            record_regions: cfg.record_regions,
        })
    }
}

impl Engine for Cnea {
    fn population(&self) -> &Population {
        &self.pop
    }

    fn step(&mut self, function: &BenchmarkFn, rng: &mut RngStream) -> Result<StepInfo> {
        let grid = self.layout.build(&self.pop);
        let regions = high_density_regions(&grid, &self.pop, self.density_fraction);
        let victims = detect_victims(&regions, &self.pop, &self.informed);
        let parents = self.pop.clone();
        let mut mutated = parents.clone();
        let outcome = informed_mutation(
            &mut mutated,
            &victims,
            &self.layout,
            &grid,
            function,
            &mut self.archive,
            rng,
            &self.informed,
        )?;
        let offspring = regular_ops(&mutated, function, rng, &self.informed);
        // The union uses the parents from before informed replacement.
        self.pop = survivor_selection(&parents, &offspring, parents.len(), self.elitism, rng);
        Ok(StepInfo {
            mode: None,
            informed: Some(outcome),
            regions: if self.record_regions { regions } else { Vec::new() },
        })
    }
}
