use super::config::EngineConfig;
use super::operators::{arithmetic_crossover, binary_tournament, gaussian_mutate, PowerLaw};
use super::{elites, random_population, Engine, StepInfo};
use crate::benchmarks::BenchmarkFn;
use crate::diversity::distance_to_average;
use crate::error::Result;
use crate::space::{Individual, Population, RngStream};
use super::trace::Mode;

/// Mode for the next generation given the current mode and diversity.
pub fn next_mode(current: Mode, diversity: f64, low: f64, high: f64) -> Mode {
    if diversity < low {
        Mode::Explore
    } else if diversity > high {
        Mode::Exploit
    } else {
        current
    }
}

/// Diversity-guided EA alternating between selection-plus-crossover and
/// mutation-only phases.
pub(crate) struct Dgea {
    pop: Population,
    mode: Mode,
    law: PowerLaw,
    alpha: f64,
    low: f64,
    high: f64,
    elitism: usize,
}

impl Dgea {
    pub(crate) fn new(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Self {
        Self {
            pop: random_population(cfg.population_size, function, rng),
            mode: Mode::Exploit,
            law: cfg.power_law,
            alpha: cfg.dgea_alpha,
            low: cfg.dgea_low,
            high: cfg.dgea_high,
            elitism: cfg.elitism,
        }
    }
}

impl Engine for Dgea {
    fn population(&self) -> &Population {
        &self.pop
    }

    fn initial_mode(&self) -> Option<Mode> {
        Some(self.mode)
    }

    fn step(&mut self, function: &BenchmarkFn, rng: &mut RngStream) -> Result<StepInfo> {
        let space = function.space();
        let d = distance_to_average(&self.pop.members, space)?.value();
        self.mode = next_mode(self.mode, d, self.low, self.high);
        let n = self.pop.len();
        let members = &self.pop.members;
        let mut next = elites(&self.pop, self.elitism);
        match self.mode {
            Mode::Exploit => {
                while next.len() < n {
                    let a = binary_tournament(members, rng);
                    let b = binary_tournament(members, rng);
                    let child = arithmetic_crossover(&members[a].genome, &members[b].genome, rng);
                    let f = function.value(&child);
                    next.push(Individual::evaluated(child, f));
                }
            }
            Mode::Explore => {
                // Every non-elite slot is a mutated copy of the member in that slot.
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| members[a].cost().total_cmp(&members[b].cost()).then(a.cmp(&b)));
                for &i in &order[next.len()..] {
                    let mut child = members[i].genome.clone();
                    let variance = self.law.sample(self.alpha, rng);
                    gaussian_mutate(&mut child, variance, 1.0, space, rng);
                    let f = function.value(&child);
                    next.push(Individual::evaluated(child, f));
                }
            }
        }
        self.pop = Population {
            members: next,
            generation: self.pop.generation + 1,
        };
        Ok(StepInfo {
            mode: Some(self.mode),
            ..StepInfo::default()
        })
    }
}
