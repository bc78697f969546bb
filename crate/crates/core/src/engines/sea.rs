use super::config::{Algorithm, EngineConfig, SeaVariance};
use super::operators::{arithmetic_crossover, binary_tournament, gaussian_mutate, PowerLaw};
use super::{elites, random_population, Engine, StepInfo};
use crate::benchmarks::BenchmarkFn;
use crate::error::Result;
use crate::space::{Individual, Population, RngStream};

/// Mutation variance of the standard EA at generation `t` (from 0).
pub fn sea_variance(t: u64, schedule: SeaVariance) -> f64 {
    let root = ((t + 1) as f64).sqrt();
    match schedule {
        SeaVariance::Growing => 1.0 + root,
        SeaVariance::Annealed => 1.0 / root,
    }
}

enum Variance {
    Schedule(SeaVariance),
    Pow { law: PowerLaw, alpha: f64 },
}

/// Generational EA shared by the standard and the self-organized criticality
/// baselines; they differ only in where the mutation variance comes from.
pub(crate) struct Sea {
    pop: Population,
    variance: Variance,
    elitism: usize,
    crossover_prob: f64,
    genome_mutation_prob: f64,
}

impl Sea {
    pub(crate) fn new(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Self {
        let variance = match cfg.algorithm {
            Algorithm::Socea => Variance::Pow {
                law: cfg.power_law,
                alpha: cfg.socea_alpha,
            },
            _ => Variance::Schedule(cfg.sea_variance),
        };
        Self {
            pop: random_population(cfg.population_size, function, rng),
            variance,
            elitism: cfg.elitism,
            crossover_prob: cfg.crossover_prob,
            genome_mutation_prob: cfg.genome_mutation_prob,
        }
    }
}

impl Engine for Sea {
    fn population(&self) -> &Population {
        &self.pop
    }

    fn step(&mut self, function: &BenchmarkFn, rng: &mut RngStream) -> Result<StepInfo> {
        let space = function.space();
        let n = self.pop.len();
        let t = self.pop.generation;
        let mut next = elites(&self.pop, self.elitism);
        let members = &self.pop.members;
        while next.len() < n {
            let a = binary_tournament(members, rng);
            let b = binary_tournament(members, rng);
            let mut child = if rng.bernoulli(self.crossover_prob) {
                arithmetic_crossover(&members[a].genome, &members[b].genome, rng)
            } else {
                members[a].genome.clone()
            };
            if rng.bernoulli(self.genome_mutation_prob) {
                let variance = match &self.variance {
                    Variance::Schedule(s) => sea_variance(t, *s),
                    Variance::Pow { law, alpha } => law.sample(*alpha, rng),
                };
                gaussian_mutate(&mut child, variance, 1.0, space, rng);
            }
            let f = function.value(&child);
            next.push(Individual::evaluated(child, f));
        }
        self.pop = Population {
            members: next,
            generation: t + 1,
        };
        Ok(StepInfo::default())
    }
}
