use super::config::EngineConfig;
use super::operators::{arithmetic_crossover, gaussian_mutate, PowerLaw};
use super::{random_population, Engine, StepInfo};
use crate::benchmarks::BenchmarkFn;
use crate::error::{Error, Result};
use crate::space::{Individual, Population, RngStream};

/// Von Neumann neighbours of `(row, col)` on a `rows x cols` torus, in the
/// order north, south, west, east.
pub fn torus_neighbors(row: usize, col: usize, rows: usize, cols: usize) -> [(usize, usize); 4] {
    [
        ((row + rows - 1) % rows, col),
        ((row + 1) % rows, col),
        (row, (col + cols - 1) % cols),
        (row, (col + 1) % cols),
    ]
}

/// Row-major placement of a population on a torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellularGrid {
    pub rows: usize,
    pub cols: usize,
}

impl CellularGrid {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config(format!("empty cellular grid {rows}x{cols}")));
        }
        Ok(Self { rows, cols })
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell(&self, index: usize) -> (usize, usize) {
        (index / self.cols, index % self.cols)
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    /// Population indices of the four neighbours of `index`.
    pub fn neighbors(&self, index: usize) -> [usize; 4] {
        let (r, c) = self.cell(index);
        torus_neighbors(r, c, self.rows, self.cols).map(|(r, c)| self.index(r, c))
    }
}

/// Offspring replaces the centre only if strictly better.
pub(crate) fn replace_if_better(center: &Individual, offspring: Individual) -> Individual {
    if offspring.cost() < center.cost() {
        offspring
    } else {
        center.clone()
    }
}

/// Synchronous cellular EA: every cell reads the previous generation's grid.
pub(crate) struct Cea {
    pop: Population,
    grid: CellularGrid,
    law: PowerLaw,
    alpha: f64,
    crossover_prob: f64,
    genome_mutation_prob: f64,
}

impl Cea {
    pub(crate) fn new(cfg: &EngineConfig, function: &BenchmarkFn, rng: &mut RngStream) -> Result<Self> {
        let (rows, cols) = cfg.cea_shape();
        let grid = CellularGrid::new(rows, cols)?;
        if grid.len() != cfg.population_size {
            return Err(Error::Config(format!(
                "cellular grid {rows}x{cols} does not hold {} individuals",
                cfg.population_size
            )));
        }
        Ok(Self {
            pop: random_population(cfg.population_size, function, rng),
            grid,
            law: cfg.power_law,
            alpha: cfg.cea_alpha,
            crossover_prob: cfg.crossover_prob,
            genome_mutation_prob: cfg.genome_mutation_prob,
        })
    }
}

impl Engine for Cea {
    fn population(&self) -> &Population {
        &self.pop
    }

    fn step(&mut self, function: &BenchmarkFn, rng: &mut RngStream) -> Result<StepInfo> {
        let space = function.space();
        let old = &self.pop.members;
        let next = (0..old.len())
            .map(|i| {
                let mate = self.grid.neighbors(i)[rng.index(4)];
                let mut child = if rng.bernoulli(self.crossover_prob) {
                    arithmetic_crossover(&old[i].genome, &old[mate].genome, rng)
                } else {
                    old[i].genome.clone()
                };
                if rng.bernoulli(self.genome_mutation_prob) {
                    let variance = self.law.sample(self.alpha, rng);
                    gaussian_mutate(&mut child, variance, 1.0, space, rng);
                }
                let f = function.value(&child);
                replace_if_better(&old[i], Individual::evaluated(child, f))
            })
            .collect();
        self.pop = Population {
            members: next,
            generation: self.pop.generation + 1,
        };
        Ok(StepInfo::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_neighbors_wrap() {
        let mut n = torus_neighbors(0, 0, 20, 20).to_vec();
        n.sort_unstable();
        assert_eq!(n, vec![(0, 1), (0, 19), (1, 0), (19, 0)]);
    }

    #[test]
    fn neighbors_are_symmetric() {
        let g = CellularGrid::new(4, 5).unwrap();
        for i in 0..g.len() {
            for j in g.neighbors(i) {
                assert!(g.neighbors(j).contains(&i));
            }
        }
    }

    #[test]
    fn worse_offspring_keeps_center() {
        let center = Individual::evaluated(vec![0.0], 1.0);
        let worse = Individual::evaluated(vec![1.0], 2.0);
        let equal = Individual::evaluated(vec![2.0], 1.0);
        let better = Individual::evaluated(vec![3.0], 0.5);
        assert_eq!(replace_if_better(&center, worse), center);
        assert_eq!(replace_if_better(&center, equal), center);
        assert_eq!(replace_if_better(&center, better.clone()), better);
    }
}
