//! Grid-based pseudo-niching.
//!
//! Every coordinate is cut into `bins` equal intervals and each population
//! member is keyed by the tuple of its bin indices. An occupied cell is treated
//! as one cluster; no merging of adjacent cells takes place. Above
//! `max_full_dims` dimensions the key is built from a fixed random subset of
//! `projected_dims` coordinates, drawn once per run, so that cells do not
//! degenerate into singletons.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::seq::index::sample;
use serde::Serialize;

use crate::diversity::population_std;
use crate::error::{Error, Result};
use crate::space::{Population, RngStream, SearchSpace};

/// A grid cell key: one bin index per keyed dimension.
pub type CellKey = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct NichingConfig {
    /// Bins per dimension, at least 2.
    pub bins: u32,
    /// Largest dimensionality keyed on every coordinate.
    pub max_full_dims: usize,
    /// Number of coordinates keyed when `dim > max_full_dims`.
    pub projected_dims: usize,
    /// Minimum cell occupancy, as a fraction of the population, for a dense region.
    pub density_fraction: f64,
}

impl Default for NichingConfig {
    fn default() -> Self {
        Self {
            bins: 4,
            max_full_dims: 10,
            projected_dims: 10,
            density_fraction: 0.05,
        }
    }
}

impl NichingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bins < 2 {
            return Err(Error::Config("grid bins must be at least 2".into()));
        }
        if self.projected_dims == 0 || self.max_full_dims == 0 {
            return Err(Error::Config("grid key dimensions must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.density_fraction) {
            return Err(Error::Config("density fraction must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Bin of coordinate `j` of `x`, clamped to `[0, bins - 1]`.
pub fn bin_index(x: f64, space: &SearchSpace, j: usize, bins: u32) -> u32 {
    let rel = (x - space.lower()[j]) / space.range(j);
    let b = (f64::from(bins) * rel).floor();
    if b <= 0.0 {
        0
    } else {
        (b as u32).min(bins - 1)
    }
}

/// The keying scheme for one run: bin count plus the keyed dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLayout {
    space: SearchSpace,
    bins: u32,
    key_dims: Vec<usize>,
}

impl GridLayout {
    /// Draws the key projection (if any) from `rng`.
    pub fn new(space: &SearchSpace, cfg: &NichingConfig, rng: &mut RngStream) -> Result<Self> {
        cfg.validate()?;
        let dim = space.dim();
        let key_dims = if dim > cfg.max_full_dims {
            let mut dims = sample(rng, dim, cfg.projected_dims.min(dim)).into_vec();
            dims.sort_unstable();
            dims
        } else {
            (0..dim).collect()
        };
        Ok(Self {
            space: space.clone(),
            bins: cfg.bins,
            key_dims,
        })
    }

    /// Layout keyed on every dimension.
    pub fn full(space: &SearchSpace, bins: u32) -> Result<Self> {
        if bins < 2 {
            return Err(Error::Config("grid bins must be at least 2".into()));
        }
        Ok(Self {
            space: space.clone(),
            bins,
            key_dims: (0..space.dim()).collect(),
        })
    }

    pub fn bins(&self) -> u32 {
        self.bins
    }

    pub fn key_dims(&self) -> &[usize] {
        &self.key_dims
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn key(&self, genome: &[f64]) -> CellKey {
        self.key_dims
            .iter()
            .map(|&j| bin_index(genome[j], &self.space, j, self.bins))
            .collect()
    }

    pub fn build(&self, pop: &Population) -> GridIndex {
        let mut cells: BTreeMap<CellKey, Vec<usize>> = BTreeMap::new();
        for (i, m) in pop.members.iter().enumerate() {
            cells.entry(self.key(&m.genome)).or_default().push(i);
        }
        GridIndex {
            bins_per_dim: self.bins,
            effective_dims: self.key_dims.clone(),
            cells,
        }
    }
}

/// Partition of population indices into occupied grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct GridIndex {
    pub bins_per_dim: u32,
    pub effective_dims: Vec<usize>,
    pub cells: BTreeMap<CellKey, Vec<usize>>,
}

impl GridIndex {
    pub fn is_occupied(&self, key: &[u32]) -> bool {
        self.cells.contains_key(key)
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    /// Total number of cells in the keyed grid, saturating at `u128::MAX`.
    pub fn total_cells(&self) -> u128 {
        u128::from(self.bins_per_dim)
            .checked_pow(self.effective_dims.len() as u32)
            .unwrap_or(u128::MAX)
    }
}

/// Builds a grid for `pop`, drawing the key projection from `rng` when needed.
pub fn build_grid(
    pop: &Population,
    space: &SearchSpace,
    bins: u32,
    rng: &mut RngStream,
) -> Result<GridIndex> {
    let cfg = NichingConfig {
        bins,
        ..NichingConfig::default()
    };
    Ok(GridLayout::new(space, &cfg, rng)?.build(pop))
}

/// A dense occupied cell with its summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub cell_key: CellKey,
    pub member_indices: Vec<usize>,
    pub centroid: Vec<f64>,
    pub density: usize,
    pub fitness_mean: f64,
    pub fitness_std: f64,
}

impl Region {
    fn from_cell(key: &[u32], members: &[usize], pop: &Population) -> Self {
        let dim = pop.members[members[0]].genome.len();
        let n = members.len() as f64;
        let mut centroid = vec![0.0; dim];
        for &i in members {
            for (c, v) in centroid.iter_mut().zip(&pop.members[i].genome) {
                *c += v;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n);
        let fitness: Vec<f64> = members.iter().map(|&i| pop.members[i].cost()).collect();
        Self {
            cell_key: key.to_vec(),
            member_indices: members.to_vec(),
            centroid,
            density: members.len(),
            fitness_mean: fitness.iter().sum::<f64>() / n,
            fitness_std: population_std(&fitness).unwrap_or(0.0),
        }
    }
}

/// Minimum occupancy for a cell to count as dense: `max(2, ceil(fraction * n))`.
pub fn density_threshold(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64).ceil() as usize).max(2)
}

/// Regions whose occupancy reaches the density threshold, densest first and,
/// among equal densities, lowest mean fitness first.
pub fn high_density_regions(grid: &GridIndex, pop: &Population, density_fraction: f64) -> Vec<Region> {
    let threshold = density_threshold(density_fraction, pop.len());
    let mut regions: Vec<Region> = grid
        .cells
        .iter()
        .filter(|(_, m)| m.len() >= threshold)
        .map(|(k, m)| Region::from_cell(k, m, pop))
        .collect();
    regions.sort_by(|a, b| {
        b.density
            .cmp(&a.density)
            .then(a.fitness_mean.total_cmp(&b.fitness_mean))
    });
    regions
}

/// Mean distance from a point to the archived centroids.
///
/// `Unbounded` (empty archive) compares greater than every finite distance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ArchiveDistance {
    Finite(f64),
    Unbounded,
}

impl ArchiveDistance {
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ArchiveDistance::Finite(a), ArchiveDistance::Finite(b)) => a.total_cmp(b),
            (ArchiveDistance::Finite(_), ArchiveDistance::Unbounded) => Ordering::Less,
            (ArchiveDistance::Unbounded, ArchiveDistance::Finite(_)) => Ordering::Greater,
            (ArchiveDistance::Unbounded, ArchiveDistance::Unbounded) => Ordering::Equal,
        }
    }
}

/// Centroids of the regions already processed in the current generation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MemoryArchive {
    centroids: Vec<Vec<f64>>,
}

impl MemoryArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.centroids.clear();
    }

    pub fn len(&self) -> usize {
        self.centroids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centroids.is_empty()
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }

    pub fn push(&mut self, centroid: Vec<f64>) -> Result<()> {
        if let Some(first) = self.centroids.first() {
            if first.len() != centroid.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    actual: centroid.len(),
                });
            }
        }
        self.centroids.push(centroid);
        Ok(())
    }

    pub fn mean_distance(&self, x: &[f64]) -> Result<ArchiveDistance> {
        if self.centroids.is_empty() {
            return Ok(ArchiveDistance::Unbounded);
        }
        let mut total = 0.0;
        for c in &self.centroids {
            if c.len() != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: c.len(),
                    actual: x.len(),
                });
            }
            total += c
                .iter()
                .zip(x)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
        }
        Ok(ArchiveDistance::Finite(total / self.centroids.len() as f64))
    }
}
