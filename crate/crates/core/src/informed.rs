//! Informed genetic operations.
//!
//! A dense region whose members have (relatively) similar fitness is a
//! *victim*: its worst members are redundant. Each redundant member is
//! overwritten by a point sampled from an unoccupied grid cell (a *virgin*
//! zone) provided that point beats the region's mean fitness; among qualifying
//! samples the one farthest, on average, from the centroids of the regions
//! already handled this generation wins. Afterwards the whole population goes
//! through ordinary tournament selection, arithmetic crossover and Gaussian
//! mutation.

use crate::benchmarks::BenchmarkFn;
use crate::engines::operators::{arithmetic_crossover, binary_tournament, scaled_gaussian_mutate};
use crate::error::{Error, Result};
use crate::niching::{GridIndex, GridLayout, MemoryArchive, Region};
use crate::space::{Individual, Population, RngStream};

#[derive(Debug, Clone, PartialEq)]
pub struct InformedConfig {
    /// Relative fitness-spread threshold: a region is converged when
    /// `std <= tolerance * (1 + |mean|)`.
    pub fitness_tolerance: f64,
    /// Fraction of a victim region that is replaced, in `(0, 1)`.
    pub replace_fraction: f64,
    /// Virgin-zone candidates sampled per replacement slot.
    pub samples_per_slot: usize,
    /// Raw draws allowed per slot, as a multiple of `samples_per_slot`.
    pub draw_cap_factor: usize,
    pub crossover_prob: f64,
    /// Per-gene mutation probability.
    pub mutation_prob: f64,
    /// Mutation standard deviation as a fraction of each coordinate's range.
    pub mutation_scale: f64,
}

impl Default for InformedConfig {
    fn default() -> Self {
        Self {
            fitness_tolerance: 0.01,
            replace_fraction: 0.5,
            samples_per_slot: 20,
            draw_cap_factor: 10,
            crossover_prob: 0.9,
            mutation_prob: 0.01,
            mutation_scale: 0.02,
        }
    }
}

impl InformedConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.fitness_tolerance.is_nan() || self.fitness_tolerance < 0.0 {
            return bad("fitness tolerance must be non-negative");
        }
        if self.replace_fraction.is_nan() || self.replace_fraction <= 0.0 || self.replace_fraction >= 1.0 {
            return bad("replace fraction must lie in (0, 1)");
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) || !(0.0..=1.0).contains(&self.mutation_prob) {
            return bad("probabilities must lie in [0, 1]");
        }
        if self.mutation_scale.is_nan() || self.mutation_scale < 0.0 {
            return bad("mutation scale must be non-negative");
        }
        Ok(())
    }
}

/// A converged dense region split into preserved and redundant members.
#[derive(Debug, Clone, PartialEq)]
pub struct VictimRegion {
    pub region: Region,
    /// Worst members, slated for replacement.
    pub replace_indices: Vec<usize>,
    /// Better members, kept as representatives.
    pub keep_indices: Vec<usize>,
}

/// Flags converged dense regions and picks their worst members.
pub fn detect_victims(regions: &[Region], pop: &Population, cfg: &InformedConfig) -> Vec<VictimRegion> {
    regions
        .iter()
        .filter(|r| r.fitness_std <= cfg.fitness_tolerance * (1.0 + r.fitness_mean.abs()))
        .filter_map(|r| {
            let count = (cfg.replace_fraction * r.density as f64).floor() as usize;
            if count == 0 {
                return None;
            }
            let mut ranked = r.member_indices.clone();
            ranked.sort_by(|&a, &b| {
                pop.members[a]
                    .cost()
                    .total_cmp(&pop.members[b].cost())
                    .then(a.cmp(&b))
            });
            let replace_indices = ranked.split_off(ranked.len() - count);
            Some(VictimRegion {
                region: r.clone(),
                replace_indices,
                keep_indices: ranked,
            })
        })
        .collect()
}

/// Samples up to `samples` evaluated points lying in unoccupied cells of `grid`.
///
/// At most `draw_cap_factor * samples` raw draws are made.
pub fn sample_virgin(
    layout: &GridLayout,
    grid: &GridIndex,
    function: &BenchmarkFn,
    rng: &mut RngStream,
    samples: usize,
    draw_cap_factor: usize,
) -> Vec<Individual> {
    let mut out = Vec::with_capacity(samples);
    if samples == 0 {
        return out;
    }
    if (grid.occupied_cells() as u128) >= grid.total_cells() {
        return out;
    }
    for _ in 0..samples.saturating_mul(draw_cap_factor) {
        let x = layout.space().random_genome(rng);
        if grid.is_occupied(&layout.key(&x)) {
            continue;
        }
        let f = function.value(&x);
        out.push(Individual::evaluated(x, f));
        if out.len() == samples {
            break;
        }
    }
    out
}

/// Chooses the replacement for a victim slot.
///
/// Only candidates strictly better than the region's mean fitness qualify;
/// among those the largest mean archive distance wins, then the better fitness,
/// then the earlier candidate.
pub fn select_replacement(
    candidates: &[Individual],
    victim: &VictimRegion,
    archive: &MemoryArchive,
) -> Result<Option<usize>> {
    let mut best: Option<(usize, crate::niching::ArchiveDistance, f64)> = None;
    for (i, c) in candidates.iter().enumerate() {
        let f = c.fitness.ok_or(Error::Unevaluated(i))?;
        if f.partial_cmp(&victim.region.fitness_mean) != Some(std::cmp::Ordering::Less) {
            continue;
        }
        let d = archive.mean_distance(&c.genome)?;
        let better = match &best {
            None => true,
            Some((_, bd, bf)) => match d.total_cmp(bd) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => f < *bf,
                std::cmp::Ordering::Less => false,
            },
        };
        if better {
            best = Some((i, d, f));
        }
    }
    Ok(best.map(|(i, _, _)| i))
}

/// Counters reported by one informed-mutation pass.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InformedOutcome {
    pub victims_detected: usize,
    pub members_replaced: usize,
    pub sampling_fallbacks: usize,
    /// Population indices that were overwritten, in processing order.
    pub replaced: Vec<usize>,
}

/// Replaces redundant victim members with virgin-zone samples, in place.
///
/// `archive` is cleared first; each victim's centroid is pushed before its
/// slots are filled. A slot with no qualifying candidate keeps its member.
#[allow(clippy::too_many_arguments)]
pub fn informed_mutation(
    pop: &mut Population,
    victims: &[VictimRegion],
    layout: &GridLayout,
    grid: &GridIndex,
    function: &BenchmarkFn,
    archive: &mut MemoryArchive,
    rng: &mut RngStream,
    cfg: &InformedConfig,
) -> Result<InformedOutcome> {
    archive.clear();
    let mut outcome = InformedOutcome {
        victims_detected: victims.len(),
        ..InformedOutcome::default()
    };
    for victim in victims {
        archive.push(victim.region.centroid.clone())?;
        for &slot in &victim.replace_indices {
            let candidates = sample_virgin(
                layout,
                grid,
                function,
                rng,
                cfg.samples_per_slot,
                cfg.draw_cap_factor,
            );
            match select_replacement(&candidates, victim, archive)? {
                Some(i) => {
                    pop.members[slot] = candidates[i].clone();
                    outcome.members_replaced += 1;
                    outcome.replaced.push(slot);
                }
                None => outcome.sampling_fallbacks += 1,
            }
        }
    }
    Ok(outcome)
}

/// Breeds `pop.len()` offspring by tournament selection, arithmetic crossover
/// (probability `crossover_prob`) and per-gene Gaussian mutation.
pub fn regular_ops(
    pop: &Population,
    function: &BenchmarkFn,
    rng: &mut RngStream,
    cfg: &InformedConfig,
) -> Population {
    let space = function.space();
    let members = &pop.members;
    let offspring = (0..members.len())
        .map(|_| {
            let a = binary_tournament(members, rng);
            let b = binary_tournament(members, rng);
            let mut child = if rng.bernoulli(cfg.crossover_prob) {
                arithmetic_crossover(&members[a].genome, &members[b].genome, rng)
            } else {
                members[a].genome.clone()
            };
            scaled_gaussian_mutate(&mut child, cfg.mutation_scale, cfg.mutation_prob, space, rng);
            let f = function.value(&child);
            Individual::evaluated(child, f)
        })
        .collect();
    Population {
        members: offspring,
        generation: pop.generation,
    }
}
