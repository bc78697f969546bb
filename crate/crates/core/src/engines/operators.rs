//! Selection, variation and sampling operators shared by the engines.

use crate::error::{Error, Result};
use crate::space::{Individual, RngStream, SearchSpace};

/// Returns the index of the better of two uniformly drawn members.
///
/// The two picks are independent (they may coincide); ties go to the first pick.
pub fn binary_tournament(members: &[Individual], rng: &mut RngStream) -> usize {
    let a = rng.index(members.len());
    let b = rng.index(members.len());
    if members[b].cost() < members[a].cost() {
        b
    } else {
        a
    }
}

/// Draws crossover weights: every weight is 0 or 1 except one uniformly chosen
/// position, whose weight is uniform in `[0, 1]`.
pub fn crossover_weights(dim: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut w: Vec<f64> = (0..dim)
        .map(|_| if rng.bernoulli(0.5) { 1.0 } else { 0.0 })
        .collect();
    if dim > 0 {
        let k = rng.index(dim);
        w[k] = rng.uniform();
    }
    w
}

/// `child_j = w_j * a_j + (1 - w_j) * b_j`, kept inside `[min, max]` of the
/// two parent genes so rounding cannot leave the search space.
pub fn blend(a: &[f64], b: &[f64], weights: &[f64]) -> Vec<f64> {
    a.iter()
        .zip(b)
        .zip(weights)
        .map(|((&x, &y), w)| (w * x + (1.0 - w) * y).clamp(x.min(y), x.max(y)))
        .collect()
}

/// Arithmetic crossover with freshly drawn weights.
pub fn arithmetic_crossover(a: &[f64], b: &[f64], rng: &mut RngStream) -> Vec<f64> {
    let w = crossover_weights(a.len(), rng);
    blend(a, b, &w)
}

/// Adds `N(0, variance)` to each gene with probability `gene_prob`, then clamps.
pub fn gaussian_mutate(
    genome: &mut [f64],
    variance: f64,
    gene_prob: f64,
    space: &SearchSpace,
    rng: &mut RngStream,
) {
    let sigma = variance.max(0.0).sqrt();
    for v in genome.iter_mut() {
        if rng.bernoulli(gene_prob) {
            *v += sigma * rng.gaussian();
        }
    }
    space.clamp_in_place(genome);
}

/// Per-gene Gaussian mutation whose standard deviation is `scale` times the
/// width of each coordinate's range.
pub fn scaled_gaussian_mutate(
    genome: &mut [f64],
    scale: f64,
    gene_prob: f64,
    space: &SearchSpace,
    rng: &mut RngStream,
) {
    for (j, v) in genome.iter_mut().enumerate() {
        if rng.bernoulli(gene_prob) {
            *v += scale * space.range(j) * rng.gaussian();
        }
    }
    space.clamp_in_place(genome);
}

/// Truncated power law with density proportional to `u^-exponent` on `[1, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub exponent: f64,
    pub upper: f64,
}

impl Default for PowerLaw {
    fn default() -> Self {
        Self {
            exponent: 2.0,
            upper: 1000.0,
        }
    }
}

impl PowerLaw {
    pub fn validate(&self) -> Result<()> {
        if !(self.exponent > 1.0 && self.upper > 1.0 && self.upper.is_finite()) {
            return Err(Error::Config(format!(
                "power law needs exponent > 1 and finite upper > 1, got {} and {}",
                self.exponent, self.upper
            )));
        }
        Ok(())
    }

    /// Inverse CDF on `[1, upper]` for a probability in `[0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let k = 1.0 - self.exponent;
        let tail = 1.0 - self.upper.powf(k);
        (1.0 - p * tail).powf(1.0 / k).clamp(1.0, self.upper)
    }

    pub fn cdf(&self, u: f64) -> f64 {
        let k = 1.0 - self.exponent;
        if u <= 1.0 {
            return 0.0;
        }
        if u >= self.upper {
            return 1.0;
        }
        (1.0 - u.powf(k)) / (1.0 - self.upper.powf(k))
    }

    /// `alpha` times a draw from the law; always in `[alpha, upper * alpha]`.
    pub fn sample(&self, alpha: f64, rng: &mut RngStream) -> f64 {
        alpha * self.quantile(rng.uniform())
    }
}

/// `POW(alpha)` with the default law (`u^-2` on `[1, 1000]`).
pub fn pow_sample(alpha: f64, rng: &mut RngStream) -> f64 {
    PowerLaw::default().sample(alpha, rng)
}
