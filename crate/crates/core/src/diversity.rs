//! Population diversity measures.
//!
//! [`distance_to_average`] is the normalized mean Euclidean distance of the
//! population from its centroid, divided by the diagonal of the search box.
//! [`degree_of_diversity`] and [`maturity`] count mixed and converged loci of a
//! discrete population; real-coded populations are discretized onto the niching
//! grid with [`DiscretePopulation::from_grid`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::niching::bin_index;
use crate::space::{Individual, SearchSpace};

/// Normalized diversity in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct DiversityValue(pub f64);

impl DiversityValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Distance-to-average-point diversity of a set of genomes.
pub fn distance_to_average<G: AsRef<[f64]>>(
    genomes: &[G],
    space: &SearchSpace,
) -> Result<DiversityValue> {
    if genomes.is_empty() {
        return Err(Error::Empty("population"));
    }
    let dim = space.dim();
    // Mean of offsets from the first member, so an identical population has
    // a centroid exactly equal to that member.
    let origin = genomes[0].as_ref();
    space.check_dim(origin)?;
    let mut shift = vec![0.0; dim];
    for g in genomes {
        let g = g.as_ref();
        space.check_dim(g)?;
        for ((s, v), o) in shift.iter_mut().zip(g).zip(origin) {
            *s += v - o;
        }
    }
    let n = genomes.len() as f64;
    let centroid: Vec<f64> = origin.iter().zip(&shift).map(|(o, s)| o + s / n).collect();

    let total: f64 = genomes
        .iter()
        .map(|g| {
            g.as_ref()
                .iter()
                .zip(&centroid)
                .map(|(v, c)| (v - c).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .sum();
    Ok(DiversityValue(total / (space.diagonal() * n)))
}

/// Rows of symbols over a finite alphabet, all of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretePopulation {
    rows: Vec<Vec<u32>>,
}

impl DiscretePopulation {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("discrete population"))?;
        let expected = first.len();
        if expected == 0 {
            return Err(Error::Empty("chromosome"));
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != expected) {
            return Err(Error::RaggedRows {
                row,
                len: r.len(),
                expected,
            });
        }
        Ok(Self { rows })
    }

    /// One row per string, one locus per character.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|s| s.as_ref().chars().map(u32::from).collect())
                .collect(),
        )
    }

    /// Maps every coordinate onto its grid bin.
    pub fn from_grid<G: AsRef<[f64]>>(
        genomes: &[G],
        space: &SearchSpace,
        bins: u32,
    ) -> Result<Self> {
        let rows = genomes
            .iter()
            .map(|g| {
                let g = g.as_ref();
                space.check_dim(g)?;
                Ok((0..g.len()).map(|j| bin_index(g[j], space, j, bins)).collect())
            })
            .collect::<Result<Vec<Vec<u32>>>>()?;
        Self::new(rows)
    }

    /// Chromosome length.
    pub fn loci(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

/// Number of loci carrying more than one distinct symbol.
pub fn degree_of_diversity(pop: &DiscretePopulation) -> usize {
    let first = &pop.rows[0];
    (0..pop.loci())
        .filter(|&j| pop.rows.iter().any(|r| r[j] != first[j]))
        .count()
}

/// Number of fully converged (lost-allele) loci.
pub fn maturity(pop: &DiscretePopulation) -> usize {
    pop.loci() - degree_of_diversity(pop)
}

/// Population (divide-by-count) standard deviation of member fitness.
pub fn fitness_std(members: &[Individual]) -> Result<f64> {
    let values = members
        .iter()
        .enumerate()
        .map(|(i, m)| m.fitness.ok_or(Error::Unevaluated(i)))
        .collect::<Result<Vec<f64>>>()?;
    population_std(&values).ok_or(Error::Empty("members"))
}

pub(crate) fn population_std(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    Some((values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(dim: usize) -> SearchSpace {
        SearchSpace::cube(dim, 0.0, 1.0).unwrap()
    }

    #[test]
    fn distance_examples() {
        let same = vec![vec![0.3, 0.7]; 5];
        assert_eq!(distance_to_average(&same, &unit(2)).unwrap().value(), 0.0);
        let two = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let d = distance_to_average(&two, &unit(2)).unwrap().value();
        assert!((d - 0.5).abs() < 1e-12);
        let line = vec![vec![0.0], vec![1.0]];
        assert_eq!(distance_to_average(&line, &unit(1)).unwrap().value(), 0.5);
        let empty: Vec<Vec<f64>> = Vec::new();
        assert!(matches!(
            distance_to_average(&empty, &unit(1)),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn delta_and_mu_examples() {
        let p = DiscretePopulation::from_strings(&["000", "011"]).unwrap();
        assert_eq!((degree_of_diversity(&p), maturity(&p)), (2, 1));
        let p = DiscretePopulation::from_strings(&["101", "101", "101"]).unwrap();
        assert_eq!((degree_of_diversity(&p), maturity(&p)), (0, 3));
        let p = DiscretePopulation::from_strings(&["01", "10"]).unwrap();
        assert_eq!((degree_of_diversity(&p), maturity(&p)), (2, 0));
    }

    #[test]
    fn discrete_population_errors() {
        let empty: [&str; 0] = [];
        assert!(DiscretePopulation::from_strings(&empty).is_err());
        assert!(matches!(
            DiscretePopulation::from_strings(&["01", "0"]),
            Err(Error::RaggedRows { row: 1, len: 1, expected: 2 })
        ));
    }

    #[test]
    fn grid_discretization() {
        let s = unit(2);
        let p = DiscretePopulation::from_grid(&[vec![0.1, 0.1], vec![0.1, 0.9]], &s, 2).unwrap();
        assert_eq!(p.rows(), &[vec![0, 0], vec![0, 1]]);
        assert_eq!(degree_of_diversity(&p), 1);
    }

    #[test]
    fn fitness_std_examples() {
        let ind = |f| Individual::evaluated(vec![0.0], f);
        assert_eq!(fitness_std(&[ind(3.0), ind(3.0), ind(3.0)]).unwrap(), 0.0);
        assert_eq!(fitness_std(&[ind(0.0), ind(2.0)]).unwrap(), 1.0);
        assert_eq!(fitness_std(&[ind(1.0)]).unwrap(), 0.0);
        assert!(matches!(fitness_std(&[]), Err(Error::Empty(_))));
        assert!(matches!(
            fitness_std(&[ind(1.0), Individual::new(vec![0.0])]),
            Err(Error::Unevaluated(1))
        ));
    }

    fn population() -> impl Strategy<Value = (usize, Vec<Vec<f64>>)> {
        (1usize..=5).prop_flat_map(|dim| {
            (
                Just(dim),
                proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, dim), 1..=20),
            )
        })
    }

    proptest! {
        #[test]
        fn translation_invariant((dim, pop) in population(), shift in -50.0f64..50.0) {
            let s = unit(dim);
            let moved = SearchSpace::cube(dim, shift, 1.0 + shift).unwrap();
            let shifted: Vec<Vec<f64>> = pop.iter().map(|g| g.iter().map(|v| v + shift).collect()).collect();
            let a = distance_to_average(&pop, &s).unwrap().value();
            let b = distance_to_average(&shifted, &moved).unwrap().value();
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn scale_covariant((dim, pop) in population(), c in 0.1f64..100.0) {
            let s = unit(dim);
            let scaled_space = SearchSpace::cube(dim, 0.0, c).unwrap();
            let scaled: Vec<Vec<f64>> = pop.iter().map(|g| g.iter().map(|v| v * c).collect()).collect();
            let a = distance_to_average(&pop, &s).unwrap().value();
            let b = distance_to_average(&scaled, &scaled_space).unwrap().value();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn delta_plus_mu_is_length(rows in proptest::collection::vec(proptest::collection::vec(0u32..3, 6), 1..10)) {
            let p = DiscretePopulation::new(rows).unwrap();
            prop_assert_eq!(degree_of_diversity(&p) + maturity(&p), 6);
        }
    }
}
