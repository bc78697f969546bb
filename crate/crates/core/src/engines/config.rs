use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::operators::PowerLaw;
use crate::error::{Error, Result};
use crate::informed::InformedConfig;
use crate::niching::NichingConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Cnea,
    Sea,
    Socea,
    Cea,
    Dgea,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Cnea,
        Algorithm::Sea,
        Algorithm::Socea,
        Algorithm::Cea,
        Algorithm::Dgea,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Cnea => "cnea",
            Algorithm::Sea => "sea",
            Algorithm::Socea => "socea",
            Algorithm::Cea => "cea",
            Algorithm::Dgea => "dgea",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Algorithm::Cnea => "counter-niching EA (grid niching + informed mutation)",
            Algorithm::Sea => "standard EA, Gaussian mutation with variance 1 + sqrt(t+1)",
            Algorithm::Socea => "self-organized criticality EA, variance POW(10)",
            Algorithm::Cea => "cellular EA on a wrapped grid, variance POW(10)",
            Algorithm::Dgea => "diversity-guided EA, exploration variance POW(1)",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

/// Variance schedule of the standard EA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeaVariance {
    /// `1 + sqrt(t + 1)`.
    Growing,
    /// `1 / sqrt(t + 1)`.
    Annealed,
}

/// Default generation budget: counter-niching uses 500/1000/2000 generations
/// for up to 20/50/more dimensions, the baselines 50 times the dimension.
pub fn default_generations(algorithm: Algorithm, dim: usize) -> usize {
    match algorithm {
        Algorithm::Cnea if dim <= 20 => 500,
        Algorithm::Cnea if dim <= 50 => 1000,
        Algorithm::Cnea => 2000,
        _ => 50 * dim,
    }
}

/// Parameters of one engine run.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub algorithm: Algorithm,
    pub population_size: usize,
    pub generations: usize,
    pub seed: u64,
    pub elitism: usize,
    pub crossover_prob: f64,
    /// Probability that a baseline offspring has its whole genome mutated.
    pub genome_mutation_prob: f64,
    pub sea_variance: SeaVariance,
    pub power_law: PowerLaw,
    pub socea_alpha: f64,
    pub cea_alpha: f64,
    pub dgea_alpha: f64,
    /// `(rows, cols)` of the cellular grid; `None` means 20 x 20.
    pub cea_grid: Option<(usize, usize)>,
    pub dgea_low: f64,
    pub dgea_high: f64,
    pub niching: NichingConfig,
    pub informed: InformedConfig,
    /// Keep a per-generation record of the dense regions (counter-niching only).
    pub record_regions: bool,
}

/// Documented configuration keys, with a short description each.
pub const CONFIG_KEYS: &[(&str, &str)] = &[
    ("population", "population size N"),
    ("generations", "generation budget"),
    ("seed", "random seed"),
    ("elitism", "members copied unchanged into the next generation"),
    ("crossover_prob", "recombination probability p_r"),
    ("genome_mutation_prob", "baselines: probability of mutating a whole genome"),
    ("sea_variance", "sea: growing (1 + sqrt(t+1)) or annealed (1 / sqrt(t+1))"),
    ("pow_exponent", "power-law exponent (density u^-k)"),
    ("pow_upper", "power-law truncation point"),
    ("socea_alpha", "socea: alpha of POW(alpha)"),
    ("cea_alpha", "cea: alpha of POW(alpha)"),
    ("dgea_alpha", "dgea: alpha of POW(alpha) in exploration"),
    ("cea_rows", "cea: grid rows"),
    ("cea_cols", "cea: grid columns"),
    ("dgea_low", "dgea: switch to exploration below this diversity"),
    ("dgea_high", "dgea: switch to exploitation above this diversity"),
    ("grid_bins", "cnea: bins per dimension"),
    ("grid_max_dims", "cnea: largest dimension keyed on every coordinate"),
    ("grid_proj_dims", "cnea: keyed coordinates above grid_max_dims"),
    ("density_fraction", "cnea: dense-region occupancy fraction"),
    ("fitness_tolerance", "cnea: relative fitness-spread threshold for victims"),
    ("replace_fraction", "cnea: fraction of a victim region replaced"),
    ("samples_per_slot", "cnea: virgin candidates per replacement"),
    ("draw_cap_factor", "cnea: raw-draw cap per slot, times samples_per_slot"),
    ("mutation_prob", "cnea: per-gene mutation probability p_m"),
    ("mutation_scale", "cnea: mutation std as a fraction of the coordinate range"),
];

impl EngineConfig {
    /// Defaults for `algorithm`; the generation budget still has to be set
    /// (see [`EngineConfig::for_problem`]).
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            population_size: if algorithm == Algorithm::Cnea { 300 } else { 400 },
            generations: 0,
            seed: 0,
            elitism: 1,
            crossover_prob: 0.9,
            genome_mutation_prob: 0.75,
            sea_variance: SeaVariance::Growing,
            power_law: PowerLaw::default(),
            socea_alpha: 10.0,
            cea_alpha: 10.0,
            dgea_alpha: 1.0,
            cea_grid: None,
            dgea_low: 5e-6,
            dgea_high: 0.25,
            niching: NichingConfig::default(),
            informed: InformedConfig::default(),
            record_regions: false,
        }
    }

    /// Defaults plus the default budget for a `dim`-dimensional problem.
    pub fn for_problem(algorithm: Algorithm, dim: usize) -> Self {
        Self {
            generations: default_generations(algorithm, dim),
            ..Self::new(algorithm)
        }
    }

    pub fn with_population(mut self, n: usize) -> Self {
        self.population_size = n;
        self
    }

    pub fn with_generations(mut self, g: usize) -> Self {
        self.generations = g;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Cellular grid shape, `(rows, cols)`.
    pub fn cea_shape(&self) -> (usize, usize) {
        self.cea_grid.unwrap_or((20, 20))
    }

    /// Applies one `key = value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
        }
        let v = value.trim();
        match key.trim() {
            "population" => self.population_size = num(key, v)?,
            "generations" => self.generations = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "elitism" => self.elitism = num(key, v)?,
            "crossover_prob" => self.crossover_prob = num(key, v)?,
            "genome_mutation_prob" => self.genome_mutation_prob = num(key, v)?,
            "sea_variance" => {
                self.sea_variance = match v {
                    "growing" => SeaVariance::Growing,
                    "annealed" => SeaVariance::Annealed,
                    _ => return Err(Error::Config(format!("bad value `{v}` for `sea_variance`"))),
                }
            }
            "pow_exponent" => self.power_law.exponent = num(key, v)?,
            "pow_upper" => self.power_law.upper = num(key, v)?,
            "socea_alpha" => self.socea_alpha = num(key, v)?,
            "cea_alpha" => self.cea_alpha = num(key, v)?,
            "dgea_alpha" => self.dgea_alpha = num(key, v)?,
            "cea_rows" => {
                let (_, c) = self.cea_shape();
                self.cea_grid = Some((num(key, v)?, c));
            }
            "cea_cols" => {
                let (r, _) = self.cea_shape();
                self.cea_grid = Some((r, num(key, v)?));
            }
            "dgea_low" => self.dgea_low = num(key, v)?,
            "dgea_high" => self.dgea_high = num(key, v)?,
            "grid_bins" => self.niching.bins = num(key, v)?,
            "grid_max_dims" => self.niching.max_full_dims = num(key, v)?,
            "grid_proj_dims" => self.niching.projected_dims = num(key, v)?,
            "density_fraction" => self.niching.density_fraction = num(key, v)?,
            "fitness_tolerance" => self.informed.fitness_tolerance = num(key, v)?,
            "replace_fraction" => self.informed.replace_fraction = num(key, v)?,
            "samples_per_slot" => self.informed.samples_per_slot = num(key, v)?,
            "draw_cap_factor" => self.informed.draw_cap_factor = num(key, v)?,
            "mutation_prob" => self.informed.mutation_prob = num(key, v)?,
            "mutation_scale" => self.informed.mutation_scale = num(key, v)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.population_size < 2 {
            return bad(format!("population size must be at least 2, got {}", self.population_size));
        }
        if self.elitism > self.population_size {
            return bad("elitism exceeds the population size".into());
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("genome_mutation_prob", self.genome_mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        for (name, a) in [
            ("socea_alpha", self.socea_alpha),
            ("cea_alpha", self.cea_alpha),
            ("dgea_alpha", self.dgea_alpha),
        ] {
            if !(a > 0.0 && a.is_finite()) {
                return bad(format!("{name} must be positive, got {a}"));
            }
        }
        self.power_law.validate()?;
        if !(0.0 <= self.dgea_low && self.dgea_low < self.dgea_high) {
            return bad("need 0 <= dgea_low < dgea_high".into());
        }
        if self.algorithm == Algorithm::Cea {
            let (r, c) = self.cea_shape();
            if r * c != self.population_size {
                return bad(format!(
                    "cellular grid {r}x{c} does not hold {} individuals",
                    self.population_size
                ));
            }
        }
        if self.algorithm == Algorithm::Cnea {
            self.niching.validate()?;
            self.informed.validate()?;
        }
        Ok(())
    }

    /// All parameters as `(key, value)` pairs, for listings.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let (rows, cols) = self.cea_shape();
        vec![
            ("population", self.population_size.to_string()),
            ("generations", self.generations.to_string()),
            ("seed", self.seed.to_string()),
            ("elitism", self.elitism.to_string()),
            ("crossover_prob", self.crossover_prob.to_string()),
            ("genome_mutation_prob", self.genome_mutation_prob.to_string()),
            (
                "sea_variance",
                match self.sea_variance {
                    SeaVariance::Growing => "growing".into(),
                    SeaVariance::Annealed => "annealed".into(),
                },
            ),
            ("pow_exponent", self.power_law.exponent.to_string()),
            ("pow_upper", self.power_law.upper.to_string()),
            ("socea_alpha", self.socea_alpha.to_string()),
            ("cea_alpha", self.cea_alpha.to_string()),
            ("dgea_alpha", self.dgea_alpha.to_string()),
            ("cea_rows", rows.to_string()),
            ("cea_cols", cols.to_string()),
            ("dgea_low", self.dgea_low.to_string()),
            ("dgea_high", self.dgea_high.to_string()),
            ("grid_bins", self.niching.bins.to_string()),
            ("grid_max_dims", self.niching.max_full_dims.to_string()),
            ("grid_proj_dims", self.niching.projected_dims.to_string()),
            ("density_fraction", self.niching.density_fraction.to_string()),
            ("fitness_tolerance", self.informed.fitness_tolerance.to_string()),
            ("replace_fraction", self.informed.replace_fraction.to_string()),
            ("samples_per_slot", self.informed.samples_per_slot.to_string()),
            ("draw_cap_factor", self.informed.draw_cap_factor.to_string()),
            ("mutation_prob", self.informed.mutation_prob.to_string()),
            ("mutation_scale", self.informed.mutation_scale.to_string()),
        ]
    }
}
