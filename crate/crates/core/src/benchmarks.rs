//! Analytical test functions.
//!
//! | name            | domain              | minimizer        |
//! |-----------------|---------------------|------------------|
//! | `ackley`        | `[-30, 30]^n`       | `0`              |
//! | `griewank`      | `[-600, 600]^n`     | `100` (shifted)  |
//! | `rastrigin`     | `[-5.12, 5.12]^n`   | `0`              |
//! | `rosenbrock`    | `[-100, 100]^n`     | `1`              |
//! | `ellipsoid`     | `[-5.12, 5.12]^n`   | `0`              |
//! | `schwefel12`    | `[-64, 64]^n`       | `0`              |
//! | `rot_rastrigin` | `[-5.12, 5.12]^n`   | `0` (n even)     |
//!
//! The Griewank form used here is shifted by 100 in every coordinate, so its
//! minimizer sits at `x_i = 100` rather than at the origin.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::SearchSpace;

/// Which closed-form objective a [`BenchmarkFn`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    Ackley,
    Griewank,
    Rastrigin,
    Rosenbrock,
    Ellipsoid,
    Schwefel12,
    RotRastrigin,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 7] = [
        FunctionKind::Ackley,
        FunctionKind::Griewank,
        FunctionKind::Rastrigin,
        FunctionKind::Rosenbrock,
        FunctionKind::Ellipsoid,
        FunctionKind::Schwefel12,
        FunctionKind::RotRastrigin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Ackley => "ackley",
            FunctionKind::Griewank => "griewank",
            FunctionKind::Rastrigin => "rastrigin",
            FunctionKind::Rosenbrock => "rosenbrock",
            FunctionKind::Ellipsoid => "ellipsoid",
            FunctionKind::Schwefel12 => "schwefel12",
            FunctionKind::RotRastrigin => "rot_rastrigin",
        }
    }

    /// Symmetric half-width of the default domain.
    pub fn default_bound(self) -> f64 {
        match self {
            FunctionKind::Ackley => 30.0,
            FunctionKind::Griewank => 600.0,
            FunctionKind::Rastrigin | FunctionKind::Ellipsoid | FunctionKind::RotRastrigin => 5.12,
            FunctionKind::Rosenbrock => 100.0,
            FunctionKind::Schwefel12 => 64.0,
        }
    }

    /// Coordinate value shared by every component of the minimizer.
    pub fn optimum_coordinate(self) -> f64 {
        match self {
            FunctionKind::Rosenbrock => 1.0,
            FunctionKind::Griewank => 100.0,
            _ => 0.0,
        }
    }

    pub fn modality(self) -> &'static str {
        match self {
            FunctionKind::Ackley | FunctionKind::RotRastrigin => "multimodal",
            FunctionKind::Griewank => "multimodal, medium epistasis",
            FunctionKind::Rastrigin => "multimodal, no epistasis",
            FunctionKind::Rosenbrock | FunctionKind::Schwefel12 => "unimodal, high epistasis",
            FunctionKind::Ellipsoid => "unimodal",
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

/// Block-rotation matrix used by the rotated Rastrigin function.
///
/// With 1-based indices: `A[i][i] = 4/5`, `A[i][i+1] = 3/5` for odd `i`,
/// `A[i][i-1] = -3/5` for even `i`, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl RotationMatrix {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::OddRotationDim(dim));
        }
        let mut entries = vec![0.0; dim * dim];
        // 0-based row r corresponds to 1-based i = r + 1.
        for r in 0..dim {
            entries[r * dim + r] = 0.8;
            if r % 2 == 0 {
                entries[r * dim + r + 1] = 0.6;
            } else {
                entries[r * dim + r - 1] = -0.6;
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    /// Row-major dense entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `y = A x`, exploiting the 2x2 block structure.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = Vec::with_capacity(self.dim);
        for pair in x.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            y.push(0.8 * a + 0.6 * b);
            y.push(-0.6 * a + 0.8 * b);
        }
        y
    }
}

/// A benchmark objective bound to a dimensionality and domain.
#[derive(Debug, Clone)]
pub struct BenchmarkFn {
    kind: FunctionKind,
    space: SearchSpace,
    rotation: Option<RotationMatrix>,
}

impl BenchmarkFn {
    /// Builds `name` in `dim` dimensions with its default domain.
    pub fn make(name: &str, dim: usize) -> Result<Self> {
        Self::new(name.parse()?, dim)
    }

    pub fn new(kind: FunctionKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        let rotation = match kind {
            FunctionKind::RotRastrigin => Some(RotationMatrix::new(dim)?),
            _ => None,
        };
        let b = kind.default_bound();
        Ok(Self {
            kind,
            space: SearchSpace::cube(dim, -b, b)?,
            rotation,
        })
    }

    /// Replaces the domain, e.g. to override the Schwefel 1.2 bounds.
    pub fn with_space(mut self, space: SearchSpace) -> Result<Self> {
        if space.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: space.dim(),
            });
        }
        self.space = space;
        Ok(self)
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn rotation(&self) -> Option<&RotationMatrix> {
        self.rotation.as_ref()
    }

    /// Global minimizer and minimum value.
    pub fn optimum(&self) -> (Vec<f64>, f64) {
        (vec![self.kind.optimum_coordinate(); self.dim()], 0.0)
    }

    pub fn optimum_value(&self) -> f64 {
        0.0
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.space.check_dim(x)?;
        Ok(self.value(x))
    }

    /// Evaluates without the dimension check.
    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        match self.kind {
            FunctionKind::Ackley => ackley(x),
            FunctionKind::Griewank => griewank(x),
            FunctionKind::Rastrigin => rastrigin(x),
            FunctionKind::Rosenbrock => rosenbrock(x),
            FunctionKind::Ellipsoid => ellipsoid(x),
            FunctionKind::Schwefel12 => schwefel12(x),
            FunctionKind::RotRastrigin => {
                let rot = self.rotation.as_ref().expect("rotation built in new()");
                rastrigin(&rot.apply(x))
            }
        }
    }
}

fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    20.0 + E - 20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp()
}

fn griewank(x: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut prod = 1.0;
    for (i, v) in x.iter().enumerate() {
        let z = v - 100.0;
        sum += z * z;
        prod *= (z / ((i + 1) as f64).sqrt()).cos();
    }
    sum / 4000.0 - prod + 1.0
}

fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

fn ellipsoid(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * v * v)
        .sum()
}

fn schwefel12(x: &[f64]) -> f64 {
    let mut partial = 0.0;
    let mut total = 0.0;
    for v in x {
        partial += v;
        total += partial * partial;
    }
    total
}
