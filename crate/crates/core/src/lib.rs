//! Real-coded evolutionary optimization with counter-niching.
//!
//! The crate bundles:
//!
//! * [`space`]: search spaces, individuals, populations and seeded random streams,
//! * [`benchmarks`]: seven analytical test functions with their domains and optima,
//! * [`diversity`]: distance-to-average-point diversity and discrete diversity/maturity,
//! * [`niching`]: grid-based pseudo-niching and the centroid memory archive,
//! * [`informed`]: victim detection, virgin-zone sampling and informed mutation,
//! * [`engines`]: the counter-niching EA plus SEA, SOCEA, CEA and DGEA baselines,
//! * [`stats`]: rank-ordered run summaries and the paired two-tailed t-test,
//! * [`harness`]: experiment matrices, stagnation runs, diversity profiles and CSV persistence.
//!
//! All problems are minimization problems.

pub mod benchmarks;
pub mod diversity;
pub mod engines;
mod error;
pub mod harness;
pub mod informed;
pub mod niching;
pub mod space;
pub mod stats;

pub use benchmarks::{BenchmarkFn, FunctionKind, RotationMatrix};
pub use engines::{Algorithm, EngineConfig, GenerationRecord, Mode, RunTrace, Termination};
pub use error::{Error, Result};
pub use space::{Individual, Population, RngStream, SearchSpace};
