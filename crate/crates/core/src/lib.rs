//! Block-based redundant bit codings and the state-based evolutionary
//! algorithm that switches between them.
//!
//! A genome is `n` blocks of odd size `k`; each block decodes to its majority
//! bit. Re-encoding a genome under a coding state keeps its phenotype but
//! biases where mutation is likely to take it. The SEA runs one simple GA per
//! state and moves individuals between states by conversion.

pub mod bbc;
pub mod bits;
pub mod config;
pub mod error;
pub mod experiments;
pub mod ga;
pub mod objectives;
pub mod rng;
pub mod sea;

pub use bbc::{BlockGenome, CodingState};
pub use bits::BitString;
pub use config::{Overrides, Preset, RunConfig};
pub use error::{Error, Result};
pub use experiments::{Algorithm, ExperimentReport, RunRecord};
pub use ga::{GaConfig, Individual};
pub use objectives::{Direction, Fitness, Problem, ProblemKind};
pub use rng::{FlipRate, RandomSource};
pub use sea::SeaConfig;
