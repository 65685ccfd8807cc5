//! Particle swarm optimization with a state-based adaptive velocity limit.
//!
//! Each iteration the swarm's evolutionary factor `f` (how far the best
//! particle sits from the others, relative to the rest of the swarm) sets the
//! velocity limit through a sigmoid, so the limit widens while the swarm
//! searches globally and tightens while it refines locally. Out-of-range
//! velocities are clamped or redrawn depending on `f`, and out-of-range
//! positions are redrawn inside the bounds.
//!
//! Modules:
//!
//! * [`ese`]: mean inter-particle distances, evolutionary factor, search state;
//! * [`velocity_limit`]: state-based, fixed and iteration-linear strategies;
//! * [`limits`]: velocity and position repair;
//! * [`engine`]: the optimizer loop and per-trial records;
//! * [`benchmarks`]: the seven test functions and rotation matrices;
//! * [`stats`]: aggregate metrics and Welch's t-test;
//! * [`harness`]: experiment specs, presets, parallel execution and CSV reports.

// `!(a < b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod config;
pub mod engine;
mod error;
pub mod ese;
pub mod harness;
pub mod limits;
pub mod rng;
pub mod stats;
pub mod velocity_limit;

pub use benchmarks::{make_rotation, BenchmarkFunction, BenchmarkProblem, Rotation};
pub use config::{Bounds, RunConfig};
pub use engine::{run_trial, Engine, StepOutcome, SwarmState, TrialRecord};
pub use error::{Error, Result};
pub use ese::{
    classify_state, evolutionary_factor, mean_distances, EvolutionaryFactor, SearchMode,
    SearchState,
};
pub use limits::LimitHandling;
pub use rng::{derive_trial_stream, RngStream, UniformSource};
pub use stats::{aggregate, welch_t_test, AggregateStats, TTestResult};
pub use velocity_limit::{derive_alpha_beta, VelocityLimit, VlStrategy, VlStrategyConfig};
