//! Built-in experiments.

use std::path::PathBuf;

use crate::benchmarks::BenchmarkFunction::{self, *};
use crate::config::RunConfig;
use crate::velocity_limit::{VlStrategyConfig, DEFAULT_MU_FIXED};

use super::{AlgorithmSpec, ExperimentSpec, ProblemSpec, DEFAULT_TRACE_POINTS};

pub const DEFAULT_SEED: u64 = 20_210_601;
pub const TRIALS: usize = 30;

/// Recommended sigmoid range of the state-based strategy.
pub const MU_MIN: f64 = 0.4;
pub const MU_MAX: f64 = 0.7;

const MAIN_DIMENSION: usize = 50;
const MAIN_POPULATION: usize = 20;
const MAIN_ITERS: usize = 10_000;

fn algorithm(
    label: &str,
    population: usize,
    max_iters: usize,
    vl: VlStrategyConfig,
) -> AlgorithmSpec {
    AlgorithmSpec {
        label: label.to_string(),
        config: RunConfig::pso_ldiw(0, population, max_iters, vl),
    }
}

fn spec(
    name: &str,
    problems: Vec<ProblemSpec>,
    algorithms: Vec<AlgorithmSpec>,
    reference: &str,
) -> ExperimentSpec {
    ExperimentSpec {
        name: name.to_string(),
        n_trials: TRIALS,
        master_seed: DEFAULT_SEED,
        output_dir: PathBuf::from("results").join(name),
        reference: Some(reference.to_string()),
        trace_points: DEFAULT_TRACE_POINTS,
        problems,
        algorithms,
    }
}

fn problems(functions: &[BenchmarkFunction], dimension: usize) -> Vec<ProblemSpec> {
    functions
        .iter()
        .map(|&f| ProblemSpec::new(f, dimension))
        .collect()
}

/// The three velocity-limit strategies inside linearly-decreasing-inertia PSO
/// on f2, f3, f5, f6 (D = 10, N = 10, 3000 iterations).
pub fn preset_ablation() -> ExperimentSpec {
    let (n, iters) = (10, 3000);
    spec(
        "ablation",
        problems(&[Rosenbrock, Rastrigin, Schwefel, RotatedGriewank], 10),
        vec![
            algorithm("fixed", n, iters, VlStrategyConfig::fixed(DEFAULT_MU_FIXED)),
            algorithm(
                "iteration-linear",
                n,
                iters,
                VlStrategyConfig::iteration_linear(MU_MIN, MU_MAX),
            ),
            algorithm(
                "state-based",
                n,
                iters,
                VlStrategyConfig::state_based(MU_MIN, MU_MAX),
            ),
        ],
        "state-based",
    )
}

/// PSO-SAVL against PSO-LDIW (fixed velocity limit) on f1..f7 at D = 50,
/// N = 20, 10000 iterations.
pub fn preset_main_comparison() -> ExperimentSpec {
    spec(
        "compare",
        problems(&BenchmarkFunction::ALL, MAIN_DIMENSION),
        vec![
            algorithm(
                "PSO-SAVL",
                MAIN_POPULATION,
                MAIN_ITERS,
                VlStrategyConfig::state_based(MU_MIN, MU_MAX),
            ),
            algorithm(
                "PSO-LDIW",
                MAIN_POPULATION,
                MAIN_ITERS,
                VlStrategyConfig::fixed(DEFAULT_MU_FIXED),
            ),
        ],
        "PSO-SAVL",
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SensitivityParam {
    /// Vary `mu_max` with `mu_min = 0.4`.
    MuMax,
    /// Vary `mu_min` with `mu_max = 0.7`.
    MuMin,
}

impl SensitivityParam {
    pub fn default_grid(self) -> Vec<f64> {
        match self {
            SensitivityParam::MuMax => vec![0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
            SensitivityParam::MuMin => vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7],
        }
    }

    fn label(self) -> &'static str {
        match self {
            SensitivityParam::MuMax => "mu-max",
            SensitivityParam::MuMin => "mu-min",
        }
    }
}

/// State-based PSO over the default grid of `which`, on f1..f7 at the main budget.
pub fn preset_sensitivity(which: SensitivityParam) -> ExperimentSpec {
    sensitivity_with_grid(which, &which.default_grid())
}

/// Sensitivity sweep over an explicit grid. Values giving `mu_min > mu_max`
/// or leaving `(0, 1]` are dropped.
pub fn sensitivity_with_grid(which: SensitivityParam, grid: &[f64]) -> ExperimentSpec {
    let algorithms = grid
        .iter()
        .filter_map(|&value| {
            let (lo, hi) = match which {
                SensitivityParam::MuMax => (MU_MIN, value),
                SensitivityParam::MuMin => (value, MU_MAX),
            };
            let vl = VlStrategyConfig::state_based(lo, hi);
            vl.validate().ok()?;
            Some(algorithm(
                &format!("{}-{}", which.label(), value),
                MAIN_POPULATION,
                MAIN_ITERS,
                vl,
            ))
        })
        .collect::<Vec<_>>();
    let reference = match which {
        SensitivityParam::MuMax => format!("mu-max-{MU_MAX}"),
        SensitivityParam::MuMin => format!("mu-min-{MU_MIN}"),
    };
    let mut s = spec(
        &format!("sensitivity-{}", which.label()),
        problems(&BenchmarkFunction::ALL, MAIN_DIMENSION),
        algorithms,
        &reference,
    );
    if !s.algorithms.iter().any(|a| a.label == reference) {
        s.reference = None;
    }
    s
}

/// Default iteration budget of the scalability preset.
pub const SCALABILITY_ITERS: usize = 2000;

/// PSO-SAVL and PSO-LDIW on f2, f6, f7 at D = 50, 100, 200 with N = D/2.
pub fn preset_scalability() -> ExperimentSpec {
    let problems = [50, 100, 200]
        .into_iter()
        .flat_map(|d| {
            [Rosenbrock, RotatedGriewank, RotatedRastrigin]
                .into_iter()
                .map(move |f| ProblemSpec::new(f, d).with_population(d / 2))
        })
        .collect();
    spec(
        "scalability",
        problems,
        vec![
            algorithm(
                "PSO-SAVL",
                MAIN_POPULATION,
                SCALABILITY_ITERS,
                VlStrategyConfig::state_based(MU_MIN, MU_MAX),
            ),
            algorithm(
                "PSO-LDIW",
                MAIN_POPULATION,
                SCALABILITY_ITERS,
                VlStrategyConfig::fixed(DEFAULT_MU_FIXED),
            ),
        ],
        "PSO-SAVL",
    )
}
