//! Experiment orchestration: specs, trial execution, aggregation and reports.
//!
//! An [`ExperimentSpec`] crosses a list of algorithms with a list of problems.
//! Every (algorithm, problem) cell runs `n_trials` independent trials. Seeds:
//!
//! ```text
//! cell_seed  = mix_seed(mix_seed(master_seed, algorithm_index), problem_index)
//! trial seed = mix_seed(cell_seed, trial_index)
//! ```
//!
//! so any single trial can be replayed from the spec alone
//! (see [`rerun_trial`]).
//!
//! Specs are stored as TOML (format version [`SPEC_FORMAT_VERSION`]):
//!
//! ```toml
//! name = "smoke"
//! n_trials = 3
//! master_seed = 42
//! output_dir = "out/smoke"   # optional
//! reference = "savl"         # optional, defaults to the first algorithm
//! trace_points = 500         # optional
//!
//! [[problems]]
//! function = "f1"            # f1..f7 or a long name such as "rotated-rastrigin"
//! dimension = 10
//! population = 10            # optional per-problem override of N
//! rotation_seed = 7          # optional, rotated functions only
//!
//! [[algorithms]]
//! label = "savl"
//! population = 10
//! max_iters = 1000
//! inertia_start = 0.9
//! inertia_end = 0.4
//! c1 = 2.05
//! c2 = 2.05
//! vl_strategy = { kind = "state-based", mu_min = 0.4, mu_max = 0.7 }
//! ```

mod exec;
pub mod presets;
pub mod report;

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[cfg(feature = "parallel")]
pub use exec::map_parallel;
pub use exec::{map_sequential, map_trials};
pub use presets::{
    preset_ablation, preset_main_comparison, preset_scalability, preset_sensitivity,
    SensitivityParam,
};
pub use report::{write_report, SummaryRow, TrialRow};

use crate::benchmarks::{BenchmarkFunction, BenchmarkProblem};
use crate::config::RunConfig;
use crate::engine::{Engine, TrialRecord};
use crate::rng::mix_seed;
use crate::stats::{aggregate, welch_t_test, AggregateStats, TTestResult};
use crate::{Error, Result};

/// Version of the TOML spec grammar, recorded in every report.
pub const SPEC_FORMAT_VERSION: u32 = 1;

/// Default cap on stored convergence-trace points per trial.
pub const DEFAULT_TRACE_POINTS: usize = 500;

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

fn default_trace_points() -> usize {
    DEFAULT_TRACE_POINTS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    /// `f1`..`f7` or a long function name.
    pub function: String,
    pub dimension: usize,
    /// Overrides the algorithms' population for this problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_seed: Option<u64>,
}

impl ProblemSpec {
    pub fn new(function: BenchmarkFunction, dimension: usize) -> Self {
        ProblemSpec {
            function: function.id().to_string(),
            dimension,
            population: None,
            rotation_seed: None,
        }
    }

    pub fn with_population(mut self, population: usize) -> Self {
        self.population = Some(population);
        self
    }

    pub fn build(&self) -> Result<BenchmarkProblem> {
        let function: BenchmarkFunction = self.function.parse()?;
        match self.rotation_seed {
            Some(seed) => BenchmarkProblem::with_rotation_seed(function, self.dimension, seed),
            None => BenchmarkProblem::new(function, self.dimension),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub label: String,
    #[serde(flatten)]
    pub config: RunConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub n_trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Label of the algorithm every other one is t-tested against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(default = "default_trace_points")]
    pub trace_points: usize,
    pub problems: Vec<ProblemSpec>,
    pub algorithms: Vec<AlgorithmSpec>,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid experiment spec: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment specs always serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    /// SHA-256 of the TOML form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    /// Multiplies `max_iters` of every algorithm and `n_trials` by `factor`,
    /// rounding and keeping at least 2 of each.
    pub fn scale_budget(&mut self, factor: f64) -> Result<()> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Config(format!(
                "budget scale must be positive, got {factor}"
            )));
        }
        let scale = |n: usize| ((n as f64 * factor).round() as usize).max(2);
        self.n_trials = scale(self.n_trials);
        for alg in &mut self.algorithms {
            alg.config.max_iters = scale(alg.config.max_iters);
        }
        Ok(())
    }

    /// Label of the reference algorithm.
    pub fn reference_label(&self) -> Option<&str> {
        self.reference
            .as_deref()
            .or_else(|| self.algorithms.first().map(|a| a.label.as_str()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::Config("n_trials must be at least 1".into()));
        }
        if self.problems.is_empty() || self.algorithms.is_empty() {
            return Err(Error::Config(
                "spec needs at least one problem and one algorithm".into(),
            ));
        }
        let mut labels = HashSet::new();
        for alg in &self.algorithms {
            if alg.label.is_empty()
                || !alg
                    .label
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            {
                return Err(Error::Config(format!(
                    "algorithm label '{}' must be non-empty and use only [A-Za-z0-9._-]",
                    alg.label
                )));
            }
            if !labels.insert(alg.label.as_str()) {
                return Err(Error::Config(format!(
                    "duplicate algorithm label '{}'",
                    alg.label
                )));
            }
        }
        if let Some(reference) = &self.reference {
            if !labels.contains(reference.as_str()) {
                return Err(Error::Config(format!(
                    "reference algorithm '{reference}' is not in the spec"
                )));
            }
        }
        let mut seen = HashSet::new();
        for p in &self.problems {
            let function: BenchmarkFunction = p.function.parse()?;
            if !seen.insert((function, p.dimension)) {
                return Err(Error::Config(format!(
                    "problem {} in {} dimensions listed twice",
                    function, p.dimension
                )));
            }
        }
        for (ai, _) in self.algorithms.iter().enumerate() {
            for (pi, _) in self.problems.iter().enumerate() {
                self.cell_config(ai, pi)?.validate()?;
            }
        }
        Ok(())
    }

    /// Report label of problem `index`: the function id, suffixed with the
    /// dimension when the same function appears more than once.
    pub fn problem_label(&self, index: usize) -> Result<String> {
        let function: BenchmarkFunction = self.problems[index].function.parse()?;
        let repeated = self
            .problems
            .iter()
            .filter(|p| p.function.parse::<BenchmarkFunction>().ok() == Some(function))
            .count()
            > 1;
        Ok(if repeated {
            format!("{}-d{}", function.id(), self.problems[index].dimension)
        } else {
            function.id().to_string()
        })
    }

    pub fn cell_seed(&self, algorithm_index: usize, problem_index: usize) -> u64 {
        mix_seed(
            mix_seed(self.master_seed, algorithm_index as u64),
            problem_index as u64,
        )
    }

    /// The run configuration of one cell: the algorithm's config with the
    /// problem's dimension (and population override) and the cell seed.
    pub fn cell_config(&self, algorithm_index: usize, problem_index: usize) -> Result<RunConfig> {
        let alg = self
            .algorithms
            .get(algorithm_index)
            .ok_or_else(|| Error::Range(format!("no algorithm #{algorithm_index}")))?;
        let problem = self
            .problems
            .get(problem_index)
            .ok_or_else(|| Error::Range(format!("no problem #{problem_index}")))?;
        let mut config = alg.config.clone();
        config.dimension = problem.dimension;
        if let Some(n) = problem.population {
            config.population = n;
        }
        config.seed = self.cell_seed(algorithm_index, problem_index);
        Ok(config)
    }
}

/// One sampled point of a convergence trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    /// Zero-based iteration index.
    pub iteration: usize,
    /// Evaluations consumed by the end of the iteration.
    pub fe_count: u64,
    pub best_value: f64,
    pub f: f64,
    pub mu: f64,
}

/// Per-trial result kept in a report.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub final_value: f64,
    pub fe_at_acceptance: Option<u64>,
    pub total_fes: u64,
    pub wall_time_seconds: f64,
    pub containment_violations: u64,
    pub trace: Vec<TracePoint>,
}

impl TrialSummary {
    pub fn from_record(
        trial: usize,
        record: &TrialRecord,
        population: usize,
        max_points: usize,
    ) -> Self {
        let trace = downsample_indices(record.best_value_history.len(), max_points)
            .into_iter()
            .map(|k| TracePoint {
                iteration: k,
                fe_count: (population * (k + 2)) as u64,
                best_value: record.best_value_history[k],
                f: record.f_history[k],
                mu: record.mu_history[k],
            })
            .collect();
        TrialSummary {
            trial,
            seed: record.seed,
            final_value: record.final_value,
            fe_at_acceptance: record.fe_at_acceptance,
            total_fes: record.total_fes,
            wall_time_seconds: record.wall_time_seconds,
            containment_violations: record.containment_violations,
            trace,
        }
    }
}

impl crate::stats::TrialOutcome for TrialSummary {
    fn final_value(&self) -> f64 {
        self.final_value
    }

    fn fe_at_acceptance(&self) -> Option<u64> {
        self.fe_at_acceptance
    }
}

/// At most `max_points` indices of `0..len` on a uniform stride, always
/// including the last index.
pub fn downsample_indices(len: usize, max_points: usize) -> Vec<usize> {
    if len == 0 {
        return Vec::new();
    }
    if len <= max_points || max_points < 2 {
        return if max_points < 2 && len > max_points {
            vec![len - 1]
        } else {
            (0..len).collect()
        };
    }
    let stride = (len - 1).div_ceil(max_points - 1);
    let mut idx: Vec<usize> = (0..len).step_by(stride).collect();
    if *idx.last().unwrap() != len - 1 {
        idx.push(len - 1);
    }
    idx
}

/// Results of one (algorithm, problem) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellReport {
    pub algorithm: String,
    pub problem: String,
    pub dimension: usize,
    pub population: usize,
    pub max_iters: usize,
    pub cell_seed: u64,
    pub rotation_seed: Option<u64>,
    pub acceptance: f64,
    pub stats: AggregateStats,
    pub trials: Vec<TrialSummary>,
}

/// Welch test of one algorithm against the reference on one problem.
#[derive(Clone, Debug, PartialEq)]
pub struct TTestRow {
    pub algorithm: String,
    pub reference: String,
    pub problem: String,
    pub result: TTestResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    /// Ordered by algorithm, then problem.
    pub cells: Vec<CellReport>,
    pub ttests: Vec<TTestRow>,
}

impl ExperimentReport {
    pub fn cell(&self, algorithm: &str, problem: &str) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && c.problem == problem)
    }
}

/// Execution knobs that must not affect results.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExecOptions {
    /// Worker threads; `None` uses every core, `Some(1)` runs sequentially.
    pub threads: Option<usize>,
}

struct Job {
    algorithm: usize,
    problem: usize,
    trial: usize,
}

/// Runs every trial of `spec` and assembles the report without writing files.
pub fn execute(spec: &ExperimentSpec, options: ExecOptions) -> Result<ExperimentReport> {
    spec.validate()?;
    let problems: Vec<BenchmarkProblem> = spec
        .problems
        .iter()
        .map(ProblemSpec::build)
        .collect::<Result<_>>()?;
    let configs: Vec<Vec<RunConfig>> = (0..spec.algorithms.len())
        .map(|ai| {
            (0..problems.len())
                .map(|pi| spec.cell_config(ai, pi))
                .collect()
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<Job> = (0..spec.algorithms.len())
        .flat_map(|algorithm| {
            (0..problems.len()).flat_map(move |problem| {
                (0..spec.n_trials).map(move |trial| Job {
                    algorithm,
                    problem,
                    trial,
                })
            })
        })
        .collect();

    let summaries = map_trials(&jobs, options.threads, |job| {
        let config = &configs[job.algorithm][job.problem];
        let record = Engine::new(config, &problems[job.problem])?.run_trial(job.trial as u64)?;
        Ok(TrialSummary::from_record(
            job.trial,
            &record,
            config.population,
            spec.trace_points,
        ))
    })?;

    let mut cells = Vec::with_capacity(spec.algorithms.len() * problems.len());
    let mut chunks = summaries.chunks(spec.n_trials.max(1));
    for (ai, alg) in spec.algorithms.iter().enumerate() {
        for (pi, problem) in problems.iter().enumerate() {
            let trials = chunks.next().expect("one chunk per cell").to_vec();
            let config = &configs[ai][pi];
            cells.push(CellReport {
                algorithm: alg.label.clone(),
                problem: spec.problem_label(pi)?,
                dimension: problem.dimension,
                population: config.population,
                max_iters: config.max_iters,
                cell_seed: config.seed,
                rotation_seed: problem.rotation_seed,
                acceptance: problem.acceptance,
                stats: aggregate(&trials, problem.acceptance)?,
                trials,
            });
        }
    }

    let ttests = t_tests(spec, &cells)?;
    Ok(ExperimentReport {
        spec: spec.clone(),
        cells,
        ttests,
    })
}

fn t_tests(spec: &ExperimentSpec, cells: &[CellReport]) -> Result<Vec<TTestRow>> {
    let Some(reference) = spec.reference_label() else {
        return Ok(Vec::new());
    };
    if spec.n_trials < 2 {
        return Ok(Vec::new());
    }
    let finals = |c: &CellReport| c.trials.iter().map(|t| t.final_value).collect::<Vec<_>>();
    let mut rows = Vec::new();
    for cell in cells.iter().filter(|c| c.algorithm != reference) {
        let base = cells
            .iter()
            .find(|c| c.algorithm == reference && c.problem == cell.problem)
            .expect("reference ran on every problem");
        rows.push(TTestRow {
            algorithm: cell.algorithm.clone(),
            reference: reference.to_string(),
            problem: cell.problem.clone(),
            result: welch_t_test(&finals(cell), &finals(base))?,
        });
    }
    Ok(rows)
}

/// Runs `spec`, writes its report files under `spec.output_dir`, and returns the report.
pub fn run_experiment(spec: &ExperimentSpec, options: ExecOptions) -> Result<ExperimentReport> {
    let report = execute(spec, options)?;
    write_report(&report, &spec.output_dir)?;
    Ok(report)
}

/// Replays a single trial of `spec` in isolation.
pub fn rerun_trial(
    spec: &ExperimentSpec,
    algorithm_index: usize,
    problem_index: usize,
    trial: usize,
) -> Result<TrialRecord> {
    let config = spec.cell_config(algorithm_index, problem_index)?;
    let problem = spec.problems[problem_index].build()?;
    Engine::new(&config, &problem)?.run_trial(trial as u64)
}
