//! The PSO-SAVL main loop.
//!
//! Each iteration:
//!
//! 1. estimate the evolutionary factor `f` from the current positions;
//! 2. derive this iteration's velocity limit from `f`;
//! 3. for every particle in index order: update its velocity, repair it,
//!    move, repair the position, evaluate, and update its personal best;
//! 4. refresh the global best from the personal bests (lowest index wins ties).
//!
//! The global best is synchronous: particles moved in iteration `k` all see
//! the global best as it stood at the start of `k`.

use std::time::Instant;

use crate::benchmarks::BenchmarkProblem;
use crate::config::RunConfig;
use crate::ese::evolutionary_factor_counted;
use crate::rng::{derive_trial_stream, trial_seed, UniformSource};
use crate::velocity_limit::{VelocityLimit, VlStrategy};
use crate::{Error, Result};

/// Evolving state of one swarm.
#[derive(Clone, Debug, PartialEq)]
pub struct SwarmState {
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    pub pbest_positions: Vec<Vec<f64>>,
    pub pbest_values: Vec<f64>,
    pub gbest_position: Vec<f64>,
    pub gbest_value: f64,
    pub gbest_index: usize,
    /// Iterations completed.
    pub iteration: usize,
    /// Objective evaluations consumed, initialization included.
    pub fe_count: u64,
    /// Pairwise distance evaluations performed by state estimation.
    pub pair_distance_count: u64,
}

impl SwarmState {
    /// Global best = lowest-index minimum of the personal bests. Personal bests
    /// never increase, so neither does the global best.
    fn refresh_gbest(&mut self) {
        let mut best = 0;
        for (i, &v) in self.pbest_values.iter().enumerate().skip(1) {
            if v < self.pbest_values[best] {
                best = i;
            }
        }
        self.gbest_index = best;
        self.gbest_value = self.pbest_values[best];
        self.gbest_position.clone_from(&self.pbest_positions[best]);
    }
}

/// What one call to [`Engine::step`] used.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub f: f64,
    pub mu: f64,
    pub velocity_limit: VelocityLimit,
}

/// Result of a complete trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    /// Global best value after each iteration.
    pub best_value_history: Vec<f64>,
    /// Evolutionary factor used in each iteration.
    pub f_history: Vec<f64>,
    /// Velocity-limit proportion used in each iteration.
    pub mu_history: Vec<f64>,
    pub final_value: f64,
    pub final_position: Vec<f64>,
    /// Evaluations consumed when the global best first reached the acceptance
    /// threshold, checked after initialization and after every iteration.
    pub fe_at_acceptance: Option<u64>,
    /// `N * max_iters + N`: initialization is counted.
    pub total_fes: u64,
    pub wall_time_seconds: f64,
    /// Seed of this trial's random stream.
    pub seed: u64,
    pub pair_distance_count: u64,
    /// Containment checks that failed; sampled every iteration in debug
    /// builds and every 100th iteration in release builds.
    pub containment_violations: u64,
}

/// Velocity update with fresh draws `r1, r2` per dimension, in that order:
///
/// `v = omega*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)`
#[allow(clippy::too_many_arguments)]
pub fn update_velocity<R: UniformSource>(
    v: &mut [f64],
    x: &[f64],
    pbest: &[f64],
    gbest: &[f64],
    omega: f64,
    c1: f64,
    c2: f64,
    rng: &mut R,
) {
    for d in 0..v.len() {
        let r1 = rng.uniform();
        let r2 = rng.uniform();
        v[d] = omega * v[d] + c1 * r1 * (pbest[d] - x[d]) + c2 * r2 * (gbest[d] - x[d]);
    }
}

/// A validated configuration bound to one objective.
#[derive(Clone, Debug)]
pub struct Engine<'a> {
    config: &'a RunConfig,
    problem: &'a BenchmarkProblem,
    strategy: VlStrategy,
}

impl<'a> Engine<'a> {
    pub fn new(config: &'a RunConfig, problem: &'a BenchmarkProblem) -> Result<Self> {
        config.validate()?;
        if config.dimension != problem.dimension {
            return Err(Error::Config(format!(
                "run dimension {} does not match {} in {} dimensions",
                config.dimension, problem.function, problem.dimension
            )));
        }
        Ok(Engine {
            config,
            problem,
            strategy: VlStrategy::from_config(&config.vl_strategy)?,
        })
    }

    pub fn config(&self) -> &RunConfig {
        self.config
    }

    pub fn strategy(&self) -> &VlStrategy {
        &self.strategy
    }

    /// Positions uniform in the bounds, velocities uniform within the widest
    /// limit (the strategy's limit at `f = 1`, `k = 0`), one evaluation per particle.
    pub fn initialize<R: UniformSource>(&self, rng: &mut R) -> Result<SwarmState> {
        let bounds = &self.problem.bounds;
        let n = self.config.population;
        let vl0 = self
            .strategy
            .velocity_limit(bounds, 1.0, 0, self.config.max_iters)?;
        let mut positions = Vec::with_capacity(n);
        let mut velocities = Vec::with_capacity(n);
        for _ in 0..n {
            let x: Vec<f64> = bounds
                .lower()
                .iter()
                .zip(bounds.upper())
                .map(|(&lo, &hi)| lo + rng.uniform() * (hi - lo))
                .collect();
            let v: Vec<f64> = vl0
                .per_dimension
                .iter()
                .map(|&l| rng.uniform() * 2.0 * l - l)
                .collect();
            positions.push(x);
            velocities.push(v);
        }
        let pbest_values: Vec<f64> = positions.iter().map(|x| self.problem.value(x)).collect();
        let mut state = SwarmState {
            pbest_positions: positions.clone(),
            positions,
            velocities,
            pbest_values,
            gbest_position: Vec::new(),
            gbest_value: f64::INFINITY,
            gbest_index: 0,
            iteration: 0,
            fe_count: 0,
            pair_distance_count: 0,
        };
        state.refresh_gbest();
        state.fe_count = n as u64;
        Ok(state)
    }

    /// Advances the swarm by one iteration.
    pub fn step<R: UniformSource>(
        &self,
        state: &mut SwarmState,
        rng: &mut R,
    ) -> Result<StepOutcome> {
        let k = state.iteration;
        let max_iters = self.config.max_iters;
        if k >= max_iters {
            return Err(Error::Range(format!(
                "swarm already ran all {max_iters} iterations"
            )));
        }
        let bounds = &self.problem.bounds;
        let ese = evolutionary_factor_counted(
            &state.positions,
            state.gbest_index,
            &mut state.pair_distance_count,
        )?;
        let f = ese.f;
        let vl = self.strategy.velocity_limit(bounds, f, k, max_iters)?;
        let omega = self.config.inertia_at(k)?;
        let (c1, c2) = (self.config.c1, self.config.c2);
        let repair = self.config.limit_handling;

        for i in 0..state.positions.len() {
            let x = &mut state.positions[i];
            let v = &mut state.velocities[i];
            update_velocity(
                v,
                x,
                &state.pbest_positions[i],
                &state.gbest_position,
                omega,
                c1,
                c2,
                rng,
            );
            repair.repair_velocity(v, &vl, f, rng);
            for (xd, vd) in x.iter_mut().zip(v.iter()) {
                *xd += vd;
            }
            repair.repair_position(x, bounds, rng);
            let value = self.problem.value(x);
            state.fe_count += 1;
            if value < state.pbest_values[i] {
                state.pbest_values[i] = value;
                state.pbest_positions[i].clone_from(x);
            }
        }
        state.refresh_gbest();
        state.iteration += 1;
        Ok(StepOutcome {
            f,
            mu: vl.mu,
            velocity_limit: vl,
        })
    }

    /// Runs all iterations of trial `trial_index`, drawing from
    /// `derive_trial_stream(config.seed, trial_index)`.
    pub fn run_trial(&self, trial_index: u64) -> Result<TrialRecord> {
        let started = Instant::now();
        let seed = trial_seed(self.config.seed, trial_index);
        let mut rng = derive_trial_stream(self.config.seed, trial_index);
        let max_iters = self.config.max_iters;
        let acceptance = self.problem.acceptance;

        let mut state = self.initialize(&mut rng)?;
        let mut fe_at_acceptance = (state.gbest_value <= acceptance).then_some(state.fe_count);
        let mut best_value_history = Vec::with_capacity(max_iters);
        let mut f_history = Vec::with_capacity(max_iters);
        let mut mu_history = Vec::with_capacity(max_iters);
        let mut containment_violations = 0;
        let check_every = if cfg!(debug_assertions) { 1 } else { 100 };

        while state.iteration < max_iters {
            let k = state.iteration;
            let outcome = self.step(&mut state, &mut rng)?;
            if k % check_every == 0 && !contained(&state, &outcome.velocity_limit, self.problem) {
                containment_violations += 1;
            }
            if fe_at_acceptance.is_none() && state.gbest_value <= acceptance {
                fe_at_acceptance = Some(state.fe_count);
            }
            best_value_history.push(state.gbest_value);
            f_history.push(outcome.f);
            mu_history.push(outcome.mu);
        }

        Ok(TrialRecord {
            best_value_history,
            f_history,
            mu_history,
            final_value: state.gbest_value,
            final_position: state.gbest_position,
            fe_at_acceptance,
            total_fes: state.fe_count,
            wall_time_seconds: started.elapsed().as_secs_f64(),
            seed,
            pair_distance_count: state.pair_distance_count,
            containment_violations,
        })
    }
}

/// Every position inside the bounds and every velocity inside `vl`.
pub fn contained(state: &SwarmState, vl: &VelocityLimit, problem: &BenchmarkProblem) -> bool {
    state.positions.iter().all(|x| problem.bounds.contains(x))
        && state.velocities.iter().all(|v| vl.contains(v))
}

/// Convenience wrapper: validate, then run trial `trial_index`.
pub fn run_trial(
    config: &RunConfig,
    problem: &BenchmarkProblem,
    trial_index: u64,
) -> Result<TrialRecord> {
    Engine::new(config, problem)?.run_trial(trial_index)
}
