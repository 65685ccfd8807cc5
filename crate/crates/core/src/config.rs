//! Run configuration and search-space bounds.

use serde::{Deserialize, Serialize};

use crate::limits::LimitHandling;
use crate::velocity_limit::VlStrategyConfig;
use crate::{Error, Result};

/// Per-dimension position limits `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Config(format!(
                "bounds length mismatch: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::Config(
                "bounds must have at least one dimension".into(),
            ));
        }
        if let Some(d) = (0..lower.len()).find(|&d| !(lower[d] < upper[d])) {
            return Err(Error::Config(format!(
                "bounds in dimension {d} are empty: [{}, {}]",
                lower[d], upper[d]
            )));
        }
        Ok(Bounds { lower, upper })
    }

    /// `[-half_width, half_width]` in every one of `dimension` dimensions.
    pub fn symmetric(dimension: usize, half_width: f64) -> Result<Self> {
        Bounds::new(vec![-half_width; dimension], vec![half_width; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `(upper[d] - lower[d]) / 2`, the scale velocity limits are expressed against.
    pub fn half_range(&self, d: usize) -> f64 {
        0.5 * (self.upper[d] - self.lower[d])
    }

    /// Closed-interval membership in every dimension.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }
}

/// Everything needed to run one PSO trial, except the objective.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Search-space dimension `D`. Experiment specs overwrite it per problem.
    #[serde(default)]
    pub dimension: usize,
    /// Swarm size `N`.
    pub population: usize,
    pub max_iters: usize,
    /// Inertia weight at the first iteration.
    pub inertia_start: f64,
    /// Inertia weight at the last iteration.
    pub inertia_end: f64,
    pub c1: f64,
    pub c2: f64,
    /// Master seed; trial `t` draws from `derive_trial_stream(seed, t)`.
    #[serde(default)]
    pub seed: u64,
    pub vl_strategy: VlStrategyConfig,
    #[serde(default)]
    pub limit_handling: LimitHandling,
}

impl RunConfig {
    /// Linearly decreasing inertia 0.9 to 0.4 with `c1 = c2 = 2.05`.
    pub fn pso_ldiw(
        dimension: usize,
        population: usize,
        max_iters: usize,
        vl_strategy: VlStrategyConfig,
    ) -> Self {
        RunConfig {
            dimension,
            population,
            max_iters,
            inertia_start: 0.9,
            inertia_end: 0.4,
            c1: 2.05,
            c2: 2.05,
            seed: 0,
            vl_strategy,
            limit_handling: LimitHandling::StateCoupled,
        }
    }

    pub fn with_limit_handling(mut self, limit_handling: LimitHandling) -> Self {
        self.limit_handling = limit_handling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.dimension == 0 {
            return fail("dimension must be positive".into());
        }
        if self.population < 2 {
            return fail(format!(
                "population must be at least 2, got {}",
                self.population
            ));
        }
        if self.max_iters == 0 {
            return fail("max_iters must be positive".into());
        }
        if !(self.inertia_start >= self.inertia_end) {
            return fail(format!(
                "inertia must not increase: start {} < end {}",
                self.inertia_start, self.inertia_end
            ));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return fail(format!(
                "acceleration coefficients must be positive, got c1={} c2={}",
                self.c1, self.c2
            ));
        }
        self.vl_strategy.validate()
    }

    /// Inertia weight at iteration `k`, linear from `inertia_start` at `k = 0`
    /// to `inertia_end` at `k = max_iters - 1`.
    pub fn inertia_at(&self, k: usize) -> Result<f64> {
        if k >= self.max_iters {
            return Err(Error::Range(format!(
                "iteration {k} outside [0, {})",
                self.max_iters
            )));
        }
        Ok(linear_schedule(
            self.inertia_start,
            self.inertia_end,
            k,
            self.max_iters,
        ))
    }

    /// Function-evaluation budget of the main loop, `N * max_iters`.
    pub fn max_fes(&self) -> u64 {
        (self.population * self.max_iters) as u64
    }
}

/// `start + (end - start) * k / (len - 1)`; a single-step schedule stays at `start`.
pub(crate) fn linear_schedule(start: f64, end: f64, k: usize, len: usize) -> f64 {
    if len <= 1 {
        return start;
    }
    start + (end - start) * k as f64 / (len - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(max_iters: usize) -> RunConfig {
        RunConfig::pso_ldiw(2, 10, max_iters, VlStrategyConfig::state_based(0.4, 0.7))
    }

    #[test]
    fn inertia_endpoints() {
        let c = config(3000);
        assert_eq!(c.inertia_at(0).unwrap(), 0.9);
        assert_eq!(c.inertia_at(2999).unwrap(), 0.4);
    }

    #[test]
    fn inertia_midpoint() {
        assert!((config(3).inertia_at(1).unwrap() - 0.65).abs() < 1e-15);
    }

    #[test]
    fn inertia_out_of_range() {
        assert!(matches!(config(3).inertia_at(3), Err(Error::Range(_))));
    }

    #[test]
    fn inertia_monotone() {
        let c = config(257);
        let w: Vec<f64> = (0..257).map(|k| c.inertia_at(k).unwrap()).collect();
        assert!(w.windows(2).all(|p| p[1] <= p[0]));
    }

    #[test]
    fn validation() {
        assert!(config(10).validate().is_ok());
        let mut c = config(10);
        c.population = 1;
        assert!(c.validate().is_err());
        let mut c = config(10);
        c.inertia_end = 1.0;
        assert!(c.validate().is_err());
        let mut c = config(10);
        c.c2 = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn bounds_checks() {
        assert!(Bounds::new(vec![0.0], vec![0.0]).is_err());
        assert!(Bounds::new(vec![0.0, 1.0], vec![1.0]).is_err());
        let b = Bounds::symmetric(2, 100.0).unwrap();
        assert!(b.contains(&[-100.0, 100.0]));
        assert!(!b.contains(&[-100.0, 100.1]));
        assert_eq!(b.half_range(1), 100.0);
    }
}
