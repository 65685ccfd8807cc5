//! Velocity-limit strategies.
//!
//! A strategy picks the proportion `mu` of the half position range that
//! velocities may not exceed in the current iteration:
//!
//! * **state-based**: `mu = 1 / (1 + alpha * exp(-beta * f))`, a sigmoid of the
//!   evolutionary factor `f` whose parameters pin `mu(0) = mu_min` and
//!   `mu(1) = mu_max`;
//! * **fixed**: a constant `mu_fixed`;
//! * **iteration-linear**: `mu_max` at the first iteration falling linearly to
//!   `mu_min` at the last, ignoring `f`.

use serde::{Deserialize, Serialize};

use crate::config::{linear_schedule, Bounds};
use crate::{Error, Result};

/// Stand-in for `mu_max = 1`, where the sigmoid parameter `beta` diverges.
pub const MU_MAX_CAP: f64 = 1.0 - 1e-9;

/// Default constant proportion of the fixed strategy.
pub const DEFAULT_MU_FIXED: f64 = 0.5;

/// Strategy selection as it appears in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VlStrategyConfig {
    StateBased { mu_min: f64, mu_max: f64 },
    Fixed { mu_fixed: f64 },
    IterationLinear { mu_min: f64, mu_max: f64 },
}

impl VlStrategyConfig {
    pub fn state_based(mu_min: f64, mu_max: f64) -> Self {
        VlStrategyConfig::StateBased { mu_min, mu_max }
    }

    pub fn fixed(mu_fixed: f64) -> Self {
        VlStrategyConfig::Fixed { mu_fixed }
    }

    pub fn iteration_linear(mu_min: f64, mu_max: f64) -> Self {
        VlStrategyConfig::IterationLinear { mu_min, mu_max }
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in (0, 1], got {v}")))
            }
        };
        match *self {
            VlStrategyConfig::Fixed { mu_fixed } => in_unit("mu_fixed", mu_fixed),
            VlStrategyConfig::StateBased { mu_min, mu_max }
            | VlStrategyConfig::IterationLinear { mu_min, mu_max } => {
                in_unit("mu_min", mu_min)?;
                in_unit("mu_max", mu_max)?;
                if mu_min > mu_max {
                    return Err(Error::Config(format!(
                        "mu_min {mu_min} exceeds mu_max {mu_max}"
                    )));
                }
                if matches!(self, VlStrategyConfig::StateBased { .. }) && mu_min >= 1.0 {
                    return Err(Error::Config(
                        "state-based strategy needs mu_min < 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Sigmoid parameters `(alpha, beta)` with `sigmoid(0) = mu_min` and
/// `sigmoid(1) = mu_max`:
///
/// ```text
/// alpha = 1/mu_min - 1
/// beta  = -ln((1/mu_max - 1) / alpha)
/// ```
pub fn derive_alpha_beta(mu_min: f64, mu_max: f64) -> Result<(f64, f64)> {
    let open_unit = |v: f64| v > 0.0 && v < 1.0;
    if !open_unit(mu_min) || !open_unit(mu_max) || mu_min > mu_max {
        return Err(Error::Config(format!(
            "need 0 < mu_min <= mu_max < 1, got mu_min={mu_min} mu_max={mu_max}"
        )));
    }
    let alpha = 1.0 / mu_min - 1.0;
    let beta = -((1.0 / mu_max - 1.0) / alpha).ln();
    Ok((alpha, beta))
}

/// `1 / (1 + alpha * exp(-beta * f))`.
pub fn sigmoid(alpha: f64, beta: f64, f: f64) -> f64 {
    1.0 / (1.0 + alpha * (-beta * f).exp())
}

/// Per-dimension velocity limit in force for one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityLimit {
    pub per_dimension: Vec<f64>,
    /// Proportion `mu` the limit was derived from.
    pub mu: f64,
}

impl VelocityLimit {
    pub fn from_proportion(mu: f64, bounds: &Bounds) -> Self {
        VelocityLimit {
            per_dimension: (0..bounds.dimension())
                .map(|d| mu * bounds.half_range(d))
                .collect(),
            mu,
        }
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        v.iter()
            .zip(&self.per_dimension)
            .all(|(x, limit)| x.abs() <= *limit)
    }
}

/// A validated strategy with its derived parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VlStrategy {
    StateBased {
        mu_min: f64,
        mu_max: f64,
        alpha: f64,
        beta: f64,
    },
    Fixed {
        mu: f64,
    },
    IterationLinear {
        mu_min: f64,
        mu_max: f64,
    },
}

impl VlStrategy {
    pub fn from_config(config: &VlStrategyConfig) -> Result<Self> {
        config.validate()?;
        Ok(match *config {
            VlStrategyConfig::StateBased { mu_min, mu_max } => {
                let (alpha, beta) = derive_alpha_beta(mu_min, mu_max.min(MU_MAX_CAP))?;
                VlStrategy::StateBased {
                    mu_min,
                    mu_max,
                    alpha,
                    beta,
                }
            }
            VlStrategyConfig::Fixed { mu_fixed } => VlStrategy::Fixed { mu: mu_fixed },
            VlStrategyConfig::IterationLinear { mu_min, mu_max } => {
                VlStrategy::IterationLinear { mu_min, mu_max }
            }
        })
    }

    /// Proportion `mu` for evolutionary factor `f` at iteration `k` of `max_iters`.
    pub fn proportion(&self, f: f64, k: usize, max_iters: usize) -> Result<f64> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::Domain(format!(
                "evolutionary factor {f} outside [0, 1]"
            )));
        }
        if k >= max_iters {
            return Err(Error::Range(format!(
                "iteration {k} outside [0, {max_iters})"
            )));
        }
        Ok(match *self {
            VlStrategy::StateBased { alpha, beta, .. } => sigmoid(alpha, beta, f),
            VlStrategy::Fixed { mu } => mu,
            VlStrategy::IterationLinear { mu_min, mu_max } => {
                linear_schedule(mu_max, mu_min, k, max_iters)
            }
        })
    }

    pub fn velocity_limit(
        &self,
        bounds: &Bounds,
        f: f64,
        k: usize,
        max_iters: usize,
    ) -> Result<VelocityLimit> {
        let mu = self.proportion(f, k, max_iters)?;
        Ok(VelocityLimit::from_proportion(mu, bounds))
    }
}
