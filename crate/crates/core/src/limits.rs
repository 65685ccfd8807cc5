//! Repair of velocities and positions that leave their limits.
//!
//! Random draws are consumed only for violating dimensions, in dimension
//! order. Values exactly on a limit are inside it.

use serde::{Deserialize, Serialize};

use crate::config::Bounds;
use crate::rng::UniformSource;
use crate::velocity_limit::VelocityLimit;

/// How a run repairs out-of-limit velocities and positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitHandling {
    /// [`handle_velocity`] and [`handle_position`]: clamp or redraw velocities
    /// depending on `f`, redraw positions.
    #[default]
    StateCoupled,
    /// Clamp both velocities and positions to the nearest limit, ignoring `f`.
    Clamp,
}

impl LimitHandling {
    pub fn repair_velocity<R: UniformSource>(
        self,
        v: &mut [f64],
        vl: &VelocityLimit,
        f: f64,
        rng: &mut R,
    ) {
        match self {
            LimitHandling::StateCoupled => handle_velocity(v, vl, f, rng),
            LimitHandling::Clamp => clamp_velocity(v, vl),
        }
    }

    pub fn repair_position<R: UniformSource>(self, x: &mut [f64], bounds: &Bounds, rng: &mut R) {
        match self {
            LimitHandling::StateCoupled => handle_position(x, bounds, rng),
            LimitHandling::Clamp => clamp_position(x, bounds),
        }
    }
}

/// Clamps every component of `v` into `[-VL, VL]`.
pub fn clamp_velocity(v: &mut [f64], vl: &VelocityLimit) {
    for (x, &limit) in v.iter_mut().zip(&vl.per_dimension) {
        *x = x.clamp(-limit, limit);
    }
}

/// Clamps every component of `x` into the bounds.
pub fn clamp_position(x: &mut [f64], bounds: &Bounds) {
    for ((v, &lo), &hi) in x.iter_mut().zip(bounds.lower()).zip(bounds.upper()) {
        *v = v.clamp(lo, hi);
    }
}

/// Repairs `v` against `vl`. While the swarm searches globally (`f >= 0.5`)
/// offending components are clamped to the nearest limit; otherwise they are
/// redrawn uniformly from `[-VL, VL]`.
pub fn handle_velocity<R: UniformSource>(v: &mut [f64], vl: &VelocityLimit, f: f64, rng: &mut R) {
    let clamp = f >= 0.5;
    for (x, &limit) in v.iter_mut().zip(&vl.per_dimension) {
        if *x > limit || *x < -limit {
            *x = if clamp {
                x.clamp(-limit, limit)
            } else {
                rng.uniform() * 2.0 * limit - limit
            };
        }
    }
}

/// Redraws out-of-bounds components of `x` uniformly inside `bounds`.
pub fn handle_position<R: UniformSource>(x: &mut [f64], bounds: &Bounds, rng: &mut R) {
    for ((v, &lo), &hi) in x.iter_mut().zip(bounds.lower()).zip(bounds.upper()) {
        if *v > hi || *v < lo {
            *v = rng.uniform() * (hi - lo) + lo;
        }
    }
}
