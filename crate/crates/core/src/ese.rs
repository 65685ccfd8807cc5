//! Evolutionary state estimation.
//!
//! For each particle `i` the mean Euclidean distance to all other particles is
//!
//! ```text
//! d_i = 1/(N-1) * sum_{j != i} |X_i - X_j|
//! ```
//!
//! and the evolutionary factor normalizes the globally best particle's value,
//! `f = (d_g - d_min) / (d_max - d_min)`. A collapsed swarm (`d_max == d_min`)
//! gets `f = 0`.

use crate::{Error, Result};

/// Evolutionary factor together with the distances it was computed from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionaryFactor {
    pub f: f64,
    pub d_g: f64,
    pub d_min: f64,
    pub d_max: f64,
}

/// Coarse searching behaviour implied by a [`SearchState`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    LocalSearching,
    GlobalSearching,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchState {
    /// `f` in `[0, 0.25)`
    Convergence,
    /// `f` in `[0.25, 0.5)`
    Exploitation,
    /// `f` in `[0.5, 0.75)`
    Exploration,
    /// `f` in `[0.75, 1]`
    JumpingOut,
}

impl SearchState {
    pub fn mode(self) -> SearchMode {
        match self {
            SearchState::Convergence | SearchState::Exploitation => SearchMode::LocalSearching,
            SearchState::Exploration | SearchState::JumpingOut => SearchMode::GlobalSearching,
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Mean distance from each particle to all others.
pub fn mean_distances(positions: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut pairs = 0;
    mean_distances_counted(positions, &mut pairs)
}

/// [`mean_distances`], adding the number of pair distances evaluated
/// (`N(N-1)/2`) to `pair_count`.
pub fn mean_distances_counted(positions: &[Vec<f64>], pair_count: &mut u64) -> Result<Vec<f64>> {
    let n = positions.len();
    if n < 2 {
        return Err(Error::Domain(format!(
            "mean distances need at least 2 particles, got {n}"
        )));
    }
    // Each unordered pair is measured once and credited to both ends.
    let mut sums = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            let dist = distance(&positions[i], &positions[j]);
            sums[i] += dist;
            sums[j] += dist;
        }
    }
    *pair_count += (n * (n - 1) / 2) as u64;
    let scale = 1.0 / (n - 1) as f64;
    Ok(sums.into_iter().map(|s| s * scale).collect())
}

pub fn evolutionary_factor(
    positions: &[Vec<f64>],
    gbest_index: usize,
) -> Result<EvolutionaryFactor> {
    let mut pairs = 0;
    evolutionary_factor_counted(positions, gbest_index, &mut pairs)
}

pub fn evolutionary_factor_counted(
    positions: &[Vec<f64>],
    gbest_index: usize,
    pair_count: &mut u64,
) -> Result<EvolutionaryFactor> {
    if gbest_index >= positions.len() {
        return Err(Error::Range(format!(
            "gbest index {gbest_index} outside swarm of {}",
            positions.len()
        )));
    }
    let d = mean_distances_counted(positions, pair_count)?;
    let d_g = d[gbest_index];
    let (d_min, d_max) = d
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let f = if d_max > d_min {
        (d_g - d_min) / (d_max - d_min)
    } else {
        0.0
    };
    Ok(EvolutionaryFactor {
        f,
        d_g,
        d_min,
        d_max,
    })
}

pub fn classify_state(f: f64) -> Result<SearchState> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Domain(format!(
            "evolutionary factor {f} outside [0, 1]"
        )));
    }
    Ok(if f < 0.25 {
        SearchState::Convergence
    } else if f < 0.5 {
        SearchState::Exploitation
    } else if f < 0.75 {
        SearchState::Exploration
    } else {
        SearchState::JumpingOut
    })
}
