//! Deterministic random streams.
//!
//! Every trial owns one [`RngStream`]: a ChaCha8 generator keyed from a 64-bit
//! seed. The seed-to-key expansion and the float conversion are fixed here
//! rather than delegated to `rand`, so a given seed yields the same draws on
//! every platform and across dependency upgrades.
//!
//! Seed mixing (used for per-trial and per-cell streams):
//!
//! ```text
//! mix_seed(a, b) = splitmix64(a ^ splitmix64(b + 0x9E3779B97F4A7C15))
//! trial seed     = mix_seed(master_seed, trial_index)
//! ```
//!
//! The 256-bit ChaCha key is four consecutive outputs of a SplitMix64
//! sequence started at the seed, each written little-endian. A uniform draw
//! takes the top 53 bits of the next `u64` and scales by 2^-53, giving a value
//! in `[0, 1)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines a parent seed with a child index into a new seed.
pub fn mix_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index.wrapping_add(GOLDEN_GAMMA)))
}

/// Seed of the stream used by trial `trial_index` under `master_seed`.
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    mix_seed(master_seed, trial_index)
}

/// Source of uniform reals in `[0, 1)`.
///
/// The engine and the limit handlers are generic over this so tests can force
/// specific draws.
pub trait UniformSource {
    fn uniform(&mut self) -> f64;
}

/// Seedable, platform-independent stream of uniform draws.
#[derive(Clone, Debug)]
pub struct RngStream {
    inner: ChaCha8Rng,
    draws: u64,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&splitmix64(state).to_le_bytes());
        }
        RngStream {
            inner: ChaCha8Rng::from_seed(key),
            draws: 0,
        }
    }

    /// Number of values drawn so far (uniform draws; a normal draw counts two).
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn next_f64(&mut self) -> f64 {
        self.draws += 1;
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate via the Box-Muller transform (cosine branch only).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

impl UniformSource for RngStream {
    fn uniform(&mut self) -> f64 {
        self.next_f64()
    }
}

/// Stream for trial `trial_index` of an experiment seeded with `master_seed`.
pub fn derive_trial_stream(master_seed: u64, trial_index: u64) -> RngStream {
    RngStream::from_seed(trial_seed(master_seed, trial_index))
}
