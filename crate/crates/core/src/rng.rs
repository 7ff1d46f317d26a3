//! Seedable random stream.
//!
//! Every stochastic decision in the crate draws from an [`RngStream`]. The
//! generator is ChaCha8 (`rand_chacha`), seeded with [`SeedableRng::seed_from_u64`].
//! Integer draws always go through `u64` so results do not depend on the
//! target's pointer width.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A deterministic random stream identified by its 64-bit seed.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for run `run_index` of a batch seeded with `batch_seed`.
    pub fn for_run(batch_seed: u64, run_index: u64) -> Self {
        Self::new(derive_seed(batch_seed, run_index))
    }

    /// The seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.inner.gen_range(0..n as u64) as usize
    }

    /// Uniform real in the closed interval `[low, high]`.
    pub fn uniform(&mut self, low: f64, high: f64) -> f64 {
        if low >= high {
            return low;
        }
        self.inner.gen_range(low..=high)
    }

    /// A single Bernoulli trial with success probability `p` (clamped to `[0, 1]`).
    pub fn bernoulli(&mut self, p: f64) -> bool {
        let p = if p.is_nan() { 0.0 } else { p.clamp(0.0, 1.0) };
        self.inner.gen_bool(p)
    }
}

/// Seed of run `run_index` within a batch: a SplitMix64 finalizer over the
/// batch seed offset by the run index.
pub fn derive_seed(batch_seed: u64, run_index: u64) -> u64 {
    let mut z = batch_seed.wrapping_add(
        run_index
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
