//! Seeded random streams.
//!
//! Every stochastic routine draws from xoshiro256++ seeded through
//! SplitMix64 (`seed_from_u64`). Run `r` of an ensemble with master seed `s`
//! uses seed `s + r` (wrapping), so any single run can be replayed alone.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type SimRng = Xoshiro256PlusPlus;

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

pub fn rng_for_run(master: u64, run: usize) -> SimRng {
    seeded(master.wrapping_add(run as u64))
}

/// Uniform double in `[0, 1)` from the top 53 bits of one output word.
pub fn unit_f64(rng: &mut SimRng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform(rng: &mut SimRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit_f64(rng)
}
