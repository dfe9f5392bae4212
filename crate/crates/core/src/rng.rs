//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha8 seeded with
//! `ChaCha8Rng::seed_from_u64(seed)` and switched to a numbered stream with
//! `set_stream(id)`. Different consumers use different stream ids, so adding
//! draws in one place never perturbs another.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name recorded in reports for cross-implementation replay.
pub const ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), set_stream(id)";

pub mod streams {
    pub const MULTIPLIER: u64 = 1;
    pub const FACTOR_INCLUSION: u64 = 2;
    pub const FACTOR_PRODUCT: u64 = 3;
    pub const SCENARIO: u64 = 4;
}

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Log-uniform draw from `[lo, hi]`, `0 < lo <= hi`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let (a, b) = (libm::log(lo), libm::log(hi));
    if b <= a {
        return lo;
    }
    libm::exp(a + (b - a) * rng.gen::<f64>()).clamp(lo, hi)
}
