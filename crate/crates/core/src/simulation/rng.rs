//! Seeded generator substreams.
//!
//! Every draw comes from ChaCha8. A substream is keyed by
//! `(seed, domain, index)` and selected by a stream number (the context
//! label), so adding a context or a replicate never shifts another one's draws.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name recorded in reports next to the seed.
pub const GENERATOR_NAME: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Sampling = 1,
    Bootstrap = 2,
}

pub fn substream(seed: u64, domain: Domain, index: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Uniform in `[0, 1)` on a 2^-53 grid, one generator word per call.
#[inline]
pub fn unit_interval<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Number of successes in `trials` Bernoulli(`p`) draws; exactly one word per trial.
pub fn bernoulli_successes<R: RngCore + ?Sized>(rng: &mut R, p: f64, trials: u64) -> u64 {
    (0..trials).filter(|_| unit_interval(rng) < p).count() as u64
}
