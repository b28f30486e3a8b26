//! Counter-based randomness keyed by `(seed, stream tag, index)`.
//!
//! Every key maps to its own ChaCha8 keystream: the 64-bit seed fills the
//! ChaCha key, the tag selects the ChaCha stream and the index selects a
//! 2^32-word window of that stream. Draws for different keys are therefore
//! independent of evaluation order, which lets cells and Monte Carlo trials
//! run in parallel without changing a single output bit.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Stream tags in use across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamTag {
    ContinuousCell = 1,
    DiscreteCell = 2,
    MonteCarlo = 3,
    Grid = 4,
}

const WINDOW_WORDS: u128 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyedRng {
    seed: u64,
}

impl KeyedRng {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Generator positioned at the start of the window for `(tag, index)`.
    pub fn stream(&self, tag: StreamTag, index: u64) -> KeyedStream {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        // Domain separation so seed 0 does not produce the all-zero key.
        key[8..16].copy_from_slice(b"beurling");
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(tag as u64);
        rng.set_word_pos(u128::from(index) * WINDOW_WORDS);
        KeyedStream { rng }
    }
}

pub struct KeyedStream {
    rng: ChaCha8Rng,
}

impl KeyedStream {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on (0, 1] with 53 bits of resolution. Zero is never returned.
    pub fn uniform_open_closed(&mut self) -> f64 {
        let k = self.rng.next_u64() >> 11;
        (k + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        let k = self.rng.next_u64() >> 11;
        k as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
