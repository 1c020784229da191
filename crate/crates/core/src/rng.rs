//! Counter-based, splittable 64-bit generator.
//!
//! Output `i` of a stream is a pure function of `(key, i)`: the SplitMix64
//! finalizer applied to `key + i * GAMMA`. Sub-streams get keys hashed from
//! the parent key and a stream index, so any block of trials can be
//! regenerated without replaying the ones before it.

use rand_core::{impls, Error as RandError, RngCore};

/// Recorded in every sampling result.
pub const GENERATOR_ID: &str = "splitmix64-counter/1";

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { key: mix64(seed ^ 0x6A09_E667_F3BC_C908), counter: 0 }
    }

    /// Independent child stream; the parent is left untouched.
    pub fn split(&self, stream: u64) -> Self {
        Self { key: mix64(self.key ^ mix64(stream.wrapping_add(1).wrapping_mul(GAMMA))), counter: 0 }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Value at an absolute position without advancing.
    #[inline]
    pub fn at(&self, index: u64) -> u64 {
        mix64(self.key.wrapping_add(index.wrapping_mul(GAMMA)))
    }

    #[inline]
    pub fn next(&mut self) -> u64 {
        let v = self.at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        v
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`, safe to pass to `ln`.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.next() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        (self.next() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.next()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        impls::fill_bytes_via_next(self, dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.fill_bytes(dest);
        Ok(())
    }
}
