//! Seeded, splittable randomness. Nothing here reads the clock or the OS.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rat, Rat};

/// Deterministic generator derived from a 64-bit seed.
#[derive(Clone, Debug)]
pub struct SeedRng(ChaCha8Rng);

impl SeedRng {
    pub fn new(seed: u64) -> Self {
        SeedRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent child stream; the same `(seed, stream)` pair always gives
    /// the same child.
    pub fn split(&self, stream: u64) -> Self {
        let mut child = self.0.clone();
        child.set_stream(stream.wrapping_add(1));
        child.set_word_pos(0);
        SeedRng(child)
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.0.gen_range(0..bound.max(1))
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    pub fn rat_int(&mut self, lo: i64, hi: i64) -> Rat {
        rat(self.int(lo, hi))
    }

    /// Nonzero rational `p/q` with `|p| <= bound`, `1 <= q <= bound`.
    pub fn small_rat(&mut self, bound: i64) -> Rat {
        let q = self.int(1, bound);
        loop {
            let p = self.int(-bound, bound);
            if p != 0 {
                return crate::algebra::ratio(p, q);
            }
        }
    }

    pub fn coin(&mut self) -> bool {
        self.0.gen()
    }

    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}
