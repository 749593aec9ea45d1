//! Counter-addressed fair-coin stream.
//!
//! A stream is a `(seed, position)` pair. The draw at `position` is the
//! `position`-th 32-bit word of a ChaCha8 keystream keyed by `seed`; the coin
//! is `+1` when the word's top bit is clear. Sequential iteration and random
//! access through [`RngStream::at`] address the same words.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::model::HiddenVariable;

/// Name recorded in every output header.
pub const RNG_ALGORITHM: &str = "chacha8-word32-msb";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RngStream {
    seed: u64,
    position: u64,
}

#[inline]
fn lambda_from_word(w: u32) -> HiddenVariable {
    if w >> 31 == 0 {
        HiddenVariable::Plus
    } else {
        HiddenVariable::Minus
    }
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, position: 0 }
    }

    pub fn at(seed: u64, position: u64) -> Self {
        Self { seed, position }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    fn engine(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_word_pos(u128::from(self.position));
        rng
    }

    /// Draws one coin and returns the advanced stream.
    pub fn sample_lambda(self) -> (HiddenVariable, RngStream) {
        let w = self.engine().next_u32();
        (
            lambda_from_word(w),
            RngStream {
                seed: self.seed,
                position: self.position + 1,
            },
        )
    }

    /// The next `n` coins, without re-keying per draw.
    pub fn draws(self, n: u64) -> LambdaDraws {
        LambdaDraws {
            rng: self.engine(),
            remaining: n,
        }
    }
}

/// Iterator over consecutive coins of a stream.
pub struct LambdaDraws {
    rng: ChaCha8Rng,
    remaining: u64,
}

impl Iterator for LambdaDraws {
    type Item = HiddenVariable;

    fn next(&mut self) -> Option<HiddenVariable> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(lambda_from_word(self.rng.next_u32()))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

/// Free-function form of [`RngStream::sample_lambda`].
pub fn sample_lambda(stream: RngStream) -> (HiddenVariable, RngStream) {
    stream.sample_lambda()
}
