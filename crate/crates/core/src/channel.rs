//! Fixed-count erasure channel: exactly `revealed` of `n` positions survive,
//! chosen uniformly at random.

use thiserror::Error;

use crate::galois::Gf;
use crate::matrix::IndexSet;
use crate::rng::{self, SeededRng};
use crate::wiretap::Observation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChannelError {
    #[error("revealed count {revealed} exceeds length {n}")]
    TooManyRevealed { revealed: usize, n: usize },
    #[error("codeword has length {got}, channel expects {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

pub struct ErasureChannel {
    n: usize,
    revealed: usize,
    rng: SeededRng,
}

impl ErasureChannel {
    pub fn new(n: usize, revealed: usize, seed: u64) -> Result<Self, ChannelError> {
        Self::with_stream(n, revealed, seed, rng::stream::MAIN_CHANNEL)
    }

    /// Uses the given ChaCha stream of `seed`, so channels built from one
    /// seed with different streams are independent.
    pub fn with_stream(n: usize, revealed: usize, seed: u64, stream: u64) -> Result<Self, ChannelError> {
        if revealed > n {
            return Err(ChannelError::TooManyRevealed { revealed, n });
        }
        Ok(ErasureChannel {
            n,
            revealed,
            rng: rng::seeded(seed, stream),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn revealed_count(&self) -> usize {
        self.revealed
    }

    /// Partial Fisher-Yates shuffle of `0..n`; the first `revealed` slots are
    /// the surviving positions.
    pub fn sample_revealed_set(&mut self) -> IndexSet {
        sample_subset(&mut self.rng, self.n, self.revealed)
    }

    pub fn transmit(&mut self, codeword: &[Gf]) -> Result<Observation, ChannelError> {
        if codeword.len() != self.n {
            return Err(ChannelError::LengthMismatch {
                expected: self.n,
                got: codeword.len(),
            });
        }
        let j = self.sample_revealed_set();
        Ok(Observation::restrict(codeword, &j).expect("lengths checked"))
    }
}

pub(crate) fn sample_subset(rng: &mut SeededRng, n: usize, size: usize) -> IndexSet {
    use rand::Rng;
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        perm.swap(i, j);
    }
    perm.truncate(size);
    IndexSet::new(n, perm).expect("a prefix of a permutation is a valid subset")
}
