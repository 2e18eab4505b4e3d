//! Deterministic pseudo-random numbers for the simulation harness.
//!
//! SplitMix64: fixed, documented, identical output on every platform.
//! Not cryptographic. Per-trial substreams are derived from
//! `(seed, trial index)` so any execution order of the trials produces
//! identical aggregate counts.

use crate::pattern::Coin;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    /// Independent stream for one trial: the start state is the mixed
    /// image of `seed + (index + 1) * golden`, i.e. output `index` of a
    /// SplitMix64 run seeded with `seed`.
    pub fn substream(seed: u64, index: u64) -> SplitMix64 {
        SplitMix64 { state: mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN))) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform value below `bound` by rejection; `bound > 0`.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let raw = self.next_u64();
            if raw < zone {
                return raw % bound;
            }
        }
    }
}

/// A stream of fair coin tosses drawing 64 flips per generator output.
pub struct CoinTosses {
    rng: SplitMix64,
    buffer: u64,
    remaining: u32,
}

impl CoinTosses {
    pub fn new(rng: SplitMix64) -> CoinTosses {
        CoinTosses { rng, buffer: 0, remaining: 0 }
    }

    pub fn toss(&mut self) -> Coin {
        if self.remaining == 0 {
            self.buffer = self.rng.next_u64();
            self.remaining = 64;
        }
        let coin = Coin::from_bit(self.buffer & 1);
        self.buffer >>= 1;
        self.remaining -= 1;
        coin
    }
}
