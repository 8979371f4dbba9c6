//! Deterministic counter-based random streams.
//!
//! Every draw is a pure function of `(seed, stream, counter)`, so results are
//! reproducible bit-for-bit across platforms and independent of evaluation
//! order. The protocol runner uses three named streams:
//!
//! - stream 0 — Bob's choice of observable,
//! - stream 1 — Bob's measurement outcome,
//! - stream 2 — Alice's measurement sampling.
//!
//! Other consumers (test harnesses, sweeps) derive their own streams.

/// Stream consumed for Bob's choice of observable k.
pub const STREAM_BOB_CHOICE: u64 = 0;
/// Stream consumed for Bob's outcome β.
pub const STREAM_BOB_BETA: u64 = 1;
/// Stream consumed for Alice's outcome sampling.
pub const STREAM_ALICE_OUTCOME: u64 = 2;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer: bijective on u64 with full avalanche.
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One named stream of a seeded generator; draws are indexed by counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubStream {
    key: u64,
}

impl SubStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix(seed ^ mix(stream.wrapping_mul(GAMMA).wrapping_add(GAMMA)));
        Self { key }
    }

    pub fn u64_at(&self, counter: u64) -> u64 {
        mix(self.key.wrapping_add(counter.wrapping_mul(GAMMA)))
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn f64_at(&self, counter: u64) -> f64 {
        (self.u64_at(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
