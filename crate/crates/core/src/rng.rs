//! Deterministic pseudorandom numbers.
//!
//! Everything in this crate that needs randomness (generators, the token
//! walk, the mobility source, layout seeding) goes through [`SplitMix64`],
//! a 64-bit generator with a linearly advancing state and fixed published
//! mixing constants. Streams are therefore reproducible bit-for-bit from a
//! seed, across platforms and across reimplementations in other languages.

/// SplitMix64 generator (Steele, Lea, Flood constants).
///
/// State advances by the 64-bit golden-ratio increment; output is the
/// mixed state. Passes through all 2^64 states, period 2^64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, bound)`. Reduction is a plain modulo so that other
    /// implementations can reproduce the stream; the bias is negligible for
    /// the bounds used here. `bound` must be non-zero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        self.next_u64() % bound
    }

    /// Uniform in `[lo, hi]` (degenerate when `lo == hi`).
    pub fn next_range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
