//! Seedable, portable randomness.
//!
//! Every draw comes from xoshiro256++ seeded through SplitMix64, and every
//! derived quantity (floats, bounded integers, bit masks) is computed with
//! integer arithmetic or exact float conversions, so a given seed produces
//! the same stream on every platform.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Deterministic random stream for one run (or one sub-stream of a run).
#[derive(Clone, Debug)]
pub struct RandomSource {
    inner: Xoshiro256PlusPlus,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// True with probability `p`. Always consumes exactly one draw.
    #[inline]
    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Uniform integer in `[0, n)` (Lemire's multiply-and-reject).
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0) has no valid outcome");
        let n = n as u64;
        let mut m = (self.next_u64() as u128) * (n as u128);
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = (self.next_u64() as u128) * (n as u128);
            }
        }
        (m >> 64) as usize
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi, "empty range {lo}..={hi}");
        lo + self.below(hi - lo + 1)
    }

    /// A 64-bit word whose bits are independently set with probability `rate`.
    ///
    /// Builds the mask from the binary digits of the rate, least significant
    /// first: a one digit ORs in a fresh uniform word, a zero digit ANDs one in.
    #[inline]
    pub fn bit_mask(&mut self, rate: FlipRate) -> u64 {
        let p = rate.0;
        if p == 0 {
            return 0;
        }
        if p >= FlipRate::ONE {
            return !0;
        }
        let mut mask = 0u64;
        for digit in p.trailing_zeros()..FlipRate::BITS {
            let r = self.next_u64();
            mask = if (p >> digit) & 1 == 1 {
                mask | r
            } else {
                mask & r
            };
        }
        mask
    }
}

/// Per-bit probability quantised to a multiple of 2^-32.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipRate(u64);

impl FlipRate {
    const BITS: u32 = 32;
    const ONE: u64 = 1 << Self::BITS;

    /// Clamps `p` into `[0, 1]` before quantising.
    pub fn new(p: f64) -> Self {
        let p = if p.is_nan() { 0.0 } else { p.clamp(0.0, 1.0) };
        Self((p * Self::ONE as f64).round() as u64)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn probability(self) -> f64 {
        self.0 as f64 / Self::ONE as f64
    }
}

/// SplitMix64 finaliser applied to `a` combined with `b`.
///
/// Used to derive run, cell and sub-stream seeds so that a stream's seed depends
/// only on its coordinates and never on scheduling order.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(42);
        let mut b = RandomSource::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_ne!(
            RandomSource::new(1).next_u64(),
            RandomSource::new(2).next_u64()
        );
    }

    // Pins the generator so a dependency bump cannot silently change results.
    #[test]
    fn stream_is_pinned() {
        // Reference values from the published SplitMix64 and xoshiro256++ definitions.
        let mut r = RandomSource::new(0);
        let got: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        assert_eq!(
            got,
            [
                0x5317_5d61_490b_23df,
                0x61da_6f3d_c380_d507,
                0x5c0f_df91_ec9a_7bfc
            ]
        );
        let mut r = RandomSource::new(42);
        assert_eq!(r.next_u64(), 0xd076_4d4f_4476_689f);
    }

    #[test]
    fn below_is_in_range_and_covers() {
        let mut r = RandomSource::new(9);
        let mut seen = [0u32; 7];
        for _ in 0..7000 {
            seen[r.below(7)] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800 && c < 1200), "{seen:?}");
        assert_eq!(r.between(5, 5), 5);
    }

    #[test]
    fn mask_density_matches_rate() {
        let mut r = RandomSource::new(11);
        for p in [0.05, 0.25, 0.5, 0.9] {
            let rate = FlipRate::new(p);
            let ones: u32 = (0..2000).map(|_| r.bit_mask(rate).count_ones()).sum();
            let freq = ones as f64 / (2000.0 * 64.0);
            assert!((freq - p).abs() < 0.01, "p={p} freq={freq}");
        }
        assert_eq!(r.bit_mask(FlipRate::new(0.0)), 0);
        assert_eq!(r.bit_mask(FlipRate::new(1.0)), !0);
    }

    #[test]
    fn mix_seed_separates_coordinates() {
        assert_ne!(mix_seed(1, 0), mix_seed(1, 1));
        assert_ne!(mix_seed(0, 1), mix_seed(1, 0));
        assert_eq!(mix_seed(7, 3), mix_seed(7, 3));
    }
}
