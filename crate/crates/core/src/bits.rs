//! Packed fixed-length bit strings.
//!
//! Bit `t` lives in word `t / 64` at position `t % 64` (least significant
//! first). Bits past `len` in the last word are always zero, so word-level
//! equality, hashing and popcounts need no masking.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::rng::{FlipRate, RandomSource};

const WORD: usize = 64;

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= WORD {
        !0
    } else {
        (1u64 << len) - 1
    }
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length sequence of binary symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self {
            len,
            words: vec![!0; words_for(len)],
        };
        s.clear_tail();
        s
    }

    /// Uniform i.i.d. bits.
    pub fn random(len: usize, rng: &mut RandomSource) -> Self {
        let mut s = Self {
            len,
            words: (0..words_for(len)).map(|_| rng.next_u64()).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        bits.iter().copied().collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let m = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.words[i / WORD] >> (i % WORD)) & 1 == 1)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    pub fn complement(&self) -> Self {
        let mut s = Self {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn hamming(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "hamming distance needs equal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Reads `len <= 64` bits starting at `start`; bit `start` lands in bit 0.
    #[inline]
    pub fn read_bits(&self, start: usize, len: usize) -> u64 {
        debug_assert!(len <= WORD && start + len <= self.len);
        if len == 0 {
            return 0;
        }
        let (w, off) = (start / WORD, start % WORD);
        let mut v = self.words[w] >> off;
        if off + len > WORD {
            v |= self.words[w + 1] << (WORD - off);
        }
        v & low_mask(len)
    }

    /// Overwrites `len <= 64` bits starting at `start` with the low bits of `value`.
    #[inline]
    pub fn write_bits(&mut self, start: usize, len: usize, value: u64) {
        debug_assert!(len <= WORD && start + len <= self.len);
        if len == 0 {
            return;
        }
        let value = value & low_mask(len);
        let (w, off) = (start / WORD, start % WORD);
        let first = WORD.min(off + len) - off;
        let m = low_mask(first) << off;
        self.words[w] = (self.words[w] & !m) | ((value << off) & m);
        if first < len {
            let rest = len - first;
            let m = low_mask(rest);
            self.words[w + 1] = (self.words[w + 1] & !m) | (value >> first);
        }
    }

    /// Number of ones in `[start, start + len)`.
    pub fn count_ones_in(&self, start: usize, len: usize) -> usize {
        assert!(start + len <= self.len, "range exceeds bit string");
        let mut total = 0;
        let mut at = start;
        let end = start + len;
        while at < end {
            let take = WORD.min(end - at);
            total += self.read_bits(at, take).count_ones() as usize;
            at += take;
        }
        total
    }

    /// Sets every bit in `[start, start + len)` to `bit`.
    pub fn fill(&mut self, start: usize, len: usize, bit: bool) {
        assert!(start + len <= self.len, "range exceeds bit string");
        let value = if bit { !0 } else { 0 };
        let mut at = start;
        let end = start + len;
        while at < end {
            let take = WORD.min(end - at);
            self.write_bits(at, take, value);
            at += take;
        }
    }

    /// Copies `[start, start + len)` into a new bit string.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len, "range exceeds bit string");
        let mut out = Self::zeros(len);
        let mut at = 0;
        while at < len {
            let take = WORD.min(len - at);
            out.write_bits(at, take, self.read_bits(start + at, take));
            at += take;
        }
        out
    }

    /// One-point exchange at `cut`: returns `(a[..cut] + b[cut..], b[..cut] + a[cut..])`.
    pub fn exchange(a: &Self, b: &Self, cut: usize) -> (Self, Self) {
        assert_eq!(a.len, b.len, "exchange needs equal lengths");
        assert!(cut <= a.len, "cut {cut} past end {}", a.len);
        let (w, off) = (cut / WORD, cut % WORD);
        let mut left = a.clone();
        let mut right = b.clone();
        if w < a.words.len() {
            let keep = low_mask(off);
            left.words[w] = (a.words[w] & keep) | (b.words[w] & !keep);
            right.words[w] = (b.words[w] & keep) | (a.words[w] & !keep);
            left.words[w + 1..].copy_from_slice(&b.words[w + 1..]);
            right.words[w + 1..].copy_from_slice(&a.words[w + 1..]);
        }
        (left, right)
    }

    /// Flips each bit independently with the given rate.
    pub fn mutate(&mut self, rate: FlipRate, rng: &mut RandomSource) {
        if rate.is_zero() {
            return;
        }
        for w in self.words.iter_mut() {
            *w ^= rng.bit_mask(rate);
        }
        self.clear_tail();
    }

    fn clear_tail(&mut self) {
        let used = self.len % WORD;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= low_mask(used);
            }
        }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in iter {
            if len % WORD == 0 {
                words.push(0);
            }
            if bit {
                *words.last_mut().expect("pushed above") |= 1u64 << (len % WORD);
            }
            len += 1;
        }
        Self { len, words }
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses a string of `'0'`/`'1'` characters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.char_indices()
            .map(|(pos, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidBit { ch, pos }),
            })
            .collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let b = bits("0110");
        assert_eq!(b.len(), 4);
        assert!(!b.get(0) && b.get(1) && b.get(2) && !b.get(3));
        assert_eq!(b.to_string(), "0110");
        assert!(matches!(
            "01x".parse::<BitString>(),
            Err(Error::InvalidBit { ch: 'x', pos: 2 })
        ));
        assert!(bits("").is_empty());
    }

    #[test]
    fn ones_and_complement_keep_tail_clear() {
        let o = BitString::ones(70);
        assert_eq!(o.count_ones(), 70);
        assert_eq!(o.complement(), BitString::zeros(70));
        assert_eq!(BitString::zeros(70).complement(), o);
    }

    #[test]
    fn exchange_matches_definition() {
        let (l, r) = BitString::exchange(&bits("0000"), &bits("1111"), 2);
        assert_eq!(l, bits("0011"));
        assert_eq!(r, bits("1100"));
    }

    #[test]
    fn full_rate_mutation_complements() {
        let mut rng = RandomSource::new(3);
        let original = BitString::random(130, &mut rng);
        let mut m = original.clone();
        m.mutate(FlipRate::new(1.0), &mut rng);
        assert_eq!(m, original.complement());
        m.mutate(FlipRate::new(0.0), &mut rng);
        assert_eq!(m, original.complement());
    }

    proptest! {
        #[test]
        fn range_ops_agree_with_per_bit(v in proptest::collection::vec(any::<bool>(), 1..300),
                                        a in 0usize..300, b in 0usize..300) {
            let s = BitString::from_bools(&v);
            let (lo, hi) = (a.min(b) % v.len(), (a.max(b) % v.len()) + 1);
            let hi = hi.max(lo);
            let len = hi - lo;
            let naive = v[lo..hi].iter().filter(|&&x| x).count();
            prop_assert_eq!(s.count_ones_in(lo, len), naive);
            prop_assert_eq!(s.slice(lo, len), BitString::from_bools(&v[lo..hi]));

            let mut filled = s.clone();
            filled.fill(lo, len, true);
            let mut expect = v.clone();
            expect[lo..hi].iter_mut().for_each(|x| *x = true);
            prop_assert_eq!(filled, BitString::from_bools(&expect));
        }

        #[test]
        fn exchange_preserves_columns(x in proptest::collection::vec(any::<bool>(), 1..200),
                                      y_seed in any::<u64>(), cut_seed in any::<usize>()) {
            let mut rng = RandomSource::new(y_seed);
            let a = BitString::from_bools(&x);
            let b = BitString::random(x.len(), &mut rng);
            let cut = cut_seed % (x.len() + 1);
            let (l, r) = BitString::exchange(&a, &b, cut);
            for i in 0..x.len() {
                let (ea, eb) = if i < cut { (a.get(i), b.get(i)) } else { (b.get(i), a.get(i)) };
                prop_assert_eq!(l.get(i), ea);
                prop_assert_eq!(r.get(i), eb);
            }
        }
    }
}
