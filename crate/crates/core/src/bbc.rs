//! Binary block coding.
//!
//! A genome of `n * k` bits is read as `n` contiguous blocks of `k` bits.
//! Decoding replaces each block by its majority bit; the two encoders write
//! each phenotype bit back as a block biased towards their own bit value.
//! Conversion (decode, then re-encode) changes the representation of a
//! genome without changing its phenotype.

use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Which encoder a genome is (or will be) written with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodingState {
    /// Blocks carry as many zeros as the phenotype allows.
    Zero,
    /// Blocks carry as many ones as the phenotype allows.
    One,
}

impl CodingState {
    pub const ALL: [CodingState; 2] = [CodingState::Zero, CodingState::One];

    pub fn bit(self) -> bool {
        matches!(self, CodingState::One)
    }

    pub fn complement(self) -> Self {
        match self {
            CodingState::Zero => CodingState::One,
            CodingState::One => CodingState::Zero,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for CodingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.bit() { "1" } else { "0" })
    }
}

/// Majority vote over `u`: `false` when zeros strictly outnumber ones, `true` otherwise.
pub fn maj(u: &BitString) -> Result<bool> {
    if u.is_empty() {
        return Err(Error::EmptyVote);
    }
    Ok(2 * u.count_ones() >= u.len())
}

fn check_block_size(k: usize) -> Result<()> {
    if k % 2 == 1 {
        Ok(())
    } else {
        Err(Error::InvalidBlockSize(k))
    }
}

/// A bit string structured as `blocks_n` blocks of odd size `block_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockGenome {
    bits: BitString,
    block_k: usize,
}

impl BlockGenome {
    pub fn new(bits: BitString, block_k: usize) -> Result<Self> {
        check_block_size(block_k)?;
        if bits.is_empty() {
            return Err(Error::EmptyGenome);
        }
        if !bits.len().is_multiple_of(block_k) {
            return Err(Error::RaggedGenome {
                len: bits.len(),
                block_k,
            });
        }
        Ok(Self { bits, block_k })
    }

    /// Parses `'0'`/`'1'` text; `'|'` separators are skipped wherever they appear.
    pub fn parse(text: &str, block_k: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(text.len());
        for (pos, ch) in text.chars().enumerate() {
            match ch {
                '0' => out.push(false),
                '1' => out.push(true),
                '|' => {}
                _ => return Err(Error::InvalidBit { ch, pos }),
            }
        }
        Self::new(BitString::from_bools(&out), block_k)
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn into_bits(self) -> BitString {
        self.bits
    }

    pub fn blocks_n(&self) -> usize {
        self.bits.len() / self.block_k
    }

    pub fn block_k(&self) -> usize {
        self.block_k
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn block(&self, j: usize) -> BitString {
        self.bits.slice(j * self.block_k, self.block_k)
    }

    /// Majority bit of block `j`.
    #[inline]
    pub fn block_bit(&self, j: usize) -> bool {
        let k = self.block_k;
        2 * self.bits.count_ones_in(j * k, k) >= k
    }

    /// Decodes to the standard-binary phenotype, one majority bit per block.
    pub fn decode(&self) -> BitString {
        (0..self.blocks_n()).map(|j| self.block_bit(j)).collect()
    }

    /// Encodes `x` with blocks of `block_k` bits biased towards `state`.
    ///
    /// A bit equal to the state's value becomes `k` copies of it; the other
    /// value becomes `(k - 1) / 2` copies of the state bit followed by
    /// `(k + 1) / 2` copies of its complement.
    pub fn encode(x: &BitString, block_k: usize, state: CodingState) -> Result<Self> {
        check_block_size(block_k)?;
        if x.is_empty() {
            return Err(Error::EmptyGenome);
        }
        let mut g = Self {
            bits: BitString::zeros(x.len() * block_k),
            block_k,
        };
        for (j, bit) in x.iter().enumerate() {
            g.write_block(j, bit, state);
        }
        Ok(g)
    }

    /// `encode(decode(self), k, state)`.
    pub fn convert(&self, state: CodingState) -> Self {
        let mut g = self.clone();
        g.convert_in_place(state);
        g
    }

    /// Block-by-block conversion without materialising the phenotype.
    pub fn convert_in_place(&mut self, state: CodingState) {
        for j in 0..self.blocks_n() {
            let bit = self.block_bit(j);
            self.write_block(j, bit, state);
        }
    }

    fn write_block(&mut self, j: usize, bit: bool, state: CodingState) {
        let k = self.block_k;
        let start = j * k;
        let i = state.bit();
        if bit == i {
            self.bits.fill(start, k, i);
        } else {
            let head = (k - 1) / 2;
            self.bits.fill(start, head, i);
            self.bits.fill(start + head, k - head, !i);
        }
    }

    /// Mutable access for operators that keep the length (crossover, mutation).
    pub(crate) fn bits_mut(&mut self) -> &mut BitString {
        &mut self.bits
    }

    pub(crate) fn from_parts_unchecked(bits: BitString, block_k: usize) -> Self {
        debug_assert!(block_k % 2 == 1 && !bits.is_empty() && bits.len().is_multiple_of(block_k));
        Self { bits, block_k }
    }

    /// Text with `'|'` between blocks.
    pub fn to_separated_string(&self) -> String {
        let mut s = String::with_capacity(self.len() + self.blocks_n());
        for j in 0..self.blocks_n() {
            if j > 0 {
                s.push('|');
            }
            s.push_str(&self.block(j).to_string());
        }
        s
    }
}

impl fmt::Display for BlockGenome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

impl fmt::Debug for BlockGenome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BlockGenome(k={}, \"{}\")",
            self.block_k,
            self.to_separated_string()
        )
    }
}

/// Free-function form of [`BlockGenome::decode`].
pub fn dec(w: &BlockGenome) -> BitString {
    w.decode()
}

/// Free-function form of [`BlockGenome::encode`].
pub fn enc(x: &BitString, k: usize, state: CodingState) -> Result<BlockGenome> {
    BlockGenome::encode(x, k, state)
}

/// Free-function form of [`BlockGenome::convert`].
pub fn convert(w: &BlockGenome, state: CodingState) -> BlockGenome {
    w.convert(state)
}
