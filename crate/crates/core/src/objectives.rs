//! Benchmark fitness functions over standard-binary phenotypes, and their
//! lifting to block genomes through decoding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bbc::BlockGenome;
use crate::bits::BitString;
use crate::error::{Error, Result};

/// Integer-valued, non-negative fitness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Fitness(pub u32);

impl Fitness {
    pub fn value(self) -> f64 {
        self.0 as f64
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    OneMax,
    Needle,
    OnOff,
    Alternation,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::OneMax,
        ProblemKind::Needle,
        ProblemKind::OnOff,
        ProblemKind::Alternation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::OneMax => "onemax",
            ProblemKind::Needle => "needle",
            ProblemKind::OnOff => "onoff",
            ProblemKind::Alternation => "alternation",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            ProblemKind::OnOff => Direction::Minimize,
            _ => Direction::Maximize,
        }
    }

    fn min_length(self) -> usize {
        match self {
            ProblemKind::Alternation => 2,
            _ => 1,
        }
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of ones.
pub fn one_max(s: &BitString) -> Fitness {
    Fitness(s.count_ones() as u32)
}

/// `len` for the all-ones string, 1 everywhere else.
pub fn needle(s: &BitString) -> Fitness {
    if s.count_ones() == s.len() {
        Fitness(s.len() as u32)
    } else {
        Fitness(1)
    }
}

/// Hamming distance to `1010...`, the alternating string that starts with a one.
/// Odd lengths use the same pattern truncated.
pub fn on_off(s: &BitString) -> Fitness {
    const EVEN_POSITIONS: u64 = 0x5555_5555_5555_5555;
    let words = s.words();
    let mut d = 0;
    for (i, w) in words.iter().enumerate() {
        let mut x = w ^ EVEN_POSITIONS;
        let used = s.len() - i * 64;
        if used < 64 {
            x &= (1u64 << used) - 1;
        }
        d += x.count_ones();
    }
    Fitness(d)
}

/// Count of adjacent positions holding different bits.
pub fn alternation(s: &BitString) -> Result<Fitness> {
    if s.len() < 2 {
        return Err(Error::PhenotypeTooShort {
            problem: "alternation",
            min: 2,
            actual: s.len(),
        });
    }
    Ok(Fitness(alternation_count(s)))
}

fn alternation_count(s: &BitString) -> u32 {
    let words = s.words();
    // Pairs (j, j + 1) for j < len - 1.
    let pairs = s.len() - 1;
    let mut total = 0;
    for (i, &w) in words.iter().enumerate() {
        let start = i * 64;
        if start >= pairs {
            break;
        }
        let carry = words.get(i + 1).map_or(0, |n| n & 1);
        let mut d = w ^ ((w >> 1) | (carry << 63));
        let here = pairs - start;
        if here < 64 {
            d &= (1u64 << here) - 1;
        }
        total += d.count_ones();
    }
    total
}

/// A benchmark instance: a fitness function at a fixed phenotype length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Problem {
    kind: ProblemKind,
    length: usize,
}

impl Problem {
    pub fn new(kind: ProblemKind, length: usize) -> Result<Self> {
        if length < kind.min_length() {
            return Err(Error::PhenotypeTooShort {
                problem: kind.name(),
                min: kind.min_length(),
                actual: length,
            });
        }
        Ok(Self { kind, length })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Phenotype length, i.e. the number of blocks of a matching genome.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn direction(&self) -> Direction {
        self.kind.direction()
    }

    pub fn optimum(&self) -> Fitness {
        let l = self.length as u32;
        match self.kind {
            ProblemKind::OneMax | ProblemKind::Needle => Fitness(l),
            ProblemKind::OnOff => Fitness(0),
            ProblemKind::Alternation => Fitness(l - 1),
        }
    }

    /// Fitness of a standard-binary phenotype.
    pub fn evaluate(&self, s: &BitString) -> Result<Fitness> {
        if s.len() != self.length {
            return Err(Error::LengthMismatch {
                expected: self.length,
                actual: s.len(),
            });
        }
        Ok(self.evaluate_unchecked(s))
    }

    /// Fitness of a block genome: the phenotype fitness of its decoding.
    pub fn evaluate_bbc(&self, w: &BlockGenome) -> Result<Fitness> {
        if w.blocks_n() != self.length {
            return Err(Error::LengthMismatch {
                expected: self.length,
                actual: w.blocks_n(),
            });
        }
        Ok(self.fitness_of(w))
    }

    /// Engine hot path; the caller guarantees the genome has `length` blocks.
    #[inline]
    pub(crate) fn fitness_of(&self, w: &BlockGenome) -> Fitness {
        debug_assert_eq!(w.blocks_n(), self.length);
        self.evaluate_unchecked(&w.decode())
    }

    fn evaluate_unchecked(&self, s: &BitString) -> Fitness {
        match self.kind {
            ProblemKind::OneMax => one_max(s),
            ProblemKind::Needle => needle(s),
            ProblemKind::OnOff => on_off(s),
            ProblemKind::Alternation => Fitness(alternation_count(s)),
        }
    }

    pub fn is_optimal(&self, f: Fitness) -> bool {
        f == self.optimum()
    }

    /// Orders fitness so that `Greater` means better under this problem's direction.
    pub fn compare(&self, a: Fitness, b: Fitness) -> Ordering {
        match self.direction() {
            Direction::Maximize => a.cmp(&b),
            Direction::Minimize => b.cmp(&a),
        }
    }

    /// Strictly better.
    pub fn better(&self, a: Fitness, b: Fitness) -> bool {
        self.compare(a, b) == Ordering::Greater
    }

    /// The better of the two (either one on a tie).
    pub fn best_of(&self, a: Fitness, b: Fitness) -> Fitness {
        if self.better(b, a) {
            b
        } else {
            a
        }
    }
}
