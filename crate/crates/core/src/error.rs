use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bit character {ch:?} at position {pos}")]
    InvalidBit { ch: char, pos: usize },

    #[error("majority vote over an empty block is undefined")]
    EmptyVote,

    #[error("block size must be odd and at least 1, got {0}")]
    InvalidBlockSize(usize),

    #[error("genome of {len} bits cannot be split into blocks of {block_k}")]
    RaggedGenome { len: usize, block_k: usize },

    #[error("a genome needs at least one block")]
    EmptyGenome,

    #[error("expected {expected} phenotype bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{problem} needs a phenotype of at least {min} bits, got {actual}")]
    PhenotypeTooShort {
        problem: &'static str,
        min: usize,
        actual: usize,
    },

    #[error("crossover needs genomes of at least 2 bits, got {0}")]
    GenomeTooShort(usize),

    #[error("unknown problem {0:?} (expected onemax, needle, onoff or alternation)")]
    UnknownProblem(String),

    #[error("unknown preset {0:?} (expected paper-P1..paper-P4 or smoke)")]
    UnknownPreset(String),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("config line {line}: {reason}")]
    ConfigSyntax { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    /// True when the error stems from bad input rather than the environment.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Self::Io(_) | Self::Csv(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
