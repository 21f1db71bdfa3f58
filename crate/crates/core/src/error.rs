use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank must be between 2 and {max}, got {rank}")]
    InvalidRank { rank: usize, max: usize },

    #[error("letter `{letter}` is not in the alphabet of rank {rank}")]
    LetterOutOfRange { letter: char, rank: usize },

    #[error("invalid character `{0}` in word")]
    InvalidCharacter(char),

    #[error("rank mismatch: map has rank {map}, word uses generator {generator}")]
    RankMismatch { map: usize, generator: usize },

    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("no root of identity")]
    EmptyWord,

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),

    #[error("word is not in any vertex group of the splitting as written")]
    NotInVertexGroup,

    #[error("need at least {needed} usable rows, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
