use thiserror::Error;

use crate::words::Word;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i32, rank: usize },
    #[error("rank {0} is outside 1..=26")]
    BadRank(usize),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid word syntax: {0:?}")]
    BadSyntax(String),
    #[error("the trivial word is not allowed here")]
    TrivialWord,
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("perms[{generator}] is not a permutation of 0..{degree}")]
    NotAPermutation { generator: usize, degree: usize },
    #[error("cover graph is not connected")]
    NotConnected,
    #[error("cover has degree 0")]
    EmptyCover,
    #[error("cover is not normal")]
    NotNormal,
    #[error("regular closure exceeds {cap} vertices")]
    ClosureTooLarge { cap: usize },
    #[error("vertex {vertex} out of range for degree {degree}")]
    VertexOutOfRange { vertex: usize, degree: usize },

    #[error("all residues vanish mod {0}")]
    AllZeroResidues(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("wreath elements have different shapes")]
    ShapeMismatch,

    #[error("elements {i} and {j} are not independent")]
    NotIndependent { i: usize, j: usize },
    #[error("the words are conjugate (conjugator: {conjugator})")]
    ElementsConjugate { conjugator: Word },
    #[error("search exhausted: {obstruction}")]
    SearchExhausted { obstruction: String },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
}
