//! Free-group and braid-group arithmetic.
//!
//! Braid equality is decided through the Artin representation `B_r → Aut(F_r)`,
//! which is faithful, so no normal form is needed.

mod arc;
mod braid;
mod free;

pub use arc::{apply_to_conjugate, half_twist, supporting_pair, Arc, SupportingPair};
pub use braid::{artin_apply, braid_eq, Braid};
pub use free::{FreeWord, GeneratorConjugate};

pub(crate) use free::cmp_letters;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("strand mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("letter {letter} out of range for rank {rank}")]
    LetterOutOfRange { letter: i32, rank: usize },
    #[error("braid letter {letter} out of range for {strands} strands")]
    BraidLetterOutOfRange { letter: i32, strands: usize },
    #[error("bad strand range {lo}..={hi} for {strands} strands")]
    BadRange { lo: usize, hi: usize, strands: usize },
    #[error("unrecognised token {0:?}")]
    BadToken(String),
    #[error("{0} is not a conjugate of a generator")]
    NotAGeneratorConjugate(String),
}

/// `u · v`.
pub fn free_mul(u: &FreeWord, v: &FreeWord) -> Result<FreeWord, WordError> {
    u.mul(v)
}

pub fn free_inv(u: &FreeWord) -> FreeWord {
    u.inverse()
}

/// `g · u · g⁻¹`.
pub fn conjugate(u: &FreeWord, g: &FreeWord) -> Result<FreeWord, WordError> {
    u.conjugate(g)
}

pub fn is_generator_conjugate(u: &FreeWord) -> Option<GeneratorConjugate> {
    u.as_generator_conjugate()
}
