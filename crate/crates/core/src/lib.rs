//! Exact arithmetic for algebraic integers and the measure machinery
//! (house, Mahler measure, Weil height) needed to produce certified
//! numerical evidence that series of reciprocals have large algebraic
//! degree.
//!
//! Everything is computed over dyadic rationals with outward-rounded
//! interval arithmetic: a returned interval always contains the exact
//! value, and strict comparisons are only reported when the intervals
//! separate. Tower-sized quantities are carried in base-2 log domain.

pub mod algnum;
pub mod bounds;
pub mod certify;
pub mod dyadic;
pub mod hypotheses;
pub mod intpoly;
pub mod rootbox;
pub mod sequences;

pub use algnum::AlgebraicNumber;
pub use dyadic::{ComplexBox, Dyadic, DyadicInterval, LogMagnitude};
pub use intpoly::IntPolynomial;

/// Hard cap on precision escalation: loops refining toward a strict
/// comparison give up past this many fractional bits and report
/// `Undetermined` instead of spinning.
pub const MAX_PRECISION_BITS: u32 = 1 << 14;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("factorization ceiling exceeded: degree {degree} > {ceiling}")]
    FactorizationCeiling { degree: usize, ceiling: usize },
    #[error("minimal polynomial is reducible")]
    ReducibleMinimalPolynomial,
    #[error("box contains {found} roots of the minimal polynomial, expected exactly 1")]
    RootCount { found: usize },
    #[error("reciprocal of zero")]
    ReciprocalOfZero,
    #[error("inputs are conjugate algebraic numbers")]
    ConjugateInputs,
    #[error("undetermined at maximum precision ({bits} fractional bits)")]
    Undetermined { bits: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
