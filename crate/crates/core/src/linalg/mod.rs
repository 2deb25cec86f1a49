//! Exact rational linear algebra: the coefficient matrix, its kernel and its
//! skew congruence canonical form.

mod congruence;
mod kernel;
mod matrix;
mod rational;

pub use congruence::{
    canonical_form, congruence_apply, skew_canonical_congruence, CongruenceResult,
};
pub use kernel::{kernel_basis, KernelBasis};
pub use matrix::{CoefficientMatrix, RationalMatrix};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty matrix")]
    Empty,
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not skew-symmetric at {}", fmt_entries(entries))]
    NotSkew { entries: Vec<(usize, usize)> },
    #[error("matrix is singular")]
    Singular,
}

// 1-based, as a user would write them
fn fmt_entries(entries: &[(usize, usize)]) -> String {
    entries
        .iter()
        .map(|(i, j)| format!("({}, {})", i + 1, j + 1))
        .collect::<Vec<_>>()
        .join(", ")
}
