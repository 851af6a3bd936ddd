//! Exact arithmetic over ℚ and ℚ[t]: dense matrices, determinants,
//! adjugates, inverses, linear solving, and reduced rational functions.

mod matrix;
mod poly;
mod ratfunc;

pub use matrix::{adjugate, det, det_bareiss, det_cofactor, inverse, rank, solve, Matrix, Ring};
pub use poly::Poly;
pub use ratfunc::{
    berlekamp_massey, eval_at_minus_one, rational_from_sequence, reduce, series_coefficients,
    taylor_coefficients, RationalFunction,
};

use thiserror::Error;

/// Arbitrary-precision rational; `Display` prints `p/q`, or `p` when `q = 1`.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("operation undefined on the 0x0 matrix")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at t = 0")]
    DenominatorVanishesAtZero,
}

/// Integer as a rational.
pub fn rat(n: impl Into<num_bigint::BigInt>) -> Rational {
    Rational::from_integer(n.into())
}
