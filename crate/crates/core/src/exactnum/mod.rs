//! Exact arithmetic tower: rationals, univariate polynomials in `t`,
//! rational functions and truncated monoid-indexed series.
//!
//! Nothing in here ever rounds. Every value is immutable once built and
//! every operation returns a fresh canonical value.

mod matrix;
mod poly;
mod rational;
mod ratfn;
mod series;

pub use matrix::{Matrix, Tensor3};
pub use poly::Poly;
pub use rational::Rational;
pub use ratfn::{pole_clear, PoleClearing, RatFn, Valuation};
pub use series::{Exponent, Monoid, MonoidSeries};

use std::fmt;

/// Coefficient field used by cohomology classes, matrices and series.
///
/// Implemented for [`Rational`] and [`RatFn`]; the methods mirror the field
/// axioms so generic code does not have to juggle operator bounds on
/// references.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Errors raised by the arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero: undefined field operation")]
    DivisionByZero,
    #[error("exp requires augmentation-zero input")]
    NonzeroConstantTerm,
    #[error("series live in different monoids or truncations")]
    MonoidMismatch,
    #[error("exponent {0:?} has the wrong rank for this monoid")]
    BadExponent(Vec<u32>),
    #[error("not clearable: denominator factor {factor} is coprime to the clearing factor and t")]
    NotClearable { factor: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
