//! Exact arithmetic.
//!
//! Everything here is exact: rationals are [`num_rational::BigRational`],
//! polynomials carry arbitrary-precision integer or rational coefficients, and
//! rational functions are kept in a canonical reduced form so that equality of
//! values is equality of representations.
//!
//! The building blocks are
//!
//! * [`IntPoly`]: dense univariate polynomials over ℤ, the workhorse behind
//!   every rational-function type (multiplication by Kronecker substitution,
//!   gcd by a small-primes modular algorithm);
//! * [`UniPoly`] and [`RatFunc`]: ℚ\[t\] and ℚ(t) in one named variable;
//! * [`BiPoly`] and [`MultiRatFunc`]: ℚ\[t₁,t₂\] and ℚ(t₁,t₂);
//! * [`QuadExt`]: a quadratic extension `Base[h]/(h² − D)`, nestable into towers;
//! * [`LaurentSeries`]: truncated Laurent series with exact coefficients.

mod bipoly;
mod field;
mod int_poly;
mod modp;
mod multiratfunc;
mod quadext;
mod ratfunc;
mod series;
mod unipoly;

pub use bipoly::BiPoly;
pub use field::{Field, Rational, Var};
pub use int_poly::IntPoly;
pub use multiratfunc::MultiRatFunc;
pub use quadext::{QuadExt, QuadModulus};
pub use ratfunc::{Order, RatFunc, ValueAtInfinity};
pub use series::{
    series_expand, series_expand_from, BivariateSubst, LaurentSeries, QuadSubst, SeriesExpand, MAX_SERIES_PRECISION,
    START_SERIES_PRECISION,
};
pub use unipoly::UniPoly;

use thiserror::Error;

/// Errors raised by the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    /// `a² − b²D` vanished for a nonzero element, so `D` is a square and the
    /// extension data is invalid.
    #[error("degenerate quadratic extension: {0} has zero norm")]
    DegenerateExtension(String),
    #[error("series constant term is not a nonzero square")]
    NotASquareConstantTerm,
    /// A nonzero value had no nonzero coefficient below the precision cap.
    #[error("series precision exhausted at O(u^{0})")]
    PrecisionExhausted(i64),
    /// A series division hit a divisor with no known nonzero coefficient.
    #[error("series is zero to the known precision O(u^{0})")]
    SeriesNotInvertible(i64),
    #[error("variable mismatch: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("{0}")]
    Parse(String),
}
