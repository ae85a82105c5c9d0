//! Exact machinery for diophantine models of the integers in function fields.
//!
//! The crate checks, by exact computation, the finite facts behind two
//! undecidability results for Hilbert's Tenth Problem:
//!
//! * over ℚ(t), the points `Pₙ = n·(t, 1)` on the twist
//!   `(t³ + t + 1)·Y² = X³ + X + 1` give `Zₙ = Xₙ/(t·Yₙ)`, which takes the value
//!   `n` at infinity and so encodes multiplication through a valuation
//!   ([`denef`]);
//! * over ℚ(t₁, t₂), a valuation `w_m` attached to the shifted point
//!   `mP₁ + P₂` separates the pairs `(n, r)` with `(m, 1) ∣ (n, r)` ([`kimroush`]).
//!
//! [`reducer`] compiles an integer polynomial equation into a system over
//! ℚ(t) that is solvable iff the equation has an integer solution, and builds
//! and checks witnesses for it.
//!
//! ```
//! use h10_core::denef::DenefContext;
//!
//! let ctx = DenefContext::default();
//! assert!(ctx.check_infinity_value(3)?);
//! assert!(ctx.mult_encoding_holds(2, 3, 6)?);
//! assert!(!ctx.mult_encoding_holds(2, 3, 5)?);
//! # Ok::<(), h10_core::Error>(())
//! ```

pub mod algebra;
pub mod denef;
pub mod elliptic;
pub mod kimroush;
pub mod reducer;
pub mod syntax;

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Syntax(#[from] syntax::SyntaxError),
    #[error(transparent)]
    Eval(#[from] syntax::EvalError),
    #[error(transparent)]
    Elliptic(#[from] elliptic::EllipticError),
    #[error(transparent)]
    Denef(#[from] denef::DenefError),
    #[error(transparent)]
    KimRoush(#[from] kimroush::KrError),
    #[error(transparent)]
    Reduce(#[from] reducer::ReduceError),
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/rational-functions.md")]
    mod rational_functions {}
    #[doc = include_str!("../../../book/src/two-variables.md")]
    mod two_variables {}
    #[doc = include_str!("../../../book/src/compiler.md")]
    mod compiler {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
