//! Compiles a polynomial equation over ℤ into a system over ℚ(t) with
//! coefficients in ℤ[t] that is solvable over ℚ(t) iff the equation has an
//! integer solution.
//!
//! Every integer `n` is represented by `Zₙ`. Variables and products get an
//! S-membership gadget, sums and products of slots get addition and
//! multiplication gadgets, integer literals are pinned by double-and-add
//! chains from `Z₁ = 1`, and the root slot is equated with `Z₀ = 0`.
//!
//! Disjunctions are realized with selector variables `e₁, …, e_k`: the
//! equation `e₁ + ⋯ + e_k = 1` forces some `eᵢ ≠ 0`, and each equation `E`
//! of case `i` is emitted as `disj_combine(eᵢ, E)`.

mod document;
mod gadgets;
mod syspoly;
mod witness;

use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::denef::{DenefContext, DenefError};
use crate::syntax::{self, Expr, SyntaxError};

pub use document::{EquationDocument, SystemDocument};
pub use syspoly::{clear_denominators, conj_combine, disj_combine, Monomial, SysPoly, COEFF_VAR};
pub use witness::{CheckStatus, EquationCheck, MultCheck, VerifyReport, WitnessMap};

use gadgets::Emitter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("non-integer coefficient{}", .position.map(|p| format!(" at {p}")).unwrap_or_default())]
    NonIntegerCoefficient { position: Option<usize> },
    #[error("variable name {0} is reserved")]
    ReservedName(String),
    #[error("curve coefficients must be integers")]
    NonIntegerCurve,
    #[error("integer literal {0} is too large")]
    ConstantTooLarge(String),
    #[error("no value for variable {0}")]
    MissingAssignment(String),
    #[error("integer overflow while evaluating slot {0}")]
    Overflow(String),
    #[error(transparent)]
    Denef(#[from] DenefError),
}

/// A polynomial with integer coefficients, as an expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPolynomial {
    expr: Expr,
}

impl ZPolynomial {
    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        self.expr.variables()
    }

    /// Value at an integer assignment.
    pub fn eval(&self, sigma: &dyn Fn(&str) -> Option<i64>) -> Result<i128, ReduceError> {
        fn go(e: &Expr, s: &dyn Fn(&str) -> Option<i64>) -> Result<i128, ReduceError> {
            let of = || ReduceError::Overflow(e.to_string());
            Ok(match e {
                Expr::Int(k) => k.to_i128().ok_or_else(of)?,
                Expr::Var(v) => s(v).ok_or_else(|| ReduceError::MissingAssignment(v.clone()))? as i128,
                Expr::Neg(a) => go(a, s)?.checked_neg().ok_or_else(of)?,
                Expr::Add(a, b) => go(a, s)?.checked_add(go(b, s)?).ok_or_else(of)?,
                Expr::Sub(a, b) => go(a, s)?.checked_sub(go(b, s)?).ok_or_else(of)?,
                Expr::Mul(a, b) => go(a, s)?.checked_mul(go(b, s)?).ok_or_else(of)?,
                Expr::Pow(a, k) => go(a, s)?.checked_pow(*k).ok_or_else(of)?,
                Expr::Div(..) => return Err(ReduceError::NonIntegerCoefficient { position: None }),
            })
        }
        go(&self.expr, sigma)
    }
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

/// Parses a polynomial with integer coefficients. Names containing `'` and
/// the name `t` are reserved.
pub fn parse_zpoly(text: &str) -> Result<ZPolynomial, ReduceError> {
    let expr = syntax::parse(text)?;
    if expr.contains_division() {
        return Err(ReduceError::NonIntegerCoefficient { position: text.find('/') });
    }
    for v in expr.variables() {
        if v == COEFF_VAR || v.contains('\'') {
            return Err(ReduceError::ReservedName(v));
        }
    }
    Ok(ZPolynomial { expr })
}

/// Which rule an equation comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    SMembership,
    Add,
    Com,
    FiveSquare,
    Combiner,
    DenominatorClearing,
    Constant,
    Equality,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::SMembership => "s-membership",
            Provenance::Add => "add",
            Provenance::Com => "com",
            Provenance::FiveSquare => "five-square",
            Provenance::Combiner => "combiner",
            Provenance::DenominatorClearing => "denominator-clearing",
            Provenance::Constant => "constant",
            Provenance::Equality => "equality",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    SMembership,
    Add,
    Negation,
    Mult,
    Constant,
    Equality,
}

/// One gadget application: its slots and the names of its auxiliary variables by role.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub slots: Vec<String>,
    pub aux: Vec<(&'static str, String)>,
}

impl Gadget {
    pub fn aux(&self, role: &str) -> &str {
        &self.aux.iter().find(|(r, _)| *r == role).expect("role exists").1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub poly: SysPoly,
    pub provenance: Provenance,
    /// Index into [`EquationSystem::gadgets`].
    pub gadget: usize,
}

/// How a slot's integer is obtained from the assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotDef {
    Var(String),
    Const(i64),
    Neg(String),
    Add(String, String),
    Sub(String, String),
    Mul(String, String),
}

/// A balanced `conj_combine` tree over equation indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fold {
    Leaf(usize),
    Conj(Box<Fold>, Box<Fold>),
}

impl Fold {
    fn balanced(lo: usize, hi: usize) -> Fold {
        if hi - lo == 1 {
            return Fold::Leaf(lo);
        }
        let mid = lo + (hi - lo).div_ceil(2);
        Fold::Conj(Box::new(Fold::balanced(lo, mid)), Box::new(Fold::balanced(mid, hi)))
    }

    /// `(P)^2 + t*(Q)^2`, unexpanded.
    pub fn render(&self, eqs: &[Equation]) -> String {
        match self {
            Fold::Leaf(i) => eqs[*i].poly.to_string(),
            Fold::Conj(p, q) => format!("({})^2 + {COEFF_VAR}*({})^2", p.render(eqs), q.render(eqs)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EquationSystem {
    pub variables: Vec<String>,
    pub equations: Vec<Equation>,
    pub gadgets: Vec<Gadget>,
    pub slots: Vec<(String, SlotDef)>,
    pub root: Option<String>,
    pub folded: Option<Fold>,
}

impl EquationSystem {
    pub fn empty() -> Self {
        EquationSystem { variables: Vec::new(), equations: Vec::new(), gadgets: Vec::new(), slots: Vec::new(), root: None, folded: None }
    }

    pub fn aux_count(&self) -> usize {
        self.variables.len() - self.slots.len()
    }

    pub fn count_by(&self, kind: GadgetKind) -> usize {
        self.gadgets.iter().filter(|g| g.kind == kind).count()
    }

    /// Equations belonging to gadget `g`.
    pub fn gadget_equations(&self, g: usize) -> impl Iterator<Item = &Equation> {
        self.equations.iter().filter(move |e| e.gadget == g)
    }
}

/// Compiler options.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Also fold the whole system into one polynomial.
    pub fold: bool,
}

/// The compiler, bound to a curve `y² = x³ + ax + b` with integer `a, b`.
#[derive(Debug)]
pub struct Reducer {
    ctx: DenefContext,
    a: i64,
    b: i64,
}

impl Default for Reducer {
    fn default() -> Self {
        Reducer::new(DenefContext::default()).expect("default curve is integral")
    }
}

impl Reducer {
    pub fn new(ctx: DenefContext) -> Result<Self, ReduceError> {
        let int = |q: &crate::algebra::Rational| q.is_integer().then(|| q.to_integer().to_i64()).flatten();
        let (a, b) = match (int(ctx.a()), int(ctx.b())) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(ReduceError::NonIntegerCurve),
        };
        Ok(Reducer { ctx, a, b })
    }

    pub fn context(&self) -> &DenefContext {
        &self.ctx
    }

    pub fn reduce(&self, f: &ZPolynomial, opts: ReduceOptions) -> Result<EquationSystem, ReduceError> {
        if matches!(f.expr(), Expr::Int(k) if num_traits::Zero::is_zero(k)) {
            return Ok(EquationSystem::empty());
        }
        let mut em = Emitter::new(self.a, self.b);
        for v in f.variables() {
            em.user_slot(&v);
        }
        let root = em.compile(f.expr())?;
        em.equality(&root);
        let mut sys = em.finish(root);
        if opts.fold && !sys.equations.is_empty() {
            sys.folded = Some(Fold::balanced(0, sys.equations.len()));
        }
        Ok(sys)
    }

    pub fn build_witness(&self, sys: &EquationSystem, sigma: &dyn Fn(&str) -> Option<i64>) -> Result<WitnessMap, ReduceError> {
        witness::build(&self.ctx, self.a, sys, sigma)
    }

    pub fn verify_witness(&self, sys: &EquationSystem, w: &WitnessMap) -> VerifyReport {
        witness::verify(sys, w)
    }
}

/// Compiles with the default curve and no folding.
pub fn reduce(f: &ZPolynomial) -> Result<EquationSystem, ReduceError> {
    Reducer::default().reduce(f, ReduceOptions::default())
}
