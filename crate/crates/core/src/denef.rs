//! The model over ℚ(t): the twist `(t³ + at + b)·Y² = X³ + aX + b`, its
//! points `Pₙ = n·(t, 1)`, the functions `Zₙ = Xₙ / (t·Yₙ)` and the checks
//! that make `ℤ` diophantine inside ℚ(t).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Field, LaurentSeries, Order, RatFunc, Rational, ValueAtInfinity, Var};
use crate::elliptic::{cubic_has_rational_root, CurvePoint, EllipticError, TwistedCurve};

/// Point on the twist over ℚ(t).
pub type TwistedPoint = CurvePoint<RatFunc>;

/// Uniformizer at infinity used for expansions.
const U: &str = "u";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenefError {
    #[error("invalid curve parameters: {0}")]
    InvalidCurve(String),
    /// `Yₙ = 0`, impossible without rational 2-torsion.
    #[error("Y_{0} vanished")]
    TorsionDegenerate(i64),
    #[error("five-square input {0} is zero")]
    ZeroSquare(usize),
    #[error("degree of the sum of squares is {got}, expected {expected}")]
    DegreeParity { got: i64, expected: i64 },
    #[error("group law mismatch: P_{n} + P_{m} != P_{sum}", sum = n + m)]
    GroupLaw { n: i64, m: i64 },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `Zₙ` together with its index.
#[derive(Clone, Debug, PartialEq)]
pub struct ZElement {
    pub n: i64,
    pub value: RatFunc,
}

impl fmt::Display for ZElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[{}] = {}", self.n, self.value)
    }
}

/// Curve data plus a cache of `Pₙ` for `n ≥ 0`.
///
/// The cache is an implementation detail; every method takes `&self` and the
/// context can be shared across threads.
pub struct DenefContext {
    a: Rational,
    b: Rational,
    twist: TwistedCurve<RatFunc>,
    t: RatFunc,
    p1: TwistedPoint,
    points: Mutex<Vec<TwistedPoint>>,
    zs: Mutex<BTreeMap<i64, RatFunc>>,
    expansions: Mutex<BTreeMap<(i64, i64), LaurentSeries<Rational>>>,
}

impl fmt::Debug for DenefContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenefContext").field("a", &self.a).field("b", &self.b).finish()
    }
}

impl Default for DenefContext {
    fn default() -> Self {
        DenefContext::new(Rational::one(), Rational::one()).expect("y² = x³ + x + 1 is valid")
    }
}

impl DenefContext {
    pub fn new(a: Rational, b: Rational) -> Result<Self, DenefError> {
        if Zero::is_zero(&b) {
            return Err(DenefError::InvalidCurve("b must be nonzero".into()));
        }
        let disc = Rational::from_integer(4.into()) * &a * &a * &a + Rational::from_integer(27.into()) * &b * &b;
        if Zero::is_zero(&disc) {
            return Err(DenefError::InvalidCurve("4a³ + 27b² = 0".into()));
        }
        if cubic_has_rational_root(&a, &b) {
            return Err(DenefError::InvalidCurve("x³ + ax + b has a rational root".into()));
        }
        let var = Var::new("t");
        let t = RatFunc::variable(var.clone());
        let d = t.pow(3) + &(t.clone() * &RatFunc::constant(var.clone(), a.clone())) + &RatFunc::constant(var.clone(), b.clone());
        let twist = TwistedCurve::new(d, &a, &b, "h")?;
        let p1 = CurvePoint::Affine(t.clone(), RatFunc::one(var));
        debug_assert!(twist.on_twist(&p1));
        Ok(DenefContext {
            a,
            b,
            twist,
            t,
            points: Mutex::new(vec![CurvePoint::Infinity, p1.clone()]),
            p1,
            zs: Mutex::new(BTreeMap::new()),
            expansions: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `D = t³ + at + b`.
    pub fn d(&self) -> &RatFunc {
        self.twist.d()
    }

    pub fn twist(&self) -> &TwistedCurve<RatFunc> {
        &self.twist
    }

    pub fn p1(&self) -> &TwistedPoint {
        &self.p1
    }

    /// `n·P₁`. Nonnegative multiples are built by successive addition and
    /// cached; `P₋ₙ = −Pₙ`.
    pub fn compute_pn(&self, n: i64) -> Result<TwistedPoint, DenefError> {
        let k = n.unsigned_abs() as usize;
        let mut pts = self.points.lock().expect("point cache poisoned");
        while pts.len() <= k {
            let next = self.twist.add_unchecked(pts.last().expect("nonempty"), &self.p1)?;
            pts.push(next);
        }
        let p = pts[k].clone();
        Ok(if n < 0 { p.neg() } else { p })
    }

    /// `Zₙ = Xₙ / (t·Yₙ)`, `Z₀ = 0`.
    pub fn compute_zn(&self, n: i64) -> Result<ZElement, DenefError> {
        if n == 0 {
            return Ok(ZElement { n, value: RatFunc::zero(self.t.var().clone()) });
        }
        let k = n.abs();
        let cached = self.zs.lock().expect("z cache poisoned").get(&k).cloned();
        let zk = match cached {
            Some(z) => z,
            None => {
                let z = self.z_of_point(&self.compute_pn(k)?).ok_or(DenefError::TorsionDegenerate(k))?;
                self.zs.lock().expect("z cache poisoned").insert(k, z.clone());
                z
            }
        };
        Ok(ZElement { n, value: if n < 0 { -zk } else { zk } })
    }

    /// `X / (t·Y)` for an affine point with `Y ≠ 0`; `0` at infinity.
    pub fn z_of_point(&self, p: &TwistedPoint) -> Option<RatFunc> {
        match p {
            CurvePoint::Infinity => Some(RatFunc::zero(self.t.var().clone())),
            CurvePoint::Affine(x, y) => x.try_div(&(self.t.clone() * y)).ok(),
        }
    }

    /// `Zₙ` has order 0 at infinity with value `n`, and `Zₙ − n` has positive
    /// order. `Z₀ = 0`.
    pub fn check_infinity_value(&self, n: i64) -> Result<bool, DenefError> {
        let z = self.compute_zn(n)?.value;
        if n == 0 {
            return Ok(z.is_zero());
        }
        let nq = Rational::from_integer(BigInt::from(n));
        let value_ok = z.value_at_infinity() == ValueAtInfinity::Finite(nq.clone());
        let order_ok = z.ord_t_inverse() == Order::Finite(0);
        let shifted = z.clone() - &RatFunc::constant(z.var().clone(), nq);
        let shifted_ok = match shifted.ord_t_inverse() {
            Order::Infinite => true,
            Order::Finite(k) => k > 0,
        };
        Ok(value_ok && order_ok && shifted_ok)
    }

    /// `ord_{t⁻¹}(Zₙ·Zₘ − Z_ℓ) > 0`.
    ///
    /// Decided from expansions at infinity: only the coefficients of `u^e`
    /// with `e ≤ 0` matter, so short expansions suffice even for large `ℓ`.
    pub fn mult_encoding_holds(&self, n: i64, m: i64, l: i64) -> Result<bool, DenefError> {
        let mut prec = 2;
        loop {
            let diff = self.z_expansion(n, prec)?.mul_ref(&self.z_expansion(m, prec)?).sub_ref(&self.z_expansion(l, prec)?);
            if let Some(v) = diff.valuation() {
                if v <= 0 {
                    return Ok(false);
                }
            }
            if diff.precision() > 0 {
                return Ok(true);
            }
            prec *= 2;
        }
    }

    /// Expansion of `Zₙ` in `u = 1/t` to absolute precision `prec`, cached.
    pub fn z_expansion(&self, n: i64, prec: i64) -> Result<LaurentSeries<Rational>, DenefError> {
        let key = (n.abs(), prec);
        let cached = self.expansions.lock().expect("expansion cache poisoned").get(&key).cloned();
        let s = match cached {
            Some(s) => s,
            None => {
                let s = self.compute_zn(key.0)?.value.expand_at_infinity(Var::new(U), prec);
                self.expansions.lock().expect("expansion cache poisoned").insert(key, s.clone());
                s
            }
        };
        Ok(if n < 0 { s.neg_ref() } else { s })
    }

    /// The addition witness `Pₙ ⊕ Pₘ = Pₙ₊ₘ` with its `Z`-values.
    pub fn add_encoding_witness(&self, n: i64, m: i64) -> Result<AddWitness, DenefError> {
        let pn = self.compute_pn(n)?;
        let pm = self.compute_pn(m)?;
        let sum = self.compute_pn(n + m)?;
        if self.twist.add(&pn, &pm)? != sum {
            return Err(DenefError::GroupLaw { n, m });
        }
        Ok(AddWitness {
            n,
            m,
            zn: self.compute_zn(n)?.value,
            zm: self.compute_zn(m)?.value,
            zsum: self.compute_zn(n + m)?.value,
            pn,
            pm,
            psum: sum,
        })
    }

    /// `Pₙ = 2·P_k ⊕ (n mod 2)·P₁` with `k = ⌊n/2⌋`.
    pub fn check_halving(&self, n: i64) -> Result<bool, DenefError> {
        let k = n.div_euclid(2);
        let parity = n.rem_euclid(2);
        let pk = self.compute_pn(k)?;
        let doubled = self.twist.add(&pk, &pk)?;
        let rhs = if parity == 1 { self.twist.add(&doubled, &self.p1)? } else { doubled };
        Ok(rhs == self.compute_pn(n)?)
    }

    /// Verifies `y² = comX³ − 4` and `(y − t)·Z² + 1 = X₁² + ⋯ + X₅²`.
    pub fn verify_t_witness(&self, w: &TWitness) -> TVerdict {
        let com_ok = com_check(&w.com_x, &w.y);
        let lhs = (w.y.clone() - &self.t) * &w.z.square() + &RatFunc::one(self.t.var().clone());
        let rhs = w.xs.iter().fold(RatFunc::zero(self.t.var().clone()), |acc, x| acc + &x.square());
        let identity_ok = lhs == rhs;
        let accepted = com_ok && identity_ok;
        let violation = if accepted && !positive_order(&w.z) {
            Some(SoundnessViolation { z: w.z.clone(), order: w.z.ord_t_inverse() })
        } else {
            None
        };
        TVerdict { com_ok, identity_ok, violation }
    }
}

fn positive_order(f: &RatFunc) -> bool {
    match f.ord_t_inverse() {
        Order::Infinite => true,
        Order::Finite(k) => k > 0,
    }
}

/// `Pₙ`, `Pₘ`, `Pₙ₊ₘ` and their `Z`-values.
#[derive(Clone, Debug)]
pub struct AddWitness {
    pub n: i64,
    pub m: i64,
    pub pn: TwistedPoint,
    pub pm: TwistedPoint,
    pub psum: TwistedPoint,
    pub zn: RatFunc,
    pub zm: RatFunc,
    pub zsum: RatFunc,
}

/// `y² = x³ − 4`.
pub fn com_check(x: &RatFunc, y: &RatFunc) -> bool {
    let four = RatFunc::from_int(x.var().clone(), 4);
    y.square() == x.pow(3) - &four
}

/// A claimed certificate that `ord_{t⁻¹} Z > 0`.
#[derive(Clone, Debug)]
pub struct TWitness {
    pub z: RatFunc,
    pub y: RatFunc,
    pub xs: [RatFunc; 5],
    pub com_x: RatFunc,
}

/// An accepted witness whose `Z` does not have positive order.
#[derive(Clone, Debug, PartialEq)]
pub struct SoundnessViolation {
    pub z: RatFunc,
    pub order: Order,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TVerdict {
    pub com_ok: bool,
    pub identity_ok: bool,
    pub violation: Option<SoundnessViolation>,
}

impl TVerdict {
    pub fn accepted(&self) -> bool {
        self.com_ok && self.identity_ok
    }
}

/// Degree of a nonzero rational function: `deg num − deg den`.
pub fn ratfunc_degree(f: &RatFunc) -> i64 {
    f.deg_num() - f.deg_den()
}

/// `deg(X₁² + ⋯ + X₅²)`, checked against `2·maxᵢ deg Xᵢ`.
///
/// Over a formally real field the leading coefficients of the squares of
/// maximal degree are positive, so they cannot cancel.
pub fn five_square_degree_check(xs: &[RatFunc; 5]) -> Result<i64, DenefError> {
    if let Some(i) = xs.iter().position(RatFunc::is_zero) {
        return Err(DenefError::ZeroSquare(i));
    }
    let expected = 2 * xs.iter().map(ratfunc_degree).max().expect("five entries");
    let sum = xs.iter().skip(1).fold(xs[0].square(), |acc, x| acc + &x.square());
    let got = ratfunc_degree(&sum);
    if got != expected {
        return Err(DenefError::DegreeParity { got, expected });
    }
    Ok(got)
}

/// One line of a `Z` report.
#[derive(Clone, Debug, Serialize)]
pub struct ZReport {
    pub n: i64,
    pub z: String,
    pub value_at_infinity: String,
    pub ord: String,
    pub ok: bool,
}

impl DenefContext {
    pub fn z_report(&self, n: i64) -> Result<ZReport, DenefError> {
        let z = self.compute_zn(n)?;
        Ok(ZReport {
            n,
            value_at_infinity: z.value.value_at_infinity().to_string(),
            ord: z.value.ord_t_inverse().to_string(),
            ok: self.check_infinity_value(n)?,
            z: z.value.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::from_i64s("t", num, den).unwrap()
    }

    #[test]
    fn small_points() {
        let ctx = DenefContext::default();
        assert_eq!(ctx.compute_pn(0).unwrap(), CurvePoint::Infinity);
        assert_eq!(ctx.compute_pn(1).unwrap(), CurvePoint::Affine(rf(&[0, 1], &[1]), rf(&[1], &[1])));
        let p2 = ctx.compute_pn(2).unwrap();
        let x2 = rf(&[1, -8, -2, 0, 1], &[4, 4, 0, 4]);
        // 8(t³+t+1)² = 8t⁶ + 16t⁴ + 16t³ + 8t² + 16t + 8
        let y2 = rf(&[-9, -4, -5, 20, 5, 0, 1], &[8, 16, 8, 16, 16, 0, 8]);
        assert_eq!(p2, CurvePoint::Affine(x2, y2));
        assert!(ctx.twist().on_twist(&p2));
    }

    #[test]
    fn z_values() {
        let ctx = DenefContext::default();
        assert_eq!(ctx.compute_zn(1).unwrap().value, rf(&[1], &[1]));
        assert_eq!(ctx.compute_zn(-1).unwrap().value, rf(&[-1], &[1]));
        let t = RatFunc::variable(Var::new("t"));
        let num = RatFunc::from_int(Var::new("t"), 2) * &rf(&[1, -8, -2, 0, 1], &[1]) * &rf(&[1, 1, 0, 1], &[1]);
        let den = t * &rf(&[-9, -4, -5, 20, 5, 0, 1], &[1]);
        let z2 = ctx.compute_zn(2).unwrap();
        assert_eq!(z2.value, num.try_div(&den).unwrap());
        assert!(z2.to_string().starts_with("Z[2] = "));
        for n in [0, 2, -7] {
            assert!(ctx.check_infinity_value(n).unwrap());
        }
    }

    #[test]
    fn mult_encoding_examples() {
        let ctx = DenefContext::default();
        assert!(ctx.mult_encoding_holds(1, 2, 2).unwrap());
        assert!(ctx.mult_encoding_holds(2, 2, 4).unwrap());
        assert!(!ctx.mult_encoding_holds(2, 2, 3).unwrap());
        assert!(ctx.mult_encoding_holds(0, 3, 0).unwrap());
        assert!(ctx.mult_encoding_holds(-2, 3, -6).unwrap());
    }

    #[test]
    fn mult_encoding_matches_exact_order() {
        let ctx = DenefContext::default();
        for (n, m, l) in [(2, 2, 4), (2, 2, 3), (2, 3, 6), (3, -1, -3), (2, -2, 4)] {
            let zn = ctx.compute_zn(n).unwrap().value;
            let zm = ctx.compute_zn(m).unwrap().value;
            let zl = ctx.compute_zn(l).unwrap().value;
            let exact = positive_order(&(zn * &zm - &zl));
            assert_eq!(ctx.mult_encoding_holds(n, m, l).unwrap(), exact, "({n},{m},{l})");
        }
    }

    #[test]
    fn add_witnesses() {
        let ctx = DenefContext::default();
        let w = ctx.add_encoding_witness(1, 0).unwrap();
        assert!(w.pm.is_infinity() && w.zsum.is_one());
        let w = ctx.add_encoding_witness(2, 3).unwrap();
        assert_eq!(w.psum, ctx.compute_pn(5).unwrap());
        let w = ctx.add_encoding_witness(-2, 2).unwrap();
        assert!(w.psum.is_infinity() && w.zsum.is_zero());
    }

    #[test]
    fn halving() {
        let ctx = DenefContext::default();
        for n in -9..=9 {
            assert!(ctx.check_halving(n).unwrap(), "{n}");
        }
    }

    #[test]
    fn com_examples() {
        let c = |k| RatFunc::from_int(Var::new("t"), k);
        assert!(com_check(&c(2), &c(2)));
        assert!(com_check(&c(5), &c(11)));
        assert!(!com_check(&c(1), &c(1)));
    }

    #[test]
    fn t_witness_examples() {
        let ctx = DenefContext::default();
        let c = |k| RatFunc::from_int(Var::new("t"), k);
        let xs = [c(1), c(0), c(0), c(0), c(0)];
        let ok = TWitness { z: c(0), y: c(2), xs: xs.clone(), com_x: c(2) };
        let v = ctx.verify_t_witness(&ok);
        assert!(v.accepted() && v.violation.is_none());
        let bad = TWitness { z: rf(&[1], &[0, 1]), y: c(2), xs, com_x: c(2) };
        assert!(!ctx.verify_t_witness(&bad).accepted());
    }

    #[test]
    fn five_square_examples() {
        let t = rf(&[0, 1], &[1]);
        let one = rf(&[1], &[1]);
        let xs = [t.clone(), one.clone(), one.clone(), one.clone(), one.clone()];
        assert_eq!(five_square_degree_check(&xs).unwrap(), 2);
        let xs = [rf(&[1, 0, 1], &[1]), t.clone(), t, one.clone(), one];
        assert_eq!(five_square_degree_check(&xs).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_curves() {
        let q = |k: i64| Rational::from_integer(k.into());
        assert!(DenefContext::new(q(1), q(0)).is_err());
        assert!(DenefContext::new(q(-3), q(2)).is_err());
        assert!(DenefContext::new(q(0), q(-8)).is_err());
    }
}
