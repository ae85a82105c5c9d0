//! Short Weierstrass curves `y² = x³ + ax + b` over any exact [`Field`], and
//! the quadratic twist `D·Y² = X³ + aX + b` handled by transport to `E` over
//! the extension `h² = D`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, Field, QuadExt, QuadModulus, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("point {0} is not on the curve")]
    PointNotOnCurve(String),
    #[error("singular curve: 4a³ + 27b² = 0")]
    SingularCurve,
    /// The point of `E` does not come from the twist: `x` is not in the base
    /// field or `y` is not `h` times a base element.
    #[error("point {0} is not in the image of the twist")]
    NotInImage(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `O` or an affine pair.
#[derive(Clone, PartialEq)]
pub enum CurvePoint<F: Field> {
    Infinity,
    Affine(F, F),
}

impl<F: Field> CurvePoint<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            CurvePoint::Affine(x, _) => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            CurvePoint::Affine(_, y) => Some(y),
            CurvePoint::Infinity => None,
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), -y.clone()),
        }
    }
}

impl<F: Field> fmt::Debug for CurvePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for CurvePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => f.write_str("O"),
            CurvePoint::Affine(x, y) => write!(f, "({x} ; {y})"),
        }
    }
}

/// `y² = x³ + ax + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve<F: Field> {
    a: F,
    b: F,
}

impl<F: Field> Curve<F> {
    pub fn new(a: F, b: F) -> Result<Self, EllipticError> {
        let disc = a.pow(3) * &a.from_int_like(4) + &(b.square() * &a.from_int_like(27));
        if disc.is_zero() {
            return Err(EllipticError::SingularCurve);
        }
        Ok(Curve { a, b })
    }

    pub fn a(&self) -> &F {
        &self.a
    }

    pub fn b(&self) -> &F {
        &self.b
    }

    /// `x³ + ax + b`.
    pub fn rhs(&self, x: &F) -> F {
        x.pow(3) + &(self.a.clone() * x) + &self.b
    }

    pub fn on_curve(&self, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y.square() == self.rhs(x),
        }
    }

    fn require(&self, p: &CurvePoint<F>) -> Result<(), EllipticError> {
        if self.on_curve(p) {
            Ok(())
        } else {
            Err(EllipticError::PointNotOnCurve(p.to_string()))
        }
    }

    pub fn add(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<CurvePoint<F>, EllipticError> {
        self.require(p)?;
        self.require(q)?;
        self.add_unchecked(p, q)
    }

    /// Chord-tangent addition without membership checks.
    pub fn add_unchecked(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<CurvePoint<F>, EllipticError> {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return Ok(q.clone()),
            (_, CurvePoint::Infinity) => return Ok(p.clone()),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1.clone() + y2).is_zero() {
                return Ok(CurvePoint::Infinity);
            }
            let num = x1.square() * &x1.from_int_like(3) + &self.a;
            num.try_div(&(y1.clone() + y1))?
        } else {
            (y2.clone() - y1).try_div(&(x2.clone() - x1))?
        };
        let x3 = lambda.square() - x1 - x2;
        let y3 = lambda * &(x1.clone() - &x3) - y1;
        Ok(CurvePoint::Affine(x3, y3))
    }

    pub fn double(&self, p: &CurvePoint<F>) -> Result<CurvePoint<F>, EllipticError> {
        self.add(p, p)
    }

    /// `n · p` by double-and-add; negative `n` negates.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint<F>) -> Result<CurvePoint<F>, EllipticError> {
        self.require(p)?;
        self.scalar_mul_unchecked(n, p)
    }

    pub fn scalar_mul_unchecked(&self, n: i64, p: &CurvePoint<F>) -> Result<CurvePoint<F>, EllipticError> {
        let mut acc = CurvePoint::Infinity;
        let mut base = p.clone();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add_unchecked(&base, &base)?;
            }
        }
        Ok(if n < 0 { acc.neg() } else { acc })
    }
}

/// The twist `D·Y² = X³ + aX + b` over a base field, with rational `a`, `b`.
///
/// Arithmetic goes through `E: y² = x³ + ax + b` over `Base[h]/(h² − D)`
/// via `(X, Y) ↦ (X, hY)`.
#[derive(Clone, Debug)]
pub struct TwistedCurve<F: Field> {
    d: F,
    modulus: Arc<QuadModulus<F>>,
    curve: Curve<QuadExt<F>>,
}

impl<F: Field> TwistedCurve<F> {
    /// `h` names the extension generator in printed output.
    pub fn new(d: F, a: &Rational, b: &Rational, h: &str) -> Result<Self, EllipticError> {
        let modulus = QuadExt::modulus(d.clone(), h);
        let lift = |q: &Rational| QuadExt::from_base(d.from_rational_like(q), &modulus);
        let curve = Curve::new(lift(a), lift(b))?;
        Ok(TwistedCurve { d, modulus, curve })
    }

    pub fn d(&self) -> &F {
        &self.d
    }

    pub fn modulus(&self) -> &Arc<QuadModulus<F>> {
        &self.modulus
    }

    /// `E` over the extension.
    pub fn untwisted(&self) -> &Curve<QuadExt<F>> {
        &self.curve
    }

    pub fn on_twist(&self, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => {
                let a = self.curve.a().a();
                let b = self.curve.b().a();
                y.square() * &self.d == x.pow(3) + &(a.clone() * x) + b
            }
        }
    }

    /// `(X, Y) ↦ (X, hY)`.
    pub fn to_untwisted(&self, p: &CurvePoint<F>) -> CurvePoint<QuadExt<F>> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(
                QuadExt::from_base(x.clone(), &self.modulus),
                QuadExt::new(x.zero_like(), y.clone(), &self.modulus),
            ),
        }
    }

    /// Inverse of [`TwistedCurve::to_untwisted`].
    pub fn from_untwisted(&self, p: &CurvePoint<QuadExt<F>>) -> Result<CurvePoint<F>, EllipticError> {
        match p {
            CurvePoint::Infinity => Ok(CurvePoint::Infinity),
            CurvePoint::Affine(x, y) => {
                if !x.b().is_zero() || !y.a().is_zero() {
                    return Err(EllipticError::NotInImage(p.to_string()));
                }
                Ok(CurvePoint::Affine(x.a().clone(), y.b().clone()))
            }
        }
    }

    fn require(&self, p: &CurvePoint<F>) -> Result<(), EllipticError> {
        if self.on_twist(p) {
            Ok(())
        } else {
            Err(EllipticError::PointNotOnCurve(p.to_string()))
        }
    }

    pub fn add(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<CurvePoint<F>, EllipticError> {
        self.require(p)?;
        self.require(q)?;
        self.add_unchecked(p, q)
    }

    pub fn add_unchecked(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<CurvePoint<F>, EllipticError> {
        let s = self.curve.add_unchecked(&self.to_untwisted(p), &self.to_untwisted(q))?;
        self.from_untwisted(&s)
    }

    pub fn scalar_mul(&self, n: i64, p: &CurvePoint<F>) -> Result<CurvePoint<F>, EllipticError> {
        self.require(p)?;
        let s = self.curve.scalar_mul_unchecked(n, &self.to_untwisted(p))?;
        self.from_untwisted(&s)
    }
}

/// Whether `x³ + ax + b` has a rational root.
///
/// Scaling `x = y/L` with `L` the lcm of the denominators gives the monic
/// integer cubic `y³ + aL²·y + bL³`, whose rational roots are integers. Those
/// are found exactly by bisection on its monotone pieces.
pub fn cubic_has_rational_root(a: &Rational, b: &Rational) -> bool {
    let l = a.denom().lcm(b.denom());
    let big_a = (a * Rational::from_integer(&l * &l)).to_integer();
    let big_b = (b * Rational::from_integer(&l * &l * &l)).to_integer();
    let f = |y: &BigInt| y * y * y + &big_a * y + &big_b;
    let r = BigInt::one() + big_a.abs().max(big_b.abs());
    let mut pieces = Vec::new();
    if big_a.is_negative() {
        let c = (-&big_a / BigInt::from(3)).sqrt();
        pieces.push((-&r, -&c - 1, true));
        pieces.push((-&c, c.clone(), false));
        pieces.push((&c + 1, r.clone(), true));
    } else {
        pieces.push((-&r, r.clone(), true));
    }
    pieces.into_iter().any(|(lo, hi, increasing)| {
        if lo > hi {
            return false;
        }
        let (mut lo, mut hi) = (lo, hi);
        while lo < hi {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            let below = if increasing { f(&mid).is_negative() } else { f(&mid).is_positive() };
            if below {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        f(&lo).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RatFunc, Var};
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::from_i64s("t", n, d).unwrap()
    }

    #[test]
    fn on_curve_over_rationals() {
        let c = Curve::new(q(1), q(1)).unwrap();
        assert!(c.on_curve(&CurvePoint::Affine(q(0), q(1))));
        assert!(c.on_curve(&CurvePoint::Infinity));
        assert!(!c.on_curve(&CurvePoint::Affine(q(1), q(1))));
        assert_eq!(Curve::new(q(-3), q(2)), Err(EllipticError::SingularCurve));
    }

    fn setup() -> (Curve<QuadExt<RatFunc>>, CurvePoint<QuadExt<RatFunc>>) {
        let m = QuadExt::modulus(rf(&[1, 1, 0, 1], &[1]), "h");
        let one = QuadExt::from_base(rf(&[1], &[1]), &m);
        let c = Curve::new(one.clone(), one).unwrap();
        let p = CurvePoint::Affine(QuadExt::from_base(rf(&[0, 1], &[1]), &m), QuadExt::generator(&m));
        (c, p)
    }

    #[test]
    fn doubling_matches_hand_computation() {
        let (c, p) = setup();
        let two = c.double(&p).unwrap();
        assert!(c.on_curve(&two));
        let expected = rf(&[1, -8, -2, 0, 1], &[4, 4, 0, 4]);
        assert_eq!(two.x().unwrap().in_base(), Some(&expected));
        assert!(c.add(&p, &p.neg()).unwrap().is_infinity());
        assert_eq!(c.add(&p, &CurvePoint::Infinity).unwrap(), p);
        assert_eq!(c.scalar_mul(0, &p).unwrap(), CurvePoint::Infinity);
        assert_eq!(c.scalar_mul(1, &p).unwrap(), p);
        assert_eq!(c.scalar_mul(4, &p).unwrap(), c.double(&two).unwrap());
    }

    #[test]
    fn add_rejects_points_off_the_curve() {
        let (c, p) = setup();
        let bad = CurvePoint::Affine(p.x().unwrap().clone(), p.x().unwrap().clone());
        assert!(matches!(c.add(&p, &bad), Err(EllipticError::PointNotOnCurve(_))));
    }

    #[test]
    fn twist_transport_examples() {
        let t = TwistedCurve::new(rf(&[1, 1, 0, 1], &[1]), &q(1), &q(1), "h").unwrap();
        let p1 = CurvePoint::Affine(RatFunc::variable(Var::new("t")), rf(&[1], &[1]));
        assert!(t.on_twist(&p1));
        let (c, p) = setup();
        assert_eq!(t.to_untwisted(&p1), p);
        assert_eq!(t.to_untwisted(&CurvePoint::Infinity), CurvePoint::Infinity);
        let two = t.add(&p1, &p1).unwrap();
        assert!(t.on_twist(&two));
        assert_eq!(t.to_untwisted(&two), c.double(&p).unwrap());
        let x2 = rf(&[1, -8, -2, 0, 1], &[4, 4, 0, 4]);
        let y2 = rf(&[-9, -4, -5, 20, 5, 0, 1], &[8, 16, 8, 16, 16, 0, 8]);
        assert_eq!(two, CurvePoint::Affine(x2, y2));
        let stray = CurvePoint::Affine(QuadExt::generator(t.modulus()), QuadExt::generator(t.modulus()));
        assert!(matches!(t.from_untwisted(&stray), Err(EllipticError::NotInImage(_))));
    }

    #[test]
    fn rational_root_test() {
        assert!(!cubic_has_rational_root(&q(1), &q(1)));
        assert!(cubic_has_rational_root(&q(-7), &q(6))); // roots 1, 2, -3
        assert!(cubic_has_rational_root(&q(0), &q(-8)));
        assert!(cubic_has_rational_root(&Rational::new((-1).into(), 4.into()), &q(0)));
        assert!(!cubic_has_rational_root(&q(0), &q(-4)));
        assert!(cubic_has_rational_root(&q(-1_000_001), &q(1_000_000))); // root 1 and 1000
    }

    fn multiples() -> Vec<CurvePoint<QuadExt<RatFunc>>> {
        let (c, p) = setup();
        (-5..=5).map(|n| c.scalar_mul(n, &p).unwrap()).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn group_laws_on_multiples(i in 0usize..11, j in 0usize..11, k in 0usize..11) {
            let (c, _) = setup();
            let m = multiples();
            let (p, q, r) = (&m[i], &m[j], &m[k]);
            let pq = c.add(p, q).unwrap();
            prop_assert!(c.on_curve(&pq));
            prop_assert_eq!(&pq, &c.add(q, p).unwrap());
            prop_assert_eq!(c.add(&pq, r).unwrap(), c.add(p, &c.add(q, r).unwrap()).unwrap());
            prop_assert!(c.add(p, &p.neg()).unwrap().is_infinity());
        }

        #[test]
        fn scalar_mul_is_additive(n in -8i64..=8, m in -8i64..=8) {
            let t = TwistedCurve::new(rf(&[1, 1, 0, 1], &[1]), &q(1), &q(1), "h").unwrap();
            let p1 = CurvePoint::Affine(RatFunc::variable(Var::new("t")), rf(&[1], &[1]));
            let lhs = t.scalar_mul(n + m, &p1).unwrap();
            let rhs = t.add(&t.scalar_mul(n, &p1).unwrap(), &t.scalar_mul(m, &p1).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
