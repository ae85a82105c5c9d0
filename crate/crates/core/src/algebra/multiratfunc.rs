use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::forward_field_ops;
use super::{AlgebraError, BiPoly, Field, IntPoly, RatFunc, Rational};

/// An element of ℚ(t₁, t₂) in canonical reduced form.
///
/// Stored as `scale · n / d` with `n`, `d` of integer content 1, positive
/// graded-lex leading coefficients, and `gcd(n, d) = 1`. Dividing `d` by its
/// leading coefficient gives the denominator with graded-lex leading
/// coefficient 1, so the representation is unique.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiRatFunc {
    scale: Rational,
    n: BiPoly,
    d: BiPoly,
}

impl MultiRatFunc {
    pub fn zero() -> Self {
        MultiRatFunc { scale: Rational::zero(), n: BiPoly::one(), d: BiPoly::one() }
    }

    pub fn one() -> Self {
        MultiRatFunc::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        if Zero::is_zero(&q) {
            return MultiRatFunc::zero();
        }
        MultiRatFunc { scale: q, n: BiPoly::one(), d: BiPoly::one() }
    }

    pub fn from_int(k: i64) -> Self {
        MultiRatFunc::constant(Rational::from_integer(BigInt::from(k)))
    }

    pub fn t1() -> Self {
        MultiRatFunc { scale: Rational::one(), n: BiPoly::t1(), d: BiPoly::one() }
    }

    pub fn t2() -> Self {
        MultiRatFunc { scale: Rational::one(), n: BiPoly::t2(), d: BiPoly::one() }
    }

    /// `p / q`, `q` nonzero.
    pub fn from_bipolys(p: &BiPoly, q: &BiPoly) -> Result<Self, AlgebraError> {
        if q.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let (kp, p) = p.int_content_pp();
        let (kq, q) = q.int_content_pp();
        if kp.is_zero() {
            return Ok(MultiRatFunc::zero());
        }
        Ok(MultiRatFunc::from_parts(Rational::new(kp, kq), p, q))
    }

    fn from_parts(scale: Rational, n: BiPoly, d: BiPoly) -> Self {
        if Zero::is_zero(&scale) || n.is_zero() {
            return MultiRatFunc::zero();
        }
        let (_, n, d) = BiPoly::gcd_cofactors(&n, &d);
        MultiRatFunc { scale, n, d }
    }

    /// Embeds a function of `t₁`.
    pub fn from_t1(u: &RatFunc) -> Self {
        let (s, n, d) = u.parts();
        MultiRatFunc { scale: s.clone(), n: BiPoly::from_t1(n.clone()), d: BiPoly::from_t1(d.clone()) }.canonical_sign()
    }

    /// Embeds a function of `t₂`.
    pub fn from_t2(u: &RatFunc) -> Self {
        let (s, n, d) = u.parts();
        MultiRatFunc { scale: s.clone(), n: BiPoly::from_t2(n), d: BiPoly::from_t2(d) }.canonical_sign()
    }

    fn canonical_sign(self) -> Self {
        if self.is_zero() {
            return MultiRatFunc::zero();
        }
        let (kn, n) = self.n.int_content_pp();
        let (kd, d) = self.d.int_content_pp();
        MultiRatFunc { scale: self.scale * Rational::new(kn, kd), n, d }
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn num_int(&self) -> &BiPoly {
        &self.n
    }

    pub fn den_int(&self) -> &BiPoly {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.scale)
    }

    pub fn is_constant(&self) -> bool {
        self.n.is_constant() && self.d.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        self.is_constant().then(|| self.scale.clone())
    }

    /// The value as a function of `t₁` alone, if `t₂` does not occur.
    pub fn as_t1(&self, var: super::Var) -> Option<RatFunc> {
        if self.n.deg_t2() > 0 || self.d.deg_t2() > 0 {
            return None;
        }
        let n = self.n.coeffs()[0].scale(self.scale.numer());
        let d = self.d.coeffs()[0].scale(self.scale.denom());
        RatFunc::from_int_polys(var, &n, &d).ok()
    }

    pub fn eval(&self, t1: &Rational, t2: &Rational) -> Result<Rational, AlgebraError> {
        let dv = self.d.eval(t1, t2);
        if Zero::is_zero(&dv) {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(&self.scale * self.n.eval(t1, t2) / dv)
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (p1, q1) = (self.scale.numer(), self.scale.denom());
        let (p2, q2) = (o.scale.numer(), o.scale.denom());
        if self.d == o.d {
            let m = self.n.scale(&(p1 * q2)).add_ref(&o.n.scale(&(p2 * q1)));
            if m.is_zero() {
                return MultiRatFunc::zero();
            }
            let (k, mp) = m.int_content_pp();
            return MultiRatFunc::from_parts(Rational::new(k, q1 * q2), mp, self.d.clone());
        }
        let (g, e1, e2) = BiPoly::gcd_cofactors(&self.d, &o.d);
        let m = self.n.mul_ref(&e2).scale(&(p1 * q2)).add_ref(&o.n.mul_ref(&e1).scale(&(p2 * q1)));
        if m.is_zero() {
            return MultiRatFunc::zero();
        }
        let (k, mp) = m.int_content_pp();
        let scale = Rational::new(k, q1 * q2);
        if g.is_one() {
            let d = self.d.mul_ref(&o.d);
            return MultiRatFunc { scale, n: mp, d };
        }
        let (_, mp, g_rest) = BiPoly::gcd_cofactors(&mp, &g);
        let d = g_rest.mul_ref(&e1).mul_ref(&e2);
        MultiRatFunc { scale, n: mp, d }.canonical_sign()
    }

    pub fn neg_ref(&self) -> Self {
        MultiRatFunc { scale: -&self.scale, ..self.clone() }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return MultiRatFunc::zero();
        }
        let scale = &self.scale * &o.scale;
        let (_, n1, d2) = BiPoly::gcd_cofactors(&self.n, &o.d);
        let (_, n2, d1) = BiPoly::gcd_cofactors(&o.n, &self.d);
        MultiRatFunc { scale, n: n1.mul_ref(&n2), d: d1.mul_ref(&d2) }.canonical_sign()
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(MultiRatFunc { scale: self.scale.recip(), n: self.d.clone(), d: self.n.clone() })
    }

    /// Substitutes polynomials in a single variable for both `t₁` and `t₂`;
    /// used to specialise onto curves and lines.
    pub fn substitute_univariate(&self, t1: &IntPoly, t2: &IntPoly) -> (IntPoly, IntPoly) {
        let ev = |p: &BiPoly| {
            let mut acc = IntPoly::zero();
            for c in p.coeffs().iter().rev() {
                let mut inner = IntPoly::zero();
                for k in c.coeffs().iter().rev() {
                    inner = inner.mul_ref(t1).add_ref(&IntPoly::constant(k.clone()));
                }
                acc = acc.mul_ref(t2).add_ref(&inner);
            }
            acc
        };
        (ev(&self.n).scale(self.scale.numer()), ev(&self.d).scale(self.scale.denom()))
    }
}

forward_field_ops!(MultiRatFunc);

impl Field for MultiRatFunc {
    fn zero_like(&self) -> Self {
        MultiRatFunc::zero()
    }
    fn one_like(&self) -> Self {
        MultiRatFunc::one()
    }
    fn is_zero(&self) -> bool {
        MultiRatFunc::is_zero(self)
    }
    fn inv(&self) -> Result<Self, AlgebraError> {
        MultiRatFunc::inv(self)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        MultiRatFunc::constant(q.clone())
    }
    fn try_sqrt(&self) -> Option<Self> {
        let s = super::field::rational_sqrt(self.constant_value().as_ref()?)?;
        Some(MultiRatFunc::constant(s))
    }
    fn is_one(&self) -> bool {
        One::is_one(&self.scale) && self.n.is_one() && self.d.is_one()
    }
}

impl fmt::Debug for MultiRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiRatFunc({self})")
    }
}

impl fmt::Display for MultiRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lc = Rational::from_integer(self.d.glex_lc().cloned().unwrap_or_else(BigInt::one));
        let num = self.n.format_scaled(&(&self.scale / &lc), "t1", "t2");
        if self.d.is_constant() {
            return f.write_str(&num);
        }
        let den = self.d.format_scaled(&lc.recip(), "t1", "t2");
        let num = if num.contains(' ') { format!("({num})") } else { num };
        let den = if den.contains(' ') || den.contains('*') { format!("({den})") } else { den };
        write!(f, "{num} / {den}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bp(t: &[(usize, usize, i64)]) -> BiPoly {
        BiPoly::from_terms(t)
    }

    #[test]
    fn normalizes_common_factors_and_denominator() {
        // (t1^2 - t2^2) / (2 t1 - 2 t2) = (t1 + t2) / 2
        let a = MultiRatFunc::from_bipolys(&bp(&[(2, 0, 1), (0, 2, -1)]), &bp(&[(1, 0, 2), (0, 1, -2)])).unwrap();
        assert_eq!(a, MultiRatFunc::from_bipolys(&bp(&[(1, 0, 1), (0, 1, 1)]), &bp(&[(0, 0, 2)])).unwrap());
        assert_eq!(a.to_string(), "1/2*t1 + 1/2*t2");
        let b = MultiRatFunc::from_bipolys(&bp(&[(0, 0, 1)]), &bp(&[(0, 1, -3), (1, 0, 1)])).unwrap();
        assert_eq!(b.to_string(), "1 / (t1 - 3*t2)");
    }

    fn arb_bipoly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec((0usize..3, 0usize..3, -4i64..4), 0..4).prop_map(|t| BiPoly::from_terms(&t))
    }

    fn arb_mrf() -> impl Strategy<Value = MultiRatFunc> {
        (arb_bipoly(), arb_bipoly().prop_filter("nonzero", |p| !p.is_zero()))
            .prop_map(|(p, q)| MultiRatFunc::from_bipolys(&p, &q).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn canonical_under_common_factor(p in arb_bipoly(), q in arb_bipoly(), r in arb_bipoly()) {
            prop_assume!(!q.is_zero() && !r.is_zero());
            let a = MultiRatFunc::from_bipolys(&p.mul_ref(&r), &q.mul_ref(&r)).unwrap();
            let b = MultiRatFunc::from_bipolys(&p, &q).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn field_axioms(u in arb_mrf(), v in arb_mrf(), w in arb_mrf()) {
            prop_assert_eq!(u.mul_ref(&v.add_ref(&w)), u.mul_ref(&v).add_ref(&u.mul_ref(&w)));
            prop_assert_eq!(u.add_ref(&v).sub_ref(&v), u.clone());
            if !u.is_zero() {
                prop_assert!(Field::is_one(&u.mul_ref(&u.inv().unwrap())));
            }
        }
    }
}
