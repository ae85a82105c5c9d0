use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{AlgebraError, Field, Rational, Var};

/// The data `h² = D` of a quadratic extension. `D` must not be a square in
/// the base field; this is detected lazily when an inverse is taken.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadModulus<F: Field> {
    pub d: F,
    pub name: Var,
}

/// `a + b·h` in `Base[h]/(h² − D)`.
#[derive(Clone)]
pub struct QuadExt<F: Field> {
    a: F,
    b: F,
    m: Arc<QuadModulus<F>>,
}

impl<F: Field> QuadExt<F> {
    pub fn new(a: F, b: F, m: &Arc<QuadModulus<F>>) -> Self {
        QuadExt { a, b, m: Arc::clone(m) }
    }

    /// Builds the modulus for `h² = d`.
    pub fn modulus(d: F, name: &str) -> Arc<QuadModulus<F>> {
        Arc::new(QuadModulus { d, name: Var::new(name) })
    }

    pub fn from_base(a: F, m: &Arc<QuadModulus<F>>) -> Self {
        let b = a.zero_like();
        QuadExt::new(a, b, m)
    }

    /// The generator `h`.
    pub fn generator(m: &Arc<QuadModulus<F>>) -> Self {
        QuadExt::new(m.d.zero_like(), m.d.one_like(), m)
    }

    pub fn a(&self) -> &F {
        &self.a
    }

    pub fn b(&self) -> &F {
        &self.b
    }

    pub fn modulus_data(&self) -> &Arc<QuadModulus<F>> {
        &self.m
    }

    pub fn d(&self) -> &F {
        &self.m.d
    }

    /// `a − b·h`.
    pub fn conjugate(&self) -> Self {
        QuadExt::new(self.a.clone(), -self.b.clone(), &self.m)
    }

    /// `a² − b²·D`.
    pub fn norm(&self) -> F {
        self.a.square() - &(self.b.square() * &self.m.d)
    }

    pub fn in_base(&self) -> Option<&F> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn scale(&self, k: &F) -> Self {
        QuadExt::new(self.a.clone() * k, self.b.clone() * k, &self.m)
    }

    fn add_ref(&self, o: &Self) -> Self {
        QuadExt::new(self.a.clone() + &o.a, self.b.clone() + &o.b, &self.m)
    }

    fn sub_ref(&self, o: &Self) -> Self {
        QuadExt::new(self.a.clone() - &o.a, self.b.clone() - &o.b, &self.m)
    }

    fn neg_ref(&self) -> Self {
        QuadExt::new(-self.a.clone(), -self.b.clone(), &self.m)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.b.is_zero() {
            return QuadExt::new(o.a.clone() * &self.a, o.b.clone() * &self.a, &self.m);
        }
        if o.b.is_zero() {
            return QuadExt::new(self.a.clone() * &o.a, self.b.clone() * &o.a, &self.m);
        }
        let bb = self.b.clone() * &o.b;
        let a = self.a.clone() * &o.a + &(bb * &self.m.d);
        let b = self.a.clone() * &o.b + &(self.b.clone() * &o.a);
        QuadExt::new(a, b, &self.m)
    }
}

impl<F: Field> PartialEq for QuadExt<F> {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (Arc::ptr_eq(&self.m, &o.m) || self.m == o.m)
    }
}

macro_rules! quad_binop {
    ($tr:ident, $f:ident, $imp:ident) => {
        impl<F: Field> $tr for QuadExt<F> {
            type Output = QuadExt<F>;
            fn $f(self, rhs: QuadExt<F>) -> QuadExt<F> {
                self.$imp(&rhs)
            }
        }
        impl<'a, F: Field> $tr<&'a QuadExt<F>> for QuadExt<F> {
            type Output = QuadExt<F>;
            fn $f(self, rhs: &'a QuadExt<F>) -> QuadExt<F> {
                self.$imp(rhs)
            }
        }
        impl<'a, 'b, F: Field> $tr<&'b QuadExt<F>> for &'a QuadExt<F> {
            type Output = QuadExt<F>;
            fn $f(self, rhs: &'b QuadExt<F>) -> QuadExt<F> {
                self.$imp(rhs)
            }
        }
    };
}
quad_binop!(Add, add, add_ref);
quad_binop!(Sub, sub, sub_ref);
quad_binop!(Mul, mul, mul_ref);

impl<F: Field> Neg for QuadExt<F> {
    type Output = QuadExt<F>;
    fn neg(self) -> QuadExt<F> {
        self.neg_ref()
    }
}

impl<'a, F: Field> Neg for &'a QuadExt<F> {
    type Output = QuadExt<F>;
    fn neg(self) -> QuadExt<F> {
        self.neg_ref()
    }
}

impl<F: Field> Field for QuadExt<F> {
    fn zero_like(&self) -> Self {
        QuadExt::new(self.a.zero_like(), self.a.zero_like(), &self.m)
    }
    fn one_like(&self) -> Self {
        QuadExt::new(self.a.one_like(), self.a.zero_like(), &self.m)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    /// `(a + bh)⁻¹ = (a − bh) / (a² − b²D)`.
    fn inv(&self) -> Result<Self, AlgebraError> {
        if Field::is_zero(self) {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(QuadExt::new(self.a.inv()?, self.b.clone(), &self.m));
        }
        let n = self.norm();
        let ni = match n.inv() {
            Ok(x) => x,
            Err(_) => return Err(AlgebraError::DegenerateExtension(self.to_string())),
        };
        Ok(QuadExt::new(self.a.clone() * &ni, -(self.b.clone() * &ni), &self.m))
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        QuadExt::from_base(self.a.from_rational_like(q), &self.m)
    }
    fn try_sqrt(&self) -> Option<Self> {
        if !self.b.is_zero() {
            return None;
        }
        Some(QuadExt::from_base(self.a.try_sqrt()?, &self.m))
    }
    fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }
}

impl<F: Field> fmt::Debug for QuadExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadExt({self})")
    }
}

impl<F: Field> fmt::Display for QuadExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = &self.m.name;
        let wrap = |s: String| if s.contains(' ') || s.contains('/') { format!("({s})") } else { s };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) if self.b.is_one() => write!(f, "{h}"),
            (true, false) => write!(f, "{}*{h}", wrap(self.b.to_string())),
            (false, false) => {
                let b = if self.b.is_one() { h.to_string() } else { format!("{}*{h}", wrap(self.b.to_string())) };
                write!(f, "{} + {b}", wrap(self.a.to_string()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RatFunc;
    use proptest::prelude::*;

    fn d() -> RatFunc {
        RatFunc::from_i64s("t", &[1, 1, 0, 1], &[1]).unwrap()
    }

    fn rf(n: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::from_i64s("t", n, den).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let m = QuadExt::modulus(d(), "h");
        let one = QuadExt::from_base(rf(&[1], &[1]), &m);
        assert_eq!(one.inv().unwrap(), one);
        let h = QuadExt::generator(&m);
        assert_eq!(h.inv().unwrap(), QuadExt::new(rf(&[0], &[1]), d().inv().unwrap(), &m));
        // (t + h)^{-1} = (t - h) / (t^2 - t^3 - t - 1), checked by multiplying back.
        let e = QuadExt::new(rf(&[0, 1], &[1]), rf(&[1], &[1]), &m);
        let den = rf(&[-1, -1, 1, -1], &[1]);
        let expected = QuadExt::new(rf(&[0, 1], &[1]) * &den.inv().unwrap(), rf(&[-1], &[1]) * &den.inv().unwrap(), &m);
        assert_eq!(e.inv().unwrap(), expected);
        assert!(Field::is_one(&(e * &expected)));
    }

    #[test]
    fn square_modulus_is_degenerate() {
        let m = QuadExt::modulus(rf(&[0, 0, 1], &[1]), "h");
        let e = QuadExt::new(rf(&[0, 1], &[1]), rf(&[1], &[1]), &m);
        assert!(matches!(e.inv(), Err(AlgebraError::DegenerateExtension(_))));
        let z = QuadExt::from_base(rf(&[0], &[1]), &m);
        assert_eq!(z.inv(), Err(AlgebraError::DivisionByZero));
    }

    fn arb_rf() -> impl Strategy<Value = RatFunc> {
        (prop::collection::vec(-5i64..5, 0..4), prop::collection::vec(-5i64..5, 1..3))
            .prop_filter("nonzero den", |(_, q)| q.iter().any(|&x| x != 0))
            .prop_map(|(p, q)| rf(&p, &q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms_over_rational_functions(a in arb_rf(), b in arb_rf(), c in arb_rf(), e in arb_rf(), g in arb_rf(), k in arb_rf()) {
            let m = QuadExt::modulus(d(), "h");
            let x = QuadExt::new(a, b, &m);
            let y = QuadExt::new(c, e, &m);
            let z = QuadExt::new(g, k, &m);
            prop_assert_eq!((x.clone() * &y) * &z, x.clone() * &(y.clone() * &z));
            prop_assert_eq!(x.clone() * &(y.clone() + &z), x.clone() * &y + &(x.clone() * &z));
            if !Field::is_zero(&x) {
                prop_assert!(Field::is_one(&(x.clone() * &x.inv().unwrap())));
            }
        }
    }
}
