use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{forward_field_ops, rational_sqrt};
use super::{AlgebraError, Field, IntPoly, LaurentSeries, Rational, UniPoly, Var};

/// An element of ℚ(t) in canonical reduced form.
///
/// Stored as `scale · n / d` where `n` and `d` are primitive integer
/// polynomials with positive leading coefficients and `gcd(n, d) = 1`; zero
/// is `scale = 0, n = d = 1`. The public view ([`RatFunc::num`],
/// [`RatFunc::den`]) is the equivalent fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    var: Var,
    scale: Rational,
    n: IntPoly,
    d: IntPoly,
}

/// `ord_{t⁻¹}`, with `Infinite` for the zero function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("+inf"),
        }
    }
}

/// The value of a rational function at `t = ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValueAtInfinity {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for ValueAtInfinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueAtInfinity::Finite(q) => write!(f, "{q}"),
            ValueAtInfinity::Infinite => f.write_str("inf"),
        }
    }
}

impl RatFunc {
    /// Canonical form of `num / den`.
    pub fn new(num: &UniPoly, den: &UniPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let var = if num.var() == den.var() || den.is_constant() {
            num.var().clone()
        } else if num.is_constant() {
            den.var().clone()
        } else {
            return Err(AlgebraError::VariableMismatch(num.var().to_string(), den.var().to_string()));
        };
        let (sn, n) = num.to_int_poly();
        let (sd, d) = den.to_int_poly();
        Ok(RatFunc::from_parts(var, sn / sd, n, d))
    }

    /// `scale · n / d` for primitive `n`, `d` with positive leading
    /// coefficients; cancels their gcd.
    fn from_parts(var: Var, scale: Rational, n: IntPoly, d: IntPoly) -> Self {
        if Zero::is_zero(&scale) || n.is_zero() {
            return RatFunc::zero(var);
        }
        let (_, n, d) = IntPoly::gcd_cofactors(&n, &d);
        RatFunc { var, scale, n, d }
    }

    /// `p / q` for integer polynomials, `q` nonzero.
    pub fn from_int_polys(var: Var, p: &IntPoly, q: &IntPoly) -> Result<Self, AlgebraError> {
        if q.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let (cp, p) = p.content_pp();
        let (cq, q) = q.content_pp();
        if cp.is_zero() {
            return Ok(RatFunc::zero(var));
        }
        Ok(RatFunc::from_parts(var, Rational::new(cp, cq), p, q))
    }

    pub fn from_poly(p: &UniPoly) -> Self {
        let (s, n) = p.to_int_poly();
        RatFunc::from_parts(p.var().clone(), s, n, IntPoly::one())
    }

    /// Convenience constructor from integer coefficient lists (little-endian).
    pub fn from_i64s(var: &str, num: &[i64], den: &[i64]) -> Result<Self, AlgebraError> {
        RatFunc::from_int_polys(Var::new(var), &IntPoly::from_i64s(num), &IntPoly::from_i64s(den))
    }

    pub fn zero(var: Var) -> Self {
        RatFunc { var, scale: Rational::zero(), n: IntPoly::one(), d: IntPoly::one() }
    }

    pub fn one(var: Var) -> Self {
        RatFunc::constant(var, Rational::one())
    }

    pub fn constant(var: Var, q: Rational) -> Self {
        if Zero::is_zero(&q) {
            return RatFunc::zero(var);
        }
        RatFunc { var, scale: q, n: IntPoly::one(), d: IntPoly::one() }
    }

    pub fn from_int(var: Var, k: i64) -> Self {
        RatFunc::constant(var, Rational::from_integer(BigInt::from(k)))
    }

    /// The function `t` itself.
    pub fn variable(var: Var) -> Self {
        RatFunc { var, scale: Rational::one(), n: IntPoly::x(), d: IntPoly::one() }
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    /// Same value with the variable renamed.
    pub fn with_var(&self, var: Var) -> Self {
        RatFunc { var, ..self.clone() }
    }

    /// Numerator over the monic denominator.
    pub fn num(&self) -> UniPoly {
        let lc = Rational::from_integer(self.d.lc().unwrap().clone());
        UniPoly::from_int_poly(self.var.clone(), &(&self.scale / lc), &self.n)
    }

    /// Monic denominator.
    pub fn den(&self) -> UniPoly {
        let lc = Rational::from_integer(self.d.lc().unwrap().clone());
        UniPoly::from_int_poly(self.var.clone(), &lc.recip(), &self.d)
    }

    /// The internal `(scale, n, d)` triple.
    pub fn parts(&self) -> (&Rational, &IntPoly, &IntPoly) {
        (&self.scale, &self.n, &self.d)
    }

    /// `(p, q)` integer polynomials with `self = p / q`, `gcd(p, q) = 1`, `q`
    /// primitive with positive leading coefficient.
    pub fn integer_fraction(&self) -> (IntPoly, IntPoly) {
        let p = self.n.scale(self.scale.numer());
        let q = self.d.scale(self.scale.denom());
        (p, q)
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.scale)
    }

    pub fn is_constant(&self) -> bool {
        self.n.is_constant() && self.d.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.d.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        self.is_constant().then(|| self.scale.clone())
    }

    pub fn deg_num(&self) -> i64 {
        if self.is_zero() {
            -1
        } else {
            self.n.deg()
        }
    }

    pub fn deg_den(&self) -> i64 {
        self.d.deg()
    }

    /// `ord_{t⁻¹}(u) = deg den − deg num`.
    pub fn ord_t_inverse(&self) -> Order {
        if self.is_zero() {
            Order::Infinite
        } else {
            Order::Finite(self.d.deg() - self.n.deg())
        }
    }

    pub fn value_at_infinity(&self) -> ValueAtInfinity {
        match self.ord_t_inverse() {
            Order::Infinite => ValueAtInfinity::Finite(Rational::zero()),
            Order::Finite(k) if k > 0 => ValueAtInfinity::Finite(Rational::zero()),
            Order::Finite(k) if k < 0 => ValueAtInfinity::Infinite,
            Order::Finite(_) => ValueAtInfinity::Finite(
                &self.scale * Rational::new(self.n.lc().unwrap().clone(), self.d.lc().unwrap().clone()),
            ),
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, AlgebraError> {
        let dv = self.d.eval_rational(x);
        if Zero::is_zero(&dv) {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(&self.scale * self.n.eval_rational(x) / dv)
    }

    /// Laurent expansion in `u = 1/t` to absolute precision `prec`.
    pub fn expand_at_infinity(&self, u: Var, prec: i64) -> LaurentSeries<Rational> {
        let zero = Rational::zero();
        if self.is_zero() {
            return LaurentSeries::zero_series(u, zero, prec);
        }
        let shift = self.d.deg() - self.n.deg();
        let num = LaurentSeries::from_coeffs(
            u.clone(),
            zero.clone(),
            0,
            self.n.reversed().coeffs().iter().map(|c| &self.scale * Rational::from_integer(c.clone())).collect(),
            prec - shift,
        );
        let den = LaurentSeries::from_coeffs(
            u,
            zero,
            0,
            self.d.reversed().coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect(),
            prec - shift,
        );
        num.try_div(&den).expect("reversed denominator has a nonzero constant term").shift(shift)
    }

    fn joint_var(&self, o: &Self) -> Var {
        if self.var == o.var || o.is_constant() {
            self.var.clone()
        } else if self.is_constant() {
            o.var.clone()
        } else {
            panic!("variable mismatch: {} vs {}", self.var, o.var)
        }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let var = self.joint_var(o);
        if self.is_zero() {
            return o.with_var(var);
        }
        if o.is_zero() {
            return self.with_var(var);
        }
        let (p1, q1) = (self.scale.numer(), self.scale.denom());
        let (p2, q2) = (o.scale.numer(), o.scale.denom());
        if self.d == o.d {
            let m = self.n.scale(&(p1 * q2)).add_ref(&o.n.scale(&(p2 * q1)));
            if m.is_zero() {
                return RatFunc::zero(var);
            }
            let (c, mp) = m.content_pp();
            let scale = Rational::new(c, q1 * q2);
            return RatFunc::from_parts(var, scale, mp, self.d.clone());
        }
        let (g, e1, e2) = IntPoly::gcd_cofactors(&self.d, &o.d);
        let m = self.n.mul_ref(&e2).scale(&(p1 * q2)).add_ref(&o.n.mul_ref(&e1).scale(&(p2 * q1)));
        if m.is_zero() {
            return RatFunc::zero(var);
        }
        let (c, mp) = m.content_pp();
        let scale = Rational::new(c, q1 * q2);
        if g.is_one() {
            return RatFunc { var, scale, n: mp, d: self.d.mul_ref(&o.d) };
        }
        // Only factors of g can cancel.
        let (_, mp, g_rest) = IntPoly::gcd_cofactors(&mp, &g);
        let d = g_rest.mul_ref(&e1).mul_ref(&e2);
        RatFunc { var, scale, n: mp, d }
    }

    pub fn neg_ref(&self) -> Self {
        RatFunc { scale: -&self.scale, ..self.clone() }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let var = self.joint_var(o);
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(var);
        }
        let scale = &self.scale * &o.scale;
        let (_, n1, d2) = IntPoly::gcd_cofactors(&self.n, &o.d);
        let (_, n2, d1) = IntPoly::gcd_cofactors(&o.n, &self.d);
        RatFunc { var, scale, n: n1.mul_ref(&n2), d: d1.mul_ref(&d2) }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFunc { var: self.var.clone(), scale: self.scale.recip(), n: self.d.clone(), d: self.n.clone() })
    }

    /// Integer power, negative exponents allowed for nonzero `self`.
    pub fn powi(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(Field::pow(&base, e.unsigned_abs() as u32))
    }

    /// Square root in ℚ(t), if the function is a square there.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let s = rational_sqrt(&self.scale)?;
        let n = poly_sqrt(&self.n)?;
        let d = poly_sqrt(&self.d)?;
        Some(RatFunc { var: self.var.clone(), scale: s, n, d })
    }
}

/// Square root of a primitive polynomial with positive leading coefficient.
fn poly_sqrt(p: &IntPoly) -> Option<IntPoly> {
    if p.is_constant() {
        return Some(p.clone());
    }
    let mut r = IntPoly::one();
    for (f, m) in p.squarefree_decomposition() {
        if m % 2 == 1 {
            return None;
        }
        for _ in 0..m / 2 {
            r = r.mul_ref(&f);
        }
    }
    Some(r)
}

forward_field_ops!(RatFunc);

impl Field for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.var.clone())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.var.clone())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn inv(&self) -> Result<Self, AlgebraError> {
        RatFunc::inv(self)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        RatFunc::constant(self.var.clone(), q.clone())
    }
    fn try_sqrt(&self) -> Option<Self> {
        self.sqrt()
    }
    fn is_one(&self) -> bool {
        One::is_one(&self.scale) && self.n.is_one() && self.d.is_one()
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num().to_string();
        if self.d.is_constant() {
            return f.write_str(&num);
        }
        let den = self.den().to_string();
        let wrap = |s: &str| if s.contains(' ') || s.contains('*') { format!("({s})") } else { s.to_string() };
        let num = if num.contains(' ') { format!("({num})") } else { num };
        write!(f, "{num} / {}", wrap(&den))
    }
}
