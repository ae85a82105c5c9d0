use std::fmt;

use super::{AlgebraError, BiPoly, Field, IntPoly, MultiRatFunc, QuadExt, RatFunc, Rational, Var};

/// First precision tried by [`series_expand`].
pub const START_SERIES_PRECISION: i64 = 8;
/// Precision at which [`series_expand`] gives up.
pub const MAX_SERIES_PRECISION: i64 = 512;
/// Precision of series known exactly (polynomials). All precisions are
/// clamped to this so exponent arithmetic cannot overflow.
pub const EXACT: i64 = i64::MAX / 8;

/// A truncated Laurent series `Σ cₖ uᵏ + O(u^N)`.
///
/// Invariants: if `coeffs` is nonempty its first entry (the coefficient at
/// `lead`) is nonzero, and `lead + coeffs.len() ≤ N`. The zero series has no
/// coefficients and `lead = N`, so its valuation is "at least N".
#[derive(Clone, PartialEq)]
pub struct LaurentSeries<F: Field> {
    var: Var,
    zero: F,
    lead: i64,
    coeffs: Vec<F>,
    prec: i64,
}

impl<F: Field> LaurentSeries<F> {
    /// `O(u^prec)`. `zero` is the zero of the coefficient field.
    pub fn zero_series(var: Var, zero: F, prec: i64) -> Self {
        let prec = prec.min(EXACT);
        LaurentSeries { var, zero, lead: prec, coeffs: Vec::new(), prec }
    }

    /// `Σ coeffs[i] u^(lead+i) + O(u^prec)`; terms at or beyond `prec` are
    /// dropped.
    pub fn from_coeffs(var: Var, zero: F, lead: i64, mut coeffs: Vec<F>, prec: i64) -> Self {
        let prec = prec.min(EXACT);
        let keep = (prec - lead).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        let mut s = LaurentSeries { var, zero, lead, coeffs, prec };
        s.normalize();
        s
    }

    pub fn constant(var: Var, c: F, prec: i64) -> Self {
        let zero = c.zero_like();
        LaurentSeries::from_coeffs(var, zero, 0, vec![c], prec)
    }

    /// The uniformizer `u + O(u^prec)`.
    pub fn uniformizer(var: Var, zero: F, prec: i64) -> Self {
        let one = zero.one_like();
        LaurentSeries::from_coeffs(var, zero, 1, vec![one], prec)
    }

    fn normalize(&mut self) {
        let nz = self.coeffs.iter().position(|c| !c.is_zero());
        match nz {
            None => {
                self.coeffs.clear();
                self.lead = self.prec;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.lead += k as i64;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    /// Exponent of the first stored coefficient (equals the precision for a
    /// series with no known nonzero term).
    pub fn lead_exponent(&self) -> i64 {
        self.lead
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Exponent of the first nonzero coefficient, if one is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.lead)
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `u^e`; `e` must be below the precision.
    pub fn coeff(&self, e: i64) -> F {
        assert!(e < self.prec, "coefficient u^{e} is beyond O(u^{})", self.prec);
        if e < self.lead {
            return self.zero.clone();
        }
        self.coeffs.get((e - self.lead) as usize).cloned().unwrap_or_else(|| self.zero.clone())
    }

    fn zero_elem(&self) -> &F {
        &self.zero
    }

    /// `u^k · self`.
    pub fn shift(mut self, k: i64) -> Self {
        self.lead += k;
        self.prec += k;
        self
    }

    /// Drops every term at or beyond `prec`, which may not exceed the known precision.
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        LaurentSeries::from_coeffs(self.var.clone(), self.zero.clone(), self.lead, self.coeffs.clone(), prec)
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let lead = self.lead.min(o.lead).min(prec);
        let end = self.known_end().max(o.known_end()).min(prec);
        let coeffs = (lead..end).map(|e| self.coeff_or_zero(e) + &o.coeff_or_zero(e)).collect();
        LaurentSeries::from_coeffs(self.var.clone(), self.zero.clone(), lead, coeffs, prec)
    }

    fn known_end(&self) -> i64 {
        if self.coeffs.is_empty() {
            i64::MIN
        } else {
            self.lead + self.coeffs.len() as i64
        }
    }

    fn coeff_or_zero(&self, e: i64) -> F {
        if e < self.lead || e >= self.lead + self.coeffs.len() as i64 {
            self.zero.clone()
        } else {
            self.coeffs[(e - self.lead) as usize].clone()
        }
    }

    pub fn neg_ref(&self) -> Self {
        LaurentSeries {
            var: self.var.clone(),
            zero: self.zero.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            prec: self.prec,
        }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    /// Product; its precision is `min(N₁ + v₂, N₂ + v₁)`.
    pub fn mul_ref(&self, o: &Self) -> Self {
        let prec = (self.prec + o.lead).min(o.prec + self.lead);
        let lead = self.lead + o.lead;
        if self.is_zero() || o.is_zero() {
            return LaurentSeries::zero_series(self.var.clone(), self.zero.clone(), prec);
        }
        let n = (prec - lead).clamp(0, (self.coeffs.len() + o.coeffs.len() - 1) as i64) as usize;
        let mut out = vec![self.zero.clone(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] = std::mem::replace(&mut out[i + j], self.zero.clone()) + &(a.clone() * b);
                }
            }
        }
        LaurentSeries::from_coeffs(self.var.clone(), self.zero.clone(), lead, out, prec)
    }

    pub fn scale(&self, k: &F) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * k).collect();
        LaurentSeries::from_coeffs(self.var.clone(), self.zero.clone(), self.lead, coeffs, self.prec)
    }

    /// Reciprocal, keeping the relative precision. The series must not be
    /// exact.
    pub fn inv(&self) -> Result<Self, AlgebraError> {
        self.inv_relative(self.prec - self.lead)
    }

    /// Reciprocal to relative precision at most `rel`.
    fn inv_relative(&self, rel: i64) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::SeriesNotInvertible(self.prec));
        }
        let rel = rel.min(self.prec - self.lead);
        assert!(rel < EXACT / 2, "inverse of an exact series needs a target precision");
        let rel = rel as usize;
        let a0_inv = self.coeffs[0].inv()?;
        let mut b: Vec<F> = Vec::with_capacity(rel);
        b.push(a0_inv.clone());
        for k in 1..rel {
            let mut acc = self.zero.clone();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc = acc + &(self.coeffs[i].clone() * &b[k - i]);
            }
            b.push(-(acc * &a0_inv));
        }
        Ok(LaurentSeries::from_coeffs(self.var.clone(), self.zero.clone(), -self.lead, b, rel as i64 - self.lead))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            if o.is_zero() {
                return Err(AlgebraError::SeriesNotInvertible(o.prec));
            }
            return Ok(LaurentSeries::zero_series(self.var.clone(), self.zero.clone(), self.prec - o.lead));
        }
        Ok(self.mul_ref(&o.inv_relative(self.prec - self.lead)?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentSeries::constant(self.var.clone(), self.zero.one_like(), EXACT);
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// The square root whose constant term is the field's canonical root of
    /// the constant term of `self`.
    pub fn sqrt(&self) -> Result<Self, AlgebraError> {
        if self.lead != 0 || self.is_zero() {
            return Err(AlgebraError::NotASquareConstantTerm);
        }
        let r0 = self.coeffs[0].try_sqrt().ok_or(AlgebraError::NotASquareConstantTerm)?;
        assert!(self.prec < EXACT / 2, "square root of an exact series needs a target precision");
        let two_r0_inv = (r0.clone() + &r0).inv()?;
        let n = self.prec.max(0) as usize;
        let mut r: Vec<F> = Vec::with_capacity(n);
        r.push(r0);
        for k in 1..n {
            let mut acc = self.coeff_or_zero(k as i64);
            for i in 1..k {
                acc = acc - &(r[i].clone() * &r[k - i]);
            }
            r.push(acc * &two_r0_inv);
        }
        Ok(LaurentSeries::from_coeffs(self.var.clone(), self.zero.clone(), 0, r, self.prec))
    }

    /// Evaluates an integer polynomial at this series.
    pub fn eval_int_poly(&self, p: &IntPoly) -> Self {
        let mut acc = LaurentSeries::zero_series(self.var.clone(), self.zero.clone(), EXACT);
        for c in p.coeffs().iter().rev() {
            let k = self.zero.from_rational_like(&Rational::from_integer(c.clone()));
            acc = acc.mul_ref(self).add_ref(&LaurentSeries::constant(self.var.clone(), k, EXACT));
        }
        acc
    }
}

impl<F: Field> fmt::Debug for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries({self})")
    }
}

impl<F: Field> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.var.as_str();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.lead + i as i64;
            let mono = match e {
                0 => String::new(),
                1 => u.to_string(),
                _ => format!("{u}^{e}"),
            };
            let cs = c.to_string();
            let simple = !cs[1..].contains([' ', '+', '-', '/']) || is_plain_rational(&cs);
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            let body = if simple { body } else { format!("({body})") };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (mono.is_empty(), body == "1") {
                (true, _) => f.write_str(&body)?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{body}*{mono}")?,
            }
        }
        if first {
            write!(f, "O({u}^{})", self.prec)
        } else {
            write!(f, " + O({u}^{})", self.prec)
        }
    }
}

fn is_plain_rational(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '/')
}

/// Values that expand as Laurent series once each generator has a series.
pub trait SeriesExpand<F: Field> {
    type Subst;

    /// Expansion to absolute precision at most `prec`.
    fn expand(&self, subst: &Self::Subst, prec: i64) -> Result<LaurentSeries<F>, AlgebraError>;

    /// Exact zero test on the value itself.
    fn is_zero_value(&self) -> bool;
}

/// Series for `t₁` and `t₂`.
#[derive(Clone, Debug)]
pub struct BivariateSubst<F: Field> {
    pub t1: LaurentSeries<F>,
    pub t2: LaurentSeries<F>,
}

/// Series for the base generators plus the extension generator `h`.
#[derive(Clone, Debug)]
pub struct QuadSubst<S, F: Field> {
    pub base: S,
    pub h: LaurentSeries<F>,
}

impl<F: Field> SeriesExpand<F> for RatFunc {
    type Subst = LaurentSeries<F>;

    fn expand(&self, t: &LaurentSeries<F>, prec: i64) -> Result<LaurentSeries<F>, AlgebraError> {
        let (p, q) = self.integer_fraction();
        let den = t.eval_int_poly(&q);
        let num = t.eval_int_poly(&p).truncate(prec + den.lead_exponent());
        Ok(num.try_div(&den)?.truncate(prec))
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

fn eval_bipoly<F: Field>(p: &BiPoly, s: &BivariateSubst<F>) -> LaurentSeries<F> {
    let zero = s.t1.zero_elem().clone();
    let mut acc = LaurentSeries::zero_series(s.t1.var().clone(), zero, EXACT);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul_ref(&s.t2).add_ref(&s.t1.eval_int_poly(c));
    }
    acc
}

impl<F: Field> SeriesExpand<F> for MultiRatFunc {
    type Subst = BivariateSubst<F>;

    fn expand(&self, s: &BivariateSubst<F>, prec: i64) -> Result<LaurentSeries<F>, AlgebraError> {
        let den = eval_bipoly(self.den_int(), s);
        let num = eval_bipoly(self.num_int(), s).truncate(prec + den.lead_exponent());
        let k = s.t1.zero_elem().from_rational_like(self.scale());
        Ok(num.try_div(&den)?.scale(&k).truncate(prec))
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl<F: Field, E: Field + SeriesExpand<F>> SeriesExpand<F> for QuadExt<E> {
    type Subst = QuadSubst<E::Subst, F>;

    fn expand(&self, s: &Self::Subst, prec: i64) -> Result<LaurentSeries<F>, AlgebraError> {
        let a = self.a().expand(&s.base, prec)?;
        if self.b().is_zero() {
            return Ok(a);
        }
        let b = self.b().expand(&s.base, prec)?;
        Ok(a.add_ref(&b.mul_ref(&s.h)).truncate(prec))
    }

    fn is_zero_value(&self) -> bool {
        Field::is_zero(self)
    }
}

/// Expands a nonzero value to the first precision (8, 16, …, 512) at which a
/// nonzero coefficient appears. `subst_at(N)` builds the generator series
/// to precision `N`.
pub fn series_expand<F, E, G>(e: &E, subst_at: G) -> Result<LaurentSeries<F>, AlgebraError>
where
    F: Field,
    E: SeriesExpand<F>,
    G: Fn(i64) -> Result<E::Subst, AlgebraError>,
{
    series_expand_from(e, START_SERIES_PRECISION, subst_at)
}

/// [`series_expand`] with the doubling sequence starting at `start`.
pub fn series_expand_from<F, E, G>(e: &E, start: i64, subst_at: G) -> Result<LaurentSeries<F>, AlgebraError>
where
    F: Field,
    E: SeriesExpand<F>,
    G: Fn(i64) -> Result<E::Subst, AlgebraError>,
{
    let mut n = start.max(1);
    loop {
        let s = subst_at(n)?;
        match e.expand(&s, n) {
            Ok(r) if !r.is_zero() || e.is_zero_value() => return Ok(r),
            Ok(_) | Err(AlgebraError::SeriesNotInvertible(_)) => {}
            Err(err) => return Err(err),
        }
        if n >= MAX_SERIES_PRECISION {
            return Err(AlgebraError::PrecisionExhausted(n));
        }
        n = (n * 2).min(MAX_SERIES_PRECISION);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ser(c: &[i64], prec: i64) -> LaurentSeries<Rational> {
        LaurentSeries::from_coeffs(Var::new("t"), Rational::zero(), 0, c.iter().map(|&x| q(x, 1)).collect(), prec)
    }

    #[test]
    fn sqrt_of_one_plus_t_plus_t_cubed() {
        let r = ser(&[1, 1, 0, 1], 4).sqrt().unwrap();
        assert_eq!(r.coeffs(), &[q(1, 1), q(1, 2), q(-1, 8), q(9, 16)]);
        assert_eq!(r.precision(), 4);
        // Oracle: squaring the truncated root gives back the input mod t^4.
        let sq = r.mul_ref(&r);
        assert_eq!(sq.truncate(4), ser(&[1, 1, 0, 1], 4));
        assert_eq!(r.to_string(), "1 + 1/2*t - 1/8*t^2 + 9/16*t^3 + O(t^4)");
    }

    #[test]
    fn sqrt_trivial_cases() {
        assert_eq!(ser(&[1], 4).sqrt().unwrap(), ser(&[1], 4));
        assert_eq!(ser(&[1, 2, 1], 3).sqrt().unwrap(), ser(&[1, 1], 3));
        assert_eq!(ser(&[2, 1], 3).sqrt(), Err(AlgebraError::NotASquareConstantTerm));
        assert_eq!(ser(&[0, 1], 3).sqrt(), Err(AlgebraError::NotASquareConstantTerm));
    }

    #[test]
    fn inverse_and_precision() {
        let a = ser(&[0, 1, 1], 5); // t + t^2 + O(t^5)
        let b = a.inv().unwrap(); // 1/t - 1 + t - t^2 + O(t^3)
        assert_eq!(b.valuation(), Some(-1));
        assert_eq!(b.precision(), 3);
        assert_eq!(b.coeff(1), q(1, 1));
        let one = a.mul_ref(&b);
        assert_eq!(one.precision(), 4);
        assert_eq!(one.truncate(4), ser(&[1], 4));
    }

    #[test]
    fn expansion_of_uniformizer_and_constants() {
        let u = LaurentSeries::uniformizer(Var::new("u"), Rational::zero(), 8);
        let t = RatFunc::variable(Var::new("t"));
        let c = RatFunc::constant(Var::new("t"), q(3, 7));
        assert_eq!(t.expand(&u, 8).unwrap(), u);
        let cs = series_expand(&c, |n| Ok(LaurentSeries::uniformizer(Var::new("u"), Rational::zero(), n))).unwrap();
        assert_eq!(cs.coeffs(), &[q(3, 7)]);
        assert_eq!(cs.precision(), 8);
    }

    #[test]
    fn adaptive_precision_finds_high_valuation() {
        let t = RatFunc::variable(Var::new("t"));
        let e = Field::pow(&t, 20);
        let s = series_expand(&e, |n| Ok(LaurentSeries::uniformizer(Var::new("u"), Rational::zero(), n))).unwrap();
        assert_eq!(s.valuation(), Some(20));
        assert_eq!(s.precision(), 32);
        let e = Field::pow(&t, 600);
        let r = series_expand(&e, |n| Ok(LaurentSeries::uniformizer(Var::new("u"), Rational::zero(), n)));
        assert_eq!(r, Err(AlgebraError::PrecisionExhausted(MAX_SERIES_PRECISION)));
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(tail in prop::collection::vec(-20i64..20, 0..10), c0 in 1i64..6) {
            let mut c = vec![c0 * c0];
            c.extend(tail);
            let n = c.len() as i64;
            let s = ser(&c, n);
            let r = s.sqrt().unwrap();
            prop_assert_eq!(r.coeffs()[0].clone(), q(c0, 1));
            prop_assert_eq!(r.mul_ref(&r).truncate(n), s);
        }

        #[test]
        fn raising_precision_keeps_coefficients(c in prop::collection::vec(-5i64..5, 1..6), d in prop::collection::vec(-5i64..5, 1..6)) {
            prop_assume!(d[0] != 0);
            let var = Var::new("t");
            let f = RatFunc::from_int_polys(var, &IntPoly::from_i64s(&c), &IntPoly::from_i64s(&d)).unwrap();
            let at = |n| LaurentSeries::uniformizer(Var::new("u"), Rational::zero(), n);
            let lo = f.expand(&at(6), 6).unwrap();
            let hi = f.expand(&at(12), 12).unwrap();
            prop_assert_eq!(hi.truncate(6), lo);
        }
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let a = ser(&[1, 1], 6);
        assert_eq!(a.pow(3), a.mul_ref(&a).mul_ref(&a));
        assert!(One::is_one(&a.pow(0).coeffs()[0]));
    }
}
