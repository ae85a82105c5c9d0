//! Multivariate polynomials with coefficients in ℤ[t].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Field, IntPoly, RatFunc};
use crate::syntax::{self, Expr};

use super::ReduceError;

/// Name of the coefficient variable.
pub const COEFF_VAR: &str = "t";

/// A power product of system variables, sorted by name, exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut out: BTreeMap<&str, u32> = BTreeMap::new();
        for (v, e) in self.0.iter().chain(&o.0) {
            *out.entry(v).or_default() += e;
        }
        Monomial(out.into_iter().map(|(v, e)| (v.to_string(), e)).collect())
    }
}

/// `Σ cᵢ(t)·mᵢ` with `cᵢ ∈ ℤ[t]` nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SysPoly {
    terms: BTreeMap<Monomial, IntPoly>,
}

impl SysPoly {
    pub fn zero() -> Self {
        SysPoly::default()
    }

    pub fn one() -> Self {
        SysPoly::constant(IntPoly::one())
    }

    pub fn int(k: i64) -> Self {
        SysPoly::constant(IntPoly::constant(BigInt::from(k)))
    }

    pub fn constant(c: IntPoly) -> Self {
        SysPoly::term(Monomial::default(), c)
    }

    /// The coefficient variable `t`.
    pub fn t() -> Self {
        SysPoly::constant(IntPoly::x())
    }

    pub fn var(name: &str) -> Self {
        SysPoly::term(Monomial::var(name), IntPoly::one())
    }

    fn term(m: Monomial, c: IntPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SysPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &IntPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect()
    }

    /// Total degree in the system variables; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The coefficient if `self` involves no system variable.
    pub fn as_constant(&self) -> Option<IntPoly> {
        match self.terms.len() {
            0 => Some(IntPoly::zero()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let sum = match terms.get(m) {
                Some(d) => d.add_ref(c),
                None => c.clone(),
            };
            if sum.is_zero() {
                terms.remove(m);
            } else {
                terms.insert(m.clone(), sum);
            }
        }
        SysPoly { terms }
    }

    pub fn neg_ref(&self) -> Self {
        SysPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let mut acc: BTreeMap<Monomial, IntPoly> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1.mul_ref(c2);
                let e = acc.entry(m).or_insert_with(IntPoly::zero);
                *e = e.add_ref(&c);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        SysPoly { terms: acc }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(SysPoly::one(), |acc, _| acc.mul_ref(self))
    }

    pub fn square(&self) -> Self {
        self.mul_ref(self)
    }

    /// Value under `lookup`, or `None` if some variable is unassigned.
    pub fn eval(&self, t: &RatFunc, lookup: &dyn Fn(&str) -> Option<RatFunc>) -> Option<RatFunc> {
        let mut acc = t.zero_like();
        let mut cache: BTreeMap<String, RatFunc> = BTreeMap::new();
        for v in self.variables() {
            let x = lookup(&v)?;
            cache.insert(v, x);
        }
        for (m, c) in &self.terms {
            // Selector factors are usually zero; skip before multiplying.
            if m.0.iter().any(|(v, _)| cache[v.as_str()].is_zero()) {
                continue;
            }
            let mut term = RatFunc::from_int_polys(t.var().clone(), c, &IntPoly::one()).expect("unit denominator");
            for (v, e) in &m.0 {
                term = term * &cache[v.as_str()].pow(*e);
            }
            acc = acc + &term;
        }
        Some(acc)
    }

    /// Converts an expression, reading `t` as the coefficient variable.
    pub fn from_expr(e: &Expr) -> Result<Self, ReduceError> {
        Ok(match e {
            Expr::Int(k) => SysPoly::constant(IntPoly::constant(k.clone())),
            Expr::Var(v) if v == COEFF_VAR => SysPoly::t(),
            Expr::Var(v) => SysPoly::var(v),
            Expr::Neg(a) => SysPoly::from_expr(a)?.neg_ref(),
            Expr::Add(a, b) => SysPoly::from_expr(a)?.add_ref(&SysPoly::from_expr(b)?),
            Expr::Sub(a, b) => SysPoly::from_expr(a)?.sub_ref(&SysPoly::from_expr(b)?),
            Expr::Mul(a, b) => SysPoly::from_expr(a)?.mul_ref(&SysPoly::from_expr(b)?),
            Expr::Pow(a, k) => SysPoly::from_expr(a)?.pow(*k),
            Expr::Div(..) => return Err(ReduceError::NonIntegerCoefficient { position: None }),
        })
    }

    /// Parses the printed form back.
    pub fn parse(text: &str) -> Result<Self, ReduceError> {
        SysPoly::from_expr(&syntax::parse(text)?)
    }
}

fn t_power(j: usize) -> String {
    match j {
        0 => String::new(),
        1 => COEFF_VAR.to_string(),
        _ => format!("{COEFF_VAR}^{j}"),
    }
}

fn monomial_text(m: &Monomial) -> String {
    m.0.iter()
        .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Terms by descending total degree, then by monomial. A coefficient with
/// several terms in `t` is printed in parentheses.
impl fmt::Display for SysPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| a.cmp(b)));
        let mut first = true;
        for (m, c) in order {
            let mono = monomial_text(m);
            let nonzero: Vec<(usize, &BigInt)> = c.coeffs().iter().enumerate().filter(|(_, k)| !k.is_zero()).collect();
            let (neg, body) = if let [(j, k)] = nonzero[..] {
                let tm = t_power(j);
                let parts: Vec<&str> = [tm.as_str(), mono.as_str()].into_iter().filter(|s| !s.is_empty()).collect();
                let vars = parts.join("*");
                let a = k.abs();
                let body = if vars.is_empty() {
                    a.to_string()
                } else if a.is_one() {
                    vars
                } else {
                    format!("{a}*{vars}")
                };
                (k.is_negative(), body)
            } else {
                let ct = format!("({})", c.to_string_in(COEFF_VAR));
                (false, if mono.is_empty() { ct } else { format!("{ct}*{mono}") })
            };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            f.write_str(&body)?;
            first = false;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $r:ident) => {
        impl $tr<&SysPoly> for &SysPoly {
            type Output = SysPoly;
            fn $m(self, o: &SysPoly) -> SysPoly {
                self.$r(o)
            }
        }
        impl $tr<SysPoly> for SysPoly {
            type Output = SysPoly;
            fn $m(self, o: SysPoly) -> SysPoly {
                self.$r(&o)
            }
        }
        impl $tr<&SysPoly> for SysPoly {
            type Output = SysPoly;
            fn $m(self, o: &SysPoly) -> SysPoly {
                self.$r(o)
            }
        }
        impl $tr<SysPoly> for &SysPoly {
            type Output = SysPoly;
            fn $m(self, o: SysPoly) -> SysPoly {
                self.$r(&o)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for SysPoly {
    type Output = SysPoly;
    fn neg(self) -> SysPoly {
        self.neg_ref()
    }
}

impl Neg for &SysPoly {
    type Output = SysPoly;
    fn neg(self) -> SysPoly {
        self.neg_ref()
    }
}

/// `p² + t·q²`: both vanish iff this does, over any formally real `K(t)`.
pub fn conj_combine(p: &SysPoly, q: &SysPoly) -> SysPoly {
    p.square() + SysPoly::t() * q.square()
}

/// `p·q`.
pub fn disj_combine(p: &SysPoly, q: &SysPoly) -> SysPoly {
    p.mul_ref(q)
}

/// `num/den = rhs` as `num − rhs·den = 0` and `den·w − 1 = 0`. A denominator
/// equal to 1 needs no certificate.
pub fn clear_denominators(num: &SysPoly, den: &SysPoly, rhs: &SysPoly, w: &str) -> Vec<SysPoly> {
    if *den == SysPoly::one() {
        return vec![num - rhs];
    }
    vec![num - rhs * den, den * SysPoly::var(w) - SysPoly::one()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> SysPoly {
        SysPoly::var(s)
    }

    #[test]
    fn display_and_parse() {
        let d = SysPoly::constant(IntPoly::from_i64s(&[1, 1, 0, 1]));
        let p = &d * &v("w").square() - v("u").pow(3) - v("u") - SysPoly::one();
        assert_eq!(p.to_string(), "-u^3 + (t^3 + t + 1)*w^2 - u - 1");
        assert_eq!(SysPoly::parse(&p.to_string()).unwrap(), p);
        let q = SysPoly::t() * v("y") * v("z") - v("x");
        assert_eq!(q.to_string(), "t*y*z - x");
        assert_eq!(SysPoly::zero().to_string(), "0");
    }

    #[test]
    fn combiners() {
        assert_eq!(conj_combine(&v("x"), &v("y")).to_string(), "x^2 + t*y^2");
        assert!(conj_combine(&SysPoly::zero(), &SysPoly::zero()).is_zero());
        assert_eq!(disj_combine(&v("x"), &v("y")).to_string(), "x*y");
        assert_eq!(disj_combine(&v("p"), &SysPoly::one()), v("p"));
        assert!(disj_combine(&v("p"), &SysPoly::zero()).is_zero());
    }

    #[test]
    fn clearing() {
        let ty = SysPoly::t() * v("y");
        let eqs = clear_denominators(&v("x"), &ty, &v("z"), "w");
        let text: Vec<String> = eqs.iter().map(|e| e.to_string()).collect();
        assert_eq!(text, ["-t*y*z + x", "t*w*y - 1"]);
        let poly = clear_denominators(&v("x"), &SysPoly::one(), &v("z"), "w");
        assert_eq!(poly, vec![v("x") - v("z")]);
    }
}
