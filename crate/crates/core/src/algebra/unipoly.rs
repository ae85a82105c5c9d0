use std::fmt;

use num_traits::{One, Signed, Zero};

use super::field::forward_field_ops;
use super::{AlgebraError, IntPoly, Rational, Var};

/// Dense polynomial over ℚ in one named variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    var: Var,
    c: Vec<Rational>,
}

impl UniPoly {
    pub fn new(var: Var, mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly { var, c }
    }

    pub fn from_i64s(var: &str, c: &[i64]) -> Self {
        UniPoly::new(Var::new(var), c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn zero(var: Var) -> Self {
        UniPoly { var, c: Vec::new() }
    }

    pub fn one(var: Var) -> Self {
        UniPoly::constant(var, Rational::one())
    }

    pub fn constant(var: Var, q: Rational) -> Self {
        UniPoly::new(var, vec![q])
    }

    /// The polynomial `var`.
    pub fn variable(var: Var) -> Self {
        UniPoly::new(var, vec![Rational::zero(), Rational::one()])
    }

    pub fn from_int_poly(var: Var, scale: &Rational, p: &IntPoly) -> Self {
        UniPoly::new(var, p.coeffs().iter().map(|x| scale * Rational::from_integer(x.clone())).collect())
    }

    /// `self = scale · p` with `p` primitive with positive leading coefficient.
    pub fn to_int_poly(&self) -> (Rational, IntPoly) {
        IntPoly::from_rationals(&self.c)
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.c.last()
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
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        UniPoly::new(self.joint_var(o), c)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        UniPoly::new(self.joint_var(o), c)
    }

    pub fn neg_ref(&self) -> Self {
        UniPoly { var: self.var.clone(), c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let var = self.joint_var(o);
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(var);
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        UniPoly::new(var, c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        UniPoly::new(self.var.clone(), self.c.iter().map(|x| x * k).collect())
    }

    /// Euclidean division over ℚ.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        let var = self.joint_var(d);
        let dl = d.lc().ok_or(AlgebraError::DivisionByZero)?;
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(var.clone()), UniPoly::new(var, r)));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let qi = &r[i + dd] / dl;
            if !qi.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[i + j] -= &qi * dj;
                }
            }
            q[i] = qi;
        }
        r.truncate(dd);
        Ok((UniPoly::new(var.clone(), q), UniPoly::new(var, r)))
    }

    /// Monic gcd; zero iff both inputs are zero.
    pub fn gcd(&self, o: &Self) -> Self {
        let var = self.joint_var(o);
        let (_, a) = self.to_int_poly();
        let (_, b) = o.to_int_poly();
        let g = IntPoly::gcd(&a, &b);
        UniPoly::from_int_poly(var, &Rational::one(), &g).monic()
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.var.clone(),
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * Rational::from_integer(i.into()))
                .collect(),
        )
    }
}

forward_field_ops!(UniPoly);

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_dense(&self.c, self.var.as_str()))
    }
}

/// Renders `Σ cᵢ varⁱ` in descending degree, e.g. `3*t^2 - 1/2*t + 1`.
pub(crate) fn format_dense(c: &[Rational], var: &str) -> String {
    let terms = c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (x.clone(), monomial(var, k)));
    format_terms(terms)
}

fn monomial(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

/// Joins `(coefficient, monomial)` pairs, where an empty monomial is 1.
pub(crate) fn format_terms(terms: impl Iterator<Item = (Rational, String)>) -> String {
    let mut s = String::new();
    for (c, m) in terms {
        let neg = c.is_negative();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if m.is_empty() {
            s.push_str(&a.to_string());
        } else if a.is_one() {
            s.push_str(&m);
        } else {
            s.push_str(&format!("{a}*{m}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_descending_with_signs() {
        let p = UniPoly::new(
            Var::new("t"),
            vec![Rational::one(), Rational::new((-1).into(), 2.into()), Rational::from_integer(3.into())],
        );
        assert_eq!(p.to_string(), "3*t^2 - 1/2*t + 1");
        assert_eq!(UniPoly::zero(Var::new("t")).to_string(), "0");
        assert_eq!(UniPoly::from_i64s("t", &[0, -1]).to_string(), "-t");
    }

    #[test]
    fn divrem_reconstructs() {
        let a = UniPoly::from_i64s("t", &[1, 0, 2, 5]);
        let d = UniPoly::from_i64s("t", &[3, 2]);
        let (q, r) = a.divrem(&d).unwrap();
        assert_eq!(q.mul_ref(&d).add_ref(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_is_monic() {
        let a = UniPoly::from_i64s("t", &[2, 2]).mul_ref(&UniPoly::from_i64s("t", &[1, 0, 1]));
        let b = UniPoly::from_i64s("t", &[3, 3]);
        assert_eq!(a.gcd(&b), UniPoly::from_i64s("t", &[1, 1]));
    }
}
