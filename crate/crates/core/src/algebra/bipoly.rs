use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::forward_field_ops;
use super::unipoly::format_terms;
use super::{IntPoly, Rational};

/// Polynomial in ℤ\[t₁\]\[t₂\]: `c[j]` is the coefficient of `t₂ʲ`, itself a
/// polynomial in `t₁`. No trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    c: Vec<IntPoly>,
}

/// Specialisation points tried when certifying coprimality.
const PROBE_POINTS: [i64; 6] = [3, -2, 5, 7, -11, 13];

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        BiPoly::from_t1(IntPoly::one())
    }

    pub fn constant(k: BigInt) -> Self {
        BiPoly::from_t1(IntPoly::constant(k))
    }

    pub fn t1() -> Self {
        BiPoly::from_t1(IntPoly::x())
    }

    pub fn t2() -> Self {
        BiPoly::from_coeffs(vec![IntPoly::zero(), IntPoly::one()])
    }

    /// Embeds a polynomial in `t₁`.
    pub fn from_t1(p: IntPoly) -> Self {
        BiPoly::from_coeffs(vec![p])
    }

    /// Embeds a polynomial in `t₂`.
    pub fn from_t2(p: &IntPoly) -> Self {
        BiPoly::from_coeffs(p.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect())
    }

    pub fn from_coeffs(mut c: Vec<IntPoly>) -> Self {
        while c.last().is_some_and(|p| p.is_zero()) {
            c.pop();
        }
        BiPoly { c }
    }

    /// From `(i, j, c)` meaning `c · t₁ⁱ t₂ʲ`; repeated monomials add.
    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Self {
        let mut acc = BiPoly::zero();
        for &(i, j, k) in terms {
            let mut v = vec![IntPoly::zero(); j + 1];
            v[j] = IntPoly::monomial(BigInt::from(k), i);
            acc = acc.add_ref(&BiPoly::from_coeffs(v));
        }
        acc
    }

    pub fn coeffs(&self) -> &[IntPoly] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1 && self.c.first().is_none_or(|p| p.is_constant())
    }

    /// Degree in `t₂`; −1 for zero.
    pub fn deg_t2(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    /// Degree in `t₁`; −1 for zero.
    pub fn deg_t1(&self) -> i64 {
        self.c.iter().map(|p| p.deg()).max().unwrap_or(-1)
    }

    pub fn total_degree(&self) -> i64 {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(j, p)| p.deg() + j as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Leading coefficient in `t₂`.
    pub fn lc_t2(&self) -> Option<&IntPoly> {
        self.c.last()
    }

    /// Coefficient of the graded-lex leading term (total degree first, then
    /// the higher power of `t₁`).
    pub fn glex_lc(&self) -> Option<&BigInt> {
        let mut best: Option<(i64, i64, &BigInt)> = None;
        for (j, p) in self.c.iter().enumerate() {
            for (i, x) in p.coeffs().iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let key = ((i + j) as i64, i as i64);
                if best.is_none_or(|(td, d1, _)| key > (td, d1)) {
                    best = Some((key.0, key.1, x));
                }
            }
        }
        best.map(|(_, _, x)| x)
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let zero = IntPoly::zero();
        let c = (0..n)
            .map(|j| self.c.get(j).unwrap_or(&zero).add_ref(o.c.get(j).unwrap_or(&zero)))
            .collect();
        BiPoly::from_coeffs(c)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let zero = IntPoly::zero();
        let c = (0..n)
            .map(|j| self.c.get(j).unwrap_or(&zero).sub_ref(o.c.get(j).unwrap_or(&zero)))
            .collect();
        BiPoly::from_coeffs(c)
    }

    pub fn neg_ref(&self) -> Self {
        BiPoly { c: self.c.iter().map(|p| p.neg_ref()).collect() }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero();
        }
        if self.c.len() == 1 {
            return o.mul_t1poly(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.mul_t1poly(&o.c[0]);
        }
        let mut out = vec![IntPoly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        BiPoly::from_coeffs(out)
    }

    pub fn mul_t1poly(&self, p: &IntPoly) -> Self {
        BiPoly::from_coeffs(self.c.iter().map(|x| x.mul_ref(p)).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        BiPoly::from_coeffs(self.c.iter().map(|x| x.scale(k)).collect())
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        BiPoly { c: self.c.iter().map(|x| x.div_scalar_exact(k)).collect() }
    }

    fn mul_t2k(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![IntPoly::zero(); k];
        v.extend(self.c.iter().cloned());
        BiPoly { c: v }
    }

    /// Nonnegative integer content.
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for p in &self.c {
            g = g.gcd(&p.content());
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Splits `self = k · p` with `p` of integer content 1 and positive
    /// graded-lex leading coefficient.
    pub fn int_content_pp(&self) -> (BigInt, BiPoly) {
        if self.is_zero() {
            return (BigInt::zero(), BiPoly::zero());
        }
        let mut k = self.int_content();
        if self.glex_lc().unwrap().is_negative() {
            k = -k;
        }
        (k.clone(), self.div_scalar_exact(&k))
    }

    /// Content as a polynomial in `t₂` over ℤ\[t₁\]: the gcd of all
    /// coefficients, with positive leading coefficient.
    pub fn t1_content(&self) -> IntPoly {
        let mut g = IntPoly::zero();
        for p in self.c.iter().filter(|p| !p.is_zero()) {
            g = IntPoly::gcd(&g, p);
            if g.deg() == 0 {
                // The remaining work is integer content only.
                let k = self.int_content();
                return IntPoly::constant(k);
            }
        }
        g
    }

    /// `self / p` for a polynomial `p` in `t₁` dividing every coefficient.
    pub fn div_t1poly_exact(&self, p: &IntPoly) -> Option<BiPoly> {
        let mut out = Vec::with_capacity(self.c.len());
        for x in &self.c {
            out.push(x.divide_exact(p)?);
        }
        Some(BiPoly { c: out })
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn divide_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(BiPoly::zero());
        }
        if d.c.len() == 1 {
            return self.div_t1poly_exact(&d.c[0]);
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        // Specialisations must divide too.
        for x in PROBE_POINTS.iter().take(2) {
            let x = BigInt::from(*x);
            let ds = d.eval_t1(&x);
            if !ds.is_zero() && self.eval_t1(&x).divide_exact(&ds).is_none() {
                return None;
            }
        }
        let db = d.c.len() - 1;
        let lc = &d.c[db];
        let mut r = self.c.clone();
        let dq = r.len() - 1 - db;
        let mut q = vec![IntPoly::zero(); dq + 1];
        for i in (0..=dq).rev() {
            let top = std::mem::take(&mut r[i + db]);
            if top.is_zero() {
                continue;
            }
            let qi = top.divide_exact(lc)?;
            for j in 0..db {
                if !d.c[j].is_zero() {
                    r[i + j] = r[i + j].sub_ref(&qi.mul_ref(&d.c[j]));
                }
            }
            q[i] = qi;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(BiPoly::from_coeffs(q))
    }

    /// Substitutes an integer for `t₁`, leaving a polynomial in `t₂`.
    pub fn eval_t1(&self, x: &BigInt) -> IntPoly {
        IntPoly::from_coeffs(self.c.iter().map(|p| p.eval(x)).collect())
    }

    pub fn eval(&self, t1: &Rational, t2: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for p in self.c.iter().rev() {
            acc = acc * t2 + p.eval_rational(t1);
        }
        acc
    }

    /// Pseudo-remainder of `self` by `g` in `t₂`, with the multiplier reduced
    /// by common factors of the leading coefficients at each step.
    fn prem(&self, g: &BiPoly) -> BiPoly {
        let dg = g.c.len() - 1;
        let lg = &g.c[dg];
        let mut r = self.clone();
        while !r.is_zero() && r.c.len() > dg {
            let shift = r.c.len() - 1 - dg;
            let lr = r.c.last().unwrap().clone();
            let gam = IntPoly::gcd(lg, &lr);
            let a = lg.divide_exact(&gam).expect("gcd divides");
            let b = lr.divide_exact(&gam).expect("gcd divides");
            // The leading term cancels and is trimmed.
            r = r.mul_t1poly(&a).sub_ref(&g.mul_t2k(shift).mul_t1poly(&b));
        }
        r
    }

    /// Gcd in ℤ\[t₁,t₂\], with integer content 1 times the integer gcd of the
    /// contents, and positive graded-lex leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
        if a.is_zero() {
            return b.int_content_pp().1.scale(&b.int_content());
        }
        if b.is_zero() {
            return a.int_content_pp().1.scale(&a.int_content());
        }
        let ca = a.t1_content();
        let cb = b.t1_content();
        let c = IntPoly::gcd(&ca, &cb);
        let pa = a.div_t1poly_exact(&ca).expect("content divides");
        let pb = b.div_t1poly_exact(&cb).expect("content divides");
        let g = primitive_gcd(&pa, &pb);
        normalize_sign(g.mul_t1poly(&c))
    }

    /// `(g, a/g, b/g)`.
    pub fn gcd_cofactors(a: &BiPoly, b: &BiPoly) -> (BiPoly, BiPoly, BiPoly) {
        let g = BiPoly::gcd(a, b);
        if g.is_zero() {
            return (g, BiPoly::zero(), BiPoly::zero());
        }
        let qa = a.divide_exact(&g).expect("gcd divides");
        let qb = b.divide_exact(&g).expect("gcd divides");
        (g, qa, qb)
    }

    /// Terms `(i, j, c)` for `c · t₁ⁱ t₂ʲ`, graded-lex descending.
    pub fn terms(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::new();
        for (j, p) in self.c.iter().enumerate() {
            for (i, x) in p.coeffs().iter().enumerate() {
                if !x.is_zero() {
                    out.push((i, j, x.clone()));
                }
            }
        }
        out.sort_by(|x, y| (y.0 + y.1, y.0).cmp(&(x.0 + x.1, x.0)));
        out
    }

    /// Renders `scale · self` with the given variable names.
    pub fn format_scaled(&self, scale: &Rational, v1: &str, v2: &str) -> String {
        let terms = self.terms().into_iter().map(|(i, j, c)| {
            let mono = [(v1, i), (v2, j)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect::<Vec<_>>()
                .join("*");
            (scale * Rational::from_integer(c), mono)
        });
        format_terms(terms)
    }
}

fn normalize_sign(p: BiPoly) -> BiPoly {
    match p.glex_lc() {
        Some(l) if l.is_negative() => p.neg_ref(),
        _ => p,
    }
}

/// Gcd of two polynomials primitive over ℤ\[t₁\].
fn primitive_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    if a.deg_t2() == 0 || b.deg_t2() == 0 {
        return BiPoly::one();
    }
    if normalize_sign(a.clone()) == normalize_sign(b.clone()) {
        return a.clone();
    }
    // A specialisation with the same t₂-degrees and coprime images
    // certifies coprimality.
    let la = a.lc_t2().unwrap();
    let lb = b.lc_t2().unwrap();
    let mut probes = 0;
    for x in PROBE_POINTS {
        let x = BigInt::from(x);
        if la.eval(&x).is_zero() || lb.eval(&x).is_zero() {
            continue;
        }
        probes += 1;
        if IntPoly::gcd(&a.eval_t1(&x), &b.eval_t1(&x)).is_constant() {
            return BiPoly::one();
        }
        if probes >= 2 {
            break;
        }
    }
    let (mut f, mut g) = if a.deg_t2() >= b.deg_t2() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    if f.divide_exact(&g).is_some() {
        return g;
    }
    loop {
        let r = f.prem(&g);
        if r.is_zero() {
            return g;
        }
        if r.deg_t2() == 0 {
            return BiPoly::one();
        }
        let c = r.t1_content();
        f = g;
        g = r.div_t1poly_exact(&c).expect("content divides");
    }
}

forward_field_ops!(BiPoly);

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_scaled(&Rational::one(), "t1", "t2"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_is_graded_lex() {
        let p = BiPoly::from_terms(&[(0, 0, 1), (1, 0, -3), (2, 1, 1), (0, 3, 2)]);
        assert_eq!(p.to_string(), "t1^2*t2 + 2*t2^3 - 3*t1 + 1");
        assert_eq!(p.glex_lc(), Some(&BigInt::from(1)));
    }

    #[test]
    fn gcd_of_shared_bivariate_factor() {
        let f = BiPoly::from_terms(&[(1, 0, 1), (0, 1, 1), (0, 0, 1)]); // t1 + t2 + 1
        let a = f.mul_ref(&BiPoly::from_terms(&[(2, 0, 1), (0, 1, -1)]));
        let b = f.mul_ref(&BiPoly::from_terms(&[(0, 2, 1), (1, 0, 3)]));
        assert_eq!(BiPoly::gcd(&a, &b), f);
    }

    fn arb_bipoly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec((0usize..3, 0usize..3, -4i64..4), 0..5).prop_map(|t| BiPoly::from_terms(&t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gcd_recovers_common_factor(a in arb_bipoly(), b in arb_bipoly(), c in arb_bipoly()) {
            prop_assume!(!c.is_zero());
            let x = a.mul_ref(&c);
            let y = b.mul_ref(&c);
            let (g, qx, qy) = BiPoly::gcd_cofactors(&x, &y);
            prop_assert_eq!(g.mul_ref(&qx), x.clone());
            prop_assert_eq!(g.mul_ref(&qy), y.clone());
            if !x.is_zero() && !y.is_zero() {
                prop_assert!(g.divide_exact(&c.int_content_pp().1).is_some());
                prop_assert!(BiPoly::gcd(&qx, &qy).is_constant());
            }
        }
    }
}
