use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::forward_field_ops;
use super::modp;
use super::Rational;

/// Dense polynomial over ℤ, little-endian, with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

/// Below this operand length multiplication stays schoolbook.
const KRONECKER_THRESHOLD: usize = 24;

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly { c: v }
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        IntPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Zero or a nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial sent to −1.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Option<&BigInt> {
        self.c.last()
    }

    /// Largest coefficient bit length.
    pub fn max_bits(&self) -> u64 {
        self.c.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut v = long.c.clone();
        for (a, b) in v.iter_mut().zip(short.c.iter()) {
            *a += b;
        }
        IntPoly::from_coeffs(v)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut v = self.c.clone();
        v.resize(n, BigInt::zero());
        for (a, b) in v.iter_mut().zip(o.c.iter()) {
            *a -= b;
        }
        IntPoly::from_coeffs(v)
    }

    pub fn neg_ref(&self) -> Self {
        IntPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        let c = if self.c.len().min(o.c.len()) < KRONECKER_THRESHOLD {
            mul_schoolbook(&self.c, &o.c)
        } else {
            mul_kronecker(&self.c, &o.c)
        };
        IntPoly::from_coeffs(c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return IntPoly::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        IntPoly { c: self.c.iter().map(|x| x * k).collect() }
    }

    /// Divides every coefficient by `k`, which must divide them all.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        if k.is_one() {
            return self.clone();
        }
        IntPoly {
            c: self
                .c
                .iter()
                .map(|x| {
                    debug_assert!((x % k).is_zero());
                    x / k
                })
                .collect(),
        }
    }

    pub fn mul_xk(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.c.iter().cloned());
        IntPoly { c: v }
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in self.c.iter().rev() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Splits `self = c · p` with `p` primitive and positive leading
    /// coefficient. The zero polynomial gives `(0, 0)`.
    pub fn content_pp(&self) -> (BigInt, IntPoly) {
        if self.is_zero() {
            return (BigInt::zero(), IntPoly::zero());
        }
        let mut c = self.content();
        if self.lc().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        (c.clone(), self.div_scalar_exact(&c))
    }

    pub fn primitive_part(&self) -> IntPoly {
        self.content_pp().1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        IntPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * BigInt::from(i))
                .collect(),
        )
    }

    /// `x^deg · p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut v = self.c.clone();
        v.reverse();
        IntPoly::from_coeffs(v)
    }

    /// Exact quotient `self / d` in ℤ\[x\], or `None` if `d` does not divide.
    pub fn divide_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        if d.c.len() == 1 {
            let k = &d.c[0];
            if self.c.iter().any(|x| !(x % k).is_zero()) {
                return None;
            }
            return Some(IntPoly { c: self.c.iter().map(|x| x / k).collect() });
        }
        // Cheap necessary condition before the long division.
        let d1: BigInt = d.c.iter().sum();
        if !d1.is_zero() {
            let s1: BigInt = self.c.iter().sum();
            if !(s1 % &d1).is_zero() {
                return None;
            }
        }
        let db = d.c.len() - 1;
        let lc = &d.c[db];
        let unit = lc.is_one();
        let mut r = self.c.clone();
        let dq = r.len() - 1 - db;
        let mut q = vec![BigInt::zero(); dq + 1];
        for i in (0..=dq).rev() {
            let top = std::mem::take(&mut r[i + db]);
            if top.is_zero() {
                continue;
            }
            let qi = if unit {
                top
            } else {
                let (qi, rem) = top.div_rem(lc);
                if !rem.is_zero() {
                    return None;
                }
                qi
            };
            for j in 0..db {
                if !d.c[j].is_zero() {
                    r[i + j] -= &qi * &d.c[j];
                }
            }
            q[i] = qi;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(q))
    }

    /// Gcd in ℤ\[x\]: gcd of contents times the primitive gcd, with positive
    /// leading coefficient.
    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        Self::gcd_cofactors(a, b).0
    }

    /// `(g, a/g, b/g)` with `g = gcd(a, b)`. Both zero gives `(0, 0, 0)`.
    pub fn gcd_cofactors(a: &IntPoly, b: &IntPoly) -> (IntPoly, IntPoly, IntPoly) {
        if a.is_zero() && b.is_zero() {
            return (IntPoly::zero(), IntPoly::zero(), IntPoly::zero());
        }
        if a.is_zero() {
            let (c, p) = b.content_pp();
            let s = IntPoly::constant(if c.is_negative() { -BigInt::one() } else { BigInt::one() });
            return (p.scale(&c.abs()), IntPoly::zero(), s);
        }
        if b.is_zero() {
            let (c, p) = a.content_pp();
            let s = IntPoly::constant(if c.is_negative() { -BigInt::one() } else { BigInt::one() });
            return (p.scale(&c.abs()), s, IntPoly::zero());
        }
        let (ca, pa) = a.content_pp();
        let (cb, pb) = b.content_pp();
        let c = ca.gcd(&cb);
        let (g, qa, qb) = primitive_gcd(&pa, &pb);
        (g.scale(&c), qa.scale(&(ca / &c)), qb.scale(&(cb / &c)))
    }

    /// Yun's square-free decomposition over ℚ of the primitive part:
    /// `pp(self) = ∏ fᵢ^mᵢ` with each `fᵢ` primitive, square-free, pairwise
    /// coprime and nonconstant.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive_part();
        if f.c.len() <= 1 {
            return Vec::new();
        }
        let df = f.derivative();
        let (_, mut b, c) = primitive_gcd(&f, &df.primitive_part());
        let c = c.scale(&df.content());
        let mut d = c.sub_ref(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1u32;
        while b.c.len() > 1 {
            let (a, b_next, c_next) = if d.is_zero() {
                (b.clone(), IntPoly::one(), IntPoly::zero())
            } else {
                let (dc, dp) = d.content_pp();
                let (a, qb, qd) = primitive_gcd(&b, &dp);
                (a, qb, qd.scale(&dc))
            };
            if a.c.len() > 1 {
                out.push((a, i));
            }
            d = c_next.sub_ref(&b_next.derivative());
            b = b_next;
            i += 1;
        }
        out
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.c.iter().map(|x| Rational::from_integer(x.clone())).collect()
    }

    /// Clears denominators: `coeffs = scale · p` with `p` primitive and
    /// positive leading coefficient. Zero gives `(0, 0)`.
    pub fn from_rationals(coeffs: &[Rational]) -> (Rational, IntPoly) {
        let mut l = BigInt::one();
        for q in coeffs {
            l = l.lcm(q.denom());
        }
        let ints: Vec<BigInt> = coeffs.iter().map(|q| q.numer() * (&l / q.denom())).collect();
        let (c, p) = IntPoly::from_coeffs(ints).content_pp();
        if p.is_zero() {
            return (Rational::zero(), p);
        }
        (Rational::new(c, l), p)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        super::unipoly::format_dense(&self.to_rationals(), var)
    }
}

forward_field_ops!(IntPoly);

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.to_string_in("x"))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

fn mul_schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Packs both operands into single integers with 32-bit-aligned slots wide
/// enough to hold any signed product coefficient, multiplies once, unpacks.
fn mul_kronecker(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let bits_a = a.iter().map(|x| x.bits()).max().unwrap_or(0);
    let bits_b = b.iter().map(|x| x.bits()).max().unwrap_or(0);
    let n = a.len().min(b.len()) as u64;
    let need = bits_a + bits_b + (64 - n.leading_zeros() as u64) + 2;
    let slot = need.div_ceil(32) as usize;
    let pa = pack(a, slot);
    let pb = pack(b, slot);
    unpack(&(pa * pb), slot, a.len() + b.len() - 1)
}

fn pack(c: &[BigInt], slot: usize) -> BigInt {
    let total = c.len() * slot;
    let mut pos = vec![0u32; total];
    let mut neg = vec![0u32; total];
    let mut any_neg = false;
    for (i, x) in c.iter().enumerate() {
        let (sign, digits) = x.to_u32_digits();
        let dst = if sign == Sign::Minus {
            any_neg = true;
            &mut neg
        } else {
            &mut pos
        };
        dst[i * slot..i * slot + digits.len()].copy_from_slice(&digits);
    }
    let p = BigInt::from_biguint(Sign::Plus, BigUint::new(pos));
    if any_neg {
        p - BigInt::from_biguint(Sign::Plus, BigUint::new(neg))
    } else {
        p
    }
}

fn unpack(w: &BigInt, slot: usize, n: usize) -> Vec<BigInt> {
    let (sign, digits) = w.to_u32_digits();
    let full = BigUint::one() << (32 * slot);
    let half = BigUint::one() << (32 * slot - 1);
    let mut out = Vec::with_capacity(n);
    let mut carry = false;
    for i in 0..n {
        let lo = (i * slot).min(digits.len());
        let hi = ((i + 1) * slot).min(digits.len());
        let mut v = BigUint::from_slice(&digits[lo..hi]);
        if carry {
            v += 1u32;
        }
        if v >= half {
            out.push(BigInt::from_biguint(Sign::Plus, v) - BigInt::from_biguint(Sign::Plus, full.clone()));
            carry = true;
        } else {
            out.push(BigInt::from_biguint(Sign::Plus, v));
            carry = false;
        }
    }
    if sign == Sign::Minus {
        for x in out.iter_mut() {
            *x = -std::mem::take(x);
        }
    }
    out
}

/// Gcd and cofactors of two primitive polynomials with positive leading
/// coefficients, by reduction modulo word-sized primes and CRT.
fn primitive_gcd(a: &IntPoly, b: &IntPoly) -> (IntPoly, IntPoly, IntPoly) {
    if a.c.len() == 1 || b.c.len() == 1 {
        return (IntPoly::one(), a.clone(), b.clone());
    }
    if a == b {
        return (a.clone(), IntPoly::one(), IntPoly::one());
    }
    let gamma = a.lc().unwrap().gcd(b.lc().unwrap());
    let max_deg = a.c.len().min(b.c.len()) - 1;
    let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
    let mut acc_deg = usize::MAX;
    let mut i = 0;
    loop {
        let p = modp::prime(i);
        i += 1;
        let la = modp::reduce(a.lc().unwrap(), p);
        let lb = modp::reduce(b.lc().unwrap(), p);
        if la == 0 || lb == 0 {
            continue;
        }
        let ap: Vec<u64> = a.c.iter().map(|x| modp::reduce(x, p)).collect();
        let bp: Vec<u64> = b.c.iter().map(|x| modp::reduce(x, p)).collect();
        let g = modp::gcd(ap, bp, p);
        let d = g.len() - 1;
        if d == 0 {
            return (IntPoly::one(), a.clone(), b.clone());
        }
        if d > max_deg || d > acc_deg {
            continue;
        }
        let gm = modp::reduce(&gamma, p);
        let image: Vec<u64> = g.iter().map(|&x| modp::mulmod(x, gm, p)).collect();
        if d < acc_deg {
            acc_deg = d;
            let m = BigInt::from(p);
            let half = &m >> 1;
            let coeffs = image
                .iter()
                .map(|&x| {
                    let x = BigInt::from(x);
                    if x > half {
                        x - &m
                    } else {
                        x
                    }
                })
                .collect();
            acc = Some((coeffs, m));
            continue;
        }
        let (coeffs, m) = acc.as_mut().unwrap();
        let m_mod_p = modp::reduce(m, p);
        let inv = modp::invmod(m_mod_p, p);
        let new_m = &*m * BigInt::from(p);
        let half = &new_m >> 1;
        let mut stable = true;
        for (c, &r) in coeffs.iter_mut().zip(image.iter()) {
            let cp = modp::reduce(c, p);
            let k = modp::mulmod(modp::submod(r, cp, p), inv, p);
            if k == 0 {
                continue;
            }
            stable = false;
            let mut x = &*c + &*m * BigInt::from(k);
            if x > half {
                x -= &new_m;
            } else if x < -&half {
                x += &new_m;
            }
            *c = x;
        }
        *m = new_m;
        if stable {
            let cand = IntPoly::from_coeffs(coeffs.clone()).primitive_part();
            if let Some(qa) = a.divide_exact(&cand) {
                if let Some(qb) = b.divide_exact(&cand) {
                    return (cand, qa, qb);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = p(&[1, 1]).mul_ref(&p(&[-3, 0, 2]));
        let g = p(&[1, 1]).mul_ref(&p(&[5, 7]));
        assert_eq!(IntPoly::gcd(&f, &g), p(&[1, 1]));
        assert_eq!(IntPoly::gcd(&p(&[2, 4]), &p(&[6, 6])), p(&[2]));
    }

    #[test]
    fn squarefree_of_cubed_factor() {
        let f = p(&[1, 1]).mul_ref(&p(&[1, 1])).mul_ref(&p(&[1, 1])).mul_ref(&p(&[-2, 0, 1]));
        let sq = f.squarefree_decomposition();
        assert_eq!(sq, vec![(p(&[-2, 0, 1]), 1), (p(&[1, 1]), 3)]);
    }

    #[test]
    fn kronecker_handles_signs_and_large_coefficients() {
        let big = BigInt::from(1u64) << 200;
        let a: Vec<BigInt> = (0..40).map(|i| if i % 3 == 0 { -&big - i } else { BigInt::from(i) }).collect();
        let b: Vec<BigInt> = (0..31).map(|i| BigInt::from(i * i) - 400).collect();
        assert_eq!(mul_kronecker(&a, &b), mul_schoolbook(&a, &b));
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-50i64..50, 0..max_len).prop_map(|v| IntPoly::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn kronecker_matches_schoolbook(a in prop::collection::vec(-1_000_000i64..1_000_000, 1..60),
                                        b in prop::collection::vec(-1_000_000i64..1_000_000, 1..60)) {
            let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
            let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
            prop_assert_eq!(mul_kronecker(&a, &b), mul_schoolbook(&a, &b));
        }

        #[test]
        fn gcd_divides_and_cofactors_are_coprime(a in arb_poly(8), b in arb_poly(8), c in arb_poly(5)) {
            let x = a.mul_ref(&c);
            let y = b.mul_ref(&c);
            let (g, qx, qy) = IntPoly::gcd_cofactors(&x, &y);
            prop_assert_eq!(g.mul_ref(&qx), x.clone());
            prop_assert_eq!(g.mul_ref(&qy), y.clone());
            if !x.is_zero() && !y.is_zero() {
                prop_assert!(IntPoly::gcd(&qx, &qy).is_constant());
                prop_assert!(c.is_zero() || g.divide_exact(&c.primitive_part()).is_some());
            }
        }

        #[test]
        fn squarefree_reassembles(a in arb_poly(5), b in arb_poly(4)) {
            let f = a.mul_ref(&b).mul_ref(&b);
            prop_assume!(f.deg() > 0);
            let mut prod = IntPoly::one();
            for (g, m) in f.squarefree_decomposition() {
                for _ in 0..m { prod = prod.mul_ref(&g); }
            }
            prop_assert_eq!(prod, f.primitive_part());
        }
    }
}
