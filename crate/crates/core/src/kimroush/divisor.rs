//! Zeros of `P ↦ x(sP + r·T₀)` on `E` and the odd-order test for squares in
//! `ℚ(t)(h)`, `h² = D(t)`.
//!
//! Places of `ℚ̄(t)(h)` lie over `t = c` (two points when `D(c) ≠ 0`, one
//! ramified point otherwise) and over `t = ∞` (the single point `O`, where
//! `t` has a double pole and `h` a triple one).

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{Field, IntPoly, RatFunc, Rational};
use crate::elliptic::{Curve, CurvePoint};

use super::{KrContext, KrError, ResidueElem, MAX_DIVISOR_SCALE};

/// Zero count of `x(sP + r·T₀)` with multiplicity, and whether every zero is simple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorCount {
    pub zero_count: i64,
    pub all_simple: bool,
}

fn is_squarefree(p: &IntPoly) -> bool {
    p.squarefree_decomposition().iter().all(|&(_, e)| e == 1)
}

fn coprime(a: &IntPoly, b: &IntPoly) -> bool {
    IntPoly::gcd(a, b).deg() == 0
}

impl KrContext {
    /// Zeros of `P ↦ x(sP + r·T₀)`: the points `Q` with `sQ = R` for
    /// `R ∈ {(1 − r)·T₀, −(1 + r)·T₀}`.
    ///
    /// Writing `x(sP) = N(x)/M(x)`, an affine target `R` contributes the roots of
    /// the eliminant `N − x(R)·M`; each root `c` carries exactly one `Q` with
    /// `sQ = R` (the other point over `c` maps to `−R`). The target `O`
    /// contributes `E[s]`: `O` itself and the roots of `M`.
    pub fn shifted_x_divisor(&self, s: i64, r: i64) -> Result<DivisorCount, KrError> {
        if !(1..=MAX_DIVISOR_SCALE).contains(&s) {
            return Err(KrError::ScaleExceeded(format!("s = {s} outside 1..={MAX_DIVISOR_SCALE}")));
        }
        let one = Rational::from_integer(1.into());
        let curve = Curve::new(one.clone(), one.clone()).expect("nonsingular");
        let t0 = CurvePoint::Affine(Rational::zero(), one);
        let xs = match self.residue_multiple(s)? {
            CurvePoint::Affine(x, _) => x,
            CurvePoint::Infinity => unreachable!("P₁ has infinite order"),
        };
        let (n, m) = xs.a().integer_fraction();
        let d = cubic_poly();
        let mut count = 0;
        let mut simple = true;
        for k in [1 - r, -(1 + r)] {
            match curve.scalar_mul(k, &t0)? {
                CurvePoint::Infinity => {
                    count += m.deg() + 1;
                    simple &= torsion_simple(&m, &d);
                }
                CurvePoint::Affine(xr, _) => {
                    let e = n.scale(xr.denom()).sub_ref(&m.scale(xr.numer()));
                    count += e.deg();
                    simple &= is_squarefree(&e) && coprime(&e, &d);
                }
            }
        }
        Ok(DivisorCount { zero_count: count, all_simple: simple })
    }
}

/// `t³ + t + 1`.
fn cubic_poly() -> IntPoly {
    IntPoly::from_i64s(&[1, 1, 0, 1])
}

/// The roots of `M` are distinct nonzero `s`-torsion points: double roots away
/// from `D` (two points each) and simple roots of `D` (one point each).
fn torsion_simple(m: &IntPoly, d: &IntPoly) -> bool {
    m.squarefree_decomposition().iter().all(|(f, e)| {
        let g = IntPoly::gcd(f, d);
        let rest = f.divide_exact(&g).expect("gcd divides");
        (g.deg() == 0 || *e == 1) && (rest.deg() == 0 || *e == 2)
    })
}

/// `e = (a + b·h)/q` with `a, b, q ∈ ℤ[t]`.
fn integer_form(e: &ResidueElem) -> (IntPoly, IntPoly, IntPoly) {
    let (pa, qa) = e.a().integer_fraction();
    let (pb, qb) = e.b().integer_fraction();
    let (_, ca, cb) = IntPoly::gcd_cofactors(&qa, &qb);
    // lcm(qa, qb) = qa·cb = qb·ca
    (pa.mul_ref(&cb), pb.mul_ref(&ca), qa.mul_ref(&cb))
}

/// Some place of `ℚ̄(t)(h)` where `e` has odd order, if any.
fn odd_order_place(e: &ResidueElem, d: &IntPoly) -> Option<String> {
    let (a, b, q) = integer_form(e);
    let (g0, a1, b1) = IntPoly::gcd_cofactors(&a, &b);
    // G' = a1 + b1·h has no zero at both points over any c.
    let ord_inf = if b1.is_zero() { 2 * a1.deg() } else { (2 * a1.deg()).max(2 * b1.deg() + 3) };
    if ord_inf % 2 == 1 {
        return Some("O".into());
    }
    let norm = a1.mul_ref(&a1).sub_ref(&b1.mul_ref(&b1).mul_ref(d));
    if let Some((f, _)) = norm.squarefree_decomposition().into_iter().find(|&(_, k)| k % 2 == 1) {
        return Some(format!("a root of {}", f.to_string_in("t")));
    }
    // g0/q contributes the same order at both points over c, doubled when D(c) = 0.
    let (_, p, q) = IntPoly::gcd_cofactors(&g0, &q);
    for poly in [p, q] {
        for (f, k) in poly.squarefree_decomposition() {
            if k % 2 == 0 {
                continue;
            }
            let g = IntPoly::gcd(&f, d);
            let rest = f.divide_exact(&g).expect("gcd divides");
            if rest.deg() > 0 {
                return Some(format!("a root of {}", rest.to_string_in("t")));
            }
        }
    }
    None
}

/// `f = κ·g²` with `κ ∈ ℚ`.
fn sqrt_up_to_constant(f: &RatFunc) -> Option<(Rational, RatFunc)> {
    let (kappa, n, d) = f.parts();
    let unit = RatFunc::from_int_polys(f.var().clone(), n, d).ok()?;
    Some((kappa.clone(), unit.sqrt()?))
}

/// A root of `e` over `ℚ̄(t)(h)`, found from `√e = c + d·h` with
/// `c² = (A ± √N(e))/2` up to a constant factor.
fn explicit_root_exists(e: &ResidueElem) -> bool {
    let (a, b, dd) = (e.a(), e.b(), e.d());
    let var = a.var().clone();
    if b.is_zero() {
        if let Ok(q) = a.try_div(dd) {
            if sqrt_up_to_constant(&q).is_some() {
                return true;
            }
        }
    }
    let Some(sn) = e.norm().sqrt() else { return false };
    let half = RatFunc::constant(var.clone(), Rational::new(1.into(), 2.into()));
    for sigma in [sn.clone(), -sn] {
        let c2 = (a.clone() + &sigma) * &half;
        if c2.is_zero() {
            continue;
        }
        let Some((kappa, c0)) = sqrt_up_to_constant(&c2) else { continue };
        let k = RatFunc::constant(var.clone(), kappa);
        let c_sq = k.clone() * &c0.square();
        let four = RatFunc::from_int(var.clone(), 4);
        let d_sq_d = match (b.square() * dd).try_div(&(four * &c_sq)) {
            Ok(x) => x,
            Err(_) => continue,
        };
        if c_sq + &d_sq_d == *a {
            return true;
        }
    }
    false
}

/// Whether `e` is a square in `ℂ(t)(h)`.
///
/// An odd order at any place refutes squareness. When every order is even the
/// divisor of `e` is twice a divisor, which may still be a nontrivial
/// 2-torsion class; then a root is sought explicitly and `ScaleExceeded`
/// reports that neither certificate was found.
pub fn is_square_in_residue(e: &ResidueElem) -> Result<bool, KrError> {
    if Field::is_zero(e) {
        return Err(KrError::ZeroElement);
    }
    let (dn, dd) = e.d().integer_fraction();
    if dd.deg() != 0 || dn.deg() != 3 || !is_squarefree(&dn) {
        return Err(KrError::ScaleExceeded("modulus is not a squarefree cubic".into()));
    }
    if odd_order_place(e, &dn).is_some() {
        return Ok(false);
    }
    if explicit_root_exists(e) {
        return Ok(true);
    }
    Err(KrError::ScaleExceeded("all place orders are even but no root was found".into()))
}

/// The place where `e` has odd order, as text.
pub fn odd_order_witness(e: &ResidueElem) -> Option<String> {
    let (dn, _) = e.d().integer_fraction();
    odd_order_place(e, &dn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Order, Var};

    fn v() -> Var {
        Var::new("t1")
    }

    /// Zeros of `g ∈ ℚ(t)(h)` counted from its norm: every zero of `N(g)`
    /// on `ℙ¹` lifts to a zero of `g` or of its conjugate, never both.
    fn zeros_from_norm(g: &ResidueElem) -> i64 {
        let n = g.norm();
        let at_infinity = match n.ord_t_inverse() {
            Order::Finite(k) if k > 0 => k,
            _ => 0,
        };
        n.deg_num() + at_infinity
    }

    #[test]
    fn divisor_examples() {
        let ctx = KrContext::new();
        for (s, r, want) in [(1, 0, 2), (1, 5, 2), (2, 0, 8)] {
            let d = ctx.shifted_x_divisor(s, r).unwrap();
            assert_eq!(d, DivisorCount { zero_count: want, all_simple: true }, "s={s} r={r}");
        }
        assert!(ctx.shifted_x_divisor(4, 0).is_err());
    }

    #[test]
    fn divisor_agrees_with_norm_count() {
        let ctx = KrContext::new();
        for s in 1..=2 {
            for r in 0..=2 {
                let g = ctx.residue_xsr(s, r).unwrap();
                assert_eq!(ctx.shifted_x_divisor(s, r).unwrap().zero_count, zeros_from_norm(&g), "s={s} r={r}");
            }
        }
    }

    #[test]
    fn squares() {
        let ctx = KrContext::new();
        let t = RatFunc::variable(v());
        let zero = RatFunc::zero(v());
        assert!(is_square_in_residue(&ctx.residue(t.square(), zero.clone())).unwrap());
        assert!(!is_square_in_residue(&ctx.residue(t.clone(), zero.clone())).unwrap());
        assert!(!is_square_in_residue(&ctx.residue_xsr(1, 1).unwrap()).unwrap());
        // (1 + h)² = 1 + D + 2h
        let h = ctx.residue(zero.clone(), RatFunc::one(v()));
        let sq = (h.clone() + &h.one_like()).square();
        assert!(is_square_in_residue(&sq).unwrap());
        // 3·t² is a square over ℂ.
        assert!(is_square_in_residue(&ctx.residue(t.square() * &RatFunc::from_int(v(), 3), zero.clone())).unwrap());
        // D = h²
        assert!(is_square_in_residue(&ctx.residue(h.d().clone(), zero)).unwrap());
        assert!(!is_square_in_residue(&h).unwrap());
    }
}
