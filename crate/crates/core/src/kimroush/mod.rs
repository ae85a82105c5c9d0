//! The two-variable model over `F = ℚ(t₁,t₂)(h₁,h₂)` with `hᵢ² = tᵢ³ + tᵢ + 1`.
//!
//! `E: y² = x³ + x + 1` carries the independent points `P₁ = (t₁, h₁)` and
//! `P₂ = (t₂, h₂)` over `F`. The pair `(n, r)` stands for `nP₁ + rP₂`, and
//! divisibility `(m,1) ∣ (n,r)`, i.e. `n = m·r`, is encoded by the form
//! `x(nP₁ + rP₂)·z² + x(mP₁ + P₂)·w² = 1`. When `s = n − m·r ≠ 0` the valuation
//! `w_m` refutes every witness: its residue `x_{s,r}` has simple zeros and is
//! not a square in `ℚ(t₁)(h₁)`.
//!
//! `F` is a tower `QuadExt<QuadExt<MultiRatFunc>>`; the residue field
//! `ℚ(t₁)(h₁)` is `QuadExt<RatFunc>`.

mod divisor;
mod valuation;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Field, MultiRatFunc, QuadExt, QuadModulus, RatFunc, Var};
use crate::elliptic::{Curve, CurvePoint, EllipticError};

pub use divisor::{is_square_in_residue, odd_order_witness, DivisorCount};
pub use valuation::ResidueSeries;

/// `c₀₀ + c₁₀h₁ + c₀₁h₂ + c₁₁h₁h₂`.
pub type TowerElem = QuadExt<QuadExt<MultiRatFunc>>;
/// Element of the residue field `ℚ(t₁)(h₁)`.
pub type ResidueElem = QuadExt<RatFunc>;
pub type TowerPoint = CurvePoint<TowerElem>;
pub type ResiduePoint = CurvePoint<ResidueElem>;

/// Largest `s` accepted by the divisor computation.
pub const MAX_DIVISOR_SCALE: i64 = 3;

/// Coordinates of a tower element in the basis `1, h₁, h₂, h₁h₂`.
pub trait TowerCoords {
    fn c00(&self) -> &MultiRatFunc;
    fn c10(&self) -> &MultiRatFunc;
    fn c01(&self) -> &MultiRatFunc;
    fn c11(&self) -> &MultiRatFunc;
}

impl TowerCoords for TowerElem {
    fn c00(&self) -> &MultiRatFunc {
        self.a().a()
    }
    fn c10(&self) -> &MultiRatFunc {
        self.a().b()
    }
    fn c01(&self) -> &MultiRatFunc {
        self.b().a()
    }
    fn c11(&self) -> &MultiRatFunc {
        self.b().b()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KrError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// `nP₁ + rP₂` or `mP₁ + P₂` is the point at infinity.
    #[error("degenerate form: x({0}) is undefined")]
    DegenerateForm(String),
    #[error("mP₁ + P₂ is the point at infinity for m = {0}")]
    DegenerateShift(i64),
    #[error("element is zero")]
    ZeroElement,
    #[error("s·(t₁,h₁) + r·(0,1) is the point at infinity for s = {s}, r = {r}")]
    DegenerateCombination { s: i64, r: i64 },
    #[error("outside the supported scale: {0}")]
    ScaleExceeded(String),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The curve `y² = x³ + x + 1` over the tower and over the residue field,
/// with the points `P₁`, `P₂` and `T₀ = (0, 1)`.
pub struct KrContext {
    h1: Arc<QuadModulus<MultiRatFunc>>,
    h2: Arc<QuadModulus<QuadExt<MultiRatFunc>>>,
    curve: Curve<TowerElem>,
    p1: TowerPoint,
    p2: TowerPoint,
    t0: TowerPoint,
    res_mod: Arc<QuadModulus<RatFunc>>,
    res_curve: Curve<ResidueElem>,
    res_p1: ResiduePoint,
    res_t0: ResiduePoint,
    // `P₂` over ℚ(t₂)(h₂), for cheap multiples.
    uni2_curve: Curve<QuadExt<RatFunc>>,
    uni2_p: CurvePoint<QuadExt<RatFunc>>,
    combos: Mutex<BTreeMap<(i64, i64), TowerPoint>>,
}

impl fmt::Debug for KrContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("KrContext(y² = x³ + x + 1)")
    }
}

impl Default for KrContext {
    fn default() -> Self {
        KrContext::new()
    }
}

fn cubic(t: &RatFunc) -> RatFunc {
    t.pow(3) + t + &t.one_like()
}

fn univariate_model(var: &str, h: &str) -> (Curve<QuadExt<RatFunc>>, CurvePoint<QuadExt<RatFunc>>, Arc<QuadModulus<RatFunc>>) {
    let t = RatFunc::variable(Var::new(var));
    let m = QuadExt::modulus(cubic(&t), h);
    let one = QuadExt::from_base(t.one_like(), &m);
    let curve = Curve::new(one.clone(), one).expect("nonsingular");
    let p = CurvePoint::Affine(QuadExt::from_base(t, &m), QuadExt::generator(&m));
    (curve, p, m)
}

impl KrContext {
    pub fn new() -> Self {
        let t1 = MultiRatFunc::t1();
        let t2 = MultiRatFunc::t2();
        let d1 = t1.pow(3) + &t1 + &MultiRatFunc::one();
        let d2 = t2.pow(3) + &t2 + &MultiRatFunc::one();
        let h1 = QuadExt::modulus(d1, "h1");
        let h2 = QuadExt::modulus(QuadExt::from_base(d2, &h1), "h2");
        let lift = |f: MultiRatFunc| QuadExt::from_base(QuadExt::from_base(f, &h1), &h2);
        let one = lift(MultiRatFunc::one());
        let curve = Curve::new(one.clone(), one.clone()).expect("nonsingular");
        let p1 = CurvePoint::Affine(lift(t1), QuadExt::from_base(QuadExt::generator(&h1), &h2));
        let p2 = CurvePoint::Affine(lift(t2), QuadExt::generator(&h2));
        let t0 = CurvePoint::Affine(lift(MultiRatFunc::zero()), one);
        let (res_curve, res_p1, res_mod) = univariate_model("t1", "h1");
        let res_one = QuadExt::from_base(RatFunc::one(Var::new("t1")), &res_mod);
        let res_t0 = CurvePoint::Affine(res_one.zero_like(), res_one);
        let (uni2_curve, uni2_p, _) = univariate_model("t2", "h2");
        let ctx = KrContext {
            h1,
            h2,
            curve,
            p1,
            p2,
            t0,
            res_mod,
            res_curve,
            res_p1,
            res_t0,
            uni2_curve,
            uni2_p,
            combos: Mutex::new(BTreeMap::new()),
        };
        debug_assert!(ctx.curve.on_curve(&ctx.p1) && ctx.curve.on_curve(&ctx.p2) && ctx.curve.on_curve(&ctx.t0));
        ctx
    }

    pub fn curve(&self) -> &Curve<TowerElem> {
        &self.curve
    }

    pub fn p1(&self) -> &TowerPoint {
        &self.p1
    }

    pub fn p2(&self) -> &TowerPoint {
        &self.p2
    }

    pub fn t0(&self) -> &TowerPoint {
        &self.t0
    }

    pub fn residue_curve(&self) -> &Curve<ResidueElem> {
        &self.res_curve
    }

    pub fn residue_modulus(&self) -> &Arc<QuadModulus<RatFunc>> {
        &self.res_mod
    }

    /// `f ∈ ℚ(t₁,t₂)` as a tower element.
    pub fn lift(&self, f: MultiRatFunc) -> TowerElem {
        QuadExt::from_base(QuadExt::from_base(f, &self.h1), &self.h2)
    }

    /// `c₀₀ + c₁₀h₁ + c₀₁h₂ + c₁₁h₁h₂`.
    pub fn tower(&self, c00: MultiRatFunc, c10: MultiRatFunc, c01: MultiRatFunc, c11: MultiRatFunc) -> TowerElem {
        QuadExt::new(QuadExt::new(c00, c10, &self.h1), QuadExt::new(c01, c11, &self.h1), &self.h2)
    }

    /// Residue-field element `a + b·h₁`.
    pub fn residue(&self, a: RatFunc, b: RatFunc) -> ResidueElem {
        QuadExt::new(a, b, &self.res_mod)
    }

    fn embed_t1(&self, e: &QuadExt<RatFunc>) -> TowerElem {
        self.tower(MultiRatFunc::from_t1(e.a()), MultiRatFunc::from_t1(e.b()), MultiRatFunc::zero(), MultiRatFunc::zero())
    }

    fn embed_t2(&self, e: &QuadExt<RatFunc>) -> TowerElem {
        self.tower(MultiRatFunc::from_t2(e.a()), MultiRatFunc::zero(), MultiRatFunc::from_t2(e.b()), MultiRatFunc::zero())
    }

    fn embed_point<G: Fn(&QuadExt<RatFunc>) -> TowerElem>(p: &CurvePoint<QuadExt<RatFunc>>, g: G) -> TowerPoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(g(x), g(y)),
        }
    }

    /// `n·(t₁, h₁)` over the residue field.
    pub fn residue_multiple(&self, n: i64) -> Result<ResiduePoint, KrError> {
        Ok(self.res_curve.scalar_mul_unchecked(n, &self.res_p1)?)
    }

    /// `nP₁ ⊕ rP₂`. Multiples of each point are formed in one variable and
    /// added once in the tower.
    pub fn combo_point(&self, n: i64, r: i64) -> Result<TowerPoint, KrError> {
        if let Some(p) = self.combos.lock().expect("combo cache poisoned").get(&(n, r)) {
            return Ok(p.clone());
        }
        let a = Self::embed_point(&self.residue_multiple(n)?, |e| self.embed_t1(e));
        let b = Self::embed_point(&self.uni2_curve.scalar_mul_unchecked(r, &self.uni2_p)?, |e| self.embed_t2(e));
        let p = self.curve.add_unchecked(&a, &b)?;
        self.combos.lock().expect("combo cache poisoned").insert((n, r), p.clone());
        Ok(p)
    }

    /// `x(nP₁ + rP₂)`.
    pub fn combo_x(&self, n: i64, r: i64) -> Result<TowerElem, KrError> {
        // x(−Q) = x(Q)
        let (n, r) = if r < 0 || (r == 0 && n < 0) { (-n, -r) } else { (n, r) };
        match self.combo_point(n, r)? {
            CurvePoint::Affine(x, _) => Ok(x),
            CurvePoint::Infinity => Err(KrError::DegenerateForm(format!("{n}P1 + {r}P2"))),
        }
    }

    /// `(A, B) = (x(nP₁ + rP₂), x(mP₁ + P₂))`.
    pub fn div_form(&self, m: i64, n: i64, r: i64) -> Result<(TowerElem, TowerElem), KrError> {
        if n == 0 || r == 0 {
            return Err(KrError::Precondition(format!("n and r must be nonzero, got n = {n}, r = {r}")));
        }
        Ok((self.combo_x(n, r)?, self.combo_x(m, 1)?))
    }

    /// `A·z² + B·w² = 1` exactly.
    pub fn verify_div_witness(&self, m: i64, n: i64, r: i64, z: &TowerElem, w: &TowerElem) -> Result<bool, KrError> {
        if Field::is_zero(z) || Field::is_zero(w) {
            return Err(KrError::Precondition("z and w must be nonzero".into()));
        }
        let (a, b) = self.div_form(m, n, r)?;
        Ok(a * &z.square() + &(b * &w.square()) == z.one_like())
    }

    /// `P₂′ = mP₁ + P₂ = (t₂′, h₂′)`.
    pub fn rewrite_basis(&self, m: i64) -> Result<ShiftedBasis, KrError> {
        match self.combo_point(m, 1)? {
            CurvePoint::Affine(t2p, h2p) => Ok(ShiftedBasis { m, t2p, h2p }),
            CurvePoint::Infinity => Err(KrError::DegenerateShift(m)),
        }
    }

    /// One grid cell of the valuation claim.
    pub fn grid_cell(&self, m: i64, n: i64, r: i64) -> Result<GridCell, KrError> {
        let s = n - m * r;
        if s == 0 {
            return Err(KrError::Precondition(format!("s = n − m·r must be nonzero for (m,n,r) = ({m},{n},{r})")));
        }
        let expansion = self.wm_expansion(m, &self.combo_x(n, r)?)?;
        let wm_a = expansion.valuation().expect("nonzero expansion");
        let wm_b = self.wm_valuation(m, &self.combo_x(m, 1)?)?;
        let xsr = self.residue_xsr(s, r)?;
        // Same test as `residue_consistency`, sharing the expansion.
        let residue_ok = wm_a == 0 && expansion.coeff(0) == xsr;
        let square = is_square_in_residue(&xsr)?;
        Ok(GridCell { m, n, r, s, wm_a, wm_b, residue_ok, square })
    }
}

/// The generators `t₂′, h₂′` of `F` over `ℚ(t₁, h₁)`.
#[derive(Clone, Debug)]
pub struct ShiftedBasis {
    pub m: i64,
    pub t2p: TowerElem,
    pub h2p: TowerElem,
}

impl ShiftedBasis {
    /// `(t₂, h₂) = P₂′ − mP₁`, computed from `t₂′, h₂′`.
    pub fn recover(&self, ctx: &KrContext) -> Result<(TowerElem, TowerElem), KrError> {
        let shift = ctx.curve.scalar_mul_unchecked(-self.m, &ctx.p1)?;
        let p = CurvePoint::Affine(self.t2p.clone(), self.h2p.clone());
        match ctx.curve.add_unchecked(&p, &shift)? {
            CurvePoint::Affine(x, y) => Ok((x, y)),
            CurvePoint::Infinity => Err(KrError::DegenerateShift(self.m)),
        }
    }
}

/// `m=.. n=.. r=.. s=.. w_m(A)=.. residue_ok=.. square=..`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub m: i64,
    pub n: i64,
    pub r: i64,
    pub s: i64,
    /// `w_m(x(nP₁ + rP₂))`.
    pub wm_a: i64,
    /// `w_m(x(mP₁ + P₂))`.
    pub wm_b: i64,
    pub residue_ok: bool,
    pub square: bool,
}

impl GridCell {
    /// The claim for this cell: `w_m(B) = 1`, `w_m(A) = 0`, the residue
    /// matches `x_{s,r}` and is not a square.
    pub fn holds(&self) -> bool {
        self.wm_b == 1 && self.wm_a == 0 && self.residue_ok && !self.square
    }
}

impl fmt::Display for GridCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} n={} r={} s={} w_m(A)={} residue_ok={} square={}",
            self.m, self.n, self.r, self.s, self.wm_a, self.residue_ok, self.square
        )
    }
}

/// `2s² = N (s=..): OK|FAIL` lines for the divisor claim.
pub fn divisor_line(s: i64, r: i64, d: &DivisorCount) -> String {
    let expected = 2 * s * s;
    let ok = d.zero_count == expected && d.all_simple;
    format!(
        "2s² = {expected} (s={s}, r={r}): zeros={} simple={} {}",
        d.zero_count,
        d.all_simple,
        if ok { "OK" } else { "FAIL" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_points_and_combos() {
        let ctx = KrContext::new();
        assert_eq!(&ctx.combo_point(1, 0).unwrap(), ctx.p1());
        assert_eq!(&ctx.combo_point(0, 1).unwrap(), ctx.p2());
        assert!(ctx.combo_point(0, 0).unwrap().is_infinity());
        let p = ctx.combo_point(1, 1).unwrap();
        assert!(ctx.curve().on_curve(&p));
        // Chord formula: ((h₂−h₁)² − (t₁+t₂)(t₂−t₁)²)/(t₂−t₁)².
        let t1 = MultiRatFunc::t1();
        let t2 = MultiRatFunc::t2();
        let h1 = ctx.tower(MultiRatFunc::zero(), MultiRatFunc::one(), MultiRatFunc::zero(), MultiRatFunc::zero());
        let h2 = ctx.tower(MultiRatFunc::zero(), MultiRatFunc::zero(), MultiRatFunc::one(), MultiRatFunc::zero());
        let dt = ctx.lift(t2.clone() - &t1);
        let num = (h2 - &h1).square() - &(ctx.lift(t1 + &t2) * &dt.square());
        assert_eq!(p.x().unwrap(), &num.try_div(&dt.square()).unwrap());
        assert!(Field::is_zero(p.x().unwrap().c10()));
    }

    #[test]
    fn combos_agree_with_tower_group_law() {
        let ctx = KrContext::new();
        let c = ctx.curve();
        let direct = c.add(&c.double(ctx.p1()).unwrap(), ctx.p2()).unwrap();
        assert_eq!(ctx.combo_point(2, 1).unwrap(), direct);
        let neg = c.add(ctx.p1(), &ctx.p2().neg()).unwrap();
        assert_eq!(ctx.combo_point(1, -1).unwrap(), neg);
    }

    #[test]
    fn div_form_examples() {
        let ctx = KrContext::new();
        let (a, b) = ctx.div_form(1, 2, 2).unwrap();
        assert_eq!(a, ctx.combo_x(2, 2).unwrap());
        assert_eq!(b, ctx.combo_x(1, 1).unwrap());
        let (_, b) = ctx.div_form(0, 3, 2).unwrap();
        assert_eq!(b, ctx.lift(MultiRatFunc::t2()));
        assert!(ctx.div_form(1, 0, 2).is_err());
    }

    #[test]
    fn witness_verification() {
        let ctx = KrContext::new();
        let zero = ctx.lift(MultiRatFunc::zero());
        let one = ctx.lift(MultiRatFunc::one());
        assert!(ctx.verify_div_witness(1, 1, 1, &zero, &one).is_err());
        assert!(!ctx.verify_div_witness(1, 1, 1, &one, &one).unwrap());
        // z = 1/A would need B·w² = 1 − A·z² = 0.
        let (a, _) = ctx.div_form(1, 2, 1).unwrap();
        let z = a.inv().unwrap();
        assert!(!ctx.verify_div_witness(1, 2, 1, &z, &one).unwrap());
    }

    #[test]
    fn rewrite_basis_round_trip() {
        let ctx = KrContext::new();
        let t2 = ctx.lift(MultiRatFunc::t2());
        let b0 = ctx.rewrite_basis(0).unwrap();
        assert_eq!(b0.t2p, t2);
        assert_eq!(&b0.h2p, ctx.p2().y().unwrap());
        for m in 0..=2 {
            let basis = ctx.rewrite_basis(m).unwrap();
            let (x, y) = basis.recover(&ctx).unwrap();
            assert_eq!(x, t2, "m = {m}");
            assert_eq!(&y, ctx.p2().y().unwrap());
        }
        let b1 = ctx.rewrite_basis(1).unwrap();
        assert_eq!(b1.t2p, ctx.combo_x(1, 1).unwrap());
    }

    #[test]
    fn grid_cell_line() {
        let cell = GridCell { m: 1, n: 1, r: 2, s: -1, wm_a: 0, wm_b: 1, residue_ok: true, square: false };
        assert_eq!(cell.to_string(), "m=1 n=1 r=2 s=-1 w_m(A)=0 residue_ok=true square=false");
        assert!(cell.holds());
        assert_eq!(
            serde_json::to_string(&cell).unwrap(),
            r#"{"m":1,"n":1,"r":2,"s":-1,"wm_a":0,"wm_b":1,"residue_ok":true,"square":false}"#
        );
    }
}
