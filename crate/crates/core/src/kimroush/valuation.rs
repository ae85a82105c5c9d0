//! The valuation `w_m` by Laurent expansion in `t₂′ = x(mP₁ + P₂)`.
//!
//! Near the place, `P₂′ = (u, √(u³ + u + 1))` with the root taking the value
//! `+1` at `u = 0`, so `P₂′` specializes to `T₀ = (0, 1)`. Then `P₂ = P₂′ − mP₁`
//! is a point over `k((u))` with `k = ℚ(t₁)(h₁)`, and any tower element is
//! expanded by substituting its coordinates.

use crate::algebra::{series_expand_from, AlgebraError, BivariateSubst, Field, LaurentSeries, QuadSubst, RatFunc, Var};
use crate::elliptic::CurvePoint;

use super::{KrContext, KrError, ResidueElem, TowerElem};

/// Laurent series in `u = t₂′` over the residue field.
pub type ResidueSeries = LaurentSeries<ResidueElem>;

type SeriesPoint = Option<(ResidueSeries, ResidueSeries)>;

const UNIFORMIZER: &str = "u";

fn chord(p: &SeriesPoint, x2: &ResidueSeries, y2: &ResidueSeries) -> Result<SeriesPoint, AlgebraError> {
    let (x1, y1) = match p {
        None => return Ok(Some((x2.clone(), y2.clone()))),
        Some(q) => q,
    };
    let dx = x2.sub_ref(x1);
    if dx.is_zero() {
        // Coincident x to the known precision; the caller retries with more.
        return Err(AlgebraError::SeriesNotInvertible(dx.precision()));
    }
    let lambda = y2.sub_ref(y1).try_div(&dx)?;
    let x3 = lambda.mul_ref(&lambda).sub_ref(x1).sub_ref(x2);
    let y3 = lambda.mul_ref(&x1.sub_ref(&x3)).sub_ref(y1);
    Ok(Some((x3, y3)))
}

impl KrContext {
    fn residue_constant(&self, c: ResidueElem) -> ResidueSeries {
        LaurentSeries::constant(Var::new(UNIFORMIZER), c, i64::MAX)
    }

    /// `P₂ = P₂′ − mP₁` over `k((u))` to precision `prec`.
    pub fn local_p2(&self, m: i64, prec: i64) -> Result<(ResidueSeries, ResidueSeries), AlgebraError> {
        let one = self.residue(RatFunc::one(Var::new("t1")), RatFunc::zero(Var::new("t1")));
        let u = LaurentSeries::uniformizer(Var::new(UNIFORMIZER), one.zero_like(), prec);
        let rhs = u.mul_ref(&u).mul_ref(&u).add_ref(&u).add_ref(&self.residue_constant(one));
        let h = rhs.sqrt()?;
        debug_assert!(h.coeff(0).is_one());
        let (x1, y1) = match &self.res_p1 {
            CurvePoint::Affine(x, y) => (self.residue_constant(x.clone()), self.residue_constant(y.clone())),
            CurvePoint::Infinity => unreachable!("P₁ is affine"),
        };
        let y1 = if m > 0 { y1.neg_ref() } else { y1 };
        let mut p = Some((u, h));
        for _ in 0..m.unsigned_abs() {
            p = chord(&p, &x1, &y1)?;
        }
        p.ok_or(AlgebraError::SeriesNotInvertible(prec))
    }

    /// Expansion of `e` in the uniformizer of `w_m`, to the first precision
    /// (1, 2, 4, …, 512) that shows a nonzero term.
    pub fn wm_expansion(&self, m: i64, e: &TowerElem) -> Result<ResidueSeries, KrError> {
        if Field::is_zero(e) {
            return Err(KrError::ZeroElement);
        }
        let (t1, h1) = match &self.res_p1 {
            CurvePoint::Affine(x, y) => (self.residue_constant(x.clone()), self.residue_constant(y.clone())),
            CurvePoint::Infinity => unreachable!("P₁ is affine"),
        };
        let subst = |prec: i64| {
            let (x2, y2) = self.local_p2(m, prec)?;
            Ok(QuadSubst { base: QuadSubst { base: BivariateSubst { t1: t1.clone(), t2: x2 }, h: h1.clone() }, h: y2 })
        };
        Ok(series_expand_from(e, 1, subst)?)
    }

    /// `w_m(e)`: the order of `e` in `t₂′` with coefficients in `ℚ(t₁)(h₁)`.
    pub fn wm_valuation(&self, m: i64, e: &TowerElem) -> Result<i64, KrError> {
        let s = self.wm_expansion(m, e)?;
        Ok(s.valuation().expect("series_expand returns a nonzero series for a nonzero value"))
    }

    /// `x_{s,r} = x(s·(t₁,h₁) + r·(0,1))` in `ℚ(t₁)(h₁)`.
    pub fn residue_xsr(&self, s: i64, r: i64) -> Result<ResidueElem, KrError> {
        let a = self.res_curve.scalar_mul_unchecked(s, &self.res_p1)?;
        let b = self.res_curve.scalar_mul_unchecked(r, &self.res_t0)?;
        match self.res_curve.add_unchecked(&a, &b)? {
            CurvePoint::Affine(x, _) => Ok(x),
            CurvePoint::Infinity => Err(KrError::DegenerateCombination { s, r }),
        }
    }

    /// `w_m(x(nP₁ + rP₂)) = 0` and its leading coefficient is `x_{s,r}`.
    pub fn residue_consistency(&self, m: i64, n: i64, r: i64) -> Result<bool, KrError> {
        let s = n - m * r;
        if s == 0 {
            return Err(KrError::Precondition(format!("s = n − m·r must be nonzero for (m,n,r) = ({m},{n},{r})")));
        }
        let e = self.wm_expansion(m, &self.combo_x(n, r)?)?;
        Ok(e.valuation() == Some(0) && e.coeff(0) == self.residue_xsr(s, r)?)
    }
}
