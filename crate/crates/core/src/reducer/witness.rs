//! Witnesses from integer assignments, and exact verification.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{Field, Order, RatFunc, Var};
use crate::denef::DenefContext;
use crate::elliptic::CurvePoint;

use super::syspoly::COEFF_VAR;
use super::{EquationSystem, Fold, GadgetKind, Provenance, ReduceError, SlotDef};

/// Values for some of the system's variables.
///
/// `coverage[g]` is false exactly for gadgets whose auxiliary variables were
/// left unassigned (the Com and five-square witnesses of multiplication gadgets).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WitnessMap {
    pub values: BTreeMap<String, RatFunc>,
    pub coverage: Vec<bool>,
}

impl WitnessMap {
    pub fn get(&self, name: &str) -> Option<&RatFunc> {
        self.values.get(name)
    }

    pub fn set(&mut self, name: &str, value: RatFunc) {
        self.values.insert(name.to_string(), value);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Uncovered,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Uncovered => "uncovered",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationCheck {
    pub index: usize,
    pub gadget: Provenance,
    pub slots: Vec<String>,
    pub status: CheckStatus,
}

/// `ord_{t⁻¹}(v₁·v₂ − v₃) > 0` for a multiplication gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultCheck {
    pub slots: Vec<String>,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub equations: Vec<EquationCheck>,
    pub mult: Vec<MultCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub folded: Option<CheckStatus>,
}

impl VerifyReport {
    pub fn count(&self, s: CheckStatus) -> usize {
        self.equations.iter().filter(|e| e.status == s).count()
    }

    /// No equation, multiplication check or fold failed.
    pub fn passed(&self) -> bool {
        self.count(CheckStatus::Fail) == 0
            && self.mult.iter().all(|m| m.status != CheckStatus::Fail)
            && self.folded != Some(CheckStatus::Fail)
    }

    /// Every multiplication gadget was decided and passed.
    pub fn mult_passed(&self) -> bool {
        self.mult.iter().all(|m| m.status == CheckStatus::Pass)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.equations.iter().filter(|e| e.status == CheckStatus::Fail) {
            writeln!(f, "equation {} [{}] on {}: fail", e.index, e.gadget, e.slots.join(", "))?;
        }
        for m in &self.mult {
            writeln!(f, "mult {}*{} = {}: {}", m.slots[0], m.slots[1], m.slots[2], m.status)?;
        }
        if let Some(s) = self.folded {
            writeln!(f, "folded: {s}")?;
        }
        write!(
            f,
            "equations: {} pass, {} fail, {} uncovered",
            self.count(CheckStatus::Pass),
            self.count(CheckStatus::Fail),
            self.count(CheckStatus::Uncovered)
        )
    }
}

fn slot_integers(sys: &EquationSystem, sigma: &dyn Fn(&str) -> Option<i64>) -> Result<BTreeMap<String, i64>, ReduceError> {
    let mut ints: BTreeMap<String, i64> = BTreeMap::new();
    for (name, def) in &sys.slots {
        let get = |s: &String| ints[s];
        let of = || ReduceError::Overflow(name.clone());
        let n = match def {
            SlotDef::Var(v) => sigma(v).ok_or_else(|| ReduceError::MissingAssignment(v.clone()))?,
            SlotDef::Const(c) => *c,
            SlotDef::Neg(a) => get(a).checked_neg().ok_or_else(of)?,
            SlotDef::Add(a, b) => get(a).checked_add(get(b)).ok_or_else(of)?,
            SlotDef::Sub(a, b) => get(a).checked_sub(get(b)).ok_or_else(of)?,
            SlotDef::Mul(a, b) => get(a).checked_mul(get(b)).ok_or_else(of)?,
        };
        ints.insert(name.clone(), n);
    }
    Ok(ints)
}

fn affine(ctx: &DenefContext, n: i64) -> Result<(RatFunc, RatFunc), ReduceError> {
    match ctx.compute_pn(n)? {
        CurvePoint::Affine(x, y) => Ok((x, y)),
        CurvePoint::Infinity => Err(ReduceError::Denef(crate::denef::DenefError::TorsionDegenerate(n))),
    }
}

/// Witness for the assignment `sigma`: every slot gets `Zₙ` for its integer,
/// every S-membership and addition gadget gets the points `Pₙ` it needs.
pub(super) fn build(
    ctx: &DenefContext,
    a: i64,
    sys: &EquationSystem,
    sigma: &dyn Fn(&str) -> Option<i64>,
) -> Result<WitnessMap, ReduceError> {
    let ints = slot_integers(sys, sigma)?;
    let var = Var::new(COEFF_VAR);
    let t = RatFunc::variable(var.clone());
    let zero = RatFunc::zero(var.clone());
    let one = RatFunc::one(var.clone());
    let a = RatFunc::from_int(var.clone(), a);
    let d = ctx.d().clone();
    let two_d = d.clone() * &RatFunc::from_int(var.clone(), 2);
    let three = RatFunc::from_int(var, 3);
    let mut w = WitnessMap { values: BTreeMap::new(), coverage: vec![true; sys.gadgets.len()] };
    for (name, n) in &ints {
        w.set(name, ctx.compute_zn(*n)?.value);
    }
    for (gi, g) in sys.gadgets.iter().enumerate() {
        let mut vals: BTreeMap<&str, RatFunc> = g.aux.iter().map(|(r, _)| (*r, zero.clone())).collect();
        match g.kind {
            GadgetKind::SMembership => {
                let n = ints[&g.slots[0]];
                match n {
                    0 => {
                        vals.insert("e0", one.clone());
                    }
                    1 => {
                        vals.insert("e1", one.clone());
                    }
                    _ => {
                        let k = n.div_euclid(2);
                        let (u, wy) = affine(ctx, k)?;
                        let (x2, y2) = affine(ctx, 2 * k)?;
                        let (x, y) = affine(ctx, n)?;
                        let den = two_d.clone() * &wy;
                        vals.insert("mu", (three.clone() * &u.square() + &a).try_div(&den).expect("w ≠ 0"));
                        vals.insert("gamma", den.inv().expect("w ≠ 0"));
                        vals.insert("zeta", (t.clone() * &y).inv().expect("y ≠ 0"));
                        if n.rem_euclid(2) == 0 {
                            vals.insert("e2", one.clone());
                        } else {
                            let dx = t.clone() - &x2;
                            vals.insert("e3", one.clone());
                            vals.insert("nu", (one.clone() - &y2).try_div(&dx).expect("X₂ₖ ≠ t"));
                            vals.insert("delta", dx.inv().expect("X₂ₖ ≠ t"));
                        }
                        vals.extend([("u", u), ("w", wy), ("X2", x2), ("Y2", y2), ("x", x), ("y", y)]);
                    }
                }
            }
            GadgetKind::Add => {
                let [n1, n2, n3] = [0, 1, 2].map(|i| ints[&g.slots[i]]);
                debug_assert_eq!(n1 + n2, n3);
                let case = if n1 == 0 {
                    "a1"
                } else if n2 == 0 {
                    "a2"
                } else if n1 + n2 == 0 {
                    "a3"
                } else if n1 == n2 {
                    "a4"
                } else {
                    "a5"
                };
                vals.insert(case, one.clone());
                if case == "a4" || case == "a5" {
                    let (x1, y1) = affine(ctx, n1)?;
                    let (x2, y2) = affine(ctx, n2)?;
                    let (x3, y3) = affine(ctx, n3)?;
                    let (num, den) = if case == "a4" {
                        (three.clone() * &x1.square() + &a, two_d.clone() * &y1)
                    } else {
                        (y2.clone() - &y1, x2.clone() - &x1)
                    };
                    vals.insert("lam", num.try_div(&den).expect("nonzero slope denominator"));
                    vals.insert("kap", den.inv().expect("nonzero slope denominator"));
                    for (r, y) in [("r1", &y1), ("r2", &y2), ("r3", &y3)] {
                        vals.insert(r, (t.clone() * y).inv().expect("y ≠ 0"));
                    }
                    vals.extend([("x1", x1), ("y1", y1), ("x2", x2), ("y2", y2), ("x3", x3), ("y3", y3)]);
                }
            }
            GadgetKind::Mult => {
                w.coverage[gi] = false;
                continue;
            }
            GadgetKind::Negation | GadgetKind::Constant | GadgetKind::Equality => {}
        }
        for (r, v) in vals {
            w.set(g.aux(r), v);
        }
    }
    Ok(w)
}

fn status_of(v: Option<RatFunc>) -> CheckStatus {
    match v {
        None => CheckStatus::Uncovered,
        Some(v) if v.is_zero() => CheckStatus::Pass,
        Some(_) => CheckStatus::Fail,
    }
}

fn eval_fold(f: &Fold, t: &RatFunc, leaves: &[Option<RatFunc>]) -> Option<RatFunc> {
    match f {
        Fold::Leaf(i) => leaves[*i].clone(),
        Fold::Conj(p, q) => {
            let (p, q) = (eval_fold(p, t, leaves)?, eval_fold(q, t, leaves)?);
            Some(p.square() + &(t.clone() * &q.square()))
        }
    }
}

/// Substitutes `w` into every equation and checks the multiplication gadgets
/// by the order criterion.
pub(super) fn verify(sys: &EquationSystem, w: &WitnessMap) -> VerifyReport {
    let t = RatFunc::variable(Var::new(COEFF_VAR));
    let lookup = |v: &str| w.get(v).cloned();
    let values: Vec<Option<RatFunc>> = sys.equations.iter().map(|e| e.poly.eval(&t, &lookup)).collect();
    let equations = sys
        .equations
        .iter()
        .zip(&values)
        .enumerate()
        .map(|(index, (e, v))| EquationCheck {
            index,
            gadget: e.provenance,
            slots: sys.gadgets[e.gadget].slots.clone(),
            status: status_of(v.clone()),
        })
        .collect();
    let mult = sys
        .gadgets
        .iter()
        .filter(|g| g.kind == GadgetKind::Mult)
        .map(|g| {
            let vals: Option<Vec<&RatFunc>> = g.slots.iter().map(|s| w.get(s)).collect();
            let status = match vals {
                None => CheckStatus::Uncovered,
                Some(v) => {
                    let diff = v[0].clone() * v[1] - v[2];
                    match diff.ord_t_inverse() {
                        Order::Infinite => CheckStatus::Pass,
                        Order::Finite(k) if k > 0 => CheckStatus::Pass,
                        Order::Finite(_) => CheckStatus::Fail,
                    }
                }
            };
            MultCheck { slots: g.slots.clone(), status }
        })
        .collect();
    let folded = sys.folded.as_ref().map(|f| status_of(eval_fold(f, &t, &values)));
    VerifyReport { equations, mult, folded }
}
