//! Gadget emission. Auxiliary names are `<owner>'<role>`, which no input
//! variable can collide with.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::IntPoly;
use crate::syntax::Expr;

use super::syspoly::{clear_denominators, disj_combine, SysPoly};
use super::{Equation, EquationSystem, Gadget, GadgetKind, Provenance, ReduceError, SlotDef};

pub(crate) struct Emitter {
    a: i64,
    b: i64,
    variables: Vec<String>,
    known: HashSet<String>,
    equations: Vec<Equation>,
    gadgets: Vec<Gadget>,
    slots: Vec<(String, SlotDef)>,
    nodes: usize,
    adds: usize,
    mults: usize,
    consts: BTreeMap<i64, String>,
}

fn var(s: &str) -> SysPoly {
    SysPoly::var(s)
}

impl Emitter {
    pub(crate) fn new(a: i64, b: i64) -> Self {
        Emitter {
            a,
            b,
            variables: Vec::new(),
            known: HashSet::new(),
            equations: Vec::new(),
            gadgets: Vec::new(),
            slots: Vec::new(),
            nodes: 0,
            adds: 0,
            mults: 0,
            consts: BTreeMap::new(),
        }
    }

    pub(crate) fn finish(self, root: String) -> EquationSystem {
        EquationSystem {
            variables: self.variables,
            equations: self.equations,
            gadgets: self.gadgets,
            slots: self.slots,
            root: Some(root),
            folded: None,
        }
    }

    /// `D = t³ + at + b`.
    fn d(&self) -> SysPoly {
        SysPoly::constant(IntPoly::from_i64s(&[self.b, self.a, 0, 1]))
    }

    /// `D·y² − x³ − a·x − b`.
    fn on_twist(&self, x: &SysPoly, y: &SysPoly) -> SysPoly {
        self.d() * y.square() - x.pow(3) - SysPoly::int(self.a) * x - SysPoly::int(self.b)
    }

    fn declare(&mut self, name: &str) {
        if self.known.insert(name.to_string()) {
            self.variables.push(name.to_string());
        }
    }

    fn slot(&mut self, name: String, def: SlotDef) -> String {
        self.declare(&name);
        self.slots.push((name.clone(), def));
        name
    }

    fn begin(&mut self, kind: GadgetKind, slots: &[&str]) -> usize {
        self.gadgets.push(Gadget { kind, slots: slots.iter().map(|s| s.to_string()).collect(), aux: Vec::new() });
        self.gadgets.len() - 1
    }

    /// Declares `<owner>'<role>` for each role, in order.
    fn aux<const N: usize>(&mut self, g: usize, owner: &str, roles: [&'static str; N]) -> [SysPoly; N] {
        roles.map(|r| {
            let name = format!("{owner}'{r}");
            self.declare(&name);
            self.gadgets[g].aux.push((r, name.clone()));
            var(&name)
        })
    }

    fn name(&self, g: usize, role: &str) -> String {
        self.gadgets[g].aux(role).to_string()
    }

    fn push(&mut self, g: usize, provenance: Provenance, poly: SysPoly) {
        self.equations.push(Equation { poly, provenance, gadget: g });
    }

    fn sel(&mut self, g: usize, selector: &SysPoly, provenance: Provenance, poly: SysPoly) {
        self.push(g, provenance, disj_combine(selector, &poly));
    }

    fn sel_clear(&mut self, g: usize, selector: &SysPoly, num: SysPoly, den: SysPoly, rhs: &SysPoly, cert: &str) {
        for eq in clear_denominators(&num, &den, rhs, cert) {
            self.sel(g, selector, Provenance::DenominatorClearing, eq);
        }
    }

    pub(crate) fn user_slot(&mut self, v: &str) {
        self.slot(v.to_string(), SlotDef::Var(v.to_string()));
        self.s_membership(v);
    }

    fn node(&mut self, def: SlotDef) -> String {
        self.nodes += 1;
        self.slot(format!("n'{}", self.nodes), def)
    }

    /// Slot name for the value of `e`.
    pub(crate) fn compile(&mut self, e: &Expr) -> Result<String, ReduceError> {
        Ok(match e {
            Expr::Int(k) => self.const_slot(to_i64(k)?)?,
            Expr::Var(v) => v.clone(),
            Expr::Neg(a) => {
                let sa = self.compile(a)?;
                let n = self.node(SlotDef::Neg(sa.clone()));
                self.negation(&sa, &n);
                n
            }
            Expr::Add(a, b) => {
                let (sa, sb) = (self.compile(a)?, self.compile(b)?);
                let n = self.node(SlotDef::Add(sa.clone(), sb.clone()));
                self.add(&sa, &sb, &n);
                n
            }
            Expr::Sub(a, b) => {
                let (sa, sb) = (self.compile(a)?, self.compile(b)?);
                let n = self.node(SlotDef::Sub(sa.clone(), sb.clone()));
                self.add(&n, &sb, &sa);
                n
            }
            Expr::Mul(a, b) => {
                let (sa, sb) = (self.compile(a)?, self.compile(b)?);
                self.product(&sa, &sb)
            }
            Expr::Pow(a, k) => {
                if *k == 0 {
                    return self.const_slot(1);
                }
                let sa = self.compile(a)?;
                let mut acc = sa.clone();
                for _ in 1..*k {
                    acc = self.product(&acc, &sa);
                }
                acc
            }
            Expr::Div(..) => return Err(ReduceError::NonIntegerCoefficient { position: None }),
        })
    }

    fn product(&mut self, sa: &str, sb: &str) -> String {
        let n = self.node(SlotDef::Mul(sa.to_string(), sb.to_string()));
        self.s_membership(&n);
        self.mult(sa, sb, &n);
        n
    }

    /// Slot pinned to `Z_c`: `Z₀ = 0`, `Z₁ = 1`, then double-and-add.
    fn const_slot(&mut self, c: i64) -> Result<String, ReduceError> {
        if let Some(s) = self.consts.get(&c) {
            return Ok(s.clone());
        }
        let name = format!("k'{c}");
        match c {
            0 | 1 => {
                self.slot(name.clone(), SlotDef::Const(c));
                let g = self.begin(GadgetKind::Constant, &[&name]);
                self.push(g, Provenance::Constant, var(&name) - SysPoly::int(c));
            }
            _ if c < 0 => {
                let pos = self.const_slot(c.checked_neg().ok_or_else(|| ReduceError::ConstantTooLarge(c.to_string()))?)?;
                self.slot(name.clone(), SlotDef::Const(c));
                self.negation(&pos, &name);
            }
            _ if c % 2 == 0 => {
                let half = self.const_slot(c / 2)?;
                self.slot(name.clone(), SlotDef::Const(c));
                self.add(&half, &half, &name);
            }
            _ => {
                let prev = self.const_slot(c - 1)?;
                let one = self.const_slot(1)?;
                self.slot(name.clone(), SlotDef::Const(c));
                self.add(&prev, &one, &name);
            }
        }
        self.consts.insert(c, name.clone());
        Ok(name)
    }

    /// `v ∈ S = {Zₙ}`: `v = 0`, or `v = 1`, or `v = x/(t·y)` for
    /// `(x, y) = 2(u, w)` or `(x, y) = 2(u, w) ⊕ (t, 1)` with `(u, w)` on the twist.
    fn s_membership(&mut self, v: &str) {
        let g = self.begin(GadgetKind::SMembership, &[v]);
        let [e0, e1, e2, e3] = self.aux(g, v, ["e0", "e1", "e2", "e3"]);
        let [u, w, mu, _, x2, y2, x, y, nu, _, _] =
            self.aux(g, v, ["u", "w", "mu", "gamma", "X2", "Y2", "x", "y", "nu", "delta", "zeta"]);
        let [gamma, delta, zeta] = ["gamma", "delta", "zeta"].map(|r| self.name(g, r));
        let (sv, t, d, a) = (var(v), SysPoly::t(), self.d(), SysPoly::int(self.a));
        self.push(g, Provenance::Combiner, &e0 + &e1 + &e2 + &e3 - SysPoly::one());
        self.sel(g, &e0, Provenance::SMembership, sv.clone());
        self.sel(g, &e1, Provenance::SMembership, &sv - SysPoly::one());
        let s = &e2 + &e3;
        self.sel(g, &s, Provenance::SMembership, self.on_twist(&u, &w));
        self.sel_clear(g, &s, SysPoly::int(3) * u.square() + &a, SysPoly::int(2) * &d * &w, &mu, &gamma);
        self.sel(g, &s, Provenance::SMembership, &x2 - &d * mu.square() + SysPoly::int(2) * &u);
        self.sel(g, &s, Provenance::SMembership, &y2 - &mu * (&u - &x2) + &w);
        self.sel_clear(g, &s, x.clone(), &t * &y, &sv, &zeta);
        self.sel(g, &e2, Provenance::SMembership, &x - &x2);
        self.sel(g, &e2, Provenance::SMembership, &y - &y2);
        self.sel_clear(g, &e3, SysPoly::one() - &y2, &t - &x2, &nu, &delta);
        self.sel(g, &e3, Provenance::SMembership, &x - &d * nu.square() + &x2 + &t);
        self.sel(g, &e3, Provenance::SMembership, &y - &nu * (&x2 - &x) + &y2);
    }

    /// `v₁ ⊕ v₂ = v₃` on `S`: one of the slots is `Z₀`, the sum is `Z₀`, or
    /// the three points satisfy the doubling or chord law.
    fn add(&mut self, v1: &str, v2: &str, v3: &str) {
        self.adds += 1;
        let owner = format!("a'{}", self.adds);
        let g = self.begin(GadgetKind::Add, &[v1, v2, v3]);
        let [a1, a2, a3, a4, a5] = self.aux(g, &owner, ["a1", "a2", "a3", "a4", "a5"]);
        let [x1, y1, x2, y2, x3, y3] = self.aux(g, &owner, ["x1", "y1", "x2", "y2", "x3", "y3"]);
        self.aux(g, &owner, ["r1", "r2", "r3"]);
        let [lam, _] = self.aux(g, &owner, ["lam", "kap"]);
        let (s1, s2, s3) = (var(v1), var(v2), var(v3));
        let (t, d) = (SysPoly::t(), self.d());
        let kap = self.name(g, "kap");
        self.push(g, Provenance::Combiner, &a1 + &a2 + &a3 + &a4 + &a5 - SysPoly::one());
        self.sel(g, &a1, Provenance::Add, s1.clone());
        self.sel(g, &a1, Provenance::Add, &s3 - &s2);
        self.sel(g, &a2, Provenance::Add, s2.clone());
        self.sel(g, &a2, Provenance::Add, &s3 - &s1);
        self.sel(g, &a3, Provenance::Add, &s1 + &s2);
        self.sel(g, &a3, Provenance::Add, s3.clone());
        let s = &a4 + &a5;
        let pts = [(&x1, &y1, &s1, "r1"), (&x2, &y2, &s2, "r2"), (&x3, &y3, &s3, "r3")];
        for (x, y, _, _) in pts {
            self.sel(g, &s, Provenance::Add, self.on_twist(x, y));
        }
        for (x, y, sv, r) in pts {
            let r = self.name(g, r);
            self.sel_clear(g, &s, x.clone(), &t * y, sv, &r);
        }
        self.sel(g, &s, Provenance::Add, &x3 - &d * lam.square() + &x1 + &x2);
        self.sel(g, &s, Provenance::Add, &y3 - &lam * (&x1 - &x3) + &y1);
        self.sel(g, &a4, Provenance::Add, &x1 - &x2);
        self.sel(g, &a4, Provenance::Add, &y1 - &y2);
        let a = SysPoly::int(self.a);
        self.sel_clear(g, &a4, SysPoly::int(3) * x1.square() + &a, SysPoly::int(2) * &d * &y1, &lam, &kap);
        self.sel_clear(g, &a5, &y2 - &y1, &x2 - &x1, &lam, &kap);
    }

    /// `w = −v`, since `Z₋ₙ = −Zₙ`.
    fn negation(&mut self, v: &str, w: &str) {
        let g = self.begin(GadgetKind::Negation, &[v, w]);
        self.push(g, Provenance::Add, var(w) + var(v));
    }

    /// `v₁·v₂ − v₃ ∈ T`.
    fn mult(&mut self, v1: &str, v2: &str, v3: &str) {
        self.mults += 1;
        let owner = format!("m'{}", self.mults);
        let g = self.begin(GadgetKind::Mult, &[v1, v2, v3]);
        let [y, com_x] = self.aux(g, &owner, ["y", "comX"]);
        let xs = self.aux(g, &owner, ["X1", "X2", "X3", "X4", "X5"]);
        self.push(g, Provenance::Com, y.square() - com_x.pow(3) + SysPoly::int(4));
        let z = var(v1) * var(v2) - var(v3);
        let sum = xs.iter().fold(SysPoly::zero(), |acc, x| acc + x.square());
        self.push(g, Provenance::FiveSquare, (&y - SysPoly::t()) * z.square() + SysPoly::one() - sum);
    }

    pub(crate) fn equality(&mut self, root: &str) {
        let g = self.begin(GadgetKind::Equality, &[root]);
        self.push(g, Provenance::Equality, var(root));
    }
}

fn to_i64(k: &BigInt) -> Result<i64, ReduceError> {
    k.to_i64().ok_or_else(|| ReduceError::ConstantTooLarge(k.to_string()))
}
