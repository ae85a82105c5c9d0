//! The subcommands. Each one returns a report; caps are checked up front.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::thread;

use h10_core::algebra::{LaurentSeries, Order, RatFunc, Rational, ValueAtInfinity, Var};
use h10_core::denef::{five_square_degree_check, DenefContext, DenefError};
use h10_core::elliptic::CurvePoint;
use h10_core::kimroush::{is_square_in_residue, KrContext};
use h10_core::reducer::{
    conj_combine, disj_combine, parse_zpoly, CheckStatus, EquationSystem, ReduceOptions, Reducer, SysPoly, SystemDocument,
    ZPolynomial,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::Report;
use crate::sample;
use crate::CliError;

/// `|n| ≤ 64` for `Zₙ`.
pub const ZN_CAP: i64 = 64;
/// `|n|, |m| ≤ 5` for the multiplication truth table.
pub const MULT_CAP: i64 = 5;
/// `|n|, |m| ≤ 12` for addition checks.
pub const ADD_CAP: i64 = 12;
/// `|m| ≤ 3` and `|n|, |r| ≤ 4` for the valuation grid.
pub const KR_M_CAP: i64 = 3;
pub const KR_NR_CAP: i64 = 4;
/// Divisor counts are run for `s ∈ {1, 2}` and `r ∈ {0, 1, 2}`; `s ≤ 3` is the library cap.
pub const DIVISOR_S: [i64; 2] = [1, 2];
pub const DIVISOR_R: RangeInclusive<i64> = 0..=2;

fn cap(what: &str, range: &RangeInclusive<i64>, limit: i64) -> Result<(), CliError> {
    for v in [*range.start(), *range.end()] {
        if range.start() <= range.end() && v.abs() > limit {
            return Err(CliError::CapExceeded { what: what.to_string(), value: v, cap: limit });
        }
    }
    Ok(())
}

fn rational_json(v: &ValueAtInfinity) -> Value {
    Value::String(v.to_string())
}

pub fn zn(ctx: &DenefContext, range: RangeInclusive<i64>) -> Result<Report, CliError> {
    cap("n", &range, ZN_CAP)?;
    let mut rep = Report::default();
    for n in range {
        let z = ctx.compute_zn(n)?;
        let value = z.value.value_at_infinity();
        let ok = ctx.check_infinity_value(n)?;
        rep.check(
            ok,
            format!("{z}; value_at_infinity = {value}"),
            json!({ "n": n, "z": z.value.to_string(), "value_at_infinity": rational_json(&value), "ord": z.value.ord_t_inverse().to_string() }),
        );
    }
    Ok(rep)
}

pub fn mult_table(ctx: &DenefContext, bound: i64) -> Result<Report, CliError> {
    if !(0..=MULT_CAP).contains(&bound) {
        return Err(CliError::CapExceeded { what: "bound".into(), value: bound, cap: MULT_CAP });
    }
    let mut rep = Report::default();
    let ls = -bound * bound..=bound * bound;
    for n in -bound..=bound {
        for m in -bound..=bound {
            let mut holds = Vec::new();
            for l in ls.clone() {
                if ctx.mult_encoding_holds(n, m, l)? {
                    holds.push(l);
                }
            }
            let ok = holds == [n * m];
            let list = holds.iter().map(i64::to_string).collect::<Vec<_>>().join(", ");
            rep.check(
                ok,
                format!("n={n} m={m} holds_for=[{list}] expected={}", n * m),
                json!({ "n": n, "m": m, "holds_for": holds, "expected": n * m }),
            );
        }
    }
    Ok(rep)
}

pub fn add_check(ctx: &DenefContext, bound: i64) -> Result<Report, CliError> {
    if !(0..=ADD_CAP).contains(&bound) {
        return Err(CliError::CapExceeded { what: "bound".into(), value: bound, cap: ADD_CAP });
    }
    let mut rep = Report::default();
    for n in -bound..=bound {
        for m in -bound..=bound {
            let (law, value) = match ctx.add_encoding_witness(n, m) {
                Ok(w) => {
                    let expected = ValueAtInfinity::Finite(Rational::from_integer((n + m).into()));
                    let value_ok = n + m == 0 || w.zsum.value_at_infinity() == expected;
                    (true, value_ok && ctx.z_of_point(&w.psum).as_ref() == Some(&w.zsum))
                }
                Err(DenefError::GroupLaw { .. }) => (false, false),
                Err(e) => return Err(e.into()),
            };
            rep.check(
                law && value,
                format!("P[{n}] + P[{m}] = P[{}] group_law={law} z_value={value}", n + m),
                json!({ "n": n, "m": m, "sum": n + m, "group_law": law, "z_value": value }),
            );
        }
    }
    Ok(rep)
}

fn grid_keys(ms: &RangeInclusive<i64>, nrs: &RangeInclusive<i64>) -> Vec<(i64, i64, i64)> {
    let mut keys = Vec::new();
    for m in ms.clone() {
        for n in nrs.clone() {
            for r in nrs.clone() {
                if n - m * r != 0 {
                    keys.push((m, n, r));
                }
            }
        }
    }
    keys
}

/// Runs `f` on every key across threads; results come back in key order.
fn par_map<K: Sync, T: Send>(keys: &[K], f: impl Fn(&K) -> T + Sync) -> Vec<T> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(keys.len().max(1));
    let chunk = keys.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = keys.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<T>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub fn kr_claims(ms: RangeInclusive<i64>, nrs: RangeInclusive<i64>) -> Result<Report, CliError> {
    cap("m", &ms, KR_M_CAP)?;
    cap("n, r", &nrs, KR_NR_CAP)?;
    let keys = grid_keys(&ms, &nrs);
    let mut rep = Report::default();
    if keys.is_empty() {
        return Ok(rep);
    }
    let ctx = KrContext::new();
    for cell in par_map(&keys, |&(m, n, r)| ctx.grid_cell(m, n, r)) {
        let cell = cell?;
        let value = serde_json::to_value(&cell).expect("grid cell serializes");
        rep.check(cell.holds(), cell.to_string(), value);
    }
    let jobs: Vec<(i64, i64)> = DIVISOR_S.iter().flat_map(|&s| DIVISOR_R.map(move |r| (s, r))).collect();
    let counts = par_map(&jobs, |&(s, r)| ctx.shifted_x_divisor(s, r));
    let mut by_s: BTreeMap<i64, Vec<Value>> = BTreeMap::new();
    let mut ok_s: BTreeMap<i64, bool> = BTreeMap::new();
    for (&(s, r), d) in jobs.iter().zip(counts) {
        let d = d?;
        let ok = d.zero_count == 2 * s * s && d.all_simple;
        *ok_s.entry(s).or_insert(true) &= ok;
        by_s.entry(s).or_default().push(json!({ "r": r, "zero_count": d.zero_count, "all_simple": d.all_simple }));
    }
    for (s, counts) in by_s {
        let expected = 2 * s * s;
        rep.check(ok_s[&s], format!("2s² = {expected} (s={s})"), json!({ "s": s, "expected": expected, "counts": counts }));
    }
    Ok(rep)
}

pub fn reducer(ctx: DenefContext) -> Result<Reducer, CliError> {
    Ok(Reducer::new(ctx)?)
}

pub fn reduce(r: &Reducer, f: &ZPolynomial, fold: bool, json_out: bool) -> Result<String, CliError> {
    let sys = r.reduce(f, ReduceOptions { fold })?;
    let doc = SystemDocument::new(&sys);
    if json_out {
        return Ok(doc.to_json());
    }
    let mut out = format!("variables ({}): {}\n", doc.variables.len(), doc.variables.join(", "));
    for (i, e) in doc.equations.iter().enumerate() {
        out.push_str(&format!("{i} [{}] ({}): {} = 0\n", e.gadget, e.slots.join(", "), e.poly));
    }
    if let Some(f) = &doc.folded {
        out.push_str(&format!("folded: {f} = 0\n"));
    }
    Ok(out)
}

/// Integer assignments from a JSON object `{"x": 2, ...}`.
pub fn parse_witness(text: &str, f: &ZPolynomial) -> Result<BTreeMap<String, i64>, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Witness(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| CliError::Witness("expected an object of integer assignments".into()))?;
    let vars = f.variables();
    let mut sigma = BTreeMap::new();
    for (k, v) in obj {
        if !vars.contains(k) {
            return Err(CliError::Witness(format!("`{k}` is not a variable of the polynomial")));
        }
        let n = v.as_i64().ok_or_else(|| CliError::Witness(format!("value of `{k}` is not an integer")))?;
        sigma.insert(k.clone(), n);
    }
    Ok(sigma)
}

pub fn verify(r: &Reducer, f: &ZPolynomial, sigma: &BTreeMap<String, i64>, fold: bool) -> Result<Report, CliError> {
    let sys = r.reduce(f, ReduceOptions { fold })?;
    let w = r.build_witness(&sys, &|v| sigma.get(v).copied())?;
    let report = r.verify_witness(&sys, &w);
    let mut rep = Report::default();
    let assignment = sigma.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
    rep.info(format!("assignment: {assignment}"), json!({ "assignment": sigma }));
    for e in report.equations.iter().filter(|e| e.status == CheckStatus::Fail) {
        rep.check(
            false,
            format!("equation {} [{}] ({})", e.index, e.gadget, e.slots.join(", ")),
            json!({ "equation": e.index, "gadget": e.gadget, "slots": e.slots }),
        );
    }
    let (pass, fail, unc) = (report.count(CheckStatus::Pass), report.count(CheckStatus::Fail), report.count(CheckStatus::Uncovered));
    rep.check(
        fail == 0,
        format!("equations: {pass} pass, {fail} fail, {unc} uncovered"),
        json!({ "equations": { "pass": pass, "fail": fail, "uncovered": unc } }),
    );
    for m in &report.mult {
        rep.check(
            m.status == CheckStatus::Pass,
            format!("mult {}*{} = {} by order at infinity", m.slots[0], m.slots[1], m.slots[2]),
            json!({ "mult": m.slots }),
        );
    }
    if let Some(s) = report.folded {
        rep.check(s != CheckStatus::Fail, format!("folded equation {s}"), json!({ "folded": s }));
    }
    Ok(rep)
}

fn group_law_sample(rng: &mut ChaCha8Rng, ctx: &DenefContext) -> Result<bool, CliError> {
    let c = ctx.twist();
    let e = c.untwisted();
    let pt = |rng: &mut ChaCha8Rng| -> Result<_, CliError> { Ok(c.to_untwisted(&ctx.compute_pn(rng.gen_range(-3..=3))?)) };
    let (p, q, r) = (pt(rng)?, pt(rng)?, pt(rng)?);
    let ok = match rng.gen_range(0..4) {
        0 => e.add(&e.add(&p, &q)?, &r)? == e.add(&p, &e.add(&q, &r)?)?,
        1 => e.add(&p, &q)? == e.add(&q, &p)?,
        2 => e.add(&p, &CurvePoint::Infinity)? == p,
        _ => e.add(&p, &p.neg())?.is_infinity(),
    };
    Ok(ok)
}

/// A fast pass over every claim family, sampled where the family is random.
pub fn selftest(seed: u64) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = DenefContext::default();
    let mut rep = Report::default();
    let mut record = |name: &str, ok: bool| rep.check(ok, name.to_string(), json!({ "check": name }));

    record("Z[n](∞) = n for |n| ≤ 3", zn(&ctx, -3..=3)?.passed());
    record("multiplication truth table, bound 2", mult_table(&ctx, 2)?.passed());
    record("addition law, bound 2", add_check(&ctx, 2)?.passed());

    let mut parity = true;
    for _ in 0..50 {
        let xs: [RatFunc; 5] = std::array::from_fn(|_| sample::nonzero_ratfunc(&mut rng, 4));
        parity &= five_square_degree_check(&xs).is_ok_and(|d| d % 2 == 0);
    }
    record("five-square degree parity, 50 samples", parity);

    let (p, q) = (SysPoly::var("p"), SysPoly::var("q"));
    let (conj, disj) = (conj_combine(&p, &q), disj_combine(&p, &q));
    let t = RatFunc::variable(Var::new("t"));
    let mut combiners = true;
    for _ in 0..50 {
        let (u, v) = (sample::maybe_zero_ratfunc(&mut rng, 3), sample::maybe_zero_ratfunc(&mut rng, 3));
        let at = |e: &SysPoly| e.eval(&t, &|n| Some(if n == "p" { u.clone() } else { v.clone() })).expect("closed");
        combiners &= at(&conj).is_zero() == (u.is_zero() && v.is_zero());
        combiners &= at(&disj).is_zero() == (u.is_zero() || v.is_zero());
    }
    record("combiner soundness, 50 samples", combiners);

    let mut group = true;
    for _ in 0..20 {
        group &= group_law_sample(&mut rng, &ctx)?;
    }
    record("group law on n·(t, h), 20 samples", group);

    let q = |k: i64| Rational::from_integer(k.into());
    let s = LaurentSeries::from_coeffs(Var::new("t"), q(0), 0, vec![q(1), q(1), q(0), q(1)], 8);
    let root = s.sqrt()?;
    record("sqrt(1 + t + t³)² ≡ 1 + t + t³ mod t⁸", root.mul_ref(&root).truncate(8) == s);

    let kr = KrContext::new();
    record("valuation claim at (m, n, r) = (1, 1, 2)", kr.grid_cell(1, 1, 2)?.holds());
    let d = kr.shifted_x_divisor(1, 0)?;
    record("x(P) has 2 simple zeros", d.zero_count == 2 && d.all_simple);
    record("x_{1,1} is not a square", !is_square_in_residue(&kr.residue_xsr(1, 1)?)?);

    let r = Reducer::default();
    let f = parse_zpoly("x^2 - 4")?;
    let sys: EquationSystem = r.reduce(&f, ReduceOptions::default())?;
    let same = SystemDocument::new(&sys) == SystemDocument::new(&r.reduce(&f, ReduceOptions::default())?);
    record("reduction is deterministic", same);
    let good = r.verify_witness(&sys, &r.build_witness(&sys, &|_| Some(-2))?);
    record("x^2 - 4 with x = -2 verifies", good.passed());
    let bad = r.verify_witness(&sys, &r.build_witness(&sys, &|_| Some(3))?);
    record("x^2 - 4 with x = 3 is refuted", !bad.passed());

    let zero = ctx.compute_zn(0)?.value;
    record("Z[0] = 0 has infinite order", zero.ord_t_inverse() == Order::Infinite);
    Ok(rep)
}

/// `a`, `b` as rationals; the Denef context validates them.
pub fn denef_context(a: &str, b: &str) -> Result<DenefContext, CliError> {
    let parse = |s: &str| s.parse::<Rational>().map_err(|_| CliError::Usage(format!("`{s}` is not a rational number")));
    Ok(DenefContext::new(parse(a)?, parse(b)?)?)
}
