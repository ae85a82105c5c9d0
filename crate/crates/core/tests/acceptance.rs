//! Acceptance suite: one PASS/FAIL line per criterion, each within its time limit.

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use h10_core::algebra::{Field, LaurentSeries, Order, RatFunc, Rational, ValueAtInfinity, Var};
use h10_core::denef::{ratfunc_degree, DenefContext};
use h10_core::elliptic::CurvePoint;
use h10_core::kimroush::{is_square_in_residue, KrContext};
use h10_core::reducer::{conj_combine, disj_combine, parse_zpoly, CheckStatus, ReduceOptions, Reducer, SysPoly, SystemDocument};
use h10_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<Option<String>, Error>;

/// `Ok(None)` when every check held, `Ok(Some(first failure))` otherwise.
fn first_failure(failures: Vec<String>) -> Outcome {
    Ok(failures.into_iter().next())
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn rf(rng: &mut ChaCha8Rng, deg: usize) -> RatFunc {
    loop {
        let num: Vec<i64> = (0..=rng.gen_range(0..=deg)).map(|_| rng.gen_range(-9..=9)).collect();
        let den: Vec<i64> = (0..=rng.gen_range(0..=deg)).map(|_| rng.gen_range(-9..=9)).collect();
        if let Ok(f) = RatFunc::from_i64s("t", &num, &den) {
            if !f.is_zero() {
                return f;
            }
        }
    }
}

fn infinity_values() -> Outcome {
    let ctx = DenefContext::default();
    let mut bad = Vec::new();
    for n in -12..=12 {
        let z = ctx.compute_zn(n)?.value;
        let ok = if n == 0 {
            z.is_zero()
        } else {
            z.ord_t_inverse() == Order::Finite(0) && z.value_at_infinity() == ValueAtInfinity::Finite(q(n))
        };
        if !ok {
            bad.push(format!("n = {n}"));
        }
    }
    first_failure(bad)
}

fn truth_table() -> Outcome {
    let ctx = DenefContext::default();
    let mut bad = Vec::new();
    for n in -5..=5 {
        for m in -5..=5 {
            for l in -25..=25 {
                if ctx.mult_encoding_holds(n, m, l)? != (n * m == l) {
                    bad.push(format!("(n, m, l) = ({n}, {m}, {l})"));
                }
            }
        }
    }
    first_failure(bad)
}

fn degree_parity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut bad = Vec::new();
    for i in 0..500 {
        let xs: [RatFunc; 5] = std::array::from_fn(|_| rf(&mut rng, 4));
        let sum = xs.iter().skip(1).fold(xs[0].square(), |acc, x| acc + &x.square());
        let expected = 2 * xs.iter().map(ratfunc_degree).max().unwrap();
        let got = ratfunc_degree(&sum);
        if got != expected || got % 2 != 0 {
            bad.push(format!("sample {i}: degree {got}, expected {expected}"));
        }
    }
    first_failure(bad)
}

fn combiners() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let t = RatFunc::variable(Var::new("t"));
    let (p, q) = (SysPoly::var("p"), SysPoly::var("q"));
    let (conj, disj) = (conj_combine(&p, &q), disj_combine(&p, &q));
    let mut bad = Vec::new();
    for i in 0..500 {
        let pick = |rng: &mut ChaCha8Rng| if rng.gen_ratio(1, 4) { RatFunc::zero(Var::new("t")) } else { rf(rng, 4) };
        let (u, v) = (pick(&mut rng), pick(&mut rng));
        let at = |e: &SysPoly| e.eval(&t, &|n| Some(if n == "p" { u.clone() } else { v.clone() })).unwrap();
        let conj_ok = at(&conj).is_zero() == (u.is_zero() && v.is_zero());
        let disj_ok = at(&disj).is_zero() == (u.is_zero() || v.is_zero());
        if !(conj_ok && disj_ok) {
            bad.push(format!("sample {i}: u = {u}, v = {v}"));
        }
    }
    first_failure(bad)
}

fn valuation_grid() -> Outcome {
    let ctx = KrContext::new();
    let mut bad = Vec::new();
    for m in 0..=2 {
        for n in -3..=3 {
            for r in -3..=3 {
                if n - m * r == 0 {
                    continue;
                }
                let c = ctx.grid_cell(m, n, r)?;
                if !(c.wm_b == 1 && c.wm_a == 0 && c.residue_ok) {
                    bad.push(c.to_string());
                }
            }
        }
    }
    first_failure(bad)
}

fn divisor_counts() -> Outcome {
    let ctx = KrContext::new();
    let mut bad = Vec::new();
    for s in [1, 2] {
        for r in 0..=2 {
            let d = ctx.shifted_x_divisor(s, r)?;
            if d.zero_count != 2 * s * s || !d.all_simple {
                bad.push(format!("(s, r) = ({s}, {r}): {d:?}"));
            }
        }
    }
    first_failure(bad)
}

fn non_squares() -> Outcome {
    let ctx = KrContext::new();
    let mut bad = Vec::new();
    for s in [1, 2] {
        for r in [0, 1] {
            if is_square_in_residue(&ctx.residue_xsr(s, r)?)? {
                bad.push(format!("x_{{{s},{r}}} is a square"));
            }
        }
    }
    first_failure(bad)
}

const CORPUS: [(&str, &str, &[(&str, i64)]); 4] = [
    ("x_minus_1", "x - 1", &[("x", 1)]),
    ("x_squared_minus_4", "x^2 - 4", &[("x", 2)]),
    ("xy_minus_6", "x*y - 6", &[("x", 2), ("y", 3)]),
    ("circle_25", "x^2 + y^2 - 25", &[("x", 3), ("y", 4)]),
];

fn end_to_end() -> Outcome {
    let r = Reducer::default();
    let mut bad = Vec::new();
    for (name, text, sigma) in CORPUS {
        let f = parse_zpoly(text)?;
        let first = SystemDocument::new(&r.reduce(&f, ReduceOptions::default())?).to_json();
        let sys = r.reduce(&f, ReduceOptions::default())?;
        let second = SystemDocument::new(&sys).to_json();
        let golden = fs::read_to_string(format!("{}/tests/golden/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap_or_default();
        if first != second || first != golden {
            bad.push(format!("{text}: emitted system differs from golden"));
        }
        let w = r.build_witness(&sys, &|v| sigma.iter().find(|(n, _)| *n == v).map(|&(_, x)| x))?;
        let report = r.verify_witness(&sys, &w);
        if report.count(CheckStatus::Fail) != 0 || !report.mult_passed() {
            bad.push(format!("{text}: witness rejected"));
        }
    }
    first_failure(bad)
}

fn group_law() -> Outcome {
    let ctx = DenefContext::default();
    let c = ctx.twist();
    let e = c.untwisted();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut bad = Vec::new();
    for i in 0..200 {
        let mut pt = || -> Result<_, Error> { Ok(c.to_untwisted(&ctx.compute_pn(rng.gen_range(-5..=5))?)) };
        let (p, q, s) = (pt()?, pt()?, pt()?);
        let (law, ok) = match i % 4 {
            0 => ("associativity", e.add(&e.add(&p, &q)?, &s)? == e.add(&p, &e.add(&q, &s)?)?),
            1 => ("commutativity", e.add(&p, &q)? == e.add(&q, &p)?),
            2 => ("identity", e.add(&p, &CurvePoint::Infinity)? == p && e.add(&CurvePoint::Infinity, &p)? == p),
            _ => ("inverse", e.add(&p, &p.neg())?.is_infinity()),
        };
        if !ok || !e.on_curve(&e.add(&p, &q)?) {
            bad.push(format!("sample {i}: {law}"));
        }
    }
    first_failure(bad)
}

fn series_sqrt() -> Outcome {
    let s = LaurentSeries::from_coeffs(Var::new("t"), q(0), 0, vec![q(1), q(1), q(0), q(1)], 8);
    let root = s.sqrt()?;
    let ok = root.precision() >= 8 && root.mul_ref(&root).truncate(8) == s;
    Ok((!ok).then(|| format!("sqrt = {root:?}")))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("Z_n has value n at infinity, |n| <= 12", 30, infinity_values),
        ("multiplication truth table, |n|, |m| <= 5, |l| <= 25", 120, truth_table),
        ("five-square degree parity, 500 samples", 10, degree_parity),
        ("conjunction and disjunction combiners, 500 samples", 5, combiners),
        ("valuation claim on the grid m <= 2, |n|, |r| <= 3", 300, valuation_grid),
        ("2s^2 simple zeros for s = 1, 2 and r = 0, 1, 2", 120, divisor_counts),
        ("x_{s,r} is not a square for s = 1, 2 and r = 0, 1", 60, non_squares),
        ("corpus reduction, witnesses and golden systems", 60, end_to_end),
        ("group law on n*(t, h), 200 samples", 60, group_law),
        ("sqrt(1 + t + t^3) to order 8", 1, series_sqrt),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let detail = match &outcome {
            Ok(None) if elapsed < limit => None,
            Ok(None) => Some(format!("over the time limit of {}s", limit.as_secs())),
            Ok(Some(f)) => Some(f.clone()),
            Err(e) => Some(format!("error: {e}")),
        };
        let verdict = if detail.is_none() { "PASS" } else { "FAIL" };
        println!("{verdict} [{}] {name} ({:.2}s, limit {}s)", i + 1, elapsed.as_secs_f64(), limit.as_secs());
        if let Some(d) = detail {
            failed += 1;
            println!("     {d}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
