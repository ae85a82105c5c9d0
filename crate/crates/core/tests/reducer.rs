use std::collections::BTreeMap;

use h10_core::algebra::{RatFunc, Var};
use h10_core::reducer::{parse_zpoly, CheckStatus, GadgetKind, ReduceOptions, Reducer, SystemDocument, WitnessMap};

fn run(f: &str, sigma: &[(&str, i64)]) -> (h10_core::reducer::EquationSystem, h10_core::reducer::VerifyReport) {
    let r = Reducer::default();
    let sys = r.reduce(&parse_zpoly(f).unwrap(), ReduceOptions::default()).unwrap();
    let map: BTreeMap<&str, i64> = sigma.iter().copied().collect();
    let w = r.build_witness(&sys, &|v| map.get(v).copied()).unwrap();
    let report = r.verify_witness(&sys, &w);
    (sys, report)
}

#[test]
fn linear_equation_fully_covered() {
    let (sys, report) = run("x - 1", &[("x", 1)]);
    assert_eq!(sys.count_by(GadgetKind::SMembership), 1);
    assert_eq!(sys.count_by(GadgetKind::Constant), 1);
    assert_eq!(sys.count_by(GadgetKind::Add), 1);
    assert_eq!(sys.count_by(GadgetKind::Equality), 1);
    assert!(report.passed(), "{report}");
    assert_eq!(report.count(CheckStatus::Uncovered), 0);
    assert_eq!(report.count(CheckStatus::Pass), sys.equations.len());
}

#[test]
fn wrong_assignment_fails_final_equality() {
    let (sys, report) = run("x - 1", &[("x", 2)]);
    assert!(!report.passed());
    let failing: Vec<_> = report.equations.iter().filter(|e| e.status == CheckStatus::Fail).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0].gadget.to_string(), "equality");
    assert_eq!(sys.equations.len(), report.equations.len());
}

#[test]
fn squares_both_roots() {
    for x in [2, -2] {
        let (_, report) = run("x^2 - 4", &[("x", x)]);
        assert!(report.passed() && report.mult_passed(), "x = {x}: {report}");
        assert!(report.count(CheckStatus::Uncovered) > 0);
    }
    let (_, report) = run("x^2 - 4", &[("x", 3)]);
    assert!(!report.passed());
}

#[test]
fn product_checked_semantically() {
    let (_, report) = run("x*y - 2", &[("x", 1), ("y", 2)]);
    assert!(report.passed() && report.mult_passed(), "{report}");
    assert_eq!(report.mult.len(), 1);
}

#[test]
fn tampered_and_empty_witnesses() {
    let r = Reducer::default();
    let sys = r.reduce(&parse_zpoly("x - 2").unwrap(), ReduceOptions::default()).unwrap();
    let mut w = r.build_witness(&sys, &|_| Some(2)).unwrap();
    assert!(r.verify_witness(&sys, &w).passed());
    // (u, w) = P₁ is the half point of P₂; the first shared equation is its curve equation.
    let old = w.get("x'w").unwrap().clone();
    w.set("x'w", old + &RatFunc::one(Var::new("t")));
    let report = r.verify_witness(&sys, &w);
    let failing: Vec<usize> = report.equations.iter().filter(|e| e.status == CheckStatus::Fail).map(|e| e.index).collect();
    let on_curve = sys.equations.iter().position(|e| e.poly.to_string().contains("(t^3 + t + 1)*x'e2*x'w^2")).unwrap();
    assert!(failing.contains(&on_curve), "{report}");

    let empty = WitnessMap::default();
    let report = r.verify_witness(&sys, &empty);
    assert_eq!(report.count(CheckStatus::Uncovered), sys.equations.len());
}

#[test]
fn folded_equation() {
    let r = Reducer::default();
    let sys = r.reduce(&parse_zpoly("x - 1").unwrap(), ReduceOptions { fold: true }).unwrap();
    let good = r.build_witness(&sys, &|_| Some(1)).unwrap();
    assert_eq!(r.verify_witness(&sys, &good).folded, Some(CheckStatus::Pass));
    let bad = r.build_witness(&sys, &|_| Some(2)).unwrap();
    assert_eq!(r.verify_witness(&sys, &bad).folded, Some(CheckStatus::Fail));
    let doc = SystemDocument::new(&sys);
    assert!(doc.folded.unwrap().starts_with('('));
}

const CORPUS: [(&str, &str); 5] = [
    ("x - 1", "x_minus_1"),
    ("x^2 - 4", "x_squared_minus_4"),
    ("x*y - 6", "xy_minus_6"),
    ("x^2 + y^2 - 25", "circle_25"),
    ("0", "zero"),
];

fn emit(f: &str, fold: bool) -> String {
    let sys = Reducer::default().reduce(&parse_zpoly(f).unwrap(), ReduceOptions { fold }).unwrap();
    SystemDocument::new(&sys).to_json()
}

/// Set `UPDATE_GOLDEN=1` to rewrite the files after an intended change.
#[test]
fn golden_documents() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (f, name) in CORPUS {
        let first = emit(f, false);
        assert_eq!(first, emit(f, false), "{f}: emission is not deterministic");
        let path = dir.join(format!("{name}.json"));
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &first).unwrap();
        }
        let golden = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(first, golden, "{f}: differs from {}", path.display());
    }
    let folded = dir.join("x_minus_1.folded.json");
    let doc = emit("x - 1", true);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&folded, &doc).unwrap();
    }
    assert_eq!(doc, std::fs::read_to_string(&folded).unwrap());
}

#[test]
fn documented_polynomials_parse_back() {
    let sys = Reducer::default().reduce(&parse_zpoly("x*y - 6").unwrap(), ReduceOptions::default()).unwrap();
    let doc = SystemDocument::new(&sys);
    for (e, d) in sys.equations.iter().zip(&doc.equations) {
        assert_eq!(h10_core::reducer::SysPoly::parse(&d.poly).unwrap(), e.poly);
    }
}
