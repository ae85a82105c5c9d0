use std::collections::BTreeMap;

use h10_core::algebra::{RatFunc, Var};
use h10_core::reducer::{conj_combine, disj_combine, parse_zpoly, CheckStatus, ReduceOptions, Reducer, SysPoly};
use proptest::prelude::*;

fn arb_rf() -> impl Strategy<Value = RatFunc> {
    (prop::collection::vec(-6i64..=6, 1..=4), prop::collection::vec(-6i64..=6, 1..=3)).prop_map(|(n, d)| {
        RatFunc::from_i64s("t", &n, &d).unwrap_or_else(|_| RatFunc::zero(Var::new("t")))
    })
}

fn arb_maybe_zero() -> impl Strategy<Value = RatFunc> {
    prop_oneof![1 => Just(RatFunc::zero(Var::new("t"))), 3 => arb_rf()]
}

fn at(p: &SysPoly, u: &RatFunc, v: &RatFunc) -> RatFunc {
    let t = RatFunc::variable(Var::new("t"));
    p.eval(&t, &|name| match name {
        "p" => Some(u.clone()),
        "q" => Some(v.clone()),
        _ => None,
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn combiners_are_sound(u in arb_maybe_zero(), v in arb_maybe_zero()) {
        let (p, q) = (SysPoly::var("p"), SysPoly::var("q"));
        let conj = at(&conj_combine(&p, &q), &u, &v);
        prop_assert_eq!(conj.is_zero(), u.is_zero() && v.is_zero());
        let disj = at(&disj_combine(&p, &q), &u, &v);
        prop_assert_eq!(disj.is_zero(), u.is_zero() || v.is_zero());
    }

    #[test]
    fn one_plus_t_square_never_vanishes(v in arb_rf()) {
        let e = conj_combine(&SysPoly::one(), &SysPoly::var("q"));
        prop_assert!(!at(&e, &RatFunc::zero(Var::new("t")), &v).is_zero());
    }
}

#[test]
fn refutation_smoke_test() {
    let r = Reducer::default();
    let sys = r.reduce(&parse_zpoly("x^2 + 1").unwrap(), ReduceOptions::default()).unwrap();
    for x in -3..=3 {
        let w = r.build_witness(&sys, &|_| Some(x)).unwrap();
        let report = r.verify_witness(&sys, &w);
        let eq = report.equations.iter().find(|e| e.gadget.to_string() == "equality").unwrap();
        assert_eq!(eq.status, CheckStatus::Fail, "x = {x}");
    }
}

#[test]
fn fold_vanishes_iff_components_vanish() {
    let r = Reducer::default();
    let sys = r.reduce(&parse_zpoly("x - y + 1").unwrap(), ReduceOptions { fold: true }).unwrap();
    for x in -2..=2 {
        for y in -2..=2 {
            let sigma: BTreeMap<&str, i64> = [("x", x), ("y", y)].into();
            let w = r.build_witness(&sys, &|v| sigma.get(v).copied()).unwrap();
            let report = r.verify_witness(&sys, &w);
            let all = report.count(CheckStatus::Pass) == sys.equations.len();
            assert_eq!(report.folded == Some(CheckStatus::Pass), all, "x = {x}, y = {y}");
            assert_eq!(all, x - y + 1 == 0, "x = {x}, y = {y}");
        }
    }
}
