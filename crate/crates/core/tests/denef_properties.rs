use h10_core::algebra::{RatFunc, Var};
use h10_core::denef::{five_square_degree_check, ratfunc_degree, DenefContext};
use proptest::prelude::*;

fn rf(num: &[i64], den: &[i64]) -> Option<RatFunc> {
    RatFunc::from_i64s("t", num, den).ok()
}

#[test]
fn z_values_are_distinct() {
    let ctx = DenefContext::default();
    let zs: Vec<RatFunc> = (-10..=10).map(|n| ctx.compute_zn(n).unwrap().value).collect();
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            assert_ne!(zs[i], zs[j], "Z[{}] = Z[{}]", i as i64 - 10, j as i64 - 10);
        }
    }
}

#[test]
fn even_odd_split() {
    let ctx = DenefContext::default();
    for n in -12..=12 {
        assert!(ctx.check_halving(n).unwrap(), "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn z_of_sum_is_z_of_index_sum(n in -6i64..=6, m in -6i64..=6) {
        let ctx = DenefContext::default();
        let sum = ctx.twist().add(&ctx.compute_pn(n).unwrap(), &ctx.compute_pn(m).unwrap()).unwrap();
        prop_assert_eq!(ctx.z_of_point(&sum).unwrap(), ctx.compute_zn(n + m).unwrap().value);
    }

    #[test]
    fn sums_of_five_squares_have_even_degree(
        tuples in prop::collection::vec((prop::collection::vec(-9i64..=9, 1..=5), prop::collection::vec(-9i64..=9, 1..=3)), 5)
    ) {
        let xs: Vec<RatFunc> = tuples
            .iter()
            .map(|(n, d)| rf(n, d).unwrap_or_else(|| RatFunc::one(Var::new("t"))))
            .map(|x| if x.is_zero() { RatFunc::one(Var::new("t")) } else { x })
            .collect();
        let xs: [RatFunc; 5] = xs.try_into().unwrap();
        let max = xs.iter().map(ratfunc_degree).max().unwrap();
        let got = five_square_degree_check(&xs).unwrap();
        prop_assert_eq!(got, 2 * max);
        prop_assert_eq!(got % 2, 0);
    }
}
