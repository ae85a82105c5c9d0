use h10_core::algebra::{Field, MultiRatFunc};
use h10_core::kimroush::{KrContext, TowerElem};
use proptest::prelude::*;

fn sample(ctx: &KrContext, k: usize) -> TowerElem {
    let xs = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (-1, 1), (2, 0)];
    let (n, r) = xs[k % xs.len()];
    ctx.combo_x(n, r).unwrap()
}

fn constant(ctx: &KrContext, k: i64) -> TowerElem {
    ctx.lift(MultiRatFunc::t1()) + &ctx.lift(MultiRatFunc::from_int(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wm_is_a_valuation(i in 0usize..7, j in 0usize..7, m in 0i64..=1, k in 1i64..4) {
        let ctx = KrContext::new();
        let (a, b) = (sample(&ctx, i), sample(&ctx, j));
        let (wa, wb) = (ctx.wm_valuation(m, &a).unwrap(), ctx.wm_valuation(m, &b).unwrap());
        prop_assert_eq!(ctx.wm_valuation(m, &(a.clone() * &b)).unwrap(), wa + wb);
        let s = a.clone() + &b;
        if !Field::is_zero(&s) {
            prop_assert!(ctx.wm_valuation(m, &s).unwrap() >= wa.min(wb));
        }
        prop_assert_eq!(ctx.wm_valuation(m, &constant(&ctx, k)).unwrap(), 0);
    }

    #[test]
    fn tower_field_axioms(i in 0usize..7, j in 0usize..7, k in 0usize..7) {
        let ctx = KrContext::new();
        let (a, b, c) = (sample(&ctx, i), sample(&ctx, j), sample(&ctx, k));
        prop_assert_eq!((a.clone() * &b) * &c, a.clone() * &(b.clone() * &c));
        prop_assert_eq!(a.clone() * &(b.clone() + &c), a.clone() * &b + &(a.clone() * &c));
        prop_assert!((a.clone() * &a.inv().unwrap()).is_one());
    }
}

#[test]
fn shifted_generator_is_a_uniformizer() {
    let ctx = KrContext::new();
    for m in 0..=2 {
        assert_eq!(ctx.wm_valuation(m, &ctx.combo_x(m, 1).unwrap()).unwrap(), 1);
    }
}
