//! Seeded samples for the property checks.

use h10_core::algebra::{RatFunc, Var};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A nonzero element of ℚ(t) with numerator and denominator of degree ≤ `deg`.
pub fn nonzero_ratfunc(rng: &mut ChaCha8Rng, deg: usize) -> RatFunc {
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

/// Zero with probability 1/4, otherwise a nonzero sample.
pub fn maybe_zero_ratfunc(rng: &mut ChaCha8Rng, deg: usize) -> RatFunc {
    if rng.gen_ratio(1, 4) {
        RatFunc::zero(Var::new("t"))
    } else {
        nonzero_ratfunc(rng, deg)
    }
}
