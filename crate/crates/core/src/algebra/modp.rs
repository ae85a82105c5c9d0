//! Word-sized prime-field arithmetic for the modular gcd.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Primes below this bound; products fit comfortably in `u128`.
const PRIME_CEILING: u64 = 1 << 62;

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

/// The `i`-th prime counting down from 2^62. Deterministic across runs.
pub(crate) fn prime(i: usize) -> u64 {
    let mut cache = PRIMES.lock().expect("prime cache poisoned");
    while cache.len() <= i {
        let mut c = cache.last().copied().unwrap_or(PRIME_CEILING + 1) - 2;
        while !is_prime(c) {
            c -= 2;
        }
        cache.push(c);
    }
    cache[i]
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // These bases are deterministic for all n < 3.3e24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

/// Strips trailing zero coefficients.
pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `a mod b` in 𝔽_p\[x\], `b` nonzero.
fn rem_in_place(a: &mut Vec<u64>, b: &[u64], p: u64) {
    let db = b.len() - 1;
    let inv_lc = invmod(b[db], p);
    while a.len() > db {
        let top = a.len() - 1;
        let q = mulmod(a[top], inv_lc, p);
        if q != 0 {
            let shift = top - db;
            for (j, &bj) in b.iter().enumerate() {
                a[shift + j] = submod(a[shift + j], mulmod(q, bj, p), p);
            }
        }
        a.pop();
        trim(a);
    }
}

/// Monic gcd in 𝔽_p\[x\]. Inputs are trimmed.
pub(crate) fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        rem_in_place(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let inv = invmod(lc, p);
        for c in a.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime_and_descending() {
        let p0 = prime(0);
        let p1 = prime(1);
        assert!(p0 < PRIME_CEILING && p1 < p0);
        assert!(is_prime(p0) && is_prime(p1));
        assert!(!is_prime(p0 - 2) || p1 == p0 - 2);
    }

    #[test]
    fn gcd_mod_p_finds_common_factor() {
        let p = 101;
        // (x+1)(x+2) and (x+1)(x+3)
        let a = vec![2, 3, 1];
        let b = vec![3, 4, 1];
        assert_eq!(gcd(a, b, p), vec![1, 1]);
    }
}
