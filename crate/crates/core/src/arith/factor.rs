use num_integer::Integer;
use num_traits::ToPrimitive;

use super::prime::{is_prime_u64, mul_mod};
use super::{Natural, PrimeFactorization};
use crate::error::{Error, Result};

const TRIAL_BOUND: u64 = 1 << 10;

/// Factors a natural below 2^64. Larger inputs are rejected; callers that
/// need them supply factorizations through [`PrimeFactorization::verify`].
pub fn factorize(m: &Natural) -> Result<PrimeFactorization> {
    match m.to_u64() {
        Some(v) => factorize_u64(v),
        None => Err(Error::OutOfRange(format!(
            "{m} is beyond the factorization range [1, 2^64)"
        ))),
    }
}

pub fn factorize_u64(m: u64) -> Result<PrimeFactorization> {
    if m == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    Ok(PrimeFactorization::from_u64_unchecked(m, &factor_u64(m)))
}

/// `(prime, exponent)` pairs of `m >= 1`, primes ascending. Trial division
/// up to 2^10, then Brent's cycle variant of Pollard rho with recursive
/// splitting.
pub fn factor_u64(mut m: u64) -> Vec<(u64, u32)> {
    assert!(m != 0, "cannot factor 0");
    let mut out: Vec<(u64, u32)> = Vec::new();
    let tz = m.trailing_zeros();
    if tz > 0 {
        out.push((2, tz));
        m >>= tz;
    }
    let mut d = 3;
    while d < TRIAL_BOUND && d * d <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 2;
    }
    if m > 1 {
        let mut large = Vec::new();
        split(m, &mut large);
        large.sort_unstable();
        for p in large {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let root = super::isqrt_u64(n);
    if root * root == n {
        split(root, out);
        split(root, out);
        return;
    }
    let d = brent(n);
    split(d, out);
    split(n / d, out);
}

/// A nontrivial factor of the odd composite `n`.
fn brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        if let Some(d) = brent_attempt(n, c) {
            return d;
        }
        c += 1;
    }
}

fn brent_attempt(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut x = y;
    let mut ys = y;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}
