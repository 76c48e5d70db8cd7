use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::Natural;

// Sinclair's seven bases; deterministic for every n < 2^64.
const WITNESSES_64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

const SMALL_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Extra random-base strong-pseudoprime rounds run beyond 2^64. Each round
/// misses a composite with probability at most 1/4, so 64 rounds bound the
/// error by 2^-128, on top of the BPSW pair.
const BIG_ROUNDS: usize = 64;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES_64 {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of an arbitrary natural. Exact below 2^64; above, a
/// Baillie-PSW test followed by 64 strong-pseudoprime rounds with bases
/// drawn from a ChaCha20 stream seeded by the candidate itself (so the
/// verdict is reproducible).
pub fn is_prime(n: &Natural) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => is_probable_prime_big(n),
    }
}

fn strong_probable_prime(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

#[doc(hidden)]
pub fn is_probable_prime_big(n: &BigUint) -> bool {
    let two = BigUint::from(2u8);
    if *n < two {
        return false;
    }
    for p in SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    if !strong_probable_prime(n, &two) {
        return false;
    }
    if !strong_lucas_probable_prime(n) {
        return false;
    }
    let seed = n.iter_u64_digits().fold(0x5eed_ca2c_1729_0001u64, |acc, w| {
        acc.rotate_left(17) ^ w
    });
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let upper = n - 1u32;
    (0..BIG_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &upper);
        strong_probable_prime(n, &a)
    })
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    // n odd and positive
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x: BigInt = if x.is_odd() { x + n } else { x };
    (x >> 1u32).mod_floor(n)
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice
/// (`P = 1`, `Q = (1 - D)/4`). Expects an odd `n > 2`.
#[doc(hidden)]
pub fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    if n.is_even() {
        return *n == BigUint::from(2u8);
    }
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let n_int = BigInt::from(n.clone());
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &n_int) {
            -1 => break,
            0 if d.abs() != n_int => return false,
            _ => {}
        }
        d = if d.is_positive() { -(d + 2i32) } else { -(d - 2i32) };
    }
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4i32;

    let n_plus_1 = &n_int + 1i32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&n_int);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - &qk * 2i32).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if k.bit(i) {
            let u_next = half_mod(&p * &u + &v, &n_int);
            let v_next = half_mod(&d * &u + &p * &v, &n_int);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(&n_int);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2i32).mod_floor(&n_int);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&n_int);
    }
    false
}

/// All primes `<= n` by a plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn spec_examples() {
        assert!(is_prime_u64(66337));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(1729));
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to bases 2; 2,3,5,7,11; and 2..=37 respectively
        assert!(!is_prime_u64(2047));
        assert!(!is_prime_u64(2152302898747));
        assert!(!is_prime_u64(3825123056546413051));
        assert!(is_prime_u64(18446744073709551557)); // largest prime below 2^64
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn big_path_agrees_below_2_64() {
        let mut x = 0x9e37_79b9_7f4a_7c15u64;
        for _ in 0..2000 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let n = x | 1;
            assert_eq!(is_probable_prime_big(&BigUint::from(n)), is_prime_u64(n), "n = {n}");
        }
        for n in 3..5000u64 {
            assert_eq!(is_probable_prime_big(&BigUint::from(n)), is_prime_u64(n), "n = {n}");
        }
    }

    #[test]
    fn lucas_rejects_lucas_pseudoprime_free_cases() {
        // strong Lucas pseudoprimes (Selfridge) are composite; BPSW still
        // rejects them via the base-2 round
        for n in [5459u64, 5777, 10877, 16109, 18971, 22499] {
            assert!(strong_lucas_probable_prime(&BigUint::from(n)), "{n} is a strong Lucas psp");
            assert!(!is_probable_prime_big(&BigUint::from(n)));
        }
        for n in [3u64, 5, 7, 11, 101, 66337, 1_000_000_007] {
            assert!(strong_lucas_probable_prime(&BigUint::from(n)));
        }
    }

    #[test]
    fn large_values() {
        let m61 = (BigUint::one() << 61) - 1u32;
        let m89 = (BigUint::one() << 89) - 1u32;
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m61));
        assert!(is_prime(&m89));
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m89 * &m61)));
        assert!(!is_prime(&((BigUint::one() << 83) - 1u32))); // 167 * ...
        // 29-digit primary Carmichael number: composite
        let big: BigUint = "37717531166520286365396946681".parse().unwrap();
        assert!(!is_prime(&big));
    }

    #[test]
    fn sieve_counts() {
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(1).len(), 0);
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(1_000_000).len(), 78498);
    }
}
