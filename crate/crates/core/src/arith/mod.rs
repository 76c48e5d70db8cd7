//! Exact integer primitives. Nothing in here touches floating point.

mod factor;
mod prime;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use factor::{factor_u64, factorize, factorize_u64};
pub use prime::{is_prime, is_prime_u64, primes_up_to};

#[doc(hidden)]
pub use prime::{is_probable_prime_big, strong_lucas_probable_prime};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Base-`g` digits of `m`, least significant first. Zero has no digits.
pub fn digits(m: &Natural, g: &Natural) -> Result<Vec<Natural>> {
    if *g < BigUint::from(2u8) {
        return Err(Error::InvalidBase(g.to_string()));
    }
    if let (Some(m), Some(g)) = (m.to_u64(), g.to_u64()) {
        return Ok(digits_u64(m, g).into_iter().map(Natural::from).collect());
    }
    let mut out = Vec::new();
    let mut rest = m.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(g);
        out.push(r);
        rest = q;
    }
    Ok(out)
}

/// Machine-word variant of [`digits`]. Panics if `g < 2`.
pub fn digits_u64(mut m: u64, g: u64) -> Vec<u64> {
    assert!(g >= 2, "base must be at least 2");
    let mut out = Vec::new();
    while m > 0 {
        out.push(m % g);
        m /= g;
    }
    out
}

/// `s_g(m)`, the sum of the base-`g` digits of `m`, with `s_1(m) = 0`.
pub fn digit_sum(m: &Natural, g: &Natural) -> Result<Natural> {
    if g.is_zero() {
        return Err(Error::InvalidBase("0".into()));
    }
    if g.is_one() {
        return Ok(Natural::zero());
    }
    if let Some(g) = g.to_u64() {
        if let Some(m) = m.to_u64() {
            return Ok(Natural::from(digit_sum_u64(m, g)));
        }
        let mut sum = Natural::zero();
        let mut rest = m.clone();
        while !rest.is_zero() {
            sum += &rest % g;
            rest /= g;
        }
        return Ok(sum);
    }
    let mut sum = Natural::zero();
    let mut rest = m.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(g);
        sum += r;
        rest = q;
    }
    Ok(sum)
}

/// Machine-word `s_g(m)`. `g = 1` gives 0; panics on `g = 0`.
#[inline]
pub fn digit_sum_u64(mut m: u64, g: u64) -> u64 {
    assert!(g != 0, "base must be positive");
    if g == 1 {
        return 0;
    }
    let mut sum = 0;
    while m > 0 {
        sum += m % g;
        m /= g;
    }
    sum
}

/// `ord_g(m)`: the largest `n` with `g^n | m`.
pub fn ord_base(m: &Natural, g: &Natural) -> Result<u32> {
    if m.is_zero() {
        return Err(Error::UndefinedOrder);
    }
    if *g < BigUint::from(2u8) {
        return Err(Error::InvalidBase(g.to_string()));
    }
    let mut n = 0;
    let mut rest = m.clone();
    loop {
        let (q, r) = rest.div_rem(g);
        if !r.is_zero() {
            return Ok(n);
        }
        rest = q;
        n += 1;
    }
}

/// Machine-word `ord_g(m)`; `m >= 1`, `g >= 2`.
#[inline]
pub fn ord_base_u64(mut m: u64, g: u64) -> u32 {
    debug_assert!(m >= 1 && g >= 2);
    let mut n = 0;
    while m.is_multiple_of(g) {
        m /= g;
        n += 1;
    }
    n
}

/// Unique `x` in `[1, n-1]` with `a * x ≡ 1 (mod n)`.
pub fn mod_inverse(a: &Natural, n: &Natural) -> Result<Natural> {
    if *n < BigUint::from(2u8) {
        return Err(Error::InvalidInput(format!("modulus {n} must be at least 2")));
    }
    let a_int = BigInt::from(a % n);
    let n_int = BigInt::from(n.clone());
    let egcd = a_int.extended_gcd(&n_int);
    if !egcd.gcd.is_one() {
        return Err(Error::NotInvertible {
            a: a.to_string(),
            n: n.to_string(),
        });
    }
    let x = egcd.x.mod_floor(&n_int);
    Ok(x.to_biguint().expect("mod_floor of a positive modulus is nonnegative"))
}

/// Prime factorization with certified (or, beyond 2^64, BPSW-strength)
/// primes in strictly increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    value: Natural,
    entries: Vec<(Natural, u32)>,
}

impl PrimeFactorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking order,
    /// exponents and primality. The value is the product of the entries.
    pub fn from_entries(entries: Vec<(Natural, u32)>) -> Result<Self> {
        let mut value = Natural::one();
        for (i, (p, e)) in entries.iter().enumerate() {
            if *e == 0 {
                return Err(Error::InvalidInput(format!("exponent of {p} must be positive")));
            }
            if i > 0 && entries[i - 1].0 >= *p {
                return Err(Error::InvalidInput(
                    "primes must be strictly increasing".into(),
                ));
            }
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            value *= num_traits::pow(p.clone(), *e as usize);
        }
        Ok(Self { value, entries })
    }

    /// Like [`from_entries`](Self::from_entries) but also checks that the
    /// product equals `value`. Used for caller-supplied factorizations of
    /// values outside the factorization range.
    pub fn verify(value: &Natural, entries: Vec<(Natural, u32)>) -> Result<Self> {
        let f = Self::from_entries(entries)?;
        if f.value != *value {
            return Err(Error::InvalidInput(format!(
                "factorization multiplies to {}, not {value}",
                f.value
            )));
        }
        Ok(f)
    }

    pub(crate) fn from_u64_unchecked(value: u64, entries: &[(u64, u32)]) -> Self {
        Self {
            value: Natural::from(value),
            entries: entries
                .iter()
                .map(|&(p, e)| (Natural::from(p), e))
                .collect(),
        }
    }

    pub fn value(&self) -> &Natural {
        &self.value
    }

    pub fn entries(&self) -> &[(Natural, u32)] {
        &self.entries
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> + '_ {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn num_distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.entries.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> Natural {
        self.primes().product()
    }

    /// Number of divisors, saturating.
    pub fn divisor_count(&self) -> u64 {
        self.entries
            .iter()
            .fold(1u64, |acc, &(_, e)| acc.saturating_mul(e as u64 + 1))
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// All divisors of the factored value in ascending order.
pub fn divisors(f: &PrimeFactorization) -> Vec<Natural> {
    let mut out = vec![Natural::one()];
    for (p, e) in f.entries() {
        let len = out.len();
        let mut power = Natural::one();
        for _ in 0..*e {
            power *= p;
            for i in 0..len {
                out.push(&out[i] * &power);
            }
        }
    }
    out.sort();
    out
}

/// Machine-word divisors from `(prime, exponent)` pairs, ascending.
pub fn divisors_u64(entries: &[(u64, u32)]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in entries {
        let len = out.len();
        let mut power = 1u64;
        for _ in 0..e {
            power *= p;
            for i in 0..len {
                out.push(out[i] * power);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Integer square root.
pub fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn digits_examples() {
        assert_eq!(digits(&n(1729), &n(7)).unwrap(), vec![n(0), n(2), n(0), n(5)]);
        assert!(digits(&n(0), &n(10)).unwrap().is_empty());
        assert_eq!(digits(&n(5), &n(2)).unwrap(), vec![n(1), n(0), n(1)]);
        assert!(matches!(digits(&n(5), &n(1)), Err(Error::InvalidBase(_))));
    }

    #[test]
    fn digit_sum_examples() {
        assert_eq!(digit_sum(&n(1729), &n(7)).unwrap(), n(7));
        assert_eq!(digit_sum(&n(1729), &n(1)).unwrap(), n(0));
        assert_eq!(digit_sum(&n(1234), &n(10)).unwrap(), n(10));
        assert_eq!(digit_sum(&n(0), &n(10)).unwrap(), n(0));
        assert!(digit_sum(&n(3), &n(0)).is_err());
    }

    #[test]
    fn digit_sum_big_base_and_value() {
        // 2^70 in base 2^35 is "1 0 0"
        let m = Natural::one() << 70;
        let g = Natural::one() << 35;
        assert_eq!(digit_sum(&m, &g).unwrap(), n(1));
        assert_eq!(digit_sum(&m, &n(2)).unwrap(), n(1));
        assert_eq!(digit_sum(&(m - 1u32), &n(2)).unwrap(), n(70));
    }

    #[test]
    fn ord_base_examples() {
        assert_eq!(ord_base(&n(24), &n(2)).unwrap(), 3);
        assert_eq!(ord_base(&n(45), &n(3)).unwrap(), 2);
        assert_eq!(ord_base(&n(7), &n(5)).unwrap(), 0);
        assert_eq!(ord_base(&n(0), &n(5)), Err(Error::UndefinedOrder));
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(&n(11), &n(6)).unwrap(), n(5));
        assert_eq!(mod_inverse(&n(1), &n(9)).unwrap(), n(1));
        assert_eq!(mod_inverse(&n(23), &n(14)).unwrap(), n(11));
        assert!(matches!(
            mod_inverse(&n(4), &n(6)),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn divisors_examples() {
        let d = |v: u64| -> Vec<u64> {
            divisors(&factorize_u64(v).unwrap())
                .iter()
                .map(|x| x.to_u64().unwrap())
                .collect()
        };
        assert_eq!(d(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(d(7), vec![1, 7]);
        assert_eq!(d(45), vec![1, 3, 5, 9, 15, 45]);
        assert_eq!(d(1), vec![1]);
    }

    #[test]
    fn factorization_rejects_bad_entries() {
        assert!(PrimeFactorization::from_entries(vec![(n(4), 1)]).is_err());
        assert!(PrimeFactorization::from_entries(vec![(n(5), 1), (n(3), 1)]).is_err());
        assert!(PrimeFactorization::from_entries(vec![(n(3), 0)]).is_err());
        assert!(PrimeFactorization::verify(&n(16), vec![(n(3), 1), (n(5), 1)]).is_err());
        let f = PrimeFactorization::verify(&n(45), vec![(n(3), 2), (n(5), 1)]).unwrap();
        assert_eq!(f.to_string(), "3^2 * 5");
        assert!(!f.is_squarefree());
        assert_eq!(f.radical(), n(15));
    }

    #[test]
    fn isqrt_edges() {
        for v in [0u64, 1, 2, 3, 4, 15, 16, 17, u64::MAX, (1 << 32) - 1, (1 << 32) + 1] {
            let r = isqrt_u64(v);
            assert!(r as u128 * r as u128 <= v as u128);
            assert!((r as u128 + 1) * (r as u128 + 1) > v as u128);
        }
    }

    proptest! {
        #[test]
        fn digits_round_trip(m in any::<u64>(), g in 2u64..=1000) {
            let ds = digits(&n(m), &n(g)).unwrap();
            let mut acc = Natural::zero();
            for d in ds.iter().rev() {
                prop_assert!(*d < n(g));
                acc = acc * g + d;
            }
            prop_assert_eq!(acc, n(m));
            prop_assert!(ds.last().is_none_or(|d| !d.is_zero()));
        }

        #[test]
        fn digit_sum_casts_out(m in any::<u64>(), g in 2u64..=1000) {
            let s = digit_sum_u64(m, g);
            prop_assert_eq!(s % (g - 1), m % (g - 1));
            if m < g {
                prop_assert_eq!(s, m);
            } else {
                prop_assert!(s < m);
            }
        }

        #[test]
        fn big_and_word_digit_sums_agree(m in any::<u64>(), g in 2u64..=u64::MAX) {
            let big = digit_sum(&(n(m) * n(g) + n(m % g)), &n(g)).unwrap();
            prop_assert_eq!(big, n(m % g) + n(digit_sum_u64(m, g)));
        }

        #[test]
        fn mod_inverse_is_inverse(a in 1u64..1_000_000, m in 2u64..1_000_000) {
            match mod_inverse(&n(a), &n(m)) {
                Ok(x) => {
                    prop_assert!(x >= n(1) && x < n(m));
                    prop_assert_eq!((x * a) % m, n(1 % m));
                }
                Err(_) => prop_assert!(a.gcd(&m) != 1),
            }
        }
    }
}
