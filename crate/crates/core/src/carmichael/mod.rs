//! Carmichael numbers: Korselt's criterion, the base-`p` digit-sum
//! characterization, primary and exceptional subsets, the sharp
//! prime-factor bounds, a segmented enumerator and distribution tables.

mod sieve;
mod table;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{digit_sum, factorize, Natural, PrimeFactorization};
use crate::error::{Error, Result};

pub use sieve::{
    enumerate_carmichael, for_each_carmichael, EnumerationOptions, Filter,
    DEFAULT_ENUMERATION_LIMIT, DEFAULT_SEGMENT_SIZE,
};
pub use table::{distribution_table, render_ratio, DistributionRow, MAX_TRACKED_FACTORS};

fn s_p(f: &PrimeFactorization, p: &Natural) -> Natural {
    digit_sum(f.value(), p).expect("prime base")
}

/// Korselt's criterion: squarefree and `p - 1 | m - 1` for every prime
/// `p | m`. Primes pass; compositeness is left to [`is_carmichael`].
pub fn korselt(f: &PrimeFactorization) -> bool {
    let m = f.value();
    if m.is_zero() || !f.is_squarefree() {
        return false;
    }
    let m1 = m - 1u32;
    f.primes().all(|p| (&m1 % (p - 1u32)).is_zero())
}

/// Carmichael test on a factored value.
pub fn is_carmichael_factored(f: &PrimeFactorization) -> bool {
    f.num_distinct() >= 2 && korselt(f)
}

fn factor_checked(m: &Natural) -> Result<PrimeFactorization> {
    if *m < Natural::from(2u8) {
        return Err(Error::InvalidInput(format!("expected m >= 2, got {m}")));
    }
    factorize(m)
}

/// `m` is composite and satisfies Korselt's criterion. Needs `2 <= m < 2^64`.
pub fn is_carmichael(m: &Natural) -> Result<bool> {
    Ok(is_carmichael_factored(&factor_checked(m)?))
}

/// Squarefree with `s_p(m) >= p` and `s_p(m) ≡ 1 (mod p - 1)` for every
/// prime `p | m`.
pub fn digit_characterization(f: &PrimeFactorization) -> bool {
    if *f.value() < Natural::from(2u8) || !f.is_squarefree() {
        return false;
    }
    f.primes().all(|p| {
        let s = s_p(f, p);
        s >= *p && ((&s - 1u32) % (p - 1u32)).is_zero()
    })
}

/// Squarefree, `m > 1`, and `s_p(m) = p` for every prime `p | m`.
pub fn is_primary_factored(f: &PrimeFactorization) -> bool {
    *f.value() > Natural::one() && f.is_squarefree() && f.primes().all(|p| s_p(f, p) == *p)
}

pub fn is_primary_carmichael(m: &Natural) -> Result<bool> {
    Ok(is_primary_factored(&factor_checked(m)?))
}

/// Carmichael with `s_p(m) != p` for every prime `p | m`.
pub fn is_exceptional_factored(f: &PrimeFactorization) -> bool {
    is_carmichael_factored(f) && f.primes().all(|p| s_p(f, p) != *p)
}

pub fn is_exceptional(m: &Natural) -> Result<bool> {
    Ok(is_exceptional_factored(&factor_checked(m)?))
}

/// `s_p(m) - p` for each prime `p | m`, in prime order.
pub fn digit_excess(f: &PrimeFactorization) -> Vec<BigInt> {
    f.primes()
        .map(|p| BigInt::from(s_p(f, p)) - BigInt::from(p.clone()))
        .collect()
}

/// The constant `α²` in `p <= α √m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeBound {
    /// `α² = 17/33`, valid on all Carmichael numbers.
    General,
    /// `α² = 66337/132673`, valid on primary Carmichael numbers.
    Primary,
}

impl PrimeBound {
    /// `(numerator, denominator)` of `α²`.
    pub fn alpha_squared(self) -> (u64, u64) {
        match self {
            PrimeBound::General => (17, 33),
            PrimeBound::Primary => (66337, 132673),
        }
    }

    fn compare(self, f: &PrimeFactorization, p: &Natural) -> std::cmp::Ordering {
        let (a, b) = self.alpha_squared();
        (p * p * b).cmp(&(f.value() * a))
    }
}

/// Every prime `p | m` satisfies `p² <= α² m`, compared exactly.
pub fn prime_bound_check(f: &PrimeFactorization, bound: PrimeBound) -> bool {
    f.primes().all(|p| bound.compare(f, p).is_le())
}

/// Some prime factor attains `p² = α² m`.
pub fn prime_bound_attained(f: &PrimeFactorization, bound: PrimeBound) -> bool {
    f.primes().any(|p| bound.compare(f, p).is_eq())
}

/// A Carmichael number with its factorization and subset flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarmichaelRecord {
    pub m: Natural,
    pub factorization: PrimeFactorization,
    pub n_factors: usize,
    pub is_primary: bool,
    pub is_exceptional: bool,
}

impl CarmichaelRecord {
    /// `None` unless the factored value is a Carmichael number.
    pub fn from_factorization(f: PrimeFactorization) -> Option<Self> {
        if !is_carmichael_factored(&f) {
            return None;
        }
        let sums: Vec<Natural> = f.primes().map(|p| s_p(&f, p)).collect();
        let is_primary = f.primes().zip(&sums).all(|(p, s)| s == p);
        let is_exceptional = f.primes().zip(&sums).all(|(p, s)| s != p);
        Some(Self {
            m: f.value().clone(),
            n_factors: f.num_distinct(),
            factorization: f,
            is_primary,
            is_exceptional,
        })
    }

    pub fn matches(&self, filter: Filter) -> bool {
        match filter {
            Filter::All => true,
            Filter::Primary => self.is_primary,
            Filter::Exceptional => self.is_exceptional,
            Filter::Factors(k) => self.n_factors == k,
        }
    }
}

/// `gcd` of `p - 1` over the prime factors.
pub fn gcd_of_predecessors(f: &PrimeFactorization) -> Natural {
    f.primes()
        .map(|p| p - 1u32)
        .fold(Natural::zero(), |acc, x| acc.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize_u64;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    fn f(v: u64) -> PrimeFactorization {
        factorize_u64(v).unwrap()
    }

    #[test]
    fn korselt_examples() {
        assert!(korselt(&f(561)));
        assert!(!korselt(&f(9)));
        assert!(korselt(&f(1729)));
        assert!(korselt(&f(7)));
        assert!(is_carmichael(&n(561)).unwrap());
        assert!(!is_carmichael(&n(7)).unwrap());
        assert!(is_carmichael(&n(172_081)).unwrap());
        assert!(is_carmichael(&n(1)).is_err());
    }

    #[test]
    fn primary_and_exceptional() {
        assert!(is_primary_carmichael(&n(1729)).unwrap());
        assert!(!is_primary_carmichael(&n(561)).unwrap());
        assert!(!is_primary_carmichael(&n(172_081)).unwrap());
        assert!(is_exceptional(&n(173_085_121)).unwrap());
        assert!(!is_exceptional(&n(1729)).unwrap());
        let cs4 = f(954_732_853);
        assert!(is_exceptional_factored(&cs4));
        assert_eq!(cs4.num_distinct(), 4);
        let excess = digit_excess(&cs4);
        for (p, e) in cs4.primes().zip(excess) {
            assert_eq!(e, BigInt::from(p.clone()) - 1);
        }
    }

    #[test]
    fn digit_characterization_examples() {
        assert!(digit_characterization(&f(561)));
        assert!(!digit_characterization(&f(15)));
        assert!(!digit_characterization(&f(45)));
    }

    #[test]
    fn characterization_matches_korselt() {
        for m in 2..200_000u64 {
            let fm = f(m);
            assert_eq!(
                is_carmichael_factored(&fm),
                fm.num_distinct() >= 2 && digit_characterization(&fm),
                "m = {m}"
            );
        }
    }

    #[test]
    fn prime_bounds() {
        assert!(prime_bound_check(&f(561), PrimeBound::General));
        assert!(prime_bound_attained(&f(561), PrimeBound::General));
        let hn = f(8_801_128_801);
        assert!(is_primary_factored(&hn));
        assert!(prime_bound_check(&hn, PrimeBound::Primary));
        assert!(prime_bound_attained(&hn, PrimeBound::Primary));
        assert!(!prime_bound_attained(&f(1729), PrimeBound::Primary));
    }

    #[test]
    fn record_flags() {
        let r = CarmichaelRecord::from_factorization(f(1729)).unwrap();
        assert!(r.is_primary && !r.is_exceptional);
        assert_eq!(r.n_factors, 3);
        assert!(CarmichaelRecord::from_factorization(f(1728)).is_none());
        assert!(CarmichaelRecord::from_factorization(f(13)).is_none());
    }

    #[test]
    fn gcd_of_predecessors_example() {
        assert_eq!(gcd_of_predecessors(&f(1729)), n(6));
    }
}
