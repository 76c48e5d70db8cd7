//! Segmented Korselt sieve.
//!
//! Writing an odd `n = k p`, the condition `p - 1 | n - 1` is `k ≡ 1
//! (mod p - 1)`. For each odd prime `p <= √limit` the sieve walks the odd
//! multiples of `p` in a segment, tracking `k mod (p - 1)` incrementally, and
//! marks every multiple that fails the congruence or is divisible by `p²`.
//! Survivors accumulate the product of their small primes; the cofactor left
//! over is 1 or a single prime above `√limit`, checked directly.

use rayon::prelude::*;

use super::CarmichaelRecord;
use crate::arith::{factorize_u64, isqrt_u64, primes_up_to};
use crate::error::{Error, Result};

/// Default ceiling for [`enumerate_carmichael`].
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1_000_000_000;

/// Integers per segment.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    All,
    Primary,
    Exceptional,
    /// Exactly `k` prime factors.
    Factors(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub segment_size: u64,
    pub max_limit: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            segment_size: DEFAULT_SEGMENT_SIZE,
            max_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

/// Carmichael numbers `< limit` in one segment `[lo, hi)`.
fn sieve_segment(lo: u64, hi: u64, primes: &[u64]) -> Vec<u64> {
    // index i stands for the odd number lo_odd + 2i
    let lo_odd = lo | 1;
    if lo_odd >= hi {
        return Vec::new();
    }
    let len = ((hi - lo_odd).div_ceil(2)) as usize;
    let mut bad = vec![false; len];
    let mut prod = vec![1u64; len];
    let mut count = vec![0u8; len];

    for &p in primes {
        if p * p >= hi {
            break;
        }
        let pm1 = p - 1;
        // first odd multiple of p that is >= lo_odd
        let mut k = lo_odd.div_ceil(p);
        if k % 2 == 0 {
            k += 1;
        }
        let mut n = k * p;
        if n >= hi {
            continue;
        }
        let mut r = k % pm1;
        let step = 2 % pm1;
        let mut i = ((n - lo_odd) / 2) as usize;
        let di = p as usize;
        while i < len {
            if r != 1 % pm1 {
                bad[i] = true;
            } else if !bad[i] {
                if (n / p) % p == 0 {
                    bad[i] = true;
                } else {
                    prod[i] *= p;
                    count[i] += 1;
                }
            }
            i += di;
            n += 2 * p;
            r += step;
            if r >= pm1 {
                r -= pm1;
            }
        }
    }

    let mut out = Vec::new();
    for i in 0..len {
        if bad[i] || count[i] == 0 {
            continue;
        }
        let n = lo_odd + 2 * i as u64;
        let rest = n / prod[i];
        let mut factors = count[i] as u32;
        if rest > 1 {
            if !(n - 1).is_multiple_of(rest - 1) {
                continue;
            }
            factors += 1;
        }
        if factors >= 2 {
            out.push(n);
        }
    }
    out
}

/// Calls `sink` on every Carmichael number `< limit` that matches `filter`,
/// in ascending order. Segments are sieved in parallel batches.
pub fn for_each_carmichael(
    limit: u64,
    filter: Filter,
    opts: EnumerationOptions,
    mut sink: impl FnMut(CarmichaelRecord),
) -> Result<()> {
    if limit > opts.max_limit {
        return Err(Error::ResourceLimit(format!(
            "enumeration limit {limit} exceeds the configured maximum {}",
            opts.max_limit
        )));
    }
    if opts.segment_size < 2 {
        return Err(Error::InvalidInput("segment size must be at least 2".into()));
    }
    // odd primes up to √limit; 2 never divides an odd candidate
    let primes: Vec<u64> = primes_up_to(isqrt_u64(limit) + 1)
        .into_iter()
        .skip(1)
        .collect();
    let segments: Vec<(u64, u64)> = (0..limit.div_ceil(opts.segment_size))
        .map(|s| {
            let lo = s * opts.segment_size;
            (lo, (lo + opts.segment_size).min(limit))
        })
        .collect();
    let batch = rayon::current_num_threads().max(1) * 2;
    for group in segments.chunks(batch) {
        let found: Vec<Vec<u64>> = group
            .par_iter()
            .map(|&(lo, hi)| sieve_segment(lo, hi, &primes))
            .collect();
        for m in found.into_iter().flatten() {
            let f = factorize_u64(m)?;
            let record = CarmichaelRecord::from_factorization(f).ok_or_else(|| {
                Error::Internal(format!("sieve reported {m}, which fails Korselt"))
            })?;
            if record.matches(filter) {
                sink(record);
            }
        }
    }
    Ok(())
}

/// All Carmichael numbers `< limit` matching `filter`, ascending.
pub fn enumerate_carmichael(
    limit: u64,
    filter: Filter,
    opts: EnumerationOptions,
) -> Result<Vec<CarmichaelRecord>> {
    let mut out = Vec::new();
    for_each_carmichael(limit, filter, opts, |r| out.push(r))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carmichael::is_carmichael;
    use crate::Natural;

    fn values(limit: u64, filter: Filter, segment_size: u64) -> Vec<u64> {
        let opts = EnumerationOptions {
            segment_size,
            ..Default::default()
        };
        enumerate_carmichael(limit, filter, opts)
            .unwrap()
            .into_iter()
            .map(|r| r.m.try_into().unwrap())
            .collect()
    }

    #[test]
    fn first_values() {
        assert_eq!(
            values(10_000, Filter::All, DEFAULT_SEGMENT_SIZE),
            vec![561, 1105, 1729, 2465, 2821, 6601, 8911]
        );
        assert_eq!(values(10_000, Filter::Primary, DEFAULT_SEGMENT_SIZE), vec![1729, 2821]);
        assert!(values(561, Filter::All, 64).is_empty());
        assert_eq!(values(562, Filter::All, 64), vec![561]);
        assert!(values(0, Filter::All, 64).is_empty());
    }

    #[test]
    fn agrees_with_pointwise_test_across_segment_sizes() {
        let expected: Vec<u64> = (2..300_000u64)
            .filter(|&m| is_carmichael(&Natural::from(m)).unwrap())
            .collect();
        for seg in [2, 7, 100, 4096, 1 << 16, DEFAULT_SEGMENT_SIZE] {
            assert_eq!(values(300_000, Filter::All, seg), expected, "segment {seg}");
        }
    }

    #[test]
    fn limit_checks() {
        let opts = EnumerationOptions {
            max_limit: 1000,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_carmichael(1001, Filter::All, opts),
            Err(Error::ResourceLimit(_))
        ));
    }
}
