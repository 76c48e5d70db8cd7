//! s-decompositions and the digit-sum defined sets.
//!
//! A decomposition `m = g_1^e_1 ⋯ g_n^e_n` with strictly increasing bases is
//! an *s-decomposition* when every base satisfies `s_g(m) >= g`, and a
//! *strict* one when `s_g(m) = g`. Membership in SDG / SD is the existence
//! of such a decomposition; SLG / SL only ask for a single divisor `g` with
//! the digit condition; SDG* / SD* ask it of the prime factorization itself;
//! H is the squarefree part of SDG*.
//!
//! Every base satisfying the digit condition obeys `g^(ord_g(m)+1) < m`, so
//! candidate bases are the divisors below `√m`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{
    self, digit_sum, digit_sum_u64, factorize, ord_base, primes_up_to, Natural,
    PrimeFactorization,
};
use crate::error::{Error, Result};

/// Which digit-sum condition each base must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `s_g(m) >= g`
    AtLeast,
    /// `s_g(m) = g`
    Strict,
}

impl Mode {
    #[inline]
    pub fn accepts<T: Ord>(self, digit_sum: &T, base: &T) -> bool {
        match self {
            Mode::AtLeast => digit_sum >= base,
            Mode::Strict => digit_sum == base,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::AtLeast => "at-least",
            Mode::Strict => "strict",
        })
    }
}

/// An ordered list of `(base, exponent)` pairs whose product is the
/// decomposed value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SDecomposition {
    factors: Vec<(Natural, u32)>,
    mode: Mode,
}

impl SDecomposition {
    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.factors
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn value(&self) -> Natural {
        self.factors
            .iter()
            .map(|(g, e)| num_traits::pow(g.clone(), *e as usize))
            .product()
    }

    /// `(g1, e1, g2, e2, ...)`, the key the search orders results by.
    pub fn sort_key(&self) -> Vec<Natural> {
        self.factors
            .iter()
            .flat_map(|(g, e)| [g.clone(), Natural::from(*e)])
            .collect()
    }

    /// Checks every structural and digit-sum invariant against `m`.
    pub fn is_valid_for(&self, m: &Natural) -> bool {
        if self.factors.len() < 2 || self.value() != *m {
            return false;
        }
        let two = Natural::from(2u8);
        self.factors.iter().enumerate().all(|(i, (g, e))| {
            if *e == 0 || *g < two || (i > 0 && self.factors[i - 1].0 >= *g) {
                return false;
            }
            let Ok(s) = digit_sum(m, g) else { return false };
            let Ok(ord) = ord_base(m, g) else { return false };
            self.mode.accepts(&s, g)
                && ord >= *e
                && num_traits::pow(g.clone(), ord as usize + 1) < *m
        })
    }
}

impl fmt::Display for SDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Depth-first search over strictly increasing base sequences. Returns
/// `true` once `max` results are collected.
fn search<T: Integer + Clone>(
    rest: &T,
    candidates: &[T],
    start: usize,
    stack: &mut Vec<(T, u32)>,
    out: &mut Vec<Vec<(T, u32)>>,
    max: usize,
) -> bool {
    if rest.is_one() {
        out.push(stack.clone());
        return out.len() >= max;
    }
    for (k, g) in candidates.iter().enumerate().skip(start) {
        if g > rest {
            break;
        }
        let mut q = rest.clone();
        let mut e = 0;
        loop {
            let (next, r) = q.div_rem(g);
            if !r.is_zero() {
                break;
            }
            q = next;
            e += 1;
            // the quotient must be 1 or built from strictly larger bases
            if !q.is_one() && q <= *g {
                continue;
            }
            stack.push((g.clone(), e));
            let done = search(&q, candidates, k + 1, stack, out, max);
            stack.pop();
            if done {
                return true;
            }
        }
    }
    false
}

fn search_u64(m: u64, candidates: &[u64], max: usize) -> Vec<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    if max > 0 {
        search(&m, candidates, 0, &mut Vec::new(), &mut out, max);
    }
    out
}

/// Divisors `g >= 2` of the factored value meeting the mode's digit
/// condition, ascending.
pub fn candidate_bases(f: &PrimeFactorization, mode: Mode) -> Vec<Natural> {
    let m = f.value();
    if let Some(m64) = m.to_u64() {
        return candidate_bases_u64(m64, f, mode)
            .into_iter()
            .map(Natural::from)
            .collect();
    }
    arith::divisors(f)
        .into_iter()
        .skip(1)
        .take_while(|g| g * g < *m)
        .filter(|g| {
            let s = digit_sum(m, g).expect("base >= 2");
            mode.accepts(&s, g)
        })
        .collect()
}

fn candidate_bases_u64(m: u64, f: &PrimeFactorization, mode: Mode) -> Vec<u64> {
    let entries: Vec<(u64, u32)> = f
        .entries()
        .iter()
        .map(|(p, e)| (p.to_u64().expect("factor of a word"), *e))
        .collect();
    arith::divisors_u64(&entries)
        .into_iter()
        .skip(1)
        .take_while(|&g| (g as u128) * (g as u128) < m as u128)
        .filter(|&g| mode.accepts(&digit_sum_u64(m, g), &g))
        .collect()
}

/// All s-decompositions of a factored value, or the first `max_results`,
/// in lexicographic order of `(g1, e1, g2, e2, ...)`.
pub fn s_decompositions_factored(
    f: &PrimeFactorization,
    mode: Mode,
    max_results: Option<usize>,
) -> Vec<SDecomposition> {
    let max = max_results.unwrap_or(usize::MAX);
    let m = f.value();
    if *m < Natural::from(2u8) || max == 0 {
        return Vec::new();
    }
    let wrap = |factors| SDecomposition { factors, mode };
    if let Some(m64) = m.to_u64() {
        let cands = candidate_bases_u64(m64, f, mode);
        return search_u64(m64, &cands, max)
            .into_iter()
            .map(|d| wrap(d.into_iter().map(|(g, e)| (Natural::from(g), e)).collect()))
            .collect();
    }
    let cands = candidate_bases(f, mode);
    let mut out = Vec::new();
    search(m, &cands, 0, &mut Vec::new(), &mut out, max);
    out.into_iter().map(wrap).collect()
}

/// s-decompositions of `m >= 2`; `m` must be below 2^64 (otherwise use
/// [`s_decompositions_factored`] with a supplied factorization).
pub fn s_decompositions(
    m: &Natural,
    mode: Mode,
    max_results: Option<usize>,
) -> Result<Vec<SDecomposition>> {
    if *m < Natural::from(2u8) {
        return Err(Error::InvalidInput(format!(
            "s-decompositions need m >= 2, got {m}"
        )));
    }
    let f = factorize(m)?;
    Ok(s_decompositions_factored(&f, mode, max_results))
}

fn factor_for_membership(m: &Natural) -> Result<Option<PrimeFactorization>> {
    if m.is_zero() {
        return Err(Error::InvalidInput("membership needs m >= 1".into()));
    }
    if m.is_one() {
        return Ok(None);
    }
    factorize(m).map(Some)
}

pub fn in_sdg_factored(f: &PrimeFactorization) -> bool {
    in_sdg_star(f) || !s_decompositions_factored(f, Mode::AtLeast, Some(1)).is_empty()
}

pub fn in_sd_factored(f: &PrimeFactorization) -> bool {
    in_sd_star(f) || !s_decompositions_factored(f, Mode::Strict, Some(1)).is_empty()
}

pub fn in_sdg(m: &Natural) -> Result<bool> {
    Ok(factor_for_membership(m)?.is_some_and(|f| in_sdg_factored(&f)))
}

pub fn in_sd(m: &Natural) -> Result<bool> {
    Ok(factor_for_membership(m)?.is_some_and(|f| in_sd_factored(&f)))
}

/// Smallest divisor `1 < g < m` with `s_g(m) >= g` (mode `AtLeast`) or
/// `s_g(m) = g` (mode `Strict`).
pub fn single_witness_factored(f: &PrimeFactorization, mode: Mode) -> Option<Natural> {
    if *f.value() < Natural::from(2u8) {
        return None;
    }
    candidate_bases(f, mode).into_iter().next()
}

/// SLG membership with its smallest witness.
pub fn slg_witness(m: &Natural) -> Result<Option<Natural>> {
    Ok(factor_for_membership(m)?.and_then(|f| single_witness_factored(&f, Mode::AtLeast)))
}

/// SL membership with its smallest witness.
pub fn sl_witness(m: &Natural) -> Result<Option<Natural>> {
    Ok(factor_for_membership(m)?.and_then(|f| single_witness_factored(&f, Mode::Strict)))
}

fn primes_meet(f: &PrimeFactorization, mode: Mode) -> bool {
    let m = f.value();
    *m >= Natural::from(2u8)
        && f.primes().all(|p| {
            let s = digit_sum(m, p).expect("prime base");
            mode.accepts(&s, p)
        })
}

/// SDG*: every prime `p | m` has `s_p(m) >= p`.
pub fn in_sdg_star(f: &PrimeFactorization) -> bool {
    primes_meet(f, Mode::AtLeast)
}

/// SD*: every prime `p | m` has `s_p(m) = p`.
pub fn in_sd_star(f: &PrimeFactorization) -> bool {
    primes_meet(f, Mode::Strict)
}

/// H: squarefree members of SDG*.
pub fn in_h(f: &PrimeFactorization) -> bool {
    f.is_squarefree() && in_sdg_star(f)
}

/// The sets tracked per value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DigitSet {
    Sdg,
    Sd,
    Slg,
    Sl,
    SdgStar,
    SdStar,
    H,
}

impl DigitSet {
    pub const ALL: [DigitSet; 7] = [
        DigitSet::Sdg,
        DigitSet::Sd,
        DigitSet::Slg,
        DigitSet::Sl,
        DigitSet::SdgStar,
        DigitSet::SdStar,
        DigitSet::H,
    ];

    fn bit(self) -> u8 {
        1 << self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            DigitSet::Sdg => "SDG",
            DigitSet::Sd => "SD",
            DigitSet::Slg => "SLG",
            DigitSet::Sl => "SL",
            DigitSet::SdgStar => "SDG*",
            DigitSet::SdStar => "SD*",
            DigitSet::H => "H",
        }
    }
}

/// Bit set of [`DigitSet`] memberships.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SetFlags(u8);

impl SetFlags {
    pub fn contains(self, set: DigitSet) -> bool {
        self.0 & set.bit() != 0
    }

    pub fn insert(&mut self, set: DigitSet) {
        self.0 |= set.bit();
    }

    pub fn with(mut self, set: DigitSet, on: bool) -> Self {
        if on {
            self.insert(set);
        }
        self
    }

    /// The inclusions SD ⊂ SDG ⊂ SLG, SD ⊂ SL ⊂ SLG, SD* ⊂ SD,
    /// SDG* ⊂ SDG, SD* ⊂ SDG*, H ⊂ SDG*.
    pub fn implications_hold(self) -> bool {
        use DigitSet::*;
        let imp = |a, b| !self.contains(a) || self.contains(b);
        imp(Sd, Sdg)
            && imp(Sdg, Slg)
            && imp(Sd, Sl)
            && imp(Sl, Slg)
            && imp(SdStar, Sd)
            && imp(SdgStar, Sdg)
            && imp(SdStar, SdgStar)
            && imp(H, SdgStar)
    }
}

/// Full classification of one value against the digit sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetMembershipRecord {
    pub m: Natural,
    pub flags: SetFlags,
    /// Smallest `g` with `s_g(m) >= g`.
    pub slg_witness: Option<Natural>,
    /// Smallest `g` with `s_g(m) = g`.
    pub sl_witness: Option<Natural>,
    /// First strict decomposition if one exists, else the first
    /// s-decomposition.
    pub decomposition: Option<SDecomposition>,
}

impl SetMembershipRecord {
    pub fn contains(&self, set: DigitSet) -> bool {
        self.flags.contains(set)
    }
}

/// Classifies a factored value against every digit set.
pub fn classify(f: &PrimeFactorization) -> SetMembershipRecord {
    let slg_witness = single_witness_factored(f, Mode::AtLeast);
    let sl_witness = single_witness_factored(f, Mode::Strict);
    let sdg_star = in_sdg_star(f);
    let sd_star = in_sd_star(f);
    let strict = s_decompositions_factored(f, Mode::Strict, Some(1))
        .into_iter()
        .next();
    let decomposition = strict.clone().or_else(|| {
        if sdg_star {
            Some(SDecomposition {
                factors: f.entries().to_vec(),
                mode: Mode::AtLeast,
            })
        } else {
            s_decompositions_factored(f, Mode::AtLeast, Some(1))
                .into_iter()
                .next()
        }
    });
    let flags = SetFlags::default()
        .with(DigitSet::Sdg, decomposition.is_some())
        .with(DigitSet::Sd, strict.is_some())
        .with(DigitSet::Slg, slg_witness.is_some())
        .with(DigitSet::Sl, sl_witness.is_some())
        .with(DigitSet::SdgStar, sdg_star)
        .with(DigitSet::SdStar, sd_star)
        .with(DigitSet::H, in_h(f));
    SetMembershipRecord {
        m: f.value().clone(),
        flags,
        slg_witness,
        sl_witness,
        decomposition,
    }
}

/// Largest `n` accepted by [`bernoulli_denominator`].
pub const BERNOULLI_MAX: u64 = 50_000_000;

/// `D_n`, the denominator of `B_n(x) - B_n`: the product of the primes `p`
/// with `s_p(n) >= p`.
pub fn bernoulli_denominator(n: u64) -> Result<Natural> {
    if n == 0 {
        return Err(Error::InvalidInput("D_n needs n >= 1".into()));
    }
    if n > BERNOULLI_MAX {
        return Err(Error::ResourceLimit(format!(
            "D_n is computed for n <= {BERNOULLI_MAX}"
        )));
    }
    // s_p(n) < p whenever p > n
    Ok(primes_up_to(n)
        .into_iter()
        .filter(|&p| digit_sum_u64(n, p) >= p)
        .map(Natural::from)
        .product())
}

/// Default ceiling for [`SetSieve`] and [`count_sets`].
pub const DEFAULT_SET_LIMIT: u64 = 1_000_000;

const SET_CHUNK: u64 = 1 << 16;

/// Membership flags for every `m` in `[0, limit)`, computed by a divisor
/// sieve: each base `g` visits its multiples `m > g^2` once.
#[derive(Debug, Clone)]
pub struct SetSieve {
    flags: Vec<SetFlags>,
}

impl SetSieve {
    /// Builds the sieve, refusing limits above `max_limit`.
    pub fn with_max(limit: u64, max_limit: u64) -> Result<Self> {
        if limit > max_limit {
            return Err(Error::ResourceLimit(format!(
                "set sieve limit {limit} exceeds the configured maximum {max_limit}"
            )));
        }
        Ok(Self::build(limit))
    }

    pub fn new(limit: u64) -> Result<Self> {
        Self::with_max(limit, DEFAULT_SET_LIMIT)
    }

    fn build(limit: u64) -> Self {
        let spf = smallest_prime_factors(limit);
        let chunks: Vec<u64> = (0..limit.div_ceil(SET_CHUNK)).collect();
        let flags = chunks
            .par_iter()
            .flat_map_iter(|&c| {
                let lo = c * SET_CHUNK;
                let hi = (lo + SET_CHUNK).min(limit);
                sieve_chunk(lo, hi, &spf)
            })
            .collect();
        Self { flags }
    }

    pub fn limit(&self) -> u64 {
        self.flags.len() as u64
    }

    /// Flags of `m < limit`.
    pub fn flags(&self, m: u64) -> SetFlags {
        self.flags[m as usize]
    }

    /// Members of `set` in ascending order.
    pub fn members(&self, set: DigitSet) -> impl Iterator<Item = u64> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.contains(set))
            .map(|(m, _)| m as u64)
    }

    /// Number of members of `set` strictly below `x` (`x <= limit`).
    pub fn count_below(&self, set: DigitSet, x: u64) -> u64 {
        self.flags[..x as usize]
            .iter()
            .filter(|f| f.contains(set))
            .count() as u64
    }

    pub fn counts_below(&self, x: u64) -> SetCounts {
        let mut counts = SetCounts {
            limit: x,
            ..SetCounts::default()
        };
        for f in &self.flags[..x as usize] {
            counts.sdg += f.contains(DigitSet::Sdg) as u64;
            counts.sd += f.contains(DigitSet::Sd) as u64;
            counts.sdg_star += f.contains(DigitSet::SdgStar) as u64;
            counts.sd_star += f.contains(DigitSet::SdStar) as u64;
            counts.slg += f.contains(DigitSet::Slg) as u64;
            counts.sl += f.contains(DigitSet::Sl) as u64;
        }
        counts
    }
}

fn smallest_prime_factors(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut spf = vec![0u32; n.max(2)];
    for i in 2..n {
        if spf[i] != 0 {
            continue;
        }
        spf[i] = i as u32;
        let mut j = i.saturating_mul(i);
        while j < n {
            if spf[j] == 0 {
                spf[j] = i as u32;
            }
            j += i;
        }
    }
    spf
}

fn sieve_chunk(lo: u64, hi: u64, spf: &[u32]) -> Vec<SetFlags> {
    let len = (hi - lo) as usize;
    // (base, strict) pairs, bases ascending
    let mut cands: Vec<Vec<(u32, bool)>> = vec![Vec::new(); len];
    let mut g = 2u64;
    while g * (g + 1) < hi {
        let first = (g * (g + 1)).max(lo.div_ceil(g) * g);
        let mut m = first;
        while m < hi {
            let s = digit_sum_u64(m, g);
            if s >= g {
                cands[(m - lo) as usize].push((g as u32, s == g));
            }
            m += g;
        }
        g += 1;
    }

    let mut out = Vec::with_capacity(len);
    let mut ge = Vec::new();
    let mut eq = Vec::new();
    for (i, list) in cands.iter().enumerate() {
        let m = lo + i as u64;
        let mut flags = SetFlags::default();
        if m < 2 || list.is_empty() {
            out.push(flags);
            continue;
        }
        flags.insert(DigitSet::Slg);
        ge.clear();
        eq.clear();
        for &(g, strict) in list {
            ge.push(g as u64);
            if strict {
                eq.push(g as u64);
            }
        }
        if !eq.is_empty() {
            flags.insert(DigitSet::Sl);
        }

        let mut squarefree = true;
        let mut all_ge = true;
        let mut all_eq = true;
        let mut rest = m;
        while rest > 1 {
            let p = spf[rest as usize] as u64;
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            squarefree &= e == 1;
            match list.iter().find(|&&(g, _)| g as u64 == p) {
                Some(&(_, strict)) => all_eq &= strict,
                None => {
                    all_ge = false;
                    all_eq = false;
                }
            }
        }
        if all_ge {
            flags.insert(DigitSet::SdgStar);
            flags.insert(DigitSet::Sdg);
            if squarefree {
                flags.insert(DigitSet::H);
            }
        } else if !search_u64(m, &ge, 1).is_empty() {
            flags.insert(DigitSet::Sdg);
        }
        if all_eq {
            flags.insert(DigitSet::SdStar);
            flags.insert(DigitSet::Sd);
        } else if !eq.is_empty() && !search_u64(m, &eq, 1).is_empty() {
            flags.insert(DigitSet::Sd);
        }
        out.push(flags);
    }
    out
}

/// Counts of SDG, SD, SDG*, SD*, SLG, SL members below `limit`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SetCounts {
    pub limit: u64,
    pub sdg: u64,
    pub sd: u64,
    pub sdg_star: u64,
    pub sd_star: u64,
    pub slg: u64,
    pub sl: u64,
}

/// Exact set counts below `limit`; refuses limits above `max_limit`.
pub fn count_sets(limit: u64, max_limit: u64) -> Result<SetCounts> {
    Ok(SetSieve::with_max(limit, max_limit)?.counts_below(limit))
}
