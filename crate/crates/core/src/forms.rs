//! Chernick's three-factor universal forms
//! `U_r(t) = Π (r_ν (σ₃ t + ℓ) + 1)` over pairwise coprime triples
//! `r₁ < r₂ < r₃`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{digit_sum, factorize, is_prime, mod_inverse, Natural, PrimeFactorization};
use crate::digit_sets::{in_sd_factored, in_sdg_factored};
use crate::error::{Error, Result};

fn int(n: &Natural) -> BigInt {
    BigInt::from(n.clone())
}

fn nat(i: &BigInt) -> Natural {
    i.to_biguint().expect("nonnegative by construction")
}

/// A pairwise coprime triple `r₁ < r₂ < r₃` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple([Natural; 3]);

impl Triple {
    pub fn new(r1: Natural, r2: Natural, r3: Natural) -> Result<Self> {
        if r1.is_zero() {
            return Err(Error::InvalidTriple("entries must be positive".into()));
        }
        if !(r1 < r2 && r2 < r3) {
            return Err(Error::InvalidTriple(format!(
                "({r1},{r2},{r3}) is not strictly increasing"
            )));
        }
        for (a, b) in [(&r1, &r2), (&r1, &r3), (&r2, &r3)] {
            if !a.gcd(b).is_one() {
                return Err(Error::InvalidTriple(format!(
                    "{a} and {b} are not coprime"
                )));
            }
        }
        Ok(Self([r1, r2, r3]))
    }

    pub fn from_u64(r1: u64, r2: u64, r3: u64) -> Result<Self> {
        Self::new(r1.into(), r2.into(), r3.into())
    }

    /// `r_ν` for `ν ∈ {1, 2, 3}`.
    pub fn r(&self, nu: usize) -> &Natural {
        assert!((1..=3).contains(&nu), "index must be 1, 2 or 3");
        &self.0[nu - 1]
    }

    pub fn entries(&self) -> &[Natural; 3] {
        &self.0
    }

    /// `r = (1, 2, 3)`, the only triple with `ℓ = 0`.
    pub fn is_unit_case(&self) -> bool {
        self.0 == [1u32, 2, 3].map(Natural::from)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// `σ₁, σ₂, σ₃`, the residue `ℓ ≡ -σ₁/σ₂ (mod σ₃)` in `[0, σ₃)` and the
/// threshold `τ` above which the factors form a strict s-decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormParams {
    pub sigma1: Natural,
    pub sigma2: Natural,
    pub sigma3: Natural,
    pub ell: Natural,
    pub tau: u8,
}

pub fn form_params(r: &Triple) -> FormParams {
    let [a, b, c] = r.entries();
    let sigma1 = a + b + c;
    let sigma2 = a * b + a * c + b * c;
    let sigma3 = a * b * c;
    let inv = mod_inverse(&sigma2, &sigma3).expect("σ₂ is a unit mod σ₃ for coprime triples");
    let ell = (&sigma3 - (&sigma1 * inv) % &sigma3) % &sigma3;
    let tau = if a.is_one() && &ell + &sigma1 < sigma3 { 2 } else { 1 };
    FormParams {
        sigma1,
        sigma2,
        sigma3,
        ell,
        tau,
    }
}

impl FormParams {
    /// The documented invariants: `0 <= ℓ < σ₃`, `σ₂ ℓ ≡ -σ₁ (mod σ₃)`, and
    /// the parity relations.
    pub fn invariants_hold(&self) -> bool {
        let s3 = &self.sigma3;
        let congruent = ((&self.sigma2 * &self.ell + &self.sigma1) % s3).is_zero();
        let parity = if s3.is_odd() {
            self.sigma1.is_odd() && self.sigma2.is_odd()
        } else {
            self.ell.is_even() && self.sigma1.is_even() && self.sigma2.is_odd()
        };
        self.ell < *s3 && congruent && parity && (self.tau == 1 || self.tau == 2)
    }
}

/// `U_r(t)` at a given `t >= 0` with its three factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormValue {
    pub r: Triple,
    pub t: Natural,
    pub m: Natural,
    pub factors: [Natural; 3],
    /// Every factor is an odd prime.
    pub all_prime: bool,
}

impl FormValue {
    /// Factorization of `m` when all three factors are odd primes.
    pub fn prime_factorization(&self) -> Option<PrimeFactorization> {
        if !self.all_prime {
            return None;
        }
        PrimeFactorization::from_entries(self.factors.iter().map(|g| (g.clone(), 1)).collect())
            .ok()
    }
}

/// Which statement about the factors applies at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrictnessCase {
    /// `t >= τ`: the factors are a strict s-decomposition.
    AboveThreshold,
    /// `t = 1 < τ = 2`: `s_{g₁}(m) = 2g₁ - 1`, the other two strict.
    BelowThresholdOne,
    /// `t = 0`: governed by `ϑ`.
    Zero,
    /// `m = 1`, no decomposition.
    Degenerate,
}

impl fmt::Display for StrictnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrictnessCase::AboveThreshold => "t >= tau",
            StrictnessCase::BelowThresholdOne => "t = 1 < tau",
            StrictnessCase::Zero => "t = 0",
            StrictnessCase::Degenerate => "degenerate (m = 1)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictnessReport {
    pub case: StrictnessCase,
    pub value: FormValue,
    /// `s_{g_ν}(m)` per factor.
    pub digit_sums: [Natural; 3],
    /// `s_{g_ν}(m) = g_ν` for every factor.
    pub decomposition_strict: bool,
    /// `g₁ · g₂ · g₃` is an s-decomposition.
    pub decomposition_in_sdg: bool,
    /// Membership of `m` itself; `None` when `m` could not be factored.
    pub value_in_sd: Option<bool>,
    pub value_in_sdg: Option<bool>,
    pub vartheta: BigInt,
    /// The measured digit sums match the statement for this case.
    pub consistent: bool,
}

/// Exact quantities attached to factor `j` at `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormDiagnostics {
    pub j: usize,
    pub g: BigInt,
    /// `σ₃ / r_j³`
    pub alpha: BigRational,
    /// `σ₃ / r_j³ - σ₁ / r_j + 1`
    pub beta: BigRational,
    /// `{α} g - β`
    pub theta: BigInt,
    /// `σ₁ / r_j + ℓ σ₃ / r_j²`
    pub eta: BigInt,
    /// `η` at `j = 3`
    pub vartheta: BigInt,
}

impl FormDiagnostics {
    /// `g > θ > 1 + ⌊α⌋`, expected for `t >= 1` and `r_j >= 2`.
    pub fn theta_bounds_hold(&self) -> bool {
        let floor_alpha = self.alpha.floor().to_integer();
        self.g > self.theta && self.theta > floor_alpha + 1
    }
}

/// One congruence `U(t) ≡ residue (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceCheck {
    pub label: String,
    pub modulus: BigInt,
    pub residue: BigInt,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub t: BigInt,
    pub value: BigInt,
    pub checks: Vec<CongruenceCheck>,
}

impl CongruenceReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Three-factor Carmichael number written as `U_r(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inversion {
    pub r: Triple,
    /// `gcd(p₁ - 1, p₂ - 1, p₃ - 1) = σ₃ t + ℓ`
    pub u: Natural,
    pub t: Natural,
    pub params: FormParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimaryVerdict {
    /// All factors odd primes and every `s_{g_ν}(m) = g_ν`.
    Primary,
    /// All factors odd primes, some digit sum differs from its prime.
    CarmichaelNotPrimary,
    NotAllPrime,
}

impl fmt::Display for PrimaryVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimaryVerdict::Primary => "CP3",
            PrimaryVerdict::CarmichaelNotPrimary => "CN3 \\ CP3",
            PrimaryVerdict::NotAllPrime => "not all prime",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryCheck {
    pub verdict: PrimaryVerdict,
    pub value: FormValue,
    /// The verdict agrees with the threshold statement (`t >= τ` gives a
    /// primary value, `t = 1 < τ` never does).
    pub consistent: bool,
}

/// `U_r` with its parameters precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalForm {
    triple: Triple,
    params: FormParams,
}

impl UniversalForm {
    pub fn new(triple: Triple) -> Self {
        let params = form_params(&triple);
        Self { triple, params }
    }

    pub fn triple(&self) -> &Triple {
        &self.triple
    }

    pub fn params(&self) -> &FormParams {
        &self.params
    }

    /// `σ₃ t + ℓ`
    fn u_at(&self, t: &BigInt) -> BigInt {
        int(&self.params.sigma3) * t + int(&self.params.ell)
    }

    /// `g_ν(t)` for any integer `t`.
    pub fn factor_at(&self, nu: usize, t: &BigInt) -> BigInt {
        int(self.triple.r(nu)) * self.u_at(t) + 1
    }

    /// `U_r(t)` for any integer `t`.
    pub fn value_at(&self, t: &BigInt) -> BigInt {
        (1..=3).map(|nu| self.factor_at(nu, t)).product()
    }

    pub fn evaluate(&self, t: &Natural) -> FormValue {
        let ti = int(t);
        let factors = [1, 2, 3].map(|nu| nat(&self.factor_at(nu, &ti)));
        let m = factors.iter().product();
        let two = Natural::from(2u8);
        let all_prime = factors.iter().all(|g| *g > two && g.is_odd() && is_prime(g));
        FormValue {
            r: self.triple.clone(),
            t: t.clone(),
            m,
            factors,
            all_prime,
        }
    }

    /// `ϑ = σ₁ / r₃ + ℓ σ₃ / r₃²`.
    pub fn vartheta(&self) -> BigInt {
        self.eta(3)
    }

    fn eta(&self, j: usize) -> BigInt {
        let r = int(self.triple.r(j));
        let num = int(&self.params.sigma1) * &r + int(&self.params.ell) * int(&self.params.sigma3);
        let (q, rem) = num.div_rem(&(&r * &r));
        debug_assert!(rem.is_zero(), "η is integral");
        q
    }

    fn membership(&self, value: &FormValue) -> (Option<bool>, Option<bool>) {
        let f = value
            .prime_factorization()
            .or_else(|| factorize(&value.m).ok());
        match f {
            Some(f) if value.m > Natural::one() => {
                (Some(in_sd_factored(&f)), Some(in_sdg_factored(&f)))
            }
            Some(_) => (Some(false), Some(false)),
            None => (None, None),
        }
    }

    /// Digit sums of the three factors against the statement that applies
    /// at `t`.
    pub fn verify_strictness(&self, t: &Natural) -> StrictnessReport {
        let value = self.evaluate(t);
        let m = &value.m;
        let g = &value.factors;
        let digit_sums = [0, 1, 2].map(|i| digit_sum(m, &g[i]).expect("factor >= 1"));
        let decomposition_strict = (0..3).all(|i| digit_sums[i] == g[i]);
        let two = Natural::from(2u8);
        let decomposition_in_sdg = g[0] >= two
            && g[0] < g[1]
            && g[1] < g[2]
            && (0..3).all(|i| digit_sums[i] >= g[i]);
        let (value_in_sd, value_in_sdg) = self.membership(&value);
        let vartheta = self.vartheta();
        let tau = Natural::from(self.params.tau);

        let case = if m.is_one() {
            StrictnessCase::Degenerate
        } else if *t >= tau {
            StrictnessCase::AboveThreshold
        } else if t.is_one() {
            StrictnessCase::BelowThresholdOne
        } else {
            StrictnessCase::Zero
        };
        let consistent = match case {
            StrictnessCase::AboveThreshold => decomposition_strict && value_in_sd != Some(false),
            StrictnessCase::BelowThresholdOne => {
                digit_sums[0] == &g[0] * 2u32 - 1u32
                    && digit_sums[1] == g[1]
                    && digit_sums[2] == g[2]
                    && decomposition_in_sdg
                    && value_in_sdg != Some(false)
            }
            StrictnessCase::Zero | StrictnessCase::Degenerate => {
                if vartheta == BigInt::from(2) {
                    digit_sums[2] < g[2] && *m == &g[2] * &g[2] && g[2] == &g[0] * &g[1]
                } else {
                    digit_sums[2] == g[2] && *m > &g[2] * &g[2]
                }
            }
        };
        StrictnessReport {
            case,
            value,
            digit_sums,
            decomposition_strict,
            decomposition_in_sdg,
            value_in_sd,
            value_in_sdg,
            vartheta,
            consistent,
        }
    }

    /// `α, β, θ, η, ϑ` for factor `j ∈ {1, 2, 3}` at integer `t`.
    pub fn diagnostics(&self, j: usize, t: &BigInt) -> Result<FormDiagnostics> {
        if !(1..=3).contains(&j) {
            return Err(Error::InvalidInput(format!("index j must be 1, 2 or 3, got {j}")));
        }
        let r = int(self.triple.r(j));
        let s1 = int(&self.params.sigma1);
        let s3 = int(&self.params.sigma3);
        let alpha = BigRational::new(s3, &r * &r * &r);
        let beta = &alpha - BigRational::new(s1, r.clone()) + BigRational::one();
        let g = self.factor_at(j, t);
        let theta = alpha.fract() * BigRational::from_integer(g.clone()) - &beta;
        if !theta.is_integer() {
            return Err(Error::Internal(format!(
                "θ = {theta} is not integral for r = {}, j = {j}, t = {t}",
                self.triple
            )));
        }
        Ok(FormDiagnostics {
            j,
            g,
            alpha,
            beta,
            theta: theta.to_integer(),
            eta: self.eta(j),
            vartheta: self.vartheta(),
        })
    }

    /// The congruences satisfied by `U_r(t)` for integer `t`, plus
    /// `U ≡ 1 (mod g_ν - 1)` when `t >= 0` and `g_ν > 1`.
    pub fn congruence_checks(&self, t: &BigInt) -> CongruenceReport {
        let u = self.value_at(t);
        let s3 = int(&self.params.sigma3);
        let ell = int(&self.params.ell);
        let one = BigInt::one();
        let mut checks = Vec::new();
        let mut check = |label: String, modulus: BigInt, residue: BigInt| {
            let holds = u.mod_floor(&modulus) == residue.mod_floor(&modulus);
            checks.push(CongruenceCheck {
                label,
                modulus,
                residue,
                holds,
            });
        };
        if self.triple.is_unit_case() {
            check("U ≡ 1 mod 2σ₃²".into(), 2 * &s3 * &s3, one.clone());
            if t.mod_floor(&BigInt::from(3)) != BigInt::from(2) {
                check("U ≡ 1 mod σ₃³".into(), &s3 * &s3 * &s3, one.clone());
            }
            check("U ≡ 1 mod 8".into(), BigInt::from(8), one.clone());
        } else {
            if t.is_zero() {
                check("U(0) ≡ 1 mod σ₃ℓ".into(), &s3 * &ell, one.clone());
            }
            if t.is_one() {
                check("U(1) ≡ 1 mod σ₃(σ₃+ℓ)".into(), &s3 * (&s3 + &ell), one.clone());
            }
            let gcd = s3.gcd(&ell);
            check("U ≡ 1 mod σ₃·gcd(σ₃,ℓ)".into(), &s3 * &gcd, one.clone());
            if s3.is_even() {
                check("U ≡ 1 mod 4".into(), BigInt::from(4), one.clone());
            } else {
                let delta = (t - &ell).is_even();
                let d = BigInt::from(delta as u8);
                check("U ≡ δ(t) mod 2".into(), BigInt::from(2), d);
                let modulus = if delta { 2 * &s3 * &gcd } else { &s3 * &gcd };
                check("U ≡ 1 mod 2^δ(t)·σ₃·gcd(σ₃,ℓ)".into(), modulus, one.clone());
            }
        }
        if !t.is_negative() {
            for nu in 1..=3 {
                let g = self.factor_at(nu, t);
                if g > one {
                    check(format!("U ≡ 1 mod g{nu} - 1"), g - 1, one.clone());
                }
            }
        }
        CongruenceReport {
            t: t.clone(),
            value: u,
            checks,
        }
    }

    /// Classifies `U_r(t)` as primary, Carmichael but not primary, or not a
    /// product of three odd primes; digit sums decide primality of the
    /// Carmichael value.
    pub fn primary_check(&self, t: &Natural) -> PrimaryCheck {
        let value = self.evaluate(t);
        let verdict = if !value.all_prime {
            PrimaryVerdict::NotAllPrime
        } else if value
            .factors
            .iter()
            .all(|g| digit_sum(&value.m, g).expect("prime base") == *g)
        {
            PrimaryVerdict::Primary
        } else {
            PrimaryVerdict::CarmichaelNotPrimary
        };
        let tau = Natural::from(self.params.tau);
        let consistent = match verdict {
            PrimaryVerdict::NotAllPrime => true,
            PrimaryVerdict::Primary => *t >= tau || t.is_zero(),
            PrimaryVerdict::CarmichaelNotPrimary => *t < tau,
        };
        PrimaryCheck {
            verdict,
            value,
            consistent,
        }
    }
}

/// Writes a three-factor Carmichael number as `U_r(t)`:
/// `u = gcd(p_ν - 1)`, `r_ν = (p_ν - 1)/u`, `t = (u - ℓ)/σ₃`.
pub fn invert_carmichael3(f: &PrimeFactorization) -> Result<Inversion> {
    let primes: Vec<&Natural> = f.primes().collect();
    if primes.len() != 3 || !f.is_squarefree() || !crate::carmichael::is_carmichael_factored(f) {
        return Err(Error::InvalidInput(format!(
            "{} is not a three-factor Carmichael number",
            f.value()
        )));
    }
    let pm1: Vec<Natural> = primes.iter().map(|p| *p - 1u32).collect();
    let u = pm1[0].gcd(&pm1[1]).gcd(&pm1[2]);
    let r = Triple::new(&pm1[0] / &u, &pm1[1] / &u, &pm1[2] / &u)
        .map_err(|e| Error::Internal(format!("inverted triple is invalid: {e}")))?;
    let params = form_params(&r);
    if u < params.ell || !((&u - &params.ell) % &params.sigma3).is_zero() {
        return Err(Error::Internal(format!(
            "u = {u} is not ℓ = {} modulo σ₃ = {}",
            params.ell, params.sigma3
        )));
    }
    let t = (&u - &params.ell) / &params.sigma3;
    let check = UniversalForm::new(r.clone()).evaluate(&t);
    if check.m != *f.value() {
        return Err(Error::Internal(format!(
            "U_r(t) = {} does not reproduce {}",
            check.m,
            f.value()
        )));
    }
    Ok(Inversion { r, u, t, params })
}

impl Inversion {
    pub fn t_u64(&self) -> Option<u64> {
        self.t.to_u64()
    }
}
