//! Fixture files and the bundled verification suite.
//!
//! A fixture line reads `value;p1^e1,p2,...;key=value,...`. The factor list
//! may be empty for values below 2^64. Blank lines and text after `#` are
//! ignored. Keys:
//!
//! - `SDG`, `SD`, `SLG`, `SL`, `SDG*`, `SD*`, `H`, `CN`, `CP`, `CS`:
//!   `true` or `false`
//! - `r=a/b/c`, `tau=n`, `t=n`: the value written as `U_r(t)`
//! - `sprofile=e1/e2/...`: `s_p(m)` for each prime `p | m` in ascending
//!   order, each entry `p`, `2p-1` or a literal integer

use carmichael_forms::arith::{digit_sum, factorize, Natural, PrimeFactorization};
use carmichael_forms::carmichael::{
    is_carmichael_factored, is_exceptional_factored, is_primary_factored, prime_bound_attained,
    prime_bound_check, PrimeBound,
};
use carmichael_forms::digit_sets::{
    in_h, in_sd_factored, in_sd_star, in_sdg_factored, in_sdg_star, single_witness_factored,
    DigitSet, Mode, SetFlags, SetSieve,
};
use carmichael_forms::forms::{invert_carmichael3, Triple, UniversalForm};
use carmichael_forms::polygonal::{polygonal_index, IndexCase};
use num_bigint::BigInt;

use crate::commands::Ceilings;
use crate::output::{Cell, Report};
use crate::{parse, CliError, Outcome, SelftestArgs, EXIT_FIXTURE_FAILURE, EXIT_OK};

/// The fixture file shipped with the binary.
pub const BUNDLED: &str = include_str!("../data/bundled_fixtures.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Set(DigitSet),
    Carmichael,
    Primary,
    Exceptional,
}

impl Flag {
    fn parse(key: &str) -> Option<Self> {
        if let Some(set) = DigitSet::ALL.into_iter().find(|s| s.name() == key) {
            return Some(Flag::Set(set));
        }
        match key {
            "CN" => Some(Flag::Carmichael),
            "CP" => Some(Flag::Primary),
            "CS" => Some(Flag::Exceptional),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Flag::Set(s) => s.name(),
            Flag::Carmichael => "CN",
            Flag::Primary => "CP",
            Flag::Exceptional => "CS",
        }
    }

    fn evaluate(self, f: &PrimeFactorization) -> bool {
        match self {
            Flag::Set(DigitSet::Sdg) => in_sdg_factored(f),
            Flag::Set(DigitSet::Sd) => in_sd_factored(f),
            Flag::Set(DigitSet::Slg) => single_witness_factored(f, Mode::AtLeast).is_some(),
            Flag::Set(DigitSet::Sl) => single_witness_factored(f, Mode::Strict).is_some(),
            Flag::Set(DigitSet::SdgStar) => in_sdg_star(f),
            Flag::Set(DigitSet::SdStar) => in_sd_star(f),
            Flag::Set(DigitSet::H) => in_h(f),
            Flag::Carmichael => is_carmichael_factored(f),
            Flag::Primary => is_primary_factored(f),
            Flag::Exceptional => is_exceptional_factored(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileEntry {
    /// `s_p(m) = p`
    P,
    /// `s_p(m) = 2p - 1`
    TwoPMinusOne,
    Value(Natural),
}

impl ProfileEntry {
    fn expected(&self, p: &Natural) -> Natural {
        match self {
            ProfileEntry::P => p.clone(),
            ProfileEntry::TwoPMinusOne => p * 2u32 - 1u32,
            ProfileEntry::Value(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Flag(Flag, bool),
    Triple(Triple),
    Tau(u8),
    T(Natural),
    SProfile(Vec<ProfileEntry>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub line: usize,
    pub value: Natural,
    pub factors: Option<Vec<(Natural, u32)>>,
    pub expectations: Vec<Expectation>,
}

fn bad_line(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::InvalidInput(format!("fixture line {line}: {msg}"))
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad_line(line, format!("{key} expects true or false, got {v:?}"))),
    }
}

fn parse_expectation(line: usize, item: &str) -> Result<Expectation, CliError> {
    let (key, v) = item
        .split_once('=')
        .ok_or_else(|| bad_line(line, format!("expected key=value, got {item:?}")))?;
    let (key, v) = (key.trim(), v.trim());
    let wrap = |e: CliError| bad_line(line, e);
    if let Some(flag) = Flag::parse(key) {
        return Ok(Expectation::Flag(flag, parse_bool(line, key, v)?));
    }
    match key {
        "r" => Ok(Expectation::Triple(parse::triple(v).map_err(wrap)?)),
        "tau" => {
            let tau = v
                .parse()
                .map_err(|_| bad_line(line, format!("bad tau {v:?}")))?;
            Ok(Expectation::Tau(tau))
        }
        "t" => Ok(Expectation::T(parse::natural(v).map_err(wrap)?)),
        "sprofile" => v
            .split('/')
            .map(|e| match e.trim() {
                "p" => Ok(ProfileEntry::P),
                "2p-1" => Ok(ProfileEntry::TwoPMinusOne),
                lit => parse::natural(lit).map(ProfileEntry::Value).map_err(wrap),
            })
            .collect::<Result<_, _>>()
            .map(Expectation::SProfile),
        _ => Err(bad_line(line, format!("unknown key {key:?}"))),
    }
}

/// Parses fixture text; line numbers start at 1.
pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(';').collect();
        if fields.len() != 3 {
            return Err(bad_line(line, "expected value;factors;flags"));
        }
        let value = parse::natural(fields[0]).map_err(|e| bad_line(line, e))?;
        let factors = if fields[1].trim().is_empty() {
            None
        } else {
            Some(parse::factor_list(fields[1]).map_err(|e| bad_line(line, e))?)
        };
        let expectations = fields[2]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|item| parse_expectation(line, item))
            .collect::<Result<_, _>>()?;
        out.push(Fixture {
            line,
            value,
            factors,
            expectations,
        });
    }
    Ok(out)
}

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, failures: Vec<String>, summary: impl Into<String>) -> Self {
        let passed = failures.is_empty();
        Self {
            name: name.into(),
            passed,
            detail: if passed { summary.into() } else { failures.join("; ") },
        }
    }
}

/// Checks one fixture. Factorization and parse problems count as failures.
pub fn check_fixture(fx: &Fixture) -> CheckResult {
    let name = format!("fixture line {}: {}", fx.line, fx.value);
    let f = match &fx.factors {
        Some(entries) => PrimeFactorization::verify(&fx.value, entries.clone()),
        None => factorize(&fx.value),
    };
    let f = match f {
        Ok(f) => f,
        Err(e) => return CheckResult::new(name, vec![e.to_string()], ""),
    };
    let mut failures = Vec::new();
    let mut checked = Vec::new();
    let needs_inversion = fx.expectations.iter().any(|e| {
        matches!(e, Expectation::Triple(_) | Expectation::Tau(_) | Expectation::T(_))
    });
    let inversion = needs_inversion.then(|| invert_carmichael3(&f));
    for e in &fx.expectations {
        match e {
            Expectation::Flag(flag, want) => {
                let got = flag.evaluate(&f);
                checked.push(format!("{}={got}", flag.name()));
                if got != *want {
                    failures.push(format!("{} is {got}, expected {want}", flag.name()));
                }
            }
            Expectation::Triple(_) | Expectation::Tau(_) | Expectation::T(_) => {
                let inv = match inversion.as_ref().expect("computed above") {
                    Ok(inv) => inv,
                    Err(err) => {
                        failures.push(format!("inversion failed: {err}"));
                        continue;
                    }
                };
                let (label, ok, got) = match e {
                    Expectation::Triple(r) => ("r", inv.r == *r, inv.r.to_string()),
                    Expectation::Tau(tau) => ("tau", inv.params.tau == *tau, inv.params.tau.to_string()),
                    Expectation::T(t) => ("t", inv.t == *t, inv.t.to_string()),
                    _ => unreachable!(),
                };
                checked.push(format!("{label}={got}"));
                if !ok {
                    failures.push(format!("{label} is {got}"));
                }
            }
            Expectation::SProfile(entries) => {
                let primes: Vec<&Natural> = f.primes().collect();
                if primes.len() != entries.len() {
                    failures.push(format!(
                        "s-profile lists {} entries for {} primes",
                        entries.len(),
                        primes.len()
                    ));
                    continue;
                }
                for (p, entry) in primes.into_iter().zip(entries) {
                    let s = digit_sum(&fx.value, p).expect("prime base");
                    if s != entry.expected(p) {
                        failures.push(format!("s_{p}(m) = {s}, expected {}", entry.expected(p)));
                    }
                }
                checked.push("sprofile".into());
            }
        }
    }
    CheckResult::new(name, failures, format!("{f}; {}", checked.join(", ")))
}

const PREFIX_LIMIT: u64 = 10_000;

type Membership = Box<dyn Fn(SetFlags) -> bool>;

/// Known set prefixes as `(label, membership test, first members)`.
fn prefix_expectations() -> Vec<(&'static str, Membership, Vec<u64>)> {
    use DigitSet::*;
    let has = |s: DigitSet| -> Membership { Box::new(move |f: SetFlags| f.contains(s)) };
    vec![
        ("SDG", has(Sdg), vec![24, 45, 48, 72, 96, 120, 144, 189, 192, 216, 224, 225, 231, 240, 280, 288, 315, 320, 325, 336, 352, 360, 378, 384, 405, 432]),
        ("SD", has(Sd), vec![45, 96, 225, 325, 405, 576, 637, 640, 891, 1225, 1377, 1408, 1536, 1701, 1729, 2025, 2541, 2821, 3321, 3751, 3825, 4225, 4608]),
        ("SLG", has(Slg), vec![6, 10, 12, 14, 15, 18, 20, 21, 22, 24, 26, 28, 30, 33, 34, 36, 38, 39, 40, 42, 44, 45, 46, 48, 50, 51, 52, 54, 56, 57, 58, 60, 62, 63]),
        ("SL", has(Sl), vec![6, 10, 12, 15, 18, 20, 21, 24, 28, 33, 34, 36, 39, 40, 45, 48, 52, 57, 63, 65, 66, 68, 72, 76, 80, 85, 87, 88, 91, 93, 96, 99, 100]),
        ("H", has(H), vec![231, 561, 1001, 1045, 1105, 1122, 1155, 1729, 2002, 2093, 2145, 2465, 2821, 3003, 3315, 3458, 3553, 3570, 3655]),
        ("SDG \\ SDG*", Box::new(|f: SetFlags| f.contains(Sdg) && !f.contains(SdgStar)), vec![280, 378, 640, 1134, 1280, 1408, 1430, 2464, 2520, 2816]),
        ("SD \\ SD*", Box::new(|f: SetFlags| f.contains(Sd) && !f.contains(SdStar)), vec![96, 225, 576, 640, 1225, 1377, 1408, 1536, 1701, 2025]),
    ]
}

fn prefix_checks(ceilings: Ceilings) -> Result<Vec<CheckResult>, CliError> {
    let sieve = SetSieve::with_max(PREFIX_LIMIT, ceilings.sets.max(PREFIX_LIMIT))?;
    Ok(prefix_expectations()
        .into_iter()
        .map(|(label, keep, want)| {
            let got: Vec<u64> = (0..sieve.limit())
                .filter(|&m| keep(sieve.flags(m)))
                .take(want.len())
                .collect();
            let failures = if got == want {
                vec![]
            } else {
                vec![format!("got {got:?}")]
            };
            CheckResult::new(
                format!("set prefix {label}"),
                failures,
                format!("first {} members", want.len()),
            )
        })
        .collect())
}

/// `(r, [σ₁, σ₂, σ₃, ℓ], τ)`
const FORM_PARAMS: [((u64, u64, u64), [u64; 4], u8); 8] = [
    ((1, 2, 3), [6, 11, 6, 0], 1),
    ((1, 2, 5), [8, 17, 10, 6], 1),
    ((1, 3, 8), [12, 35, 24, 12], 1),
    ((2, 3, 5), [10, 31, 30, 20], 1),
    ((1, 2, 7), [10, 23, 14, 2], 2),
    ((1, 3, 4), [8, 19, 12, 4], 1),
    ((1, 3, 5), [9, 23, 15, 12], 1),
    ((2, 7, 13), [22, 131, 182, 4], 1),
];

/// `(r, t, ϑ, U_r(t), factors in SDG, factors strict)`
const SMALL_VALUES: [((u64, u64, u64), u64, i64, u64, bool, bool); 6] = [
    ((1, 2, 3), 0, 2, 1, false, false),
    ((1, 2, 7), 0, 2, 225, false, false),
    ((2, 7, 13), 0, 6, 13833, true, false),
    ((1, 2, 7), 1, 2, 63393, true, false),
    ((1, 3, 5), 0, 9, 29341, true, true),
    ((2, 3, 5), 0, 26, 252601, true, true),
];

fn form(r: (u64, u64, u64)) -> UniversalForm {
    UniversalForm::new(Triple::from_u64(r.0, r.1, r.2).expect("valid triple"))
}

fn form_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (r, vals, tau) in FORM_PARAMS {
        let f = form(r);
        let p = f.params();
        let got = [&p.sigma1, &p.sigma2, &p.sigma3, &p.ell];
        let mut failures = Vec::new();
        if got != vals.map(Natural::from).each_ref() || p.tau != tau || !p.invariants_hold() {
            failures.push(format!(
                "got ({},{},{},{}) tau {}",
                p.sigma1, p.sigma2, p.sigma3, p.ell, p.tau
            ));
        }
        out.push(CheckResult::new(
            format!("form params r = {}", f.triple()),
            failures,
            format!("({},{},{},{}) tau {tau}", vals[0], vals[1], vals[2], vals[3]),
        ));
    }
    for (r, t, vartheta, m, sdg, strict) in SMALL_VALUES {
        let f = form(r);
        let rep = f.verify_strictness(&Natural::from(t));
        let mut failures = Vec::new();
        if rep.value.m != Natural::from(m) {
            failures.push(format!("value {}", rep.value.m));
        }
        if rep.vartheta != BigInt::from(vartheta) {
            failures.push(format!("vartheta {}", rep.vartheta));
        }
        if (rep.decomposition_in_sdg, rep.decomposition_strict) != (sdg, strict) {
            failures.push(format!(
                "factors in SDG {}, strict {}",
                rep.decomposition_in_sdg, rep.decomposition_strict
            ));
        }
        if !rep.consistent {
            failures.push("digit sums contradict the threshold statement".into());
        }
        out.push(CheckResult::new(
            format!("U_r(t) r = {} t = {t}", f.triple()),
            failures,
            format!("{m}, vartheta {vartheta}"),
        ));
    }
    out
}

fn polygonal_checks() -> Vec<CheckResult> {
    let cases: [(u64, u64, Option<i64>, Option<IndexCase>); 6] = [
        (1729, 7, Some(84), Some(IndexCase::KorseltType)),
        (1729, 13, Some(24), Some(IndexCase::KorseltType)),
        (1729, 19, Some(12), Some(IndexCase::KorseltType)),
        (8_801_128_801, 66337, Some(6), Some(IndexCase::KorseltType)),
        (10, 4, Some(3), Some(IndexCase::Other)),
        (12, 5, None, None),
    ];
    cases
        .into_iter()
        .map(|(m, g, h, case)| {
            let got = polygonal_index(&Natural::from(m), &Natural::from(g));
            let got = got.map(|w| w.map(|w| (w.h, w.case)));
            let want = h.map(|h| (BigInt::from(h), case.expect("paired")));
            let failures = match &got {
                Ok(g) if *g == want => vec![],
                other => vec![format!("got {other:?}")],
            };
            let summary = match h {
                Some(h) => format!("G^{h}_{g} = {m}"),
                None => "not polygonal in this base".into(),
            };
            CheckResult::new(format!("polygonal index m = {m} g = {g}"), failures, summary)
        })
        .collect()
}

fn sharpness_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (m, bound, p) in [
        (561u64, PrimeBound::General, 17u64),
        (8_801_128_801, PrimeBound::Primary, 66337),
    ] {
        let f = carmichael_forms::arith::factorize_u64(m).expect("nonzero");
        let (a, b) = bound.alpha_squared();
        let identity = (p as u128) * (p as u128) * (b as u128) == (a as u128) * (m as u128);
        let mut failures = Vec::new();
        if !identity {
            failures.push(format!("{p}^2 * {b} != {a} * {m}"));
        }
        if !prime_bound_check(&f, bound) || !prime_bound_attained(&f, bound) {
            failures.push("bound not attained".into());
        }
        out.push(CheckResult::new(
            format!("sharpness at {m}"),
            failures,
            format!("{p}^2 * {b} = {a} * {m}"),
        ));
    }
    out
}

/// Checks every fixture in `text`.
pub fn run_fixture_text(text: &str) -> Result<Vec<CheckResult>, CliError> {
    Ok(parse_fixtures(text)?.iter().map(check_fixture).collect())
}

/// The full bundled suite.
pub fn bundled_suite(ceilings: Ceilings) -> Result<Vec<CheckResult>, CliError> {
    let mut out = prefix_checks(ceilings)?;
    out.extend(form_checks());
    out.extend(polygonal_checks());
    out.extend(sharpness_checks());
    out.extend(run_fixture_text(BUNDLED)?);
    Ok(out)
}

pub fn selftest(a: &SelftestArgs, ceilings: Ceilings) -> Result<Outcome, CliError> {
    let mut results = bundled_suite(ceilings)?;
    let mut inputs = vec![("suite".to_string(), "paper-fixtures".to_string())];
    if let Some(path) = &a.fixtures {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::InvalidInput(format!("cannot read {}: {e}", path.display()))
        })?;
        results.extend(run_fixture_text(&text)?);
        inputs.push(("fixtures".into(), path.display().to_string()));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let rows = results
        .into_iter()
        .map(|r| {
            vec![
                Cell::Text(r.name),
                Cell::text(if r.passed { "PASS" } else { "FAIL" }),
                Cell::Text(r.detail),
            ]
        })
        .collect();
    let report = Report::table("selftest", inputs, &["check", "status", "detail"], rows);
    Ok(Outcome {
        report,
        exit_code: if failed == 0 { EXIT_OK } else { EXIT_FIXTURE_FAILURE },
    })
}
