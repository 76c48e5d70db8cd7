//! One function per subcommand, each producing a [`Report`].

use carmichael_forms::arith::{factorize, Natural, PrimeFactorization};
use carmichael_forms::carmichael::{
    distribution_table, enumerate_carmichael, is_carmichael_factored, is_exceptional_factored,
    is_primary_factored, render_ratio, DistributionRow, EnumerationOptions, Filter,
    DEFAULT_ENUMERATION_LIMIT,
};
use carmichael_forms::digit_sets::{
    bernoulli_denominator, classify, s_decompositions_factored, DigitSet, Mode, SetSieve,
    DEFAULT_SET_LIMIT,
};
use carmichael_forms::forms::{invert_carmichael3, UniversalForm};
use carmichael_forms::polygonal::{
    form_polygonal_params, polygonal_index, polygonal_number, IndexCase,
};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::output::{Cell, Report};
use crate::parse;
use crate::{
    Cli, CliError, Command, DecomposeArgs, EnumerateArgs, FilterArg, FormAction, FormArgs,
    ModeArg, Outcome, PolygonalAction, TablesArgs, ValueArgs, EXIT_OK,
};

type Inputs = Vec<(String, String)>;

fn ok(report: Report) -> Result<Outcome, CliError> {
    Ok(Outcome {
        report,
        exit_code: EXIT_OK,
    })
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidInput(msg.into())
}

/// Ceilings for enumeration and the set sieve, both replaced by
/// `--limit-max` when given.
#[derive(Debug, Clone, Copy)]
pub struct Ceilings {
    pub enumeration: u64,
    pub sets: u64,
}

impl Ceilings {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        Ok(match &cli.limit_max {
            Some(s) => {
                let v = parse::u64_value(s)?;
                Self {
                    enumeration: v,
                    sets: v,
                }
            }
            None => Self {
                enumeration: DEFAULT_ENUMERATION_LIMIT,
                sets: DEFAULT_SET_LIMIT,
            },
        })
    }

    fn enumeration_options(self) -> EnumerationOptions {
        EnumerationOptions {
            max_limit: self.enumeration,
            ..Default::default()
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let ceilings = Ceilings::from_cli(cli)?;
    match &cli.command {
        Command::Classify(a) => ok(classify_cmd(a)?),
        Command::Decompose(a) => ok(decompose(a)?),
        Command::Enumerate(a) => ok(enumerate(a, ceilings)?),
        Command::Tables(a) => ok(tables(a, ceilings)?),
        Command::Form(a) => ok(form(a)?),
        Command::Invert(a) => ok(invert(a)?),
        Command::Polygonal { action } => ok(polygonal(action)?),
        Command::BernoulliDenom { n } => ok(bernoulli(n)?),
        Command::Selftest(a) => crate::fixtures::selftest(a, ceilings),
    }
}

fn value_inputs(a: &ValueArgs) -> Inputs {
    let mut v = Vec::new();
    if let Some(m) = &a.m {
        v.push(("m".into(), m.clone()));
    }
    if let Some(f) = &a.factors {
        v.push(("factors".into(), f.clone()));
    }
    v
}

/// The factorization named by a value, a factor list, or both.
pub fn resolve_value(a: &ValueArgs) -> Result<PrimeFactorization, CliError> {
    let f = match (&a.m, &a.factors) {
        (None, None) => return Err(invalid("give a value or --factors")),
        (Some(m), None) => {
            let m = parse::natural(m)?;
            if m < Natural::from(2u8) {
                return Err(invalid(format!("expected m >= 2, got {m}")));
            }
            factorize(&m).map_err(|e| {
                invalid(format!("{e}; supply the factorization with --factors"))
            })?
        }
        (m, Some(list)) => {
            let entries = parse::factor_list(list)?;
            match m {
                Some(m) => PrimeFactorization::verify(&parse::natural(m)?, entries)?,
                None => PrimeFactorization::from_entries(entries)?,
            }
        }
    };
    if *f.value() < Natural::from(2u8) {
        return Err(invalid("expected m >= 2"));
    }
    Ok(f)
}

fn classify_cmd(a: &ValueArgs) -> Result<Report, CliError> {
    let f = resolve_value(a)?;
    let rec = classify(&f);
    let mut fields = vec![
        ("m", Cell::num(f.value())),
        ("factorization", Cell::text(&f)),
    ];
    for set in DigitSet::ALL {
        fields.push((set.name(), Cell::Bool(rec.contains(set))));
    }
    fields.extend([
        ("CN", Cell::Bool(is_carmichael_factored(&f))),
        ("CP", Cell::Bool(is_primary_factored(&f))),
        ("CS", Cell::Bool(is_exceptional_factored(&f))),
        ("slg_witness", Cell::opt(rec.slg_witness.as_ref())),
        ("sl_witness", Cell::opt(rec.sl_witness.as_ref())),
        (
            "decomposition",
            rec.decomposition.as_ref().map_or(Cell::Empty, Cell::text),
        ),
        (
            "decomposition_mode",
            rec.decomposition
                .as_ref()
                .map_or(Cell::Empty, |d| Cell::text(d.mode())),
        ),
    ]);
    Ok(Report::record("classify", value_inputs(a), fields))
}

fn decompose(a: &DecomposeArgs) -> Result<Report, CliError> {
    let f = resolve_value(&a.value)?;
    let mode = match a.mode {
        ModeArg::AtLeast => Mode::AtLeast,
        ModeArg::Strict => Mode::Strict,
    };
    let max = if a.all { None } else { Some(1) };
    let rows = s_decompositions_factored(&f, mode, max)
        .into_iter()
        .map(|d| vec![Cell::text(d)])
        .collect();
    let mut inputs = value_inputs(&a.value);
    inputs.push(("mode".into(), mode.to_string()));
    inputs.push(("all".into(), a.all.to_string()));
    Ok(Report::table("decompose", inputs, &["decomposition"], rows))
}

fn enumerate(a: &EnumerateArgs, ceilings: Ceilings) -> Result<Report, CliError> {
    let limit = parse::u64_value(&a.limit)?;
    let filter = match a.filter {
        FilterArg::All => Filter::All,
        FilterArg::Primary => Filter::Primary,
        FilterArg::Exceptional => Filter::Exceptional,
    };
    let rows = enumerate_carmichael(limit, filter, ceilings.enumeration_options())?
        .into_iter()
        .filter(|r| a.factors.is_none_or(|k| r.n_factors == k))
        .map(|r| {
            vec![
                Cell::num(&r.m),
                Cell::text(&r.factorization),
                Cell::num(r.n_factors),
                Cell::Bool(r.is_primary),
                Cell::Bool(r.is_exceptional),
            ]
        })
        .collect();
    let mut inputs = vec![
        ("limit".into(), limit.to_string()),
        ("filter".into(), format!("{:?}", a.filter).to_lowercase()),
    ];
    if let Some(k) = a.factors {
        inputs.push(("factors".into(), k.to_string()));
    }
    Ok(Report::table(
        "enumerate",
        inputs,
        &["m", "factorization", "factors", "primary", "exceptional"],
        rows,
    ))
}

/// `10^k` for powers of ten, otherwise the plain value.
pub fn render_limit(x: u64) -> String {
    let mut p = 1u64;
    let mut k = 0;
    while p < x {
        p = p.saturating_mul(10);
        k += 1;
    }
    if p == x {
        format!("10^{k}")
    } else {
        x.to_string()
    }
}

pub fn default_limits(which: u8) -> &'static str {
    match which {
        1 | 4 => "1e3..1e8",
        2 => "1e1..1e5",
        _ => "1e9",
    }
}

pub const TABLE1_COLUMNS: [&str; 9] = [
    "x", "C", "C3", "C'", "C'3", "C'4", "C'5", "C'3/C'", "C'3/C3",
];
pub const TABLE2_COLUMNS: [&str; 9] = [
    "x", "C'", "C", "S'_*", "S_*", "S'", "S", "Sbar'", "Sbar",
];
/// Factor counts shown in the by-count tables.
const BY_COUNT: std::ops::RangeInclusive<usize> = 3..=11;

/// Ratio cell; `---` before the first counted element, like the blank
/// count cells.
fn ratio_cell(num: u64, den: u64) -> Cell {
    if num == 0 {
        Cell::text("---")
    } else {
        Cell::text(render_ratio(num, den))
    }
}

fn table1_row(r: &DistributionRow) -> Vec<Cell> {
    vec![
        Cell::text(render_limit(r.x)),
        Cell::Count(r.total()),
        Cell::Count(r.c(3)),
        Cell::Count(r.total_primary()),
        Cell::Count(r.c_primary(3)),
        Cell::Count(r.c_primary(4)),
        Cell::Count(r.c_primary(5)),
        ratio_cell(r.c_primary(3), r.total_primary()),
        ratio_cell(r.c_primary(3), r.c(3)),
    ]
}

fn tables(a: &TablesArgs, ceilings: Ceilings) -> Result<Report, CliError> {
    let limits_arg = a
        .limits
        .clone()
        .unwrap_or_else(|| default_limits(a.which).to_string());
    let limits = parse::limits(&limits_arg)?;
    if limits.is_empty() {
        return Err(invalid("no limits given"));
    }
    let inputs = vec![
        ("which".into(), a.which.to_string()),
        ("limits".into(), limits_arg),
    ];
    let max = *limits.iter().max().expect("nonempty");
    if a.which == 2 && max > ceilings.sets {
        return Err(CliError::ResourceLimit(format!(
            "set sieve limit {max} exceeds the configured maximum {}",
            ceilings.sets
        )));
    }
    let dist = distribution_table(&limits, ceilings.enumeration_options())?;
    let report = match a.which {
        1 => Report::table(
            "tables",
            inputs,
            &TABLE1_COLUMNS,
            dist.iter().map(table1_row).collect(),
        ),
        2 => {
            let sieve = SetSieve::with_max(max, ceilings.sets)?;
            let rows = dist
                .iter()
                .map(|r| {
                    let s = sieve.counts_below(r.x);
                    vec![
                        Cell::text(render_limit(r.x)),
                        Cell::Count(r.total_primary()),
                        Cell::Count(r.total()),
                        Cell::Count(s.sd_star),
                        Cell::Count(s.sdg_star),
                        Cell::Count(s.sd),
                        Cell::Count(s.sdg),
                        Cell::Count(s.sl),
                        Cell::Count(s.slg),
                    ]
                })
                .collect();
            Report::table("tables", inputs, &TABLE2_COLUMNS, rows)
        }
        3 => {
            let names: Vec<String> = ["x".to_string(), "C#".to_string()]
                .into_iter()
                .chain((4..=11).map(|n| format!("C#_{n}")))
                .collect();
            let cols: Vec<&str> = names.iter().map(String::as_str).collect();
            let rows = dist
                .iter()
                .map(|r| {
                    let mut row = vec![
                        Cell::text(render_limit(r.x)),
                        Cell::Count(r.total_exceptional()),
                    ];
                    row.extend((4..=11).map(|n| Cell::Count(r.c_exceptional(n))));
                    row
                })
                .collect();
            Report::table("tables", inputs, &cols, rows)
        }
        _ => {
            let names: Vec<String> = ["x".to_string(), "C".to_string()]
                .into_iter()
                .chain(BY_COUNT.map(|n| format!("C{n}")))
                .collect();
            let cols: Vec<&str> = names.iter().map(String::as_str).collect();
            let rows = dist
                .iter()
                .map(|r| {
                    let mut row = vec![Cell::text(render_limit(r.x)), Cell::Count(r.total())];
                    row.extend(BY_COUNT.map(|n| Cell::Count(r.c(n))));
                    row
                })
                .collect();
            Report::table("tables", inputs, &cols, rows)
        }
    };
    Ok(report)
}

fn nonnegative(t: &BigInt) -> Result<Natural, CliError> {
    t.to_biguint()
        .ok_or_else(|| invalid(format!("t must be nonnegative for this action, got {t}")))
}

fn factor_indices(j: Option<usize>) -> Result<Vec<usize>, CliError> {
    match j {
        None => Ok(vec![1, 2, 3]),
        Some(j @ 1..=3) => Ok(vec![j]),
        Some(j) => Err(invalid(format!("--j must be 1, 2 or 3, got {j}"))),
    }
}

pub fn case_name(c: IndexCase) -> &'static str {
    match c {
        IndexCase::Equal => "m = g",
        IndexCase::BaseTwo => "g = 2",
        IndexCase::KorseltType => "korselt-type",
        IndexCase::Other => "other",
    }
}

fn form(a: &FormArgs) -> Result<Report, CliError> {
    let triple = parse::triple(&a.r)?;
    let t = parse::integer(&a.t)?;
    let f = UniversalForm::new(triple);
    let action = format!("{:?}", a.action).to_lowercase();
    let inputs = vec![
        ("r".into(), f.triple().to_string()),
        ("t".into(), t.to_string()),
        ("action".into(), action),
    ];
    let p = f.params();
    let report = match a.action {
        FormAction::Params => Report::record(
            "form",
            inputs,
            vec![
                ("r", Cell::text(f.triple())),
                ("sigma1", Cell::num(&p.sigma1)),
                ("sigma2", Cell::num(&p.sigma2)),
                ("sigma3", Cell::num(&p.sigma3)),
                ("ell", Cell::num(&p.ell)),
                ("tau", Cell::num(p.tau)),
                ("vartheta", Cell::num(f.vartheta())),
            ],
        ),
        FormAction::Eval => {
            let t = nonnegative(&t)?;
            let rep = f.verify_strictness(&t);
            let check = f.primary_check(&t);
            let v = &rep.value;
            let value_f = v
                .prime_factorization()
                .or_else(|| factorize(&v.m).ok())
                .filter(|g| *g.value() > Natural::from(1u8));
            let value_decomposition = value_f.as_ref().and_then(|g| {
                s_decompositions_factored(g, Mode::Strict, Some(1))
                    .into_iter()
                    .next()
            });
            Report::record(
                "form",
                inputs,
                vec![
                    ("m", Cell::num(&v.m)),
                    ("g1", Cell::num(&v.factors[0])),
                    ("g2", Cell::num(&v.factors[1])),
                    ("g3", Cell::num(&v.factors[2])),
                    ("all_prime", Cell::Bool(v.all_prime)),
                    ("verdict", Cell::text(check.verdict)),
                    ("decomposition_in_sdg", Cell::Bool(rep.decomposition_in_sdg)),
                    ("decomposition_strict", Cell::Bool(rep.decomposition_strict)),
                    ("value_factorization", value_f.as_ref().map_or(Cell::Empty, Cell::text)),
                    ("value_in_sdg", rep.value_in_sdg.map_or(Cell::Empty, Cell::Bool)),
                    ("value_in_sd", rep.value_in_sd.map_or(Cell::Empty, Cell::Bool)),
                    (
                        "value_sd_decomposition",
                        value_decomposition.map_or(Cell::Empty, Cell::text),
                    ),
                ],
            )
        }
        FormAction::Verify => {
            let t = nonnegative(&t)?;
            let rep = f.verify_strictness(&t);
            let check = f.primary_check(&t);
            let v = &rep.value;
            Report::record(
                "form",
                inputs,
                vec![
                    ("m", Cell::num(&v.m)),
                    ("case", Cell::text(rep.case)),
                    ("tau", Cell::num(p.tau)),
                    ("vartheta", Cell::num(&rep.vartheta)),
                    ("g1", Cell::num(&v.factors[0])),
                    ("s_g1", Cell::num(&rep.digit_sums[0])),
                    ("g2", Cell::num(&v.factors[1])),
                    ("s_g2", Cell::num(&rep.digit_sums[1])),
                    ("g3", Cell::num(&v.factors[2])),
                    ("s_g3", Cell::num(&rep.digit_sums[2])),
                    ("decomposition_strict", Cell::Bool(rep.decomposition_strict)),
                    ("decomposition_in_sdg", Cell::Bool(rep.decomposition_in_sdg)),
                    ("verdict", Cell::text(check.verdict)),
                    ("consistent", Cell::Bool(rep.consistent && check.consistent)),
                ],
            )
        }
        FormAction::Congruences => {
            let rep = f.congruence_checks(&t);
            let rows = rep
                .checks
                .iter()
                .map(|c| {
                    vec![
                        Cell::text(&c.label),
                        Cell::num(&c.modulus),
                        Cell::num(&c.residue),
                        Cell::Bool(c.holds),
                    ]
                })
                .collect();
            Report::table("form", inputs, &["congruence", "modulus", "residue", "holds"], rows)
        }
        FormAction::Diagnostics => {
            let mut rows = Vec::new();
            for j in factor_indices(a.j)? {
                let d = f.diagnostics(j, &t)?;
                rows.push(vec![
                    Cell::num(j),
                    Cell::num(&d.g),
                    Cell::text(&d.alpha),
                    Cell::text(&d.beta),
                    Cell::num(&d.theta),
                    Cell::num(&d.eta),
                    Cell::num(&d.vartheta),
                    Cell::Bool(d.theta_bounds_hold()),
                ]);
            }
            Report::table(
                "form",
                inputs,
                &["j", "g", "alpha", "beta", "theta", "eta", "vartheta", "theta_bounds"],
                rows,
            )
        }
        FormAction::Polygonal => {
            let t = nonnegative(&t)?;
            let mut rows = Vec::new();
            for nu in factor_indices(a.j)? {
                let w = form_polygonal_params(&f, &t, nu)?;
                let (c, d) = w.form_coefficients.clone().expect("set by the form");
                rows.push(vec![
                    Cell::num(nu),
                    Cell::num(&w.m),
                    Cell::num(&w.g),
                    Cell::num(&w.h),
                    Cell::num(c),
                    Cell::num(d),
                    Cell::text(case_name(w.case)),
                ]);
            }
            Report::table("form", inputs, &["nu", "m", "g", "h", "c", "d", "case"], rows)
        }
    };
    Ok(report)
}

fn invert(a: &ValueArgs) -> Result<Report, CliError> {
    let f = resolve_value(a)?;
    let inv = invert_carmichael3(&f)?;
    let check = UniversalForm::new(inv.r.clone()).primary_check(&inv.t);
    Ok(Report::record(
        "invert",
        value_inputs(a),
        vec![
            ("m", Cell::num(f.value())),
            ("factorization", Cell::text(&f)),
            ("r", Cell::text(&inv.r)),
            ("u", Cell::num(&inv.u)),
            ("tau", Cell::num(inv.params.tau)),
            ("t", Cell::num(&inv.t)),
            ("sigma3", Cell::num(&inv.params.sigma3)),
            ("ell", Cell::num(&inv.params.ell)),
            ("verdict", Cell::text(check.verdict)),
        ],
    ))
}

fn polygonal(action: &PolygonalAction) -> Result<Report, CliError> {
    match action {
        PolygonalAction::Index { m, g } => {
            let (mv, gv) = (parse::natural(m)?, parse::natural(g)?);
            let w = polygonal_index(&mv, &gv)?;
            Ok(Report::record(
                "polygonal",
                vec![
                    ("action".into(), "index".into()),
                    ("m".into(), mv.to_string()),
                    ("g".into(), gv.to_string()),
                ],
                vec![
                    ("m", Cell::num(&mv)),
                    ("g", Cell::num(&gv)),
                    ("integral", Cell::Bool(w.is_some())),
                    ("h", w.as_ref().map_or(Cell::Empty, |w| Cell::num(&w.h))),
                    ("case", w.as_ref().map_or(Cell::Empty, |w| Cell::text(case_name(w.case)))),
                ],
            ))
        }
        PolygonalAction::Number { h, n } => {
            let (hv, nv) = (parse::integer(h)?, parse::integer(n)?);
            if nv.is_negative() {
                return Err(invalid(format!("n must be nonnegative, got {nv}")));
            }
            let value = polygonal_number(&hv, &nv);
            Ok(Report::record(
                "polygonal",
                vec![
                    ("action".into(), "number".into()),
                    ("h".into(), hv.to_string()),
                    ("n".into(), nv.to_string()),
                ],
                vec![("h", Cell::num(&hv)), ("n", Cell::num(&nv)), ("value", Cell::num(value))],
            ))
        }
    }
}

fn bernoulli(n: &str) -> Result<Report, CliError> {
    let nv = parse::natural(n)?;
    let n64 = nv
        .to_u64()
        .ok_or_else(|| CliError::ResourceLimit(format!("{nv} is beyond the supported range")))?;
    let d = bernoulli_denominator(n64)?;
    let f = factorize(&d).ok();
    Ok(Report::record(
        "bernoulli-denom",
        vec![("n".into(), n64.to_string())],
        vec![
            ("n", Cell::num(n64)),
            ("denominator", Cell::num(&d)),
            ("factorization", f.map_or(Cell::Empty, Cell::text)),
        ],
    ))
}
