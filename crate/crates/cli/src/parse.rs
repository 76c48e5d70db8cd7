//! Exact parsing of numeric command-line arguments.

use carmichael_forms::forms::Triple;
use carmichael_forms::Natural;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidInput(msg.into())
}

/// Parses `123`, `1_000_000`, `1e8`, `2.5e3` into an exact natural. The
/// scientific form must denote an integer.
pub fn natural(s: &str) -> Result<Natural, CliError> {
    let clean: String = s.trim().chars().filter(|&c| c != '_').collect();
    if clean.is_empty() {
        return Err(invalid("empty number"));
    }
    let (mantissa, exponent) = match clean.find(['e', 'E']) {
        Some(i) => {
            let exp: u32 = clean[i + 1..]
                .trim_start_matches('+')
                .parse()
                .map_err(|_| invalid(format!("bad exponent in {s:?}")))?;
            (&clean[..i], exp)
        }
        None => (clean.as_str(), 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid(format!("{s:?} is not a nonnegative integer")));
    }
    let frac_len = frac_part.len() as u32;
    let frac_nonzero = frac_part.trim_end_matches('0').len() as u32;
    if frac_nonzero > exponent {
        return Err(invalid(format!("{s:?} is not an integer")));
    }
    let value: Natural = digits.parse().map_err(|_| invalid(format!("cannot parse {s:?}")))?;
    Ok(if exponent >= frac_len {
        value * num_traits::pow(Natural::from(10u8), (exponent - frac_len) as usize)
    } else {
        value / num_traits::pow(Natural::from(10u8), (frac_len - exponent) as usize)
    })
}

pub fn u64_value(s: &str) -> Result<u64, CliError> {
    natural(s)?
        .to_u64()
        .ok_or_else(|| invalid(format!("{s} does not fit in 64 bits")))
}

/// Signed variant of [`natural`] for parameters that may be negative.
pub fn integer(s: &str) -> Result<BigInt, CliError> {
    let s = s.trim();
    match s.strip_prefix('-') {
        Some(rest) => Ok(-BigInt::from(natural(rest)?)),
        None => Ok(BigInt::from(natural(s)?)),
    }
}

/// `1e3..1e8` (every power of ten in between) or a comma list.
pub fn limits(s: &str) -> Result<Vec<u64>, CliError> {
    if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (u64_value(lo)?, u64_value(hi)?);
        let power = |v: u64| {
            let mut p = 1u64;
            while p < v {
                p = p.saturating_mul(10);
            }
            p == v
        };
        if !power(lo) || !power(hi) || lo > hi {
            return Err(invalid(format!(
                "range {s:?} must run between powers of ten, low to high"
            )));
        }
        let mut out = vec![lo];
        while *out.last().unwrap() < hi {
            out.push(out.last().unwrap() * 10);
        }
        return Ok(out);
    }
    s.split(',').map(u64_value).collect()
}

/// `a,b,c`
pub fn triple(s: &str) -> Result<Triple, CliError> {
    let parts: Vec<Natural> = s
        .split([',', '/'])
        .map(natural)
        .collect::<Result<_, _>>()?;
    let [a, b, c]: [Natural; 3] = parts
        .try_into()
        .map_err(|_| invalid(format!("{s:?} is not a triple a,b,c")))?;
    Ok(Triple::new(a, b, c)?)
}

/// `p1^e1,p2,...` (exponent defaults to 1).
pub fn factor_list(s: &str) -> Result<Vec<(Natural, u32)>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            let (p, e) = item.split_once('^').unwrap_or((item, "1"));
            let e: u32 = e
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad exponent in {item:?}")))?;
            if e == 0 {
                return Err(invalid(format!("zero exponent in {item:?}")));
            }
            Ok((natural(p)?, e))
        })
        .collect()
}

pub fn nonzero(n: &Natural, what: &str) -> Result<(), CliError> {
    if n.is_zero() {
        Err(invalid(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}
