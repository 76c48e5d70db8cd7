//! Polygonal numbers `G^h_n = (n²(h-2) - n(h-4))/2` and the index identity
//! `m = G^h_g` with `h = 2((m/g - 1)/(g - 1) + 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::Natural;
use crate::error::{Error, Result};
use crate::forms::UniversalForm;

/// `G^h_n`, exact; may be `<= 0` for `h = 1`.
pub fn polygonal_number(h: &BigInt, n: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let four = BigInt::from(4);
    (n * n * (h - &two) - n * (h - &four)) / two
}

/// Why the index `h` of `m = G^h_g` is integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexCase {
    /// `m = g`, `h = 2`.
    Equal,
    /// `g = 2`, `h = m`.
    BaseTwo,
    /// `m > g > 2`, `g | m`, `g - 1 | m - 1`; `h >= 4` even.
    KorseltType,
    /// Integral for some other reason, e.g. `G^3_4 = 10`.
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonalWitness {
    pub m: Natural,
    pub g: Natural,
    pub h: BigInt,
    pub case: IndexCase,
    /// `(c, d)` with `h = 2(c + d t)` when derived from a universal form.
    pub form_coefficients: Option<(BigInt, BigInt)>,
}

/// `h` with `G^h_g = m`, when integral.
pub fn polygonal_index(m: &Natural, g: &Natural) -> Result<Option<PolygonalWitness>> {
    if *g < Natural::from(2u8) {
        return Err(Error::InvalidBase(g.to_string()));
    }
    if m.is_zero() {
        return Err(Error::InvalidInput("polygonal index needs m >= 1".into()));
    }
    let mi = BigInt::from(m.clone());
    let gi = BigInt::from(g.clone());
    // h = 2 + 2(m - g) / (g (g - 1))
    let num: BigInt = (&mi - &gi) * 2;
    let den: BigInt = &gi * (&gi - 1);
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Ok(None);
    }
    let h = q + 2;
    debug_assert_eq!(polygonal_number(&h, &gi), mi);
    let case = if m == g {
        IndexCase::Equal
    } else if *g == Natural::from(2u8) {
        IndexCase::BaseTwo
    } else if m > g && (m % g).is_zero() && ((m - 1u32) % (g - 1u32)).is_zero() {
        IndexCase::KorseltType
    } else {
        IndexCase::Other
    };
    Ok(Some(PolygonalWitness {
        m: m.clone(),
        g: g.clone(),
        h,
        case,
        form_coefficients: None,
    }))
}

/// `U_r(t) = G^h_{g_ν}` with `h = 2(c + d t)`, `c = σ₁/r_ν + ℓσ₃/r_ν²`,
/// `d = (σ₃/r_ν)²`; checked exactly.
pub fn form_polygonal_params(
    form: &UniversalForm,
    t: &Natural,
    nu: usize,
) -> Result<PolygonalWitness> {
    if !(1..=3).contains(&nu) {
        return Err(Error::InvalidInput(format!("index must be 1, 2 or 3, got {nu}")));
    }
    let p = form.params();
    let r = BigInt::from(form.triple().r(nu).clone());
    let s1 = BigInt::from(p.sigma1.clone());
    let s3 = BigInt::from(p.sigma3.clone());
    let ell = BigInt::from(p.ell.clone());
    let c = (&s1 * &r + &ell * &s3) / (&r * &r);
    let d = (&s3 / &r) * (&s3 / &r);
    let ti = BigInt::from(t.clone());
    let h = 2 * (&c + &d * &ti);
    let value = form.evaluate(t);
    let g = value.factors[nu - 1].clone();
    let gi = BigInt::from(g.clone());
    if polygonal_number(&h, &gi) != BigInt::from(value.m.clone()) {
        return Err(Error::Internal(format!(
            "G^{h}_{g} differs from U_r(t) = {}",
            value.m
        )));
    }
    let case = if value.m == g {
        IndexCase::Equal
    } else if gi == BigInt::from(2) {
        IndexCase::BaseTwo
    } else if gi.is_one() {
        IndexCase::Other
    } else {
        IndexCase::KorseltType
    };
    Ok(PolygonalWitness {
        m: value.m,
        g,
        h,
        case,
        form_coefficients: Some((c, d)),
    })
}
