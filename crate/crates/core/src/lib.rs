//! Exact integer machinery around Carmichael numbers and their base-`p`
//! digit sums.
//!
//! * [`arith`]: digit expansions, digit sums, primality, factorization,
//!   divisors and modular inverses.
//! * [`digit_sets`]: s-decompositions and the digit-sum defined sets
//!   SDG, SD, SLG, SL, SDG*, SD*, H, plus the Bernoulli denominators `D_n`.
//! * [`carmichael`]: Korselt and digit-sum predicates, primary and
//!   exceptional Carmichael numbers, a segmented enumerator and distribution
//!   tables.
//! * [`forms`]: Chernick's three-factor universal forms `U_r(t)`, their
//!   strict s-decompositions, congruences and inversion of 3-factor
//!   Carmichael numbers.
//! * [`polygonal`]: polygonal numbers and the inverse index identity.
//!
//! ```
//! use carmichael_forms::{carmichael, Natural};
//!
//! assert!(carmichael::is_primary_carmichael(&Natural::from(1729u32)).unwrap());
//! assert!(!carmichael::is_primary_carmichael(&Natural::from(561u32)).unwrap());
//! ```

pub mod arith;
pub mod carmichael;
pub mod digit_sets;
pub mod error;
pub mod forms;
pub mod polygonal;

pub use arith::{Natural, PrimeFactorization};
pub use error::{Error, Result};
