//! Distribution counts of Carmichael numbers and their subsets.

use super::sieve::{for_each_carmichael, EnumerationOptions, Filter};
use crate::error::{Error, Result};

/// Factor counts `0..=MAX_TRACKED_FACTORS` are tracked per row. Below 10^18
/// no Carmichael number has more than 15 prime factors.
pub const MAX_TRACKED_FACTORS: usize = 32;

/// Counts of Carmichael numbers below `x`, split by factor count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionRow {
    pub x: u64,
    /// `C_n(x)` at index `n`.
    pub all: Vec<u64>,
    /// `C'_n(x)`, primary.
    pub primary: Vec<u64>,
    /// `C♯_n(x)`, exceptional.
    pub exceptional: Vec<u64>,
}

impl DistributionRow {
    fn new(x: u64) -> Self {
        let zeros = vec![0; MAX_TRACKED_FACTORS + 1];
        Self {
            x,
            all: zeros.clone(),
            primary: zeros.clone(),
            exceptional: zeros,
        }
    }

    pub fn total(&self) -> u64 {
        self.all.iter().sum()
    }

    pub fn total_primary(&self) -> u64 {
        self.primary.iter().sum()
    }

    pub fn total_exceptional(&self) -> u64 {
        self.exceptional.iter().sum()
    }

    /// `C_n(x)`; zero outside the tracked range.
    pub fn c(&self, n: usize) -> u64 {
        self.all.get(n).copied().unwrap_or(0)
    }

    pub fn c_primary(&self, n: usize) -> u64 {
        self.primary.get(n).copied().unwrap_or(0)
    }

    pub fn c_exceptional(&self, n: usize) -> u64 {
        self.exceptional.get(n).copied().unwrap_or(0)
    }

    /// Largest factor count with a nonzero entry in any column.
    pub fn max_factors(&self) -> usize {
        (0..=MAX_TRACKED_FACTORS)
            .rev()
            .find(|&n| self.all[n] > 0)
            .unwrap_or(0)
    }
}

/// `num/den` rounded half-up to three decimals, or `---` when `den = 0`.
pub fn render_ratio(num: u64, den: u64) -> String {
    if den == 0 {
        return "---".into();
    }
    let (num, den) = (num as u128, den as u128);
    let thousandths = (2000 * num + den) / (2 * den);
    format!("{}.{:03}", thousandths / 1000, thousandths % 1000)
}

/// One row per limit, from a single enumeration up to the largest limit.
pub fn distribution_table(
    limits: &[u64],
    opts: EnumerationOptions,
) -> Result<Vec<DistributionRow>> {
    let Some(&max) = limits.iter().max() else {
        return Ok(Vec::new());
    };
    let mut rows: Vec<DistributionRow> = limits.iter().map(|&x| DistributionRow::new(x)).collect();
    let mut overflow = None;
    for_each_carmichael(max, Filter::All, opts, |r| {
        let m: u64 = r.m.clone().try_into().expect("enumerated values fit a word");
        if r.n_factors > MAX_TRACKED_FACTORS {
            overflow = Some(m);
            return;
        }
        for row in rows.iter_mut().filter(|row| m < row.x) {
            row.all[r.n_factors] += 1;
            if r.is_primary {
                row.primary[r.n_factors] += 1;
            }
            if r.is_exceptional {
                row.exceptional[r.n_factors] += 1;
            }
        }
    })?;
    if let Some(m) = overflow {
        return Err(Error::Internal(format!("{m} has more factors than tracked")));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_rendering() {
        assert_eq!(render_ratio(2, 7), "0.286");
        assert_eq!(render_ratio(4, 12), "0.333");
        assert_eq!(render_ratio(48, 51), "0.941");
        assert_eq!(render_ratio(48, 84), "0.571");
        assert_eq!(render_ratio(1, 1), "1.000");
        assert_eq!(render_ratio(1, 8), "0.125");
        assert_eq!(render_ratio(1, 2000), "0.001");
        assert_eq!(render_ratio(1, 2001), "0.000");
        assert_eq!(render_ratio(0, 0), "---");
    }

    #[test]
    fn small_rows() {
        let rows = distribution_table(&[1000, 10_000, 100_000, 1_000_000], Default::default()).unwrap();
        let summary: Vec<_> = rows
            .iter()
            .map(|r| (r.total(), r.c(3), r.total_primary(), r.c_primary(3)))
            .collect();
        assert_eq!(summary, vec![(1, 1, 0, 0), (7, 7, 2, 2), (16, 12, 4, 4), (43, 23, 9, 9)]);
        assert_eq!((rows[2].c(4), rows[3].c(4), rows[3].c(5)), (4, 19, 1));
        assert_eq!(render_ratio(rows[3].c_primary(3), rows[3].c(3)), "0.391");
        assert!(rows.iter().all(|r| r.total_exceptional() == 0));
    }
}
