//! Exact binomials, the double sum G(n), and the multiple-angle coefficients
//! of `sin(nθ) / sin θ` as a polynomial in `cos θ`.
//!
//! G(n) = Σ_{i=0}^{⌊(n+1)/2⌋} Σ_{j=0}^{i} (−1)^{i−j} C(n, 2i+1) C(i, j)
//!
//! The inner sum over `j` depends on `i` only, so the row-major evaluation
//! keeps a shared table of those alternating Pascal-row sums and reuses it
//! across every `n`. Outer terms whose inner weight is exactly zero
//! contribute nothing and are skipped.

use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact C(n, k) by the multiplicative formula; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc == C(n, i) here, so the division is exact
        acc *= n - i;
        acc /= i + 1;
    }
    BigInt::from(acc)
}

/// G(n) together with its argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GValue {
    pub n: u64,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub value: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummationOrder {
    /// Outer index `i`, inner `j` (shared inner-sum table).
    RowMajor,
    /// Outer index `j`, inner `i`; every binomial product evaluated.
    ColumnMajor,
}

/// Alternating sums of Pascal's triangle rows, `A_i = Σ_j (−1)^{i−j} C(i, j)`,
/// built row by row with additions only.
#[derive(Debug, Default)]
struct RowSums {
    row: Vec<BigUint>,
    sums: Vec<BigInt>,
}

impl RowSums {
    fn extend_to(&mut self, i_max: usize) {
        while self.sums.len() <= i_max {
            let i = self.sums.len();
            if i == 0 {
                self.row = vec![BigUint::one()];
            } else {
                self.row.push(BigUint::one());
                for j in (1..i).rev() {
                    let left = self.row[j - 1].clone();
                    self.row[j] += left;
                }
            }
            let (mut plus, mut minus) = (BigUint::zero(), BigUint::zero());
            for (j, c) in self.row.iter().enumerate() {
                if (i - j).is_multiple_of(2) {
                    plus += c;
                } else {
                    minus += c;
                }
            }
            self.sums.push(BigInt::from(plus) - BigInt::from(minus));
        }
    }
}

static ROW_SUMS: RwLock<RowSums> = RwLock::new(RowSums { row: Vec::new(), sums: Vec::new() });

fn upper_index(n: u64) -> u64 {
    n.div_ceil(2)
}

fn g_row_major(n: u64) -> BigInt {
    let i_max = upper_index(n) as usize;
    {
        let have = ROW_SUMS.read().unwrap_or_else(|e| e.into_inner()).sums.len();
        if have <= i_max {
            ROW_SUMS.write().unwrap_or_else(|e| e.into_inner()).extend_to(i_max);
        }
    }
    let table = ROW_SUMS.read().unwrap_or_else(|e| e.into_inner());
    let mut total = BigInt::zero();
    for (i, weight) in table.sums[..=i_max].iter().enumerate() {
        if weight.is_zero() {
            continue;
        }
        total += binomial(n, 2 * i as u64 + 1) * weight;
    }
    total
}

fn g_column_major(n: u64) -> BigInt {
    let i_max = upper_index(n);
    let mut total = BigInt::zero();
    for j in 0..=i_max {
        for i in j..=i_max {
            let c = binomial(n, 2 * i + 1);
            if c.is_zero() {
                continue;
            }
            let term = c * binomial(i, j);
            if (i - j) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    total
}

/// The double sum G(n), with `i` running to `⌊(n+1)/2⌋`.
pub fn g_value(n: u64) -> Result<GValue> {
    g_value_with(n, SummationOrder::RowMajor)
}

pub fn g_value_with(n: u64, order: SummationOrder) -> Result<GValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("G(n) is defined for n >= 1".into()));
    }
    let value = match order {
        SummationOrder::RowMajor => g_row_major(n),
        SummationOrder::ColumnMajor => g_column_major(n),
    };
    Ok(GValue { n, value })
}

/// Largest `n` for which consumers evaluate G(n) by the double sum. The shared
/// table costs O(n³) bit operations to build, so beyond this the collapsed
/// value `G(n) = n` is used and reported as such.
pub const DIRECT_G_LIMIT: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GSource {
    /// Evaluated by the double sum.
    DoubleSum,
    /// Taken as `n`: the inner sum is `(1 − 1)^i`, zero for every `i ≥ 1`.
    Collapsed,
}

/// G(n) for use inside the series and criterion computations.
pub fn g_numerator(n: u64) -> (BigInt, GSource) {
    if n <= DIRECT_G_LIMIT {
        (g_row_major(n), GSource::DoubleSum)
    } else {
        (BigInt::from(n), GSource::Collapsed)
    }
}

/// Coefficients of `sin(nθ) / sin θ` by power of `cos θ`, collected from the
/// double sum. Powers run over `n−1, n−3, …` (ascending in the output);
/// a power whose collected coefficient is zero stays in the list.
pub fn multiple_angle_coefficients(n: u64) -> Result<Vec<(u64, BigInt)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("multiple-angle coefficients need n >= 1".into()));
    }
    let mut dense = vec![BigInt::zero(); n as usize];
    for i in 0..=upper_index(n) {
        let outer = binomial(n, 2 * i + 1);
        if outer.is_zero() {
            continue;
        }
        let mut inner = BigUint::one();
        for j in 0..=i {
            let term = &outer * BigInt::from(inner.clone());
            let power = (n - 2 * (i - j) - 1) as usize;
            if (i - j) % 2 == 0 {
                dense[power] += term;
            } else {
                dense[power] -= term;
            }
            inner = inner * (i - j) / (j + 1);
        }
    }
    let parity = (n - 1) % 2;
    Ok(dense
        .into_iter()
        .enumerate()
        .filter(|(p, _)| *p as u64 % 2 == parity)
        .map(|(p, c)| (p as u64, c))
        .collect())
}

/// `Σ |c|` over the coefficient list; bounds the cancellation when the
/// polynomial is evaluated with `|cos θ| <= 1`.
pub fn coefficient_abs_sum(coeffs: &[(u64, BigInt)]) -> BigUint {
    coeffs.iter().map(|(_, c)| c.abs().magnitude().clone()).sum()
}
