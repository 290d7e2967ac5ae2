//! Mahonian numbers `T(K,k)` — permutations of `K` elements with exactly `k`
//! inversions — plus the odd-class count `c'` and the collapse margin
//! `c = c'/2`.
//!
//! The row is computed by the standard inversion-count recurrence in its
//! prefix-sum form, `O(K^2 (K-1) / 2)` per table; exhaustive enumeration is
//! kept out of this module and used as a test oracle only. All arithmetic is
//! checked: a row that would not fit in `u64` is reported as an overflow
//! error rather than wrapping.

use serde::Serialize;

use crate::prefs::max_distance;
use crate::{Error, Result};

/// One Mahonian row together with its derived consensus quantities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MahonianTable {
    k: u32,
    row: Vec<u64>,
    odd_count: u32,
    margin: u64,
}

impl MahonianTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `T(K,k)` for `k = 0..=K(K-1)/2`.
    pub fn row(&self) -> &[u64] {
        &self.row
    }

    /// `c'`: how many distance classes have odd size. Always even.
    pub fn odd_count(&self) -> u32 {
        self.odd_count
    }

    /// The collapse margin `c = c'/2`.
    pub fn margin(&self) -> u64 {
        self.margin
    }
}

/// Checked factorial in `u64` (overflows for k > 20).
pub fn factorial(k: u32) -> Result<u64> {
    let mut out: u64 = 1;
    for i in 2..=k as u64 {
        out = out.checked_mul(i).ok_or(Error::Overflow("factorial"))?;
    }
    Ok(out)
}

/// Computes the Mahonian row for `K` alternatives with its odd-class count
/// and margin.
pub fn mahonian_table(k: u32) -> Result<MahonianTable> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    let mut row: Vec<u64> = vec![1];
    for m in 2..=k as u64 {
        let width = max_distance(m as u32) as usize + 1;
        // prefix[j] = sum of row[0..j]
        let mut prefix: Vec<u64> = Vec::with_capacity(row.len() + 1);
        prefix.push(0);
        for &value in &row {
            let last = *prefix.last().unwrap();
            prefix.push(
                last.checked_add(value)
                    .ok_or(Error::Overflow("Mahonian row"))?,
            );
        }
        let total = *prefix.last().unwrap();
        let mut next = Vec::with_capacity(width);
        for j in 0..width {
            // T(m, j) = sum of T(m-1, i) over the window j-m+1 <= i <= j
            let hi = if j + 1 < prefix.len() {
                prefix[j + 1]
            } else {
                total
            };
            let lo = if j as u64 >= m {
                prefix[j + 1 - m as usize]
            } else {
                0
            };
            next.push(hi - lo);
        }
        row = next;
    }
    let odd_count = row.iter().filter(|&&t| t % 2 == 1).count() as u32;
    debug_assert_eq!(odd_count % 2, 0);
    Ok(MahonianTable {
        k,
        row,
        odd_count,
        margin: odd_count as u64 / 2,
    })
}

/// The collapse margin `c` for `K` alternatives.
pub fn collapse_margin(k: u32) -> Result<u64> {
    Ok(mahonian_table(k)?.margin())
}

/// The top of the collapsed range of consensus levels, `K!/2 - c`.
pub fn collapse_range_end(k: u32) -> Result<u64> {
    Ok(max_consensus_level(k)? - collapse_margin(k)?)
}

/// The maximum nontrivial consensus level, `K!/2`.
pub fn max_consensus_level(k: u32) -> Result<u64> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    Ok(factorial(k)? / 2)
}

/// Whether `(K-1)! <= K!/2 - c` holds for this `K`.
pub fn corollary_inequality_check(k: u32) -> Result<bool> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    Ok(factorial(k - 1)? <= collapse_range_end(k)?)
}
