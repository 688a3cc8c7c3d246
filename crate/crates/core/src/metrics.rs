//! Partition agreement (contingency table, adjusted rand index) and the
//! annealer timing model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Intersection counts `n_ij = |a_i ∩ b_j|` between two labelings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
}

/// Rows index labels of `a`, columns labels of `b`. Labels are used as
/// indices directly, so the table is `(max a + 1) x (max b + 1)`.
pub fn contingency(a: &[usize], b: &[usize]) -> Result<ContingencyTable> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let rows = a.iter().max().map_or(0, |m| m + 1);
    let cols = b.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![vec![0u64; cols]; rows];
    for (&i, &j) in a.iter().zip(b) {
        counts[i][j] += 1;
    }
    let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums = (0..cols)
        .map(|j| counts.iter().map(|r| r[j]).sum())
        .collect();
    Ok(ContingencyTable {
        counts,
        row_sums,
        col_sums,
        total: a.len() as u64,
    })
}

fn choose2(n: u64) -> u128 {
    let n = n as u128;
    n * n.saturating_sub(1) / 2
}

/// Adjusted rand index.
///
/// All binomial sums are exact integers; the only floating-point operations
/// are the final combination. When the denominator vanishes (both
/// partitions trivial) the result is 1.0 if the partitions agree and 0.0
/// otherwise.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    let table = contingency(a, b)?;
    if table.total < 2 {
        return Err(Error::param("adjusted rand index needs at least 2 points"));
    }
    let index: u128 = table.counts.iter().flatten().map(|&n| choose2(n)).sum();
    let sum_a: u128 = table.row_sums.iter().map(|&n| choose2(n)).sum();
    let sum_b: u128 = table.col_sums.iter().map(|&n| choose2(n)).sum();
    let pairs = choose2(table.total);

    // Scale numerator and denominator by C(N,2) to keep them integral:
    //   num = index*P - sa*sb,  den = (sa+sb)*P/2 - sa*sb
    let num_exact = index as i128 * pairs as i128 - (sum_a * sum_b) as i128;
    let den_twice = (sum_a + sum_b) as i128 * pairs as i128 - 2 * (sum_a * sum_b) as i128;
    if den_twice == 0 {
        return Ok(if num_exact == 0 { 1.0 } else { 0.0 });
    }
    Ok(2.0 * num_exact as f64 / den_twice as f64)
}

/// Embedding-time polynomial and mean annealing time of the reference
/// quantum annealer, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingModel {
    /// Seconds per squared binary variable.
    pub embed_c2: f64,
    /// Seconds per binary variable.
    pub embed_c1: f64,
    /// Constant embedding overhead.
    pub embed_c0: f64,
    pub anneal_mean: f64,
    pub anneal_sd: f64,
}

impl Default for TimingModel {
    fn default() -> Self {
        Self {
            embed_c2: 1.887e-6,
            embed_c1: 4.632e-6,
            embed_c0: 4.022e-4,
            anneal_mean: 0.03481,
            anneal_sd: 0.00008,
        }
    }
}

impl TimingModel {
    pub fn embedding_time(&self, num_vars: usize) -> Result<f64> {
        if num_vars == 0 {
            return Err(Error::param("embedding time needs at least one variable"));
        }
        let v = num_vars as f64;
        Ok(self.embed_c2 * v * v + self.embed_c1 * v + self.embed_c0)
    }

    /// Annealing is modelled as constant time regardless of problem size.
    pub fn anneal_time(&self) -> f64 {
        self.anneal_mean
    }
}

/// `t_e = 1.887e-6 M^2 + 4.632e-6 M + 4.022e-4` for `M` binary variables.
pub fn estimate_embedding_time(num_vars: usize) -> Result<f64> {
    TimingModel::default().embedding_time(num_vars)
}

pub fn estimate_anneal_time() -> f64 {
    TimingModel::default().anneal_time()
}
