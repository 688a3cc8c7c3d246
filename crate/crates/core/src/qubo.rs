//! The balanced k-means QUBO.
//!
//! Binary variable `w[p, c] = 1` iff point `p` is in cluster `c`. Variables
//! are stacked cluster-major ("column-stacked"): index `c * N + p`. The
//! assembled matrix is
//!
//! ```text
//! A = I_k (x) (D + alpha F)  +  Q^T (I_N (x) beta G) Q
//! F = 1_N - (2N/k) I_N,   G = 1_k - 2 I_k
//! ```
//!
//! where `Q` reorders column-stacked variables into point-major order. With
//! `alpha = max(D) / (2N/k - 1)` and `beta = max(D)`, for any bit vector
//!
//! ```text
//! w^T A w + offset = sum_c w_c^T D w_c
//!                  + alpha * sum_c (|w_c| - N/k)^2
//!                  + beta  * sum_p (|w_p| - 1)^2
//! offset = k alpha (N/k)^2 + N beta
//! ```
//!
//! so on balanced one-hot vectors the energy plus offset is the ordered-pair
//! intra-cluster distance sum.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataspace::Dataset;
use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        iter.into_iter().for_each(|v| s.add(v));
        s
    }
}

/// Pairwise squared Euclidean distances, `d_ij = ||x_i - x_j||^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
    max_entry: f64,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn max_entry(&self) -> f64 {
        self.max_entry
    }
}

pub fn distance_matrix(ds: &Dataset) -> DistanceMatrix {
    let n = ds.len();
    let mut entries = vec![0.0; n * n];
    entries.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let xi = ds.point(i);
        for (j, out) in row.iter_mut().enumerate() {
            *out = xi
                .iter()
                .zip(ds.point(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
        }
    });
    let max_entry = entries.iter().copied().fold(0.0, f64::max);
    DistanceMatrix {
        n,
        entries,
        max_entry,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    /// Cluster-size (column) penalty weight.
    pub alpha: f64,
    /// One-hot (row) penalty weight.
    pub beta: f64,
}

/// `alpha = max(D) / (2 N/k - 1)`, `beta = max(D)`, with `N/k` real-valued.
pub fn penalty_weights(
    dm: &DistanceMatrix,
    n_points: usize,
    n_clusters: usize,
) -> Result<PenaltyWeights> {
    if n_clusters == 0 {
        return Err(Error::param("n_clusters must be positive"));
    }
    let target = n_points as f64 / n_clusters as f64;
    let denom = 2.0 * target - 1.0;
    if denom <= 0.0 {
        return Err(Error::param(format!(
            "N/k = {target} must exceed 1/2 for a positive cluster-size penalty"
        )));
    }
    let max_d = dm.max_entry();
    if max_d <= 0.0 {
        return Err(Error::DegenerateDataset);
    }
    Ok(PenaltyWeights {
        alpha: max_d / denom,
        beta: max_d,
    })
}

/// Dense symmetric real matrix defining `min z^T A z` over binary `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl QuboMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Build from rows; rejects non-square, non-symmetric or non-finite input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::param("QUBO matrix must be square"));
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("QUBO matrix entries must be finite"));
        }
        let m = Self { dim, data };
        if !m.is_symmetric() {
            return Err(Error::param("QUBO matrix must be symmetric"));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_nonzero_abs(&self) -> Option<f64> {
        self.data
            .iter()
            .map(|v| v.abs())
            .filter(|&v| v > 0.0)
            .min_by(f64::total_cmp)
    }

    /// `z^T A z`, compensated.
    pub fn energy(&self, bits: &[u8]) -> Result<f64> {
        check_bits(bits, self.dim)?;
        Ok(self.energy_unchecked(bits))
    }

    pub(crate) fn energy_unchecked(&self, bits: &[u8]) -> f64 {
        let ones: Vec<usize> = (0..bits.len()).filter(|&i| bits[i] == 1).collect();
        ones.iter()
            .flat_map(|&i| {
                let row = self.row(i);
                ones.iter().map(move |&j| row[j])
            })
            .collect::<CompensatedSum>()
            .value()
    }

    /// Upper-triangular coordinate listing `i j value`, 0-based, diagonal
    /// included, zeros skipped. Off-diagonal values are doubled so that the
    /// listed triangle alone defines the same objective.
    pub fn write_upper_triangular(&self, mut w: impl Write) -> std::io::Result<()> {
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = if i == j {
                    self.get(i, i)
                } else {
                    2.0 * self.get(i, j)
                };
                if v != 0.0 {
                    writeln!(w, "{i} {j} {v:?}")?;
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn check_bits(bits: &[u8], expected: usize) -> Result<()> {
    if bits.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: bits.len(),
        });
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::param("bit vector entries must be 0 or 1"));
    }
    Ok(())
}

/// A balanced k-means QUBO together with the data needed to interpret it.
#[derive(Debug, Clone)]
pub struct QuboInstance {
    matrix: QuboMatrix,
    n_points: usize,
    n_clusters: usize,
    weights: PenaltyWeights,
    dropped_offset: f64,
}

impl QuboInstance {
    pub fn matrix(&self) -> &QuboMatrix {
        &self.matrix
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn num_variables(&self) -> usize {
        self.n_points * self.n_clusters
    }

    pub fn alpha(&self) -> f64 {
        self.weights.alpha
    }

    pub fn beta(&self) -> f64 {
        self.weights.beta
    }

    pub fn weights(&self) -> PenaltyWeights {
        self.weights
    }

    /// Constants discarded when expanding the squared penalties:
    /// `k alpha (N/k)^2 + N beta`.
    pub fn dropped_offset(&self) -> f64 {
        self.dropped_offset
    }

    /// Column-stacked index of `w[point, cluster]`.
    pub fn index(&self, point: usize, cluster: usize) -> usize {
        cluster * self.n_points + point
    }

    /// Variables grouped by point: `[p, N + p, ..., (k-1) N + p]` for each `p`.
    pub fn point_groups(&self) -> Vec<Vec<usize>> {
        (0..self.n_points)
            .map(|p| (0..self.n_clusters).map(|c| self.index(p, c)).collect())
            .collect()
    }

    pub fn energy(&self, bits: &[u8]) -> Result<f64> {
        self.matrix.energy(bits)
    }

    /// `alpha * sum_c (|w_c| - N/k)^2`, before any constant is dropped.
    pub fn column_penalty(&self, bits: &[u8]) -> Result<f64> {
        check_bits(bits, self.num_variables())?;
        let target = self.n_points as f64 / self.n_clusters as f64;
        Ok(self.weights.alpha
            * (0..self.n_clusters)
                .map(|c| {
                    let size = (0..self.n_points)
                        .filter(|&p| bits[self.index(p, c)] == 1)
                        .count();
                    (size as f64 - target).powi(2)
                })
                .sum::<f64>())
    }

    /// `beta * sum_p (|w_p| - 1)^2`, before any constant is dropped.
    pub fn row_penalty(&self, bits: &[u8]) -> Result<f64> {
        check_bits(bits, self.num_variables())?;
        Ok(self.weights.beta
            * (0..self.n_points)
                .map(|p| {
                    let set = (0..self.n_clusters)
                        .filter(|&c| bits[self.index(p, c)] == 1)
                        .count();
                    (set as f64 - 1.0).powi(2)
                })
                .sum::<f64>())
    }
}

/// Assemble the balanced k-means QUBO for `k` clusters.
pub fn build_qubo(ds: &Dataset, k: usize) -> Result<QuboInstance> {
    if k < 2 || k > ds.len() {
        return Err(Error::param(format!(
            "k={k} must satisfy 2 <= k <= N={}",
            ds.len()
        )));
    }
    build_qubo_from_distances(&distance_matrix(ds), k)
}

/// Block-wise assembly from a precomputed distance matrix in `O(N^2 k + N k^2)`.
pub fn build_qubo_from_distances(dm: &DistanceMatrix, k: usize) -> Result<QuboInstance> {
    let n = dm.n();
    if k < 2 || k > n {
        return Err(Error::param(format!("k={k} must satisfy 2 <= k <= N={n}")));
    }
    let weights = penalty_weights(dm, n, k)?;
    let PenaltyWeights { alpha, beta } = weights;
    let target = n as f64 / k as f64;
    let m = n * k;
    let mut data = vec![0.0; m * m];

    // Row `c*N + i` of A: the (D + alpha F) block for cluster c, plus the
    // beta G coupling of point i with itself in every other cluster.
    data.par_chunks_mut(m)
        .enumerate()
        .for_each(|(row_idx, row)| {
            let (c, i) = (row_idx / n, row_idx % n);
            let block = &mut row[c * n..(c + 1) * n];
            for (j, (out, d)) in block.iter_mut().zip(dm.row(i)).enumerate() {
                let f = if i == j { 1.0 - 2.0 * target } else { 1.0 };
                *out = d + alpha * f;
            }
            for c2 in 0..k {
                let g = if c2 == c { -1.0 } else { 1.0 };
                row[c2 * n + i] += beta * g;
            }
        });

    Ok(QuboInstance {
        matrix: QuboMatrix { dim: m, data },
        n_points: n,
        n_clusters: k,
        weights,
        dropped_offset: k as f64 * alpha * target * target + n as f64 * beta,
    })
}

/// Evaluate the QUBO objective directly from `D`, the weights and the
/// binary assignment, without materializing `A`.
pub fn structured_energy(
    dm: &DistanceMatrix,
    weights: PenaltyWeights,
    k: usize,
    bits: &[u8],
) -> Result<f64> {
    let n = dm.n();
    check_bits(bits, n * k)?;
    let target = n as f64 / k as f64;
    let mut acc = CompensatedSum::default();
    for c in 0..k {
        let members: Vec<usize> = (0..n).filter(|&p| bits[c * n + p] == 1).collect();
        for &i in &members {
            for &j in &members {
                let f = if i == j { 1.0 - 2.0 * target } else { 1.0 };
                acc.add(dm.get(i, j) + weights.alpha * f);
            }
        }
    }
    for p in 0..n {
        let set = (0..k).filter(|&c| bits[c * n + p] == 1).count() as f64;
        // v^T (1_k - 2 I_k) v for a row with `set` ones.
        acc.add(weights.beta * (set * set - 2.0 * set));
    }
    Ok(acc.value())
}

/// The reordering `Q` from column-stacked to point-major variable order:
/// `(Q w)[r] = w[source(r)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    source: Vec<usize>,
}

impl Permutation {
    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    /// Column holding the single 1 of row `r`.
    pub fn source(&self, r: usize) -> usize {
        self.source[r]
    }

    pub fn apply<T: Copy>(&self, w: &[T]) -> Vec<T> {
        self.source.iter().map(|&s| w[s]).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.source
            .iter()
            .map(|&s| {
                let mut row = vec![0u8; self.source.len()];
                row[s] = 1;
                row
            })
            .collect()
    }
}

/// Row `r` (0-based) of `Q` selects column `N (r mod k) + floor(r / k)`.
pub fn build_permutation(n_points: usize, n_clusters: usize) -> Permutation {
    let m = n_points * n_clusters;
    Permutation {
        source: (0..m)
            .map(|r| n_points * (r % n_clusters) + r / n_clusters)
            .collect(),
    }
}

/// A bit vector in column-stacked order with its recomputed energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySolution {
    pub bits: Vec<u8>,
    pub energy: f64,
}

impl BinarySolution {
    pub fn evaluate(matrix: &QuboMatrix, bits: Vec<u8>) -> Result<Self> {
        let energy = matrix.energy(&bits)?;
        Ok(Self { bits, energy })
    }
}

/// Cluster index per point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    labels: Vec<usize>,
    n_clusters: usize,
}

impl ClusterAssignment {
    pub fn new(labels: Vec<usize>, n_clusters: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= n_clusters) {
            return Err(Error::param(format!(
                "cluster index {bad} out of range for k={n_clusters}"
            )));
        }
        Ok(Self { labels, n_clusters })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_clusters];
        self.labels.iter().for_each(|&l| sizes[l] += 1);
        sizes
    }

    /// `max size - min size`.
    pub fn imbalance(&self) -> usize {
        let sizes = self.sizes();
        sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0)
    }

    /// One-hot column-stacked encoding.
    pub fn encode(&self) -> Vec<u8> {
        let n = self.labels.len();
        let mut bits = vec![0u8; n * self.n_clusters];
        for (p, &c) in self.labels.iter().enumerate() {
            bits[c * n + p] = 1;
        }
        bits
    }

    pub fn centroids(&self, ds: &Dataset) -> Vec<Option<Vec<f64>>> {
        let mut sums = vec![vec![0.0; ds.dim()]; self.n_clusters];
        let sizes = self.sizes();
        for (p, &c) in ds.points().zip(&self.labels) {
            sums[c].iter_mut().zip(p).for_each(|(s, v)| *s += v);
        }
        sums.into_iter()
            .zip(sizes)
            .map(|(s, n)| (n > 0).then(|| s.into_iter().map(|v| v / n as f64).collect()))
            .collect()
    }
}

fn check_assignment(ds: &Dataset, asg: &ClusterAssignment) -> Result<()> {
    if asg.len() != ds.len() {
        return Err(Error::LengthMismatch {
            expected: ds.len(),
            actual: asg.len(),
        });
    }
    Ok(())
}

/// Sum over clusters of squared distances over ordered pairs of members.
pub fn feasible_objective(ds: &Dataset, asg: &ClusterAssignment) -> Result<f64> {
    check_assignment(ds, asg)?;
    let labels = asg.labels();
    let mut acc = CompensatedSum::default();
    for i in 0..ds.len() {
        for j in 0..ds.len() {
            if i != j && labels[i] == labels[j] {
                acc.add(sq_dist(ds.point(i), ds.point(j)));
            }
        }
    }
    Ok(acc.value())
}

/// Within-cluster sum of squared distances to centroids.
pub fn variance_objective(ds: &Dataset, asg: &ClusterAssignment) -> Result<f64> {
    check_assignment(ds, asg)?;
    let centroids = asg.centroids(ds);
    if let Some(c) = centroids.iter().position(Option::is_none) {
        return Err(Error::param(format!("cluster {c} is empty")));
    }
    let mut acc = CompensatedSum::default();
    for (p, &c) in ds.points().zip(asg.labels()) {
        acc.add(sq_dist(p, centroids[c].as_ref().unwrap()));
    }
    Ok(acc.value())
}

/// `sum_c 1/(2|c|) * sum over ordered member pairs of squared distance`,
/// which equals [`variance_objective`] by the law of total variance.
pub fn pairwise_variance_objective(ds: &Dataset, asg: &ClusterAssignment) -> Result<f64> {
    check_assignment(ds, asg)?;
    let sizes = asg.sizes();
    if let Some(c) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::param(format!("cluster {c} is empty")));
    }
    let labels = asg.labels();
    let mut per_cluster = vec![CompensatedSum::default(); asg.n_clusters()];
    for i in 0..ds.len() {
        for j in 0..ds.len() {
            if labels[i] == labels[j] {
                per_cluster[labels[i]].add(sq_dist(ds.point(i), ds.point(j)));
            }
        }
    }
    Ok(per_cluster
        .iter()
        .zip(&sizes)
        .map(|(s, &n)| s.value() / (2.0 * n as f64))
        .collect::<CompensatedSum>()
        .value())
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Points whose decoded row was not exactly one-hot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairStats {
    /// Points with more than one cluster bit set.
    pub multi_assigned: usize,
    /// Points with no cluster bit set.
    pub unassigned: usize,
}

impl RepairStats {
    pub fn total(&self) -> usize {
        self.multi_assigned + self.unassigned
    }
}

/// Turn a column-stacked bit vector into cluster labels. Multiply-assigned
/// points go to their lowest set cluster, unassigned points to cluster 0.
pub fn decode(inst: &QuboInstance, bits: &[u8]) -> Result<(ClusterAssignment, RepairStats)> {
    check_bits(bits, inst.num_variables())?;
    let (n, k) = (inst.n_points(), inst.n_clusters());
    let mut stats = RepairStats::default();
    let labels = (0..n)
        .map(|p| {
            let mut set = (0..k).filter(|&c| bits[c * n + p] == 1);
            match (set.next(), set.next()) {
                (Some(c), None) => c,
                (Some(c), Some(_)) => {
                    stats.multi_assigned += 1;
                    c
                }
                (None, _) => {
                    stats.unassigned += 1;
                    0
                }
            }
        })
        .collect();
    Ok((
        ClusterAssignment {
            labels,
            n_clusters: k,
        },
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Dataset {
        Dataset::new("line", xs.iter().map(|&x| vec![x]).collect(), None).unwrap()
    }

    /// Literal `I_k (x) (D + aF) + Q^T (I_N (x) bG) Q` with dense matrices.
    fn dense_oracle(dm: &DistanceMatrix, k: usize, alpha: f64, beta: f64) -> Vec<Vec<f64>> {
        let n = dm.n();
        let m = n * k;
        let target = n as f64 / k as f64;
        let kron = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| {
            let (ra, rb) = (a.len(), b.len());
            let mut out = vec![vec![0.0; ra * rb]; ra * rb];
            for i in 0..ra {
                for j in 0..ra {
                    for p in 0..rb {
                        for q in 0..rb {
                            out[i * rb + p][j * rb + q] = a[i][j] * b[p][q];
                        }
                    }
                }
            }
            out
        };
        let eye = |s: usize| -> Vec<Vec<f64>> {
            (0..s)
                .map(|i| (0..s).map(|j| f64::from(u8::from(i == j))).collect())
                .collect()
        };
        let daf: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| dm.get(i, j) + alpha * (1.0 - if i == j { 2.0 * target } else { 0.0 }))
                    .collect()
            })
            .collect();
        let bg: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| beta * (1.0 - if i == j { 2.0 } else { 0.0 }))
                    .collect()
            })
            .collect();
        let first = kron(&eye(k), &daf);
        let middle = kron(&eye(n), &bg);
        // Q from the 1-based formula: q_ij = 1 iff j = N mod(i-1, k) + floor((i-1)/k) + 1.
        let q: Vec<Vec<f64>> = (1..=m)
            .map(|i| {
                (1..=m)
                    .map(|j| f64::from(u8::from(j == n * ((i - 1) % k) + (i - 1) / k + 1)))
                    .collect()
            })
            .collect();
        let mul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| (0..m).map(|t| a[i][t] * b[t][j]).sum())
                        .collect()
                })
                .collect()
        };
        let qt: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| q[j][i]).collect()).collect();
        let second = mul(&mul(&qt, &middle), &q);
        (0..m)
            .map(|i| (0..m).map(|j| first[i][j] + second[i][j]).collect())
            .collect()
    }

    #[test]
    fn distances_small_cases() {
        let dm = distance_matrix(
            &Dataset::new("t", vec![vec![0.0, 0.0], vec![3.0, 4.0]], None).unwrap(),
        );
        assert_eq!(dm.row(0), &[0.0, 25.0]);
        assert_eq!(dm.row(1), &[25.0, 0.0]);

        let dm = distance_matrix(&line(&[2.0, 2.0]));
        assert_eq!(dm.max_entry(), 0.0);

        let dm = distance_matrix(&line(&[0.0, 1.0, 3.0]));
        let expected = [[0.0, 1.0, 9.0], [1.0, 0.0, 4.0], [9.0, 4.0, 0.0]];
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(dm.row(i), row);
        }
        assert_eq!(dm.max_entry(), 9.0);
    }

    #[test]
    fn penalty_weight_values() {
        let dm = distance_matrix(&line(&[0.0, 1.0]));
        let w = penalty_weights(&dm, 2, 2).unwrap();
        assert_eq!((w.alpha, w.beta), (1.0, 1.0));

        let dm = distance_matrix(&line(&[0.0, 10f64.sqrt(), 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]));
        assert!((dm.max_entry() - 10.0).abs() < 1e-12);
        let w = penalty_weights(&dm, 8, 2).unwrap();
        assert!((w.alpha - dm.max_entry() / 7.0).abs() < 1e-15);
        assert_eq!(w.beta, dm.max_entry());

        let dm = distance_matrix(&line(&[1.0, 1.0, 1.0, 1.0]));
        assert!(matches!(
            penalty_weights(&dm, 4, 2),
            Err(Error::DegenerateDataset)
        ));
    }

    #[test]
    fn two_point_instance_matches_hand_values() {
        // D = [[0,1],[1,0]], alpha = beta = 1, F = [[-1,1],[1,-1]], G = F.
        let inst = build_qubo(&line(&[0.0, 1.0]), 2).unwrap();
        let expected = [
            [-2.0, 2.0, 1.0, 0.0],
            [2.0, -2.0, 0.0, 1.0],
            [1.0, 0.0, -2.0, 2.0],
            [0.0, 1.0, 2.0, -2.0],
        ];
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(inst.matrix().row(i), row);
        }
        assert_eq!(inst.dropped_offset(), 4.0);
        assert_eq!(inst.energy(&[1, 0, 0, 1]).unwrap(), -4.0);
        assert_eq!(inst.energy(&[0, 0, 0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn assembly_matches_dense_oracle() {
        for (xs, k) in [
            (vec![0.0, 1.0], 2),
            (vec![0.0, 1.0, 3.0], 2),
            (vec![0.0, 1.0, 3.0, 7.5, -2.0], 3),
            (vec![0.3, 1.1, 3.0, 7.5, -2.0, 4.4], 2),
        ] {
            let ds = line(&xs);
            let inst = build_qubo(&ds, k).unwrap();
            let oracle = dense_oracle(&distance_matrix(&ds), k, inst.alpha(), inst.beta());
            for (i, row) in oracle.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let got = inst.matrix().get(i, j);
                    assert!(
                        (got - v).abs() <= 1e-12 * v.abs().max(1.0),
                        "A[{i}][{j}]: {got} vs {v}"
                    );
                }
            }
            assert!(inst.matrix().is_symmetric());
        }
    }

    #[test]
    fn rejects_bad_k_and_degenerate_data() {
        let ds = line(&[0.0, 1.0, 2.0]);
        assert!(build_qubo(&ds, 1).is_err());
        assert!(build_qubo(&ds, 4).is_err());
        let flat = Dataset::new("f", vec![vec![1.0, 1.0]; 4], None).unwrap();
        assert!(matches!(
            build_qubo(&flat, 2),
            Err(Error::DegenerateDataset)
        ));
    }

    #[test]
    fn permutation_small_cases() {
        let q = build_permutation(2, 2);
        // w = [w11, w21, w12, w22] -> v = [w11, w12, w21, w22]
        assert_eq!(
            q.apply(&["w11", "w21", "w12", "w22"]),
            vec!["w11", "w12", "w21", "w22"]
        );
        for k in 1..5 {
            assert_eq!(
                build_permutation(1, k).apply(&(0..k).collect::<Vec<_>>()),
                (0..k).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn permutation_matches_one_based_formula() {
        for n in 1..7 {
            for k in 1..6 {
                let q = build_permutation(n, k);
                let dense = q.to_dense();
                for i in 1..=n * k {
                    let j = n * ((i - 1) % k) + (i - 1) / k + 1;
                    assert_eq!(dense[i - 1][j - 1], 1);
                    assert_eq!(dense[i - 1].iter().map(|&b| b as usize).sum::<usize>(), 1);
                }
                for j in 0..n * k {
                    assert_eq!(dense.iter().map(|r| r[j] as usize).sum::<usize>(), 1);
                }
            }
        }
    }

    #[test]
    fn energy_length_and_value_checks() {
        let inst = build_qubo(&line(&[0.0, 1.0]), 2).unwrap();
        assert!(matches!(
            inst.energy(&[1, 0, 0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(inst.energy(&[2, 0, 0, 0]).is_err());
    }

    #[test]
    fn objectives_small_cases() {
        let ds = line(&[0.0, 1.0, 3.0]);
        let one = ClusterAssignment::new(vec![0, 0, 0], 1).unwrap();
        assert_eq!(feasible_objective(&ds, &one).unwrap(), 28.0);

        let ds2 = line(&[0.0, 5.0]);
        let singles = ClusterAssignment::new(vec![0, 1], 2).unwrap();
        assert_eq!(feasible_objective(&ds2, &singles).unwrap(), 0.0);
        assert_eq!(variance_objective(&ds2, &singles).unwrap(), 0.0);

        let pair = line(&[0.0, 2.0]);
        let together = ClusterAssignment::new(vec![0, 0], 1).unwrap();
        assert_eq!(variance_objective(&pair, &together).unwrap(), 2.0);
        assert_eq!(pairwise_variance_objective(&pair, &together).unwrap(), 2.0);

        let empty = ClusterAssignment::new(vec![0, 0], 2).unwrap();
        assert!(variance_objective(&pair, &empty).is_err());
    }

    #[test]
    fn feasible_objective_equals_blockwise_quadratic_form() {
        let ds = line(&[0.0, 1.0, 3.0, 4.5, -1.0, 2.0]);
        let dm = distance_matrix(&ds);
        let asg = ClusterAssignment::new(vec![0, 1, 2, 0, 1, 2], 3).unwrap();
        let bits = asg.encode();
        let n = ds.len();
        let blockwise: f64 = (0..3)
            .map(|c| {
                let col = &bits[c * n..(c + 1) * n];
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| f64::from(col[i]) * dm.get(i, j) * f64::from(col[j]))
                    .sum::<f64>()
            })
            .sum();
        assert!((feasible_objective(&ds, &asg).unwrap() - blockwise).abs() < 1e-12);
    }

    #[test]
    fn decode_repairs() {
        let ds = line(&[0.0, 1.0, 2.0]);
        let inst = build_qubo(&ds, 3).unwrap();
        let asg = ClusterAssignment::new(vec![2, 0, 1], 3).unwrap();
        let (back, stats) = decode(&inst, &asg.encode()).unwrap();
        assert_eq!(back, asg);
        assert_eq!(stats, RepairStats::default());

        let mut bits = vec![0u8; 9];
        bits[inst.index(0, 1)] = 1;
        bits[inst.index(0, 2)] = 1;
        bits[inst.index(1, 0)] = 1;
        bits[inst.index(2, 2)] = 1;
        let (asg, stats) = decode(&inst, &bits).unwrap();
        assert_eq!(asg.labels(), &[1, 0, 2]);
        assert_eq!(stats.multi_assigned, 1);
        assert_eq!(stats.unassigned, 0);

        let (asg, stats) = decode(&inst, &[0; 9]).unwrap();
        assert_eq!(asg.labels(), &[0, 0, 0]);
        assert_eq!(stats.unassigned, 3);
    }

    #[test]
    fn upper_triangular_export() {
        let inst = build_qubo(&line(&[0.0, 1.0]), 2).unwrap();
        let mut out = Vec::new();
        inst.matrix().write_upper_triangular(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "0 0 -2.0");
        assert_eq!(lines[1], "0 1 4.0");
        assert_eq!(lines[2], "0 2 2.0");
        // Rebuild the objective from the listing and compare on every state.
        let entries: Vec<(usize, usize, f64)> = lines
            .iter()
            .map(|l| {
                let f: Vec<&str> = l.split(' ').collect();
                (
                    f[0].parse().unwrap(),
                    f[1].parse().unwrap(),
                    f[2].parse().unwrap(),
                )
            })
            .collect();
        for s in 0u8..16 {
            let bits: Vec<u8> = (0..4).map(|b| (s >> b) & 1).collect();
            let from_listing: f64 = entries
                .iter()
                .map(|&(i, j, v)| v * f64::from(bits[i] * bits[j]))
                .sum();
            assert_eq!(from_listing, inst.energy(&bits).unwrap());
        }
    }

    #[test]
    fn from_rows_validation() {
        assert!(QuboMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0]]).is_err());
        assert!(QuboMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(QuboMatrix::from_rows(&[vec![-1.0]]).is_ok());
    }
}
