use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::{BinarySolution, QuboMatrix};
use crate::rng::rng_from_seed;

use super::SolveResult;

/// Multi-read simulated annealing settings.
///
/// When `beta_range` is `None` the inverse-temperature schedule runs
/// geometrically from `0.1 / max|A_ij|` to `10 / min_{A_ij != 0} |A_ij|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub num_reads: usize,
    pub sweeps_per_read: usize,
    pub beta_range: Option<(f64, f64)>,
    pub seed: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            num_reads: 100,
            sweeps_per_read: 1000,
            beta_range: None,
            seed: 0,
        }
    }
}

impl AnnealConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_reads == 0 {
            return Err(Error::param("num_reads must be positive"));
        }
        if let Some((lo, hi)) = self.beta_range {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(Error::param(format!(
                    "beta range ({lo}, {hi}) must satisfy 0 < initial < final"
                )));
            }
        }
        Ok(())
    }

    /// Resolved `(initial, final)` inverse temperatures for `matrix`.
    pub fn beta_endpoints(&self, matrix: &QuboMatrix) -> (f64, f64) {
        self.beta_range.unwrap_or_else(|| {
            let max = matrix.max_abs();
            match matrix.min_nonzero_abs() {
                Some(min) => (0.1 / max, 10.0 / min),
                None => (0.1, 10.0),
            }
        })
    }

    fn schedule(&self, matrix: &QuboMatrix) -> Vec<f64> {
        let (lo, hi) = self.beta_endpoints(matrix);
        let s = self.sweeps_per_read;
        if s <= 1 {
            return vec![hi; s];
        }
        let ratio = (hi / lo).ln() / (s - 1) as f64;
        (0..s).map(|i| lo * (ratio * i as f64).exp()).collect()
    }
}

/// Minimize `z^T A z` with `num_reads` independent single-flip Metropolis
/// anneals, each from a uniformly random start, and keep the lowest final
/// state (earliest read on ties). Read `r` draws from the ChaCha8 stream
/// `r` of `seed`, so the result does not depend on thread count.
pub fn solve_anneal(matrix: &QuboMatrix, cfg: &AnnealConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    let schedule = cfg.schedule(matrix);

    let reads: Vec<BinarySolution> = (0..cfg.num_reads)
        .into_par_iter()
        .map(|r| anneal_once(matrix, &schedule, cfg.seed, r as u64))
        .collect();

    let read_energies: Vec<f64> = reads.iter().map(|s| s.energy).collect();
    let best = reads
        .into_iter()
        .reduce(|best, s| if s.energy < best.energy { s } else { best })
        .expect("num_reads is positive");
    Ok(SolveResult {
        best,
        read_energies,
        solver: "anneal".to_owned(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn anneal_once(matrix: &QuboMatrix, schedule: &[f64], seed: u64, read: u64) -> BinarySolution {
    let m = matrix.dim();
    let mut rng = rng_from_seed(seed);
    rng.set_stream(read);

    let mut bits: Vec<u8> = (0..m).map(|_| u8::from(rng.random::<bool>())).collect();
    let mut field: Vec<f64> = (0..m)
        .map(|i| {
            let row = matrix.row(i);
            (0..m).filter(|&j| bits[j] == 1).map(|j| row[j]).sum()
        })
        .collect();

    for &beta in schedule {
        for i in 0..m {
            let diag = matrix.get(i, i);
            let delta = if bits[i] == 0 {
                diag + 2.0 * field[i]
            } else {
                diag - 2.0 * field[i]
            };
            let accept = delta <= 0.0 || rng.random::<f64>() < (-beta * delta).exp();
            if accept {
                let sign = if bits[i] == 0 { 1.0 } else { -1.0 };
                bits[i] ^= 1;
                for (f, a) in field.iter_mut().zip(matrix.row(i)) {
                    *f += sign * a;
                }
            }
        }
    }

    let energy = matrix.energy_unchecked(&bits);
    BinarySolution { bits, energy }
}
