use std::time::Instant;

use rayon::prelude::*;

use crate::dataspace::Dataset;
use crate::error::Result;
use crate::qubo::{sq_dist, variance_objective, ClusterAssignment};
use crate::report::{PhaseTimes, RunReport};
use crate::rng::{derive_seed, rng_from_seed};

use super::{initial_centroids, means, nearest_centroid, KMeansConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct LloydOutcome {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares after each iteration.
    pub history: Vec<f64>,
    pub iterations: usize,
}

impl LloydOutcome {
    pub fn objective(&self) -> f64 {
        self.history.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// Lloyd's algorithm from fixed starting centroids.
///
/// An empty cluster is reseeded at the point farthest from its current
/// centroid, which then forms a singleton.
pub fn lloyd_from(
    ds: &Dataset,
    mut centroids: Vec<Vec<f64>>,
    max_iterations: usize,
    tolerance: f64,
) -> LloydOutcome {
    let k = centroids.len();
    let mut labels = vec![0usize; ds.len()];
    let mut history = Vec::new();
    let mut iterations = 0;

    while iterations < max_iterations {
        iterations += 1;
        let mut dists = vec![0.0; ds.len()];
        for (i, p) in ds.points().enumerate() {
            let (c, d) = nearest_centroid(p, &centroids);
            labels[i] = c;
            dists[i] = d;
        }
        let mut counts = vec![0usize; k];
        labels.iter().for_each(|&c| counts[c] += 1);
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..ds.len())
                .filter(|&i| counts[labels[i]] > 1)
                .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)));
            if let Some(i) = far {
                counts[labels[i]] -= 1;
                labels[i] = c;
                counts[c] = 1;
                dists[i] = 0.0;
            }
        }

        let updated: Vec<Vec<f64>> = means(ds, &labels, k)
            .into_iter()
            .zip(&centroids)
            .map(|(m, old)| m.unwrap_or_else(|| old.clone()))
            .collect();
        let shift: f64 = updated
            .iter()
            .zip(&centroids)
            .map(|(a, b)| sq_dist(a, b))
            .sum();
        centroids = updated;
        let objective = ds
            .points()
            .zip(&labels)
            .map(|(p, &c)| sq_dist(p, &centroids[c]))
            .sum();
        history.push(objective);
        if shift <= tolerance {
            break;
        }
    }

    LloydOutcome {
        labels,
        centroids,
        history,
        iterations,
    }
}

/// Best of `n_restarts` Lloyd runs by within-cluster sum of squares; ties
/// go to the earliest restart.
pub fn kmeans(
    ds: &Dataset,
    k: usize,
    cfg: &KMeansConfig,
) -> Result<(ClusterAssignment, RunReport)> {
    cfg.validate(ds, k)?;
    let start = Instant::now();
    let runs: Vec<LloydOutcome> = (0..cfg.n_restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from_seed(derive_seed(cfg.seed, &[r as u64]));
            let init = initial_centroids(ds, k, cfg.init, &mut rng);
            lloyd_from(ds, init, cfg.max_iterations, cfg.tolerance)
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.objective() < a.objective() { b } else { a })
        .expect("at least one restart");
    let asg = ClusterAssignment::new(best.labels, k)?;
    let solve = start.elapsed().as_secs_f64();

    let times = PhaseTimes {
        solve,
        ..PhaseTimes::default()
    };
    let report = RunReport::new("kmeans", ds, &asg, times)?;
    debug_assert!(variance_objective(ds, &asg).is_ok());
    Ok((asg, report))
}
