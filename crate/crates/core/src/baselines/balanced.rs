use std::time::Instant;

use rayon::prelude::*;

use crate::dataspace::Dataset;
use crate::error::Result;
use crate::qubo::{sq_dist, ClusterAssignment};
use crate::report::{PhaseTimes, RunReport};
use crate::rng::{derive_seed, rng_from_seed};

use super::{initial_centroids, means, min_cost_assignment, KMeansConfig};

/// Cluster capacities: `ceil(N/k)` for the first `N mod k` clusters,
/// `floor(N/k)` for the rest.
pub fn slot_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|c| n / k + usize::from(c < n % k)).collect()
}

/// Optimal assignment of points to clusters with fixed `sizes`, minimizing
/// the summed squared distance to the given centroids. Returns the labels
/// and the total cost.
pub fn balanced_assignment(
    ds: &Dataset,
    centroids: &[Vec<f64>],
    sizes: &[usize],
) -> (Vec<usize>, f64) {
    let slot_cluster: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    debug_assert_eq!(slot_cluster.len(), ds.len());
    let costs: Vec<Vec<f64>> = ds
        .points()
        .map(|p| {
            let to_centroid: Vec<f64> = centroids.iter().map(|mu| sq_dist(p, mu)).collect();
            slot_cluster.iter().map(|&c| to_centroid[c]).collect()
        })
        .collect();
    let slots = min_cost_assignment(&costs);
    let labels: Vec<usize> = slots.iter().map(|&s| slot_cluster[s]).collect();
    let cost = slots.iter().enumerate().map(|(i, &s)| costs[i][s]).sum();
    (labels, cost)
}

/// Alternate optimal balanced assignment and centroid updates from fixed
/// starting centroids until the labels stop changing.
pub fn balanced_from(
    ds: &Dataset,
    mut centroids: Vec<Vec<f64>>,
    max_iterations: usize,
) -> Vec<usize> {
    let k = centroids.len();
    let sizes = slot_sizes(ds.len(), k);
    let mut labels: Option<Vec<usize>> = None;
    for _ in 0..max_iterations {
        let (next, _) = balanced_assignment(ds, &centroids, &sizes);
        if labels.as_ref() == Some(&next) {
            break;
        }
        centroids = means(ds, &next, k)
            .into_iter()
            .map(|m| m.expect("every cluster has at least one slot"))
            .collect();
        labels = Some(next);
    }
    labels.unwrap_or_default()
}

/// Balanced k-means: cluster sizes differ by at most one.
pub fn balanced_kmeans(
    ds: &Dataset,
    k: usize,
    cfg: &KMeansConfig,
) -> Result<(ClusterAssignment, RunReport)> {
    cfg.validate(ds, k)?;
    let start = Instant::now();
    let runs: Vec<(Vec<usize>, f64)> = (0..cfg.n_restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from_seed(derive_seed(cfg.seed, &[r as u64]));
            let init = initial_centroids(ds, k, cfg.init, &mut rng);
            let labels = balanced_from(ds, init, cfg.max_iterations);
            let objective = within_cluster_ss(ds, &labels, k);
            (labels, objective)
        })
        .collect();
    let (labels, _) = runs
        .into_iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("at least one restart");
    let asg = ClusterAssignment::new(labels, k)?;
    let times = PhaseTimes {
        solve: start.elapsed().as_secs_f64(),
        ..PhaseTimes::default()
    };
    let report = RunReport::new("balanced", ds, &asg, times)?;
    Ok((asg, report))
}

fn within_cluster_ss(ds: &Dataset, labels: &[usize], k: usize) -> f64 {
    let centroids = means(ds, labels, k);
    ds.points()
        .zip(labels)
        .map(|(p, &c)| centroids[c].as_ref().map_or(0.0, |mu| sq_dist(p, mu)))
        .sum()
}
