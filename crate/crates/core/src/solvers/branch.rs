use std::time::Instant;

use crate::error::{Error, Result};
use crate::qubo::{BinarySolution, QuboMatrix};

use super::{tie_tolerance, SolveResult};

/// Largest instance accepted by [`solve_branch_and_bound`].
pub const BRANCH_MAX_VARS: usize = 48;

/// Largest variable group; each group contributes `2^size` branches.
const MAX_GROUP: usize = 8;

/// Split `0..dim` into consecutive groups of at most `size` variables.
pub fn contiguous_groups(dim: usize, size: usize) -> Vec<Vec<usize>> {
    let size = size.max(1);
    (0..dim)
        .step_by(size)
        .map(|s| (s..(s + size).min(dim)).collect())
        .collect()
}

/// Exact minimizer of `z^T A z` by depth-first branch-and-bound.
///
/// Variables are fixed one group at a time in the given group order. The
/// bound at a node minimizes each free group separately over its `2^g`
/// configurations, with couplings to already fixed variables exact and
/// couplings between distinct free groups replaced by their negative part.
/// Ties are resolved like [`super::solve_exact`]: the lexicographically
/// smallest minimizer wins.
pub fn solve_branch_and_bound(matrix: &QuboMatrix, groups: &[Vec<usize>]) -> Result<SolveResult> {
    let m = matrix.dim();
    if m > BRANCH_MAX_VARS {
        return Err(Error::TooLarge {
            solver: "branch-and-bound",
            variables: m,
            limit: BRANCH_MAX_VARS,
        });
    }
    let mut seen = vec![false; m];
    for g in groups {
        if g.is_empty() || g.len() > MAX_GROUP {
            return Err(Error::param(format!(
                "variable groups must have between 1 and {MAX_GROUP} members"
            )));
        }
        for &v in g {
            if v >= m || std::mem::replace(&mut seen[v], true) {
                return Err(Error::param("variable groups must partition the variables"));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::param("variable groups must cover every variable"));
    }

    let start = Instant::now();
    let mut search = Search::new(matrix, groups);
    search.descend(0, 0.0);
    let bits = search.finish();
    let best = BinarySolution::evaluate(matrix, bits)?;
    Ok(SolveResult {
        read_energies: vec![best.energy],
        best,
        solver: "branch-and-bound".to_owned(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

struct GroupTable {
    vars: Vec<usize>,
    /// `y^T A_gg y` for each configuration mask `y`.
    quad: Vec<f64>,
}

struct Search<'a> {
    matrix: &'a QuboMatrix,
    groups: Vec<GroupTable>,
    /// Sum of negative couplings from a variable to all later groups.
    neg_after: Vec<f64>,
    /// `sum_j A_ij z_j` over fixed variables.
    field: Vec<f64>,
    bits: Vec<u8>,
    tol: f64,
    best: f64,
    ties: Vec<(f64, Vec<u8>)>,
    scratch: Vec<Vec<f64>>,
}

impl<'a> Search<'a> {
    fn new(matrix: &'a QuboMatrix, groups: &[Vec<usize>]) -> Self {
        let m = matrix.dim();
        let mut group_of = vec![0; m];
        for (gi, g) in groups.iter().enumerate() {
            g.iter().for_each(|&v| group_of[v] = gi);
        }
        let neg_after = (0..m)
            .map(|v| {
                (0..m)
                    .filter(|&u| group_of[u] > group_of[v])
                    .map(|u| matrix.get(v, u).min(0.0))
                    .sum()
            })
            .collect();
        let tables = groups
            .iter()
            .map(|vars| {
                let quad = (0..1usize << vars.len())
                    .map(|mask| {
                        let on: Vec<usize> = (0..vars.len())
                            .filter(|&a| mask >> a & 1 == 1)
                            .map(|a| vars[a])
                            .collect();
                        on.iter()
                            .flat_map(|&a| on.iter().map(move |&b| (a, b)))
                            .map(|(a, b)| matrix.get(a, b))
                            .sum()
                    })
                    .collect();
                GroupTable {
                    vars: vars.clone(),
                    quad,
                }
            })
            .collect();
        let scratch = groups.iter().map(|g| vec![0.0; 1 << g.len()]).collect();
        Self {
            matrix,
            groups: tables,
            neg_after,
            field: vec![0.0; m],
            bits: vec![0; m],
            tol: tie_tolerance(matrix.max_abs()),
            best: f64::INFINITY,
            ties: Vec::new(),
            scratch,
        }
    }

    /// Local objective of every configuration of group `gi` given the
    /// current fields, written into `scratch[gi]`; returns its minimum.
    fn group_values(&mut self, gi: usize, optimistic: bool) -> f64 {
        let group = &self.groups[gi];
        let out = &mut self.scratch[gi];
        let mut lin_sum = vec![0.0; out.len()];
        let mut min = f64::INFINITY;
        for mask in 0..out.len() {
            if mask > 0 {
                let low = mask.trailing_zeros() as usize;
                let v = group.vars[low];
                let lin = self.field[v] + if optimistic { self.neg_after[v] } else { 0.0 };
                lin_sum[mask] = lin_sum[mask & (mask - 1)] + 2.0 * lin;
            }
            out[mask] = group.quad[mask] + lin_sum[mask];
            min = min.min(out[mask]);
        }
        min
    }

    fn descend(&mut self, depth: usize, fixed_energy: f64) {
        if depth == self.groups.len() {
            if fixed_energy < self.best {
                self.best = fixed_energy;
                let cutoff = self.best + self.tol;
                self.ties.retain(|(e, _)| *e <= cutoff);
            }
            if fixed_energy <= self.best + self.tol {
                self.ties.push((fixed_energy, self.bits.clone()));
            }
            return;
        }

        let mut bound = fixed_energy;
        for gi in depth + 1..self.groups.len() {
            bound += self.group_values(gi, true);
        }
        self.group_values(depth, true);
        let optimistic = self.scratch[depth].clone();
        self.group_values(depth, false);
        let exact = self.scratch[depth].clone();

        let mut order: Vec<usize> = (0..exact.len()).collect();
        order.sort_by(|&a, &b| optimistic[a].total_cmp(&optimistic[b]).then(a.cmp(&b)));

        let vars = self.groups[depth].vars.clone();
        for mask in order {
            if bound + optimistic[mask] > self.best + self.tol {
                // Children are sorted by this same bound.
                break;
            }
            let on: Vec<usize> = (0..vars.len())
                .filter(|&a| mask >> a & 1 == 1)
                .map(|a| vars[a])
                .collect();
            for &v in &on {
                self.bits[v] = 1;
                for (f, a) in self.field.iter_mut().zip(self.matrix.row(v)) {
                    *f += a;
                }
            }
            self.descend(depth + 1, fixed_energy + exact[mask]);
            for &v in &on {
                self.bits[v] = 0;
                for (f, a) in self.field.iter_mut().zip(self.matrix.row(v)) {
                    *f -= a;
                }
            }
        }
    }

    fn finish(self) -> Vec<u8> {
        let dim = self.matrix.dim();
        self.ties
            .into_iter()
            .map(|(_, bits)| bits)
            .min()
            .unwrap_or_else(|| vec![0; dim])
    }
}
