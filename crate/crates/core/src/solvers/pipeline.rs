use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataspace::Dataset;
use crate::error::{Error, Result};
use crate::metrics::TimingModel;
use crate::qubo::{build_qubo, decode, ClusterAssignment, QuboInstance};
use crate::report::{PhaseTimes, RunReport};

use super::{
    solve_anneal, solve_branch_and_bound, solve_exact, AnnealConfig, SolveResult, BRANCH_MAX_VARS,
    EXACT_MAX_VARS,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuboBackend {
    /// Exhaustive enumeration up to [`EXACT_MAX_VARS`] variables, grouped
    /// branch-and-bound up to [`BRANCH_MAX_VARS`].
    Exact,
    Anneal(AnnealConfig),
}

impl QuboBackend {
    pub fn method_name(&self) -> &'static str {
        match self {
            QuboBackend::Exact => "qubo-exact",
            QuboBackend::Anneal(_) => "qubo-anneal",
        }
    }

    pub fn solve(&self, inst: &QuboInstance) -> Result<SolveResult> {
        match self {
            QuboBackend::Exact => {
                let m = inst.num_variables();
                if m <= EXACT_MAX_VARS {
                    solve_exact(inst.matrix())
                } else if m <= BRANCH_MAX_VARS {
                    solve_branch_and_bound(inst.matrix(), &inst.point_groups())
                } else {
                    Err(Error::TooLarge {
                        solver: "exact",
                        variables: m,
                        limit: BRANCH_MAX_VARS,
                    })
                }
            }
            QuboBackend::Anneal(cfg) => solve_anneal(inst.matrix(), cfg),
        }
    }
}

/// Build the QUBO, minimize it, decode the best state.
pub fn cluster_qubo(
    ds: &Dataset,
    k: usize,
    backend: &QuboBackend,
) -> Result<(ClusterAssignment, RunReport)> {
    if let QuboBackend::Exact = backend {
        let m = ds.len() * k;
        if m > BRANCH_MAX_VARS {
            return Err(Error::TooLarge {
                solver: "exact",
                variables: m,
                limit: BRANCH_MAX_VARS,
            });
        }
    }

    let t0 = Instant::now();
    let inst = build_qubo(ds, k)?;
    let formulation = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let solved = backend.solve(&inst)?;
    let solve = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let (asg, repairs) = decode(&inst, &solved.best.bits)?;
    let postprocess = t2.elapsed().as_secs_f64();

    let model = TimingModel::default();
    let times = PhaseTimes {
        formulation,
        solve,
        postprocess,
        estimated_embed: model.embedding_time(inst.num_variables())?,
        estimated_anneal: model.anneal_time(),
        total: 0.0,
    };
    let mut report = RunReport::new(backend.method_name(), ds, &asg, times)?;
    report.energy = Some(solved.best.energy);
    report.repairs = repairs;
    Ok((asg, report))
}
