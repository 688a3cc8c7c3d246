//! Wall-clock sweeps over N, k or d.
//!
//! QUBO methods are never solved here: each trial times the formulation and
//! the decode of the encoded ground-truth labels, and adds the modelled
//! embedding and annealing times. Classical methods are timed end to end.

use std::time::Instant;

use qbkm_core::dataspace::{generate_synthetic, Dataset, SyntheticSpec};
use qbkm_core::metrics::TimingModel;
use qbkm_core::qubo::{build_qubo, decode, ClusterAssignment};
use qbkm_core::rng::derive_seed;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::method::Method;
use crate::stats::Summary;

/// Largest `N * k` a sweep will formulate.
pub const MAX_SCALE_VARS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    N,
    K,
    D,
}

impl Axis {
    pub fn experiment_name(self) -> &'static str {
        match self {
            Axis::N => "scale-n",
            Axis::K => "scale-k",
            Axis::D => "scale-d",
        }
    }

    /// Sweep values and the fixed `(N, k, d)` of the default sweep.
    pub fn defaults(self) -> (Vec<usize>, (usize, usize, usize)) {
        match self {
            Axis::N => ((6..=12).map(|e| 1 << e).collect(), (0, 4, 2)),
            Axis::K => ((1..=6).map(|e| 1 << e).collect(), (256, 0, 8)),
            Axis::D => ((1..=8).map(|e| 1 << e).collect(), (1024, 4, 0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSpec {
    pub axis: Axis,
    pub values: Vec<usize>,
    /// Fixed values; the swept coordinate is ignored.
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub side_length: f64,
    pub std_dev: f64,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub seed: u64,
}

impl ScaleSpec {
    pub fn with_defaults(axis: Axis) -> Self {
        let (values, (n, k, d)) = axis.defaults();
        Self {
            axis,
            values,
            n,
            k,
            d,
            side_length: 2.0,
            std_dev: 1.0,
            methods: vec![Method::QuboAnneal],
            trials: 5,
            seed: 0,
        }
    }

    /// `(N, k, d)` at one sweep value.
    pub fn point(&self, value: usize) -> (usize, usize, usize) {
        match self.axis {
            Axis::N => (value, self.k, self.d),
            Axis::K => (self.n, value, self.d),
            Axis::D => (self.n, self.k, value),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(BenchError::usage("--trials must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(BenchError::usage("at least one method is required"));
        }
        if self.values.is_empty() || self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BenchError::usage(
                "sweep values must be non-empty and strictly increasing",
            ));
        }
        for &v in &self.values {
            let (n, k, d) = self.point(v);
            if n == 0 || k == 0 || d == 0 {
                return Err(BenchError::usage(format!(
                    "sweep point N={n}, k={k}, d={d} has a zero coordinate"
                )));
            }
            if self.methods.iter().any(|m| m.is_qubo()) && n * k > MAX_SCALE_VARS {
                return Err(qbkm_core::Error::TooLarge {
                    solver: "qubo formulation",
                    variables: n * k,
                    limit: MAX_SCALE_VARS,
                }
                .into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub value: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub method: Method,
    /// Binary variables `N * k` for QUBO methods.
    pub variables: Option<usize>,
    pub formulation: Option<Summary>,
    pub solve: Option<Summary>,
    pub postprocess: Option<Summary>,
    pub estimated_embed: Option<f64>,
    pub estimated_anneal: Option<f64>,
    pub total: Summary,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleTable {
    pub experiment: String,
    pub spec: ScaleSpec,
    pub rows: Vec<ScaleRow>,
}

struct Measured {
    formulation: f64,
    solve: f64,
    postprocess: f64,
}

/// Time the QUBO formulation of `ds` and the decode of its encoded labels.
pub fn time_formulation(ds: &Dataset, k: usize) -> qbkm_core::Result<(f64, f64)> {
    let labels = ds
        .labels()
        .ok_or_else(|| qbkm_core::Error::InvalidDataset("timing needs labels".into()))?;
    let truth = ClusterAssignment::new(labels.to_vec(), k)?;
    let bits = truth.encode();

    let t0 = Instant::now();
    let inst = build_qubo(ds, k)?;
    let formulation = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let (decoded, _) = decode(&inst, &bits)?;
    let postprocess = t1.elapsed().as_secs_f64();
    debug_assert_eq!(decoded.labels(), labels);
    Ok((formulation, postprocess))
}

/// Trials run one after another so that timings do not compete for cores.
pub fn run_scale(spec: &ScaleSpec) -> Result<ScaleTable> {
    spec.validate()?;
    let model = TimingModel::default();
    let mut rows = Vec::new();
    for (pi, &value) in spec.values.iter().enumerate() {
        let (n, k, d) = spec.point(value);
        for &method in &spec.methods {
            let mut measured = Vec::with_capacity(spec.trials);
            let mut failed = 0;
            for trial in 0..spec.trials {
                let seed = derive_seed(spec.seed, &[trial as u64, pi as u64]);
                match measure(spec, method, n, k, d, seed) {
                    Ok(m) => measured.push(m),
                    Err(_) => failed += 1,
                }
            }
            let summary =
                |f: fn(&Measured) -> f64| Summary::of(&measured.iter().map(f).collect::<Vec<_>>());
            let (embed, anneal) = if method.is_qubo() {
                (
                    Some(model.embedding_time(n * k)?),
                    Some(model.anneal_time()),
                )
            } else {
                (None, None)
            };
            let estimated = embed.unwrap_or(0.0) + anneal.unwrap_or(0.0);
            let totals: Vec<f64> = measured
                .iter()
                .map(|m| m.formulation + m.solve + m.postprocess + estimated)
                .collect();
            rows.push(ScaleRow {
                value,
                n,
                k,
                d,
                method,
                variables: method.is_qubo().then_some(n * k),
                formulation: method.is_qubo().then(|| summary(|m| m.formulation)),
                solve: (!method.is_qubo()).then(|| summary(|m| m.solve)),
                postprocess: method.is_qubo().then(|| summary(|m| m.postprocess)),
                estimated_embed: embed,
                estimated_anneal: anneal,
                total: Summary::of(&totals),
                failed,
            });
        }
    }
    Ok(ScaleTable {
        experiment: spec.axis.experiment_name().to_owned(),
        spec: spec.clone(),
        rows,
    })
}

fn measure(
    spec: &ScaleSpec,
    method: Method,
    n: usize,
    k: usize,
    d: usize,
    seed: u64,
) -> qbkm_core::Result<Measured> {
    let ds = generate_synthetic(
        &SyntheticSpec::new(n, k, d, seed)
            .with_side_length(spec.side_length)
            .with_std_dev(spec.std_dev),
    )?;
    if method.is_qubo() {
        let (formulation, postprocess) = time_formulation(&ds, k)?;
        Ok(Measured {
            formulation,
            solve: 0.0,
            postprocess,
        })
    } else {
        let t0 = Instant::now();
        method.run(&ds, k, seed)?;
        Ok(Measured {
            formulation: 0.0,
            solve: t0.elapsed().as_secs_f64(),
            postprocess: 0.0,
        })
    }
}
