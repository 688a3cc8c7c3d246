use qbkm_bench::ari::{run_ari, trial_seeds, AriSpec, DataSource, IRIS_SIZES, SYNTH_SIZES};
use qbkm_bench::parse::ProblemSize;
use qbkm_bench::scale::{run_scale, time_formulation, Axis, ScaleSpec};
use qbkm_bench::Method;
use qbkm_core::dataspace::{generate_synthetic, SyntheticSpec};
use qbkm_core::metrics::estimate_embedding_time;

#[test]
fn default_grid_with_two_methods_is_nine_by_two() {
    let spec = AriSpec {
        source: DataSource::synthetic_default(),
        sizes: SYNTH_SIZES.to_vec(),
        methods: vec![Method::Kmeans, Method::Balanced],
        trials: 3,
        seed: 1,
    };
    let table = run_ari(&spec).unwrap();
    assert_eq!(table.rows.len(), 18);
    for row in &table.rows {
        let (mean, sd) = (row.ari.mean.unwrap(), row.ari.sd.unwrap());
        assert!((-1.0..=1.0).contains(&mean));
        assert!(sd >= 0.0);
        assert_eq!(row.ari.count + row.failed, 3);
    }
}

#[test]
fn three_method_row_at_eight_by_four() {
    let spec = AriSpec {
        source: DataSource::synthetic_default(),
        sizes: vec![ProblemSize::new(8, 4)],
        methods: vec![Method::Kmeans, Method::Balanced, Method::QuboAnneal],
        trials: 2,
        seed: 0,
    };
    let table = run_ari(&spec).unwrap();
    let methods: Vec<Method> = table.rows.iter().map(|r| r.method).collect();
    assert_eq!(methods, spec.methods);
    assert!(table.rows.iter().all(|r| r.ari.count == 2 && r.failed == 0));
}

#[test]
fn failing_trials_are_counted_not_fatal() {
    // 16 x 4 = 64 variables: beyond the exact backends.
    let spec = AriSpec {
        source: DataSource::synthetic_default(),
        sizes: vec![ProblemSize::new(16, 4)],
        methods: vec![Method::Kmeans, Method::QuboExact],
        trials: 3,
        seed: 0,
    };
    let table = run_ari(&spec).unwrap();
    assert_eq!(table.rows[0].failed, 0);
    assert_eq!(table.rows[1].failed, 3);
    assert_eq!(table.rows[1].ari.count, 0);
    assert_eq!(table.rows[1].ari.mean, None);
    assert!(table.rows[1]
        .first_error
        .as_deref()
        .unwrap()
        .contains("64 variables"));
}

#[test]
fn iris_tables() {
    let spec = AriSpec {
        source: DataSource::Iris,
        sizes: vec![ProblemSize::new(12, 3)],
        methods: vec![Method::Kmeans, Method::Balanced],
        trials: 50,
        seed: 5,
    };
    let table = run_ari(&spec).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows.iter().all(|r| r.ari.count == 50));

    let k2: Vec<ProblemSize> = IRIS_SIZES.iter().copied().filter(|s| s.k == 2).collect();
    let spec = AriSpec {
        source: DataSource::Iris,
        sizes: k2,
        methods: vec![Method::Balanced],
        trials: 50,
        seed: 5,
    };
    for row in run_ari(&spec).unwrap().rows {
        assert!(row.ari.mean.unwrap() >= 0.95, "{row:?}");
    }
}

#[test]
fn trial_seeds_are_independent_of_grid_order() {
    let a = trial_seeds(9, ProblemSize::new(16, 2), 3);
    assert_eq!(a, trial_seeds(9, ProblemSize::new(16, 2), 3));
    assert_ne!(a, trial_seeds(9, ProblemSize::new(16, 2), 4));
    assert_ne!(a, trial_seeds(9, ProblemSize::new(12, 3), 3));
    assert_ne!(a.0, a.1);
}

#[test]
fn scale_rows_carry_the_timing_model_exactly() {
    let mut spec = ScaleSpec::with_defaults(Axis::N);
    spec.values = vec![64, 128];
    spec.trials = 2;
    let table = run_scale(&spec).unwrap();
    assert_eq!(table.rows.len(), 2);
    let first = &table.rows[0];
    assert_eq!(first.variables, Some(256));
    assert_eq!(
        first.estimated_embed,
        Some(estimate_embedding_time(256).unwrap())
    );
    assert!((first.estimated_embed.unwrap() - 0.1252).abs() < 5e-4);
    assert_eq!(first.estimated_anneal, Some(0.03481));
    let f = first.formulation.unwrap();
    assert_eq!((f.count, first.failed), (2, 0));
    assert!(f.mean.unwrap() >= 0.0 && f.sd.is_some());
    let total = first.total.mean.unwrap();
    assert!(total >= first.estimated_embed.unwrap() + 0.03481);
}

#[test]
fn scale_k_classical_rows_time_the_solve() {
    let mut spec = ScaleSpec::with_defaults(Axis::K);
    spec.values = vec![2, 4];
    spec.n = 32;
    spec.methods = vec![Method::Kmeans, Method::Balanced];
    spec.trials = 1;
    let table = run_scale(&spec).unwrap();
    assert_eq!(table.rows.len(), 4);
    for row in &table.rows {
        assert_eq!(row.formulation, None);
        assert_eq!(row.estimated_embed, None);
        assert!(row.solve.unwrap().mean.unwrap() > 0.0);
    }
}

#[test]
fn formulation_time_grows_with_n() {
    let time = |n: usize| {
        let runs: Vec<f64> = (0..5)
            .map(|s| {
                let ds = generate_synthetic(&SyntheticSpec::new(n, 4, 2, s)).unwrap();
                time_formulation(&ds, 4).unwrap().0
            })
            .collect();
        runs.iter().copied().fold(f64::INFINITY, f64::min)
    };
    assert!(time(256) < time(512));
}
