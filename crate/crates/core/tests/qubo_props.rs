use proptest::prelude::*;
use qbkm_core::dataspace::Dataset;
use qbkm_core::qubo::{
    build_permutation, build_qubo, decode, distance_matrix, feasible_objective,
    pairwise_variance_objective, structured_energy, variance_objective, ClusterAssignment,
};

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Point sets with at least two distinct points, and a cluster count.
fn instance() -> impl Strategy<Value = (Vec<Vec<f64>>, usize)> {
    (2usize..=7, 1usize..=3)
        .prop_flat_map(|(n, d)| {
            (
                prop::collection::vec(prop::collection::vec(-5.0f64..5.0, d), n),
                2usize..=n.min(4),
            )
        })
        .prop_filter("needs two distinct points", |(pts, _)| {
            pts.iter().any(|p| sq(p, &pts[0]) > 1e-6)
        })
}

fn with_labels() -> impl Strategy<Value = (Vec<Vec<f64>>, usize, Vec<usize>)> {
    instance().prop_flat_map(|(pts, k)| {
        let n = pts.len();
        (Just(pts), Just(k), prop::collection::vec(0..k, n))
    })
}

fn with_bits() -> impl Strategy<Value = (Vec<Vec<f64>>, usize, Vec<u8>)> {
    instance().prop_flat_map(|(pts, k)| {
        let m = pts.len() * k;
        (Just(pts), Just(k), prop::collection::vec(0u8..=1, m))
    })
}

fn dataset(pts: &[Vec<f64>]) -> Dataset {
    Dataset::new("prop", pts.to_vec(), None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn energy_plus_offset_is_the_feasible_objective((pts, k, labels) in with_labels()) {
        let ds = dataset(&pts);
        let inst = build_qubo(&ds, k).unwrap();
        let asg = ClusterAssignment::new(labels, k).unwrap();
        let energy = inst.energy(&asg.encode()).unwrap();
        let n = pts.len() as f64;
        let target = n / k as f64;
        // Unbalanced feasible encodings still carry the column penalty.
        let column: f64 = asg.sizes().iter().map(|&s| (s as f64 - target).powi(2)).sum();
        let expected = feasible_objective(&ds, &asg).unwrap() + inst.alpha() * column;
        prop_assert!(close(energy + inst.dropped_offset(), expected, 1e-9));
    }

    #[test]
    fn energy_matches_penalized_objective_for_any_bits((pts, k, bits) in with_bits()) {
        let ds = dataset(&pts);
        let inst = build_qubo(&ds, k).unwrap();
        let n = pts.len();
        let target = n as f64 / k as f64;
        let mut expected = 0.0;
        for c in 0..k {
            let members: Vec<usize> = (0..n).filter(|&p| bits[c * n + p] == 1).collect();
            for &i in &members {
                for &j in &members {
                    expected += sq(&pts[i], &pts[j]);
                }
            }
            expected += inst.alpha() * (members.len() as f64 - target).powi(2);
        }
        for p in 0..n {
            let set = (0..k).filter(|&c| bits[c * n + p] == 1).count() as f64;
            expected += inst.beta() * (set - 1.0).powi(2);
        }
        let energy = inst.energy(&bits).unwrap();
        prop_assert!(close(energy + inst.dropped_offset(), expected, 1e-9),
            "{} vs {}", energy + inst.dropped_offset(), expected);
    }

    #[test]
    fn penalties_vanish_exactly_on_their_constraints((pts, k, bits) in with_bits()) {
        let ds = dataset(&pts);
        let inst = build_qubo(&ds, k).unwrap();
        let n = pts.len();
        let one_hot = (0..n).all(|p| (0..k).filter(|&c| bits[c * n + p] == 1).count() == 1);
        let balanced = (0..k).all(|c| {
            (0..n).filter(|&p| bits[c * n + p] == 1).count() * k == n
        });
        prop_assert_eq!(inst.row_penalty(&bits).unwrap() == 0.0, one_hot);
        prop_assert_eq!(inst.column_penalty(&bits).unwrap().abs() < 1e-12, balanced);
        prop_assert!(inst.row_penalty(&bits).unwrap() >= 0.0);
        prop_assert!(inst.column_penalty(&bits).unwrap() >= 0.0);
    }

    #[test]
    fn structured_energy_matches_dense((pts, k, bits) in with_bits()) {
        let ds = dataset(&pts);
        let inst = build_qubo(&ds, k).unwrap();
        let dm = distance_matrix(&ds);
        let s = structured_energy(&dm, inst.weights(), k, &bits).unwrap();
        let scale = inst.matrix().max_abs() * bits.len() as f64;
        prop_assert!((s - inst.energy(&bits).unwrap()).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn matrix_equals_kronecker_assembly((pts, k) in instance()) {
        let ds = dataset(&pts);
        let inst = build_qubo(&ds, k).unwrap();
        let n = pts.len();
        let m = n * k;
        let (alpha, beta) = (inst.alpha(), inst.beta());
        let target = n as f64 / k as f64;

        // I_k (x) (D + alpha F)
        let mut a = vec![vec![0.0; m]; m];
        for c in 0..k {
            for i in 0..n {
                for j in 0..n {
                    let f = if i == j { 1.0 - 2.0 * target } else { 1.0 };
                    a[c * n + i][c * n + j] = sq(&pts[i], &pts[j]) + alpha * f;
                }
            }
        }
        // Q^T (I_N (x) beta G) Q with dense products.
        let q = build_permutation(n, k).to_dense();
        let mut block = vec![vec![0.0; m]; m];
        for p in 0..n {
            for a_ in 0..k {
                for b_ in 0..k {
                    let g = if a_ == b_ { -1.0 } else { 1.0 };
                    block[p * k + a_][p * k + b_] = beta * g;
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                let mut v = 0.0;
                for r in 0..m {
                    for s in 0..m {
                        v += f64::from(q[r][i]) * block[r][s] * f64::from(q[s][j]);
                    }
                }
                a[i][j] += v;
            }
        }
        let tol = 1e-12 * inst.matrix().max_abs();
        for i in 0..m {
            for j in 0..m {
                prop_assert!((inst.matrix().get(i, j) - a[i][j]).abs() <= tol);
            }
        }
    }

    #[test]
    fn translation_leaves_the_matrix_unchanged(
        (pts, k) in instance(),
        shift in prop::collection::vec(-100.0f64..100.0, 3),
    ) {
        let ds = dataset(&pts);
        let moved = ds.map_points(|p| p.iter_mut().zip(&shift).for_each(|(x, s)| *x += s)).unwrap();
        let a = build_qubo(&ds, k).unwrap();
        let b = build_qubo(&moved, k).unwrap();
        let tol = 1e-9 * a.matrix().max_abs();
        for (x, y) in a.matrix().as_slice().iter().zip(b.matrix().as_slice()) {
            prop_assert!((x - y).abs() <= tol);
        }
    }

    #[test]
    fn decode_inverts_encode((pts, k, labels) in with_labels()) {
        let ds = dataset(&pts);
        let inst = build_qubo(&ds, k).unwrap();
        let asg = ClusterAssignment::new(labels, k).unwrap();
        let (back, repairs) = decode(&inst, &asg.encode()).unwrap();
        prop_assert_eq!(back, asg);
        prop_assert_eq!(repairs.total(), 0);
    }

    #[test]
    fn centroid_and_pairwise_variance_agree((pts, k, labels) in with_labels()) {
        prop_assume!((0..k).all(|c| labels.contains(&c)));
        let ds = dataset(&pts);
        let asg = ClusterAssignment::new(labels, k).unwrap();
        let a = variance_objective(&ds, &asg).unwrap();
        let b = pairwise_variance_objective(&ds, &asg).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} vs {b}");
    }

    #[test]
    fn permutation_is_a_bijection(n in 1usize..12, k in 1usize..6) {
        let q = build_permutation(n, k);
        let mut seen = vec![false; n * k];
        for r in 0..n * k {
            let s = q.source(r);
            prop_assert!(!seen[s]);
            seen[s] = true;
            // Point-major order: row r is point r / k, cluster r % k.
            prop_assert_eq!((s % n, s / n), (r / k, r % k));
        }
    }
}
