use std::time::Instant;

use crate::error::{Error, Result};
use crate::qubo::{BinarySolution, QuboMatrix};

use super::{tie_tolerance, SolveResult};

/// Largest instance [`solve_exact`] will enumerate (`2^26` states).
pub const EXACT_MAX_VARS: usize = 26;

/// States between full recomputations of the local fields, bounding
/// floating-point drift of the incremental updates.
const RESYNC_INTERVAL: u64 = 1 << 10;

/// Global minimizer of `z^T A z` by enumerating every bit vector in
/// lexicographic order (`z[0]` most significant). Among tied minima the
/// lexicographically smallest vector is returned.
pub fn solve_exact(matrix: &QuboMatrix) -> Result<SolveResult> {
    let m = matrix.dim();
    if m > EXACT_MAX_VARS {
        return Err(Error::TooLarge {
            solver: "exact enumeration",
            variables: m,
            limit: EXACT_MAX_VARS,
        });
    }
    let start = Instant::now();
    let tol = tie_tolerance(matrix.max_abs());

    let mut state = Enumerator::new(matrix);
    let mut best_energy = 0.0;
    let mut best_bits = vec![0u8; m];
    let total: u64 = 1 << m;
    for step in 1..total {
        state.increment();
        if step % RESYNC_INTERVAL == 0 {
            state.resync();
        }
        if state.energy < best_energy - tol {
            best_energy = state.energy;
            best_bits.copy_from_slice(&state.bits);
        }
    }

    let best = BinarySolution::evaluate(matrix, best_bits)?;
    Ok(SolveResult {
        read_energies: vec![best.energy],
        best,
        solver: "exact".to_owned(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

struct Enumerator<'a> {
    matrix: &'a QuboMatrix,
    bits: Vec<u8>,
    /// `field[i] = sum_j A_ij z_j`
    field: Vec<f64>,
    energy: f64,
}

impl<'a> Enumerator<'a> {
    fn new(matrix: &'a QuboMatrix) -> Self {
        let m = matrix.dim();
        Self {
            matrix,
            bits: vec![0; m],
            field: vec![0.0; m],
            energy: 0.0,
        }
    }

    fn flip(&mut self, i: usize) {
        let diag = self.matrix.get(i, i);
        let (delta, sign) = if self.bits[i] == 0 {
            (diag + 2.0 * self.field[i], 1.0)
        } else {
            (diag - 2.0 * self.field[i], -1.0)
        };
        self.energy += delta;
        self.bits[i] ^= 1;
        for (f, a) in self.field.iter_mut().zip(self.matrix.row(i)) {
            *f += sign * a;
        }
    }

    /// Advance to the next vector in lexicographic order.
    fn increment(&mut self) {
        let mut i = self.bits.len();
        while i > 0 {
            i -= 1;
            let was_one = self.bits[i] == 1;
            self.flip(i);
            if !was_one {
                break;
            }
        }
    }

    fn resync(&mut self) {
        let m = self.bits.len();
        for i in 0..m {
            let row = self.matrix.row(i);
            self.field[i] = (0..m).filter(|&j| self.bits[j] == 1).map(|j| row[j]).sum();
        }
        self.energy = self.matrix.energy_unchecked(&self.bits);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataspace::Dataset;
    use crate::qubo::build_qubo;

    /// Independent brute force: evaluate every state from scratch.
    fn brute_force(matrix: &QuboMatrix) -> (f64, Vec<Vec<u8>>) {
        let m = matrix.dim();
        let states: Vec<Vec<u8>> = (0u32..1 << m)
            .map(|s| (0..m).map(|i| ((s >> (m - 1 - i)) & 1) as u8).collect())
            .collect();
        let energies: Vec<f64> = states
            .iter()
            .map(|b| {
                (0..m)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .map(|(i, j)| matrix.get(i, j) * f64::from(b[i] * b[j]))
                    .sum()
            })
            .collect();
        let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let argmins = states
            .into_iter()
            .zip(&energies)
            .filter(|(_, &e)| (e - min).abs() < 1e-9)
            .map(|(s, _)| s)
            .collect();
        (min, argmins)
    }

    #[test]
    fn two_point_instance_ground_states() {
        let ds = Dataset::new("l", vec![vec![0.0], vec![1.0]], None).unwrap();
        let inst = build_qubo(&ds, 2).unwrap();
        let (min, argmins) = brute_force(inst.matrix());
        assert_eq!(min, -4.0);
        assert_eq!(argmins, vec![vec![0, 1, 1, 0], vec![1, 0, 0, 1]]);
        let res = solve_exact(inst.matrix()).unwrap();
        assert_eq!(res.best.bits, vec![0, 1, 1, 0]);
        assert_eq!(res.best.energy, -4.0);
        assert_eq!(res.read_energies, vec![-4.0]);
    }

    #[test]
    fn single_variable_and_zero_matrix() {
        let res = solve_exact(&QuboMatrix::from_rows(&[vec![-1.0]]).unwrap()).unwrap();
        assert_eq!((res.best.bits, res.best.energy), (vec![1], -1.0));
        let res = solve_exact(&QuboMatrix::zeros(5)).unwrap();
        assert_eq!((res.best.bits, res.best.energy), (vec![0; 5], 0.0));
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(3);
        for m in 1..=10 {
            let mut rows = vec![vec![0.0; m]; m];
            for i in 0..m {
                for j in i..m {
                    let v: f64 = rng.random_range(-5.0..5.0);
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let matrix = QuboMatrix::from_rows(&rows).unwrap();
            let (min, argmins) = brute_force(&matrix);
            let res = solve_exact(&matrix).unwrap();
            assert!((res.best.energy - min).abs() < 1e-9);
            assert_eq!(res.best.bits, argmins[0]);
        }
    }

    #[test]
    fn rejects_large_instances() {
        let err = solve_exact(&QuboMatrix::zeros(64)).unwrap_err();
        assert!(matches!(err, Error::TooLarge { variables: 64, .. }));
    }
}
