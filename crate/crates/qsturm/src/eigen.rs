//! Dense symmetric eigensolver: cyclic-by-rows Jacobi rotations.
//!
//! The stiffness matrices this crate produces stay small (dimension below
//! ~20), where Jacobi is accurate and its orthogonality is easy to audit.
//! Eigenvalues come back ascending with matching orthonormal eigenvectors.

use crate::error::{Error, Result};

/// Fraction of the Frobenius norm the off-diagonal part must fall below.
const OFF_TOL: f64 = 1e-13;
/// Sweeps allowed before the solve is declared non-convergent.
const MAX_SWEEPS: usize = 64;
/// Entries below this are never rotated on; guards the 1/(2 a_pq) division.
const PIVOT_GUARD: f64 = 1e-300;

/// Symmetric matrix with a single stored triangle, so symmetry cannot
/// drift. Indexing accepts (i, j) in either order.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    dim: usize,
    // Upper triangle, row-major: row i holds columns i..dim.
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Result<SymMatrix> {
        if dim == 0 {
            return Err(Error::InvalidParam("matrix dimension must be >= 1".into()));
        }
        Ok(SymMatrix {
            dim,
            data: vec![0.0; dim * (dim + 1) / 2],
        })
    }

    /// Builds from an entry function invoked once per stored pair i <= j.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<SymMatrix> {
        let mut m = SymMatrix::zeros(dim)?;
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        assert!(c < self.dim, "index ({i}, {j}) outside dim {}", self.dim);
        r * self.dim - r * (r + 1) / 2 + c
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.get(i, j);
                s += v * v;
            }
        }
        s.sqrt()
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// `values[k]` ascends and `vectors[k]` is its unit eigenvector, so
/// A v_k = values[k] v_k and the vectors are mutually orthonormal.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic-by-rows Jacobi. Terminates when the off-diagonal Frobenius norm
/// drops below OFF_TOL times the full norm, erring after MAX_SWEEPS.
pub fn jacobi_eigs(a: &SymMatrix) -> Result<EigenDecomposition> {
    let n = a.dim;
    let norm = a.frobenius();
    // Full dense working copy; rotations touch both triangles.
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = a.get(i, j);
        }
    }
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = norm == 0.0 || off(&m) <= OFF_TOL * norm;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() < PIVOT_GUARD {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Rows and columns p, q of M.
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        converged = off(&m) <= OFF_TOL * norm;
    }
    if !converged {
        return Err(Error::NoConvergence(format!(
            "Jacobi off-diagonal norm {:.3e} above {:.3e} after {MAX_SWEEPS} sweeps",
            off(&m),
            OFF_TOL * norm
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn rejects_empty_matrix() {
        assert!(SymMatrix::zeros(0).is_err());
    }

    #[test]
    fn indexing_is_order_insensitive() {
        let mut m = SymMatrix::zeros(3).unwrap();
        m.set(2, 0, 7.5);
        assert_eq!(m.get(0, 2), 7.5);
        assert_eq!(m.get(2, 0), 7.5);
    }

    #[test]
    fn diagonal_matrix_sorts_its_entries() {
        let d = [3.0, -1.0, 2.0];
        let m = SymMatrix::from_fn(3, |i, j| if i == j { d[i] } else { 0.0 }).unwrap();
        let e = jacobi_eigs(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
        // Eigenvectors are signed unit coordinates permuted to match.
        let expect_axis = [1usize, 2, 0];
        for (k, axis) in expect_axis.iter().enumerate() {
            for (row, &x) in e.vectors[k].iter().enumerate() {
                let want = if row == *axis { 1.0 } else { 0.0 };
                assert!((x.abs() - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn two_by_two_with_known_spectrum() {
        let m = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 }).unwrap();
        let e = jacobi_eigs(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let inv_sqrt2 = 0.5f64.sqrt();
        assert!((e.vectors[0][0].abs() - inv_sqrt2).abs() < 1e-14);
        assert!((e.vectors[0][0] + e.vectors[0][1]).abs() < 1e-14);
        assert!((e.vectors[1][0] - e.vectors[1][1]).abs() < 1e-14);
    }

    #[test]
    fn random_matrices_reconstruct_and_stay_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for dim in [1usize, 2, 3, 5, 8, 12, 16] {
            let m = SymMatrix::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)).unwrap();
            let e = jacobi_eigs(&m).unwrap();
            let norm = m.frobenius().max(1.0);
            for i in 0..dim {
                for j in 0..dim {
                    let rebuilt: f64 = (0..dim)
                        .map(|k| e.values[k] * e.vectors[k][i] * e.vectors[k][j])
                        .sum();
                    assert!(
                        (rebuilt - m.get(i, j)).abs() <= 1e-10 * norm,
                        "dim {dim} entry ({i},{j})"
                    );
                    let g = dot(&e.vectors[i], &e.vectors[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() <= 1e-12, "dim {dim} gram ({i},{j})");
                }
            }
            let trace = m.trace();
            let sum: f64 = e.values.iter().sum();
            assert!((sum - trace).abs() <= 1e-10 * (1.0 + trace.abs()));
            for w in e.values.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn eigenvalue_equation_holds_columnwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dim = 6;
        let m = SymMatrix::from_fn(dim, |_, _| rng.gen_range(-2.0..2.0)).unwrap();
        let e = jacobi_eigs(&m).unwrap();
        for k in 0..dim {
            for i in 0..dim {
                let av: f64 = (0..dim).map(|j| m.get(i, j) * e.vectors[k][j]).sum();
                assert!((av - e.values[k] * e.vectors[k][i]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn zero_matrix_is_already_converged() {
        let m = SymMatrix::zeros(4).unwrap();
        let e = jacobi_eigs(&m).unwrap();
        assert!(e.values.iter().all(|&v| v == 0.0));
    }
}
