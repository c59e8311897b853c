//! Brute-force dense eigensolver used to cross-check the multigrid path.
//!
//! Cyclic-by-rows Jacobi rotations: provably convergent for real symmetric
//! matrices and sharing no code with the sparse solve. Desk scale only.

use crate::error::{Error, Result};
use crate::smooth::normalize_signed;
use crate::sparse::GraphLaplacian;

/// Hard cap on the oracle problem size.
pub const ORACLE_MAX_N: usize = 2000;

const MAX_SWEEPS: usize = 100;

/// Dense symmetric matrix in row-major storage.
#[derive(Debug, Clone)]
pub struct DenseSymmetric {
    n: usize,
    entries: Vec<f64>,
}

impl DenseSymmetric {
    /// Validates symmetry (relative to the largest entry) and the scale guard.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n > ORACLE_MAX_N {
            return Err(Error::OracleScaleExceeded { n, max: ORACLE_MAX_N });
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        let scale = entries.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = (entries[i * n + j] - entries[j * n + i]).abs();
                if diff > 1e-12 * scale {
                    return Err(Error::NotSymmetric { i, j, diff });
                }
            }
        }
        Ok(DenseSymmetric { n, entries })
    }

    pub fn from_laplacian(lap: &GraphLaplacian) -> Result<Self> {
        let n = lap.n();
        if n > ORACLE_MAX_N {
            return Err(Error::OracleScaleExceeded { n, max: ORACLE_MAX_N });
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            let (cols, vals) = lap.matrix().row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                entries[i * n + j] = v;
            }
        }
        DenseSymmetric::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    fn frobenius(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn off_diagonal_frobenius(a: &[f64], n: usize) -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    }
}

/// All eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// dense symmetric matrix, by cyclic Jacobi rotation sweeps run until the
/// off-diagonal Frobenius mass drops below `tol`.
///
/// Returns `(eigenvalues, eigenvectors)` with `eigenvectors[k]` the unit
/// eigenvector of `eigenvalues[k]`.
pub fn jacobi_eigen_all(a: &DenseSymmetric, tol: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.n;
    let mut m = a.entries.clone();
    // v starts as the identity and accumulates the rotations (columns become
    // the eigenvectors)
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    if n > 1 {
        let mut done = false;
        for _ in 0..MAX_SWEEPS {
            if DenseSymmetric::off_diagonal_frobenius(&m, n) < tol {
                done = true;
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    let apq = m[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = m[p * n + p];
                    let aqq = m[q * n + q];
                    let theta = 0.5 * (aqq - app) / apq;
                    let t = if theta.abs() > 1e150 {
                        0.5 / theta
                    } else {
                        let s = theta.signum();
                        s / (theta.abs() + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

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
        }
        if !done && DenseSymmetric::off_diagonal_frobenius(&m, n) >= tol {
            return Err(Error::JacobiNoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[k * n + k]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| (0..n).map(|r| v[r * n + k]).collect())
        .collect();
    Ok((eigenvalues, eigenvectors))
}

/// Reference Fiedler pair: densifies the Laplacian and reads off the second
/// smallest eigenpair from the full Jacobi decomposition.
pub fn fiedler_oracle(lap: &GraphLaplacian) -> Result<(f64, Vec<f64>)> {
    let dense = DenseSymmetric::from_laplacian(lap)?;
    if lap.n() < 2 {
        return Err(Error::GraphTooSmall { n: lap.n() });
    }
    let tol = 1e-12 * dense.frobenius().max(1.0);
    let (vals, vecs) = jacobi_eigen_all(&dense, tol)?;
    if vals[1] < 1e-10 {
        let components = lap.component_count();
        return Err(Error::Disconnected { components });
    }
    let v2 = normalize_signed(&vecs[1])?;
    Ok((vals[1], v2))
}
