//! Gauss-Seidel: the linear solver and the per-level eigenvector smoother.
//!
//! The eigen-smoother runs one forward sweep per iteration on the residual
//! system `L x = rq(u) * u` starting from the current iterate, then deflates
//! the constant component and renormalizes. Exact eigenvectors are fixed
//! points of the sweep, and the Rayleigh quotient of the iterates decreases
//! monotonically toward the algebraic connectivity.

use crate::error::{Error, Result};
use crate::sparse::{GraphLaplacian, SparseMatrix};

/// Relative norm below which a deflated iterate counts as collapsed.
const COLLAPSE_EPS: f64 = 1e-13;

/// Diagnostics of one smoothing or solving run.
#[derive(Debug, Clone, PartialEq)]
pub struct SmootherReport {
    pub sweeps_used: usize,
    pub converged: bool,
    /// Inner product of the last two normalized iterates.
    pub last_alignment: f64,
}

/// Forward Gauss-Seidel solve of `A x = b`.
///
/// Sweeps update `x_i <- (b_i - sum_{j<i} a_ij x_j - sum_{j>i} a_ij x_j^old) / a_ii`
/// in ascending row order and stop when the max-norm difference between
/// successive sweeps drops below `tol` or `max_iter` sweeps have run.
pub fn gauss_seidel_solve(
    a: &SparseMatrix,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SmootherReport)> {
    let n = a.n_rows();
    if a.n_cols() != n {
        return Err(Error::NotSquare { rows: n, cols: a.n_cols() });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
    }
    let diag = extract_diagonal(a)?;

    let mut x = x0.to_vec();
    let mut prev = vec![0.0; n];
    let mut report = SmootherReport { sweeps_used: 0, converged: false, last_alignment: 1.0 };
    for _ in 0..max_iter {
        prev.copy_from_slice(&x);
        sweep_in_place(a, &diag, b, &mut x);
        report.sweeps_used += 1;
        report.last_alignment = normalized_dot(&x, &prev);
        let diff = x
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if diff < tol {
            report.converged = true;
            break;
        }
    }
    Ok((x, report))
}

fn extract_diagonal(a: &SparseMatrix) -> Result<Vec<f64>> {
    let n = a.n_rows();
    let mut diag = vec![0.0; n];
    for (i, d) in diag.iter_mut().enumerate() {
        *d = a.get(i, i);
        if *d == 0.0 {
            return Err(Error::ZeroDiagonal { row: i });
        }
    }
    Ok(diag)
}

/// One in-place forward sweep; reads of `x[j]` for `j < i` see updated
/// values, `j > i` the previous ones.
fn sweep_in_place(a: &SparseMatrix, diag: &[f64], b: &[f64], x: &mut [f64]) {
    for i in 0..a.n_rows() {
        let (cols, vals) = a.row(i);
        let mut acc = 0.0;
        for (&j, &v) in cols.iter().zip(vals) {
            if j != i {
                acc += v * x[j];
            }
        }
        x[i] = (b[i] - acc) / diag[i];
    }
}

fn normalized_dot(a: &[f64], b: &[f64]) -> f64 {
    let na = norm2(a);
    let nb = norm2(b);
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    dot(a, b) / (na * nb)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Subtracts the mean, removing the component along the constant vector
/// (the known Laplacian kernel).
pub fn deflate_constant(y: &[f64]) -> Vec<f64> {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    y.iter().map(|v| v - mean).collect()
}

/// Scales to unit 2-norm and flips the sign so the entry of largest
/// magnitude is positive (lowest index wins ties).
pub fn normalize_signed(y: &[f64]) -> Result<Vec<f64>> {
    let n = norm2(y);
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut out: Vec<f64> = y.iter().map(|v| v / n).collect();
    let mut lead = 0.0_f64;
    for &v in &out {
        if v.abs() > lead.abs() {
            lead = v;
        }
    }
    if lead < 0.0 {
        for v in &mut out {
            *v = -*v;
        }
    }
    Ok(out)
}

/// True iff `<u_k, u_prev> > 1 - tol` (strict).
pub fn convergence_check(u_k: &[f64], u_prev: &[f64], tol: f64) -> bool {
    dot(u_k, u_prev) > 1.0 - tol
}

/// Eigenvector smoother: Gauss-Seidel sweeps toward the Fiedler direction.
///
/// Each iteration runs one forward sweep on `L x = rq * u` (with `rq` the
/// current Rayleigh quotient and `u` the current unit iterate as both
/// right-hand side and initial guess), deflates the constant component,
/// renormalizes, and stops once successive iterates align within `tol`.
///
/// Fails with [`Error::IterateCollapsed`] when deflation annihilates the
/// iterate (the input lay in the constant kernel); callers reseed with a
/// random vector.
pub fn smooth_eigen(
    lap: &GraphLaplacian,
    y: &[f64],
    tol: f64,
    max_sweeps: usize,
) -> Result<(Vec<f64>, SmootherReport)> {
    let n = lap.n();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    let mut u = deflate_checked(y)?;
    u = normalize_signed(&u)?;

    let matrix = lap.matrix();
    let diag = lap.degree();
    if let Some(i) = diag.iter().position(|&d| d == 0.0) {
        return Err(Error::ZeroDiagonal { row: i });
    }

    let mut report = SmootherReport { sweeps_used: 0, converged: false, last_alignment: 0.0 };
    let mut scratch = vec![0.0; n];
    let mut x = vec![0.0; n];
    for _ in 0..max_sweeps {
        matrix.matvec_into(&u, &mut scratch);
        let rq = dot(&u, &scratch); // u is unit norm
        for (b, &ui) in scratch.iter_mut().zip(&u) {
            *b = rq * ui;
        }
        x.copy_from_slice(&u);
        sweep_in_place(matrix, diag, &scratch, &mut x);
        let deflated = deflate_checked(&x)?;
        let next = normalize_signed(&deflated)?;
        report.sweeps_used += 1;
        report.last_alignment = dot(&next, &u);
        u = next;
        if report.last_alignment > 1.0 - tol {
            report.converged = true;
            break;
        }
    }
    Ok((u, report))
}

fn deflate_checked(y: &[f64]) -> Result<Vec<f64>> {
    let out = deflate_constant(y);
    if norm2(&out) <= COLLAPSE_EPS * norm2(y) {
        return Err(Error::IterateCollapsed);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::{laplacian_from_edges, rayleigh_quotient, EdgeList};

    fn p3() -> GraphLaplacian {
        laplacian_from_edges(&EdgeList::with_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)])).unwrap()
    }

    #[test]
    fn gs_two_by_two_trace() {
        let a = SparseMatrix::from_sorted_entries(
            2,
            2,
            vec![(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)],
        )
        .unwrap();
        let (x, r) = gauss_seidel_solve(&a, &[1.0, 1.0], &[0.0, 0.0], 1e-30, 1).unwrap();
        assert_eq!(x, vec![0.5, 0.75]);
        assert_eq!(r.sweeps_used, 1);

        let (x, r) = gauss_seidel_solve(&a, &[1.0, 1.0], &[0.0, 0.0], 1e-12, 200).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-10 && (x[1] - 1.0).abs() < 1e-10);
        assert!(r.converged);
    }

    #[test]
    fn gs_zero_rhs_zero_start() {
        let a = SparseMatrix::from_sorted_entries(
            2,
            2,
            vec![(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)],
        )
        .unwrap();
        let (x, r) = gauss_seidel_solve(&a, &[0.0, 0.0], &[0.0, 0.0], 1e-12, 100).unwrap();
        assert_eq!(x, vec![0.0, 0.0]);
        assert_eq!(r.sweeps_used, 1);
        assert!(r.converged);
    }

    #[test]
    fn gs_identity_one_sweep() {
        let a = SparseMatrix::from_sorted_entries(
            3,
            3,
            vec![(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)],
        )
        .unwrap();
        let b = [3.0, -1.0, 2.0];
        let (x, _) = gauss_seidel_solve(&a, &b, &[0.0; 3], 1e-12, 100).unwrap();
        assert_eq!(x, b.to_vec());
    }

    #[test]
    fn gs_zero_diagonal_reported() {
        let a = SparseMatrix::from_sorted_entries(2, 2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0)])
            .unwrap();
        match gauss_seidel_solve(&a, &[0.0, 0.0], &[0.0, 0.0], 1e-12, 10) {
            Err(Error::ZeroDiagonal { row }) => assert_eq!(row, 1),
            other => panic!("expected zero-diagonal error, got {other:?}"),
        }
    }

    #[test]
    fn deflate_examples() {
        assert_eq!(deflate_constant(&[1.0, 1.0, 1.0]), vec![0.0, 0.0, 0.0]);
        assert_eq!(deflate_constant(&[1.0, 0.0, -1.0]), vec![1.0, 0.0, -1.0]);
        assert_eq!(deflate_constant(&[2.0, 0.0, 1.0]), vec![1.0, -1.0, 0.0]);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_signed(&[0.0, 0.0, 2.0]).unwrap(), vec![0.0, 0.0, 1.0]);
        assert_eq!(normalize_signed(&[-3.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = normalize_signed(&[1.0, 1.0]).unwrap();
        assert!((u[0] - h).abs() < 1e-15 && (u[1] - h).abs() < 1e-15);
        assert!(matches!(normalize_signed(&[0.0, 0.0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn convergence_check_boundary() {
        let u = [1.0, 0.0];
        assert!(convergence_check(&u, &u, 1e-9));
        assert!(!convergence_check(&[1.0, 0.0], &[0.0, 1.0], 1e-6));
        // inner product exactly at the threshold fails the strict inequality
        let c = 1.0_f64 - 1e-6;
        let s = (1.0 - c * c).sqrt();
        assert!(!convergence_check(&[1.0, 0.0], &[c, s], 1e-6));
    }

    #[test]
    fn smooth_eigen_p3_converges_in_one_sweep() {
        let lap = p3();
        let (u, r) = smooth_eigen(&lap, &[1.0, 0.0, -1.0], 1e-6, 50).unwrap();
        assert_eq!(r.sweeps_used, 1);
        assert!(r.converged);
        assert!(r.last_alignment >= 1.0 - 1e-6);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u[0] - h).abs() < 1e-12);
        assert!(u[1].abs() < 1e-12);
        assert!((u[2] + h).abs() < 1e-12);
    }

    #[test]
    fn smooth_eigen_constant_input_collapses() {
        let lap = p3();
        assert!(matches!(
            smooth_eigen(&lap, &[1.0, 1.0, 1.0], 1e-6, 50),
            Err(Error::IterateCollapsed)
        ));
    }

    #[test]
    fn smooth_eigen_p4_reaches_analytic_lambda2() {
        use rand::Rng;
        use rand::SeedableRng;
        let lap = laplacian_from_edges(&EdgeList::with_edges(
            4,
            vec![(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)],
        ))
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (u, _) = smooth_eigen(&lap, &y, 1e-6, 500).unwrap();
        let rq = rayleigh_quotient(&lap, &u).unwrap();
        let target = 2.0 - 2.0_f64.sqrt();
        assert!((rq - target).abs() <= 1e-4, "rq = {rq}, target = {target}");
    }

    #[test]
    fn smooth_eigen_iterates_stay_deflated_and_unit() {
        let lap = laplacian_from_edges(&EdgeList::with_edges(
            5,
            vec![(0, 1, 2.0), (1, 2, 1.0), (2, 3, 0.5), (3, 4, 1.0), (0, 4, 1.0)],
        ))
        .unwrap();
        let mut y = vec![0.9, -0.3, 0.2, 0.1, -0.5];
        for _ in 0..10 {
            let (u, _) = smooth_eigen(&lap, &y, 1e-30, 1).unwrap();
            let n = norm2(&u);
            assert!((n - 1.0).abs() < 1e-12);
            let mean: f64 = u.iter().sum::<f64>();
            assert!(mean.abs() <= 1e-10 * (5.0_f64).sqrt());
            y = u;
        }
    }
}
