//! Compressed sparse-row kernel, graph Laplacian construction, Galerkin
//! triple product, and the Rayleigh quotient.
//!
//! Everything downstream (coarsening, smoothing, the cascadic solver) works
//! on the [`GraphLaplacian`] built here. Construction is the single entry
//! point that establishes the structural invariants: bit-equal symmetry,
//! row sums of zero up to rounding, nonpositive off-diagonals, and no
//! explicitly stored zeros.

use crate::error::{Error, Result};

/// Compressed sparse-row matrix with 64-bit real entries.
///
/// Column indices are strictly increasing within each row and no explicit
/// zeros are stored after construction-time compaction.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a CSR matrix from entries sorted by (row, col) with no
    /// duplicates. Entries with value exactly 0.0 are compacted away.
    pub fn from_sorted_entries(
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            if i >= n_rows || j >= n_cols {
                return Err(Error::EdgeOutOfRange { i, j, n: n_rows });
            }
            debug_assert!(last.map_or(true, |p| p < (i, j)), "entries not sorted");
            last = Some((i, j));
            if v == 0.0 {
                continue;
            }
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseMatrix { n_rows, n_cols, row_ptr, col_idx, values })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Entry (i, j), zero if not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Matrix-vector product with deterministic ascending-column summation.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch { expected: self.n_cols, found: x.len() });
        }
        let mut y = vec![0.0; self.n_rows];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    pub(crate) fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            y[i] = acc;
        }
    }

    /// Checks the CSR structural invariants (sorted unique columns per row,
    /// consistent offsets, no stored zeros).
    pub fn check_structure(&self) -> Result<()> {
        if self.row_ptr.len() != self.n_rows + 1
            || self.row_ptr[0] != 0
            || *self.row_ptr.last().unwrap() != self.col_idx.len()
            || self.col_idx.len() != self.values.len()
        {
            return Err(Error::InvalidConfig { reason: "inconsistent CSR offsets".into() });
        }
        for i in 0..self.n_rows {
            if self.row_ptr[i] > self.row_ptr[i + 1] {
                return Err(Error::InvalidConfig { reason: "row_ptr not nondecreasing".into() });
            }
            let (cols, vals) = self.row(i);
            for k in 0..cols.len() {
                if cols[k] >= self.n_cols {
                    return Err(Error::EdgeOutOfRange { i, j: cols[k], n: self.n_cols });
                }
                if k > 0 && cols[k - 1] >= cols[k] {
                    return Err(Error::InvalidConfig {
                        reason: format!("row {i} columns not strictly increasing"),
                    });
                }
                if vals[k] == 0.0 {
                    return Err(Error::InvalidConfig {
                        reason: format!("stored zero at ({i}, {})", cols[k]),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Undirected weighted graph as a plain list of edges.
///
/// Duplicate edges are allowed (their weights accumulate when the Laplacian
/// is built). Readers drop self-loops and nonpositive weights at ingestion.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl EdgeList {
    pub fn new(n: usize) -> Self {
        EdgeList { n, edges: Vec::new() }
    }

    pub fn with_edges(n: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        EdgeList { n, edges }
    }
}

/// Validated graph Laplacian in CSR form.
///
/// Diagonal entries hold the weighted vertex degrees, off-diagonal entries
/// the negated edge weights. Symmetry is bit-exact by construction: both
/// orientations of an edge are written from the same accumulated weight.
#[derive(Debug, Clone)]
pub struct GraphLaplacian {
    matrix: SparseMatrix,
    n: usize,
    degree: Vec<f64>,
}

impl GraphLaplacian {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    /// Weighted degree of each vertex (the diagonal).
    pub fn degree(&self) -> &[f64] {
        &self.degree
    }

    pub fn max_degree(&self) -> f64 {
        self.degree.iter().cloned().fold(0.0, f64::max)
    }

    /// Number of undirected edges (off-diagonal entries / 2).
    pub fn edge_count(&self) -> usize {
        let diag = (0..self.n).filter(|&i| self.matrix.get(i, i) != 0.0).count();
        (self.matrix.nnz() - diag) / 2
    }

    /// Verifies the Laplacian invariants: exact symmetry, row sums within
    /// `1e-10 * max_degree`, nonpositive off-diagonals, nonnegative diagonal.
    pub fn check_invariants(&self) -> Result<()> {
        self.matrix.check_structure()?;
        let scale = self.max_degree().max(f64::MIN_POSITIVE);
        for i in 0..self.n {
            let (cols, vals) = self.matrix.row(i);
            let mut row_sum = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                row_sum += v;
                if j == i {
                    if v < 0.0 {
                        return Err(Error::InvalidConfig {
                            reason: format!("negative diagonal at row {i}"),
                        });
                    }
                } else {
                    if v > 0.0 {
                        return Err(Error::InvalidConfig {
                            reason: format!("positive off-diagonal at ({i}, {j})"),
                        });
                    }
                    let mirror = self.matrix.get(j, i);
                    if mirror.to_bits() != v.to_bits() {
                        return Err(Error::NotSymmetric { i, j, diff: (mirror - v).abs() });
                    }
                }
            }
            if row_sum.abs() > 1e-10 * scale {
                return Err(Error::InvalidConfig {
                    reason: format!("row {i} sums to {row_sum:e}"),
                });
            }
        }
        Ok(())
    }

    /// Number of connected components of the off-diagonal pattern.
    pub fn component_count(&self) -> usize {
        let neighbors = |v: usize| {
            let (cols, _) = self.matrix.row(v);
            cols.iter().copied().filter(move |&j| j != v)
        };
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for j in neighbors(v) {
                    if label[j] == usize::MAX {
                        label[j] = count;
                        queue.push_back(j);
                    }
                }
            }
            count += 1;
        }
        count
    }
}

/// Builds the Laplacian of a weighted undirected graph: `L(i,i)` is the
/// weighted degree, `L(i,j) = -w(i,j)` for edges. Duplicate edges
/// accumulate; self-loops are dropped.
pub fn laplacian_from_edges(graph: &EdgeList) -> Result<GraphLaplacian> {
    let n = graph.n;
    let mut pairs: Vec<(usize, usize, f64)> = Vec::with_capacity(graph.edges.len());
    for &(i, j, w) in &graph.edges {
        if i >= n || j >= n {
            return Err(Error::EdgeOutOfRange { i, j, n });
        }
        if w <= 0.0 || !w.is_finite() {
            return Err(Error::NonpositiveWeight { i, j, w });
        }
        if i == j {
            continue;
        }
        pairs.push((i.min(j), i.max(j), w));
    }
    pairs.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    // merge duplicates, summing weights in sorted order
    let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(pairs.len());
    for (i, j, w) in pairs {
        match merged.last_mut() {
            Some(last) if last.0 == i && last.1 == j => last.2 += w,
            _ => merged.push((i, j, w)),
        }
    }

    // adjacency in both orientations, sorted by (row, col)
    let mut adj: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * merged.len());
    for &(i, j, w) in &merged {
        adj.push((i, j, w));
        adj.push((j, i, w));
    }
    adj.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    // degrees summed in ascending neighbor order
    let mut degree = vec![0.0; n];
    for &(i, _, w) in &adj {
        degree[i] += w;
    }

    // assemble rows with the diagonal spliced in at its sorted position
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(adj.len() + n);
    let mut k = 0;
    for i in 0..n {
        let mut diag_written = false;
        while k < adj.len() && adj[k].0 == i {
            let (_, j, w) = adj[k];
            if !diag_written && j > i {
                entries.push((i, i, degree[i]));
                diag_written = true;
            }
            entries.push((i, j, -w));
            k += 1;
        }
        if !diag_written {
            entries.push((i, i, degree[i]));
        }
    }
    let matrix = SparseMatrix::from_sorted_entries(n, n, entries)?;
    let lap = GraphLaplacian { matrix, n, degree };
    debug_assert!(lap.check_invariants().is_ok());
    Ok(lap)
}

/// Galerkin triple product `P L P^T` for a 0/1 aggregation operator.
///
/// Intra-aggregate edges cancel off the off-diagonals and fold into the
/// diagonal; the result is itself a valid (coarser) graph Laplacian.
pub fn galerkin_product(
    lap: &GraphLaplacian,
    interp: &crate::coarsen::InterpolationOperator,
) -> Result<GraphLaplacian> {
    if interp.n_fine() != lap.n() {
        return Err(Error::DimensionMismatch { expected: lap.n(), found: interp.n_fine() });
    }
    let q = interp.aggregation().assignments();
    let c = interp.n_coarse();
    // accumulate cross-aggregate weights per unordered coarse pair, scanning
    // the fine upper triangle in row-major order for a deterministic sum
    let mut acc: std::collections::HashMap<(usize, usize), f64> =
        std::collections::HashMap::with_capacity(lap.matrix().nnz() / 2);
    for i in 0..lap.n() {
        let (cols, vals) = lap.matrix().row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if j <= i {
                continue;
            }
            let (a, b) = (q[i], q[j]);
            if a >= c || b >= c {
                return Err(Error::AggregateOutOfRange { index: a.max(b), count: c });
            }
            if a != b {
                *acc.entry((a.min(b), a.max(b))).or_insert(0.0) += -v;
            }
        }
    }
    let mut coarse_edges: Vec<(usize, usize, f64)> =
        acc.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    coarse_edges.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let coarse = laplacian_from_edges(&EdgeList::with_edges(c, coarse_edges))?;
    debug_assert!(coarse.check_invariants().is_ok());
    Ok(coarse)
}

/// Rayleigh quotient `(v^T L v) / (v^T v)`.
pub fn rayleigh_quotient(lap: &GraphLaplacian, v: &[f64]) -> Result<f64> {
    if v.len() != lap.n() {
        return Err(Error::DimensionMismatch { expected: lap.n(), found: v.len() });
    }
    let vv: f64 = v.iter().map(|x| x * x).sum();
    if vv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let lv = lap.matrix().matvec(v)?;
    let vlv: f64 = v.iter().zip(&lv).map(|(a, b)| a * b).sum();
    Ok(vlv / vv)
}

/// Connected components by breadth-first traversal.
///
/// Returns a label per vertex (components numbered in order of first
/// discovery) and the component count.
pub fn connected_components(graph: &EdgeList) -> Result<(Vec<usize>, usize)> {
    let n = graph.n;
    let mut deg = vec![0usize; n];
    for &(i, j, _) in &graph.edges {
        if i >= n || j >= n {
            return Err(Error::EdgeOutOfRange { i, j, n });
        }
        if i != j {
            deg[i] += 1;
            deg[j] += 1;
        }
    }
    let mut offsets = vec![0usize; n + 1];
    for v in 0..n {
        offsets[v + 1] = offsets[v] + deg[v];
    }
    let mut neighbors = vec![0usize; offsets[n]];
    let mut fill = offsets.clone();
    for &(i, j, _) in &graph.edges {
        if i != j {
            neighbors[fill[i]] = j;
            fill[i] += 1;
            neighbors[fill[j]] = i;
            fill[j] += 1;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &j in &neighbors[offsets[v]..offsets[v + 1]] {
                if label[j] == usize::MAX {
                    label[j] = count;
                    queue.push_back(j);
                }
            }
        }
        count += 1;
    }
    Ok((label, count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> GraphLaplacian {
        laplacian_from_edges(&EdgeList::with_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)])).unwrap()
    }

    #[test]
    fn p3_laplacian_rows() {
        let lap = p3();
        let expect = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(lap.matrix().get(i, j), expect[i][j]);
            }
        }
        lap.check_invariants().unwrap();
    }

    #[test]
    fn single_vertex_is_zero_matrix() {
        let lap = laplacian_from_edges(&EdgeList::new(1)).unwrap();
        assert_eq!(lap.n(), 1);
        assert_eq!(lap.matrix().nnz(), 0);
        assert_eq!(lap.matrix().get(0, 0), 0.0);
    }

    #[test]
    fn triangle_laplacian() {
        let lap = laplacian_from_edges(&EdgeList::with_edges(
            3,
            vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)],
        ))
        .unwrap();
        for i in 0..3 {
            assert_eq!(lap.matrix().get(i, i), 2.0);
            for j in 0..3 {
                if i != j {
                    assert_eq!(lap.matrix().get(i, j), -1.0);
                }
            }
        }
    }

    #[test]
    fn duplicate_edges_accumulate() {
        let lap = laplacian_from_edges(&EdgeList::with_edges(
            2,
            vec![(0, 1, 1.5), (1, 0, 0.5)],
        ))
        .unwrap();
        assert_eq!(lap.matrix().get(0, 1), -2.0);
        assert_eq!(lap.matrix().get(0, 0), 2.0);
    }

    #[test]
    fn self_loops_dropped() {
        let lap = laplacian_from_edges(&EdgeList::with_edges(
            2,
            vec![(0, 0, 3.0), (0, 1, 1.0)],
        ))
        .unwrap();
        assert_eq!(lap.matrix().get(0, 0), 1.0);
    }

    #[test]
    fn bad_edges_rejected() {
        let err = laplacian_from_edges(&EdgeList::with_edges(2, vec![(0, 5, 1.0)]));
        assert!(matches!(err, Err(Error::EdgeOutOfRange { j: 5, .. })));
        let err = laplacian_from_edges(&EdgeList::with_edges(2, vec![(0, 1, -1.0)]));
        assert!(matches!(err, Err(Error::NonpositiveWeight { .. })));
        let err = laplacian_from_edges(&EdgeList::with_edges(2, vec![(0, 1, 0.0)]));
        assert!(matches!(err, Err(Error::NonpositiveWeight { .. })));
    }

    #[test]
    fn matvec_identity_and_kernel() {
        let id = SparseMatrix::from_sorted_entries(
            3,
            3,
            vec![(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)],
        )
        .unwrap();
        assert_eq!(id.matvec(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);

        let lap = p3();
        let zero = lap.matrix().matvec(&[1.0, 1.0, 1.0]).unwrap();
        for z in zero {
            assert!(z.abs() <= 1e-12 * lap.max_degree());
        }
        // (1, 0, -1) is an exact eigenvector with eigenvalue 1
        assert_eq!(lap.matrix().matvec(&[1.0, 0.0, -1.0]).unwrap(), vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let lap = p3();
        assert!(matches!(
            lap.matrix().matvec(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rayleigh_quotient_examples() {
        let lap = p3();
        assert_eq!(rayleigh_quotient(&lap, &[1.0, 0.0, -1.0]).unwrap(), 1.0);
        let rq = rayleigh_quotient(&lap, &[1.0, 1.0, 1.0]).unwrap();
        assert!(rq.abs() <= 1e-12);
        assert!(matches!(
            rayleigh_quotient(&lap, &[0.0, 0.0, 0.0]),
            Err(Error::ZeroVector)
        ));

        // K4: every mean-zero vector gives exactly n = 4
        let k4 = laplacian_from_edges(&EdgeList::with_edges(
            4,
            (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j, 1.0))).collect(),
        ))
        .unwrap();
        let v = [3.0, -1.0, -1.0, -1.0];
        assert!((rayleigh_quotient(&k4, &v).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn components_examples() {
        let (_, c) = connected_components(&EdgeList::with_edges(
            3,
            vec![(0, 1, 1.0), (1, 2, 1.0)],
        ))
        .unwrap();
        assert_eq!(c, 1);

        let (labels, c) = connected_components(&EdgeList::with_edges(
            4,
            vec![(0, 1, 1.0), (2, 3, 1.0)],
        ))
        .unwrap();
        assert_eq!(c, 2);
        assert_eq!(labels, vec![0, 0, 1, 1]);

        let (_, c) = connected_components(&EdgeList::new(3)).unwrap();
        assert_eq!(c, 3);
    }

    #[test]
    fn component_count_on_laplacian_pattern() {
        assert_eq!(p3().component_count(), 1);
        let two = laplacian_from_edges(&EdgeList::with_edges(
            4,
            vec![(0, 1, 1.0), (2, 3, 1.0)],
        ))
        .unwrap();
        assert_eq!(two.component_count(), 2);
    }

    #[test]
    fn edge_count_excludes_diagonal() {
        assert_eq!(p3().edge_count(), 2);
    }
}
