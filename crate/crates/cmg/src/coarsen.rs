//! Heavy edge coarsening: aggregate each vertex with the neighbor sharing
//! its heaviest incident edge, and build the 0/1 interpolation operator the
//! aggregation induces.

use crate::error::{Error, Result};
use crate::sparse::{GraphLaplacian, SparseMatrix};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Assignment of each fine vertex to a coarse aggregate (ids `0..count`).
#[derive(Debug, Clone, PartialEq)]
pub struct AggregationMap {
    assignments: Vec<usize>,
    count: usize,
    permutation_seed: Option<u64>,
}

impl AggregationMap {
    /// Builds a map from explicit per-vertex aggregate ids. The aggregate
    /// count is one past the largest id; every id up to it must be used.
    pub fn new(assignments: Vec<usize>) -> Result<Self> {
        let count = assignments.iter().max().map_or(0, |&m| m + 1);
        let map = AggregationMap { assignments, count, permutation_seed: None };
        map.check_invariants()?;
        Ok(map)
    }

    /// Aggregate id of each fine vertex.
    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    /// Number of aggregates.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn n_fine(&self) -> usize {
        self.assignments.len()
    }

    /// Seed of the visiting permutation, if one was drawn.
    pub fn permutation_seed(&self) -> Option<u64> {
        self.permutation_seed
    }

    /// Number of fine vertices in each aggregate.
    pub fn aggregate_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.count];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn check_invariants(&self) -> Result<()> {
        let sizes = self.aggregate_sizes();
        for &a in &self.assignments {
            if a >= self.count {
                return Err(Error::AggregateOutOfRange { index: a, count: self.count });
            }
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidConfig { reason: "empty aggregate".into() });
        }
        Ok(())
    }
}

/// Heavy edge coarsening with a seeded random visiting order.
///
/// Vertices are visited in a Fisher-Yates permutation of the given seed.
/// Each unassigned vertex `v` finds the minimum entry of column `v` of the
/// Laplacian (the most negative off-diagonal, i.e. the heaviest incident
/// edge). If that neighbor is unassigned the two form a new aggregate,
/// otherwise `v` joins the neighbor's aggregate. An isolated vertex has an
/// empty column and becomes a singleton.
pub fn hec_coarsen(lap: &GraphLaplacian, seed: u64) -> AggregationMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..lap.n()).collect();
    perm.shuffle(&mut rng);
    let mut map = hec_with_order(lap, &perm);
    map.permutation_seed = Some(seed);
    map
}

/// Heavy edge coarsening with an explicit visiting permutation.
pub fn hec_coarsen_with_permutation(lap: &GraphLaplacian, perm: &[usize]) -> Result<AggregationMap> {
    let n = lap.n();
    if perm.len() != n {
        return Err(Error::NotAPermutation { len: perm.len() });
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n || seen[v] {
            return Err(Error::NotAPermutation { len: n });
        }
        seen[v] = true;
    }
    Ok(hec_with_order(lap, perm))
}

fn hec_with_order(lap: &GraphLaplacian, perm: &[usize]) -> AggregationMap {
    const UNASSIGNED: usize = usize::MAX;
    let n = lap.n();
    let mut q = vec![UNASSIGNED; n];
    let mut count = 0usize;
    for &v in perm {
        if q[v] != UNASSIGNED {
            continue;
        }
        // argmin over the stored entries of column v (== row v by symmetry);
        // ascending scan with strict < gives the lowest-index tie-break
        let (cols, vals) = lap.matrix().row(v);
        let mut m = v;
        let mut best = f64::INFINITY;
        for (&j, &val) in cols.iter().zip(vals) {
            if val < best {
                best = val;
                m = j;
            }
        }
        if q[m] == UNASSIGNED {
            q[m] = count;
            q[v] = count;
            count += 1;
        } else {
            q[v] = q[m];
        }
    }
    AggregationMap { assignments: q, count, permutation_seed: None }
}

/// The `count x n_fine` 0/1 operator with a unit entry at `(q(i), i)` for
/// each fine vertex `i`. Its transpose performs piecewise-constant
/// prolongation of coarse vectors.
#[derive(Debug, Clone)]
pub struct InterpolationOperator {
    aggregation: AggregationMap,
}

impl InterpolationOperator {
    pub fn aggregation(&self) -> &AggregationMap {
        &self.aggregation
    }

    pub fn n_fine(&self) -> usize {
        self.aggregation.n_fine()
    }

    pub fn n_coarse(&self) -> usize {
        self.aggregation.count()
    }

    /// Materializes the operator as a sparse matrix (one unit entry per column).
    pub fn to_sparse(&self) -> SparseMatrix {
        let q = self.aggregation.assignments();
        let c = self.n_coarse();
        let mut by_aggregate: Vec<Vec<usize>> = vec![Vec::new(); c];
        for (i, &a) in q.iter().enumerate() {
            by_aggregate[a].push(i);
        }
        let entries = by_aggregate
            .into_iter()
            .enumerate()
            .flat_map(|(a, members)| members.into_iter().map(move |i| (a, i, 1.0)));
        SparseMatrix::from_sorted_entries(c, self.n_fine(), entries)
            .expect("aggregation map validated at construction")
    }

    /// Applies the transpose: fine vertex `i` receives `y_coarse[q(i)]`.
    pub fn prolongate(&self, y_coarse: &[f64]) -> Result<Vec<f64>> {
        if y_coarse.len() != self.n_coarse() {
            return Err(Error::DimensionMismatch {
                expected: self.n_coarse(),
                found: y_coarse.len(),
            });
        }
        Ok(self.aggregation.assignments().iter().map(|&a| y_coarse[a]).collect())
    }

    /// Applies the operator itself: coarse entry `a` sums the fine entries
    /// of aggregate `a`.
    pub fn restrict(&self, x_fine: &[f64]) -> Result<Vec<f64>> {
        if x_fine.len() != self.n_fine() {
            return Err(Error::DimensionMismatch {
                expected: self.n_fine(),
                found: x_fine.len(),
            });
        }
        let mut out = vec![0.0; self.n_coarse()];
        for (i, &a) in self.aggregation.assignments().iter().enumerate() {
            out[a] += x_fine[i];
        }
        Ok(out)
    }
}

/// Wraps a validated aggregation map as an interpolation operator.
pub fn build_interpolation(map: &AggregationMap) -> Result<InterpolationOperator> {
    map.check_invariants()?;
    Ok(InterpolationOperator { aggregation: map.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::{laplacian_from_edges, EdgeList};

    fn p4_weighted() -> GraphLaplacian {
        laplacian_from_edges(&EdgeList::with_edges(
            4,
            vec![(0, 1, 3.0), (1, 2, 1.0), (2, 3, 3.0)],
        ))
        .unwrap()
    }

    #[test]
    fn p4_forced_permutation_trace() {
        // visiting order 1, 0, 2, 3: vertex 1 merges with 0 (edge weight 3),
        // then vertex 2 merges with 3
        let map = hec_coarsen_with_permutation(&p4_weighted(), &[1, 0, 2, 3]).unwrap();
        assert_eq!(map.assignments(), &[0, 0, 1, 1]);
        assert_eq!(map.count(), 2);
    }

    #[test]
    fn single_vertex_singleton() {
        let lap = laplacian_from_edges(&EdgeList::new(1)).unwrap();
        let map = hec_coarsen(&lap, 0);
        assert_eq!(map.assignments(), &[0]);
        assert_eq!(map.count(), 1);
    }

    #[test]
    fn p3_chain_join_collapses() {
        let lap = laplacian_from_edges(&EdgeList::with_edges(
            3,
            vec![(0, 1, 1.0), (1, 2, 1.0)],
        ))
        .unwrap();
        let map = hec_coarsen_with_permutation(&lap, &[0, 1, 2]).unwrap();
        assert_eq!(map.assignments(), &[0, 0, 0]);
        assert_eq!(map.count(), 1);
    }

    #[test]
    fn isolated_vertex_becomes_singleton() {
        let lap = laplacian_from_edges(&EdgeList::with_edges(
            3,
            vec![(0, 1, 1.0)],
        ))
        .unwrap();
        let map = hec_coarsen_with_permutation(&lap, &[2, 0, 1]).unwrap();
        assert_eq!(map.count(), 2);
        assert_eq!(map.assignments()[2], 0);
        assert_eq!(map.assignments()[0], map.assignments()[1]);
    }

    #[test]
    fn same_seed_same_aggregation() {
        let lap = p4_weighted();
        assert_eq!(hec_coarsen(&lap, 7), hec_coarsen(&lap, 7));
    }

    #[test]
    fn bad_permutation_rejected() {
        let lap = p4_weighted();
        assert!(hec_coarsen_with_permutation(&lap, &[0, 0, 1, 2]).is_err());
        assert!(hec_coarsen_with_permutation(&lap, &[0, 1]).is_err());
    }

    #[test]
    fn interpolation_rows() {
        let map = hec_coarsen_with_permutation(&p4_weighted(), &[1, 0, 2, 3]).unwrap();
        let p = build_interpolation(&map).unwrap();
        let m = p.to_sparse();
        assert_eq!(m.n_rows(), 2);
        assert_eq!(m.n_cols(), 4);
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0, 1.0]).unwrap(), vec![2.0, 2.0]);
        assert_eq!(m.get(0, 0), 1.0);
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 2), 1.0);
        assert_eq!(m.get(1, 3), 1.0);
    }

    #[test]
    fn identity_interpolation() {
        let lap = laplacian_from_edges(&EdgeList::with_edges(
            3,
            vec![(0, 1, 1.0), (1, 2, 1.0)],
        ))
        .unwrap();
        // every vertex its own aggregate: no merges happen only on an empty
        // graph, so construct the map directly
        let map = AggregationMap {
            assignments: vec![0, 1, 2],
            count: 3,
            permutation_seed: None,
        };
        let p = build_interpolation(&map).unwrap();
        let m = p.to_sparse();
        for i in 0..3 {
            assert_eq!(m.get(i, i), 1.0);
        }
        assert_eq!(m.nnz(), 3);
        let y = p.prolongate(&[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(y, vec![4.0, 5.0, 6.0]);
        let _ = lap;
    }

    #[test]
    fn prolongate_examples() {
        let map = AggregationMap {
            assignments: vec![0, 0, 1, 1],
            count: 2,
            permutation_seed: None,
        };
        let p = build_interpolation(&map).unwrap();
        assert_eq!(p.prolongate(&[7.0, -2.0]).unwrap(), vec![7.0, 7.0, -2.0, -2.0]);
        assert!(p.prolongate(&[1.0]).is_err());

        let all = AggregationMap {
            assignments: vec![0, 0, 0],
            count: 1,
            permutation_seed: None,
        };
        let p = build_interpolation(&all).unwrap();
        assert_eq!(p.prolongate(&[5.0]).unwrap(), vec![5.0, 5.0, 5.0]);
    }
}
