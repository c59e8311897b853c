//! Synthetic graph generation for the scaling benchmark.

use cmg::{EdgeList, Error, Result};

/// `m x m` four-neighbor lattice with unit weights: `m^2` vertices and
/// `2 m (m - 1)` edges.
pub fn grid_graph(m: usize) -> Result<EdgeList> {
    if m < 2 {
        return Err(Error::InvalidConfig { reason: format!("grid side must be >= 2, got {m}") });
    }
    let n = m * m;
    let mut edges = Vec::with_capacity(2 * m * (m - 1));
    for r in 0..m {
        for c in 0..m {
            let v = r * m + c;
            if c + 1 < m {
                edges.push((v, v + 1, 1.0));
            }
            if r + 1 < m {
                edges.push((v, v + m, 1.0));
            }
        }
    }
    Ok(EdgeList::with_edges(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_grid_is_a_cycle() {
        let g = grid_graph(2).unwrap();
        assert_eq!(g.n, 4);
        assert_eq!(g.edges.len(), 4);
    }

    #[test]
    fn edge_counts() {
        let g = grid_graph(3).unwrap();
        assert_eq!(g.n, 9);
        assert_eq!(g.edges.len(), 12);

        let g = grid_graph(100).unwrap();
        assert_eq!(g.n, 10_000);
        assert_eq!(g.edges.len(), 19_800);
    }

    #[test]
    fn too_small_rejected() {
        assert!(grid_graph(1).is_err());
    }
}
