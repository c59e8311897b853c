//! Graph ingestion: Matrix Market coordinate files and plain edge lists.
//!
//! Matrix Market entries are mapped to edge weights by absolute value
//! (collection matrices are stiffness-like with signed entries), diagonal
//! entries are dropped, and explicit zeros are ignored. `symmetric` files
//! contribute one edge per stored entry; `general` files must store both
//! triangles and are accepted when numerically symmetric.

use crate::error::GraphIoError;
use cmg::EdgeList;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Reads either format, deciding by the `%%MatrixMarket` banner.
pub fn load_graph(path: &Path) -> Result<EdgeList, GraphIoError> {
    let mut first = String::new();
    BufReader::new(File::open(path)?).read_line(&mut first)?;
    if first.trim_start().starts_with("%%MatrixMarket") {
        read_matrix_market(path)
    } else {
        read_edge_list(path)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Pattern,
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    Symmetric,
    General,
}

/// Parses a Matrix Market coordinate file into an edge list.
pub fn read_matrix_market(path: &Path) -> Result<EdgeList, GraphIoError> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| GraphIoError::malformed(1, "empty file"))?;
    let header = header?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first() != Some(&"%%MatrixMarket") {
        return Err(GraphIoError::malformed(1, "missing %%MatrixMarket banner"));
    }
    if tokens.get(1) != Some(&"matrix") || tokens.get(2) != Some(&"coordinate") {
        return Err(GraphIoError::malformed(
            1,
            "only 'matrix coordinate' objects are supported",
        ));
    }
    let field = match tokens.get(3).copied() {
        Some("real") | Some("integer") => Field::Real,
        Some("pattern") => Field::Pattern,
        Some("complex") => return Err(GraphIoError::Complex { line: 1 }),
        other => {
            return Err(GraphIoError::malformed(
                1,
                format!("unsupported field '{}'", other.unwrap_or("")),
            ))
        }
    };
    let symmetry = match tokens.get(4).copied() {
        Some("symmetric") => Symmetry::Symmetric,
        Some("general") => Symmetry::General,
        other => {
            return Err(GraphIoError::malformed(
                1,
                format!(
                    "unsupported symmetry '{}' (need symmetric or general)",
                    other.unwrap_or("")
                ),
            ))
        }
    };

    // size line: first non-comment, non-blank line
    let (n, nnz) = loop {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| GraphIoError::malformed(1, "missing size line"))?;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let lineno = idx + 1;
        let mut it = t.split_whitespace();
        let rows: usize = parse_tok(it.next(), lineno, "rows")?;
        let cols: usize = parse_tok(it.next(), lineno, "cols")?;
        let nnz: usize = parse_tok(it.next(), lineno, "nnz")?;
        if rows != cols {
            return Err(GraphIoError::NotSquare { rows, cols });
        }
        break (rows, nnz);
    };

    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    // directional sums for general files, keyed by unordered pair:
    // (lower-triangle sum, upper-triangle sum)
    let mut dir: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    let mut seen = 0usize;
    for (idx, line) in lines {
        if seen == nnz {
            break;
        }
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let lineno = idx + 1;
        let mut it = t.split_whitespace();
        let i: usize = parse_tok(it.next(), lineno, "row index")?;
        let j: usize = parse_tok(it.next(), lineno, "column index")?;
        let v = match field {
            Field::Pattern => 1.0,
            Field::Real => parse_tok::<f64>(it.next(), lineno, "value")?,
        };
        if i == 0 || j == 0 || i > n || j > n {
            return Err(GraphIoError::malformed(
                lineno,
                format!("index ({i}, {j}) outside 1..={n}"),
            ));
        }
        seen += 1;
        let (i, j) = (i - 1, j - 1);
        if i == j {
            continue;
        }
        let w = v.abs();
        if w == 0.0 {
            continue;
        }
        match symmetry {
            Symmetry::Symmetric => edges.push((i.min(j), i.max(j), w)),
            Symmetry::General => {
                let slot = dir.entry((i.min(j), i.max(j))).or_insert((0.0, 0.0));
                if i > j {
                    slot.0 += w;
                } else {
                    slot.1 += w;
                }
            }
        }
    }
    if seen < nnz {
        return Err(GraphIoError::malformed(
            0,
            format!("expected {nnz} entries, found {seen}"),
        ));
    }

    if symmetry == Symmetry::General {
        for (&(i, j), &(lo, hi)) in &dir {
            let scale = lo.abs().max(hi.abs());
            if (lo - hi).abs() > 1e-8 * scale {
                return Err(GraphIoError::Asymmetric { i: i + 1, j: j + 1, delta: (lo - hi).abs() });
            }
            edges.push((i, j, 0.5 * (lo + hi)));
        }
    }
    Ok(EdgeList::with_edges(n, edges))
}

fn parse_tok<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphIoError> {
    tok.ok_or_else(|| GraphIoError::malformed(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| GraphIoError::malformed(line, format!("cannot parse {what}")))
}

/// Plain edge list: one `i j w` per line (0-based, `w` optional with
/// default 1), `#` comments. The vertex count is one past the largest index.
pub fn read_edge_list(path: &Path) -> Result<EdgeList, GraphIoError> {
    let reader = BufReader::new(File::open(path)?);
    let mut edges = Vec::new();
    let mut max_idx = None::<usize>;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let mut it = t.split_whitespace();
        let i: usize = parse_tok(it.next(), lineno, "source index")?;
        let j: usize = parse_tok(it.next(), lineno, "target index")?;
        let w: f64 = match it.next() {
            Some(tok) => tok
                .parse()
                .map_err(|_| GraphIoError::malformed(lineno, "cannot parse weight"))?,
            None => 1.0,
        };
        max_idx = Some(max_idx.map_or(i.max(j), |m| m.max(i).max(j)));
        if i == j {
            continue;
        }
        let w = w.abs();
        if w == 0.0 {
            continue;
        }
        edges.push((i.min(j), i.max(j), w));
    }
    let n = max_idx.map_or(0, |m| m + 1);
    Ok(EdgeList::with_edges(n, edges))
}

/// Writes an edge list as a symmetric real Matrix Market file (lower
/// triangle storage, one entry per edge).
pub fn write_matrix_market(path: &Path, graph: &EdgeList) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(File::create(path)?);
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", graph.n, graph.n, graph.edges.len())?;
    for &(i, j, w) in &graph.edges {
        writeln!(out, "{} {} {}", i.max(j) + 1, i.min(j) + 1, w)?;
    }
    Ok(())
}

/// Keeps only the largest connected component, relabelling the surviving
/// vertices to `0..k` in increasing original order. Returns the reduced
/// graph and the original index of each kept vertex.
pub fn largest_component(graph: &EdgeList) -> Result<(EdgeList, Vec<usize>), cmg::Error> {
    let (labels, count) = cmg::connected_components(graph)?;
    if count <= 1 {
        return Ok((graph.clone(), (0..graph.n).collect()));
    }
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        sizes[l] += 1;
    }
    let keep = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(l, _)| l)
        .unwrap();
    let mut new_index = vec![usize::MAX; graph.n];
    let mut kept = Vec::new();
    for v in 0..graph.n {
        if labels[v] == keep {
            new_index[v] = kept.len();
            kept.push(v);
        }
    }
    let edges = graph
        .edges
        .iter()
        .filter(|&&(i, j, _)| labels[i] == keep && labels[j] == keep)
        .map(|&(i, j, w)| (new_index[i], new_index[j], w))
        .collect();
    Ok((EdgeList::with_edges(kept.len(), edges), kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn pattern_symmetric_p3() {
        let f = write_tmp("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 2\n");
        let g = read_matrix_market(f.path()).unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, vec![(0, 1, 1.0), (1, 2, 1.0)]);
    }

    #[test]
    fn negative_value_maps_to_positive_weight() {
        let f = write_tmp("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 -2.5\n");
        let g = read_matrix_market(f.path()).unwrap();
        assert_eq!(g.edges, vec![(0, 1, 2.5)]);
    }

    #[test]
    fn diagonal_only_file_gives_empty_edge_list() {
        let f = write_tmp(
            "%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 4.0\n2 2 4.0\n3 3 4.0\n",
        );
        let g = read_matrix_market(f.path()).unwrap();
        assert_eq!(g.n, 3);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn malformed_header_rejected() {
        let f = write_tmp("%%NotMatrixMarket matrix coordinate real symmetric\n1 1 0\n");
        assert!(matches!(
            read_matrix_market(f.path()),
            Err(GraphIoError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn complex_field_rejected_with_line() {
        let f = write_tmp("%%MatrixMarket matrix coordinate complex symmetric\n1 1 0\n");
        assert!(matches!(
            read_matrix_market(f.path()),
            Err(GraphIoError::Complex { line: 1 })
        ));
    }

    #[test]
    fn non_square_rejected() {
        let f = write_tmp("%%MatrixMarket matrix coordinate real symmetric\n3 2 0\n");
        assert!(matches!(
            read_matrix_market(f.path()),
            Err(GraphIoError::NotSquare { rows: 3, cols: 2 })
        ));
    }

    #[test]
    fn out_of_range_index_reports_line() {
        let f = write_tmp("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n5 1 1.0\n");
        match read_matrix_market(f.path()) {
            Err(GraphIoError::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected malformed entry, got {other:?}"),
        }
    }

    #[test]
    fn general_requires_both_triangles_consistent() {
        let ok = write_tmp(
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 3.0\n2 1 3.0\n",
        );
        let g = read_matrix_market(ok.path()).unwrap();
        assert_eq!(g.edges, vec![(0, 1, 3.0)]);

        let bad = write_tmp(
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 3.0\n2 1 1.0\n",
        );
        assert!(matches!(
            read_matrix_market(bad.path()),
            Err(GraphIoError::Asymmetric { .. })
        ));

        let one_sided =
            write_tmp("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 3.0\n");
        assert!(matches!(
            read_matrix_market(one_sided.path()),
            Err(GraphIoError::Asymmetric { .. })
        ));
    }

    #[test]
    fn duplicate_entries_accumulate_via_laplacian() {
        let f = write_tmp(
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 1.0\n2 1 0.5\n",
        );
        let g = read_matrix_market(f.path()).unwrap();
        assert_eq!(g.edges.len(), 2);
        let lap = cmg::laplacian_from_edges(&g).unwrap();
        assert_eq!(lap.matrix().get(0, 1), -1.5);
    }

    #[test]
    fn edge_list_format() {
        let f = write_tmp("# a comment\n0 1 2.0\n1 2\n\n2 2 9.0\n");
        let g = read_edge_list(f.path()).unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, vec![(0, 1, 2.0), (1, 2, 1.0)]);
    }

    #[test]
    fn sniffing_dispatches() {
        let mm = write_tmp("%%MatrixMarket matrix coordinate pattern symmetric\n2 2 1\n2 1\n");
        assert_eq!(load_graph(mm.path()).unwrap().edges.len(), 1);
        let el = write_tmp("0 1 1.0\n");
        assert_eq!(load_graph(el.path()).unwrap().edges.len(), 1);
    }

    #[test]
    fn largest_component_filter() {
        let g = EdgeList::with_edges(6, vec![(0, 1, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 5, 2.0)]);
        let (sub, kept) = largest_component(&g).unwrap();
        assert_eq!(sub.n, 4);
        assert_eq!(kept, vec![2, 3, 4, 5]);
        assert_eq!(sub.edges, vec![(0, 1, 1.0), (1, 2, 1.0), (2, 3, 2.0)]);
    }
}
