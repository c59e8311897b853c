//! Result serialization: JSON and CSV vector dumps, partition labels, and
//! the benchmark CSV.

use crate::bench::{BenchRecord, FitSummary};
use crate::error::GraphIoError;
use cmg::FiedlerResult;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

/// JSON object with keys `lambda2`, `residual_norm`, `n`, `levels`,
/// `setup_seconds`, `solve_seconds`, `vector`; or a CSV with one
/// `index,value` line per vertex under a `# lambda2 = ...` comment.
pub fn write_result(
    result: &FiedlerResult,
    format: OutputFormat,
    path: &Path,
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        OutputFormat::Json => {
            let value = serde_json::json!({
                "lambda2": result.lambda2,
                "residual_norm": result.residual_norm,
                "n": result.vector.len(),
                "levels": result.per_level.len(),
                "setup_seconds": result.setup_seconds,
                "solve_seconds": result.solve_seconds,
                "vector": result.vector,
            });
            serde_json::to_writer_pretty(&mut out, &value)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "# lambda2 = {}", result.lambda2)?;
            writeln!(out, "index,value")?;
            for (i, v) in result.vector.iter().enumerate() {
                writeln!(out, "{i},{v}")?;
            }
        }
    }
    Ok(())
}

/// Reads back a CSV produced by [`write_result`].
pub fn read_csv_vector(path: &Path) -> Result<Vec<f64>, GraphIoError> {
    let reader = BufReader::new(File::open(path)?);
    let mut values = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t == "index,value" {
            continue;
        }
        let lineno = idx + 1;
        let (i, v) = t
            .split_once(',')
            .ok_or_else(|| GraphIoError::malformed(lineno, "expected index,value"))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| GraphIoError::malformed(lineno, "cannot parse index"))?;
        if i != values.len() {
            return Err(GraphIoError::malformed(lineno, "indices out of order"));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| GraphIoError::malformed(lineno, "cannot parse value"))?;
        values.push(v);
    }
    Ok(values)
}

/// Per-vertex 0/1 labels as `index,part` lines.
pub fn write_partition(path: &Path, labels: &[u8], lambda2: f64) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# lambda2 = {lambda2}")?;
    writeln!(out, "index,part")?;
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "{i},{l}")?;
    }
    Ok(())
}

/// Benchmark table plus a trailing fit comment line.
pub fn write_bench_csv(
    path: &Path,
    records: &[BenchRecord],
    fit: &FitSummary,
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "n,edges,setup_seconds,solve_seconds,total_seconds,lambda2,seed")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n, r.edges, r.setup_seconds, r.solve_seconds, r.total_seconds, r.lambda2, r.seed
        )?;
    }
    writeln!(out, "# fit: slope={} intercept={} r={}", fit.slope, fit.intercept, fit.r)?;
    Ok(())
}
