//! Scaling benchmark: solve on square grids of growing size and fit the
//! runtime trend. A log-log least-squares slope near 1 together with a
//! time-versus-size Pearson correlation near 1 indicates linear complexity.

use crate::error::AppError;
use crate::gen::grid_graph;
use cmg::{laplacian_from_edges, solve_fiedler, SolverConfig};

/// One benchmark row: medians over the repetitions at a single grid size.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub n: usize,
    pub edges: usize,
    pub setup_seconds: f64,
    pub solve_seconds: f64,
    pub total_seconds: f64,
    pub lambda2: f64,
    pub seed: u64,
}

/// Least-squares fit of `log(total_seconds)` against `log(n)`, plus the
/// Pearson correlation of raw time against raw size.
#[derive(Debug, Clone)]
pub struct FitSummary {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
}

pub fn fit_records(records: &[BenchRecord]) -> FitSummary {
    let xs: Vec<f64> = records.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.total_seconds.max(1e-9).ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let ns: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let ts: Vec<f64> = records.iter().map(|r| r.total_seconds).collect();
    FitSummary { slope, intercept, r: pearson(&ns, &ts) }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    sxy / (sxx.sqrt() * syy.sqrt())
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let k = samples.len();
    if k % 2 == 1 {
        samples[k / 2]
    } else {
        0.5 * (samples[k / 2 - 1] + samples[k / 2])
    }
}

/// Generates each grid, solves it `reps` times, and reports the medians
/// together with the runtime fit.
pub fn run_bench(
    sizes: &[usize],
    reps: usize,
    cfg: &SolverConfig,
) -> Result<(Vec<BenchRecord>, FitSummary), AppError> {
    if sizes.is_empty() {
        return Err(AppError::Solver(cmg::Error::InvalidConfig {
            reason: "benchmark needs at least one grid size".into(),
        }));
    }
    let reps = reps.max(1);
    let mut records = Vec::with_capacity(sizes.len());
    for &m in sizes {
        let graph = grid_graph(m).map_err(|source| AppError::Bench { m, source })?;
        let lap =
            laplacian_from_edges(&graph).map_err(|source| AppError::Bench { m, source })?;
        let mut setup = Vec::with_capacity(reps);
        let mut solve = Vec::with_capacity(reps);
        let mut total = Vec::with_capacity(reps);
        let mut lambda2 = 0.0;
        for _ in 0..reps {
            let res = solve_fiedler(&lap, cfg).map_err(|source| AppError::Bench { m, source })?;
            setup.push(res.setup_seconds);
            solve.push(res.solve_seconds);
            total.push(res.setup_seconds + res.solve_seconds);
            lambda2 = res.lambda2;
        }
        records.push(BenchRecord {
            n: graph.n,
            edges: graph.edges.len(),
            setup_seconds: median(&mut setup),
            solve_seconds: median(&mut solve),
            total_seconds: median(&mut total),
            lambda2,
            seed: cfg.seed,
        });
    }
    let fit = fit_records(&records);
    Ok((records, fit))
}
