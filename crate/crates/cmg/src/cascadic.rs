//! The full multilevel pipeline: hierarchy setup by repeated heavy edge
//! coarsening, an eigensolve on the coarsest level, and cascadic refinement
//! (prolongate, deflate, smooth) back up to the original graph.

use crate::coarsen::{build_interpolation, hec_coarsen, InterpolationOperator};
use crate::error::{Error, Result};
use crate::smooth::{
    convergence_check, deflate_constant, dot, norm2, normalize_signed, smooth_eigen,
    SmootherReport,
};
use crate::sparse::{galerkin_product, rayleigh_quotient, GraphLaplacian};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// The coarsest eigensolve runs essentially to stagnation: at `coarsest_size`
/// vertices it is practically free, and any angular error left at the bottom
/// of the hierarchy is inherited by every finer level.
const COARSE_TOL: f64 = 1e-13;
const COARSE_MAX_ITER: usize = 10_000;

/// Solver parameters. `Default` gives the standard configuration.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Coarsening stops once a level has at most this many vertices.
    pub coarsest_size: usize,
    /// Smoothing stops when successive iterates align within `1 - tol`.
    pub tol: f64,
    pub max_sweeps_per_level: usize,
    pub max_sweeps_finest: usize,
    pub seed: u64,
    /// Cap on the number of hierarchy levels.
    pub max_levels: usize,
    /// Name of the coarsest-level strategy (see [`coarse_solvers`]).
    pub coarse_solver: String,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            coarsest_size: 25,
            tol: 1e-10,
            max_sweeps_per_level: 50,
            max_sweeps_finest: 500,
            seed: 0,
            max_levels: 50,
            coarse_solver: "power".into(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarsest_size < 2 {
            return Err(Error::InvalidConfig { reason: "coarsest_size must be >= 2".into() });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig { reason: "tol must be > 0".into() });
        }
        if self.max_sweeps_per_level == 0 || self.max_sweeps_finest == 0 {
            return Err(Error::InvalidConfig { reason: "sweep caps must be >= 1".into() });
        }
        if self.max_levels == 0 {
            return Err(Error::InvalidConfig { reason: "max_levels must be >= 1".into() });
        }
        Ok(())
    }
}

/// Laplacians `L^0..L^J` (finest first) and the interpolation operators
/// between consecutive levels.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    levels: Vec<GraphLaplacian>,
    interps: Vec<InterpolationOperator>,
}

impl Hierarchy {
    pub fn levels(&self) -> &[GraphLaplacian] {
        &self.levels
    }

    pub fn interps(&self) -> &[InterpolationOperator] {
        &self.interps
    }

    /// Number of coarsening steps (`J`); the hierarchy has `J + 1` levels.
    pub fn depth(&self) -> usize {
        self.interps.len()
    }

    pub fn finest(&self) -> &GraphLaplacian {
        &self.levels[0]
    }

    pub fn coarsest(&self) -> &GraphLaplacian {
        self.levels.last().unwrap()
    }
}

/// Output of [`solve_fiedler`].
#[derive(Debug, Clone)]
pub struct FiedlerResult {
    /// Unit-norm approximate Fiedler vector, orthogonal to the constant.
    pub vector: Vec<f64>,
    /// Rayleigh quotient of `vector` on the finest Laplacian.
    pub lambda2: f64,
    /// `|| L v - lambda2 v ||_2` on the finest level.
    pub residual_norm: f64,
    /// Reports from the coarsest solve (first entry) and each refinement
    /// level, coarse to fine.
    pub per_level: Vec<SmootherReport>,
    pub setup_seconds: f64,
    pub solve_seconds: f64,
}

/// Builds the hierarchy by repeated heavy edge coarsening and Galerkin
/// products until the coarsest level is small enough.
///
/// Stops early when coarsening stalls (less than 5% reduction) or the
/// aggregation collapses below two vertices.
pub fn setup_hierarchy(
    lap: &GraphLaplacian,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Hierarchy> {
    cfg.validate()?;
    if lap.n() < 2 {
        return Err(Error::GraphTooSmall { n: lap.n() });
    }
    let components = lap.component_count();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    let mut levels = vec![lap.clone()];
    let mut interps = Vec::new();
    while levels.last().unwrap().n() > cfg.coarsest_size && levels.len() < cfg.max_levels {
        let current = levels.last().unwrap();
        let map = hec_coarsen(current, rng.gen());
        if map.count() < 2 || (map.count() as f64) > 0.95 * current.n() as f64 {
            break;
        }
        let interp = build_interpolation(&map)?;
        let coarse = galerkin_product(current, &interp)?;
        interps.push(interp);
        levels.push(coarse);
    }
    Ok(Hierarchy { levels, interps })
}

/// Approximates the Fiedler vector of a small Laplacian by power iteration
/// on the shifted matrix `sigma I - L` with `sigma = 2 max_i L(i,i)`
/// (a Gershgorin bound keeping the shifted matrix positive semidefinite),
/// deflating the constant component and renormalizing every step.
pub fn coarsest_solve(
    lap: &GraphLaplacian,
    rng: &mut dyn RngCore,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SmootherReport)> {
    let n = lap.n();
    if n < 2 {
        return Err(Error::GraphTooSmall { n });
    }
    let sigma = 2.0 * lap.max_degree();
    let mut report = SmootherReport { sweeps_used: 0, converged: false, last_alignment: 0.0 };

    let mut reseeds = 0;
    let mut u = loop {
        let start = random_vector(rng, n);
        match normalized_deflate(&start) {
            Ok(u) => break u,
            Err(_) if reseeds == 0 => reseeds += 1,
            Err(e) => return Err(e),
        }
    };

    let mut scratch = vec![0.0; n];
    while report.sweeps_used < max_iter {
        lap.matrix().matvec_into(&u, &mut scratch);
        let shifted: Vec<f64> = u
            .iter()
            .zip(&scratch)
            .map(|(&ui, &lu)| sigma * ui - lu)
            .collect();
        let next = match normalized_deflate(&shifted) {
            Ok(v) => v,
            Err(Error::IterateCollapsed) if reseeds == 0 => {
                reseeds += 1;
                let start = random_vector(rng, n);
                normalized_deflate(&start)?
            }
            Err(e) => return Err(e),
        };
        report.sweeps_used += 1;
        report.last_alignment = dot(&next, &u);
        let done = convergence_check(&next, &u, tol);
        u = next;
        if done {
            report.converged = true;
            break;
        }
    }
    Ok((u, report))
}

fn normalized_deflate(y: &[f64]) -> Result<Vec<f64>> {
    let d = deflate_constant(y);
    if norm2(&d) <= 1e-13 * norm2(y) {
        return Err(Error::IterateCollapsed);
    }
    normalize_signed(&d)
}

fn random_vector(rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// A strategy for the eigensolve at the bottom of the hierarchy.
pub trait CoarseSolver: Sync {
    fn name(&self) -> &'static str;
    fn solve(
        &self,
        lap: &GraphLaplacian,
        rng: &mut dyn RngCore,
        tol: f64,
        max_iter: usize,
    ) -> Result<(Vec<f64>, SmootherReport)>;
}

/// Deflated power iteration on the shifted matrix (the default).
pub struct ShiftedPowerIteration;

impl CoarseSolver for ShiftedPowerIteration {
    fn name(&self) -> &'static str {
        "power"
    }

    fn solve(
        &self,
        lap: &GraphLaplacian,
        rng: &mut dyn RngCore,
        tol: f64,
        max_iter: usize,
    ) -> Result<(Vec<f64>, SmootherReport)> {
        coarsest_solve(lap, rng, tol, max_iter)
    }
}

/// Gauss-Seidel smoothing from a random start, the literal reading of the
/// coarsest step of the multilevel scheme. Kept selectable for comparison.
pub struct GaussSeidelCoarse;

impl CoarseSolver for GaussSeidelCoarse {
    fn name(&self) -> &'static str {
        "gauss-seidel"
    }

    fn solve(
        &self,
        lap: &GraphLaplacian,
        rng: &mut dyn RngCore,
        tol: f64,
        max_iter: usize,
    ) -> Result<(Vec<f64>, SmootherReport)> {
        let start = random_vector(rng, lap.n());
        match smooth_eigen(lap, &start, tol, max_iter) {
            Err(Error::IterateCollapsed) => {
                let retry = random_vector(rng, lap.n());
                smooth_eigen(lap, &retry, tol, max_iter)
            }
            other => other,
        }
    }
}

/// The registered coarse-level strategies.
pub fn coarse_solvers() -> &'static [&'static dyn CoarseSolver] {
    &[&ShiftedPowerIteration, &GaussSeidelCoarse]
}

/// Looks a strategy up by its registered name.
pub fn coarse_solver_by_name(name: &str) -> Result<&'static dyn CoarseSolver> {
    coarse_solvers()
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::UnknownCoarseSolver {
            name: name.to_string(),
            available: coarse_solvers()
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(", "),
        })
}

/// Computes the Fiedler vector and algebraic connectivity of a connected
/// weighted graph Laplacian.
///
/// Runs the full pipeline: hierarchy setup, coarsest-level eigensolve, then
/// for each finer level piecewise-constant prolongation, deflation, and
/// Gauss-Seidel eigenvector smoothing. The returned `lambda2` is the
/// Rayleigh quotient of the final iterate on the original Laplacian.
pub fn solve_fiedler(lap: &GraphLaplacian, cfg: &SolverConfig) -> Result<FiedlerResult> {
    cfg.validate()?;
    let strategy = coarse_solver_by_name(&cfg.coarse_solver)?;

    let setup_start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let hierarchy = setup_hierarchy(lap, cfg, &mut rng)?;
    let setup_seconds = setup_start.elapsed().as_secs_f64();

    let solve_start = Instant::now();
    let mut per_level = Vec::with_capacity(hierarchy.depth() + 1);
    let (mut y, coarse_report) =
        strategy.solve(hierarchy.coarsest(), &mut rng, COARSE_TOL, COARSE_MAX_ITER)?;
    per_level.push(coarse_report);

    for j in (0..hierarchy.depth()).rev() {
        y = hierarchy.interps()[j].prolongate(&y)?;
        let cap = if j == 0 { cfg.max_sweeps_finest } else { cfg.max_sweeps_per_level };
        let level = &hierarchy.levels()[j];
        let (smoothed, report) = match smooth_eigen(level, &y, cfg.tol, cap) {
            Err(Error::IterateCollapsed) => {
                let retry = random_vector(&mut rng, level.n());
                smooth_eigen(level, &retry, cfg.tol, cap)?
            }
            other => other?,
        };
        y = smoothed;
        per_level.push(report);
    }

    let lambda2 = rayleigh_quotient(hierarchy.finest(), &y)?;
    let lv = hierarchy.finest().matrix().matvec(&y)?;
    let residual_norm = lv
        .iter()
        .zip(&y)
        .map(|(a, v)| (a - lambda2 * v) * (a - lambda2 * v))
        .sum::<f64>()
        .sqrt();
    let solve_seconds = solve_start.elapsed().as_secs_f64();

    Ok(FiedlerResult {
        vector: y,
        lambda2,
        residual_norm,
        per_level,
        setup_seconds,
        solve_seconds,
    })
}

/// Splits vertices into two balanced parts at the median of the Fiedler
/// vector: the lower half (ties broken by index) gets label 0, the upper
/// half label 1. Part sizes differ by at most one.
pub fn bisect_by_fiedler(v: &[f64]) -> Vec<u8> {
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    let mut labels = vec![0u8; n];
    for &i in &order[n / 2..] {
        labels[i] = 1;
    }
    labels
}
