//! Command line interface.
//!
//! Subcommands: `fiedler` (solve and print/emit the eigenpair), `partition`
//! (spectral bisection labels), `hierarchy` (coarsening level summary), and
//! `bench` (grid-graph scaling study).

use crate::bench::run_bench;
use crate::error::{exit_code, AppError};
use crate::mm::{largest_component, load_graph};
use crate::output::{write_bench_csv, write_partition, write_result, OutputFormat};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use cmg::{
    bisect_by_fiedler, laplacian_from_edges, setup_hierarchy, solve_fiedler, EdgeList,
    FiedlerResult, SolverConfig,
};
use rand_chacha_seed::seed_rng;
use std::path::PathBuf;

// rand_chacha is only needed to drive `setup_hierarchy` directly for the
// `hierarchy` subcommand; keep the dependency surface inside this shim.
mod rand_chacha_seed {
    pub use cmg::cascadic_rng::seed_rng;
}

#[derive(Parser)]
#[command(
    name = "cmg",
    version,
    about = "Fiedler vectors and algebraic connectivity via cascadic multigrid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SolverFlags {
    /// Alignment tolerance of the per-level smoother.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Coarsening stops at this many vertices.
    #[arg(long = "coarsest", default_value_t = 25)]
    coarsest: usize,

    /// Cap on smoothing sweeps (applies to every level including the finest).
    #[arg(long = "max-sweeps")]
    max_sweeps: Option<usize>,

    /// Seed for the coarsening permutations and starting vectors.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Solve on the largest connected component instead of rejecting
    /// disconnected input (vertices are relabelled to 0..k).
    #[arg(long = "largest-component")]
    largest_component: bool,

    /// Coarsest-level eigensolver: power | gauss-seidel.
    #[arg(long = "coarse-solver", default_value = "power")]
    coarse_solver: String,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig {
            tol: self.tol,
            coarsest_size: self.coarsest,
            seed: self.seed,
            coarse_solver: self.coarse_solver.clone(),
            ..SolverConfig::default()
        };
        if let Some(cap) = self.max_sweeps {
            cfg.max_sweeps_per_level = cap;
            cfg.max_sweeps_finest = cap;
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Fiedler vector and algebraic connectivity of a graph.
    Fiedler {
        /// Matrix Market file or plain edge list.
        file: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        /// Write the result to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format for --out.
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Bisect a graph at the median of its Fiedler vector.
    Partition {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        /// Write per-vertex 0/1 labels to this path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the coarsening hierarchy (per-level sizes and edge counts).
    Hierarchy {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Benchmark grid graphs of the given side lengths and fit the runtime.
    Bench {
        /// Grid side lengths, e.g. 100,200,300.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Repetitions per size (median timing is reported).
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Also write the records as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverFlags,
    },
}

/// Runs the CLI against explicit arguments and returns the process exit
/// code. `std::env::args` goes in from `main`; tests call this directly.
pub fn cli_main(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load_input(path: &PathBuf, flags: &SolverFlags) -> Result<EdgeList, AppError> {
    let graph = load_graph(path)?;
    if flags.largest_component {
        let (sub, kept) = largest_component(&graph)?;
        if sub.n != graph.n {
            eprintln!(
                "largest-component: keeping {} of {} vertices",
                sub.n, graph.n
            );
        }
        let _ = kept;
        Ok(sub)
    } else {
        Ok(graph)
    }
}

fn solve(graph: &EdgeList, cfg: &SolverConfig) -> Result<FiedlerResult, AppError> {
    let lap = laplacian_from_edges(graph)?;
    Ok(solve_fiedler(&lap, cfg)?)
}

fn print_result(res: &FiedlerResult) {
    println!("n = {}", res.vector.len());
    println!("lambda2 = {:.12e}", res.lambda2);
    println!("residual_norm = {:.6e}", res.residual_norm);
    println!("levels = {}", res.per_level.len());
    println!("setup_seconds = {:.6}", res.setup_seconds);
    println!("solve_seconds = {:.6}", res.solve_seconds);
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Fiedler { file, solver, out, format } => {
            let graph = load_input(&file, &solver)?;
            let res = solve(&graph, &solver.config())?;
            print_result(&res);
            if let Some(path) = out {
                write_result(&res, format, &path).map_err(AppError::Output)?;
            }
            Ok(())
        }
        Command::Partition { file, solver, out } => {
            let graph = load_input(&file, &solver)?;
            let res = solve(&graph, &solver.config())?;
            let labels = bisect_by_fiedler(&res.vector);
            write_partition(&out, &labels, res.lambda2).map_err(AppError::Output)?;
            let ones = labels.iter().filter(|&&l| l == 1).count();
            println!("lambda2 = {:.12e}", res.lambda2);
            println!("parts = {} / {}", labels.len() - ones, ones);
            Ok(())
        }
        Command::Hierarchy { file, solver } => {
            let graph = load_input(&file, &solver)?;
            let cfg = solver.config();
            let lap = laplacian_from_edges(&graph)?;
            let mut rng = seed_rng(cfg.seed);
            let hierarchy = setup_hierarchy(&lap, &cfg, &mut rng)?;
            for (i, level) in hierarchy.levels().iter().enumerate() {
                println!("level {i}: n = {}, edges = {}", level.n(), level.edge_count());
            }
            Ok(())
        }
        Command::Bench { sizes, reps, csv, solver } => {
            let cfg = solver.config();
            let (records, fit) = run_bench(&sizes, reps, &cfg)?;
            println!("n,edges,setup_seconds,solve_seconds,total_seconds,lambda2,seed");
            for r in &records {
                println!(
                    "{},{},{},{},{},{},{}",
                    r.n, r.edges, r.setup_seconds, r.solve_seconds, r.total_seconds, r.lambda2,
                    r.seed
                );
            }
            println!("# fit: slope={} intercept={} r={}", fit.slope, fit.intercept, fit.r);
            if let Some(path) = csv {
                write_bench_csv(&path, &records, &fit).map_err(AppError::Output)?;
            }
            Ok(())
        }
    }
}
