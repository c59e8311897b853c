//! Cascadic multigrid solver for the Fiedler vector and algebraic
//! connectivity of weighted undirected graphs.
//!
//! The pipeline coarsens the graph Laplacian with heavy edge coarsening,
//! solves the eigenproblem on the coarsest level by deflated power
//! iteration on a shifted matrix, then walks back up the hierarchy:
//! piecewise-constant prolongation followed by Gauss-Seidel eigenvector
//! smoothing at every level. One pass over the hierarchy, no downward
//! correction cycles.
//!
//! ```
//! use cmg::{laplacian_from_edges, solve_fiedler, EdgeList, SolverConfig};
//!
//! // path graph 0 - 1 - 2
//! let graph = EdgeList::with_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)]);
//! let lap = laplacian_from_edges(&graph).unwrap();
//! let result = solve_fiedler(&lap, &SolverConfig::default()).unwrap();
//! assert!((result.lambda2 - 1.0).abs() < 1e-4);
//! ```

pub mod cascadic;
pub mod coarsen;
pub mod error;
pub mod oracle;
pub mod smooth;
pub mod sparse;

pub use cascadic::{
    bisect_by_fiedler, coarse_solver_by_name, coarse_solvers, coarsest_solve, setup_hierarchy,
    solve_fiedler, CoarseSolver, FiedlerResult, GaussSeidelCoarse, Hierarchy,
    ShiftedPowerIteration, SolverConfig,
};
pub use coarsen::{
    build_interpolation, hec_coarsen, hec_coarsen_with_permutation, AggregationMap,
    InterpolationOperator,
};
pub use error::{Error, Result};
pub use oracle::{fiedler_oracle, jacobi_eigen_all, DenseSymmetric};
pub use smooth::{
    convergence_check, deflate_constant, gauss_seidel_solve, normalize_signed, smooth_eigen,
    SmootherReport,
};
pub use sparse::{
    connected_components, galerkin_product, laplacian_from_edges, rayleigh_quotient, EdgeList,
    GraphLaplacian, SparseMatrix,
};
