//! Granular fuzzy arithmetic and transforms.
//!
//! The crate represents fuzzy numbers as sampled horizontal membership
//! grids indexed by alpha level and an RDM variable, and builds on that
//! representation in layers:
//!
//! - [`granular`]: triangular fuzzy numbers, grids, pointwise arithmetic,
//!   alpha-cut recovery, and the granular metric;
//! - [`partition`]: uniform Ruspini partitions with triangular basic
//!   functions and the quadrature rules used against them;
//! - [`ftransform`]: direct and inverse transforms of crisp and fuzzy
//!   functions, modulus-of-continuity estimates, and approximation-bound
//!   checks;
//! - [`ode`]: per-slice fuzzy initial-value-problem solvers (transform
//!   based mid-point scheme, forward Euler, and a fourth-order reference);
//! - [`model`]: the two-prey/one-predator system with closed-form
//!   equilibria, eigenvalue stability analysis, and a Lyapunov check;
//! - [`config`]/[`cli`]/[`csvout`]: the bundled example configurations and
//!   the CSV-emitting command-line front end.

pub mod cli;
pub mod config;
pub mod csvout;
pub mod eig3;
pub mod error;
pub mod ftransform;
pub mod granular;
pub mod model;
pub mod ode;
pub mod partition;

pub use error::{Error, Result};
pub use granular::{
    alpha_cuts, gr_add, gr_binary, gr_div, gr_metric, gr_metric_with_mode, gr_mul, gr_sub,
    hmf_from_triangular, AlphaCutFamily, BinaryOp, GranularGrid, GridSpec, MetricMode,
    TriangularFuzzyNumber,
};
pub use partition::{quadrature_nodes, BasicShape, FuzzyPartition, QuadKind, QuadratureRule};
