//! Minimum-total-area disk multi-cover of weighted point sets.
//!
//! Every point `p` must be covered by at least `kappa(p)` of at most `m`
//! disks, and the total area `pi * sum(r^2)` is minimized. The dispersive
//! variant additionally requires disk centers to be at least `ell` apart.
//!
//! The crate provides an iterative clustering heuristic ([`heuristic`]), a
//! finite sufficient candidate-disk set ([`candidates`]), and an exact
//! integer-programming pipeline with lazy separation rows ([`solver`]).

pub mod candidates;
pub mod error;
pub mod geometry;
pub mod heuristic;
pub mod instance;
pub mod solution;
pub mod solver;

pub use candidates::{CandidateSet, Origin};
pub use error::{Error, Result};
pub use geometry::{Disk, Point, SpatialIndex, TOL};
pub use heuristic::solve_heuristic;
pub use instance::{Family, GeneratorConfig, Instance};
pub use solution::Solution;
pub use solver::{SolveResult, Status};
