//! Kernels and exact solvers for tracking s-t paths.
//!
//! A *tracking set* T is a set of vertices such that distinct paths of a
//! family (all shortest s-t paths of an undirected graph, or all directed s-t
//! paths of a DAG) meet T in distinct subsets. This crate reduces instances
//! to kernels whose size depends only on the budget k, transforms DAG
//! instances into shortest-path instances, and solves kernels exactly.
//!
//! - [`graph`]: stable-label graphs, traversals, path enumeration.
//! - [`preprocess`]: pruning, orientation, endpoint trimming, contraction.
//! - [`quadratic`]: the O(k^2) kernel and its counting diagnostics.
//! - [`planar`]: the O(k) kernel for planar inputs.
//! - [`ppt`]: layering-and-subdivision transformation to shortest paths.
//! - [`verify`] and [`solve`]: verification, brute force, and the solver.
//! - [`io`] and [`generate`]: instance files and seeded instances.

pub mod error;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod io;
pub mod planar;
pub mod ppt;
pub mod preprocess;
pub mod quadratic;
pub mod solve;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Direction, Edge, Graph, Path, Vertex};
pub use instance::{Instance, Mode};
pub use quadratic::{KernelOutcome, Kernelization};
