//! Infrastructure for grid-based PDE codes: typed configuration trees,
//! structured tensor grids with periodic views and a functor walker,
//! copy-on-write linear algebra with runtime-selectable solvers, and
//! localizable functions with a discontinuous L2 projection.

pub mod cli;
pub mod common;
pub mod error;
pub mod functions;
pub mod grid;
pub mod la;

pub use error::{Error, Result, SolverFailure, SolverFailureKind};
