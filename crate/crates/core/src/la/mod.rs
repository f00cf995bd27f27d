//! Dense and sparse containers, linear combinations and solvers.

pub mod container;
pub mod lincomb;
pub mod matrix;
pub mod pattern;
pub mod solver;
pub mod vector;

pub use container::Container;
pub use lincomb::assemble_lincomb;
pub use matrix::{CsrMatrix, DenseMatrix, Matrix};
pub use pattern::SparsityPattern;
pub use solver::{solver_options, SolveInfo, Solver, SolverMatrix, DENSE_SOLVER_TYPES, SPARSE_SOLVER_TYPES};
pub use vector::DenseVector;
