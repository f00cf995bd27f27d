//! Localizable functions: reference maps, local function sets, analytic and
//! discrete functions, quadrature, L2 projection, norms and VTK output.

pub mod checkerboard;
pub mod combine;
pub mod constant;
pub mod expression;
pub mod expression_function;
pub mod factory;
pub mod geometry;
pub mod interfaces;
pub mod lambda;
pub mod projection;
pub mod quadrature;
pub mod space;
pub mod visualize;

pub use checkerboard::CheckerboardFunction;
pub use combine::{combine, difference, product, sum, Combination, CombinedFunction};
pub use constant::ConstantFunction;
pub use expression::{split_expression_list, Ast, Expression};
pub use expression_function::ExpressionFunction;
pub use factory::{FunctionsFactory, CHECKERBOARD_ID, CONSTANT_ID, EXPRESSION_ID};
pub use geometry::CellGeometry;
pub use interfaces::{FunctionRef, LocalFunctionSet, LocalizableFunction};
pub use lambda::LambdaFunction;
pub use projection::{assemble_local_systems, l2_norm, l2_projection, solve_local_systems, LocalSystem};
pub use quadrature::{gauss_legendre, Quadrature};
pub use space::{discrete_fn, DgSpace, DiscreteFunction, MonomialBasis, MAX_ORDER};
pub use visualize::{visualize, write_vtk};
