//! Hadamard fractional calculus with verified quadrature, and numerical
//! checks of Pólya–Szegő and Minkowski-type inequalities for the Hadamard
//! fractional integral.
//!
//! * [`special`]: the Gamma function.
//! * [`operator`]: the Hadamard integral and derivative, with closed-form
//!   power rules and the semigroup residual as oracles.
//! * [`function`]: the expression DSL and seeded random test functions.
//! * [`inequality`]: both sides of each inequality, as structured reports.
//! * [`fuzz`]: seeded trials with CSV output.
//! * [`cli`]: the `hadafrac` command-line front end.

// `!(a < b)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod function;
pub mod fuzz;
pub mod inequality;
pub mod operator;
pub mod special;

pub use function::{parse_expr, random_bounded_function, Expr, RealFunction};
pub use operator::{
    build_graded_jacobi_rule, build_jacobi_rule, hadamard_derivative, hadamard_integral,
    hadamard_integral_graded, power_rule_derivative, power_rule_integral, semigroup_residual,
    EvalPoint, OperatorError, OperatorResult, QuadratureRule,
};
pub use special::{gamma, PositiveReal};
