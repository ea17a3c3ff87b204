//! Randomized and quantum-model Taylor algorithms `A_1, …, A_k` for initial
//! value problems `y' = f(y)`, `y(a) = η`.
//!
//! `A_1` is the Taylor method of order `r + 1`. Each `A_{s+1}` refines the
//! output of `A_s` on a finer grid, integrating a local Taylor model of `f`
//! exactly and estimating the normalized residual by a mean over midpoint
//! knots. The estimator is either exact, a randomized median of means or a
//! simulated quantum mean estimator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod harness;
pub mod jets;
pub mod mean_estimation;
pub mod piecewise;
pub mod problems;
pub mod rng;
pub mod solver;

pub use jets::{Jet, JetError, RhsFn, RhsProgram, Scalar};
pub use mean_estimation::{MeanMode, Perturbation};
pub use piecewise::PiecewisePoly;
pub use problems::{NamedProblem, builtin};
pub use solver::{CostLedger, IvProblem, Setting, Solution, SolverConfig, SolverError, solve};
