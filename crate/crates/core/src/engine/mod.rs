//! Resolution engine: bindings, clause store, solver and built-in predicates.

pub mod arith;
pub mod bindings;
pub(crate) mod builtins;
pub mod program;
pub mod solver;

pub use arith::{eval_is, EvalError};
pub use bindings::Bindings;
pub use program::{Clause, PredKey, Program};
pub use solver::{library, predicate_known, DiagSink, Solution, Solutions, SolveError, Solver, SolverOptions, DEFAULT_DEPTH_LIMIT};
