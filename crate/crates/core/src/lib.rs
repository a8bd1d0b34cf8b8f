//! Logic-term XML transformation: documents become terms, rule programs
//! rewrite them on a backtracking solver, and results are written back as XML.

pub mod engine;
pub mod metrics;
pub mod prelude;
pub mod reader;
pub mod template;
pub mod term;
pub mod xml;

pub use engine::{Program, Solution, SolveError, Solver, SolverOptions};
pub use reader::{parse_program, parse_query, parse_term, ReadError};
pub use term::{render_term, term_equal, Term};

pub type HalsteadReport = metrics::HalsteadReport<f64>;
