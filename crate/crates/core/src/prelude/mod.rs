//! The built-in rule base loaded ahead of user programs, and the native
//! canonisation, relation and string helpers it relies on.

pub mod canon;
pub mod relation;
pub mod strings;

use std::sync::OnceLock;

use crate::engine::Program;
use crate::reader::{parse_program, parse_program_with, ReadError};

pub use canon::{canon, equals, CanonError};
pub use relation::{tree_to_relation, RelationError};

pub const PRELUDE_SOURCE: &str = include_str!("prelude.pl");

/// The parsed rule base.
pub fn prelude() -> &'static Program {
    static PRELUDE: OnceLock<Program> = OnceLock::new();
    PRELUDE.get_or_init(|| parse_program(PRELUDE_SOURCE).expect("prelude parses"))
}

/// Prelude clauses first, then the clauses of `p`.
pub fn load_prelude(p: &Program) -> Program {
    let mut out = prelude().clone();
    out.extend(p);
    out
}

/// Parses user rules with the prelude's operators and loads them after the prelude.
pub fn parse_with_prelude(text: &str) -> Result<Program, ReadError> {
    let user = parse_program_with(text, prelude().ops.clone())?;
    Ok(load_prelude(&user))
}
