#![allow(dead_code)]

use termxform::engine::{DiagSink, Program, Solver, SolverOptions};
use termxform::prelude::{parse_with_prelude, prelude};
use termxform::reader::parse_query;
use termxform::term::{render_term, Term};

pub fn program(rules: &str) -> Program {
    parse_with_prelude(rules).expect("rules parse")
}

pub fn solver(p: &Program) -> Solver<'_> {
    Solver::with_options(p, SolverOptions::default()).with_sink(DiagSink::Null)
}

pub fn query(p: &Program, q: &str) -> Term {
    parse_query(q, &p.ops).expect("query parses").term
}

/// Rendered bindings of `var` over every solution of `q`.
pub fn all(p: &Program, q: &str, var: &str) -> Vec<String> {
    let s = solver(p);
    s.solve(&query(p, q))
        .map(|r| render_term(r.expect("no resource error").get(var).expect("variable bound")))
        .collect()
}

pub fn first(p: &Program, q: &str, var: &str) -> Option<String> {
    all_limited(p, q, var, 1).into_iter().next()
}

pub fn all_limited(p: &Program, q: &str, var: &str, n: usize) -> Vec<String> {
    let s = solver(p);
    s.solve(&query(p, q))
        .take(n)
        .map(|r| render_term(r.expect("no resource error").get(var).expect("variable bound")))
        .collect()
}

pub fn count(p: &Program, q: &str) -> usize {
    let s = solver(p);
    s.solve(&query(p, q))
        .inspect(|r| assert!(r.is_ok(), "no resource error"))
        .count()
}

pub fn base() -> &'static Program {
    prelude()
}
pub mod gen;

/// Parses `text` and prefixes it with `Name = Value` for each binding.
pub fn bound_query(p: &Program, text: &str, binds: &[(&str, Term)]) -> Term {
    let rt = parse_query(text, &p.ops).expect("query parses");
    let mut goal = rt.term;
    for (name, value) in binds.iter().rev() {
        let id = rt
            .var_names
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, id)| *id)
            .expect("variable occurs in query");
        let eq = Term::compound("=", vec![Term::var(id, name), value.clone()]);
        goal = Term::compound(",", vec![eq, goal]);
    }
    goal
}

/// Every solution's binding of `var`, unrendered.
pub fn solutions_of(p: &Program, goal: &Term, var: &str) -> Vec<Term> {
    let s = solver(p);
    s.solve(goal)
        .map(|r| r.expect("no resource error").get(var).expect("variable bound").clone())
        .collect()
}
