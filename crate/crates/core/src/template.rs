//! Pre-order template traversal and whole-file transformation.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::engine::bindings::{rename, Bindings};
use crate::engine::{Program, SolveError, Solver};
use crate::term::{as_element, element, Term};
use crate::xml::{serialize_fragments, serialize_with, SerializeOptions, ValidationError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UnmatchedText {
    #[default]
    Drop,
    Copy,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TraversalOptions {
    pub unmatched_text: UnmatchedText,
    pub max_results: Option<usize>,
}

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("template clause #{clause} produced {result}, which is not a list")]
    NotAList { clause: usize, result: Term },
    #[error("children of {0} do not form a proper list")]
    ImproperList(Term),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

fn result_var(goal_parts: &[&Term]) -> Term {
    let mut max = 0;
    for t in goal_parts {
        t.for_each_var(&mut |v| max = max.max(v.id + 1));
    }
    Term::anon(max)
}

/// Index (1-based) of the first `template/2` clause that yields `result` for `node`.
fn clause_index(program: &Program, solver: &Solver<'_>, node: &Term, result: &Term) -> Result<usize, SolveError> {
    let Some(clauses) = program.clauses("template", 2) else { return Ok(0) };
    for (i, c) in clauses.iter().enumerate() {
        let mut b = Bindings::new();
        let base = b.alloc(c.var_count);
        let head = rename(&c.head, base);
        let mut nmax = 0;
        node.for_each_var(&mut |v| nmax = nmax.max(v.id + 1));
        let nbase = b.alloc(nmax + 1);
        let goal = Term::compound("template", vec![rename(node, nbase), Term::anon(nbase + nmax)]);
        if !b.unify(&head, &goal, false) {
            continue;
        }
        let mut conj = Term::compound("=", vec![b.resolve(&goal), Term::compound("template", vec![node.clone(), result.clone()])]);
        for g in c.body.iter().rev() {
            conj = Term::compound(",", vec![b.resolve(&rename(g, base)), conj]);
        }
        if solver.succeeds(&conj)? {
            return Ok(i + 1);
        }
    }
    Ok(0)
}

struct Walker<'a, 'p> {
    solver: &'a Solver<'p>,
    opts: TraversalOptions,
    has_templates: bool,
    out: Vec<Term>,
}

impl Walker<'_, '_> {
    fn full(&self) -> bool {
        self.opts.max_results.is_some_and(|m| self.out.len() >= m)
    }

    fn template(&self, node: &Term) -> Result<Option<Term>, TemplateError> {
        if !self.has_templates {
            return Ok(None);
        }
        let r = result_var(&[node]);
        let goal = Term::compound("template", vec![node.clone(), r]);
        let Some(solved) = self.solver.first(&goal)? else { return Ok(None) };
        let result = solved.as_compound().expect("template goal").args[1].clone();
        if !result.is_list() {
            let clause = clause_index(self.solver.program(), self.solver, node, &result)?;
            return Err(TemplateError::NotAList { clause, result });
        }
        Ok(Some(result))
    }

    fn node(&mut self, node: &Term) -> Result<(), TemplateError> {
        if self.full() {
            return Ok(());
        }
        match node.functor() {
            Some(("pi", 1)) | Some(("comment", 1)) => return Ok(()),
            _ => {}
        }
        if let Some(result) = self.template(node)? {
            self.out.extend(result.list_items().unwrap_or_default());
            return Ok(());
        }
        if let Some((_, _, children)) = as_element(node) {
            let items = children.list_items().ok_or_else(|| TemplateError::ImproperList(node.clone()))?;
            return self.nodes(&items);
        }
        if node.functor() == Some(("text", 1)) && self.opts.unmatched_text == UnmatchedText::Copy {
            self.out.push(node.clone());
        }
        Ok(())
    }

    fn nodes(&mut self, nodes: &[Term]) -> Result<(), TemplateError> {
        for n in nodes {
            if matches!(n, Term::Compound(_)) {
                self.node(n)?;
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Vec<Term> {
        if let Some(m) = self.opts.max_results {
            self.out.truncate(m);
        }
        self.out
    }
}

fn walker<'a, 'p>(solver: &'a Solver<'p>, opts: TraversalOptions) -> Walker<'a, 'p> {
    Walker {
        solver,
        opts,
        has_templates: solver.program().defines("template", 2),
        out: Vec::new(),
    }
}

/// Applies the program's `template/2` rules to `node` in pre-order.
pub fn traverse(node: &Term, solver: &Solver<'_>, opts: TraversalOptions) -> Result<Vec<Term>, TemplateError> {
    let mut w = walker(solver, opts);
    w.node(node)?;
    Ok(w.finish())
}

pub fn traverse_elements(nodes: &Term, solver: &Solver<'_>, opts: TraversalOptions) -> Result<Vec<Term>, TemplateError> {
    let items = nodes.list_items().ok_or_else(|| TemplateError::ImproperList(nodes.clone()))?;
    let mut w = walker(solver, opts);
    w.nodes(&items)?;
    Ok(w.finish())
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TransformOptions {
    pub traversal: TraversalOptions,
    /// Emit result nodes side by side instead of under a `result` root.
    pub no_wrap: bool,
    /// Serialize every solution of `go/2`, not just the first.
    pub all: bool,
    pub pretty: bool,
}

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("no solution")]
    NoSolution,
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("result is not serializable: {0}")]
    Invalid(#[from] ValidationError),
}

#[derive(Debug, Clone)]
pub struct TransformReport {
    pub mode: &'static str,
    pub solutions: usize,
    pub outputs: Vec<String>,
    pub elapsed: Duration,
}

impl fmt::Display for TransformReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode: {}\nsolutions: {}\ntime: {:.3} ms",
            self.mode,
            self.solutions,
            self.elapsed.as_secs_f64() * 1000.0
        )
    }
}

/// Single node as is, anything else under `element(result,[],...)`.
pub fn wrap_results(nodes: Vec<Term>) -> Term {
    if nodes.len() == 1 {
        nodes.into_iter().next().unwrap()
    } else {
        element(Term::atom("result"), Term::nil(), Term::list(nodes))
    }
}

fn render(nodes: Vec<Term>, opts: &TransformOptions) -> Result<String, ValidationError> {
    let so = SerializeOptions { pretty: opts.pretty };
    if opts.no_wrap {
        serialize_fragments(&nodes, so)
    } else {
        serialize_with(&wrap_results(nodes), so)
    }
}

/// Runs `go(Doc, Result)` when the program defines it, template traversal otherwise,
/// and serializes the outcome. Each returned string is one output document.
pub fn transform_document(doc: &Term, solver: &Solver<'_>, opts: &TransformOptions) -> Result<TransformReport, TransformError> {
    let start = Instant::now();
    if solver.program().defines("go", 2) {
        let r = result_var(&[doc]);
        let goal = Term::compound("go", vec![doc.clone(), r]);
        let mut sols = solver.solve(&goal);
        let mut outputs = Vec::new();
        while let Some(s) = sols.next_solution()? {
            let result = s.goal.as_compound().expect("go goal").args[1].clone();
            let nodes = result.list_items().unwrap_or_else(|| vec![result.clone()]);
            outputs.push(render(nodes, opts)?);
            if !opts.all {
                break;
            }
        }
        if outputs.is_empty() {
            return Err(TransformError::NoSolution);
        }
        return Ok(TransformReport {
            mode: "go/2",
            solutions: outputs.len(),
            outputs,
            elapsed: start.elapsed(),
        });
    }
    let nodes = traverse(doc, solver, opts.traversal)?;
    if nodes.is_empty() {
        return Err(TransformError::NoSolution);
    }
    let out = render(nodes, opts)?;
    Ok(TransformReport {
        mode: "templates",
        solutions: 1,
        outputs: vec![out],
        elapsed: start.elapsed(),
    })
}
