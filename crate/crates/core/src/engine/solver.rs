use std::cell::RefCell;
use std::collections::HashSet;
use std::io::Write as _;
use std::rc::Rc;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use super::bindings::{copy_fresh, rename, Bindings};
use super::builtins::{self, Builtin};
use super::program::{Clause, PredKey, Program};
use crate::reader::parse_program;
use crate::term::{Atom, Term};

pub const DEFAULT_DEPTH_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub occurs_check: bool,
    /// Maximum number of resolution steps per query.
    pub depth_limit: Option<u64>,
    /// Print every call to the diagnostic sink.
    pub trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            occurs_check: false,
            depth_limit: Some(DEFAULT_DEPTH_LIMIT),
            trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("resource error: resolution step limit of {0} exceeded")]
    DepthLimit(u64),
}

/// Where `write/1`, traces and warnings go.
#[derive(Clone, Debug, Default)]
pub enum DiagSink {
    #[default]
    Stderr,
    Buffer(Arc<Mutex<String>>),
    Null,
}

impl DiagSink {
    pub fn buffer() -> (DiagSink, Arc<Mutex<String>>) {
        let b = Arc::new(Mutex::new(String::new()));
        (DiagSink::Buffer(b.clone()), b)
    }

    pub fn write(&self, s: &str) {
        match self {
            DiagSink::Stderr => {
                let _ = std::io::stderr().write_all(s.as_bytes());
            }
            DiagSink::Buffer(b) => b.lock().unwrap().push_str(s),
            DiagSink::Null => {}
        }
    }

    pub fn warn(&self, s: &str) {
        self.write(&format!("warning: {s}\n"));
    }
}

const LIBRARY: &str = include_str!("library.pl");

/// Fallback list predicates, used when a program does not define them itself.
pub fn library() -> &'static Program {
    static LIB: OnceLock<Program> = OnceLock::new();
    LIB.get_or_init(|| parse_program(LIBRARY).expect("library parses"))
}

const CONTROL: &[(&str, usize)] = &[
    ("true", 0),
    ("fail", 0),
    ("false", 0),
    ("!", 0),
    (",", 2),
    (";", 2),
    ("->", 2),
    ("\\+", 1),
    ("not", 1),
    ("findall", 3),
];

/// True if a call to `name/arity` would reach a definition under `program`.
pub fn predicate_known(program: &Program, name: &str, arity: usize) -> bool {
    CONTROL.contains(&(name, arity))
        || (name == "call" && arity >= 1)
        || builtins::lookup(name, arity).is_some()
        || program.defines(name, arity)
        || library().defines(name, arity)
}

pub struct Solver<'p> {
    program: &'p Program,
    pub opts: SolverOptions,
    pub sink: DiagSink,
    warned: RefCell<HashSet<PredKey>>,
}

impl<'p> Solver<'p> {
    pub fn new(program: &'p Program) -> Self {
        Self::with_options(program, SolverOptions::default())
    }

    pub fn with_options(program: &'p Program, opts: SolverOptions) -> Self {
        Solver {
            program,
            opts,
            sink: DiagSink::Stderr,
            warned: RefCell::new(HashSet::new()),
        }
    }

    pub fn with_sink(mut self, sink: DiagSink) -> Self {
        self.sink = sink;
        self
    }

    pub fn program(&self) -> &'p Program {
        self.program
    }

    pub(crate) fn warn_once(&self, key: &PredKey, msg: impl FnOnce() -> String) {
        if self.warned.borrow_mut().insert(key.clone()) {
            self.sink.warn(&msg());
        }
    }

    /// Lazily enumerates the solutions of `goal`. Variables of `goal` are renamed apart.
    pub fn solve<'s>(&'s self, goal: &Term) -> Solutions<'s> {
        let mut max = 0;
        goal.for_each_var(&mut |v| max = max.max(v.id + 1));
        let mut bindings = Bindings::new();
        let base = bindings.alloc(max);
        let renamed = rename(goal, base);
        let mut names: Vec<(String, Term)> = Vec::new();
        goal.for_each_var(&mut |v| {
            if let Some(n) = &v.name {
                if !n.starts_with('_') && !names.iter().any(|(m, _)| **m == **n) {
                    names.push((n.to_string(), Term::anon(v.id + base)));
                }
            }
        });
        let cont = push(None, Frame::Goal(renamed.clone(), 0));
        Solutions {
            m: Machine {
                solver: self,
                bindings,
                choices: Vec::new(),
                cont,
                steps: 0,
                started: false,
                done: false,
            },
            goal: renamed,
            names,
        }
    }

    /// Resolved goal of the first solution, if any.
    pub fn first(&self, goal: &Term) -> Result<Option<Term>, SolveError> {
        let mut s = self.solve(goal);
        Ok(s.next_solution()?.map(|sol| sol.goal))
    }

    pub fn succeeds(&self, goal: &Term) -> Result<bool, SolveError> {
        Ok(self.first(goal)?.is_some())
    }

    /// Resolved instances of `template` for every solution of `goal`.
    pub fn find_all(&self, template: &Term, goal: &Term) -> Result<Vec<Term>, SolveError> {
        let mut max = 0;
        template.for_each_var(&mut |v| max = max.max(v.id + 1));
        goal.for_each_var(&mut |v| max = max.max(v.id + 1));
        let out = Term::anon(max);
        let g = Term::compound("findall", vec![template.clone(), goal.clone(), out]);
        Ok(match self.first(&g)? {
            Some(r) => r.as_compound().unwrap().args[2].list_items().unwrap_or_default(),
            None => Vec::new(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// The goal with this solution's bindings applied.
    pub goal: Term,
    /// Named query variables in order of first occurrence.
    pub bindings: Vec<(String, Term)>,
}

impl Solution {
    pub fn get(&self, name: &str) -> Option<&Term> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

pub struct Solutions<'s> {
    m: Machine<'s>,
    goal: Term,
    names: Vec<(String, Term)>,
}

impl Solutions<'_> {
    pub fn next_solution(&mut self) -> Result<Option<Solution>, SolveError> {
        if !self.m.run()? {
            return Ok(None);
        }
        let b = &self.m.bindings;
        Ok(Some(Solution {
            goal: b.resolve(&self.goal),
            bindings: self.names.iter().map(|(n, v)| (n.clone(), b.resolve(v))).collect(),
        }))
    }

    pub fn steps(&self) -> u64 {
        self.m.steps
    }
}

impl Iterator for Solutions<'_> {
    type Item = Result<Solution, SolveError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.m.done {
            return None;
        }
        match self.next_solution() {
            Ok(Some(s)) => Some(Ok(s)),
            Ok(None) => None,
            Err(e) => {
                self.m.done = true;
                Some(Err(e))
            }
        }
    }
}

// ---------------------------------------------------------------------------

enum Frame {
    /// A goal with the choicepoint height that `!` inside it cuts back to.
    Goal(Term, usize),
    CutTo(usize),
    NotSucceeded(usize),
}

struct ContNode {
    frame: Frame,
    next: Cont,
}

type Cont = Option<Rc<ContNode>>;

impl Drop for ContNode {
    fn drop(&mut self) {
        let mut next = self.next.take();
        while let Some(rc) = next {
            match Rc::try_unwrap(rc) {
                Ok(mut node) => next = node.next.take(),
                Err(_) => break,
            }
        }
    }
}

fn push(next: Cont, frame: Frame) -> Cont {
    Some(Rc::new(ContNode { frame, next }))
}

enum Alt<'s> {
    Clauses {
        goal: Term,
        clauses: &'s [Clause],
        next: usize,
        cont: Cont,
    },
    Goal {
        goal: Term,
        cut: usize,
        cont: Cont,
    },
    Findall {
        results: Vec<Term>,
        list: Term,
        cont: Cont,
    },
    Not {
        cont: Cont,
    },
}

struct Choice<'s> {
    trail: usize,
    alt: Alt<'s>,
}

pub(crate) struct Machine<'s> {
    solver: &'s Solver<'s>,
    pub(crate) bindings: Bindings,
    choices: Vec<Choice<'s>>,
    cont: Cont,
    steps: u64,
    started: bool,
    done: bool,
}

fn first_arg_compatible(goal_arg: &Term, head: &Term) -> bool {
    let Some(h) = head.as_compound().map(|c| &c.args[0]) else {
        return true;
    };
    match (goal_arg, h) {
        (Term::Var(_), _) | (_, Term::Var(_)) => true,
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Int(a), Term::Int(b)) => a == b,
        (Term::Float(a), Term::Float(b)) => a == b,
        (Term::Compound(a), Term::Compound(b)) => a.functor == b.functor && a.args.len() == b.args.len(),
        _ => false,
    }
}

impl<'s> Machine<'s> {
    pub(crate) fn solver(&self) -> &'s Solver<'s> {
        self.solver
    }

    pub(crate) fn unify(&mut self, a: &Term, b: &Term) -> bool {
        self.bindings.unify(a, b, self.solver.opts.occurs_check)
    }

    pub(crate) fn deref(&self, t: &Term) -> Term {
        self.bindings.deref(t).clone()
    }

    pub(crate) fn resolve(&self, t: &Term) -> Term {
        self.bindings.resolve(t)
    }

    fn run(&mut self) -> Result<bool, SolveError> {
        if self.done {
            return Ok(false);
        }
        if self.started && !self.backtrack() {
            self.done = true;
            return Ok(false);
        }
        self.started = true;
        loop {
            let Some(node) = self.cont.clone() else {
                return Ok(true);
            };
            self.cont = node.next.clone();
            self.steps += 1;
            if let Some(limit) = self.solver.opts.depth_limit {
                if self.steps > limit {
                    self.done = true;
                    return Err(SolveError::DepthLimit(limit));
                }
            }
            let ok = match &node.frame {
                Frame::Goal(g, cut) => self.call(g, *cut),
                Frame::CutTo(h) => {
                    self.choices.truncate(*h);
                    true
                }
                Frame::NotSucceeded(h) => {
                    self.choices.truncate(*h);
                    false
                }
            };
            if !ok && !self.backtrack() {
                self.done = true;
                return Ok(false);
            }
        }
    }

    fn backtrack(&mut self) -> bool {
        while let Some(choice) = self.choices.pop() {
            self.bindings.undo_to(choice.trail);
            match choice.alt {
                Alt::Clauses {
                    goal,
                    clauses,
                    next,
                    cont,
                } => {
                    if self.try_clauses(&goal, clauses, next, cont) {
                        return true;
                    }
                }
                Alt::Goal { goal, cut, cont } => {
                    self.cont = push(cont, Frame::Goal(goal, cut));
                    return true;
                }
                Alt::Findall { results, list, cont } => {
                    let l = Term::list(results);
                    if self.unify(&list, &l) {
                        self.cont = cont;
                        return true;
                    }
                }
                Alt::Not { cont } => {
                    self.cont = cont;
                    return true;
                }
            }
        }
        false
    }

    fn try_clauses(&mut self, goal: &Term, clauses: &'s [Clause], start: usize, cont: Cont) -> bool {
        let first_arg = goal.as_compound().map(|c| self.deref(&c.args[0]));
        let compatible = |c: &Clause| first_arg.as_ref().is_none_or(|a| first_arg_compatible(a, &c.head));
        let height = self.choices.len();
        let mut i = start;
        while i < clauses.len() {
            let clause = &clauses[i];
            if !compatible(clause) {
                i += 1;
                continue;
            }
            let mark = self.bindings.mark();
            let base = self.bindings.alloc(clause.var_count);
            let head = rename(&clause.head, base);
            if self.unify(goal, &head) {
                if let Some(next) = (i + 1..clauses.len()).find(|&j| compatible(&clauses[j])) {
                    self.choices.push(Choice {
                        trail: mark,
                        alt: Alt::Clauses {
                            goal: goal.clone(),
                            clauses,
                            next,
                            cont: cont.clone(),
                        },
                    });
                }
                let mut k = cont;
                for g in clause.body.iter().rev() {
                    k = push(k, Frame::Goal(rename(g, base), height));
                }
                self.cont = k;
                return true;
            }
            i += 1;
        }
        false
    }

    fn call(&mut self, goal: &Term, cut: usize) -> bool {
        let goal = self.deref(goal);
        let (name, arity) = match goal.functor() {
            Some((n, a)) => (n.to_string(), a),
            None => {
                self.solver.sink.warn(&format!("goal is not callable: {}", self.resolve(&goal)));
                return false;
            }
        };
        if self.solver.opts.trace {
            self.solver.sink.write(&format!("call: {}\n", self.resolve(&goal)));
        }
        let args: &[Term] = goal.as_compound().map(|c| &c.args[..]).unwrap_or(&[]);
        match (name.as_str(), arity) {
            ("true", 0) => return true,
            ("fail", 0) | ("false", 0) => return false,
            ("!", 0) => {
                self.choices.truncate(cut);
                return true;
            }
            (",", 2) => {
                let k = push(self.cont.take(), Frame::Goal(args[1].clone(), cut));
                self.cont = push(k, Frame::Goal(args[0].clone(), cut));
                return true;
            }
            (";", 2) => {
                let lhs = self.deref(&args[0]);
                let cont = self.cont.take();
                if let Some(c) = lhs.as_compound().filter(|c| &*c.functor == "->" && c.args.len() == 2) {
                    let h = self.choices.len();
                    self.choices.push(Choice {
                        trail: self.bindings.mark(),
                        alt: Alt::Goal {
                            goal: args[1].clone(),
                            cut,
                            cont: cont.clone(),
                        },
                    });
                    let k = push(cont, Frame::Goal(c.args[1].clone(), cut));
                    let k = push(k, Frame::CutTo(h));
                    self.cont = push(k, Frame::Goal(c.args[0].clone(), h + 1));
                } else {
                    self.choices.push(Choice {
                        trail: self.bindings.mark(),
                        alt: Alt::Goal {
                            goal: args[1].clone(),
                            cut,
                            cont: cont.clone(),
                        },
                    });
                    self.cont = push(cont, Frame::Goal(lhs, cut));
                }
                return true;
            }
            ("->", 2) => {
                let h = self.choices.len();
                let k = push(self.cont.take(), Frame::Goal(args[1].clone(), cut));
                let k = push(k, Frame::CutTo(h));
                self.cont = push(k, Frame::Goal(args[0].clone(), h));
                return true;
            }
            ("\\+", 1) | ("not", 1) => {
                let h = self.choices.len();
                let cont = self.cont.take();
                self.choices.push(Choice {
                    trail: self.bindings.mark(),
                    alt: Alt::Not { cont },
                });
                let k = push(None, Frame::NotSucceeded(h));
                self.cont = push(k, Frame::Goal(args[0].clone(), h + 1));
                return true;
            }
            ("call", n) if n >= 1 => {
                let target = self.deref(&args[0]);
                let extra = &args[1..];
                let g = match &target {
                    Term::Atom(a) => Term::compound_atom(a.clone(), extra.to_vec()),
                    Term::Compound(c) => {
                        let mut all = c.args.to_vec();
                        all.extend_from_slice(extra);
                        Term::compound_atom(c.functor.clone(), all)
                    }
                    _ => {
                        self.solver.sink.warn(&format!("call/{n}: not callable: {}", self.resolve(&target)));
                        return false;
                    }
                };
                let h = self.choices.len();
                self.cont = push(self.cont.take(), Frame::Goal(g, h));
                return true;
            }
            ("findall", 3) => {
                let h = self.choices.len();
                let cont = self.cont.take();
                self.choices.push(Choice {
                    trail: self.bindings.mark(),
                    alt: Alt::Findall {
                        results: Vec::new(),
                        list: args[2].clone(),
                        cont,
                    },
                });
                let collect = Term::compound("$findall_collect", vec![Term::Int(h as i64), args[0].clone()]);
                let k = push(None, Frame::Goal(collect, h + 1));
                self.cont = push(k, Frame::Goal(args[1].clone(), h + 1));
                return true;
            }
            ("$findall_collect", 2) => {
                let Term::Int(h) = args[0] else { unreachable!() };
                let t = self.resolve(&args[1]);
                let t = copy_fresh(&t, &mut self.bindings);
                if let Some(Choice {
                    alt: Alt::Findall { results, .. },
                    ..
                }) = self.choices.get_mut(h as usize)
                {
                    results.push(t);
                }
                return false;
            }
            _ => {}
        }

        let key: PredKey = (Atom::from(name.as_str()), arity);
        let builtin = builtins::lookup(&name, arity);
        if let Some(Builtin::Core(f)) = builtin {
            return f(self, args);
        }
        let program = self.solver.program;
        if let Some(cs) = program.clauses_by_key(&key).filter(|c| !c.is_empty()) {
            let cont = self.cont.take();
            return self.try_clauses(&goal, cs, 0, cont);
        }
        if let Some(Builtin::Soft(f)) = builtin {
            return f(self, args);
        }
        if let Some(cs) = library().clauses_by_key(&key) {
            let cont = self.cont.take();
            return self.try_clauses(&goal, cs, 0, cont);
        }
        self.solver
            .warn_once(&key, || format!("unknown predicate {name}/{arity}"));
        false
    }
}
