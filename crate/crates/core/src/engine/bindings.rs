use std::collections::HashSet;
use std::sync::Arc;

use crate::term::{Compound, Term, Var};

// Variables currently being expanded by `resolve`.
#[derive(Default)]
struct Path {
    stack: Vec<usize>,
    set: HashSet<usize>,
}

impl Path {
    fn contains(&self, id: usize) -> bool {
        self.set.contains(&id)
    }

    fn push(&mut self, id: usize) {
        self.stack.push(id);
        self.set.insert(id);
    }

    fn len(&self) -> usize {
        self.stack.len()
    }

    fn truncate(&mut self, n: usize) {
        for id in self.stack.drain(n..) {
            self.set.remove(&id);
        }
    }
}

/// Variable bindings with an undo trail.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    slots: Vec<Option<Term>>,
    trail: Vec<usize>,
    next_id: usize,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts allocating fresh ids at `first`; used when ids below it are taken.
    pub fn with_first_id(first: usize) -> Self {
        Bindings {
            next_id: first,
            ..Self::default()
        }
    }

    /// Reserves `n` consecutive fresh ids and returns the first.
    pub fn alloc(&mut self, n: usize) -> usize {
        let base = self.next_id;
        self.next_id += n;
        base
    }

    pub fn fresh_var(&mut self) -> Term {
        Term::anon(self.alloc(1))
    }

    pub fn lookup(&self, id: usize) -> Option<&Term> {
        self.slots.get(id).and_then(Option::as_ref)
    }

    pub fn bind(&mut self, id: usize, t: Term) {
        if id >= self.slots.len() {
            self.slots.resize(id + 1, None);
        }
        debug_assert!(self.slots[id].is_none(), "rebinding var {id}");
        self.slots[id] = Some(t);
        self.trail.push(id);
        if id >= self.next_id {
            self.next_id = id + 1;
        }
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let id = self.trail.pop().unwrap();
            self.slots[id] = None;
        }
    }

    /// Number of live bindings.
    pub fn len(&self) -> usize {
        self.trail.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trail.is_empty()
    }

    /// Follows variable bindings until an unbound variable or a non-variable.
    pub fn deref<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.lookup(v.id) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    /// Applies the bindings throughout `t`. Cyclic bindings stop at the repeated variable.
    pub fn resolve(&self, t: &Term) -> Term {
        let mut path = Path::default();
        self.resolve_in(t, &mut path).unwrap_or_else(|| t.clone())
    }

    // Follows a chain of bound variables without recursing.
    fn follow<'a>(&'a self, mut t: &'a Term, path: &mut Path) -> &'a Term {
        while let Term::Var(v) = t {
            if path.contains(v.id) {
                break;
            }
            match self.lookup(v.id) {
                Some(b) => {
                    path.push(v.id);
                    t = b;
                }
                None => break,
            }
        }
        t
    }

    // None means unchanged.
    fn resolve_in(&self, t: &Term, path: &mut Path) -> Option<Term> {
        match t {
            Term::Var(_) => {
                let depth = path.len();
                let end = self.follow(t, path);
                if path.len() == depth {
                    return None;
                }
                let r = self.resolve_in(end, path).unwrap_or_else(|| end.clone());
                path.truncate(depth);
                Some(r)
            }
            Term::Compound(_) if t.as_cons().is_some() => self.resolve_list(t, path),
            Term::Compound(c) => {
                let mut changed: Option<Vec<Term>> = None;
                for (i, a) in c.args.iter().enumerate() {
                    if let Some(r) = self.resolve_in(a, path) {
                        let v = changed.get_or_insert_with(|| c.args[..i].to_vec());
                        v.push(r);
                    } else if let Some(v) = changed.as_mut() {
                        v.push(a.clone());
                    }
                }
                changed.map(|args| {
                    Term::Compound(Arc::new(Compound {
                        functor: c.functor.clone(),
                        args: args.into_boxed_slice(),
                    }))
                })
            }
            _ => None,
        }
    }

    // Lists are walked iteratively so long spines do not recurse.
    fn resolve_list(&self, t: &Term, path: &mut Path) -> Option<Term> {
        let depth = path.len();
        let mut items = Vec::new();
        let mut changed = false;
        let mut cur = t;
        let tail = loop {
            let before = path.len();
            cur = self.follow(cur, path);
            changed |= path.len() != before;
            match cur.as_cons() {
                Some((h, tl)) => {
                    match self.resolve_in(h, path) {
                        Some(r) => {
                            changed = true;
                            items.push(r);
                        }
                        None => items.push(h.clone()),
                    }
                    cur = tl;
                }
                None => {
                    let r = if matches!(cur, Term::Var(_)) { None } else { self.resolve_in(cur, path) };
                    changed |= r.is_some();
                    break r.unwrap_or_else(|| cur.clone());
                }
            }
        };
        path.truncate(depth);
        changed.then(|| Term::list_with_tail(items, tail))
    }

    fn occurs(&self, id: usize, t: &Term) -> bool {
        let mut stack = vec![t.clone()];
        while let Some(t) = stack.pop() {
            match self.deref(&t) {
                Term::Var(v) if v.id == id => return true,
                Term::Compound(c) => stack.extend(c.args.iter().cloned()),
                _ => {}
            }
        }
        false
    }

    /// Unifies `a` and `b`. On failure all bindings made by the attempt are undone.
    pub fn unify(&mut self, a: &Term, b: &Term, occurs_check: bool) -> bool {
        let mark = self.mark();
        if self.unify_inner(a, b, occurs_check) {
            true
        } else {
            self.undo_to(mark);
            false
        }
    }

    fn unify_inner(&mut self, a: &Term, b: &Term, occurs_check: bool) -> bool {
        let mut stack = vec![(a.clone(), b.clone())];
        while let Some((x, y)) = stack.pop() {
            let x = self.deref(&x).clone();
            let y = self.deref(&y).clone();
            match (&x, &y) {
                (Term::Var(v), Term::Var(w)) if v.id == w.id => {}
                (Term::Var(v), other) | (other, Term::Var(v)) => {
                    if occurs_check && self.occurs(v.id, other) {
                        return false;
                    }
                    self.bind(v.id, other.clone());
                }
                (Term::Atom(p), Term::Atom(q)) => {
                    if p != q {
                        return false;
                    }
                }
                (Term::Int(p), Term::Int(q)) => {
                    if p != q {
                        return false;
                    }
                }
                (Term::Float(p), Term::Float(q)) => {
                    if p.to_bits() != q.to_bits() && p != q {
                        return false;
                    }
                }
                (Term::Compound(p), Term::Compound(q)) => {
                    if Arc::ptr_eq(p, q) {
                        continue;
                    }
                    if p.functor != q.functor || p.args.len() != q.args.len() {
                        return false;
                    }
                    for (s, t) in p.args.iter().zip(q.args.iter()).rev() {
                        stack.push((s.clone(), t.clone()));
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

/// Copies `t` with every variable id shifted by `base`.
pub fn rename(t: &Term, base: usize) -> Term {
    match t {
        Term::Var(v) => Term::Var(Var {
            id: v.id + base,
            name: v.name.clone(),
        }),
        Term::Compound(c) => Term::Compound(Arc::new(Compound {
            functor: c.functor.clone(),
            args: c.args.iter().map(|a| rename(a, base)).collect(),
        })),
        other => other.clone(),
    }
}

/// Replaces each distinct unbound variable of an already resolved term by a fresh one.
pub fn copy_fresh(t: &Term, b: &mut Bindings) -> Term {
    fn go(t: &Term, b: &mut Bindings, map: &mut Vec<(usize, Term)>) -> Term {
        match t {
            Term::Var(v) => {
                if let Some((_, n)) = map.iter().find(|(id, _)| *id == v.id) {
                    return n.clone();
                }
                let n = b.fresh_var();
                map.push((v.id, n.clone()));
                n
            }
            Term::Compound(c) => {
                if t.is_ground() {
                    return t.clone();
                }
                Term::Compound(Arc::new(Compound {
                    functor: c.functor.clone(),
                    args: c.args.iter().map(|a| go(a, b, map)).collect(),
                }))
            }
            other => other.clone(),
        }
    }
    go(t, b, &mut Vec::new())
}
