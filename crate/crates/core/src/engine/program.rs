use indexmap::IndexMap;

use crate::reader::OperatorTable;
use crate::term::{Atom, Term};

/// Predicate key: name and arity.
pub type PredKey = (Atom, usize);

#[derive(Clone, Debug)]
pub struct Clause {
    pub head: Term,
    pub body: Vec<Term>,
    /// Clause-local variables are numbered `0..var_count`.
    pub var_count: usize,
}

fn flatten_conj(t: Term, out: &mut Vec<Term>) {
    if let Some(c) = t.as_compound() {
        if &*c.functor == "," && c.args.len() == 2 {
            flatten_conj(c.args[0].clone(), out);
            flatten_conj(c.args[1].clone(), out);
            return;
        }
    }
    out.push(t);
}

impl Clause {
    pub fn fact(head: Term) -> Clause {
        let mut n = 0;
        head.for_each_var(&mut |v| n = n.max(v.id + 1));
        Clause {
            head,
            body: Vec::new(),
            var_count: n,
        }
    }

    /// Splits `H :- B` into head and conjunct goals.
    pub fn from_term(t: Term, var_count: usize) -> Result<Clause, String> {
        let (head, body) = match t.as_compound() {
            Some(c) if &*c.functor == ":-" && c.args.len() == 2 => (c.args[0].clone(), Some(c.args[1].clone())),
            _ => (t, None),
        };
        if !head.is_callable() {
            return Err(format!("clause head must be an atom or compound, got {head}"));
        }
        if head.is_nil() || head.as_cons().is_some() {
            return Err(format!("clause head cannot be a list: {head}"));
        }
        let mut goals = Vec::new();
        if let Some(b) = body {
            flatten_conj(b, &mut goals);
        }
        for g in &mut goals {
            match g {
                Term::Var(_) => *g = Term::compound("call", vec![g.clone()]),
                Term::Int(_) | Term::Float(_) => return Err(format!("goal is not callable: {g}")),
                _ => {}
            }
        }
        Ok(Clause {
            head,
            body: goals,
            var_count,
        })
    }

    pub fn key(&self) -> PredKey {
        let (n, a) = self.head.functor().expect("callable head");
        (Atom::from(n), a)
    }
}

/// Ordered clause store. Clause order within a predicate is the load order.
#[derive(Clone, Debug)]
pub struct Program {
    preds: IndexMap<PredKey, Vec<Clause>>,
    pub ops: OperatorTable,
}

impl Default for Program {
    fn default() -> Self {
        Program::new()
    }
}

impl Program {
    pub fn new() -> Program {
        Program {
            preds: IndexMap::new(),
            ops: OperatorTable::with_defaults(),
        }
    }

    pub fn add_clause(&mut self, c: Clause) {
        self.preds.entry(c.key()).or_default().push(c);
    }

    pub fn clauses(&self, name: &str, arity: usize) -> Option<&[Clause]> {
        self.preds.get(&(Atom::from(name), arity)).map(Vec::as_slice)
    }

    pub(crate) fn clauses_by_key(&self, key: &PredKey) -> Option<&[Clause]> {
        self.preds.get(key).map(Vec::as_slice)
    }

    pub fn defines(&self, name: &str, arity: usize) -> bool {
        self.clauses(name, arity).is_some_and(|c| !c.is_empty())
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&PredKey, &[Clause])> {
        self.preds.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn clause_count(&self) -> usize {
        self.preds.values().map(Vec::len).sum()
    }

    /// Appends all clauses of `other` after the existing ones and merges its operators.
    pub fn extend(&mut self, other: &Program) {
        for (_, cs) in other.predicates() {
            for c in cs {
                self.add_clause(c.clone());
            }
        }
        for op in other.ops.definitions() {
            self.ops.add(op);
        }
    }
}
