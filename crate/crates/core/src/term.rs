//! The term universe shared by every other module.
//!
//! XML nodes are ordinary compounds by convention:
//! `element(Name, Attrs, Children)`, `text(T)`, `comment(T)` and `pi(T)`.
//! Attribute entries are single atoms of the form `id="value"`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Atom text. Cheap to clone.
pub type Atom = Arc<str>;

pub const NIL: &str = "[]";
pub const CONS: &str = ".";

/// A logic variable. Identity is the `id`; the name is only kept for printing.
#[derive(Clone, Debug)]
pub struct Var {
    pub id: usize,
    pub name: Option<Atom>,
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

#[derive(Clone, Debug)]
pub struct Compound {
    pub functor: Atom,
    pub args: Box<[Term]>,
}

// Long lists would otherwise be dropped recursively, one frame per cell.
impl Drop for Compound {
    fn drop(&mut self) {
        let mut stack: Vec<Term> = std::mem::take(&mut self.args).into_vec();
        while let Some(t) = stack.pop() {
            if let Term::Compound(c) = t {
                if let Some(mut c) = Arc::into_inner(c) {
                    stack.extend(std::mem::take(&mut c.args).into_vec());
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Term {
    Atom(Atom),
    Int(i64),
    Float(f64),
    Var(Var),
    Compound(Arc<Compound>),
}

impl Term {
    pub fn atom(text: &str) -> Term {
        Term::Atom(Arc::from(text))
    }

    pub fn var(id: usize, name: &str) -> Term {
        Term::Var(Var {
            id,
            name: Some(Arc::from(name)),
        })
    }

    pub fn anon(id: usize) -> Term {
        Term::Var(Var { id, name: None })
    }

    /// Builds a compound; zero arguments collapse to an atom.
    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        Term::compound_atom(Arc::from(functor), args)
    }

    pub fn compound_atom(functor: Atom, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Atom(functor)
        } else {
            Term::Compound(Arc::new(Compound {
                functor,
                args: args.into_boxed_slice(),
            }))
        }
    }

    pub fn nil() -> Term {
        Term::atom(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::compound(CONS, vec![head, tail])
    }

    pub fn list(items: Vec<Term>) -> Term {
        Term::list_with_tail(items, Term::nil())
    }

    pub fn list_with_tail(items: Vec<Term>, tail: Term) -> Term {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Term::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_compound(&self) -> Option<&Compound> {
        match self {
            Term::Compound(c) => Some(c),
            _ => None,
        }
    }

    /// Functor name and arity; atoms have arity 0.
    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Term::Atom(a) => Some((a, 0)),
            Term::Compound(c) => Some((&c.functor, c.args.len())),
            _ => None,
        }
    }

    pub fn is_callable(&self) -> bool {
        matches!(self, Term::Atom(_) | Term::Compound(_))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Term::Atom(a) if &**a == NIL)
    }

    /// Head and tail of a cons cell.
    pub fn as_cons(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Compound(c) if &*c.functor == CONS && c.args.len() == 2 => {
                Some((&c.args[0], &c.args[1]))
            }
            _ => None,
        }
    }

    /// Elements of a proper list, `None` for partial or improper lists.
    pub fn list_items(&self) -> Option<Vec<Term>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            if cur.is_nil() {
                return Some(out);
            }
            let (h, t) = cur.as_cons()?;
            out.push(h.clone());
            cur = t;
        }
    }

    pub fn is_list(&self) -> bool {
        let mut cur = self;
        loop {
            if cur.is_nil() {
                return true;
            }
            match cur.as_cons() {
                Some((_, t)) => cur = t,
                None => return false,
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Compound(c) => c.args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    pub fn is_number(&self) -> bool {
        matches!(self, Term::Int(_) | Term::Float(_))
    }

    /// Visits every variable occurrence, left to right.
    pub fn for_each_var(&self, f: &mut impl FnMut(&Var)) {
        match self {
            Term::Var(v) => f(v),
            Term::Compound(c) => c.args.iter().for_each(|a| a.for_each_var(f)),
            _ => {}
        }
    }
}

/// Syntactic identity, including variable ids. Unlike unification nothing is bound.
pub fn term_equal(a: &Term, b: &Term) -> bool {
    let mut stack: Vec<(&Term, &Term)> = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        let same = match (a, b) {
            (Term::Atom(x), Term::Atom(y)) => x == y,
            (Term::Int(x), Term::Int(y)) => x == y,
            (Term::Float(x), Term::Float(y)) => x.to_bits() == y.to_bits() || x == y,
            (Term::Var(x), Term::Var(y)) => x.id == y.id,
            (Term::Compound(x), Term::Compound(y)) => {
                if !Arc::ptr_eq(x, y) {
                    if x.functor != y.functor || x.args.len() != y.args.len() {
                        return false;
                    }
                    stack.extend(x.args.iter().zip(y.args.iter()).rev());
                }
                true
            }
            _ => false,
        };
        if !same {
            return false;
        }
    }
    true
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        term_equal(self, other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid element name `{0}`")]
    InvalidName(String),
    #[error("invalid attribute identifier `{0}`")]
    InvalidAttributeId(String),
}

/// XML name check used by the constructors, the parser and validation.
pub fn is_xml_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':'))
}

/// Renders an attribute entry atom `id="value"`.
pub fn attribute_atom(id: &str, value: &str) -> String {
    format!("{id}=\"{value}\"")
}

/// Splits an attribute atom at the first `="`; the value excludes the closing quote.
pub fn split_attribute(entry: &str) -> Option<(&str, &str)> {
    let eq = entry.find("=\"")?;
    let rest = &entry[eq + 2..];
    let value = rest.strip_suffix('"')?;
    Some((&entry[..eq], value))
}

pub fn mk_element(name: &str, attrs: &[(&str, &str)], children: Vec<Term>) -> Result<Term, TermError> {
    if !is_xml_name(name) {
        return Err(TermError::InvalidName(name.to_string()));
    }
    let mut entries = Vec::with_capacity(attrs.len());
    for (id, value) in attrs {
        if !is_xml_name(id) {
            return Err(TermError::InvalidAttributeId(id.to_string()));
        }
        entries.push(Term::Atom(Arc::from(attribute_atom(id, value))));
    }
    Ok(element(Term::atom(name), Term::list(entries), Term::list(children)))
}

pub fn element(name: Term, attrs: Term, children: Term) -> Term {
    Term::compound("element", vec![name, attrs, children])
}

pub fn text(t: &str) -> Term {
    Term::compound("text", vec![Term::atom(t)])
}

pub fn comment(t: &str) -> Term {
    Term::compound("comment", vec![Term::atom(t)])
}

pub fn pi(t: &str) -> Term {
    Term::compound("pi", vec![Term::atom(t)])
}

/// View of a term as an `element/3` node.
pub fn as_element(t: &Term) -> Option<(&Term, &Term, &Term)> {
    match t {
        Term::Compound(c) if &*c.functor == "element" && c.args.len() == 3 => {
            Some((&c.args[0], &c.args[1], &c.args[2]))
        }
        _ => None,
    }
}

/// Text payload of `text/1`, `comment/1` or `pi/1` when `kind` matches.
pub fn leaf_payload<'a>(t: &'a Term, kind: &str) -> Option<&'a Term> {
    match t {
        Term::Compound(c) if &*c.functor == kind && c.args.len() == 1 => Some(&c.args[0]),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Rendering

pub(crate) fn is_symbol_char(c: char) -> bool {
    "+-*/\\^<>=~:.?@#&$".contains(c)
}

fn atom_needs_quotes(s: &str) -> bool {
    if s.is_empty() {
        return true;
    }
    if matches!(s, "[]" | "!" | ";") {
        return false;
    }
    let first = s.chars().next().unwrap();
    if first.is_ascii_lowercase() {
        return !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    }
    if s.chars().all(is_symbol_char) {
        // A lone `.` would read as an end token; `%` never appears here.
        return s == ".";
    }
    true
}

pub fn quote_atom(s: &str) -> String {
    if !atom_needs_quotes(s) {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("''"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

/// Float text that always reads back as a float.
pub fn format_float(f: f64) -> String {
    let s = format!("{f}");
    if s.contains(['.', 'e', 'E']) || !f.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}

/// Canonical text of a term, readable back by the rule reader.
pub fn render_term(t: &Term) -> String {
    let mut out = String::new();
    render_into(t, &mut out);
    out
}

fn render_into(t: &Term, out: &mut String) {
    match t {
        Term::Atom(a) => out.push_str(&quote_atom(a)),
        Term::Int(i) => out.push_str(&i.to_string()),
        Term::Float(f) => out.push_str(&format_float(*f)),
        Term::Var(v) => match &v.name {
            Some(n) => out.push_str(n),
            None => {
                out.push_str("_G");
                out.push_str(&v.id.to_string());
            }
        },
        Term::Compound(c) => {
            if t.as_cons().is_some() {
                out.push('[');
                let mut cur = t;
                let mut first = true;
                loop {
                    match cur.as_cons() {
                        Some((h, tail)) => {
                            if !first {
                                out.push(',');
                            }
                            first = false;
                            render_into(h, out);
                            cur = tail;
                        }
                        None => {
                            if !cur.is_nil() {
                                out.push('|');
                                render_into(cur, out);
                            }
                            break;
                        }
                    }
                }
                out.push(']');
                return;
            }
            match &*c.functor {
                "[]" | "{}" => {
                    out.push('\'');
                    out.push_str(&c.functor);
                    out.push('\'');
                }
                f => out.push_str(&quote_atom(f)),
            }
            out.push('(');
            for (i, a) in c.args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render_into(a, out);
            }
            out.push(')');
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_examples() {
        let e = mk_element("a", &[], vec![text("hallo")]).unwrap();
        assert_eq!(render_term(&e), "element(a,[],[text(hallo)])");
        let e = mk_element("a", &[("id", "1"), ("name", "i")], vec![]).unwrap();
        assert_eq!(render_term(&e), "element(a,['id=\"1\"','name=\"i\"'],[])");
        let e = mk_element("top", &[], vec![]).unwrap();
        assert_eq!(render_term(&e), "element(top,[],[])");
    }

    #[test]
    fn constructor_rejects_bad_tokens() {
        assert_eq!(
            mk_element("1a", &[], vec![]),
            Err(TermError::InvalidName("1a".into()))
        );
        assert_eq!(
            mk_element("", &[], vec![]),
            Err(TermError::InvalidName(String::new()))
        );
        assert_eq!(
            mk_element("a", &[("", "x")], vec![]),
            Err(TermError::InvalidAttributeId(String::new()))
        );
    }

    #[test]
    fn identity() {
        let a = mk_element("a", &[], vec![]).unwrap();
        let b = mk_element("b", &[], vec![]).unwrap();
        assert!(term_equal(&a, &a.clone()));
        assert!(!term_equal(&a, &b));
        assert!(!term_equal(&Term::var(1, "X"), &Term::var(2, "Y")));
        assert!(term_equal(&Term::var(1, "X"), &Term::var(1, "Other")));
    }

    #[test]
    fn quoting() {
        assert_eq!(render_term(&Term::atom("hallo welt")), "'hallo welt'");
        assert_eq!(render_term(&Term::atom("don't")), "'don''t'");
        assert_eq!(render_term(&Term::atom("[]")), "[]");
        assert_eq!(render_term(&Term::atom("Abc")), "'Abc'");
        assert_eq!(render_term(&Term::atom("^")), "^");
        assert_eq!(render_term(&Term::atom("")), "''");
        assert_eq!(render_term(&Term::Float(1.0)), "1.0");
        assert_eq!(render_term(&Term::Float(1.3)), "1.3");
    }

    #[test]
    fn lists() {
        let l = Term::list(vec![Term::Int(1), Term::atom("a")]);
        assert!(l.is_list());
        assert_eq!(render_term(&l), "[1,a]");
        let partial = Term::list_with_tail(vec![Term::Int(1)], Term::var(0, "T"));
        assert!(!partial.is_list());
        assert_eq!(render_term(&partial), "[1|T]");
        assert_eq!(l.list_items().unwrap().len(), 2);
    }

    #[test]
    fn attribute_split() {
        assert_eq!(split_attribute("id=\"1\""), Some(("id", "1")));
        assert_eq!(split_attribute("id=1"), None);
        assert_eq!(split_attribute("a=\"x\"y\""), Some(("a", "x\"y")));
    }
}
