//! Evaluation of the right-hand side of `is/2`: arithmetic plus the string
//! and node functors (`cat`, `substring`, `plus`, ...).

use thiserror::Error;

use super::bindings::Bindings;
use crate::term::{format_float, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable in arithmetic expression")]
    Unbound,
    #[error("type error: {0}")]
    Type(String),
    #[error("evaluation error: {0}")]
    Range(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("division by zero")]
    DivZero,
}

#[derive(Clone, Copy, Debug)]
enum Num {
    I(i64),
    F(f64),
}

impl Num {
    fn f(self) -> f64 {
        match self {
            Num::I(i) => i as f64,
            Num::F(f) => f,
        }
    }

    fn term(self) -> Term {
        match self {
            Num::I(i) => Term::Int(i),
            Num::F(f) => Term::Float(f),
        }
    }
}

fn parse_number(s: &str) -> Option<Num> {
    let s = s.trim();
    if let Ok(i) = s.parse::<i64>() {
        return Some(Num::I(i));
    }
    if s.is_empty() || !s.chars().any(|c| c.is_ascii_digit()) || s.contains(|c: char| c.is_alphabetic() && c != 'e' && c != 'E') {
        return None;
    }
    s.parse::<f64>().ok().filter(|f| f.is_finite()).map(Num::F)
}

/// String value of a term: atoms as is, numbers printed, nodes by their text content.
pub fn string_value(t: &Term) -> Option<String> {
    match t {
        Term::Atom(a) => Some(a.to_string()),
        Term::Int(i) => Some(i.to_string()),
        Term::Float(f) => Some(format_float(*f)),
        Term::Var(_) => None,
        Term::Compound(c) => {
            if let Some(items) = t.list_items() {
                let mut s = String::new();
                for i in &items {
                    s.push_str(&string_value(i)?);
                }
                return Some(s);
            }
            match (&*c.functor, c.args.len()) {
                ("text", 1) => string_value(&c.args[0]),
                ("comment", 1) | ("pi", 1) => Some(String::new()),
                ("element", 3) => {
                    let mut s = String::new();
                    for ch in c.args[2].list_items()? {
                        s.push_str(&string_value(&ch)?);
                    }
                    Some(s)
                }
                _ => None,
            }
        }
    }
}

struct Eval<'b> {
    b: &'b Bindings,
}

impl Eval<'_> {
    fn num(&self, t: &Term) -> Result<Num, EvalError> {
        match self.value(t)? {
            Term::Int(i) => Ok(Num::I(i)),
            Term::Float(f) => Ok(Num::F(f)),
            other => Err(EvalError::Type(format!("number expected, found {other}"))),
        }
    }

    // Numbers, text nodes and elements with a single text child.
    fn node_num(&self, t: &Term) -> Result<Num, EvalError> {
        let r = self.b.resolve(t);
        if let Term::Var(_) = r {
            return Err(EvalError::Unbound);
        }
        let text = match &r {
            Term::Compound(c) if &*c.functor == "text" && c.args.len() == 1 => string_value(&c.args[0]),
            Term::Compound(c) if &*c.functor == "element" && c.args.len() == 3 => {
                match c.args[2].list_items().as_deref() {
                    Some([Term::Compound(t)]) if &*t.functor == "text" && t.args.len() == 1 => string_value(&t.args[0]),
                    _ => None,
                }
            }
            _ => return self.num(&r),
        };
        text.as_deref()
            .and_then(parse_number)
            .ok_or_else(|| EvalError::Type(format!("numeric node expected, found {r}")))
    }

    fn string(&self, t: &Term) -> Result<String, EvalError> {
        let v = self.value(t)?;
        if !v.is_ground() {
            return Err(EvalError::Unbound);
        }
        string_value(&v).ok_or_else(|| EvalError::Type(format!("cannot convert {v} to text")))
    }

    fn int(&self, t: &Term) -> Result<i64, EvalError> {
        match self.num(t)? {
            Num::I(i) => Ok(i),
            Num::F(f) => Err(EvalError::Type(format!("integer expected, found {}", format_float(f)))),
        }
    }

    /// Evaluates `t` to an atom or a number. Lists and nodes stay as terms for `cat`/`string`.
    fn value(&self, t: &Term) -> Result<Term, EvalError> {
        let t = self.b.deref(t).clone();
        match &t {
            Term::Var(_) => Err(EvalError::Unbound),
            Term::Int(_) | Term::Float(_) | Term::Atom(_) => Ok(t),
            Term::Compound(c) => {
                let a = &c.args;
                let name = &*c.functor;
                if t.as_cons().is_some() {
                    return Ok(self.b.resolve(&t));
                }
                match (name, a.len()) {
                    ("text" | "element" | "comment" | "pi", _) => Ok(self.b.resolve(&t)),
                    ("+", 2) => self.arith(name, &a[0], &a[1], i64::checked_add, |x, y| x + y),
                    ("-", 2) => self.arith(name, &a[0], &a[1], i64::checked_sub, |x, y| x - y),
                    ("*", 2) => self.arith(name, &a[0], &a[1], i64::checked_mul, |x, y| x * y),
                    ("/", 2) => {
                        let (x, y) = (self.num(&a[0])?.f(), self.num(&a[1])?.f());
                        if y == 0.0 {
                            return Err(EvalError::DivZero);
                        }
                        Ok(Term::Float(x / y))
                    }
                    ("//", 2) => {
                        let (x, y) = (self.int(&a[0])?, self.int(&a[1])?);
                        if y == 0 {
                            return Err(EvalError::DivZero);
                        }
                        x.checked_div(y).map(Term::Int).ok_or_else(|| EvalError::Overflow("//".into()))
                    }
                    ("mod", 2) => {
                        let (x, y) = (self.int(&a[0])?, self.int(&a[1])?);
                        if y == 0 {
                            return Err(EvalError::DivZero);
                        }
                        // Result takes the sign of the divisor.
                        let r = x.checked_rem(y).ok_or_else(|| EvalError::Overflow("mod".into()))?;
                        Ok(Term::Int(if r != 0 && (r < 0) != (y < 0) { r + y } else { r }))
                    }
                    ("-", 1) => match self.num(&a[0])? {
                        Num::I(i) => i.checked_neg().map(Term::Int).ok_or_else(|| EvalError::Overflow("-".into())),
                        Num::F(f) => Ok(Term::Float(-f)),
                    },
                    ("+", 1) => Ok(self.num(&a[0])?.term()),
                    ("abs", 1) => match self.num(&a[0])? {
                        Num::I(i) => i.checked_abs().map(Term::Int).ok_or_else(|| EvalError::Overflow("abs".into())),
                        Num::F(f) => Ok(Term::Float(f.abs())),
                    },
                    ("min" | "max", 2) => {
                        let (x, y) = (self.num(&a[0])?, self.num(&a[1])?);
                        let pick_x = if name == "min" { x.f() <= y.f() } else { x.f() >= y.f() };
                        Ok(if pick_x { x } else { y }.term())
                    }
                    ("float", 1) => Ok(Term::Float(self.num(&a[0])?.f())),
                    ("truncate", 1) => Ok(Term::Int(self.num(&a[0])?.f().trunc() as i64)),
                    ("round", 1) => Ok(Term::Int(self.num(&a[0])?.f().round() as i64)),
                    ("plus", 2) => self.node_arith(&a[0], &a[1], i64::checked_add, |x, y| x + y),
                    ("minus", 2) => self.node_arith(&a[0], &a[1], i64::checked_sub, |x, y| x - y),
                    ("mult", 2) => self.node_arith(&a[0], &a[1], i64::checked_mul, |x, y| x * y),
                    ("div", 2) => {
                        let (x, y) = (self.node_num(&a[0])?.f(), self.node_num(&a[1])?.f());
                        if y == 0.0 {
                            return Err(EvalError::DivZero);
                        }
                        Ok(Term::Float(x / y))
                    }
                    ("cat", 1..=8) => {
                        let mut s = String::new();
                        for x in a.iter() {
                            s.push_str(&self.string(x)?);
                        }
                        Ok(Term::atom(&s))
                    }
                    ("string", 1) => Ok(Term::atom(&self.string(&a[0])?)),
                    ("substring", 3) => {
                        let s: Vec<char> = self.string(&a[0])?.chars().collect();
                        let (start, len) = (self.int(&a[1])?, self.int(&a[2])?);
                        if start < 1 || len < 0 || (start - 1).saturating_add(len) > s.len() as i64 {
                            return Err(EvalError::Range(format!(
                                "substring({start},{len}) out of range for length {}",
                                s.len()
                            )));
                        }
                        let from = (start - 1) as usize;
                        Ok(Term::atom(&s[from..from + len as usize].iter().collect::<String>()))
                    }
                    ("substring_after", 2) => {
                        let (s, p) = (self.string(&a[0])?, self.string(&a[1])?);
                        Ok(Term::atom(s.find(&p).map(|i| &s[i + p.len()..]).unwrap_or("")))
                    }
                    ("substring_before", 2) => {
                        let (s, p) = (self.string(&a[0])?, self.string(&a[1])?);
                        Ok(Term::atom(s.find(&p).map(|i| &s[..i]).unwrap_or("")))
                    }
                    ("translate", 3) => {
                        let s = self.string(&a[0])?;
                        let from: Vec<char> = self.string(&a[1])?.chars().collect();
                        let to: Vec<char> = self.string(&a[2])?.chars().collect();
                        let out: String = s
                            .chars()
                            .filter_map(|c| match from.iter().position(|&f| f == c) {
                                Some(i) => to.get(i).copied(),
                                None => Some(c),
                            })
                            .collect();
                        Ok(Term::atom(&out))
                    }
                    ("normalize_space", 1) => Ok(Term::atom(self.string(&a[0])?.trim())),
                    _ => Err(EvalError::Type(format!("unknown function {name}/{}", a.len()))),
                }
            }
        }
    }

    fn arith(
        &self,
        name: &str,
        x: &Term,
        y: &Term,
        int_op: fn(i64, i64) -> Option<i64>,
        float_op: fn(f64, f64) -> f64,
    ) -> Result<Term, EvalError> {
        let (x, y) = (self.num(x)?, self.num(y)?);
        combine(name, x, y, int_op, float_op)
    }

    fn node_arith(
        &self,
        x: &Term,
        y: &Term,
        int_op: fn(i64, i64) -> Option<i64>,
        float_op: fn(f64, f64) -> f64,
    ) -> Result<Term, EvalError> {
        let (x, y) = (self.node_num(x)?, self.node_num(y)?);
        combine("node arithmetic", x, y, int_op, float_op)
    }
}

fn combine(
    name: &str,
    x: Num,
    y: Num,
    int_op: fn(i64, i64) -> Option<i64>,
    float_op: fn(f64, f64) -> f64,
) -> Result<Term, EvalError> {
    match (x, y) {
        (Num::I(a), Num::I(b)) => int_op(a, b).map(Term::Int).ok_or_else(|| EvalError::Overflow(name.into())),
        _ => Ok(Term::Float(float_op(x.f(), y.f()))),
    }
}

/// Evaluates an `is/2` right-hand side under `b`.
pub fn eval_is(expr: &Term, b: &Bindings) -> Result<Term, EvalError> {
    let v = Eval { b }.value(expr)?;
    match &v {
        Term::Int(_) | Term::Float(_) | Term::Atom(_) => Ok(v),
        other => Err(EvalError::Type(format!("cannot evaluate {other}"))),
    }
}

/// Numeric value of an expression, for the comparison predicates.
pub fn eval_number(expr: &Term, b: &Bindings) -> Result<Term, EvalError> {
    let e = Eval { b };
    e.num(expr).map(Num::term)
}

/// Compares two numbers; integers exactly, mixed pairs as floats.
pub fn compare_numbers(x: &Term, y: &Term) -> Option<std::cmp::Ordering> {
    match (x, y) {
        (Term::Int(a), Term::Int(b)) => Some(a.cmp(b)),
        (Term::Int(_) | Term::Float(_), Term::Int(_) | Term::Float(_)) => {
            let f = |t: &Term| match t {
                Term::Int(i) => *i as f64,
                Term::Float(f) => *f,
                _ => unreachable!(),
            };
            f(x).partial_cmp(&f(y))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reader::parse_term;

    fn ev(s: &str) -> Result<Term, EvalError> {
        eval_is(&parse_term(s).unwrap(), &Bindings::new())
    }

    #[test]
    fn string_functors() {
        assert_eq!(ev("substring('hallo',1,3)").unwrap(), Term::atom("hal"));
        assert_eq!(ev("translate('goose','egos','EGOS')").unwrap(), Term::atom("GOOSE"));
        assert_eq!(ev("string(1.3)").unwrap(), Term::atom("1.3"));
        assert_eq!(ev("cat('hello',' ','world','!')").unwrap(), Term::atom("hello world!"));
        assert_eq!(ev("substring_after('hello world','hello ')").unwrap(), Term::atom("world"));
        assert_eq!(ev("substring_before('Hello world',' ')").unwrap(), Term::atom("Hello"));
        assert_eq!(ev("normalize_space('  a  b ')").unwrap(), Term::atom("a  b"));
        assert_eq!(ev("cat([a,b,1],c)").unwrap(), Term::atom("ab1c"));
        assert_eq!(ev("translate(abc,ab,'X')").unwrap(), Term::atom("Xc"));
    }

    #[test]
    fn node_arithmetic() {
        let r = ev("plus(element(a,[],[text('100')]), element(b,[],[text('4')]))").unwrap();
        assert_eq!(r, Term::Int(104));
        assert_eq!(ev("div(text('3'), 2)").unwrap(), Term::Float(1.5));
        assert_eq!(ev("mult(text('1.5'), 2)").unwrap(), Term::Float(3.0));
    }

    #[test]
    fn numbers() {
        assert_eq!(ev("1+2*3").unwrap(), Term::Int(7));
        assert_eq!(ev("7/2").unwrap(), Term::Float(3.5));
        assert_eq!(ev("7//2").unwrap(), Term::Int(3));
        assert_eq!(ev("24 mod 30").unwrap(), Term::Int(24));
        assert_eq!(ev("-7 mod 3").unwrap(), Term::Int(2));
        assert_eq!(ev("7 mod -3").unwrap(), Term::Int(-2));
        assert_eq!(ev("- (3)").unwrap(), Term::Int(-3));
    }

    #[test]
    fn errors() {
        assert_eq!(ev("X+1").unwrap_err(), EvalError::Unbound);
        assert!(matches!(ev("substring('hallo',4,3)"), Err(EvalError::Range(_))));
        assert!(matches!(ev("substring('hallo',0,1)"), Err(EvalError::Range(_))));
        assert!(matches!(ev("a+1"), Err(EvalError::Type(_))));
        assert_eq!(ev("1/0").unwrap_err(), EvalError::DivZero);
        assert!(matches!(ev("9223372036854775807+1"), Err(EvalError::Overflow(_))));
        assert!(matches!(ev("plus(text(abc),1)"), Err(EvalError::Type(_))));
    }
}
