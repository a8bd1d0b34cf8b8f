use super::arith::{compare_numbers, eval_is, eval_number, string_value, EvalError};
use super::bindings::copy_fresh;
use super::solver::Machine;
use crate::prelude::{canon, strings};
use crate::term::{term_equal, Term};

pub(crate) type BuiltinFn = fn(&mut Machine<'_>, &[Term]) -> bool;

pub(crate) enum Builtin {
    /// Always native; a program cannot redefine it.
    Core(BuiltinFn),
    /// Native unless the program defines the predicate itself.
    Soft(BuiltinFn),
}

pub(crate) fn lookup(name: &str, arity: usize) -> Option<Builtin> {
    use Builtin::*;
    let f: Builtin = match (name, arity) {
        ("=", 2) => Core(|m, a| m.unify(&a[0], &a[1])),
        ("\\=", 2) => Core(|m, a| !unifiable(m, &a[0], &a[1])),
        ("==", 2) => Core(|m, a| term_equal(&m.resolve(&a[0]), &m.resolve(&a[1]))),
        ("\\==", 2) => Core(|m, a| !term_equal(&m.resolve(&a[0]), &m.resolve(&a[1]))),
        ("var", 1) => Core(|m, a| matches!(m.deref(&a[0]), Term::Var(_))),
        ("nonvar", 1) => Core(|m, a| !matches!(m.deref(&a[0]), Term::Var(_))),
        ("atom", 1) => Core(|m, a| matches!(m.deref(&a[0]), Term::Atom(_))),
        ("number", 1) => Core(|m, a| m.deref(&a[0]).is_number()),
        ("integer", 1) => Core(|m, a| matches!(m.deref(&a[0]), Term::Int(_))),
        ("float", 1) => Core(|m, a| matches!(m.deref(&a[0]), Term::Float(_))),
        ("compound", 1) => Core(|m, a| matches!(m.deref(&a[0]), Term::Compound(_))),
        ("atomic", 1) => Core(|m, a| matches!(m.deref(&a[0]), Term::Atom(_) | Term::Int(_) | Term::Float(_))),
        ("callable", 1) => Core(|m, a| m.deref(&a[0]).is_callable()),
        ("ground", 1) => Core(|m, a| m.resolve(&a[0]).is_ground()),
        ("list", 1) | ("is_list", 1) => Core(|m, a| m.resolve(&a[0]).is_list()),
        ("isnumber", 1) => Core(|m, a| numeric(&m.deref(&a[0]), |_| true)),
        ("fnumber", 1) => Core(|m, a| numeric(&m.deref(&a[0]), |t| matches!(t, Term::Float(_)))),
        ("inumber", 1) => Core(|m, a| numeric(&m.deref(&a[0]), |t| matches!(t, Term::Int(_)))),
        ("is", 2) => Core(is),
        ("<", 2) => Core(|m, a| compare(m, a, |o| o.is_lt())),
        (">", 2) => Core(|m, a| compare(m, a, |o| o.is_gt())),
        ("=<", 2) => Core(|m, a| compare(m, a, |o| o.is_le())),
        (">=", 2) => Core(|m, a| compare(m, a, |o| o.is_ge())),
        ("=:=", 2) => Core(|m, a| compare(m, a, |o| o.is_eq())),
        ("=\\=", 2) => Core(|m, a| compare(m, a, |o| o.is_ne())),
        ("atom_codes", 2) => Core(|m, a| atom_text(m, a, |s| s.chars().map(|c| Term::Int(c as i64)).collect(), code_char)),
        ("atom_chars", 2) => Core(|m, a| atom_text(m, a, |s| s.chars().map(|c| Term::atom(&c.to_string())).collect(), char_char)),
        ("atom_length", 2) => Core(atom_length),
        ("copy_term", 2) => Core(|m, a| {
            let t = m.resolve(&a[0]);
            let c = copy_fresh(&t, &mut m.bindings);
            m.unify(&a[1], &c)
        }),
        ("functor", 3) => Core(functor),
        ("arg", 3) => Core(arg),
        ("write", 1) => Core(|m, a| {
            let t = m.resolve(&a[0]);
            let s = match &t {
                Term::Atom(x) => x.to_string(),
                other => other.to_string(),
            };
            m.solver().sink.write(&s);
            true
        }),
        ("nl", 0) => Core(|m, _| {
            m.solver().sink.write("\n");
            true
        }),
        ("delete", 3) => Soft(delete),
        ("upper_first", 2) => Soft(|m, a| text_pred(m, a, strings::upper_first)),
        ("lower_first", 2) => Soft(|m, a| text_pred(m, a, strings::lower_first)),
        ("first_upper", 2) => Soft(|m, a| text_pred(m, a, strings::first_upper)),
        ("first_lower", 2) => Soft(|m, a| text_pred(m, a, strings::first_lower)),
        ("contains", 2) => Soft(|m, a| text_pred(m, a, |s, p| s.contains(p))),
        ("starts_with", 2) => Soft(|m, a| text_pred(m, a, |s, p| s.starts_with(p))),
        ("upcase", 2) => Soft(upcase),
        ("canon", 2) => Soft(canon_pred),
        ("equals", 2) => Soft(|m, a| canon::equals(&m.resolve(&a[0]), &m.resolve(&a[1]))),
        _ => return None,
    };
    Some(f)
}

/// True if the two terms unify; bindings are not kept.
fn unifiable(m: &mut Machine<'_>, a: &Term, b: &Term) -> bool {
    let mark = m.bindings.mark();
    let ok = m.unify(a, b);
    m.bindings.undo_to(mark);
    ok
}

fn numeric(t: &Term, kind: fn(&Term) -> bool) -> bool {
    match t {
        Term::Int(_) | Term::Float(_) => kind(t),
        Term::Atom(a) => {
            let s = a.trim();
            if let Ok(i) = s.parse::<i64>() {
                kind(&Term::Int(i))
            } else if s.contains('.') && s.chars().all(|c| c.is_ascii_digit() || "+-.eE".contains(c)) {
                s.parse::<f64>().is_ok_and(|f| kind(&Term::Float(f)))
            } else {
                false
            }
        }
        _ => false,
    }
}

fn warn_eval(m: &Machine<'_>, goal: &str, a: &[Term], e: &EvalError) {
    let shown: Vec<String> = a.iter().map(|t| m.resolve(t).to_string()).collect();
    m.solver().sink.warn(&format!("{goal}({}): {e}", shown.join(",")));
}

fn is(m: &mut Machine<'_>, a: &[Term]) -> bool {
    match eval_is(&a[1], &m.bindings) {
        Ok(v) => m.unify(&a[0], &v),
        Err(EvalError::Unbound) => false,
        Err(e) => {
            warn_eval(m, "is", a, &e);
            false
        }
    }
}

fn compare(m: &mut Machine<'_>, a: &[Term], test: fn(std::cmp::Ordering) -> bool) -> bool {
    let x = eval_number(&a[0], &m.bindings);
    let y = eval_number(&a[1], &m.bindings);
    match (x, y) {
        (Ok(x), Ok(y)) => compare_numbers(&x, &y).is_some_and(test),
        (Err(EvalError::Unbound), _) | (_, Err(EvalError::Unbound)) => false,
        (Err(e), _) | (_, Err(e)) => {
            warn_eval(m, "comparison", a, &e);
            false
        }
    }
}

fn code_char(t: &Term) -> Option<char> {
    match t {
        Term::Int(i) => u32::try_from(*i).ok().and_then(char::from_u32),
        _ => None,
    }
}

fn char_char(t: &Term) -> Option<char> {
    let s = t.as_atom()?;
    let mut it = s.chars();
    let c = it.next()?;
    it.next().is_none().then_some(c)
}

fn atom_text(
    m: &mut Machine<'_>,
    a: &[Term],
    explode: fn(&str) -> Vec<Term>,
    item: fn(&Term) -> Option<char>,
) -> bool {
    let x = m.deref(&a[0]);
    match &x {
        Term::Var(_) => {
            let l = m.resolve(&a[1]);
            let Some(items) = l.list_items() else { return false };
            let Some(s) = items.iter().map(item).collect::<Option<String>>() else {
                return false;
            };
            m.unify(&x, &Term::atom(&s))
        }
        Term::Compound(_) => false,
        other => {
            let s = string_value(other).unwrap_or_default();
            let l = Term::list(explode(&s));
            m.unify(&a[1], &l)
        }
    }
}

fn atom_length(m: &mut Machine<'_>, a: &[Term]) -> bool {
    match m.deref(&a[0]) {
        t @ (Term::Atom(_) | Term::Int(_) | Term::Float(_)) => {
            let n = string_value(&t).unwrap_or_default().chars().count();
            m.unify(&a[1], &Term::Int(n as i64))
        }
        _ => false,
    }
}

fn functor(m: &mut Machine<'_>, a: &[Term]) -> bool {
    let t = m.deref(&a[0]);
    match &t {
        Term::Var(_) => {
            let name = m.deref(&a[1]);
            let Term::Int(n) = m.deref(&a[2]) else { return false };
            if n < 0 {
                return false;
            }
            let built = match (&name, n) {
                (_, 0) if !matches!(name, Term::Var(_) | Term::Compound(_)) => name.clone(),
                (Term::Atom(f), n) => {
                    let args = (0..n).map(|_| m.bindings.fresh_var()).collect();
                    Term::compound_atom(f.clone(), args)
                }
                _ => return false,
            };
            m.unify(&t, &built)
        }
        Term::Compound(c) => {
            let (f, n) = (Term::Atom(c.functor.clone()), Term::Int(c.args.len() as i64));
            m.unify(&a[1], &f) && m.unify(&a[2], &n)
        }
        other => m.unify(&a[1], other) && m.unify(&a[2], &Term::Int(0)),
    }
}

fn arg(m: &mut Machine<'_>, a: &[Term]) -> bool {
    let (Term::Int(n), Term::Compound(c)) = (m.deref(&a[0]), m.deref(&a[1])) else {
        return false;
    };
    if n < 1 || n as usize > c.args.len() {
        return false;
    }
    m.unify(&a[2], &c.args[n as usize - 1])
}

/// `delete(X, List, Rest)`: drops every element that unifies with `X`, binding nothing.
fn delete(m: &mut Machine<'_>, a: &[Term]) -> bool {
    let Some(items) = m.resolve(&a[1]).list_items() else {
        return false;
    };
    let x = m.resolve(&a[0]);
    let kept: Vec<Term> = items.into_iter().filter(|it| !unifiable(m, &x, it)).collect();
    m.unify(&a[2], &Term::list(kept))
}

fn text_pred(m: &mut Machine<'_>, a: &[Term], f: fn(&str, &str) -> bool) -> bool {
    let (x, y) = (m.resolve(&a[0]), m.resolve(&a[1]));
    match (text_of(&x), text_of(&y)) {
        (Some(x), Some(y)) => f(&x, &y),
        _ => false,
    }
}

fn text_of(t: &Term) -> Option<String> {
    match t {
        Term::Atom(_) | Term::Int(_) | Term::Float(_) => string_value(t),
        _ => None,
    }
}

/// `upcase(Upper, Word)`: works from the word to its upper-case form only.
fn upcase(m: &mut Machine<'_>, a: &[Term]) -> bool {
    let w = m.resolve(&a[1]);
    let Some(s) = text_of(&w) else { return false };
    m.unify(&a[0], &Term::atom(&s.to_ascii_uppercase()))
}

fn canon_pred(m: &mut Machine<'_>, a: &[Term]) -> bool {
    let l = m.resolve(&a[0]);
    let Some(items) = l.list_items() else { return false };
    match canon::canon(&items) {
        Ok(sorted) => m.unify(&a[1], &Term::list(sorted)),
        Err(e) => {
            m.solver().sink.warn(&format!("canon: {e}"));
            false
        }
    }
}
