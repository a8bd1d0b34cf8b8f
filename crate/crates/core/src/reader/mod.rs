//! Reader for the rule language: tokens, operator table and clause parser.

pub mod lexer;
pub mod ops;
pub mod parser;

use thiserror::Error;

use crate::engine::program::{Clause, Program};
use crate::term::Term;
use lexer::{Lexer, Tok, Token};
pub use ops::{default_operators, Fixity, OperatorDef, OperatorTable};
use parser::Parser;
pub use parser::{ReadTerm, Role};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReadError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("empty query")]
    EmptyQuery,
    #[error("bad directive at {line}:{col}: {message}")]
    Directive {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("bad clause at {line}:{col}: {message}")]
    Clause {
        line: usize,
        col: usize,
        message: String,
    },
}

impl ReadError {
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            ReadError::Syntax { line, col, .. }
            | ReadError::Directive { line, col, .. }
            | ReadError::Clause { line, col, .. } => Some((*line, *col)),
            ReadError::EmptyQuery => None,
        }
    }
}

fn check_brackets(toks: &[Token]) -> Result<(), ReadError> {
    let mut open: Vec<&Token> = Vec::new();
    for t in toks {
        match t.tok {
            Tok::Punct(c @ ('(' | '[' | '{')) => {
                let _ = c;
                open.push(t);
            }
            Tok::Punct(c @ (')' | ']' | '}')) => {
                let want = match c {
                    ')' => '(',
                    ']' => '[',
                    _ => '{',
                };
                match open.pop() {
                    Some(o) if o.tok == Tok::Punct(want) => {}
                    _ => {
                        return Err(ReadError::Syntax {
                            line: t.line,
                            col: t.col,
                            message: format!("unbalanced bracket `{c}`"),
                        })
                    }
                }
            }
            Tok::End if !open.is_empty() => break,
            _ => {}
        }
    }
    if let Some(o) = open.last() {
        let Tok::Punct(c) = o.tok else { unreachable!() };
        return Err(ReadError::Syntax {
            line: o.line,
            col: o.col,
            message: format!("unbalanced bracket `{c}`"),
        });
    }
    Ok(())
}

fn tokenize(text: &str) -> Result<Vec<Token>, ReadError> {
    let toks = Lexer::new(text).tokenize()?;
    check_brackets(&toks)?;
    Ok(toks)
}

fn apply_op_directive(ops: &mut OperatorTable, goal: &Term, at: &Token) -> Result<(), ReadError> {
    let err = |message: String| ReadError::Directive {
        line: at.line,
        col: at.col,
        message,
    };
    let Some(c) = goal.as_compound().filter(|c| &*c.functor == "op" && c.args.len() == 3) else {
        return Err(err(format!("unsupported directive {goal}")));
    };
    let precedence = match c.args[0] {
        Term::Int(p) if (0..=1200).contains(&p) => p as u16,
        _ => return Err(err(format!("precedence must be 0..1200, got {}", c.args[0]))),
    };
    let fixity: Fixity = c.args[1]
        .as_atom()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(format!("unknown operator type {}", c.args[1])))?;
    let names = match c.args[2].list_items() {
        Some(items) if !c.args[2].is_nil() => items,
        _ => vec![c.args[2].clone()],
    };
    for n in names {
        let name = n
            .as_atom()
            .ok_or_else(|| err(format!("operator name must be an atom, got {n}")))?;
        if !fixity.is_prefix() && precedence > 1100 && name != ":-" {
            return Err(err(format!("infix precedence above 1100 for `{name}`")));
        }
        ops.add(OperatorDef::new(name, precedence, fixity));
    }
    Ok(())
}

/// Reads every clause of `text`, applying `:- op/3` directives to `ops` as they appear.
pub fn read_clauses(text: &str, ops: &mut OperatorTable) -> Result<Vec<(ReadTerm, Token)>, ReadError> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks, std::mem::take(ops));
    let mut out = Vec::new();
    let result = (|| {
        while !p.at_end() {
            let first = toks[p.position()].clone();
            let rt = p.read_clause_term(false)?;
            if let Some(c) = rt.term.as_compound() {
                if &*c.functor == ":-" && c.args.len() == 1 {
                    apply_op_directive(p.ops_mut(), &c.args[0], &first)?;
                    continue;
                }
            }
            out.push((rt, first));
        }
        Ok(())
    })();
    *ops = p.into_parts().0;
    result.map(|_| out)
}

/// Parses a program using the default operator table.
pub fn parse_program(text: &str) -> Result<Program, ReadError> {
    parse_program_with(text, OperatorTable::with_defaults())
}

pub fn parse_program_with(text: &str, mut ops: OperatorTable) -> Result<Program, ReadError> {
    let clauses = read_clauses(text, &mut ops)?;
    let mut prog = Program::new();
    for (rt, at) in clauses {
        let clause = Clause::from_term(rt.term, rt.var_count).map_err(|message| ReadError::Clause {
            line: at.line,
            col: at.col,
            message,
        })?;
        prog.add_clause(clause);
    }
    prog.ops = ops;
    Ok(prog)
}

/// Reads a goal. A leading `?-` and the final `.` are optional.
pub fn parse_query(text: &str, ops: &OperatorTable) -> Result<ReadTerm, ReadError> {
    let toks = tokenize(text)?;
    if toks.is_empty() || toks.iter().all(|t| t.tok == Tok::End) {
        return Err(ReadError::EmptyQuery);
    }
    let mut p = Parser::new(&toks, ops.clone());
    let mut rt = p.read_clause_term(true)?;
    if !p.at_end() {
        let t = &toks[p.position()];
        return Err(ReadError::Syntax {
            line: t.line,
            col: t.col,
            message: "text after end of query".into(),
        });
    }
    if let Some(c) = rt.term.as_compound() {
        if &*c.functor == "?-" && c.args.len() == 1 {
            rt.term = c.args[0].clone();
        }
    }
    Ok(rt)
}

/// Reads a single term with the default operators.
pub fn parse_term(text: &str) -> Result<Term, ReadError> {
    parse_query(text, &OperatorTable::with_defaults()).map(|rt| rt.term)
}

/// Tokens of a whole program together with the role each one played in the parse.
pub fn read_with_roles(text: &str, ops: OperatorTable) -> Result<(Vec<Token>, Vec<Option<Role>>), ReadError> {
    let toks = tokenize(text)?;
    let mut p = Parser::new(&toks, ops);
    while !p.at_end() {
        let first = toks[p.position()].clone();
        let rt = p.read_clause_term(false)?;
        if let Some(c) = rt.term.as_compound() {
            if &*c.functor == ":-" && c.args.len() == 1 {
                apply_op_directive(p.ops_mut(), &c.args[0], &first)?;
            }
        }
    }
    let roles = p.into_parts().1;
    Ok((toks, roles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::render_term;

    fn r(s: &str) -> String {
        render_term(&parse_term(s).unwrap())
    }

    #[test]
    fn operators_associate() {
        assert_eq!(r("a/b/c"), "/(/(a,b),c)");
        assert_eq!(r("atts atts X"), "atts(atts(X))");
        assert_eq!(r("X ^ name"), "^(X,name)");
        assert_eq!(r("X^name#1"), "#(^(X,name),1)");
        assert_eq!(r("a:-b,c;d"), ":-(a,;(','(b,c),d))");
        assert_eq!(r("X is 1+2*3"), "is(X,+(1,*(2,3)))");
        assert_eq!(r("X = -1"), "=(X,-1)");
        assert_eq!(r("X is 3 - 1"), "is(X,-(3,1))");
        assert_eq!(r("- a"), "-(a)");
        assert_eq!(r("\\+ a"), "\\+(a)");
    }

    #[test]
    fn prefix_operators_as_atoms() {
        assert_eq!(r("f(name, count)"), "f(name,count)");
        assert_eq!(r("[-]"), "[-]");
        assert_eq!(r("X = name"), "=(X,name)");
        assert_eq!(r("f(- , a)"), "f(-,a)");
    }

    #[test]
    fn lists() {
        assert_eq!(r("[a,b|T]"), "[a,b|T]");
        assert_eq!(r("[]"), "[]");
        assert_eq!(r("[(a,b)]"), "[','(a,b)]");
    }

    #[test]
    fn program_groups_clauses() {
        let p = parse_program("gcd(A,0,A).\ngcd(A,B,C):-AB is A mod B, gcd(B,AB,C).").unwrap();
        let cs = p.clauses("gcd", 3).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs[0].body.is_empty());
        assert_eq!(cs[1].body.len(), 2);
    }

    #[test]
    fn template_example() {
        let p = parse_program("template(element(top,_,[A,A]),[text('a')]):-A=element(a,_,_).").unwrap();
        let cs = p.clauses("template", 2).unwrap();
        assert_eq!(cs[0].body.len(), 1);
    }

    #[test]
    fn op_directive() {
        let p = parse_program(":- op(700, xfx, ===>).\nrule(a ===> b).").unwrap();
        assert_eq!(p.ops.infix("===>"), Some((700, Fixity::Xfx)));
        assert!(parse_program(":- foo.").is_err());
    }

    #[test]
    fn queries() {
        let ops = OperatorTable::with_defaults();
        let q = parse_query("gcd(24,30,C).", &ops).unwrap();
        assert_eq!(q.var_names, vec![("C".to_string(), 0)]);
        let q = parse_query("?- X=1, Y=2.", &ops).unwrap();
        assert_eq!(q.term.functor(), Some((",", 2)));
        assert_eq!(parse_query("", &ops).unwrap_err(), ReadError::EmptyQuery);
        assert_eq!(parse_query("  % nothing\n", &ops).unwrap_err(), ReadError::EmptyQuery);
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_program("a(b.\n").unwrap_err();
        assert!(e.position().is_some(), "{e}");
        let e = parse_program("a :- b\nc.").unwrap_err();
        assert_eq!(e.position().unwrap().0, 2, "{e}");
        assert!(parse_program("a('b).").is_err());
        assert!(parse_program("a(b)).").is_err());
    }

    #[test]
    fn anonymous_vars_are_fresh() {
        let ops = OperatorTable::with_defaults();
        let q = parse_query("f(_,_,X,X)", &ops).unwrap();
        assert_eq!(q.var_count, 3);
    }
}
