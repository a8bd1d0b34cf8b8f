use std::sync::Arc;

use super::lexer::{Tok, Token};
use super::ops::{Fixity, OperatorTable};
use super::ReadError;
use crate::term::Term;

/// How a token took part in the parse. Used by the metrics classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Punctuation, operator symbols and functor names.
    Operator,
    /// Atoms, numbers, variables and strings in argument position.
    Operand,
}

/// A parsed term with its clause-local variable table.
#[derive(Clone, Debug)]
pub struct ReadTerm {
    pub term: Term,
    /// Named variables in order of first occurrence.
    pub var_names: Vec<(String, usize)>,
    pub var_count: usize,
}

pub struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    ops: OperatorTable,
    vars: Vec<(String, usize)>,
    next_var: usize,
    roles: Vec<Option<Role>>,
}

impl<'t> Parser<'t> {
    pub fn new(toks: &'t [Token], ops: OperatorTable) -> Self {
        Parser {
            toks,
            pos: 0,
            ops,
            vars: Vec::new(),
            next_var: 0,
            roles: vec![None; toks.len()],
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn ops(&self) -> &OperatorTable {
        &self.ops
    }

    pub fn ops_mut(&mut self) -> &mut OperatorTable {
        &mut self.ops
    }

    pub fn into_parts(self) -> (OperatorTable, Vec<Option<Role>>) {
        (self.ops, self.roles)
    }

    fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'t Token> {
        self.toks.get(self.pos + n)
    }

    fn advance(&mut self, role: Role) -> Option<&'t Token> {
        let t = self.toks.get(self.pos)?;
        self.roles[self.pos] = Some(role);
        self.pos += 1;
        Some(t)
    }

    fn error_here(&self, message: impl Into<String>) -> ReadError {
        let (line, col) = match self.peek().or_else(|| self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        };
        ReadError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn describe(&self) -> String {
        match self.peek().map(|t| &t.tok) {
            None => "end of input".into(),
            Some(Tok::End) => "end of clause".into(),
            Some(Tok::Name { text, .. }) => format!("`{text}`"),
            Some(Tok::Var(v)) => format!("variable `{v}`"),
            Some(Tok::Int(i)) => format!("`{i}`"),
            Some(Tok::Float(f)) => format!("`{f}`"),
            Some(Tok::Str(s)) => format!("\"{s}\""),
            Some(Tok::Punct(c)) => format!("`{c}`"),
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ReadError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Punct(p), ..
            }) if *p == c => {
                self.advance(Role::Operator);
                Ok(())
            }
            _ => Err(self.error_here(format!("expected `{c}`, found {}", self.describe()))),
        }
    }

    fn var(&mut self, name: &str) -> Term {
        if name == "_" {
            let id = self.next_var;
            self.next_var += 1;
            return Term::anon(id);
        }
        let id = match self.vars.iter().find(|(n, _)| n == name) {
            Some((_, id)) => *id,
            None => {
                let id = self.next_var;
                self.next_var += 1;
                self.vars.push((name.to_string(), id));
                id
            }
        };
        Term::var(id, name)
    }

    /// Reads one term terminated by `.` (or end of input when `allow_eof`).
    pub fn read_clause_term(&mut self, allow_eof: bool) -> Result<ReadTerm, ReadError> {
        self.vars.clear();
        self.next_var = 0;
        let term = self.parse(1200)?.0;
        match self.peek() {
            Some(Token { tok: Tok::End, .. }) => {
                self.advance(Role::Operator);
            }
            None if allow_eof => {}
            _ => {
                return Err(self.error_here(format!(
                    "operator expected, found {}",
                    self.describe()
                )))
            }
        }
        Ok(ReadTerm {
            term,
            var_names: std::mem::take(&mut self.vars),
            var_count: self.next_var,
        })
    }

    fn can_start_term(&self, tok: &Token) -> bool {
        match &tok.tok {
            Tok::End => false,
            Tok::Punct(c) => matches!(c, '(' | '[' | '{'),
            Tok::Name { text, quoted } => {
                if *quoted {
                    return true;
                }
                // An infix operator right after a prefix operator makes the
                // prefix operator an atom operand, unless it is a functor call.
                let is_call = matches!(
                    self.toks.get(self.pos + 1),
                    Some(Token { tok: Tok::Punct('('), spaced: false, .. })
                );
                is_call || self.ops.infix(text).is_none() || self.ops.prefix(text).is_some()
            }
            _ => true,
        }
    }

    pub fn parse(&mut self, max: u16) -> Result<(Term, u16), ReadError> {
        let (mut left, mut left_prec) = self.parse_primary(max)?;
        while let Some(tok) = self.peek() {
            let name = match &tok.tok {
                Tok::Name {
                    text,
                    quoted: false,
                } => text.as_str(),
                Tok::Punct(',') => ",",
                _ => break,
            };
            let Some((p, fixity)) = self.ops.infix(name) else {
                break;
            };
            let (lmax, rmax) = match fixity {
                Fixity::Xfx => (p - 1, p - 1),
                Fixity::Xfy => (p - 1, p),
                Fixity::Yfx => (p, p - 1),
                Fixity::Fy | Fixity::Fx => unreachable!("prefix stored as infix"),
            };
            if p > max || left_prec > lmax {
                break;
            }
            self.advance(Role::Operator);
            let (right, _) = self.parse(rmax)?;
            left = Term::compound(name, vec![left, right]);
            left_prec = p;
        }
        Ok((left, left_prec))
    }

    fn parse_arglist(&mut self) -> Result<Vec<Term>, ReadError> {
        let mut args = vec![self.parse(999)?.0];
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Punct(',')) => {
                    self.advance(Role::Operator);
                    args.push(self.parse(999)?.0);
                }
                Some(Tok::Punct(')')) => {
                    self.advance(Role::Operator);
                    return Ok(args);
                }
                _ => {
                    return Err(self.error_here(format!(
                        "expected `,` or `)` in arguments, found {}",
                        self.describe()
                    )))
                }
            }
        }
    }

    fn parse_list(&mut self) -> Result<Term, ReadError> {
        // `[` already consumed
        if let Some(Tok::Punct(']')) = self.peek().map(|t| &t.tok) {
            self.advance(Role::Operator);
            return Ok(Term::nil());
        }
        let mut items = vec![self.parse(999)?.0];
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Punct(',')) => {
                    self.advance(Role::Operator);
                    items.push(self.parse(999)?.0);
                }
                Some(Tok::Punct('|')) => {
                    self.advance(Role::Operator);
                    let tail = self.parse(999)?.0;
                    self.expect_punct(']')?;
                    return Ok(Term::list_with_tail(items, tail));
                }
                Some(Tok::Punct(']')) => {
                    self.advance(Role::Operator);
                    return Ok(Term::list(items));
                }
                _ => {
                    return Err(self.error_here(format!(
                        "expected `,`, `|` or `]` in list, found {}",
                        self.describe()
                    )))
                }
            }
        }
    }

    fn parse_primary(&mut self, max: u16) -> Result<(Term, u16), ReadError> {
        let Some(tok) = self.peek() else {
            return Err(self.error_here("unexpected end of input"));
        };
        match &tok.tok {
            Tok::Int(i) => {
                self.advance(Role::Operand);
                Ok((Term::Int(*i), 0))
            }
            Tok::Float(f) => {
                self.advance(Role::Operand);
                Ok((Term::Float(*f), 0))
            }
            Tok::Var(name) => {
                self.advance(Role::Operand);
                Ok((self.var(name), 0))
            }
            Tok::Str(s) => {
                self.advance(Role::Operand);
                Ok((Term::Atom(Arc::from(s.as_str())), 0))
            }
            Tok::Punct('(') => {
                self.advance(Role::Operator);
                let (t, _) = self.parse(1200)?;
                self.expect_punct(')')?;
                Ok((t, 0))
            }
            Tok::Punct('[') => {
                self.advance(Role::Operator);
                Ok((self.parse_list()?, 0))
            }
            Tok::Punct(c) => Err(self.error_here(format!("unexpected `{c}`"))),
            Tok::End => Err(self.error_here("unexpected end of clause")),
            Tok::Name { text, quoted } => {
                let text = text.as_str();
                let next = self.peek_at(1);
                if let Some(Token {
                    tok: Tok::Punct('('),
                    spaced: false,
                    ..
                }) = next
                {
                    self.advance(Role::Operator);
                    self.advance(Role::Operator);
                    let args = self.parse_arglist()?;
                    return Ok((Term::compound(text, args), 0));
                }
                if !quoted && text == "-" {
                    if let Some(Token {
                        tok: num @ (Tok::Int(_) | Tok::Float(_)),
                        spaced: false,
                        ..
                    }) = next
                    {
                        self.advance(Role::Operand);
                        self.advance(Role::Operand);
                        let t = match num {
                            Tok::Int(i) => Term::Int(-i),
                            Tok::Float(f) => Term::Float(-f),
                            _ => unreachable!(),
                        };
                        return Ok((t, 0));
                    }
                }
                if !quoted {
                    if let Some((p, fixity)) = self.ops.prefix(text) {
                        let operand_follows = {
                            self.pos += 1;
                            let ok = self.peek().is_some_and(|t| self.can_start_term(t));
                            self.pos -= 1;
                            ok
                        };
                        if operand_follows && p <= max {
                            self.advance(Role::Operator);
                            let arg_max = if fixity == Fixity::Fy { p } else { p - 1 };
                            let (arg, _) = self.parse(arg_max)?;
                            return Ok((Term::compound(text, vec![arg]), p));
                        }
                    }
                }
                self.advance(Role::Operand);
                Ok((Term::atom(text), 0))
            }
        }
    }
}
