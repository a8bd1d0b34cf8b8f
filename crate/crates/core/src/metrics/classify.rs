use std::collections::HashSet;

use thiserror::Error;

use super::halstead::HalsteadCounts;
use crate::reader::lexer::{Tok, Token};
use crate::reader::{read_with_roles, OperatorTable, ReadError, Role};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Operator,
    Operand,
}

/// Token classification rules. Read from `key=value` lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyConfig {
    /// Class of a compound's functor name outside clause heads.
    pub functor_as: Class,
    /// Class of the predicate name of a clause head.
    pub head_as: Class,
    /// Count `( ) [ ] | , .` and friends.
    pub punctuation: bool,
    /// Variables are distinct per clause rather than per program.
    pub vars_per_clause: bool,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            functor_as: Class::Operator,
            head_as: Class::Operand,
            punctuation: true,
            vars_per_clause: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {0}: expected key=value")]
    Syntax(usize),
    #[error("line {0}: unknown key `{1}`")]
    Key(usize, String),
    #[error("line {0}: bad value `{1}`")]
    Value(usize, String),
}

fn class(v: &str) -> Option<Class> {
    match v {
        "operator" => Some(Class::Operator),
        "operand" => Some(Class::Operand),
        _ => None,
    }
}

fn flag(v: &str) -> Option<bool> {
    match v {
        "true" | "yes" | "on" => Some(true),
        "false" | "no" | "off" => Some(false),
        _ => None,
    }
}

impl ClassifyConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = ClassifyConfig::default();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(n))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = || ConfigError::Value(n, v.to_string());
            match k {
                "functor_as" => c.functor_as = class(v).ok_or_else(bad)?,
                "head_as" => c.head_as = class(v).ok_or_else(bad)?,
                "punctuation" => c.punctuation = flag(v).ok_or_else(bad)?,
                "variables" => {
                    c.vars_per_clause = match v {
                        "per_clause" => true,
                        "per_program" => false,
                        _ => return Err(bad()),
                    }
                }
                _ => return Err(ConfigError::Key(n, k.to_string())),
            }
        }
        Ok(c)
    }
}

/// Non-blank lines that are not entirely comment.
pub fn count_loc(src: &str) -> u64 {
    let mut in_block = false;
    let mut n = 0;
    for line in src.lines() {
        let mut rest = line.trim();
        let mut code = false;
        while !rest.is_empty() {
            if in_block {
                match rest.find("*/") {
                    Some(i) => {
                        in_block = false;
                        rest = rest[i + 2..].trim_start();
                    }
                    None => rest = "",
                }
            } else if rest.starts_with("/*") {
                in_block = true;
                rest = &rest[2..];
            } else if rest.starts_with('%') {
                rest = "";
            } else {
                code = true;
                rest = "";
            }
        }
        if code {
            n += 1;
        }
    }
    n
}

fn key(t: &Token) -> String {
    match &t.tok {
        Tok::Name { text, .. } => format!("a:{text}"),
        Tok::Var(v) => format!("v:{v}"),
        Tok::Int(i) => format!("n:{i}"),
        Tok::Float(f) => format!("n:{f}"),
        Tok::Str(s) => format!("s:{s}"),
        Tok::Punct(c) => format!("p:{c}"),
        Tok::End => "p:.".into(),
    }
}

/// Operator and operand counts of a rule program under `cfg`.
pub fn tokenize_classify(src: &str, ops: OperatorTable, cfg: &ClassifyConfig) -> Result<HalsteadCounts, ReadError> {
    let (toks, roles) = read_with_roles(src, ops)?;
    let mut operators: HashSet<String> = HashSet::new();
    let mut operands: HashSet<String> = HashSet::new();
    let (mut n1, mut n2) = (0u64, 0u64);
    let mut clause = 0usize;
    let mut clause_start = true;
    for (t, role) in toks.iter().zip(&roles) {
        let structural = matches!(t.tok, Tok::Punct(_) | Tok::End);
        let class = match (&t.tok, role) {
            (Tok::Name { .. }, _) if clause_start => cfg.head_as,
            (_, _) if structural => Class::Operator,
            (Tok::Name { .. }, Some(Role::Operator)) => cfg.functor_as,
            (_, Some(Role::Operator)) => Class::Operator,
            _ => Class::Operand,
        };
        let mut k = key(t);
        if cfg.vars_per_clause && matches!(t.tok, Tok::Var(_)) {
            k = format!("{k}#{clause}");
        }
        if !(structural && !cfg.punctuation) {
            match class {
                Class::Operator => {
                    n1 += 1;
                    operators.insert(k);
                }
                Class::Operand => {
                    n2 += 1;
                    operands.insert(k);
                }
            }
        }
        clause_start = t.tok == Tok::End;
        if clause_start {
            clause += 1;
        }
    }
    Ok(HalsteadCounts {
        eta1: operators.len() as u64,
        eta2: operands.len() as u64,
        n1,
        n2,
        loc: count_loc(src),
        bytes: src.len() as u64,
    })
}
