use std::fmt;

use thiserror::Error;

use crate::term::{is_xml_name, split_attribute, Term};

/// First offending subterm, located by child indexes from the root.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ValidationError {
    pub path: Vec<usize>,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at path {:?}: {}", self.path, self.message)
    }
}

fn not_expected(t: &Term) -> String {
    format!("Error: {t} was not expected here!")
}

fn payload_ok(t: &Term) -> bool {
    matches!(t, Term::Atom(_) | Term::Int(_) | Term::Float(_))
}

fn check_attributes(attrs: &Term) -> Result<(), String> {
    let Some(items) = attrs.list_items() else {
        return Err(format!("Error in remaining attributes list: {attrs}"));
    };
    let mut ids: Vec<&str> = Vec::new();
    for (i, a) in items.iter().enumerate() {
        let remaining = || Term::list(items[i..].to_vec());
        let Some((id, _)) = a.as_atom().and_then(split_attribute) else {
            return Err(format!("Error in remaining attributes list: {}", remaining()));
        };
        if !is_xml_name(id) {
            return Err(format!(
                "Error in remaining attributes list: {} (invalid attribute name `{id}`)",
                remaining()
            ));
        }
        if ids.contains(&id) {
            return Err(format!(
                "Error in remaining attributes list: {} (duplicate attribute `{id}`)",
                remaining()
            ));
        }
        ids.push(id);
    }
    Ok(())
}

fn check(t: &Term, path: &mut Vec<usize>) -> Result<(), ValidationError> {
    let fail = |path: &Vec<usize>, message: String| {
        Err(ValidationError {
            path: path.clone(),
            message,
        })
    };
    let Some(c) = t.as_compound() else {
        return fail(path, not_expected(t));
    };
    match (&*c.functor, c.args.len()) {
        ("text", 1) if payload_ok(&c.args[0]) => Ok(()),
        ("comment", 1) => match c.args[0].as_atom() {
            Some(s) if s.contains("--") || s.ends_with('-') => {
                fail(path, format!("Error: comment text {} must not contain `--`", c.args[0]))
            }
            Some(_) => Ok(()),
            None => fail(path, not_expected(t)),
        },
        ("pi", 1) => match c.args[0].as_atom() {
            Some(s) if s.contains('>') => fail(
                path,
                format!("Error: processing instruction {} must not contain `>`", c.args[0]),
            ),
            Some(_) => Ok(()),
            None => fail(path, not_expected(t)),
        },
        ("element", 3) => {
            let name = c.args[0].as_atom();
            if name.is_none_or(|n| !is_xml_name(n)) {
                return fail(path, not_expected(t));
            }
            if let Err(m) = check_attributes(&c.args[1]) {
                return fail(path, m);
            }
            let Some(children) = c.args[2].list_items() else {
                return fail(path, format!("Error: {} was not expected here!", c.args[2]));
            };
            for (i, ch) in children.iter().enumerate() {
                path.push(i);
                check(ch, path)?;
                path.pop();
            }
            Ok(())
        }
        _ => fail(path, not_expected(t)),
    }
}

/// Checks that `t` is a node term that can be written as XML.
pub fn check_serializable(t: &Term) -> Result<(), ValidationError> {
    check(t, &mut Vec::new())
}
