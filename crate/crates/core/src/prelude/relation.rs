use thiserror::Error;

use crate::engine::Clause;
use crate::term::{as_element, split_attribute, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelationError {
    #[error("document root is not an element: {0}")]
    NotElement(String),
    #[error("relation name must be an atom, got {0}")]
    BadName(String),
    #[error("child {index} has nested elements")]
    Nested { index: usize },
    #[error("child {index} has attributes {found:?}, expected {expected:?}")]
    Heterogeneous {
        index: usize,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("child {index} has a malformed attribute list")]
    BadAttributes { index: usize },
}

fn value_term(v: &str) -> Term {
    match v.parse::<i64>() {
        Ok(i) if !v.starts_with('+') => Term::Int(i),
        _ => Term::atom(v),
    }
}

/// Reads an element as a relation: one fact per element child, arguments in identifier order.
pub fn tree_to_relation(doc: &Term) -> Result<Vec<Clause>, RelationError> {
    let (name, _, children) = as_element(doc).ok_or_else(|| RelationError::NotElement(doc.to_string()))?;
    let rel = name.as_atom().ok_or_else(|| RelationError::BadName(name.to_string()))?;
    let children = children
        .list_items()
        .ok_or_else(|| RelationError::NotElement(doc.to_string()))?;
    let mut expected: Option<Vec<String>> = None;
    let mut facts = Vec::new();
    for (index, child) in children.iter().enumerate() {
        let Some((_, attrs, kids)) = as_element(child) else {
            continue;
        };
        if kids
            .list_items()
            .is_none_or(|ks| ks.iter().any(|k| as_element(k).is_some()))
        {
            return Err(RelationError::Nested { index });
        }
        let mut pairs: Vec<(String, String)> = attrs
            .list_items()
            .ok_or(RelationError::BadAttributes { index })?
            .iter()
            .map(|a| {
                a.as_atom()
                    .and_then(split_attribute)
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or(RelationError::BadAttributes { index })
            })
            .collect::<Result<_, _>>()?;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let ids: Vec<String> = pairs.iter().map(|(k, _)| k.clone()).collect();
        match &expected {
            None => expected = Some(ids),
            Some(e) if *e != ids => {
                return Err(RelationError::Heterogeneous {
                    index,
                    expected: e.clone(),
                    found: ids,
                })
            }
            _ => {}
        }
        let args = pairs.iter().map(|(_, v)| value_term(v)).collect();
        facts.push(Clause::fact(Term::compound(rel, args)));
    }
    Ok(facts)
}
