use thiserror::Error;

use crate::term::{as_element, split_attribute, term_equal, Term};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("malformed attribute entry {entry} at index {index}")]
pub struct CanonError {
    pub index: usize,
    pub entry: String,
}

/// Stable sort of attribute atoms by identifier.
pub fn canon(attrs: &[Term]) -> Result<Vec<Term>, CanonError> {
    let mut keyed = Vec::with_capacity(attrs.len());
    for (index, t) in attrs.iter().enumerate() {
        let id = t
            .as_atom()
            .and_then(split_attribute)
            .map(|(id, _)| id.to_string())
            .ok_or_else(|| CanonError {
                index,
                entry: t.to_string(),
            })?;
        keyed.push((id, t.clone()));
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, t)| t).collect())
}

/// Document equality with attribute order ignored at every element.
pub fn equals(a: &Term, b: &Term) -> bool {
    match (as_element(a), as_element(b)) {
        (Some((na, aa, ca)), Some((nb, ab, cb))) => {
            if !term_equal(na, nb) {
                return false;
            }
            let (Some(aa), Some(ab)) = (aa.list_items(), ab.list_items()) else {
                return false;
            };
            match (canon(&aa), canon(&ab)) {
                (Ok(x), Ok(y)) if x.len() == y.len() => {
                    if !x.iter().zip(&y).all(|(p, q)| term_equal(p, q)) {
                        return false;
                    }
                }
                _ => return false,
            }
            let (Some(ca), Some(cb)) = (ca.list_items(), cb.list_items()) else {
                return false;
            };
            ca.len() == cb.len() && ca.iter().zip(&cb).all(|(p, q)| equals(p, q))
        }
        (None, None) => term_equal(a, b),
        _ => false,
    }
}
