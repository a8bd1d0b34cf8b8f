#![allow(dead_code)]
//! Seeded random node terms.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use termxform::term::{attribute_atom, comment, element, pi, text, Term};

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub const NAMES: [&str; 8] = ["a", "b", "c", "name", "item", "x-y", "n.1", "_u"];
const ATTR_IDS: [&str; 7] = ["id", "k", "lang", "x", "y", "data-v", "ns:z"];
const CHARS: [char; 16] = ['a', 'b', 'Z', '0', ' ', '&', '<', '>', '"', '\'', 'ä', '€', '-', '?', '.', '\t'];

pub fn rng(seed: u64) -> Rng8 {
    Rng8::seed_from_u64(seed)
}

pub fn word(r: &mut Rng8, min: usize, max: usize) -> String {
    let n = r.gen_range(min..=max);
    (0..n).map(|_| *CHARS.choose(r).unwrap()).collect()
}

/// Text that survives parsing unchanged: not empty and not only whitespace.
pub fn text_payload(r: &mut Rng8) -> String {
    loop {
        let w = word(r, 1, 8);
        if !w.trim().is_empty() {
            return w;
        }
    }
}

/// Comment text as the parser produces it: trimmed, no `--`, no trailing `-`.
pub fn comment_payload(r: &mut Rng8) -> String {
    loop {
        let w = word(r, 0, 8).trim().to_string();
        if !w.contains("--") && !w.ends_with('-') {
            return w;
        }
    }
}

pub fn pi_payload(r: &mut Rng8) -> String {
    loop {
        let w = word(r, 0, 8).trim().to_string();
        if !w.contains('>') {
            return w;
        }
    }
}

pub fn attrs(r: &mut Rng8) -> Vec<Term> {
    let n = r.gen_range(0..=3);
    let mut ids: Vec<&str> = ATTR_IDS.to_vec();
    ids.shuffle(r);
    ids.truncate(n);
    ids.iter()
        .map(|id| {
            let v = word(r, 0, 6);
            Term::atom(&attribute_atom(id, &v))
        })
        .collect()
}

/// Attribute list that may repeat ids.
pub fn attr_list(r: &mut Rng8, max: usize) -> Vec<Term> {
    let n = r.gen_range(0..=max);
    (0..n)
        .map(|_| {
            let id = *ATTR_IDS.choose(r).unwrap();
            let v = word(r, 0, 4);
            Term::atom(&attribute_atom(id, &v))
        })
        .collect()
}

pub struct TreeShape {
    pub depth: usize,
    pub fanout: usize,
    /// Allow text, comment and pi children.
    pub leaves: bool,
}

/// A valid node term in the form the XML parser would produce.
pub fn tree(r: &mut Rng8, shape: &TreeShape) -> Term {
    let name = *NAMES.choose(r).unwrap();
    element(Term::atom(name), Term::list(attrs(r)), Term::list(children(r, shape, shape.depth)))
}

fn children(r: &mut Rng8, shape: &TreeShape, depth: usize) -> Vec<Term> {
    if depth <= 1 && !shape.leaves {
        return Vec::new();
    }
    let n = r.gen_range(0..=shape.fanout);
    let mut out: Vec<Term> = Vec::new();
    for _ in 0..n {
        let kind = if shape.leaves { r.gen_range(0..5) } else { 0 };
        let node = match kind {
            0 | 1 if depth > 1 => {
                let name = *NAMES.choose(r).unwrap();
                element(Term::atom(name), Term::list(attrs(r)), Term::list(children(r, shape, depth - 1)))
            }
            0..=2 => {
                if out.last().is_some_and(|t| t.functor() == Some(("text", 1))) {
                    continue;
                }
                text(&text_payload(r))
            }
            3 => comment(&comment_payload(r)),
            _ => pi(&pi_payload(r)),
        };
        out.push(node);
    }
    out
}

/// Shuffles attribute lists at every depth.
pub fn permute_attrs(r: &mut Rng8, t: &Term) -> Term {
    match termxform::term::as_element(t) {
        Some((n, a, c)) => {
            let mut attrs = a.list_items().unwrap();
            attrs.shuffle(r);
            let kids: Vec<Term> = c.list_items().unwrap().iter().map(|k| permute_attrs(r, k)).collect();
            element(n.clone(), Term::list(attrs), Term::list(kids))
        }
        None => t.clone(),
    }
}
