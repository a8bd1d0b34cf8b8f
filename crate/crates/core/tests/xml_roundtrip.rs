mod common;

use std::fs;
use std::path::Path;

use common::gen::{rng, tree, TreeShape};
use proptest::prelude::*;
use termxform::term::{render_term, term_equal};
use termxform::xml::{check_serializable, escape_attr, escape_text, parse_document, serialize_document, unescape};

/// Drops whitespace-only runs between tags and the trailing newline.
fn normalize(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find('>') {
        out.push_str(&rest[..=i]);
        rest = &rest[i + 1..];
        let j = rest.find('<').unwrap_or(rest.len());
        if !rest[..j].trim().is_empty() {
            out.push_str(&rest[..j]);
        }
        rest = &rest[j..];
    }
    out.push_str(rest.trim());
    out
}

fn corpus() -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "xml"))
        .map(|p| (p.display().to_string(), fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn corpus_serializes_back_to_itself() {
    let docs = corpus();
    assert!(docs.len() >= 20);
    for (name, src) in docs {
        let t = parse_document(&src).unwrap_or_else(|e| panic!("{name}: {e}"));
        check_serializable(&t).unwrap_or_else(|e| panic!("{name}: {e}"));
        let out = serialize_document(&t).unwrap();
        assert_eq!(out, normalize(&src), "{name}");
        assert!(term_equal(&parse_document(&out).unwrap(), &t), "{name}");
    }
}

#[test]
fn truncated_documents_are_rejected() {
    for (name, src) in corpus() {
        let cut = src.trim_end().len() - 2;
        let cut = (0..=cut).rev().find(|&i| src.is_char_boundary(i)).unwrap();
        assert!(parse_document(&src[..cut]).is_err(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parse_inverts_serialize(seed in any::<u64>()) {
        let t = tree(&mut rng(seed), &TreeShape { depth: 4, fanout: 4, leaves: true });
        let xml = serialize_document(&t).unwrap();
        let back = parse_document(&xml).unwrap();
        prop_assert!(term_equal(&back, &t), "{} became {}", render_term(&t), render_term(&back));
    }

    #[test]
    fn parsed_terms_validate(seed in any::<u64>()) {
        let t = tree(&mut rng(seed), &TreeShape { depth: 3, fanout: 3, leaves: true });
        let xml = serialize_document(&t).unwrap();
        prop_assert!(check_serializable(&parse_document(&xml).unwrap()).is_ok());
    }

    #[test]
    fn escaping_is_involutive(s in "[a-z&<>\"' ;#]{0,24}") {
        prop_assert_eq!(unescape(&escape_text(&s)), s.clone());
        prop_assert_eq!(unescape(&escape_attr(&s)), s);
    }
}
