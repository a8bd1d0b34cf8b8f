mod common;

use common::gen::{attr_list, rng};
use common::{count, program, solver};
use proptest::prelude::*;
use termxform::engine::Bindings;
use termxform::metrics::{halstead, HalsteadCounts};
use termxform::prelude::canon;
use termxform::reader::parse_term;
use termxform::term::{render_term, split_attribute, term_equal, Term};

fn atom_text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z][a-zA-Z0-9_]{0,5}",
        "[A-Z_][a-z]{0,3}",
        "[+*/<>=\\\\^#@?.:-]{1,3}",
        "[a-z '\"\\\\.,|(){}\\[\\]%]{0,8}",
        Just("[]".to_string()),
        Just("!".to_string()),
        Just(";".to_string()),
        Just(",".to_string()),
        Just("|".to_string()),
        Just("don't".to_string()),
    ]
}

fn ground_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        atom_text().prop_map(|s| Term::atom(&s)),
        any::<i64>().prop_map(Term::Int),
        (-1e6f64..1e6).prop_map(Term::Float),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (atom_text(), prop::collection::vec(inner.clone(), 1..4)).prop_map(|(f, a)| Term::compound(&f, a)),
            prop::collection::vec(inner.clone(), 0..4).prop_map(Term::list),
            (prop::collection::vec(inner.clone(), 1..3), inner).prop_map(|(a, t)| Term::list_with_tail(a, t)),
        ]
    })
}

fn open_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b", "c"]).prop_map(Term::atom),
        (0usize..4).prop_map(|i| Term::var(i, &format!("V{i}"))),
        (0i64..3).prop_map(Term::Int),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        (prop::sample::select(vec!["f", "g"]), prop::collection::vec(inner, 1..3)).prop_map(|(f, a)| Term::compound(f, a))
    })
}

fn resolved_pair(b: &Bindings, x: &Term, y: &Term) -> (Term, Term) {
    (b.resolve(x), b.resolve(y))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn render_then_read_is_identity(t in ground_term()) {
        let s = render_term(&t);
        let back = parse_term(&s).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
        prop_assert!(term_equal(&back, &t), "{} read as {}", s, render_term(&back));
    }

    #[test]
    fn lists_are_proper(items in prop::collection::vec(any::<i64>(), 0..20)) {
        let l = Term::list(items.iter().copied().map(Term::Int).collect());
        prop_assert!(l.is_list());
        let mut cur = &l;
        while let Some((_, tail)) = cur.as_cons() {
            cur = tail;
        }
        prop_assert!(cur.is_nil());
        prop_assert!(!Term::list_with_tail(vec![Term::Int(1)], Term::var(0, "T")).is_list());
    }

    #[test]
    fn unification_is_symmetric(a in open_term(), b in open_term()) {
        let mut b1 = Bindings::with_first_id(10);
        let mut b2 = Bindings::with_first_id(10);
        let ok1 = b1.unify(&a, &b, true);
        let ok2 = b2.unify(&b, &a, true);
        prop_assert_eq!(ok1, ok2);
        if ok1 {
            let (x1, y1) = resolved_pair(&b1, &a, &b);
            prop_assert!(term_equal(&x1, &y1));
            let (x2, _) = resolved_pair(&b2, &a, &b);
            // same instance up to renaming: equal shape after grounding variables
            prop_assert_eq!(shape(&x1), shape(&x2));
        }
    }

    #[test]
    fn unification_is_idempotent(a in open_term(), b in open_term()) {
        let mut bs = Bindings::with_first_id(10);
        if bs.unify(&a, &b, true) {
            let n = bs.len();
            prop_assert!(bs.unify(&a, &b, true));
            prop_assert_eq!(bs.len(), n);
        }
    }

    #[test]
    fn undo_restores_bindings(a in open_term(), b in open_term(), c in open_term()) {
        let mut bs = Bindings::with_first_id(10);
        let _ = bs.unify(&a, &c, false);
        let before = bs.clone();
        let mark = bs.mark();
        let _ = bs.unify(&a, &b, false);
        bs.undo_to(mark);
        for t in [&a, &b, &c] {
            prop_assert!(term_equal(&bs.resolve(t), &before.resolve(t)));
        }
        prop_assert_eq!(bs.len(), before.len());
    }

    #[test]
    fn append_has_n_plus_one_splits(n in 0usize..8) {
        let items: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let p = program("");
        prop_assert_eq!(count(&p, &format!("append(A, B, [{}])", items.join(","))), n + 1);
    }

    #[test]
    fn negation_matches_solution_count(k in 0i64..6, xs in prop::collection::vec(0i64..6, 0..6)) {
        let list = format!("[{}]", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        let p = program("");
        let has = count(&p, &format!("member({k}, {list})")) > 0;
        prop_assert_eq!(count(&p, &format!("not(member({k}, {list}))")) == 1, !has);
    }

    #[test]
    fn canon_sorts_stably(seed in any::<u64>()) {
        let l = attr_list(&mut rng(seed), 8);
        let c = canon(&l).unwrap();
        prop_assert!(term_equal(&Term::list(canon(&c).unwrap()), &Term::list(c.clone())));
        let mut oracle = l.clone();
        oracle.sort_by(|x, y| id(x).cmp(id(y)));
        prop_assert!(term_equal(&Term::list(c), &Term::list(oracle)));
    }

    #[test]
    fn halstead_bounds(e1 in 1u64..60, e2 in 1u64..60, x1 in 0u64..400, x2 in 0u64..400) {
        let c = HalsteadCounts::new(e1, e2, e1 + x1, e2 + x2);
        if let Ok(r) = halstead::<f64>(c) {
            prop_assert!(r.delta_n >= 0.0 && r.delta_n < 100.0);
            prop_assert!(r.lambda > 0.0 && r.bugs > 0.0);
            prop_assert_eq!(r.delta_n == 0.0, r.estimated_length == r.length as f64);
            prop_assert_eq!(halstead::<f64>(c).unwrap(), r);
        }
    }
}

fn id(t: &Term) -> &str {
    split_attribute(t.as_atom().unwrap()).unwrap().0
}

// Variables differ between the two directions only by naming.
fn shape(t: &Term) -> String {
    fn erase(t: &Term) -> Term {
        match t {
            Term::Var(_) => Term::atom("_"),
            Term::Compound(c) => Term::compound(&c.functor, c.args.iter().map(erase).collect()),
            other => other.clone(),
        }
    }
    render_term(&erase(t))
}

#[test]
fn solver_runs_are_repeatable() {
    let p = program("p(X) :- member(X, [c,a,b]).");
    let s = solver(&p);
    let q = parse_term("p(X)").unwrap();
    let a: Vec<String> = s.solve(&q).map(|r| render_term(&r.unwrap().goal)).collect();
    let b: Vec<String> = s.solve(&q).map(|r| render_term(&r.unwrap().goal)).collect();
    assert_eq!(a, b);
}
