mod common;

use common::{all, base, count, first, program};
use termxform::prelude::{canon, equals, tree_to_relation};
use termxform::reader::{default_operators, parse_term, Fixity, OperatorTable};
use termxform::term::render_term;

#[test]
fn operator_table() {
    let t = OperatorTable::with_defaults();
    assert_eq!(t.infix("/"), Some((100, Fixity::Yfx)));
    assert_eq!(t.prefix("atts"), Some((100, Fixity::Fy)));
    assert_eq!(t.lookup("unknownop"), None);
    for name in ["^", "@", "?", "id", "#", "c", "sort", "level"] {
        assert_eq!(t.infix(name), Some((100, Fixity::Yfx)), "{name}");
    }
    for name in ["sortbyName", "child", "descendant", "copy", "copy_of", "last", "count", "name", "distinct"] {
        assert_eq!(t.prefix(name), Some((100, Fixity::Fy)), "{name}");
    }
    assert!(default_operators().len() >= 20);
}

#[test]
fn navigation_examples() {
    let p = base();
    assert_eq!(
        first(p, "E = element(top,[],[element(b,['k=\"v\"'],[])]), transform(E / b, Y)", "Y").as_deref(),
        Some("element(b,['k=\"v\"'],[])")
    );
    assert_eq!(
        first(p, "E = element(a,['id=\"1234\"'],[]), transform(E @ id, V)", "V").as_deref(),
        Some("'1234'")
    );
    let doc = "D = element(name,[],[element(x,[],[element(name,[],[text(a)])]),element(name,[],[])])";
    assert_eq!(
        all(p, &format!("{doc}, transform(D ^ name, Y), Y = element(_,_,C), length(C, N)"), "N"),
        ["2", "1", "0"]
    );
    assert_eq!(
        first(p, "transform(copy element(n,['a=\"1\"'],[text(x)]), Y)", "Y").as_deref(),
        Some("element(n,[],[])")
    );
    assert_eq!(first(p, "transform(count element(t,[],[c1,c2,c3]), N)", "N").as_deref(), Some("3"));
    assert_eq!(
        first(p, "transform(copy_of element(n,['a=\"1\"'],[text(x)]), Y)", "Y").as_deref(),
        Some("element(n,['a=\"1\"'],[text(x)])")
    );
}

#[test]
fn chained_navigation() {
    let p = base();
    let doc = "D = element(r,[],[element(a,[],[element(b,['x=\"1\"'],[text(t1),comment(c1),pi(p1),text(t2)])])])";
    assert_eq!(first(p, &format!("{doc}, transform(D / a / b @ x, V)"), "V").as_deref(), Some("'1'"));
    assert_eq!(first(p, &format!("{doc}, transform(D / a / b # 2, V)"), "V").as_deref(), Some("t2"));
    assert_eq!(first(p, &format!("{doc}, transform(D ^ b c 1, V)"), "V").as_deref(), Some("c1"));
    assert_eq!(first(p, &format!("{doc}, transform(D ^ b ? 1, V)"), "V").as_deref(), Some("p1"));
    assert_eq!(count(p, &format!("{doc}, transform(D ^ b # 3, V)")), 0);
    assert_eq!(first(p, &format!("{doc}, transform(atts (D ^ b), V)"), "V").as_deref(), Some("[x]"));
    assert_eq!(count(p, &format!("{doc}, transform((D ^ b) ? x)")), 1);
    assert_eq!(count(p, &format!("{doc}, transform((D ^ b) ? y)")), 0);
    assert_eq!(first(p, &format!("{doc}, transform(D ^ b id '1', V)"), "V").as_deref(), Some("x"));
    assert_eq!(first(p, &format!("{doc}, transform(name (D / a), V)"), "V").as_deref(), Some("a"));
    assert_eq!(first(p, &format!("{doc}, transform(last (D ^ b), V)"), "V").as_deref(), Some("text(t2)"));
    assert_eq!(count(p, &format!("{doc}, transform(descendant D, V)")), 6);
    assert_eq!(first(p, &format!("{doc}, E = element(b,_,_), transform(D level E, V)"), "V").as_deref(), Some("[1,1]"));
}

#[test]
fn sort_and_distinct() {
    let p = base();
    let doc = "D = element(r,[],[element(i,['k=\"c\"'],[]),element(i,['k=\"a\"'],[]),element(i,['k=\"b\"'],[])])";
    assert_eq!(
        first(p, &format!("{doc}, transform(D sort k, element(_,_,C)), findall(V, (member(X, C), transform(X @ k, V)), Vs)"), "Vs").as_deref(),
        Some("[a,b,c]")
    );
    assert_eq!(
        first(p, "transform(sortbyName element(r,[],[element(c,[],[]),element(a,[],[]),element(b,[],[])]), Y)", "Y").as_deref(),
        Some("element(r,[],[element(a,[],[]),element(b,[],[]),element(c,[],[])])")
    );
    assert_eq!(
        first(p, "transform(distinct element(r,[],[text(a),text(b),text(a),text(c),text(b)]), Y)", "Y").as_deref(),
        Some("element(r,[],[text(a),text(b),text(c)])")
    );
}

#[test]
fn non_monotone_examples() {
    let p = base();
    assert_eq!(
        first(p, "insertBefore(element(t,[],[x1,x2]), newnode, 1, R)", "R").as_deref(),
        Some("element(t,[],[newnode,x1,x2])")
    );
    assert_eq!(
        first(p, "insertAfter(element(t,[],[x1,x2]), newnode, 2, R)", "R").as_deref(),
        Some("element(t,[],[x1,x2,newnode])")
    );
    assert_eq!(
        first(p, "insertBefore(element(t,[],[text(a),text(b)]), comment(n), text(b), R)", "R").as_deref(),
        Some("element(t,[],[text(a),comment(n),text(b)])")
    );
    assert_eq!(count(p, "insertBefore(element(t,[],[text(a)]), comment(n), nothere, R)"), 0);
    assert_eq!(
        first(p, "removeElement(element(t,[],[element(a,[],[]),text(x),element(a,['k=\"1\"'],[])]), a, R)", "R").as_deref(),
        Some("element(t,[],[text(x)])")
    );
    assert_eq!(
        first(p, "removeAttribute(element(t,['a=\"1\"','b=\"2\"','a=\"3\"'],[]), a, R)", "R").as_deref(),
        Some("element(t,['b=\"2\"','a=\"3\"'],[])")
    );
}

#[test]
fn helper_predicates() {
    let p = base();
    assert_eq!(first(p, "nth(2, [a,b,c], X)", "X").as_deref(), Some("b"));
    assert_eq!(all(p, "nth(N, [a,b,c], b)", "N"), ["2"]);
    assert_eq!(first(p, "church(T, 3)", "T").as_deref(), Some("s(s(s(zero)))"));
    assert_eq!(first(p, "church(s(s(zero)), N)", "N").as_deref(), Some("2"));
    assert_eq!(first(p, "concat([[a],[b,c],[]], X)", "X").as_deref(), Some("[a,b,c]"));
    assert_eq!(first(p, "concat(ab, cd, X)", "X").as_deref(), Some("abcd"));
    assert_eq!(first(p, "concat(X, cd, abcd)", "X").as_deref(), Some("ab"));
    assert_eq!(first(p, "concat(ab, X, abcd)", "X").as_deref(), Some("cd"));
    assert_eq!(first(p, "printTree(element(a,[],[text(x),element(b,[],[text(y)]),comment(z)]), S)", "S").as_deref(), Some("xy"));
    assert_eq!(
        first(p, "flatten(element(a,[],[text(x),element(b,[],[text(y)])]), L)", "L").as_deref(),
        Some("[element(a,[],[]),text(x),element(b,[],[]),text(y)]")
    );
    assert_eq!(count(p, "nodes(element(a,[],[text(x),element(b,[],[text(y)])]), L), length(L, 4)"), 1);
    assert_eq!(first(p, "quicksort([c,a,b,a], leStrings, S)", "S").as_deref(), Some("[a,a,b,c]"));
    assert_eq!(count(p, "checkSerializable(element(a,['x=\"1\"'],[text(t)]))"), 1);
    assert_eq!(count(p, "checkSerializable(element(a,[],[foo(t)]))"), 0);
}

#[test]
fn string_predicates() {
    let p = base();
    for (goal, ok) in [
        ("upper_first('Abc', abc)", true),
        ("upper_first(abc, 'Abc')", false),
        ("lower_first(abc, 'Abc')", true),
        ("contains(hallo, all)", true),
        ("contains(hallo, xyz)", false),
        ("starts_with(hallo, ha)", true),
        ("starts_with(hallo, lo)", false),
    ] {
        assert_eq!(count(p, goal) > 0, ok, "{goal}");
    }
    assert_eq!(first(p, "upcase(X, hallo)", "X").as_deref(), Some("'HALLO'"));
    assert_eq!(count(p, "upcase('HALLO', X)"), 0);
}

#[test]
fn canon_examples() {
    let l = |s: &str| parse_term(s).unwrap().list_items().unwrap();
    let r = canon(&l("['width=\"100\"','border=\"black\"']")).unwrap();
    assert_eq!(render_term(&termxform::Term::list(r)), "['border=\"black\"','width=\"100\"']");
    assert!(canon(&[]).unwrap().is_empty());
    let r = canon(&l("['a=\"2\"','a=\"1\"']")).unwrap();
    assert_eq!(render_term(&termxform::Term::list(r)), "['a=\"2\"','a=\"1\"']");
    let t = |s: &str| parse_term(s).unwrap();
    assert!(equals(&t("element(a,['x=\"1\"','y=\"2\"'],[])"), &t("element(a,['y=\"2\"','x=\"1\"'],[])")));
    assert!(equals(&t("text(h)"), &t("text(h)")));
    assert!(!equals(&t("element(a,[],[])"), &t("element(b,[],[])")));
    assert_eq!(count(base(), "equals(element(a,['x=\"1\"','y=\"2\"'],[]), element(a,['y=\"2\"','x=\"1\"'],[]))"), 1);
}

#[test]
fn relation_examples() {
    let x = parse_term(
        "element(x,_,[element(_,['id=\"123\"','name=\"hallo\"'],[]),element(_,['id=\"4\"','name=\"welt\"'],[]),element(_,['id=\"789\"','name=\"!\"'],[])])",
    )
    .unwrap();
    let facts: Vec<String> = tree_to_relation(&x).unwrap().iter().map(|c| render_term(&c.head)).collect();
    assert_eq!(facts, ["x(123,hallo)", "x(4,welt)", "x(789,!)"]);
    assert!(tree_to_relation(&parse_term("element(x,[],[])").unwrap()).unwrap().is_empty());
    assert!(tree_to_relation(&parse_term("element(x,[],[element(r,['id=\"1\"'],[]),element(r,['k=\"1\"'],[])])").unwrap()).is_err());
}

#[test]
fn user_clauses_follow_prelude() {
    let p = program("transform(hello, world).");
    assert_eq!(first(&p, "transform(hello, X)", "X").as_deref(), Some("world"));
    assert!(p.clause_count() > base().clause_count());
}
