use opax::syntax::{parse_with, reduction_order, render, traversal_order, ParseOptions, Style};
use opax::{parse, ErrorKind, OpKind, Operator, Term};
use proptest::prelude::*;

fn offset(text: &str) -> usize {
    match parse(text) {
        Err(opax::Error::Parse { offset, .. }) => offset,
        other => panic!("{text}: expected a parse error, got {other:?}"),
    }
}

#[test]
fn examples() {
    let p = |r| Operator::new(OpKind::Plus, r);
    let two = Term::node(p(1), Term::one(), Term::one());
    assert_eq!(parse("[1+1]").unwrap(), two);
    let fig = Term::node(
        Operator::new(OpKind::Minus, 4),
        Term::node(p(1), Term::one(), two.clone()),
        two.clone(),
    );
    assert_eq!(parse("[[1+[1+1]]----[1+1]]").unwrap(), fig);
    assert_eq!(parse(" [ [1+[1 + 1]] ---- [1+1] ] ").unwrap(), fig);
    assert_eq!(render(&fig, Style::Canonical), "[[1+[1+1]]----[1+1]]");
    assert_eq!(parse("3").unwrap(), Term::integer(3));
    assert_eq!(parse("[1+1] # two").unwrap(), two);
}

#[test]
fn errors() {
    assert_eq!(offset("[1+]"), 3);
    assert_eq!(offset("[1+1"), 4);
    assert_eq!(offset("[1+-1]"), 3);
    assert_eq!(offset("[1+1]]"), 5);
    assert_eq!(offset("[1x1]"), 2);
    assert_eq!(offset(""), 0);
    let opts = ParseOptions { max_depth: 3 };
    assert!(parse_with("[[[1+1]+1]+1]", &opts).is_ok());
    let e = parse_with("[[[[1+1]+1]+1]+1]", &opts).unwrap_err();
    assert_eq!(e.kind(), ErrorKind::Parse);
}

#[test]
fn orders() {
    assert!(traversal_order(&Term::one()).is_empty());
    let fig = parse("[[1+[1+1]]----[1+1]]").unwrap();
    let inorder: Vec<String> = traversal_order(&fig).iter().map(ToString::to_string).collect();
    assert_eq!(inorder, ["root.L", "root.L.R", "root", "root.R"]);
    let reduce: Vec<String> = reduction_order(&fig).iter().map(ToString::to_string).collect();
    assert_eq!(reduce, ["root.L.R", "root.L", "root.R", "root"]);
}

fn term() -> impl Strategy<Value = Term> {
    Just(Term::one()).prop_recursive(12, 200, 2, |inner| {
        (0..3usize, 1..9u32, inner.clone(), inner).prop_map(|(k, r, l, rt)| {
            let kind = [OpKind::Plus, OpKind::Minus, OpKind::Slash][k];
            Term::node(Operator::new(kind, r), l, rt)
        })
    })
}

proptest! {
    #[test]
    fn round_trips(t in term()) {
        prop_assert_eq!(parse(&render(&t, Style::Canonical)).unwrap(), t.clone());
        prop_assert_eq!(parse(&render(&t, Style::Sugared)).unwrap(), t.clone());
        prop_assert_eq!(traversal_order(&t).len(), t.internal_count());
    }
}
