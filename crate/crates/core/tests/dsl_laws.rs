use bvkit::dsl::{evaluate, parse, print_expr, print_script, EvalOptions, Expr, ExprKind, Func, Span};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const FRAGMENTS: &[&str] = &[
    "context", "{", "}", "x", "t", "y'", ":", "deg", "-1", "0", "1", ";", "let", "f", "=", "+", "-", "*",
    "^", "2", "/", "(", ")", "d", "sch", "lam", "hkr", "b", "delta", "star", "apply", ",", "check", "==",
    "show", "param", "eps", "trunc", "shift", "split", "constraint", "#", "\n", " ", "@", "3/0", "''",
];

fn fragment_soup() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(FRAGMENTS), 0..40).prop_map(|v| v.join(" "))
}

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..5, 1i64..4).prop_map(|(n, d)| ExprKind::Num(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        prop::sample::select(vec!["x", "y", "t", "x'", "f"]).prop_map(|v| ExprKind::Var(v.into())),
    ]
    .prop_map(|kind| Expr { kind, span: Span::default() });
    leaf.prop_recursive(4, 24, 3, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |a| ExprKind::Neg(b(a))),
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| ExprKind::Add(b(a), b(c))),
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| ExprKind::Sub(b(a), b(c))),
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| ExprKind::Mul(b(a), b(c))),
            (inner.clone(), 0u32..4).prop_map(move |(a, k)| ExprKind::Pow(b(a), k)),
            (inner.clone(), inner.clone()).prop_map(|(a, c)| ExprKind::Call(Func::Sch, vec![a, c])),
            inner.clone().prop_map(|a| ExprKind::Call(Func::Hkr, vec![a])),
            (inner.clone(), prop::collection::vec(inner, 1..3)).prop_map(|(a, mut rest)| {
                rest.insert(0, a);
                ExprKind::Call(Func::Lam, rest)
            }),
        ]
        .prop_map(|kind| Expr { kind, span: Span::default() })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parser_is_total(src in fragment_soup()) {
        // either a script or diagnostics with a position, never a panic
        match parse(&src) {
            Ok(s) => {
                let again = parse(&print_script(&s));
                prop_assert_eq!(again.ok(), Some(s.clone()));
                let _ = evaluate(&s, EvalOptions::default());
            }
            Err(d) => prop_assert!(!d.is_empty() && d[0].line >= 1 && d[0].col >= 1),
        }
    }

    #[test]
    fn arbitrary_text_never_panics(src in "\\PC{0,60}") {
        let _ = parse(&src);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printed_expressions_reparse_to_the_same_tree(e in expr_tree()) {
        let src = format!("let g = {};", print_expr(&e));
        let s = parse(&src).unwrap();
        let bvkit::dsl::Item::Let { expr, .. } = &s.items[0] else { panic!() };
        prop_assert_eq!(expr, &e);
    }
}
