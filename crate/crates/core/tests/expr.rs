use proptest::prelude::*;
use zygops_core::expr::BinOp;
use zygops_core::{parse_expression, Error, Expr};

const CORPUS: [&str; 50] = [
    "z",
    "1",
    "0.5",
    "2.5e-3",
    "(1+z)/2",
    "z^3 - 0.25*z",
    "z/2",
    "1 - z",
    "-z",
    "-z^2",
    "(-z)^2",
    "z^2^3",
    "(z^2)^3",
    "1/(1 - 0.5*z)",
    "(1 - a*z)^(-q)",
    "log(1/(1 - z))",
    "log(2/(1 - z/2))",
    "a*z + b",
    "conj(a)*z",
    "1 - conj(a)*z",
    "(z - 1)*((1 + log(1/(1 - z)))^2 + 1)",
    "z*z*z",
    "z - z - z",
    "z - (z - z)",
    "z/z/z",
    "z/(z/z)",
    "2*(z + 1)",
    "(z + 1)*(z - 1)",
    "3*z^2 + 2*z + 1",
    "z^0.5",
    "(1 + z)^1.5",
    "(1 - z)^(-2)",
    "--z",
    "-(1 + z)",
    "1 + -z",
    "z^-1",
    "z^(1/2)",
    "exp_rate*z",
    "0.9*z",
    "(0.3 + 0.4*z)/(1 + 0.1*z)",
    "log(z + 2)^2",
    "log(log(3 + z))",
    "z^4/24 + z^3/6 + z^2/2 + z + 1",
    "((z))",
    "1e2*z",
    "(z^2 - 1)^3",
    "z*(1 - z)^(-0.5)",
    "a - b*c + d/e",
    "(a - b)*(c + d)/e",
    "-1.5*z^2 + 0.75",
];

#[test]
fn corpus_round_trips() {
    for src in CORPUS {
        let tree = parse_expression(src).unwrap_or_else(|e| panic!("{src}: {e}"));
        let printed = tree.to_string();
        let reparsed = parse_expression(&printed).unwrap();
        assert_eq!(reparsed, tree, "{src} -> {printed}");
        assert_eq!(reparsed.to_string(), printed, "print is not a fixed point for {src}");
    }
}

#[test]
fn spec_examples() {
    let t = parse_expression("(1+z)/2").unwrap();
    assert_eq!(
        t,
        Expr::bin(BinOp::Div, Expr::bin(BinOp::Add, Expr::Num(1.0), Expr::Var), Expr::Num(2.0))
    );
    let t = parse_expression("z^3 - 0.25*z").unwrap();
    assert_eq!(
        t,
        Expr::bin(
            BinOp::Sub,
            Expr::bin(BinOp::Pow, Expr::Var, Expr::Num(3.0)),
            Expr::bin(BinOp::Mul, Expr::Num(0.25), Expr::Var)
        )
    );
    assert!(matches!(parse_expression("z +"), Err(Error::Parse { offset: 3, .. })));
}

#[test]
fn malformed_inputs() {
    for src in ["", "z +", "(1 + z", "1 + z)", "2 ** z", "log z", "conj(z)", "1..2", "z z"] {
        assert!(matches!(parse_expression(src), Err(Error::Parse { .. })), "{src}");
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|n| Expr::Num(n as f64 / 8.0)),
        Just(Expr::Var),
        Just(Expr::Imag),
        prop_oneof![Just("a"), Just("b"), Just("q")].prop_map(|s| Expr::Param(s.to_string())),
        Just(Expr::Conj("a".to_string())),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Log(Box::new(e))),
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div),
                    Just(BinOp::Pow)
                ],
                inner.clone(),
                inner
            )
                .prop_map(|(op, l, r)| Expr::bin(op, l, r)),
        ]
    })
}

proptest! {
    #[test]
    fn random_trees_round_trip(tree in arb_expr()) {
        let printed = tree.to_string();
        let reparsed = parse_expression(&printed).unwrap();
        prop_assert_eq!(&reparsed, &tree);
        prop_assert_eq!(reparsed.to_string(), printed);
    }
}
