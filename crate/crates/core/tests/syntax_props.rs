mod common;

use epsilon_forge::corpus::{gen_corpus, Limits};
use epsilon_forge::syntax::{
    parse_critical_set, parse_expr, print_expr, Conn, Expr, Fun, ParseError, Rel,
};
use proptest::prelude::*;

fn e(text: &str) -> Expr {
    parse_expr(text).unwrap()
}

const HINTS: &[&str] = &["x", "y", "z", "u", "x_1"];

fn hint() -> impl Strategy<Value = String> {
    prop::sample::select(HINTS).prop_map(str::to_string)
}

fn fun() -> impl Strategy<Value = Fun> {
    prop_oneof![Just(Fun::Plus), Just(Fun::Times), Just(Fun::Monus)]
}

fn rel() -> impl Strategy<Value = Rel> {
    prop_oneof![Just(Rel::Eq), Just(Rel::Lt)]
}

fn conn() -> impl Strategy<Value = Conn> {
    prop_oneof![Just(Conn::And), Just(Conn::Or), Just(Conn::Imp)]
}

/// Terms under `binders` enclosing epsilons; free names may collide with
/// binder hints to exercise renaming.
fn term(depth: u32, binders: u32) -> BoxedStrategy<Expr> {
    let mut leaves = vec![
        (0u64..20).prop_map(Expr::Num).boxed(),
        prop::sample::select(&["u", "v"][..])
            .prop_map(|n| Expr::Free(n.into()))
            .boxed(),
    ];
    if binders > 0 {
        leaves.push((0..binders).prop_map(Expr::Bound).boxed());
    }
    let leaf = prop::strategy::Union::new(leaves).boxed();
    if depth == 0 {
        return leaf;
    }
    prop_oneof![
        2 => leaf,
        2 => (fun(), term(depth - 1, binders), term(depth - 1, binders))
            .prop_map(|(f, a, b)| Expr::app(f, a, b)),
        1 => (hint(), formula(depth - 1, binders + 1)).prop_map(|(h, f)| Expr::eps(h, f)),
    ]
    .boxed()
}

fn formula(depth: u32, binders: u32) -> BoxedStrategy<Expr> {
    let atom = (
        rel(),
        term(depth.saturating_sub(1), binders),
        term(depth.saturating_sub(1), binders),
    )
        .prop_map(|(r, a, b)| Expr::atom(r, a, b));
    if depth == 0 {
        return prop_oneof![atom, any::<bool>().prop_map(Expr::Bool)].boxed();
    }
    prop_oneof![
        3 => atom,
        1 => formula(depth - 1, binders).prop_map(Expr::negate),
        1 => (conn(), formula(depth - 1, binders), formula(depth - 1, binders))
            .prop_map(|(c, a, b)| Expr::conn(c, a, b)),
    ]
    .boxed()
}

fn expr() -> BoxedStrategy<Expr> {
    prop_oneof![term(4, 0), formula(4, 0)].boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_print_round_trip(x in expr()) {
        let text = print_expr(&x);
        let back = parse_expr(&text).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(print_expr(&back), text);
        prop_assert!(back.well_sorted());
    }

    #[test]
    fn alpha_variants_are_equal(body in formula(3, 1), a in hint(), b in hint()) {
        prop_assert_eq!(Expr::eps(a, body.clone()), Expr::eps(b, body));
    }

    #[test]
    fn rank_bounded_by_nesting(x in expr()) {
        let mut eps = 0;
        x.walk(&mut |g, _| eps += g.is_epsilon() as u32);
        prop_assert!(x.rank() <= eps);
        prop_assert_eq!(x.rank() == 0, eps == 0);
    }
}

#[test]
fn alpha_equivalence_by_text() {
    assert_eq!(e("(eps x (= x 0))"), e("(eps y (= y 0))"));
    assert_eq!(
        e("(eps x (< x (eps y (< x y))))"),
        e("(eps a (< a (eps b (< a b))))")
    );
    assert_ne!(
        e("(eps x (< x (eps y (< x y))))"),
        e("(eps x (< x (eps y (< y x))))")
    );
}

#[test]
fn printing_avoids_capture() {
    // the inner binder is named like the free variable
    let x = Expr::eps(
        "u",
        Expr::atom(Rel::Eq, Expr::Bound(0), Expr::Free("u".into())),
    );
    let text = print_expr(&x);
    assert_eq!(text, "(eps u_1 (= u_1 u))");
    assert_eq!(parse_expr(&text).unwrap(), x);
}

#[test]
fn ranks() {
    assert_eq!(e("(+ 1 2)").rank(), 0);
    assert_eq!(e("(eps x (= x 0))").rank(), 1);
    assert_eq!(e("(eps x (< x (eps y (< x y))))").rank(), 2);
    // the inner term does not mention x
    assert_eq!(e("(eps x (< x (eps y (< y 1))))").rank(), 1);
    assert_eq!(e("(eps x (< 2 (eps y (< x (eps z (< y z))))))").rank(), 3);
    // the rank-2 subterm is closed, so x gets rank 1
    assert_eq!(e("(eps x (< 2 (eps y (< 1 (eps z (< y z))))))").rank(), 1);
    assert_eq!(
        e("(= (eps x (= x 0)) (eps x (< x (eps y (< x y)))))").rank(),
        2
    );
}

#[test]
fn parse_errors() {
    assert!(matches!(
        parse_critical_set("(crit x (< y x) 1)"),
        Err(ParseError::OpenVariable { .. })
    ));
    assert!(matches!(
        parse_critical_set("(crit x (< 0 x) y)"),
        Err(ParseError::OpenWitness { .. })
    ));
    assert!(parse_expr("(+ 1)").is_err());
    assert!(parse_expr("(eps crit (= crit 0))").is_err());
    assert!(parse_expr("(< 1 2").is_err());
}

#[test]
fn closed_terms_outer_first() {
    let limits = Limits::default();
    for inst in gen_corpus(7, 40, limits) {
        let text = inst.cr.to_string();
        assert_eq!(parse_critical_set(&text).unwrap(), inst.cr);
        let terms = inst.cr.closed_epsilon_terms();
        for (i, a) in terms.iter().enumerate() {
            assert!(a.is_closed() && a.is_epsilon());
            for b in &terms[i + 1..] {
                assert_ne!(a, b);
                assert!(
                    !b.has_proper_subexpr(a),
                    "{}: {b} contains earlier {a}",
                    inst.name
                );
            }
        }
        assert_eq!(inst.cr.rank_bound(), (inst.cr.rank() + 1).max(2));
    }
}
