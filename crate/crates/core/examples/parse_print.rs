//! Parse critical formulas, print them back, and inspect ranks and the closed
//! epsilon terms the index is built from.

use epsilon_forge::syntax::{parse_critical_set, parse_expr, print_expr};

fn main() {
    let src = "(crit x (= x (eps y (= (+ y y) x))) 2)\n(crit z (< 0 z) (eps w (= (* w 2) 2)))";
    let cr = parse_critical_set(src).expect("well-formed input");
    print!("{cr}");
    println!("rank {} (RANK = {})", cr.rank(), cr.rank_bound());

    for (i, f) in cr.formulas().iter().enumerate() {
        println!("axiom {i}: {}", print_expr(f));
    }
    println!("closed epsilon terms, outermost first:");
    for (i, e) in cr.closed_epsilon_terms().iter().enumerate() {
        println!(
            "  e_{i} = {}  rank {}  canonical {}",
            print_expr(e),
            e.rank(),
            e.is_canonical()
        );
    }

    // bound names are irrelevant to equality
    let a = parse_expr("(eps x (< 1 x))").unwrap();
    let b = parse_expr("(eps u (< 1 u))").unwrap();
    assert_eq!(a, b);
    println!("{} == {}", print_expr(&a), print_expr(&b));

    match parse_critical_set("(crit x (= y 0) 1)") {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
