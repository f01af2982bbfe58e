//! Decompose a run into series, assign ordinals and build the termination
//! certificate.

use epsilon_forge::hprocess::run_hprocess;
use epsilon_forge::series::{
    nd_set, p_series_level, termination_certificate, DecompositionTree, Span,
};
use epsilon_forge::syntax::parse_critical_set;

const CASCADE: &str = include_str!("../../../data/rank3_cascade.crit");

fn show(t: &DecompositionTree, depth: usize) {
    println!(
        "{:indent$}{} rank {} level {} o = {}",
        "",
        t.span,
        t.rank,
        t.level,
        t.o,
        indent = 2 * depth
    );
    if depth < 2 {
        for c in &t.children {
            show(c, depth + 1);
        }
    }
}

fn main() {
    let cr = parse_critical_set(CASCADE).unwrap();
    let trace = run_hprocess(&cr, 1000);
    let h = trace.solution_index().unwrap();
    let ranks: Vec<u32> = trace.steps.iter().map(|s| s.rn).collect();
    println!("H = {h}, RANK = {}, ranks {ranks:?}", cr.rank_bound());

    let whole = Span::new(0, h);
    println!("nd{whole} = {:?}", nd_set(&trace, whole).unwrap());
    println!("level {}", p_series_level(&trace, whole).unwrap());
    let tree = DecompositionTree::build(&trace, whole).unwrap();
    show(&tree, 0);

    let cert = termination_certificate(&trace).unwrap();
    println!("certificate at xi = {}:", cert.xi);
    for e in &cert.entries {
        println!("  {} beta {:?} o = {}", e.span, e.beta, e.o);
    }
    assert!(cert.is_strictly_decreasing());
}
