//! Run the H-process step by step and save the trace as JSON Lines.

use epsilon_forge::hprocess::{check_correctness, run_hprocess, HProcess, ValueRule};
use epsilon_forge::io::{trace_from_jsonl, trace_to_jsonl};
use epsilon_forge::syntax::{parse_critical_set, print_expr};

const CASCADE: &str = include_str!("../../../data/reset_cascade.crit");

fn main() {
    let cr = parse_critical_set("(crit x (< 0 x) 2)\n(crit x (< 0 x) 1)").unwrap();
    for step in HProcess::new(&cr, ValueRule::Paper) {
        match (&step.en, step.vn) {
            (Some(e), Some(v)) => println!(
                "S^{} = {}  ->  {} := {v}",
                step.n,
                step.subst,
                print_expr(e)
            ),
            _ => println!("S^{} = {}  solves", step.n, step.subst),
        }
    }

    // an inner correction drops the outer value, so the process restarts it
    let cr = parse_critical_set(CASCADE).unwrap();
    let trace = run_hprocess(&cr, 1000);
    let ranks: Vec<u32> = trace.steps.iter().map(|s| s.rn).collect();
    println!(
        "\ncascade solved at {:?}, ranks {ranks:?}",
        trace.solution_index()
    );
    println!(
        "correctness violations: {}",
        check_correctness(&trace).len()
    );

    let text = trace_to_jsonl(&trace);
    println!("first line: {}", text.lines().next().unwrap());
    let back = trace_from_jsonl(&cr, ValueRule::Paper, &text).unwrap();
    assert_eq!(back, trace);
    println!("{} lines round-trip", text.lines().count());
}
