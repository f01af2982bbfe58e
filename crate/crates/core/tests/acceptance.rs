//! One line per acceptance criterion. Run with
//! `cargo test --test acceptance` (release is faster but not required).

mod common;

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::gen::ord;
use common::oracle::{naive, Naive};
use epsilon_forge::bound::h_bound;
use epsilon_forge::corpus::{gen_corpus, Instance, Limits};
use epsilon_forge::eval::is_solving;
use epsilon_forge::hprocess::{first_solution_index, run_hprocess_with, ValueRule};
use epsilon_forge::io::{trace_from_jsonl, trace_to_jsonl};
use epsilon_forge::ordinal::Ordinal;
use epsilon_forge::syntax::{parse_critical_set, parse_expr, print_expr};
use epsilon_forge::verify::{verify_all, Check, VerifyOptions, VerifyReport};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const SEED: u64 = 1;
const CORPUS: usize = 50;
const BUDGET: usize = 100_000;
const PER_INSTANCE: Duration = Duration::from_secs(10);
const SUITE: Duration = Duration::from_secs(5 * 60);
const MIN_NESTED: usize = 10;
const ORDINAL_CASES: u32 = 10_000;

struct Line {
    ok: bool,
}

impl Line {
    fn report(n: u32, title: &str, ok: bool, detail: String) -> Line {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {n}: {title} ({detail})");
        Line { ok }
    }
}

fn checks_pass(report: &VerifyReport, checks: &[Check]) -> (bool, String) {
    let mut checked = 0;
    let mut failed = 0;
    let mut bad = Vec::new();
    for c in checks {
        let t = &report.tallies[c];
        checked += t.checked;
        failed += t.failed;
        if t.failed > 0 || t.checked == 0 {
            bad.push(c.name());
        }
    }
    let mut detail = format!("{checked} checks, {failed} failed");
    if !bad.is_empty() {
        detail.push_str(&format!("; failing: {}", bad.join(", ")));
    }
    (bad.is_empty(), detail)
}

fn oracle_equality(corpus: &[Instance]) -> Line {
    let mut worst = Duration::ZERO;
    let mut agree = 0;
    for inst in corpus {
        let start = Instant::now();
        let ok = match h_bound(&inst.cr, BUDGET, ValueRule::Paper) {
            Ok(res) => {
                let oracle = first_solution_index(&inst.cr, BUDGET, ValueRule::Paper);
                let s_h = &res.trace.step_at(res.h).expect("S^h is recorded").subst;
                oracle == Ok(res.h) && is_solving(s_h, &inst.cr)
            }
            Err(e) => {
                println!("  {}: {e}", inst.name);
                false
            }
        };
        worst = worst.max(start.elapsed());
        agree += ok as usize;
    }
    Line::report(
        1,
        "bound equals direct iteration",
        agree == corpus.len() && worst < PER_INSTANCE,
        format!("{agree}/{} agree, slowest {worst:.2?}", corpus.len()),
    )
}

fn ordinal_properties() -> Line {
    let mut runner = TestRunner::new(Config {
        cases: ORDINAL_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let mut failures = Vec::new();
    let mut run = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    let pair = (ord(), ord());
    let triple = (ord(), ord(), ord());
    run(
        "trichotomy",
        runner
            .run(&pair, |(a, b)| {
                let n = (a < b) as u8 + (a == b) as u8 + (a > b) as u8;
                prop_assert_eq!(n, 1);
                prop_assert_eq!(a.cmp(&b), naive(&a).cmp(&naive(&b)));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    run(
        "transitivity",
        runner
            .run(&triple, |(a, b, c)| {
                let mut v = [a, b, c];
                v.sort();
                prop_assert!(v[0] <= v[2]);
                prop_assert!(naive(&v[0]).cmp(&naive(&v[1])) != Ordering::Greater);
                prop_assert!(naive(&v[1]).cmp(&naive(&v[2])) != Ordering::Greater);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    run(
        "associativity",
        runner
            .run(&triple, |(a, b, c)| {
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert_eq!(naive(&a.add(&b)), naive(&a).add(&naive(&b)));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    run(
        "monotonicity",
        runner
            .run(&pair, |(a, b)| {
                if a < b {
                    prop_assert!(Ordinal::omega_pow(&a) < Ordinal::omega_pow(&b));
                    prop_assert!(a.two_pow().unwrap() < b.two_pow().unwrap());
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    run(
        "oracle",
        runner
            .run(&(ord(), 0u32..7), |(a, i)| {
                prop_assert_eq!(naive(&a.two_pow().unwrap()), naive(&a).two_pow());
                let w1 = Naive::omega().add(&Naive::nat(1));
                prop_assert_eq!(naive(&Ordinal::omega_plus_one_pow(i)), w1.pow_nat(i));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );
    let nat = Ordinal::from_nat;
    let w = Ordinal::omega();
    let w2 = Ordinal::omega_pow(&nat(2));
    if Ordinal::omega_plus_one_pow(2) != w2.add(&w).add(&nat(1)) {
        failures.push("(w+1)^2".into());
    }
    if w.mul_nat(2).add(&nat(3)).two_pow() != Ok(w2.mul_nat(8)) {
        failures.push("2^(w*2+3)".into());
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("5 properties x {ORDINAL_CASES} cases")
    } else {
        failures.join("; ")
    };
    Line::report(6, "ordinal arithmetic", ok, detail)
}

fn determinism(corpus: &[Instance]) -> Line {
    let mut problems = Vec::new();
    if gen_corpus(SEED, CORPUS, Limits::default()) != corpus {
        problems.push("corpus differs between runs".to_string());
    }
    for inst in corpus {
        let text = inst.cr.to_string();
        match parse_critical_set(&text) {
            Ok(back) if back == inst.cr && back.to_string() == text => {}
            _ => problems.push(format!("{}: parse/print", inst.name)),
        }
        for f in inst.cr.formulas() {
            if parse_expr(&print_expr(f)).as_ref() != Ok(f) {
                problems.push(format!("{}: formula {f}", inst.name));
            }
        }
        let t = run_hprocess_with(&inst.cr, BUDGET, ValueRule::Paper);
        let jsonl = trace_to_jsonl(&t);
        let again = trace_to_jsonl(&run_hprocess_with(&inst.cr, BUDGET, ValueRule::Paper));
        if jsonl != again {
            problems.push(format!("{}: traces differ", inst.name));
        }
        match trace_from_jsonl(&inst.cr, ValueRule::Paper, &jsonl) {
            Ok(back) if back == t && trace_to_jsonl(&back) == jsonl => {}
            _ => problems.push(format!("{}: save/load", inst.name)),
        }
    }
    let ok = problems.is_empty();
    let detail = if ok {
        format!("{} instances", corpus.len())
    } else {
        problems.join("; ")
    };
    Line::report(7, "determinism and round trips", ok, detail)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = gen_corpus(SEED, CORPUS, Limits::default());
    let nested = corpus.iter().filter(|i| i.max_subst_rank >= 2).count();
    println!(
        "corpus seed {SEED}: {} instances, {nested} reach rank >= 2 (need {MIN_NESTED}), longest run {}",
        corpus.len(),
        corpus.iter().map(|i| i.solution_index).max().unwrap_or(0)
    );

    let bundles = std::env::temp_dir().join("epsilon-forge-acceptance");
    let opts = VerifyOptions {
        budget: BUDGET,
        rule: ValueRule::Paper,
        bundle_dir: Some(bundles.clone()),
        ..VerifyOptions::default()
    };
    let named: Vec<_> = corpus
        .iter()
        .map(|i| (i.name.clone(), i.cr.clone()))
        .collect();
    let report = verify_all(&named, &opts);

    let mut lines = vec![oracle_equality(&corpus)];

    let (ok, detail) = checks_pass(&report, &[Check::Correctness]);
    lines.push(Line::report(2, "values only drop on reset", ok, detail));
    if !ok {
        println!("  counterexample bundles under {}", bundles.display());
    }

    let (ok, detail) = checks_pass(
        &report,
        &[
            Check::IndexMonotone,
            Check::SectionOrder,
            Check::ODescent,
            Check::NdConcat,
            Check::RankCount,
            Check::Overlap,
            Check::ConcatLevel,
            Check::ConsecutiveDescent,
            Check::MBound,
            Check::MMonotone,
        ],
    );
    lines.push(Line::report(
        3,
        "series lemmas",
        ok && nested >= MIN_NESTED,
        detail,
    ));

    let (ok, detail) = checks_pass(&report, &[Check::Audit]);
    lines.push(Line::report(4, "descent audit", ok, detail));

    let (ok, detail) = checks_pass(&report, &[Check::Certificate, Check::OBound]);
    lines.push(Line::report(5, "termination certificate", ok, detail));

    lines.push(ordinal_properties());
    lines.push(determinism(&corpus));

    let elapsed = start.elapsed();
    let in_time = elapsed < SUITE;
    println!(
        "{} suite time {elapsed:.2?} (limit {SUITE:?})",
        if in_time { "PASS" } else { "FAIL" }
    );
    if lines.iter().all(|l| l.ok) && in_time {
        ExitCode::SUCCESS
    } else {
        println!("{report}");
        ExitCode::FAILURE
    }
}
