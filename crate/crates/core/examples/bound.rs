//! The bound H(Cr) = M(RANK-1, 0), computed by audited nested recursion and
//! compared with direct iteration.

use epsilon_forge::bound::{alpha_rec, h_bound, DescentAuditLog};
use epsilon_forge::hprocess::ValueRule;
use epsilon_forge::ordinal::Ordinal;
use epsilon_forge::syntax::parse_critical_set;

const FILES: [(&str, &str); 3] = [
    ("two_axiom", include_str!("../../../data/two_axiom.crit")),
    (
        "reset_cascade",
        include_str!("../../../data/reset_cascade.crit"),
    ),
    (
        "rank3_cascade",
        include_str!("../../../data/rank3_cascade.crit"),
    ),
];

fn main() {
    // counting halvings by recursion on the ordinal order
    let mut log = DescentAuditLog::default();
    let halvings = alpha_rec(
        Ordinal::from_nat(1000),
        |_| 0u32,
        |_, r| r + 1,
        |x| Ordinal::from_nat(x.to_nat().unwrap() / 2),
        &mut log,
    );
    println!(
        "halvings of 1000: {halvings}, {} audited calls",
        log.entries.len()
    );

    for (name, src) in FILES {
        let cr = parse_critical_set(src).unwrap();
        let res = h_bound(&cr, 100_000, ValueRule::Paper).expect("bound agrees with the process");
        println!(
            "{name}: H = {}, {} audited calls, depth {}, clean {}",
            res.h,
            res.audit.entries.len(),
            res.audit.max_depth,
            res.audit.is_clean()
        );
        let top = res.rank_bound - 1;
        let row: Vec<usize> = (0..=res.h.min(8)).map(|n| res.m_table[&(top, n)]).collect();
        println!("  M({top}, n) for n = 0.. : {row:?}");
    }
}
