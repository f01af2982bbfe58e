//! End-to-end checking of a critical-formula set: the bound against direct
//! iteration, correctness of every step, and the combinatorial properties of
//! series that the termination argument relies on.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::bound::{compute_bound, BoundError, BoundResult};
use crate::eval::{is_solving, sqsub_a};
use crate::hprocess::{
    check_correctness, first_solution_index, run_hprocess_with, Trace, ValueRule,
};
use crate::io::trace_to_jsonl;
use crate::ordinal::Ordinal;
use crate::series::{
    is_section, nd_set, o_value, p_series_level, precedes, series_rank, starts_in_nd,
    termination_certificate, SeriesError, Span, StepSource,
};
use crate::syntax::CriticalFormulaSet;

/// The individual checks, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `H(Cr)` equals the first solution index and `S^H` solves.
    Oracle,
    /// `(e_n, v) ∈ S^n ⇒ 0 ≠ v_n < v`
    Correctness,
    /// `S^m ⊑_A S^n ⇒ a_n ≥ a_m`, with equal indices forcing equal updates.
    IndexMonotone,
    /// Consecutive sections are ordered by `⊑_A` and `≺`.
    SectionOrder,
    /// `≺` between sections lowers `o(·; ξ)`.
    ODescent,
    /// nd-set of a concatenation.
    NdConcat,
    /// Proper p-series carry enough distinct ranks.
    RankCount,
    /// The union of overlapping p-series is a p-series.
    Overlap,
    /// A p-series followed by a (p+1)-series is a (p+1)-series.
    ConcatLevel,
    /// Consecutive p-series have decreasing o-values.
    ConsecutiveDescent,
    /// `M(p, n)` is the end of the longest normal p-series from `n`.
    MBound,
    /// `n ≤ n' < M(p, n) ⇒ M(p, n') ≤ M(p, n)`
    MMonotone,
    /// Every nested call of `M'` descends; `M'` agrees with the direct case split.
    Audit,
    /// The certificate decreases and stays below `ω_RANK`.
    Certificate,
    /// `o(S; ξ) < ω_{RANK+2-ξ}`
    OBound,
}

impl Check {
    pub const ALL: [Check; 15] = [
        Check::Oracle,
        Check::Correctness,
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
        Check::Audit,
        Check::Certificate,
        Check::OBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Oracle => "oracle",
            Check::Correctness => "correctness",
            Check::IndexMonotone => "index-monotone",
            Check::SectionOrder => "section-order",
            Check::ODescent => "o-descent",
            Check::NdConcat => "nd-concat",
            Check::RankCount => "rank-count",
            Check::Overlap => "overlap",
            Check::ConcatLevel => "concat-level",
            Check::ConsecutiveDescent => "consecutive-descent",
            Check::MBound => "m-bound",
            Check::MMonotone => "m-monotone",
            Check::Audit => "audit",
            Check::Certificate => "certificate",
            Check::OBound => "o-bound",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub budget: usize,
    pub rule: ValueRule,
    /// Longest series enumerated by the pairwise checks.
    pub max_span: usize,
    /// Where counterexample bundles go, if anywhere.
    pub bundle_dir: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: crate::hprocess::default_budget(),
            rule: ValueRule::Paper,
            max_span: 12,
            bundle_dir: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: Check,
    pub detail: String,
}

/// Failures kept per instance.
const KEEP_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub name: String,
    pub h: Option<usize>,
    pub tallies: BTreeMap<Check, Tally>,
    pub failures: Vec<Failure>,
    /// The process or the bound ran out of budget.
    pub budget_exhausted: bool,
    pub bundle: Option<PathBuf>,
}

impl InstanceReport {
    fn new(name: &str) -> Self {
        InstanceReport {
            name: name.to_string(),
            h: None,
            tallies: Check::ALL.iter().map(|&c| (c, Tally::default())).collect(),
            failures: Vec::new(),
            budget_exhausted: false,
            bundle: None,
        }
    }

    fn ok(&mut self, check: Check) {
        self.tallies.entry(check).or_default().checked += 1;
    }

    fn fail(&mut self, check: Check, detail: impl Into<String>) {
        let t = self.tallies.entry(check).or_default();
        t.checked += 1;
        t.failed += 1;
        if self.failures.len() < KEEP_FAILURES {
            self.failures.push(Failure {
                check,
                detail: detail.into(),
            });
        }
    }

    fn expect(&mut self, check: Check, cond: bool, detail: impl FnOnce() -> String) {
        if cond {
            self.ok(check)
        } else {
            self.fail(check, detail())
        }
    }

    pub fn passed(&self) -> bool {
        !self.budget_exhausted && self.tallies.values().all(|t| t.failed == 0)
    }
}

/// Aggregate over instances; merging is order-independent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub tallies: BTreeMap<Check, Tally>,
    pub instances: Vec<InstanceReport>,
}

impl VerifyReport {
    pub fn from_instances(instances: Vec<InstanceReport>) -> Self {
        let mut tallies: BTreeMap<Check, Tally> =
            Check::ALL.iter().map(|&c| (c, Tally::default())).collect();
        for inst in &instances {
            for (c, t) in &inst.tallies {
                let agg = tallies.entry(*c).or_default();
                agg.checked += t.checked;
                agg.failed += t.failed;
            }
        }
        VerifyReport { tallies, instances }
    }

    pub fn passed(&self) -> bool {
        self.instances.iter().all(InstanceReport::passed)
    }

    pub fn passed_check(&self, check: Check) -> bool {
        self.tallies.get(&check).is_none_or(|t| t.failed == 0)
    }

    pub fn budget_exhausted(&self) -> bool {
        self.instances.iter().any(|i| i.budget_exhausted)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, t) in &self.tallies {
            let verdict = if t.failed == 0 { "pass" } else { "FAIL" };
            writeln!(
                f,
                "{verdict} {:<20} {:>8} checked {:>4} failed",
                c.name(),
                t.checked,
                t.failed
            )?;
        }
        for inst in self.instances.iter().filter(|i| !i.passed()) {
            writeln!(f, "{}:", inst.name)?;
            if inst.budget_exhausted {
                writeln!(f, "  budget exhausted")?;
            }
            for fl in &inst.failures {
                writeln!(f, "  {}: {}", fl.check, fl.detail)?;
            }
        }
        let ok = self.instances.iter().filter(|i| i.passed()).count();
        write!(f, "{ok}/{} instances pass", self.instances.len())
    }
}

/// Verifies many instances on the rayon pool. Reports keep input order.
pub fn verify_all(
    instances: &[(String, CriticalFormulaSet)],
    opts: &VerifyOptions,
) -> VerifyReport {
    let reports = instances
        .par_iter()
        .map(|(name, cr)| verify_instance(name, cr, opts))
        .collect();
    VerifyReport::from_instances(reports)
}

pub fn verify_instance(
    name: &str,
    cr: &CriticalFormulaSet,
    opts: &VerifyOptions,
) -> InstanceReport {
    let mut rep = InstanceReport::new(name);
    let oracle = first_solution_index(cr, opts.budget, opts.rule);
    let trace = run_hprocess_with(cr, opts.budget, opts.rule);
    let h = match oracle {
        Ok(h) => h,
        Err(_) => {
            rep.budget_exhausted = true;
            rep.fail(
                Check::Oracle,
                format!("no solution within {} steps", opts.budget),
            );
            write_bundle(&mut rep, cr, &trace, opts);
            return rep;
        }
    };
    rep.h = Some(h);
    let bound = compute_bound(cr, opts.budget, opts.rule);
    let mut ctx = Ctx {
        trace: &trace,
        h,
        rank_bound: cr.rank_bound(),
        max_span: opts.max_span.max(1),
        o_memo: HashMap::new(),
    };
    match &bound {
        Ok(res) => {
            let solves = trace
                .step_at(res.h)
                .is_some_and(|s| is_solving(&s.subst, cr));
            rep.expect(Check::Oracle, res.h == h && solves, || {
                format!("bound {} against first solution {h}", res.h)
            });
            check_audit(&mut rep, res, h);
        }
        Err(BoundError::DescentViolation(msg)) => rep.fail(Check::Audit, msg.clone()),
        Err(BoundError::BudgetExceeded(n)) => {
            rep.budget_exhausted = true;
            rep.fail(Check::Oracle, format!("bound needs more than {n} steps"));
        }
        Err(e) => rep.fail(Check::Oracle, e.to_string()),
    }
    for v in check_correctness(&trace) {
        rep.fail(Check::Correctness, v.to_string());
    }
    let nonsolving = trace.steps.iter().take(h).count();
    rep.tallies.entry(Check::Correctness).or_default().checked += nonsolving as u64;

    if let Err(e) = ctx.run(&mut rep, bound.as_ref().ok()) {
        rep.fail(Check::Oracle, format!("analysis error: {e}"));
    }
    if !rep.passed() {
        write_bundle(&mut rep, cr, &trace, opts);
    }
    rep
}

fn check_audit(rep: &mut InstanceReport, res: &BoundResult, h: usize) {
    for e in &res.audit.entries {
        rep.expect(Check::Audit, e.ok, || {
            format!("{}: {} -> {}", e.site, e.caller, e.callee)
        });
    }
    for (p, n) in res.table_mismatches() {
        rep.fail(
            Check::Audit,
            format!(
                "M'({p}, {n}) = {:?} but the case split gives {:?}",
                res.m_table.get(&(p, n)),
                res.m_direct.get(&(p, n))
            ),
        );
    }
    let cap = res.rank_bound as usize * (h + 1) + 1;
    rep.expect(Check::Audit, res.audit.max_depth <= cap, || {
        format!("recursion depth {} exceeds {cap}", res.audit.max_depth)
    });
}

struct Ctx<'a> {
    trace: &'a Trace,
    h: usize,
    rank_bound: u32,
    max_span: usize,
    o_memo: HashMap<(Span, u32), Ordinal>,
}

impl Ctx<'_> {
    fn o(&mut self, span: Span, xi: u32) -> Result<Ordinal, SeriesError> {
        if let Some(o) = self.o_memo.get(&(span, xi)) {
            return Ok(o.clone());
        }
        let o = o_value(self.trace, span, xi)?;
        self.o_memo.insert((span, xi), o.clone());
        Ok(o)
    }

    fn rank(&self, n: usize) -> Result<u32, SeriesError> {
        self.trace.rank(n)
    }

    fn distinct_ranks(&self, s: Span) -> Result<usize, SeriesError> {
        let set: BTreeSet<u32> = (s.m..s.k).map(|n| self.rank(n)).collect::<Result<_, _>>()?;
        Ok(set.len())
    }

    /// Series inside `[0, H)` that start in their own nd-set, up to the span cap.
    fn spans(&self) -> Result<Vec<Span>, SeriesError> {
        let mut out = Vec::new();
        for m in 0..self.h {
            for k in m + 1..=self.h.min(m + self.max_span) {
                let s = Span::new(m, k);
                if starts_in_nd(self.trace, s)? {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }

    fn run(
        &mut self,
        rep: &mut InstanceReport,
        bound: Option<&BoundResult>,
    ) -> Result<(), SeriesError> {
        self.index_monotone(rep)?;
        let spans = self.spans()?;
        let mut levels = HashMap::new();
        for &s in &spans {
            levels.insert(s, p_series_level(self.trace, s)?);
        }
        self.section_order(rep, &spans)?;
        self.o_descent(rep, &spans)?;
        self.consecutive(rep, &spans, &levels)?;
        self.rank_count(rep, &spans, &levels)?;
        self.overlap(rep, &spans, &levels)?;
        self.o_bound(rep, &spans)?;
        if let Some(res) = bound {
            self.m_checks(rep, res, &spans, &levels)?;
        }
        self.certificate(rep)?;
        Ok(())
    }

    fn index_monotone(&self, rep: &mut InstanceReport) -> Result<(), SeriesError> {
        let t = self.trace;
        for n in 0..self.h {
            for m in 0..self.h {
                if m == n || !sqsub_a(&t.steps[m].subst, &t.steps[n].subst) {
                    continue;
                }
                let (sn, sm) = (&t.steps[n], &t.steps[m]);
                rep.expect(Check::IndexMonotone, sn.an >= sm.an, || {
                    format!("S^{m} ⊑ S^{n} but a_{n} = {} < a_{m} = {}", sn.an, sm.an)
                });
                if sn.an == sm.an {
                    let next = sqsub_a(&t.steps[m + 1].subst, &t.steps[n + 1].subst)
                        && sn.en == sm.en
                        && sn.vn == sm.vn
                        && self.rank(n + 1)? == self.rank(m + 1)?;
                    rep.expect(Check::IndexMonotone, next, || {
                        format!("a_{n} = a_{m} but the updates at {m} and {n} differ")
                    });
                }
            }
        }
        Ok(())
    }

    fn section_order(
        &mut self,
        rep: &mut InstanceReport,
        spans: &[Span],
    ) -> Result<(), SeriesError> {
        let t = self.trace;
        for &s0 in spans {
            if !is_section(t, s0)? {
                continue;
            }
            let rk0 = series_rank(t, s0)?;
            for &s1 in spans.iter().filter(|s| s.m == s0.k) {
                let (r0, r1) = (self.rank(s0.m)?, self.rank(s1.m)?);
                if !is_section(t, s1)? || !(r0 <= r1 && r1 < rk0) {
                    continue;
                }
                let below = sqsub_a(&t.steps[s1.m].subst, &t.steps[s0.m].subst);
                rep.expect(Check::SectionOrder, below && precedes(t, s1, s0)?, || {
                    format!("sections {s0} then {s1} are not ordered")
                });
            }
        }
        Ok(())
    }

    fn o_descent(&mut self, rep: &mut InstanceReport, spans: &[Span]) -> Result<(), SeriesError> {
        let t = self.trace;
        let sections: Vec<Span> = spans
            .iter()
            .copied()
            .filter(|&s| is_section(t, s).unwrap_or(false))
            .collect();
        for &s0 in &sections {
            for &s1 in &sections {
                if s0 == s1 || s0.m.abs_diff(s1.m) > 2 * self.max_span || !precedes(t, s1, s0)? {
                    continue;
                }
                let top = series_rank(t, s0)?.min(series_rank(t, s1)?);
                for xi in 0..=top {
                    let (o0, o1) = (self.o(s0, xi)?, self.o(s1, xi)?);
                    rep.expect(Check::ODescent, o1 < o0, || {
                        format!("{s1} ≺ {s0} but o(·; {xi}) goes {o0} -> {o1}")
                    });
                }
            }
        }
        Ok(())
    }

    fn level_of(&self, s: Span, levels: &HashMap<Span, u32>) -> Result<u32, SeriesError> {
        match levels.get(&s) {
            Some(&l) => Ok(l),
            None => p_series_level(self.trace, s),
        }
    }

    /// Pairs of adjacent series `S^0 * S^1` with `r_{m0} ≤ r_{m1}`.
    fn consecutive(
        &mut self,
        rep: &mut InstanceReport,
        spans: &[Span],
        levels: &HashMap<Span, u32>,
    ) -> Result<(), SeriesError> {
        let t = self.trace;
        for &s0 in spans {
            for &s1 in spans.iter().filter(|s| s.m == s0.k) {
                let (r0, r1) = (self.rank(s0.m)?, self.rank(s1.m)?);
                if r0 > r1 {
                    continue;
                }
                let whole = Span::new(s0.m, s1.k);
                // nd of the concatenation
                let cut = (s0.m..s0.k)
                    .filter(|&n| self.rank(n).map(|r| r <= r1).unwrap_or(false))
                    .max()
                    .expect("r_{m0} ≤ r_{m1}");
                let mut expect: Vec<usize> =
                    nd_set(t, s0)?.into_iter().filter(|&n| n <= cut).collect();
                expect.extend(nd_set(t, s1)?);
                let got = nd_set(t, whole)?;
                rep.expect(Check::NdConcat, got == expect, || {
                    format!("nd{whole} = {got:?}, expected {expect:?}")
                });
                // levels
                let (l0, l1) = (levels[&s0], levels[&s1]);
                let p = l0.max(l1.saturating_sub(1));
                let lw = self.level_of(whole, levels)?;
                rep.expect(Check::ConcatLevel, lw <= p + 1, || {
                    format!("{s0} ({l0}) * {s1} ({l1}) has level {lw}")
                });
                // o-values
                if !t.solving(s1.k - 1)? {
                    let (o0, o1) = (self.o(s0, 0)?, self.o(s1, 0)?);
                    rep.expect(Check::ConsecutiveDescent, o1 < o0, || {
                        format!("o{s0} = {o0} but o{s1} = {o1}")
                    });
                }
            }
        }
        Ok(())
    }

    fn rank_count(
        &mut self,
        rep: &mut InstanceReport,
        spans: &[Span],
        levels: &HashMap<Span, u32>,
    ) -> Result<(), SeriesError> {
        let t = self.trace;
        for &s in spans {
            let p = levels[&s] as usize;
            let d = self.distinct_ranks(s)?;
            rep.expect(Check::RankCount, d >= p, || {
                format!("proper {p}-series {s} has {d} ranks")
            });
            if is_section(t, s)? {
                rep.expect(Check::RankCount, d > p, || {
                    format!("proper {p}-section {s} has {d} ranks")
                });
            }
            if s.m == 0 {
                rep.expect(
                    Check::RankCount,
                    d > p && p < self.rank_bound as usize,
                    || format!("proper {p}-series {s} from S^0 has {d} ranks"),
                );
            }
        }
        Ok(())
    }

    fn overlap(
        &mut self,
        rep: &mut InstanceReport,
        spans: &[Span],
        levels: &HashMap<Span, u32>,
    ) -> Result<(), SeriesError> {
        let t = self.trace;
        for &a in spans {
            for &b in spans {
                if !(a.m < b.m && b.m < a.k && a.k < b.k) {
                    continue;
                }
                let p = levels[&a].max(levels[&b]);
                let u = Span::new(a.m, b.k);
                let ok = starts_in_nd(t, u)? && self.level_of(u, levels)? <= p;
                rep.expect(Check::Overlap, ok, || {
                    format!("{a} ∪ {b} is not a {p}-series")
                });
            }
        }
        Ok(())
    }

    fn o_bound(&mut self, rep: &mut InstanceReport, spans: &[Span]) -> Result<(), SeriesError> {
        for &s in spans {
            let rk = series_rank(self.trace, s)?;
            for xi in 0..=rk {
                let o = self.o(s, xi)?;
                let cap = Ordinal::one().omega_tower(self.rank_bound + 2 - xi);
                rep.expect(Check::OBound, o < cap, || {
                    format!("o({s}; {xi}) = {o} ≥ {cap}")
                });
            }
        }
        Ok(())
    }

    fn m_checks(
        &mut self,
        rep: &mut InstanceReport,
        res: &BoundResult,
        spans: &[Span],
        levels: &HashMap<Span, u32>,
    ) -> Result<(), SeriesError> {
        let t = self.trace;
        let m = |p: u32, n: usize| res.m_table.get(&(p, n)).copied();
        for p in 0..self.rank_bound {
            for n in 0..self.h {
                let Some(k) = m(p, n) else {
                    rep.fail(Check::MBound, format!("M({p}, {n}) missing"));
                    continue;
                };
                // the longest normal p-series from n
                let ok = k > n
                    && k <= self.h
                    && !t.solving(k - 1)?
                    && starts_in_nd(t, Span::new(n, k))?
                    && self.level_of(Span::new(n, k), levels)? <= p;
                rep.expect(Check::MBound, ok, || {
                    format!("[{n}, M({p}, {n}) = {k}) is not a normal {p}-series")
                });
                for n2 in n..k.min(self.h + 1) {
                    if let Some(k2) = m(p, n2) {
                        rep.expect(Check::MMonotone, k2 <= k, || {
                            format!("M({p}, {n2}) = {k2} > M({p}, {n}) = {k}")
                        });
                    }
                }
            }
        }
        for &s in spans {
            let l = levels[&s];
            if t.solving(s.k - 1)? {
                continue;
            }
            for p in l..self.rank_bound {
                let k = m(p, s.m).unwrap_or(0);
                rep.expect(Check::MBound, s.k <= k, || {
                    format!("normal {p}-series {s} outlasts M({p}, {}) = {k}", s.m)
                });
            }
        }
        Ok(())
    }

    fn certificate(&mut self, rep: &mut InstanceReport) -> Result<(), SeriesError> {
        let cert = termination_certificate(self.trace)?;
        let cap = Ordinal::one().omega_tower(self.rank_bound);
        rep.expect(Check::Certificate, cert.is_strictly_decreasing(), || {
            let os: Vec<String> = cert.entries.iter().map(|e| e.o.to_string()).collect();
            format!("certificate is not decreasing: {}", os.join(", "))
        });
        rep.expect(Check::Certificate, cert.is_below(&cap), || {
            format!("certificate value reaches {cap}")
        });
        Ok(())
    }
}

fn write_bundle(
    rep: &mut InstanceReport,
    cr: &CriticalFormulaSet,
    trace: &Trace,
    opts: &VerifyOptions,
) {
    let Some(dir) = &opts.bundle_dir else { return };
    let path = dir.join(sanitize(&rep.name));
    match write_bundle_files(&path, rep, cr, trace) {
        Ok(()) => rep.bundle = Some(path),
        Err(e) => rep.failures.push(Failure {
            check: Check::Oracle,
            detail: format!("could not write bundle to {}: {e}", path.display()),
        }),
    }
}

fn write_bundle_files(
    path: &Path,
    rep: &InstanceReport,
    cr: &CriticalFormulaSet,
    trace: &Trace,
) -> std::io::Result<()> {
    fs::create_dir_all(path)?;
    fs::write(path.join("input.crit"), cr.to_string())?;
    fs::write(path.join("trace.jsonl"), trace_to_jsonl(trace))?;
    let mut text = String::new();
    for f in &rep.failures {
        text.push_str(&format!("{}: {}\n", f.check, f.detail));
    }
    fs::write(path.join("failures.txt"), text)
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_critical_set;

    fn verify(text: &str) -> InstanceReport {
        let cr = parse_critical_set(text).unwrap();
        verify_instance("t", &cr, &VerifyOptions::default())
    }

    #[test]
    fn small_examples_pass() {
        for text in [
            "(crit x (< 0 x) 2)\n(crit x (< 0 x) 1)",
            "(crit x (= (* x 2) 2) 1)",
            "(crit x (= x (eps y (= (+ y y) x))) 2)",
            "",
        ] {
            let rep = verify(text);
            assert!(rep.passed(), "{text}: {:?}", rep.failures);
        }
    }

    #[test]
    fn descending_chain_exercises_series() {
        let text: String = (4..=9)
            .rev()
            .map(|w| format!("(crit x (< 3 x) {w})\n"))
            .collect();
        let rep = verify(&text);
        assert_eq!(rep.h, Some(6));
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.tallies[&Check::ConsecutiveDescent].checked > 0);
        assert!(rep.tallies[&Check::IndexMonotone].checked > 0);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let cr = parse_critical_set("(crit x (< 0 x) 2)\n(crit x (< 0 x) 1)").unwrap();
        let opts = VerifyOptions {
            budget: 1,
            ..VerifyOptions::default()
        };
        let rep = verify_instance("t", &cr, &opts);
        assert!(rep.budget_exhausted);
        assert!(!rep.passed());
    }

    #[test]
    fn bundles_are_written_on_failure() {
        let dir = tempfile::tempdir().unwrap();
        let cr = parse_critical_set("(crit x (< 0 x) 2)\n(crit x (< 0 x) 1)").unwrap();
        let opts = VerifyOptions {
            budget: 1,
            bundle_dir: Some(dir.path().to_path_buf()),
            ..VerifyOptions::default()
        };
        let rep = verify_instance("a/b", &cr, &opts);
        let path = rep.bundle.expect("bundle");
        assert!(path.ends_with("a_b"));
        let input = fs::read_to_string(path.join("input.crit")).unwrap();
        assert_eq!(parse_critical_set(&input).unwrap(), cr);
        assert!(fs::read_to_string(path.join("failures.txt"))
            .unwrap()
            .contains("oracle"));
    }

    #[test]
    fn reports_merge() {
        let a = verify("(crit x (= (* x 2) 2) 1)");
        let b = verify("(crit x (< 0 x) 2)\n(crit x (< 0 x) 1)");
        let ab = VerifyReport::from_instances(vec![a.clone(), b.clone()]);
        let ba = VerifyReport::from_instances(vec![b, a]);
        assert_eq!(ab.tallies, ba.tallies);
        assert!(ab.passed());
    }
}
