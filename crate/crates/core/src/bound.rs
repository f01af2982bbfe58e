//! Ordinal recursion with audited descent, and the bound `H(Cr) = M(RANK-1, 0)`
//! on the length of the H-process.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::eval::is_solving;
use crate::hprocess::{first_solution_index, HProcess, Trace, TraceStep, ValueRule};
use crate::ordinal::{IndexVector, Ordinal, OrdinalError};
use crate::series::{o_of, SeriesError, Span, StepSource};
use crate::syntax::CriticalFormulaSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("no solution within {0} steps")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Series(SeriesError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error("descent check failed: {0}")]
    DescentViolation(String),
    #[error("bound {h} disagrees with the first solution at {oracle:?}")]
    SolutionMismatch { h: usize, oracle: Option<usize> },
    #[error("S^{0} is not a solution")]
    NotSolving(usize),
}

impl From<SeriesError> for BoundError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Unavailable(n) => BoundError::BudgetExceeded(n.saturating_sub(1)),
            e => BoundError::Series(e),
        }
    }
}

/// A recursion measure: a level and an ordinal, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Measure {
    pub p: u32,
    pub y: Ordinal,
}

impl Measure {
    pub fn new(p: u32, y: Ordinal) -> Self {
        Measure { p, y }
    }

    pub fn lex_less(&self, other: &Measure) -> bool {
        self.p < other.p || (self.p == other.p && self.y < other.y)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderUsed {
    /// The ordinal order below ε₀.
    Ordinal,
    /// Lexicographic order on `(p, y)`.
    Lexicographic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub site: &'static str,
    pub caller: Measure,
    pub callee: Measure,
    pub order: OrderUsed,
    pub ok: bool,
}

/// Which clause of the nonsolving case decided `M(p+1, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// The next o-value is not below the current one.
    NoDescent,
    /// The rank dropped.
    RankDrop,
    /// Continue from `M(p, n)`.
    Continue,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DescentAuditLog {
    pub entries: Vec<AuditEntry>,
    pub cases: Vec<(u32, usize, CaseTag)>,
    pub max_depth: usize,
}

impl DescentAuditLog {
    pub fn record(
        &mut self,
        site: &'static str,
        caller: Measure,
        callee: Measure,
        order: OrderUsed,
    ) -> bool {
        let ok = match order {
            OrderUsed::Ordinal => callee.y < caller.y,
            OrderUsed::Lexicographic => callee.lex_less(&caller),
        };
        self.entries.push(AuditEntry {
            site,
            caller,
            callee,
            order,
            ok,
        });
        ok
    }

    pub fn violations(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.ok)
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }

    fn note_depth(&mut self, depth: usize) {
        self.max_depth = self.max_depth.max(depth);
    }
}

/// Tait's external recursion: `f(x) = g(x)` unless `e(d(x)) < e(x)`, in
/// which case `f(x) = h(x, f(d(x)))`.
pub fn external_rec<X, T>(
    x: X,
    g: impl Fn(&X) -> T,
    h: impl Fn(&X, T) -> T,
    d: impl Fn(&X) -> X,
    e: impl Fn(&X) -> Ordinal,
    log: &mut DescentAuditLog,
) -> T {
    let mut chain = vec![x];
    loop {
        let cur = chain.last().expect("chain is never empty");
        let next = d(cur);
        let (ec, en) = (e(cur), e(&next));
        if en >= ec {
            break;
        }
        log.record(
            "unfold",
            Measure::new(0, ec),
            Measure::new(0, en),
            OrderUsed::Ordinal,
        );
        chain.push(next);
        log.note_depth(chain.len() - 1);
    }
    let last = chain.pop().expect("chain is never empty");
    let mut acc = g(&last);
    while let Some(x) = chain.pop() {
        acc = h(&x, acc);
    }
    acc
}

/// Tait's α-recursion: external recursion with the argument as its own
/// measure.
pub fn alpha_rec<T>(
    x: Ordinal,
    g: impl Fn(&Ordinal) -> T,
    h: impl Fn(&Ordinal, T) -> T,
    d: impl Fn(&Ordinal) -> Ordinal,
    log: &mut DescentAuditLog,
) -> T {
    external_rec(x, g, h, d, Ordinal::clone, log)
}

/// The H-process, computed only as far as it is queried.
pub struct LazyTrace<'a> {
    cr: &'a CriticalFormulaSet,
    budget: usize,
    rule: ValueRule,
    state: RefCell<LazyState<'a>>,
}

struct LazyState<'a> {
    process: HProcess<'a>,
    steps: Vec<TraceStep>,
    done: bool,
}

impl<'a> LazyTrace<'a> {
    pub fn new(cr: &'a CriticalFormulaSet, budget: usize, rule: ValueRule) -> Self {
        LazyTrace {
            cr,
            budget,
            rule,
            state: RefCell::new(LazyState {
                process: HProcess::new(cr, rule),
                steps: Vec::new(),
                done: false,
            }),
        }
    }

    fn with_step<T>(&self, n: usize, f: impl FnOnce(&TraceStep) -> T) -> Result<T, SeriesError> {
        let mut st = self.state.borrow_mut();
        while st.steps.len() <= n && !st.done {
            if st.steps.len() > self.budget {
                return Err(SeriesError::Unavailable(n));
            }
            match st.process.next() {
                Some(step) => {
                    st.done = step.solving;
                    st.steps.push(step);
                }
                None => st.done = true,
            }
        }
        let step = match st.steps.get(n) {
            Some(s) => s,
            None => st.steps.last().ok_or(SeriesError::Unavailable(n))?,
        };
        Ok(f(step))
    }

    /// Number of steps computed so far.
    pub fn computed(&self) -> usize {
        self.state.borrow().steps.len()
    }

    /// The steps computed so far, as a trace.
    pub fn to_trace(&self) -> Trace {
        let st = self.state.borrow();
        Trace {
            cr: self.cr.clone(),
            steps: st.steps.clone(),
            budget_exceeded: !st.steps.last().is_some_and(|s| s.solving),
            value_rule: self.rule,
        }
    }
}

impl StepSource for LazyTrace<'_> {
    fn rank_bound(&self) -> u32 {
        self.cr.rank_bound()
    }

    fn rank(&self, n: usize) -> Result<u32, SeriesError> {
        self.with_step(n, |s| if s.solving { 0 } else { s.rn })
    }

    fn index(&self, n: usize) -> Result<IndexVector, SeriesError> {
        self.with_step(n, |s| {
            if s.solving {
                IndexVector::zeros(s.an.len())
            } else {
                s.an.clone()
            }
        })
    }

    fn solving(&self, n: usize) -> Result<bool, SeriesError> {
        self.with_step(n, |s| s.solving)
    }
}

/// Evaluates `M(p, n)` over a lazily extended H-process.
pub struct BoundEngine<'a> {
    trace: LazyTrace<'a>,
    seed: Ordinal,
    o_memo: RefCell<HashMap<Span, Ordinal>>,
    m_prime_memo: HashMap<(u32, usize, Ordinal), usize>,
    m_memo: HashMap<(u32, usize), usize>,
    audit: DescentAuditLog,
}

impl<'a> BoundEngine<'a> {
    pub fn new(
        cr: &'a CriticalFormulaSet,
        budget: usize,
        rule: ValueRule,
    ) -> Result<Self, BoundError> {
        Ok(BoundEngine {
            trace: LazyTrace::new(cr, budget, rule),
            seed: Ordinal::tower(cr.rank_bound() + 2)?,
            o_memo: RefCell::new(HashMap::new()),
            m_prime_memo: HashMap::new(),
            m_memo: HashMap::new(),
            audit: DescentAuditLog::default(),
        })
    }

    /// `ω_{RANK+2}`
    pub fn seed(&self) -> &Ordinal {
        &self.seed
    }

    pub fn audit(&self) -> &DescentAuditLog {
        &self.audit
    }

    pub fn trace(&self) -> &LazyTrace<'a> {
        &self.trace
    }

    /// `o(S^{m,k})`, memoized.
    pub fn o(&self, m: usize, k: usize) -> Result<Ordinal, BoundError> {
        let span = Span::new(m, k);
        if let Some(o) = self.o_memo.borrow().get(&span) {
            return Ok(o.clone());
        }
        let o = o_of(&self.trace, span)?;
        self.o_memo.borrow_mut().insert(span, o.clone());
        Ok(o)
    }

    /// `M(p, n) = M'(p, n, ω_{RANK+2})`.
    pub fn m(&mut self, p: u32, n: usize) -> Result<usize, BoundError> {
        let seed = self.seed.clone();
        self.m_prime(p, n, &seed)
    }

    /// `M'(p, n, y)`, the nested recursion on `(p, y)`.
    pub fn m_prime(&mut self, p: u32, n: usize, y: &Ordinal) -> Result<usize, BoundError> {
        self.m_prime_at(p, n, y, 0)
    }

    fn call(
        &mut self,
        site: &'static str,
        caller: (u32, &Ordinal),
        callee: (u32, usize, &Ordinal),
        depth: usize,
    ) -> Result<usize, BoundError> {
        let ok = self.audit.record(
            site,
            Measure::new(caller.0, caller.1.clone()),
            Measure::new(callee.0, callee.2.clone()),
            OrderUsed::Lexicographic,
        );
        if !ok {
            return Err(BoundError::DescentViolation(format!(
                "{site}: ({}, {}) -> ({}, {})",
                caller.0, caller.1, callee.0, callee.2
            )));
        }
        self.m_prime_at(callee.0, callee.1, callee.2, depth + 1)
    }

    fn m_prime_at(
        &mut self,
        p: u32,
        n: usize,
        y: &Ordinal,
        depth: usize,
    ) -> Result<usize, BoundError> {
        self.audit.note_depth(depth);
        if p == 0 {
            return Ok(n + 1);
        }
        let mut n = n;
        let mut y = y.clone();
        let mut depth = depth;
        let mut pending = Vec::new();
        let result = loop {
            if let Some(&v) = self.m_prime_memo.get(&(p, n, y.clone())) {
                break v;
            }
            pending.push((n, y.clone()));
            if self.trace.solving(n)? {
                break n;
            }
            let k = self.call("inner", (p, &y), (p - 1, n, &y), depth)?;
            let k2 = self.call("second", (p, &y), (p - 1, k, &y), depth)?;
            let o_star = self.o(k, k2)?;
            if o_star >= y {
                self.audit.cases.push((p, n, CaseTag::NoDescent));
                break k;
            }
            if self.trace.rank(k)? < self.trace.rank(n)? {
                self.audit.cases.push((p, n, CaseTag::RankDrop));
                break k;
            }
            self.audit.cases.push((p, n, CaseTag::Continue));
            let ok = self.audit.record(
                "tail",
                Measure::new(p, y.clone()),
                Measure::new(p, o_star.clone()),
                OrderUsed::Lexicographic,
            );
            if !ok {
                return Err(BoundError::DescentViolation(format!(
                    "tail: ({p}, {y}) -> ({p}, {o_star})"
                )));
            }
            n = k;
            y = o_star;
            depth += 1;
            self.audit.note_depth(depth);
        };
        for key in pending {
            self.m_prime_memo.insert((p, key.0, key.1), result);
        }
        Ok(result)
    }

    /// `M(p, n)` straight from the case split, comparing `e_p` values.
    pub fn m_direct(&mut self, p: u32, n: usize) -> Result<usize, BoundError> {
        if p == 0 {
            return Ok(n + 1);
        }
        if let Some(&v) = self.m_memo.get(&(p, n)) {
            return Ok(v);
        }
        let mut cur = n;
        let mut visited = Vec::new();
        let result = loop {
            if let Some(&v) = self.m_memo.get(&(p, cur)) {
                break v;
            }
            visited.push(cur);
            if self.trace.solving(cur)? {
                break cur;
            }
            let k = self.m_direct(p - 1, cur)?;
            let ep_n = self.o(cur, k)?;
            let k2 = self.m_direct(p - 1, k)?;
            let ep_k = self.o(k, k2)?;
            if ep_k < ep_n && self.trace.rank(k)? >= self.trace.rank(cur)? {
                cur = k;
            } else {
                break k;
            }
        };
        for v in visited {
            self.m_memo.insert((p, v), result);
        }
        Ok(result)
    }

    /// `e_p(n) = o(S^{n, M(p, n)})` for nonsolving `S^n`.
    pub fn e_p(&mut self, p: u32, n: usize) -> Result<Option<Ordinal>, BoundError> {
        if self.trace.solving(n)? {
            return Ok(None);
        }
        let k = self.m(p, n)?;
        self.o(n, k).map(Some)
    }
}

/// `H(Cr)` with the table of `M`, the `e_p` values and the audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub h: usize,
    pub rank_bound: u32,
    /// `M(p, n)` for `p < RANK` and `n ≤ h`.
    pub m_table: BTreeMap<(u32, usize), usize>,
    /// `M` evaluated directly from the case split, for the same keys.
    pub m_direct: BTreeMap<(u32, usize), usize>,
    pub e_p_values: BTreeMap<(u32, usize), Ordinal>,
    pub audit: DescentAuditLog,
    pub trace: Trace,
}

impl BoundResult {
    /// Keys where `M'` and the direct evaluation disagree.
    pub fn table_mismatches(&self) -> Vec<(u32, usize)> {
        self.m_table
            .iter()
            .filter(|(key, v)| self.m_direct.get(key) != Some(v))
            .map(|(key, _)| *key)
            .collect()
    }
}

/// Computes `H(Cr)` and the full table without asserting anything about it.
pub fn compute_bound(
    cr: &CriticalFormulaSet,
    budget: usize,
    rule: ValueRule,
) -> Result<BoundResult, BoundError> {
    let mut engine = BoundEngine::new(cr, budget, rule)?;
    let rank_bound = cr.rank_bound();
    let h = engine.m(rank_bound - 1, 0)?;
    let top_audit = engine.audit.clone();
    let mut m_table = BTreeMap::new();
    let mut m_direct = BTreeMap::new();
    let mut e_p_values = BTreeMap::new();
    for p in 0..rank_bound {
        for n in 0..=h {
            m_table.insert((p, n), engine.m(p, n)?);
            m_direct.insert((p, n), engine.m_direct(p, n)?);
            if let Some(e) = engine.e_p(p, n)? {
                e_p_values.insert((p, n), e);
            }
        }
    }
    // make sure S^h itself is materialized
    engine.trace.solving(h)?;
    let mut audit = engine.audit.clone();
    audit.max_depth = audit.max_depth.max(top_audit.max_depth);
    Ok(BoundResult {
        h,
        rank_bound,
        m_table,
        m_direct,
        e_p_values,
        audit,
        trace: engine.trace.to_trace(),
    })
}

/// `H(Cr)`, checked against direct iteration and against `S^h` being a
/// solution.
pub fn h_bound(
    cr: &CriticalFormulaSet,
    budget: usize,
    rule: ValueRule,
) -> Result<BoundResult, BoundError> {
    let res = compute_bound(cr, budget, rule)?;
    let oracle = first_solution_index(cr, budget, rule).ok();
    if oracle != Some(res.h) {
        return Err(BoundError::SolutionMismatch { h: res.h, oracle });
    }
    let s_h = &res
        .trace
        .step_at(res.h)
        .ok_or(BoundError::NotSolving(res.h))?
        .subst;
    if !is_solving(s_h, cr) {
        return Err(BoundError::NotSolving(res.h));
    }
    if let Some(v) = res.audit.violations().next() {
        return Err(BoundError::DescentViolation(format!(
            "{}: {} -> {}",
            v.site, v.caller, v.callee
        )));
    }
    Ok(res)
}
