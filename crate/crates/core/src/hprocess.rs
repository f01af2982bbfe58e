//! The H-process: repeatedly correct the least false critical formula.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::eval::{evaluate, is_solving, normalize, Substitution, Value};
use crate::ordinal::{index_of, IndexVector};
use crate::syntax::{CriticalFormulaSet, Expr, Hint};

/// Default step budget for a run.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "EPSILON_FORGE_BUDGET";

/// The budget from [`BUDGET_ENV`] if set and valid, else [`DEFAULT_BUDGET`].
pub fn default_budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HError {
    #[error("the substitution already solves every critical formula")]
    NotApplicable,
    #[error("no solution within {0} steps")]
    BudgetExceeded(usize),
}

/// How the new value `v^S` is chosen for the selected term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ValueRule {
    /// `v^S = |t|_S`
    #[default]
    Paper,
    /// The least `u ≤ |t|_S` with `|F[u]|_S` true.
    MinWitness,
}

impl fmt::Display for ValueRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueRule::Paper => "paper",
            ValueRule::MinWitness => "min-witness",
        })
    }
}

impl FromStr for ValueRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(ValueRule::Paper),
            "min-witness" => Ok(ValueRule::MinWitness),
            other => Err(format!("unknown value rule `{other}`")),
        }
    }
}

/// `Cr(S)` together with `e^S` and `v^S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub index: usize,
    pub term: Expr,
    pub value: u64,
}

/// Picks the least false axiom under `s`.
pub fn select_critical(
    s: &Substitution,
    cr: &CriticalFormulaSet,
    rule: ValueRule,
) -> Result<Selection, HError> {
    let index = cr
        .formulas()
        .iter()
        .position(|f| evaluate(f, s) != Some(Value::Bool(true)))
        .ok_or(HError::NotApplicable)?;
    let axiom = &cr.axioms()[index];
    let term = Expr::Eps(
        Hint::new(axiom.var()),
        Box::new(normalize(axiom.matrix(), s)),
    );
    let witness = evaluate(axiom.witness(), s)
        .and_then(Value::as_nat)
        .expect("witness is a closed term");
    let value = match rule {
        ValueRule::Paper => witness,
        ValueRule::MinWitness => (0..=witness)
            .find(|&u| evaluate(&axiom.matrix_at(&Expr::Num(u)), s) == Some(Value::Bool(true)))
            .unwrap_or(witness),
    };
    Ok(Selection { index, term, value })
}

/// The step rule: drop entries above `rk(e)`, drop `e` itself, insert `(e, v)`.
pub fn apply_update(s: &Substitution, e: &Expr, v: u64) -> Substitution {
    let r = e.rank();
    let mut next = s.clone();
    next.retain(|f, rank| rank < r || (rank == r && f != e));
    next.insert(e.clone(), v)
        .expect("selected terms are canonical by construction");
    next
}

/// `S^{n+1}` from a nonsolving `S^n`.
pub fn step(
    s: &Substitution,
    cr: &CriticalFormulaSet,
    rule: ValueRule,
) -> Result<Substitution, HError> {
    let sel = select_critical(s, cr, rule)?;
    Ok(apply_update(s, &sel.term, sel.value))
}

/// One substitution of the process with its derived data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub n: usize,
    pub subst: Substitution,
    pub solving: bool,
    pub rn: u32,
    pub selected: Option<usize>,
    pub en: Option<Expr>,
    pub vn: Option<u64>,
    pub an: IndexVector,
}

impl TraceStep {
    fn new(n: usize, subst: Substitution, cr: &CriticalFormulaSet, rule: ValueRule) -> Self {
        let an = index_of(&subst, cr);
        match select_critical(&subst, cr, rule) {
            Ok(sel) => TraceStep {
                n,
                rn: subst.rank(),
                subst,
                solving: false,
                selected: Some(sel.index),
                en: Some(sel.term),
                vn: Some(sel.value),
                an,
            },
            Err(_) => TraceStep {
                n,
                rn: subst.rank(),
                subst,
                solving: true,
                selected: None,
                en: None,
                vn: None,
                an,
            },
        }
    }

    /// `S^{n+1}`, or `None` for a solving step.
    pub fn successor(&self) -> Option<Substitution> {
        match (&self.en, self.vn) {
            (Some(e), Some(v)) => Some(apply_update(&self.subst, e, v)),
            _ => None,
        }
    }
}

/// Generates `S^0, S^1, …` up to and including the first solution.
#[derive(Clone, Debug)]
pub struct HProcess<'a> {
    cr: &'a CriticalFormulaSet,
    rule: ValueRule,
    next: Option<Substitution>,
    n: usize,
}

impl<'a> HProcess<'a> {
    pub fn new(cr: &'a CriticalFormulaSet, rule: ValueRule) -> Self {
        HProcess {
            cr,
            rule,
            next: Some(Substitution::new()),
            n: 0,
        }
    }
}

impl Iterator for HProcess<'_> {
    type Item = TraceStep;

    fn next(&mut self) -> Option<TraceStep> {
        let s = self.next.take()?;
        let st = TraceStep::new(self.n, s, self.cr, self.rule);
        self.next = st.successor();
        self.n += 1;
        Some(st)
    }
}

/// A recorded run, ending at the first solving step or at the budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub cr: CriticalFormulaSet,
    pub steps: Vec<TraceStep>,
    pub budget_exceeded: bool,
    pub value_rule: ValueRule,
}

impl Trace {
    /// Index of the solving step, if reached.
    pub fn solution_index(&self) -> Option<usize> {
        self.steps.last().filter(|s| s.solving).map(|s| s.n)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// `S^n`; past the end of a solved trace the solution repeats.
    pub fn step_at(&self, n: usize) -> Option<&TraceStep> {
        match self.steps.get(n) {
            Some(st) => Some(st),
            None => self.steps.last().filter(|st| st.solving),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

pub fn run_hprocess(cr: &CriticalFormulaSet, budget: usize) -> Trace {
    run_hprocess_with(cr, budget, ValueRule::Paper)
}

/// Runs at most `budget` update steps.
pub fn run_hprocess_with(cr: &CriticalFormulaSet, budget: usize, rule: ValueRule) -> Trace {
    let steps: Vec<TraceStep> = HProcess::new(cr, rule)
        .take(budget.saturating_add(1))
        .collect();
    let budget_exceeded = !steps.last().is_some_and(|s| s.solving);
    Trace {
        cr: cr.clone(),
        steps,
        budget_exceeded,
        value_rule: rule,
    }
}

/// `min{n : S^n solving}` by plain iteration, recording nothing.
pub fn first_solution_index(
    cr: &CriticalFormulaSet,
    budget: usize,
    rule: ValueRule,
) -> Result<usize, HError> {
    let mut s = Substitution::new();
    for n in 0..=budget {
        if is_solving(&s, cr) {
            return Ok(n);
        }
        s = step(&s, cr, rule)?;
    }
    Err(HError::BudgetExceeded(budget))
}

/// A step where `e_n` already had value `v` in `S^n` but `0 ≠ v_n < v` fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectnessViolation {
    pub n: usize,
    pub term: Expr,
    pub old: u64,
    pub new: u64,
}

impl fmt::Display for CorrectnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {}: {} had value {} but was reset to {}",
            self.n, self.term, self.old, self.new
        )
    }
}

pub fn check_correctness(trace: &Trace) -> Vec<CorrectnessViolation> {
    trace
        .steps
        .iter()
        .filter_map(|st| {
            let (e, vn) = (st.en.as_ref()?, st.vn?);
            let old = st.subst.get(e)?;
            (vn == 0 || vn >= old).then(|| CorrectnessViolation {
                n: st.n,
                term: e.clone(),
                old,
                new: vn,
            })
        })
        .collect()
}
