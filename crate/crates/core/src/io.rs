//! Trace files (JSON Lines) and the JSON documents of `analyze` and `bound`.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::bound::{BoundResult, CaseTag};
use crate::eval::{EvalError, Substitution};
use crate::hprocess::{Trace, TraceStep, ValueRule};
use crate::ordinal::{Coord, IndexVector};
use crate::series::{nd_set, termination_certificate, DecompositionTree, SeriesError, Span};
use crate::syntax::{parse_expr, print_expr, CriticalFormulaSet, ParseError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: {source}")]
    Term { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Subst { line: usize, source: EvalError },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

/// An index coordinate as it appears in JSON: a number or `"w"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum CoordRepr {
    Fin(u64),
    Sym(String),
}

impl From<Coord> for CoordRepr {
    fn from(c: Coord) -> Self {
        match c {
            Coord::Fin(n) => CoordRepr::Fin(n),
            Coord::Omega => CoordRepr::Sym("w".into()),
        }
    }
}

/// One line of a trace file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: usize,
    pub subst: Vec<(String, u64)>,
    pub solving: bool,
    pub rn: u32,
    pub selected: Option<usize>,
    pub en: Option<String>,
    pub vn: Option<u64>,
    /// Most significant coordinate first.
    an: Vec<CoordRepr>,
}

impl StepRecord {
    pub fn of(step: &TraceStep) -> Self {
        StepRecord {
            n: step.n,
            subst: step.subst.printed_entries(),
            solving: step.solving,
            rn: step.rn,
            selected: step.selected,
            en: step.en.as_ref().map(print_expr),
            vn: step.vn,
            an: step
                .an
                .most_significant_first()
                .map(CoordRepr::from)
                .collect(),
        }
    }

    fn into_step(self, line: usize) -> Result<TraceStep, IoError> {
        let term = |s: &str| parse_expr(s).map_err(|source| IoError::Term { line, source });
        let mut subst = Substitution::new();
        for (t, v) in &self.subst {
            subst
                .insert(term(t)?, *v)
                .map_err(|source| IoError::Subst { line, source })?;
        }
        let mut coords = Vec::with_capacity(self.an.len());
        for c in self.an.into_iter().rev() {
            coords.push(match c {
                CoordRepr::Fin(n) => Coord::Fin(n),
                CoordRepr::Sym(s) if s == "w" => Coord::Omega,
                CoordRepr::Sym(s) => {
                    return Err(IoError::Malformed {
                        line,
                        msg: format!("bad index coordinate {s:?}"),
                    })
                }
            });
        }
        Ok(TraceStep {
            n: self.n,
            subst,
            solving: self.solving,
            rn: self.rn,
            selected: self.selected,
            en: self.en.as_deref().map(term).transpose()?,
            vn: self.vn,
            an: IndexVector::new(coords),
        })
    }
}

pub fn write_trace<W: Write>(trace: &Trace, mut out: W) -> Result<(), IoError> {
    for step in &trace.steps {
        serde_json::to_writer(&mut out, &StepRecord::of(step)).map_err(|source| IoError::Json {
            line: step.n + 1,
            source,
        })?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn trace_to_jsonl(trace: &Trace) -> String {
    let mut buf = Vec::new();
    write_trace(trace, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Reads a trace for `cr`. A trace whose last step is not solving is marked
/// as having run out of budget.
pub fn read_trace<R: BufRead>(
    cr: &CriticalFormulaSet,
    rule: ValueRule,
    input: R,
) -> Result<Trace, IoError> {
    let mut steps = Vec::new();
    for (i, text) in input.lines().enumerate() {
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        let line = i + 1;
        let rec: StepRecord =
            serde_json::from_str(&text).map_err(|source| IoError::Json { line, source })?;
        if rec.n != steps.len() {
            return Err(IoError::Malformed {
                line,
                msg: format!("expected step {}, found {}", steps.len(), rec.n),
            });
        }
        steps.push(rec.into_step(line)?);
    }
    let budget_exceeded = steps.last().is_none_or(|s| !s.solving);
    Ok(Trace {
        cr: cr.clone(),
        steps,
        budget_exceeded,
        value_rule: rule,
    })
}

pub fn trace_from_jsonl(
    cr: &CriticalFormulaSet,
    rule: ValueRule,
    text: &str,
) -> Result<Trace, IoError> {
    read_trace(cr, rule, text.as_bytes())
}

fn span_json(s: Span) -> Json {
    json!([s.m, s.k])
}

fn tree_json(trace: &Trace, t: &DecompositionTree) -> Result<Json, SeriesError> {
    let children = t
        .children
        .iter()
        .map(|c| tree_json(trace, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "span": span_json(t.span),
        "rank": t.rank,
        "level": t.level,
        "o": t.o.to_string(),
        "nd": nd_set(trace, t.span)?,
        "children": children,
    }))
}

/// Series analysis of a solved trace: the decomposition of `[0, H)`, its
/// nd-sets and the termination certificate.
pub fn analysis_json(trace: &Trace) -> Result<Json, SeriesError> {
    let h = trace.solution_index().ok_or(SeriesError::NotTerminated)?;
    let root = Span::new(0, h);
    let (tree, nd) = if h == 0 {
        (Json::Null, Json::Null)
    } else {
        let t = DecompositionTree::build(trace, root)?;
        (tree_json(trace, &t)?, json!(nd_set(trace, root)?))
    };
    let cert = termination_certificate(trace)?;
    let entries: Vec<Json> = cert
        .entries
        .iter()
        .map(|e| {
            json!({
                "span": span_json(e.span),
                "beta": e.beta,
                "o": e.o.to_string(),
            })
        })
        .collect();
    Ok(json!({
        "h": h,
        "rankBound": trace.cr.rank_bound(),
        "ranks": trace.steps.iter().map(|s| s.rn).collect::<Vec<_>>(),
        "nd": nd,
        "tree": tree,
        "certificate": {
            "xi": cert.xi,
            "decreasing": cert.is_strictly_decreasing(),
            "entries": entries,
        },
    }))
}

/// Rows of the `M` table included in the bound document.
pub const M_TABLE_SAMPLE: usize = 64;

pub fn bound_json(res: &BoundResult) -> Json {
    let m_table: Vec<Json> = res
        .m_table
        .iter()
        .filter(|((_, n), _)| *n < M_TABLE_SAMPLE)
        .map(|(&(p, n), &m)| json!({ "p": p, "n": n, "m": m }))
        .collect();
    let e_p: Vec<Json> = res
        .e_p_values
        .iter()
        .map(|(&(p, n), o)| json!({ "p": p, "n": n, "e": o.to_string() }))
        .collect();
    let count = |tag: CaseTag| res.audit.cases.iter().filter(|c| c.2 == tag).count();
    json!({
        "h": res.h,
        "rankBound": res.rank_bound,
        "mTable": m_table,
        "auditSummary": {
            "calls": res.audit.entries.len(),
            "maxDepth": res.audit.max_depth,
            "violations": res.audit.violations().count(),
            "cases": {
                "noDescent": count(CaseTag::NoDescent),
                "rankDrop": count(CaseTag::RankDrop),
                "continue": count(CaseTag::Continue),
            },
        },
        "ePValues": e_p,
    })
}
