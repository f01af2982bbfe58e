//! Consecutive series of an H-process: nd-sets, decompositions, p-series,
//! the comparison `≺`, ordinal assignment and the termination certificate.

use std::fmt;

use thiserror::Error;

use crate::eval::{sqsub_a, Substitution};
use crate::hprocess::Trace;
use crate::ordinal::{IndexVector, Ordinal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("empty or reversed span [{m}, {k})")]
    Range { m: usize, k: usize },
    #[error("step {0} is beyond an unsolved trace")]
    Unavailable(usize),
    #[error("r_{m} exceeds the rank of [{m}, {k})")]
    NotInNd { m: usize, k: usize },
    #[error("the trace did not reach a solution")]
    NotTerminated,
}

/// Per-step data the analysis needs. Solving steps report `r = 0` and
/// `a = 0`.
pub trait StepSource {
    /// `RANK(Cr)`
    fn rank_bound(&self) -> u32;
    fn rank(&self, n: usize) -> Result<u32, SeriesError>;
    fn index(&self, n: usize) -> Result<IndexVector, SeriesError>;
    fn solving(&self, n: usize) -> Result<bool, SeriesError>;
}

impl StepSource for Trace {
    fn rank_bound(&self) -> u32 {
        self.cr.rank_bound()
    }

    fn rank(&self, n: usize) -> Result<u32, SeriesError> {
        let st = self.step_at(n).ok_or(SeriesError::Unavailable(n))?;
        Ok(if st.solving { 0 } else { st.rn })
    }

    fn index(&self, n: usize) -> Result<IndexVector, SeriesError> {
        let st = self.step_at(n).ok_or(SeriesError::Unavailable(n))?;
        Ok(if st.solving {
            IndexVector::zeros(st.an.len())
        } else {
            st.an.clone()
        })
    }

    fn solving(&self, n: usize) -> Result<bool, SeriesError> {
        Ok(self.step_at(n).ok_or(SeriesError::Unavailable(n))?.solving)
    }
}

/// The half-open range `[m, k)` of step numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub m: usize,
    pub k: usize,
}

impl Span {
    pub fn new(m: usize, k: usize) -> Self {
        Span { m, k }
    }

    pub fn len(self) -> usize {
        self.k.saturating_sub(self.m)
    }

    pub fn is_empty(self) -> bool {
        self.k <= self.m
    }

    pub fn is_singleton(self) -> bool {
        self.len() == 1
    }

    fn check(self) -> Result<(), SeriesError> {
        if self.is_empty() {
            Err(SeriesError::Range {
                m: self.m,
                k: self.k,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.m, self.k)
    }
}

fn ranks<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<Vec<u32>, SeriesError> {
    (span.m..span.k).map(|n| src.rank(n)).collect()
}

/// `nd(S^{m,k})`: the steps whose rank is the minimum of the remaining suffix.
pub fn nd_set<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<Vec<usize>, SeriesError> {
    span.check()?;
    let rs = ranks(src, span)?;
    let mut out = Vec::new();
    let mut suffix_min = u32::MAX;
    for (i, &r) in rs.iter().enumerate().rev() {
        if r <= suffix_min {
            out.push(span.m + i);
            suffix_min = r;
        }
    }
    out.reverse();
    Ok(out)
}

/// `rk(S^{m,k})`: the least interior rank, or `RANK` for a singleton.
pub fn series_rank<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<u32, SeriesError> {
    span.check()?;
    let mut r = src.rank_bound();
    for n in span.m + 1..span.k {
        r = r.min(src.rank(n)?);
    }
    Ok(r)
}

/// `r_m < rk(S^{m,k})`
pub fn is_section<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<bool, SeriesError> {
    Ok(src.rank(span.m)? < series_rank(src, span)?)
}

/// `r_m ≤ rk(S^{m,k})`, equivalently `m ∈ nd(S^{m,k})`.
pub fn starts_in_nd<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<bool, SeriesError> {
    Ok(src.rank(span.m)? <= series_rank(src, span)?)
}

fn require_nd<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<(), SeriesError> {
    if starts_in_nd(src, span)? {
        Ok(())
    } else {
        Err(SeriesError::NotInNd {
            m: span.m,
            k: span.k,
        })
    }
}

fn split_at(span: Span, cuts: &[usize]) -> Vec<Span> {
    let mut out = Vec::with_capacity(cuts.len());
    for (i, &c) in cuts.iter().enumerate() {
        let end = cuts.get(i + 1).copied().unwrap_or(span.k);
        out.push(Span::new(c, end));
    }
    out
}

/// Components of the decomposition of a series at its nd-set.
pub fn decompose<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<Vec<Span>, SeriesError> {
    require_nd(src, span)?;
    Ok(split_at(span, &nd_set(src, span)?))
}

/// Least `p` such that the series is a p-series.
pub fn p_series_level<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<u32, SeriesError> {
    require_nd(src, span)?;
    level_unchecked(src, span)
}

fn level_unchecked<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<u32, SeriesError> {
    if span.is_singleton() {
        return Ok(0);
    }
    let mut level = 0;
    for c in split_at(span, &nd_set(src, span)?) {
        level = level.max(level_unchecked(src, c)?);
    }
    Ok(level + 1)
}

pub fn is_p_series<S: StepSource + ?Sized>(
    src: &S,
    span: Span,
    p: u32,
) -> Result<bool, SeriesError> {
    Ok(p_series_level(src, span)? <= p)
}

/// `S^1 ≺ S^0` for two series of a trace.
pub fn precedes(trace: &Trace, s1: Span, s0: Span) -> Result<bool, SeriesError> {
    require_nd(trace, s1)?;
    require_nd(trace, s0)?;
    let sub = |n: usize| -> Result<&Substitution, SeriesError> {
        Ok(&trace.step_at(n).ok_or(SeriesError::Unavailable(n))?.subst)
    };
    if !sqsub_a(sub(s1.m)?, sub(s0.m)?) {
        return Ok(false);
    }
    let (l0, l1) = (s0.len(), s1.len());
    for p in 0..l0.min(l1) {
        let (a0, a1) = (trace.index(s0.m + p)?, trace.index(s1.m + p)?);
        if a0 != a1 {
            return Ok(a0 > a1);
        }
    }
    Ok(l1 < l0)
}

/// `o(S^{m,k}; ξ)`.
///
/// A singleton at level `ξ` is `ω_{RANK-ξ}(a_m)`. Otherwise, with `r` the
/// series rank, the series is cut before every interior step of rank `r`,
/// and `o(S; ξ) = ω_{r-ξ}(ω^{o(C_0; r+1)} + … + ω^{o(C_l; r+1)})`.
/// The empty series has value 0.
pub fn o_value<S: StepSource + ?Sized>(
    src: &S,
    span: Span,
    xi: u32,
) -> Result<Ordinal, SeriesError> {
    if span.is_empty() {
        return Ok(Ordinal::zero());
    }
    let r = series_rank(src, span)?;
    let base = if span.is_singleton() {
        src.index(span.m)?.ordinal()
    } else {
        let mut cuts = vec![span.m];
        for n in span.m + 1..span.k {
            if src.rank(n)? == r {
                cuts.push(n);
            }
        }
        let mut sum = Ordinal::zero();
        for c in split_at(span, &cuts) {
            sum = sum.add(&Ordinal::omega_pow(&o_value(src, c, r + 1)?));
        }
        sum
    };
    Ok(base.omega_tower(r.saturating_sub(xi)))
}

/// `o(S) = o(S; 0)`
pub fn o_of<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<Ordinal, SeriesError> {
    o_value(src, span, 0)
}

/// A series with its recursive decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTree {
    pub span: Span,
    pub rank: u32,
    pub level: u32,
    pub o: Ordinal,
    pub children: Vec<DecompositionTree>,
}

impl DecompositionTree {
    pub fn build<S: StepSource + ?Sized>(src: &S, span: Span) -> Result<Self, SeriesError> {
        require_nd(src, span)?;
        let children = if span.is_singleton() {
            Vec::new()
        } else {
            decompose(src, span)?
                .into_iter()
                .map(|c| DecompositionTree::build(src, c))
                .collect::<Result<_, _>>()?
        };
        let level = children.iter().map(|c| c.level + 1).max().unwrap_or(0);
        Ok(DecompositionTree {
            span,
            rank: series_rank(src, span)?,
            level,
            o: o_of(src, span)?,
            children,
        })
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Self::node_count).sum::<usize>()
    }
}

/// One segment `S^{n_i, n_{i+1}}` of the certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub span: Span,
    /// `β_i`, absent for the final segment.
    pub beta: Option<u32>,
    pub o: Ordinal,
}

/// The descending sequence of the termination proof, evaluated at `ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub xi: u32,
    pub entries: Vec<CertificateEntry>,
}

impl Certificate {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].o < w[0].o)
    }

    /// Every value lies below `bound`.
    pub fn is_below(&self, bound: &Ordinal) -> bool {
        self.entries.iter().all(|e| e.o < *bound)
    }
}

/// Splits `[0, H)` at `n_0 = 0`, `n_{i+1} = min{n > n_i : r_n = β_i}`, where
/// `β_i` is the least rank of a nonsolving step after `n_i`.
pub fn termination_certificate(trace: &Trace) -> Result<Certificate, SeriesError> {
    let h = trace.solution_index().ok_or(SeriesError::NotTerminated)?;
    let mut cuts = Vec::new();
    let mut betas = Vec::new();
    let mut n = 0;
    while n < h {
        cuts.push(n);
        let beta = (n + 1..h).map(|i| trace.steps[i].rn).min();
        betas.push(beta);
        n = match beta {
            Some(b) => (n + 1..h)
                .find(|&i| trace.steps[i].rn == b)
                .expect("minimum is attained"),
            None => h,
        };
    }
    let xi = betas.first().copied().flatten().map_or(2, |b| b + 1);
    let mut entries = Vec::with_capacity(cuts.len());
    for (i, &m) in cuts.iter().enumerate() {
        let span = Span::new(m, cuts.get(i + 1).copied().unwrap_or(h));
        entries.push(CertificateEntry {
            span,
            beta: betas[i],
            o: o_value(trace, span, xi)?,
        });
    }
    Ok(Certificate { xi, entries })
}
