//! Epsilon substitutions and reduction of expressions under them.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::syntax::{print_expr, CriticalFormulaSet, Expr};

/// Irreducible value of a closed expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Nat(u64),
    Bool(bool),
}

impl Value {
    pub fn as_nat(self) -> Option<u64> {
        match self {
            Value::Nat(n) => Some(n),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Nat(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("`{0}` is not a canonical epsilon term")]
    NotCanonical(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    value: u64,
    rank: u32,
}

/// A finite assignment of natural numbers to canonical epsilon terms.
///
/// Terms outside the domain have the default value 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    entries: BTreeMap<Expr, Entry>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, term: Expr, value: u64) -> Result<Option<u64>, EvalError> {
        if !term.is_canonical() {
            return Err(EvalError::NotCanonical(print_expr(&term)));
        }
        let rank = term.rank();
        Ok(self
            .entries
            .insert(term, Entry { value, rank })
            .map(|e| e.value))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Expr, u64)>) -> Result<Self, EvalError> {
        let mut s = Substitution::new();
        for (e, v) in pairs {
            s.insert(e, v)?;
        }
        Ok(s)
    }

    pub fn get(&self, term: &Expr) -> Option<u64> {
        self.entries.get(term).map(|e| e.value)
    }

    pub fn contains(&self, term: &Expr) -> bool {
        self.entries.contains_key(term)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Expr, u64)> {
        self.entries.iter().map(|(k, e)| (k, e.value))
    }

    /// Maximal rank of the domain, 0 when empty.
    pub fn rank(&self) -> u32 {
        self.entries.values().map(|e| e.rank).max().unwrap_or(0)
    }

    /// Keeps the entries satisfying `keep(term, rank)`.
    pub(crate) fn retain(&mut self, mut keep: impl FnMut(&Expr, u32) -> bool) {
        self.entries.retain(|k, e| keep(k, e.rank));
    }

    /// Entries of rank strictly below `r`.
    pub fn below_rank(&self, r: u32) -> Substitution {
        let mut s = self.clone();
        s.retain(|_, rank| rank < r);
        s
    }

    /// Entries as `(printed term, value)`, sorted by the printed term.
    pub fn printed_entries(&self) -> Vec<(String, u64)> {
        let mut v: Vec<_> = self.iter().map(|(k, v)| (print_expr(k), v)).collect();
        v.sort();
        v
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.printed_entries().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} -> {v}")?;
        }
        f.write_str("}")
    }
}

/// Innermost-leftmost normal form of `e` under `s`.
///
/// Every closed subexpression is replaced by its value; closed epsilon terms
/// are looked up after their bodies are normalized (so the key is canonical),
/// defaulting to 0. Open parts are rebuilt around normalized children.
pub fn normalize(e: &Expr, s: &Substitution) -> Expr {
    match e {
        Expr::Num(_) | Expr::Bool(_) | Expr::Bound(_) | Expr::Free(_) => e.clone(),
        Expr::App(f, a, b) => match (normalize(a, s), normalize(b, s)) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(f.apply(x, y)),
            (a, b) => Expr::app(*f, a, b),
        },
        Expr::Atom(r, a, b) => match (normalize(a, s), normalize(b, s)) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Bool(r.apply(x, y)),
            (a, b) => Expr::atom(*r, a, b),
        },
        Expr::Not(a) => match normalize(a, s) {
            Expr::Bool(b) => Expr::Bool(!b),
            a => Expr::negate(a),
        },
        Expr::Conn(c, a, b) => match (normalize(a, s), normalize(b, s)) {
            (Expr::Bool(x), Expr::Bool(y)) => Expr::Bool(c.apply(x, y)),
            (a, b) => Expr::conn(*c, a, b),
        },
        Expr::Eps(h, body) => {
            let key = Expr::Eps(h.clone(), Box::new(normalize(body, s)));
            if key.is_closed() {
                Expr::Num(s.get(&key).unwrap_or(0))
            } else {
                key
            }
        }
    }
}

/// `|e|_S` for a closed expression; `None` if `e` is open.
pub fn evaluate(e: &Expr, s: &Substitution) -> Option<Value> {
    match normalize(e, s) {
        Expr::Num(n) => Some(Value::Nat(n)),
        Expr::Bool(b) => Some(Value::Bool(b)),
        _ => None,
    }
}

/// The key `eps x.|F|_S` that a closed epsilon term is looked up under.
pub fn canonical_key(e: &Expr, s: &Substitution) -> Option<Expr> {
    match e {
        Expr::Eps(h, body) if e.is_closed() => {
            Some(Expr::Eps(h.clone(), Box::new(normalize(body, s))))
        }
        _ => None,
    }
}

/// Ackermann ordering: the usual order on positive numbers, with 0 on top.
pub fn ack_less(u: u64, v: u64) -> bool {
    (u != 0 && v == 0) || (u != 0 && v != 0 && u < v)
}

pub fn ack_le(u: u64, v: u64) -> bool {
    u == v || ack_less(u, v)
}

/// `T ⊑_A S`: every entry `(e, u)` of `s` has an entry `(e, v)` in `t` with
/// `v ≤_A u`.
pub fn sqsub_a(t: &Substitution, s: &Substitution) -> bool {
    s.iter()
        .all(|(e, u)| t.get(e).is_some_and(|v| ack_le(v, u)))
}

/// Does `s` make every axiom of `cr` true?
pub fn is_solving(s: &Substitution, cr: &CriticalFormulaSet) -> bool {
    cr.formulas()
        .iter()
        .all(|f| evaluate(f, s) == Some(Value::Bool(true)))
}
