use std::fmt;

use super::expr::{Conn, Expr, Hint, Rel};
use super::printer::{binder_name, print_expr, print_open};

/// The epsilon axiom `F[t] -> not(t < eps x.F) and F[eps x.F]`.
///
/// `matrix` is the body `F` with the distinguished variable as loose index 0;
/// `witness` is the closed term `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CriticalFormula {
    var: Hint,
    matrix: Expr,
    witness: Expr,
}

impl CriticalFormula {
    pub fn new(var: impl Into<String>, matrix: Expr, witness: Expr) -> Self {
        debug_assert!(matrix.loose_bound() <= 1 && !matrix.has_free_names());
        debug_assert!(witness.is_closed());
        CriticalFormula {
            var: Hint::new(var),
            matrix,
            witness,
        }
    }

    pub fn var(&self) -> &str {
        self.var.as_str()
    }

    pub fn matrix(&self) -> &Expr {
        &self.matrix
    }

    pub fn witness(&self) -> &Expr {
        &self.witness
    }

    /// `eps x.F`
    pub fn epsilon_term(&self) -> Expr {
        Expr::Eps(self.var.clone(), Box::new(self.matrix.clone()))
    }

    /// `F[u]`
    pub fn matrix_at(&self, u: &Expr) -> Expr {
        self.matrix.instantiate(u)
    }

    /// The full closed axiom formula.
    pub fn axiom(&self) -> Expr {
        let e = self.epsilon_term();
        let premise = self.matrix_at(&self.witness);
        let not_above = Expr::negate(Expr::atom(Rel::Lt, self.witness.clone(), e.clone()));
        let conclusion = Expr::conn(Conn::And, not_above, self.matrix_at(&e));
        Expr::conn(Conn::Imp, premise, conclusion)
    }
}

impl fmt::Display for CriticalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = binder_name(self.var.as_str());
        write!(
            f,
            "(crit {name} {} {})",
            print_open(&self.matrix, &name),
            print_expr(&self.witness)
        )
    }
}

/// An ordered sequence of critical formulas with derived data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalFormulaSet {
    axioms: Vec<CriticalFormula>,
    formulas: Vec<Expr>,
    closed_eps: Vec<Expr>,
    rank_bound: u32,
}

impl CriticalFormulaSet {
    pub fn new(axioms: Vec<CriticalFormula>) -> Self {
        let formulas: Vec<Expr> = axioms.iter().map(CriticalFormula::axiom).collect();
        let closed_eps = enumerate_closed_epsilon_terms(&formulas);
        let rk = formulas.iter().map(Expr::rank).max().unwrap_or(0);
        CriticalFormulaSet {
            axioms,
            formulas,
            closed_eps,
            rank_bound: (rk + 1).max(2),
        }
    }

    pub fn axioms(&self) -> &[CriticalFormula] {
        &self.axioms
    }

    /// The instantiated axiom formulas, by index.
    pub fn formulas(&self) -> &[Expr] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// Closed epsilon terms occurring in the axioms, ordered so that a closed
    /// subexpression of `e_i` always has an index greater than `i`.
    pub fn closed_epsilon_terms(&self) -> &[Expr] {
        &self.closed_eps
    }

    /// Number of closed epsilon terms.
    pub fn n_closed(&self) -> usize {
        self.closed_eps.len()
    }

    /// Maximal rank over the axioms.
    pub fn rank(&self) -> u32 {
        self.formulas.iter().map(Expr::rank).max().unwrap_or(0)
    }

    /// `max(rank + 1, 2)`: strict upper bound on the rank of every
    /// substitution in the H-process.
    pub fn rank_bound(&self) -> u32 {
        self.rank_bound
    }
}

impl fmt::Display for CriticalFormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axioms {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Distinct closed epsilon terms of `formulas`, outer terms first.
///
/// Among the terms not contained in any remaining term, the one that occurs
/// first is emitted next, so the order is deterministic and stable.
pub fn enumerate_closed_epsilon_terms(formulas: &[Expr]) -> Vec<Expr> {
    let mut found: Vec<Expr> = Vec::new();
    for f in formulas {
        f.walk(&mut |e, _| {
            if e.is_epsilon() && e.is_closed() && !found.contains(e) {
                found.push(e.clone());
            }
        });
    }
    let mut ordered = Vec::with_capacity(found.len());
    while !found.is_empty() {
        let pick = (0..found.len())
            .find(|&i| {
                !found
                    .iter()
                    .enumerate()
                    .any(|(j, o)| j != i && o.has_proper_subexpr(&found[i]))
            })
            .expect("proper-subexpression order is acyclic");
        ordered.push(found.remove(pick));
    }
    ordered
}
