//! Seeded random generation of critical-formula sets.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hprocess::{first_solution_index, run_hprocess, ValueRule};
use crate::syntax::{Conn, CriticalFormula, CriticalFormulaSet, Expr, Fun, Rel};

/// Size limits for generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_axioms: usize,
    pub max_rank: u32,
    pub max_depth: u32,
    pub max_const: u64,
    /// Instances must solve within this many steps.
    pub max_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_axioms: 6,
            max_rank: 3,
            max_depth: 5,
            max_const: 9,
            max_steps: 400,
        }
    }
}

/// One generated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub cr: CriticalFormulaSet,
    /// Rejected candidates before this one was accepted.
    pub resamples: u32,
    pub solution_index: usize,
    /// Highest rank of a substitution in the run.
    pub max_subst_rank: u32,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} axioms, solved at {}, max rank {}, {} resamples",
            self.name,
            self.cr.len(),
            self.solution_index,
            self.max_subst_rank,
            self.resamples
        )
    }
}

const FUNS: [Fun; 3] = [Fun::Plus, Fun::Times, Fun::Monus];
const RELS: [Rel; 2] = [Rel::Eq, Rel::Lt];
const CONNS: [Conn; 3] = [Conn::And, Conn::Or, Conn::Imp];

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    limits: Limits,
}

impl Gen<'_> {
    fn num(&mut self) -> Expr {
        Expr::Num(self.rng.gen_range(0..=self.limits.max_const))
    }

    /// A term over the loose indices `0..scope`.
    fn term(&mut self, depth: u32, scope: u32) -> Expr {
        if depth <= 1 || self.rng.gen_bool(0.45) {
            return if scope > 0 && self.rng.gen_bool(0.6) {
                // favour the innermost variable
                let i = if self.rng.gen_bool(0.7) {
                    0
                } else {
                    self.rng.gen_range(0..scope)
                };
                Expr::Bound(i)
            } else {
                self.num()
            };
        }
        let f = *FUNS.choose(self.rng).expect("nonempty");
        Expr::app(f, self.term(depth - 1, scope), self.term(depth - 1, scope))
    }

    fn atom(&mut self, depth: u32, scope: u32) -> Expr {
        let r = *RELS.choose(self.rng).expect("nonempty");
        Expr::atom(
            r,
            self.term(depth.saturating_sub(1), scope),
            self.term(depth.saturating_sub(1), scope),
        )
    }

    fn formula(&mut self, depth: u32, scope: u32) -> Expr {
        if depth <= 2 {
            return self.atom(depth, scope);
        }
        match self.rng.gen_range(0..10) {
            0..=4 => self.atom(depth, scope),
            5 => Expr::negate(self.formula(depth - 1, scope)),
            _ => {
                let c = *CONNS.choose(self.rng).expect("nonempty");
                Expr::conn(
                    c,
                    self.formula(depth - 1, scope),
                    self.formula(depth - 1, scope),
                )
            }
        }
    }

    /// A formula in which the loose index 0 occurs.
    fn matrix(&mut self, depth: u32, scope: u32) -> Expr {
        loop {
            let f = self.formula(depth, scope);
            if f.mentions_loose(0) {
                return f;
            }
        }
    }

    /// A matrix in `x` that contains a term `eps y.G(y, x)`; deeper nesting
    /// at `levels > 1`. Returns the matrix and the inner body `G`.
    fn nested_matrix(&mut self, levels: u32) -> (Expr, Expr) {
        let depth = self.limits.max_depth;
        let inner_body = if levels > 1 {
            // G itself contains a dependent epsilon term
            let (deeper, _) = self.nested_matrix_in_scope(levels - 1, 2);
            deeper
        } else {
            loop {
                let g = self.formula(depth.min(3), 2);
                if g.mentions_loose(0) && g.mentions_loose(1) {
                    break g;
                }
            }
        };
        let inner = Expr::eps("y", inner_body.clone());
        let left = if self.rng.gen_bool(0.5) {
            Expr::Bound(0)
        } else {
            self.term(2, 1)
        };
        let r = *RELS.choose(self.rng).expect("nonempty");
        let core = if self.rng.gen_bool(0.5) {
            Expr::atom(r, left, inner)
        } else {
            Expr::atom(r, inner, left)
        };
        let matrix = if self.rng.gen_bool(0.3) {
            let c = *CONNS.choose(self.rng).expect("nonempty");
            Expr::conn(c, core, self.matrix(2, 1))
        } else {
            core
        };
        (matrix, inner_body)
    }

    /// Like [`Self::nested_matrix`] but for a body under `scope` binders,
    /// mentioning both index 0 and index 1.
    fn nested_matrix_in_scope(&mut self, levels: u32, scope: u32) -> (Expr, Expr) {
        debug_assert!(levels >= 1 && scope >= 2);
        let g = loop {
            let g = self.formula(3, scope + 1);
            if g.mentions_loose(0) && g.mentions_loose(1) {
                break g;
            }
        };
        let inner = Expr::eps("z", g.clone());
        let r = *RELS.choose(self.rng).expect("nonempty");
        (
            Expr::atom(
                r,
                Expr::Bound(0),
                Expr::app(Fun::Plus, inner, Expr::Bound(1)),
            ),
            g,
        )
    }

    fn closed_term(&mut self, pool: &[Expr]) -> Expr {
        match self.rng.gen_range(0..10) {
            0..=4 => self.num(),
            5..=6 => {
                let f = *FUNS.choose(self.rng).expect("nonempty");
                Expr::app(f, self.num(), self.num())
            }
            _ => match pool.choose(self.rng) {
                Some(e) if self.rng.gen_bool(0.5) => e.clone(),
                Some(e) => Expr::app(Fun::Plus, e.clone(), self.num()),
                None => self.num(),
            },
        }
    }

    /// An outer term whose matrix reads an inner term at `x`, several
    /// witnesses for it, and axioms fixing the inner term at each witness.
    /// Each inner correction discards the outer value, so runs are long.
    fn cascade(&mut self) -> Vec<CriticalFormula> {
        let top = self.limits.max_const.max(4) - 1;
        let k = self
            .rng
            .gen_range(2..=(self.limits.max_axioms / 2).clamp(2, 4));
        let c = self.rng.gen_range(0..=2);
        let mut ws: Vec<u64> = (c + 1..=top).collect();
        ws.shuffle(self.rng);
        ws.truncate(k);
        ws.sort_unstable_by(|a, b| b.cmp(a));
        let r = *RELS.choose(self.rng).expect("nonempty");
        let inner = Expr::eps("y", Expr::atom(r, Expr::Bound(1), Expr::Bound(0)));
        let outer = Expr::atom(Rel::Lt, Expr::Num(c), inner);
        let mut axioms: Vec<CriticalFormula> = ws
            .iter()
            .map(|&w| CriticalFormula::new("x", outer.clone(), Expr::Num(w)))
            .collect();
        for &w in &ws {
            let fix = match r {
                Rel::Lt => w + 1,
                Rel::Eq => w,
            };
            axioms.push(CriticalFormula::new(
                "y",
                Expr::atom(r, Expr::Num(w), Expr::Bound(0)),
                Expr::Num(fix),
            ));
        }
        axioms
    }

    fn instance(&mut self, cascade: bool) -> CriticalFormulaSet {
        if cascade {
            return CriticalFormulaSet::new(self.cascade());
        }
        let n = self.rng.gen_range(2..=self.limits.max_axioms.max(2));
        let n_matrices = self.rng.gen_range(1..=n.min(3));
        let mut matrices: Vec<Expr> = Vec::with_capacity(n_matrices + 2);
        for _ in 0..n_matrices {
            if self.limits.max_rank >= 2 && self.rng.gen_bool(0.45) {
                let levels = if self.limits.max_rank >= 3 && self.rng.gen_bool(0.15) {
                    2
                } else {
                    1
                };
                let (m, g) = self.nested_matrix(levels);
                let outer = Expr::eps("x", m.clone());
                matrices.push(m);
                // the inner body, read at the outer term or at a numeral
                let at = if self.rng.gen_bool(0.7) {
                    outer
                } else {
                    self.num()
                };
                if let Expr::Eps(_, body) = Expr::eps("y", g).instantiate(&at) {
                    matrices.push(*body);
                }
            } else {
                let d = self.rng.gen_range(2..=self.limits.max_depth.min(4));
                matrices.push(self.matrix(d, 1));
            }
        }
        let pool: Vec<Expr> = matrices.iter().map(|m| Expr::eps("x", m.clone())).collect();
        let mut axioms: Vec<CriticalFormula> = Vec::with_capacity(n);
        for i in 0..n.max(matrices.len()) {
            let matrix = match matrices.get(i) {
                Some(m) => m.clone(),
                None => matrices.choose(self.rng).expect("nonempty").clone(),
            };
            let witness = self.closed_term(&pool);
            axioms.push(CriticalFormula::new("x", matrix, witness));
        }
        axioms.shuffle(self.rng);
        axioms.truncate(self.limits.max_axioms);
        CriticalFormulaSet::new(axioms)
    }
}

fn depth(e: &Expr) -> u32 {
    1 + e.children().into_iter().map(depth).max().unwrap_or(0)
}

fn within_limits(cr: &CriticalFormulaSet, limits: &Limits) -> bool {
    cr.axioms().iter().all(|a| {
        depth(a.matrix()) <= limits.max_depth
            && depth(a.witness()) <= limits.max_depth
            && a.epsilon_term().rank() <= limits.max_rank
    })
}

/// Accepted candidates drawn per instance; the one with the longest run wins.
pub const CANDIDATES: u32 = 4;

/// Generates `count` instances; deterministic in `seed`.
///
/// Candidates that break the limits, are solved by the empty substitution,
/// or do not solve within `limits.max_steps` are resampled.
pub fn gen_corpus(seed: u64, count: usize, limits: Limits) -> Vec<Instance> {
    (0..count).map(|i| gen_instance(seed, i, limits)).collect()
}

pub fn gen_instance(seed: u64, i: usize, limits: Limits) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    let cascade = limits.max_rank >= 2 && limits.max_axioms >= 4 && rng.gen_bool(0.2);
    let mut resamples = 0;
    let mut best: Option<Instance> = None;
    let mut accepted = 0;
    while accepted < CANDIDATES {
        let cr = Gen {
            rng: &mut rng,
            limits,
        }
        .instance(cascade);
        let ok = within_limits(&cr, &limits)
            && matches!(
                first_solution_index(&cr, limits.max_steps, ValueRule::Paper),
                Ok(h) if h > 0
            );
        if !ok {
            resamples += 1;
            continue;
        }
        accepted += 1;
        let trace = run_hprocess(&cr, limits.max_steps);
        let cand = Instance {
            name: format!("inst-{i:03}"),
            solution_index: trace.solution_index().expect("accepted instances solve"),
            max_subst_rank: trace.steps.iter().map(|s| s.rn).max().unwrap_or(0),
            cr,
            resamples: 0,
        };
        let better = best.as_ref().is_none_or(|b| {
            (cand.solution_index, cand.max_subst_rank) > (b.solution_index, b.max_subst_rank)
        });
        if better {
            best = Some(cand);
        }
    }
    let mut inst = best.expect("at least one candidate");
    inst.resamples = resamples;
    inst
}
