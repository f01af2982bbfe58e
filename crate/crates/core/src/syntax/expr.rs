use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Function symbols of the arithmetic language, all binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fun {
    Plus,
    Times,
    /// Cut-off subtraction.
    Monus,
}

impl Fun {
    pub fn apply(self, a: u64, b: u64) -> u64 {
        match self {
            Fun::Plus => a.saturating_add(b),
            Fun::Times => a.saturating_mul(b),
            Fun::Monus => a.saturating_sub(b),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Fun::Plus => "+",
            Fun::Times => "*",
            Fun::Monus => "monus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Eq,
    Lt,
}

impl Rel {
    pub fn apply(self, a: u64, b: u64) -> bool {
        match self {
            Rel::Eq => a == b,
            Rel::Lt => a < b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Lt => "<",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Conn {
    And,
    Or,
    Imp,
}

impl Conn {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Conn::And => a && b,
            Conn::Or => a || b,
            Conn::Imp => !a || b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Conn::And => "and",
            Conn::Or => "or",
            Conn::Imp => "imp",
        }
    }
}

/// Surface name of a binder. Kept only for printing: it never takes part in
/// equality, ordering or hashing, so alpha-equivalent expressions are equal.
#[derive(Clone, Debug, Default)]
pub struct Hint(pub String);

impl Hint {
    pub fn new(name: impl Into<String>) -> Self {
        Hint(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Terms and formulas of the epsilon calculus over arithmetic.
///
/// Bound variables are de Bruijn indices: `Bound(0)` refers to the nearest
/// enclosing `Eps`. Free variables keep their name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Num(u64),
    Bound(u32),
    Free(String),
    App(Fun, Box<Expr>, Box<Expr>),
    Atom(Rel, Box<Expr>, Box<Expr>),
    Bool(bool),
    Not(Box<Expr>),
    Conn(Conn, Box<Expr>, Box<Expr>),
    Eps(Hint, Box<Expr>),
}

impl Expr {
    pub fn app(f: Fun, a: Expr, b: Expr) -> Expr {
        Expr::App(f, Box::new(a), Box::new(b))
    }

    pub fn atom(r: Rel, a: Expr, b: Expr) -> Expr {
        Expr::Atom(r, Box::new(a), Box::new(b))
    }

    pub fn conn(c: Conn, a: Expr, b: Expr) -> Expr {
        Expr::Conn(c, Box::new(a), Box::new(b))
    }

    pub fn negate(a: Expr) -> Expr {
        Expr::Not(Box::new(a))
    }

    pub fn eps(hint: impl Into<String>, body: Expr) -> Expr {
        Expr::Eps(Hint::new(hint), Box::new(body))
    }

    pub fn is_term(&self) -> bool {
        matches!(
            self,
            Expr::Num(_) | Expr::Bound(_) | Expr::Free(_) | Expr::App(..) | Expr::Eps(..)
        )
    }

    pub fn is_formula(&self) -> bool {
        !self.is_term()
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Expr::Num(_) | Expr::Bool(_))
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self, Expr::Eps(..))
    }

    /// Checks the term/formula sorting of every node.
    pub fn well_sorted(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Bound(_) | Expr::Free(_) | Expr::Bool(_) => true,
            Expr::App(_, a, b) | Expr::Atom(_, a, b) => {
                a.is_term() && b.is_term() && a.well_sorted() && b.well_sorted()
            }
            Expr::Not(a) => a.is_formula() && a.well_sorted(),
            Expr::Conn(_, a, b) => {
                a.is_formula() && b.is_formula() && a.well_sorted() && b.well_sorted()
            }
            Expr::Eps(_, body) => body.is_formula() && body.well_sorted(),
        }
    }

    /// Immediate subexpressions, left to right.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Num(_) | Expr::Bound(_) | Expr::Free(_) | Expr::Bool(_) => vec![],
            Expr::App(_, a, b) | Expr::Atom(_, a, b) | Expr::Conn(_, a, b) => vec![a, b],
            Expr::Not(a) | Expr::Eps(_, a) => vec![a],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Expr::size).sum::<usize>()
    }

    /// One more than the largest loose de Bruijn index, 0 if there is none.
    pub fn loose_bound(&self) -> u32 {
        match self {
            Expr::Bound(i) => i + 1,
            Expr::Eps(_, body) => body.loose_bound().saturating_sub(1),
            _ => self
                .children()
                .into_iter()
                .map(Expr::loose_bound)
                .max()
                .unwrap_or(0),
        }
    }

    pub fn has_free_names(&self) -> bool {
        match self {
            Expr::Free(_) => true,
            _ => self.children().into_iter().any(Expr::has_free_names),
        }
    }

    pub fn free_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free_names(&mut out);
        out
    }

    fn collect_free_names(&self, out: &mut Vec<String>) {
        if let Expr::Free(name) = self {
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
        for c in self.children() {
            c.collect_free_names(out);
        }
    }

    /// No free names and no loose bound indices.
    pub fn is_closed(&self) -> bool {
        self.loose_bound() == 0 && !self.has_free_names()
    }

    /// Does the loose index `target` (counted from this node) occur?
    pub fn mentions_loose(&self, target: u32) -> bool {
        match self {
            Expr::Bound(i) => *i == target,
            Expr::Eps(_, body) => body.mentions_loose(target + 1),
            _ => self
                .children()
                .into_iter()
                .any(|c| c.mentions_loose(target)),
        }
    }

    /// Replaces loose index `depth` by the closed expression `value` and
    /// lowers the loose indices above it by one.
    fn subst_at(&self, depth: u32, value: &Expr) -> Expr {
        match self {
            Expr::Bound(i) if *i == depth => value.clone(),
            Expr::Bound(i) if *i > depth => Expr::Bound(i - 1),
            Expr::Num(_) | Expr::Bound(_) | Expr::Free(_) | Expr::Bool(_) => self.clone(),
            Expr::App(f, a, b) => Expr::app(*f, a.subst_at(depth, value), b.subst_at(depth, value)),
            Expr::Atom(r, a, b) => {
                Expr::atom(*r, a.subst_at(depth, value), b.subst_at(depth, value))
            }
            Expr::Conn(c, a, b) => {
                Expr::conn(*c, a.subst_at(depth, value), b.subst_at(depth, value))
            }
            Expr::Not(a) => Expr::negate(a.subst_at(depth, value)),
            Expr::Eps(h, body) => Expr::Eps(h.clone(), Box::new(body.subst_at(depth + 1, value))),
        }
    }

    /// `F[t]` for the body `F` of a binder: the loose index 0 becomes `t`.
    ///
    /// `t` must be closed; no shifting is performed on it.
    pub fn instantiate(&self, t: &Expr) -> Expr {
        debug_assert!(t.is_closed(), "instantiate expects a closed expression");
        self.subst_at(0, t)
    }

    /// Pre-order walk over every subexpression, with the number of binders
    /// between `self` and the visited node.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Expr, u32)) {
        self.walk_at(0, visit);
    }

    fn walk_at<'a>(&'a self, depth: u32, visit: &mut impl FnMut(&'a Expr, u32)) {
        visit(self, depth);
        let inner = if self.is_epsilon() { depth + 1 } else { depth };
        for c in self.children() {
            c.walk_at(inner, visit);
        }
    }

    /// Is `other` a proper subexpression of `self` (as closed text, i.e.
    /// compared structurally at any binder depth)?
    pub fn has_proper_subexpr(&self, other: &Expr) -> bool {
        self.children()
            .into_iter()
            .any(|c| c == other || c.has_proper_subexpr(other))
    }

    /// Nesting rank of bound variables.
    ///
    /// `rk(eps x.F) = 1 + max{rk(g) : g an eps-subterm of F with x free in g}`
    /// (0 when there is none); any other expression takes the maximum over its
    /// immediate subexpressions.
    pub fn rank(&self) -> u32 {
        match self {
            Expr::Eps(_, body) => {
                let mut inner = 0;
                body.walk(&mut |g, depth| {
                    if g.is_epsilon() && g.mentions_loose(depth) {
                        inner = inner.max(g.rank());
                    }
                });
                1 + inner
            }
            _ => self
                .children()
                .into_iter()
                .map(Expr::rank)
                .max()
                .unwrap_or(0),
        }
    }

    /// A closed epsilon term whose body has no closed subexpression other than
    /// numerals and boolean constants, i.e. a term that reduction leaves alone.
    pub fn is_canonical(&self) -> bool {
        match self {
            Expr::Eps(_, body) => self.is_closed() && closed_parts_are_values(body),
            _ => false,
        }
    }
}

fn closed_parts_are_values(e: &Expr) -> bool {
    if e.is_closed() {
        return e.is_value();
    }
    e.children().into_iter().all(closed_parts_are_values)
}
