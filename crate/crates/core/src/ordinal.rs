//! Ordinal notations below epsilon-zero in Cantor normal form, and the
//! base-(ω+1) index of a substitution.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::eval::{evaluate, Substitution};
use crate::syntax::CriticalFormulaSet;

/// Largest finite exponent `n` accepted by [`Ordinal::two_pow`].
pub const TWO_POW_FINITE_CAP: u64 = 1 << 16;

/// Default cap on the height of [`Ordinal::tower`].
pub const DEFAULT_TOWER_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("2^{0} exceeds the finite exponent cap")]
    TwoPowOverflow(String),
    #[error("tower of height {height} exceeds the cap {cap}")]
    TowerOverflow { height: u32, cap: u32 },
}

/// `ω^exp · coeff` with `coeff ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: BigUint,
}

/// An ordinal below ε₀: a sum of terms with strictly decreasing exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_nat(1)
    }

    pub fn omega() -> Self {
        Self::omega_pow(&Self::one())
    }

    pub fn from_nat(n: u64) -> Self {
        Self::from_big(BigUint::from(n))
    }

    pub fn from_big(n: BigUint) -> Self {
        if n.is_zero() {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exp: Self::zero(),
                    coeff: n,
                }],
            }
        }
    }

    /// Builds from raw terms; `None` unless they are in normal form.
    pub fn from_terms(terms: Vec<Term>) -> Option<Self> {
        let o = Ordinal { terms };
        o.is_normal().then_some(o)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exp.is_zero())
    }

    pub fn to_nat(&self) -> Option<u64> {
        if self.is_finite() {
            self.finite_part().to_u64()
        } else {
            None
        }
    }

    /// The coefficient of `ω^0`.
    pub fn finite_part(&self) -> BigUint {
        match self.terms.last() {
            Some(t) if t.exp.is_zero() => t.coeff.clone(),
            _ => BigUint::zero(),
        }
    }

    pub fn is_normal(&self) -> bool {
        self.terms
            .iter()
            .all(|t| !t.coeff.is_zero() && t.exp.is_normal())
            && self.terms.windows(2).all(|w| w[0].exp > w[1].exp)
    }

    /// `ω^a`
    pub fn omega_pow(a: &Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exp: a.clone(),
                coeff: BigUint::one(),
            }],
        }
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(head) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut rest = other.terms.iter();
        for t in &self.terms {
            match t.exp.cmp(&head.exp) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    terms.push(Term {
                        exp: t.exp.clone(),
                        coeff: &t.coeff + &head.coeff,
                    });
                    rest.next();
                    break;
                }
                Ordering::Less => break,
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// `self · n` for a natural `n`.
    pub fn mul_nat(&self, n: u64) -> Ordinal {
        if n == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coeff *= BigUint::from(n);
        Ordinal { terms }
    }

    /// `2^self`, using `2^(ω·β + n) = ω^β · 2^n`.
    pub fn two_pow(&self) -> Result<Ordinal, OrdinalError> {
        let n = self.finite_part();
        let n = match n.to_u64() {
            Some(n) if n <= TWO_POW_FINITE_CAP => n,
            _ => return Err(OrdinalError::TwoPowOverflow(self.to_string())),
        };
        // β with ω·β = self - n: each exponent γ ≥ 1 becomes -1 + γ
        let beta_terms: Vec<Term> = self
            .terms
            .iter()
            .filter(|t| !t.exp.is_zero())
            .map(|t| Term {
                exp: t.exp.pred_if_finite(),
                coeff: t.coeff.clone(),
            })
            .collect();
        let beta = Ordinal { terms: beta_terms };
        let coeff = BigUint::one() << n;
        Ok(Ordinal {
            terms: vec![Term { exp: beta, coeff }],
        })
    }

    /// `-1 + self`: the predecessor for finite nonzero ordinals, unchanged
    /// for infinite ones.
    fn pred_if_finite(&self) -> Ordinal {
        if self.is_finite() {
            let n = self.finite_part();
            if n.is_zero() {
                Ordinal::zero()
            } else {
                Ordinal::from_big(n - 1u32)
            }
        } else {
            self.clone()
        }
    }

    /// `(ω+1)^i = ω^i + ω^(i-1) + … + ω + 1`.
    pub fn omega_plus_one_pow(i: u32) -> Ordinal {
        Ordinal {
            terms: (0..=i)
                .rev()
                .map(|j| Term {
                    exp: Ordinal::from_nat(j as u64),
                    coeff: BigUint::one(),
                })
                .collect(),
        }
    }

    /// `ω_k`: `ω_0 = 1`, `ω_{k+1} = ω^{ω_k}`.
    pub fn tower(k: u32) -> Result<Ordinal, OrdinalError> {
        Self::tower_capped(k, DEFAULT_TOWER_CAP)
    }

    pub fn tower_capped(k: u32, cap: u32) -> Result<Ordinal, OrdinalError> {
        if k > cap {
            return Err(OrdinalError::TowerOverflow { height: k, cap });
        }
        Ok((0..k).fold(Ordinal::one(), |acc, _| Ordinal::omega_pow(&acc)))
    }

    /// `ω_h(self)`: `h`-fold iterated base-ω exponentiation.
    pub fn omega_tower(&self, h: u32) -> Ordinal {
        (0..h).fold(self.clone(), |acc, _| Ordinal::omega_pow(&acc))
    }

    /// `2_h(self)`: `h`-fold iterated base-2 exponentiation.
    pub fn two_tower(&self, h: u32) -> Result<Ordinal, OrdinalError> {
        (0..h).try_fold(self.clone(), |acc, _| acc.two_pow())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = a.exp.cmp(&b.exp).then_with(|| a.coeff.cmp(&b.coeff));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    /// `w^(a)*c + …`, with `w` for ω, `w` alone for `ω^1` and bare numerals
    /// for the finite part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
                continue;
            }
            if t.exp == Ordinal::one() {
                f.write_str("w")?;
            } else {
                write!(f, "w^({})", t.exp)?;
            }
            if !t.coeff.is_one() {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

/// `‖v‖_A`, the order type of `v` under the Ackermann ordering.
pub fn ack_norm(v: u64) -> Ordinal {
    match v {
        0 => Ordinal::omega(),
        v => Ordinal::from_nat(v - 1),
    }
}

/// One coordinate of an index: an element of ω+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Fin(u64),
    Omega,
}

impl Coord {
    /// Coordinate `‖v‖_A` of a value.
    pub fn of_value(v: u64) -> Coord {
        match v {
            0 => Coord::Omega,
            v => Coord::Fin(v - 1),
        }
    }

    pub fn ordinal(self) -> Ordinal {
        match self {
            Coord::Fin(n) => Ordinal::from_nat(n),
            Coord::Omega => Ordinal::omega(),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Fin(n) => write!(f, "{n}"),
            Coord::Omega => f.write_str("w"),
        }
    }
}

/// Mixed-radix index over ω+1: `coords[i] = φ(e_i)`; the last coordinate is
/// the most significant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexVector {
    coords: Vec<Coord>,
}

impl IndexVector {
    pub fn new(coords: Vec<Coord>) -> Self {
        IndexVector { coords }
    }

    /// The all-zero vector of length `n`, standing for the ordinal 0.
    pub fn zeros(n: usize) -> Self {
        IndexVector {
            coords: vec![Coord::Fin(0); n],
        }
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates from most to least significant.
    pub fn most_significant_first(&self) -> impl Iterator<Item = Coord> + '_ {
        self.coords.iter().rev().copied()
    }

    /// `Σ (ω+1)^i · φ_i`, summed from the most significant coordinate down.
    pub fn ordinal(&self) -> Ordinal {
        let mut acc = Ordinal::zero();
        for (i, c) in self.coords.iter().enumerate().rev() {
            let part = match *c {
                Coord::Fin(0) => continue,
                Coord::Omega => Ordinal::omega_pow(&Ordinal::from_nat(i as u64 + 1)),
                Coord::Fin(n) => Ordinal::omega_plus_one_pow(i as u32).mul_nat(n),
            };
            acc = acc.add(&part);
        }
        acc
    }
}

impl PartialOrd for IndexVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexVector {
    /// Lexicographic from the most significant coordinate; missing
    /// coordinates count as 0.
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.len().max(other.len());
        let at = |v: &IndexVector, i: usize| v.coords.get(i).copied().unwrap_or(Coord::Fin(0));
        (0..n)
            .rev()
            .map(|i| at(self, i).cmp(&at(other, i)))
            .find(|c| *c != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.most_significant_first().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `ind(S)` relative to the closed epsilon terms of `cr`.
pub fn index_of(s: &Substitution, cr: &CriticalFormulaSet) -> IndexVector {
    IndexVector::new(
        cr.closed_epsilon_terms()
            .iter()
            .map(|e| {
                let v = evaluate(e, s)
                    .and_then(|v| v.as_nat())
                    .expect("closed epsilon terms evaluate to numbers");
                Coord::of_value(v)
            })
            .collect(),
    )
}

impl CriticalFormulaSet {
    /// `(ω+1)^N`, a strict bound on every index.
    pub fn index_bound(&self) -> Ordinal {
        Ordinal::omega_plus_one_pow(self.n_closed() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn n(k: u64) -> Ordinal {
        Ordinal::from_nat(k)
    }

    fn wpow(e: Ordinal) -> Ordinal {
        Ordinal::omega_pow(&e)
    }

    #[test]
    fn comparisons() {
        assert_eq!(w().cmp(&w()), Ordering::Equal);
        assert!(w().mul_nat(5) < wpow(w()));
        let a = wpow(n(2)).mul_nat(2).add(&n(1));
        assert!(a > wpow(n(2)).mul_nat(2));
    }

    #[test]
    fn addition_absorbs_smaller_tail() {
        let lhs = w().mul_nat(2).add(&n(1));
        assert_eq!(lhs.add(&w()), w().mul_nat(3));
        assert_eq!(n(3).add(&w()), w());
        assert_eq!(w().add(&n(3)).to_string(), "w + 3");
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(w().two_pow().unwrap(), w());
        let a = w().mul_nat(2).add(&n(3));
        assert_eq!(a.two_pow().unwrap(), wpow(n(2)).mul_nat(8));
        assert_eq!(n(10).two_pow().unwrap(), n(1024));
        assert_eq!(Ordinal::zero().two_pow().unwrap(), n(1));
        // 2^(ω^ω) = ω^(ω^ω)
        let ww = wpow(w());
        assert_eq!(ww.two_pow().unwrap(), wpow(ww.clone()));
        assert!(n(TWO_POW_FINITE_CAP + 1).two_pow().is_err());
    }

    #[test]
    fn omega_plus_one_powers() {
        assert_eq!(Ordinal::omega_plus_one_pow(0), n(1));
        assert_eq!(
            Ordinal::omega_plus_one_pow(2),
            wpow(n(2)).add(&w()).add(&n(1))
        );
        assert_eq!(Ordinal::omega_plus_one_pow(2).to_string(), "w^(2) + w + 1");
    }

    #[test]
    fn towers() {
        assert_eq!(Ordinal::tower(0).unwrap(), n(1));
        assert_eq!(Ordinal::tower(1).unwrap(), w());
        assert_eq!(Ordinal::tower(2).unwrap(), wpow(w()));
        assert!(Ordinal::tower(DEFAULT_TOWER_CAP + 1).is_err());
        assert!(Ordinal::tower(3).unwrap() > Ordinal::tower(2).unwrap());
        assert_eq!(Ordinal::one().omega_tower(3), Ordinal::tower(3).unwrap());
        assert_eq!(n(5).omega_tower(0), n(5));
    }

    #[test]
    fn ackermann_norm() {
        assert_eq!(ack_norm(0), w());
        assert_eq!(ack_norm(1), Ordinal::zero());
        assert_eq!(ack_norm(7), n(6));
    }

    #[test]
    fn index_vectors() {
        // |e_1| = 3, |e_0| = 0
        let v = IndexVector::new(vec![Coord::Omega, Coord::Fin(2)]);
        assert_eq!(v.to_string(), "(2, w)");
        // (ω+1)·2 + ω = ω·2 + 1 + ω = ω·3
        assert_eq!(v.ordinal(), w().mul_nat(3));
        assert_eq!(IndexVector::new(vec![]).ordinal(), Ordinal::zero());
        let top = IndexVector::new(vec![Coord::Omega; 3]);
        let bound = Ordinal::omega_plus_one_pow(3);
        assert!(top.ordinal() < bound);
        assert!(v < IndexVector::new(vec![Coord::Fin(0), Coord::Fin(3)]));
    }

    #[test]
    fn normal_form_validation() {
        let bad = vec![
            Term {
                exp: n(1),
                coeff: BigUint::one(),
            },
            Term {
                exp: n(2),
                coeff: BigUint::one(),
            },
        ];
        assert!(Ordinal::from_terms(bad).is_none());
        let zero_coeff = vec![Term {
            exp: n(1),
            coeff: BigUint::zero(),
        }];
        assert!(Ordinal::from_terms(zero_coeff).is_none());
    }
}
