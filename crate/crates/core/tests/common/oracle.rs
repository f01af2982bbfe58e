//! A deliberately naive ordinal arithmetic, sharing nothing with the library
//! beyond the conversion at the boundary. Products are computed by
//! distributing over the right factor, powers by repeated multiplication.

use std::cmp::Ordering;

use epsilon_forge::ordinal::Ordinal;
use num_traits::ToPrimitive;

/// `Σ ω^{e_i} · c_i` with strictly decreasing exponents and positive `c_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Naive(pub Vec<(Naive, u64)>);

impl Naive {
    pub fn zero() -> Naive {
        Naive(vec![])
    }

    pub fn nat(n: u64) -> Naive {
        if n == 0 {
            Naive::zero()
        } else {
            Naive(vec![(Naive::zero(), n)])
        }
    }

    pub fn omega() -> Naive {
        Naive::w(Naive::nat(1))
    }

    /// `ω^e`
    pub fn w(e: Naive) -> Naive {
        Naive(vec![(e, 1)])
    }

    pub fn cmp(&self, other: &Naive) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    pub fn add(&self, other: &Naive) -> Naive {
        let Some((lead, c)) = other.0.first() else {
            return self.clone();
        };
        let mut out: Vec<(Naive, u64)> = self
            .0
            .iter()
            .filter(|(e, _)| e.cmp(lead) != Ordering::Less)
            .cloned()
            .collect();
        let mut rest = other.0.clone();
        if let Some(last) = out.last_mut() {
            if last.0 == *lead {
                last.1 += c;
                rest.remove(0);
            }
        }
        out.extend(rest);
        Naive(out)
    }

    pub fn mul(&self, other: &Naive) -> Naive {
        let Some((a0, c0)) = self.0.first() else {
            return Naive::zero();
        };
        let mut acc = Naive::zero();
        for (b, d) in &other.0 {
            let part = if b.0.is_empty() {
                // α · d
                let mut terms = self.0.clone();
                terms[0].1 = c0 * d;
                Naive(terms)
            } else {
                Naive(vec![(a0.add(b), *d)])
            };
            acc = acc.add(&part);
        }
        acc
    }

    pub fn pow_nat(&self, n: u32) -> Naive {
        (0..n).fold(Naive::nat(1), |acc, _| acc.mul(self))
    }

    /// `2^α`, from `2^{ω^k} = ω^{ω^{k-1}}` for finite `k ≥ 1`,
    /// `2^{ω^γ} = ω^{ω^γ}` for infinite `γ`, and `2^{α+β} = 2^α · 2^β`.
    pub fn two_pow(&self) -> Naive {
        let mut acc = Naive::nat(1);
        for (e, c) in &self.0 {
            let base = match e.as_nat() {
                Some(0) => Naive::nat(2),
                Some(k) => Naive::w(Naive::w(Naive::nat(k - 1))),
                None => Naive::w(Naive::w(e.clone())),
            };
            for _ in 0..*c {
                acc = acc.mul(&base);
            }
        }
        acc
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.0.as_slice() {
            [] => Some(0),
            [(e, c)] if e.0.is_empty() => Some(*c),
            _ => None,
        }
    }
}

impl From<&Ordinal> for Naive {
    fn from(o: &Ordinal) -> Self {
        Naive(
            o.terms()
                .iter()
                .map(|t| {
                    (
                        Naive::from(&t.exp),
                        t.coeff.to_u64().expect("small coefficient"),
                    )
                })
                .collect(),
        )
    }
}

pub fn naive(o: &Ordinal) -> Naive {
    Naive::from(o)
}
