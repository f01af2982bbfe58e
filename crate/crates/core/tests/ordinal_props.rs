mod common;

use std::cmp::Ordering;

use common::gen::ord;
use common::oracle::{naive, Naive};
use epsilon_forge::ordinal::{Coord, IndexVector, Ordinal};
use proptest::prelude::*;

fn nat(k: u64) -> Ordinal {
    Ordinal::from_nat(k)
}

fn w() -> Ordinal {
    Ordinal::omega()
}

fn wpow(e: &Ordinal) -> Ordinal {
    Ordinal::omega_pow(e)
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(10_000)
}

#[test]
fn worked_values() {
    let w1 = w().add(&nat(1));
    let sq = naive(&w1).mul(&naive(&w1));
    let expected = wpow(&nat(2)).add(&w()).add(&nat(1));
    assert_eq!(sq, naive(&expected));
    assert_eq!(naive(&Ordinal::omega_plus_one_pow(2)), sq);

    let e = w().mul_nat(2).add(&nat(3));
    assert_eq!(e.two_pow().unwrap(), wpow(&nat(2)).mul_nat(8));
    assert_eq!(naive(&e).two_pow(), naive(&wpow(&nat(2)).mul_nat(8)));

    assert_eq!(w().mul_nat(2).add(&nat(1)).add(&w()), w().mul_nat(3));
    assert_eq!(w().two_pow().unwrap(), w());
    assert_eq!(wpow(&w()).two_pow().unwrap(), wpow(&wpow(&w())));
    assert_eq!(wpow(&nat(2)).two_pow().unwrap(), wpow(&w()));

    assert!(w() > nat(1_000_000));
    assert!(wpow(&nat(2)) > w().mul_nat(1_000_000));
    assert_eq!(w().to_string(), "w");
}

#[test]
fn two_pow_of_naturals() {
    for n in 0..64u64 {
        assert_eq!(nat(n).two_pow().unwrap(), nat(1 << n));
    }
    assert!(nat(1 << 20).two_pow().is_err());
}

#[test]
fn towers() {
    assert_eq!(Ordinal::tower(0).unwrap(), nat(1));
    assert_eq!(Ordinal::tower(1).unwrap(), w());
    assert_eq!(Ordinal::tower(2).unwrap(), wpow(&w()));
    assert!(Ordinal::tower_capped(5, 4).is_err());
    assert_eq!(nat(1).omega_tower(2), Ordinal::tower(2).unwrap());
    assert_eq!(nat(1).two_tower(2).unwrap(), nat(4));
}

#[test]
fn index_vector_worked_value() {
    // msf (2, w): (ω+1)·2 + ω
    let v = IndexVector::new(vec![Coord::Omega, Coord::Fin(2)]);
    let w1 = Naive::omega().add(&Naive::nat(1));
    let expected = w1.mul(&Naive::nat(2)).add(&Naive::omega());
    assert_eq!(naive(&v.ordinal()), expected);
    assert_eq!(v.to_string(), "(2, w)");
}

fn coord() -> impl Strategy<Value = Coord> {
    prop_oneof![(0u64..4).prop_map(Coord::Fin), Just(Coord::Omega)]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn normal_form(a in ord(), b in ord()) {
        prop_assert!(a.is_normal());
        prop_assert!(a.add(&b).is_normal());
    }

    #[test]
    fn trichotomy_matches_oracle(a in ord(), b in ord()) {
        let lt = a < b;
        let eq = a == b;
        let gt = a > b;
        prop_assert_eq!(lt as u8 + eq as u8 + gt as u8, 1);
        prop_assert_eq!(a.cmp(&b), naive(&a).cmp(&naive(&b)));
        prop_assert_eq!(eq, naive(&a) == naive(&b));
    }

    #[test]
    fn transitivity(a in ord(), b in ord(), c in ord()) {
        let mut v = [a, b, c];
        v.sort();
        prop_assert!(v[0] <= v[1] && v[1] <= v[2] && v[0] <= v[2]);
        prop_assert!(naive(&v[0]).cmp(&naive(&v[2])) != Ordering::Greater);
    }

    #[test]
    fn addition_matches_oracle(a in ord(), b in ord()) {
        let s = a.add(&b);
        prop_assert_eq!(naive(&s), naive(&a).add(&naive(&b)));
        prop_assert!(s >= a);
        prop_assert!(s >= b);
    }

    #[test]
    fn addition_associative(a in ord(), b in ord(), c in ord()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn addition_monotone_on_right(a in ord(), b in ord(), c in ord()) {
        if b < c {
            prop_assert!(a.add(&b) < a.add(&c));
        }
    }

    #[test]
    fn omega_pow_monotone(a in ord(), b in ord()) {
        prop_assert_eq!(a.cmp(&b), wpow(&a).cmp(&wpow(&b)));
        prop_assert!(wpow(&a) >= a);
    }

    #[test]
    fn two_pow_matches_oracle(a in ord()) {
        let p = a.two_pow().unwrap();
        prop_assert_eq!(naive(&p), naive(&a).two_pow());
        prop_assert!(p > a || a == p);
    }

    #[test]
    fn two_pow_monotone(a in ord(), b in ord()) {
        let (pa, pb) = (a.two_pow().unwrap(), b.two_pow().unwrap());
        prop_assert_eq!(a.cmp(&b), pa.cmp(&pb));
    }

    #[test]
    fn mul_nat_matches_oracle(a in ord(), k in 0u64..5) {
        prop_assert_eq!(naive(&a.mul_nat(k)), naive(&a).mul(&Naive::nat(k)));
    }

    #[test]
    fn omega_plus_one_powers(i in 0u32..7) {
        let w1 = Naive::omega().add(&Naive::nat(1));
        prop_assert_eq!(naive(&Ordinal::omega_plus_one_pow(i)), w1.pow_nat(i));
    }

    #[test]
    fn index_order_is_ordinal_order(
        a in prop::collection::vec(coord(), 0..5),
        b in prop::collection::vec(coord(), 0..5),
    ) {
        let (va, vb) = (IndexVector::new(a), IndexVector::new(b));
        prop_assert_eq!(va.cmp(&vb), va.ordinal().cmp(&vb.ordinal()));
        let n = va.len().max(1) as u32;
        prop_assert!(va.ordinal() < Ordinal::omega_plus_one_pow(n));
        // the ordinal agrees with the oracle's Σ (ω+1)^i · φ_i
        let w1 = Naive::omega().add(&Naive::nat(1));
        let mut acc = Naive::zero();
        for (i, c) in va.coords().iter().enumerate().rev() {
            let phi = match c {
                Coord::Fin(k) => Naive::nat(*k),
                Coord::Omega => Naive::omega(),
            };
            acc = acc.add(&w1.pow_nat(i as u32).mul(&phi));
        }
        prop_assert_eq!(naive(&va.ordinal()), acc);
    }
}
