//! Ordinals below epsilon_0 in Cantor normal form, and the index of a
//! substitution as a vector over omega+1.

use epsilon_forge::eval::Substitution;
use epsilon_forge::ordinal::{index_of, Ordinal};
use epsilon_forge::syntax::{parse_critical_set, parse_expr};

fn main() {
    let w = Ordinal::omega();
    let n = Ordinal::from_nat;
    let w2 = Ordinal::omega_pow(&n(2));

    println!("(w+1)^2 = {}", Ordinal::omega_plus_one_pow(2));
    println!("w*2 + 1 + w = {}", w.mul_nat(2).add(&n(1)).add(&w));
    println!("1 + w = {}", n(1).add(&w));
    let e = w.mul_nat(2).add(&n(3));
    println!("2^({e}) = {}", e.two_pow().unwrap());
    assert_eq!(e.two_pow().unwrap(), w2.mul_nat(8));
    for k in 0..4 {
        println!("w_{k} = {}", Ordinal::tower(k).unwrap());
    }
    assert!(w.mul_nat(5) < Ordinal::omega_pow(&w));

    let cr = parse_critical_set("(crit x (= x (eps y (= y 3))) 1)").unwrap();
    let empty = index_of(&Substitution::new(), &cr);
    let mut s = Substitution::new();
    s.insert(parse_expr("(eps y (= y 3))").unwrap(), 3).unwrap();
    let later = index_of(&s, &cr);
    println!("ind(empty) = {empty} = {}", empty.ordinal());
    println!("ind(S)     = {later} = {}", later.ordinal());
    println!("IND        = {}", cr.index_bound());
    assert!(later < empty && empty.ordinal() < cr.index_bound());
}
