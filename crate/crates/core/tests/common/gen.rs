use epsilon_forge::ordinal::Ordinal;
use proptest::prelude::*;

/// Ordinals with exponent nesting up to `depth`, built as sums of
/// `ω^e · c` pieces in arbitrary order.
pub fn ordinal(depth: u32) -> BoxedStrategy<Ordinal> {
    let leaf = (0u64..6).prop_map(Ordinal::from_nat).boxed();
    if depth == 0 {
        return leaf;
    }
    let piece = (ordinal(depth - 1), 1u64..4).prop_map(|(e, c)| Ordinal::omega_pow(&e).mul_nat(c));
    prop_oneof![
        1 => leaf,
        4 => prop::collection::vec(piece, 0..4)
            .prop_map(|ps| ps.iter().fold(Ordinal::zero(), |acc, p| acc.add(p))),
    ]
    .boxed()
}

pub fn ord() -> BoxedStrategy<Ordinal> {
    ordinal(3)
}
