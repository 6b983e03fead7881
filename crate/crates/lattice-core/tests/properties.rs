//! Property tests for the algebraic identities of the lattice transforms.

use lattice_core::{
    mobius_transform, order_strength, select_salient, zeta_transform, InteractionVector,
    MaskedOutputTable,
};
use proptest::collection::vec;
use proptest::prelude::*;

const VALUE_RANGE: std::ops::Range<f64> = -100.0..100.0;

fn table_strategy(max_n: u8) -> impl Strategy<Value = MaskedOutputTable> {
    (1..=max_n).prop_flat_map(|n| {
        vec(VALUE_RANGE, 1usize << n)
            .prop_map(move |values| MaskedOutputTable::new(n, values).unwrap())
    })
}

fn vector_strategy(max_n: u8) -> impl Strategy<Value = InteractionVector> {
    (1..=max_n).prop_flat_map(|n| {
        vec(VALUE_RANGE, 1usize << n)
            .prop_map(move |values| InteractionVector::new(n, values).unwrap())
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-3)
}

proptest! {
    #[test]
    fn round_trip_identity(t in table_strategy(8)) {
        let back = zeta_transform(&mobius_transform(&t).unwrap()).unwrap();
        for (x, y) in t.values().iter().zip(back.values()) {
            prop_assert!(close(*x, *y), "{x} vs {y}");
        }
    }

    #[test]
    fn transform_is_linear(
        n in 1..=6u8,
        a in -5.0..5.0f64,
        b in -5.0..5.0f64,
        seed_values in vec(VALUE_RANGE, 2 * 64),
    ) {
        let len = 1usize << n;
        let t1 = MaskedOutputTable::new(n, seed_values[..len].to_vec()).unwrap();
        let t2 = MaskedOutputTable::new(n, seed_values[64..64 + len].to_vec()).unwrap();
        let combined = MaskedOutputTable::new(
            n,
            t1.values()
                .iter()
                .zip(t2.values())
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
        .unwrap();

        let lhs = mobius_transform(&combined).unwrap();
        let iv1 = mobius_transform(&t1).unwrap();
        let iv2 = mobius_transform(&t2).unwrap();
        for ((l, d1), d2) in lhs.dividends().iter().zip(iv1.dividends()).zip(iv2.dividends()) {
            prop_assert!(close(*l, a * d1 + b * d2));
        }
    }

    #[test]
    fn additive_games_have_zero_higher_orders(
        n in 2..=8u8,
        weights in vec(-10.0..10.0f64, 8),
        offset in -10.0..10.0f64,
    ) {
        // v(T) = offset + sum of w_j over j in T
        let len = 1usize << n;
        let values: Vec<f64> = (0..len)
            .map(|m| {
                offset
                    + (0..n as usize)
                        .filter(|j| m & (1 << j) != 0)
                        .map(|j| weights[j])
                        .sum::<f64>()
            })
            .collect();
        let iv = mobius_transform(&MaskedOutputTable::new(n, values).unwrap()).unwrap();
        for (m, d) in iv.dividends().iter().enumerate() {
            if (m as u32).count_ones() >= 2 {
                prop_assert!(d.abs() <= 1e-9, "I({m:b}) = {d}");
            }
        }
        prop_assert!(close(iv.dividends()[0], offset));
    }

    #[test]
    fn salient_sets_shrink_as_tau_grows(
        iv in vector_strategy(8),
        r1 in 0.01..0.98f64,
        delta in 0.001..0.5f64,
    ) {
        let r2 = (r1 + delta).min(0.999);
        let loose = select_salient(&iv, r1).unwrap();
        let tight = select_salient(&iv, r2).unwrap();
        prop_assert!(tight.len() <= loose.len());
        for m in tight.members() {
            prop_assert!(loose.contains(*m));
        }
    }

    #[test]
    fn order_strength_is_permutation_invariant_and_nonnegative(
        ivs in (2..=5u8).prop_flat_map(|n| {
            vec(vec(VALUE_RANGE, 1usize << n), 1..4).prop_map(move |vs| {
                vs.into_iter()
                    .map(|v| InteractionVector::new(n, v).unwrap())
                    .collect::<Vec<_>>()
            })
        })
    ) {
        let forward = order_strength(&ivs).unwrap();
        let mut reversed = ivs.clone();
        reversed.reverse();
        let backward = order_strength(&reversed).unwrap();
        for (a, b) in forward.per_order().iter().zip(backward.per_order()) {
            prop_assert!(a >= &0.0);
            prop_assert!(close(*a, *b));
        }
    }
}
