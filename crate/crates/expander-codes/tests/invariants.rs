//! Randomized structural invariants: linear-algebra identities over every
//! supported field class, weight-spectrum preservation under column maps,
//! convexity of the generating-function logarithm, and text round-trips.

use expander_codes::{
    eval_log_g0, exact_weight_enumerator, g0_estimate_rs, make_field_from_order, plotkin_term,
    rs_parity_check, ColumnMap, ConstituentCode, MatrixGF, Rational,
};
use proptest::prelude::*;

fn field_orders() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25])
}

fn build_matrix(q: u64, rows: usize, cols: usize, raw: &[u32]) -> MatrixGF {
    let field = make_field_from_order(q).unwrap();
    let entries: Vec<Vec<u32>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| raw[(i * cols + j) % raw.len()] % field.q)
                .collect()
        })
        .collect();
    MatrixGF::from_rows(field, entries).unwrap()
}

fn build_map(q: u64, n: usize, raw: &[u32]) -> ColumnMap {
    let field = make_field_from_order(q).unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = raw[i % raw.len()] as usize % (i + 1);
        perm.swap(i, j);
    }
    let scalars: Vec<u32> = (0..n)
        .map(|i| 1 + raw[(i + 7) % raw.len()] % (field.q - 1))
        .collect();
    ColumnMap::new(perm, scalars).unwrap()
}

proptest! {
    #[test]
    fn rank_nullity_and_annihilation(
        q in field_orders(),
        rows in 1usize..=5,
        cols in 1usize..=8,
        raw in prop::collection::vec(0u32..1_000_000, 64),
    ) {
        let m = build_matrix(q, rows, cols, &raw);
        let rank = m.rank();
        let ns = m.nullspace();
        prop_assert_eq!(rank + ns.rows, cols);
        for i in 0..ns.rows {
            let syndrome = m.mul_vec(ns.row(i)).unwrap();
            prop_assert!(syndrome.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn column_maps_preserve_rank(
        q in field_orders(),
        rows in 1usize..=5,
        cols in 1usize..=8,
        raw in prop::collection::vec(0u32..1_000_000, 64),
    ) {
        let m = build_matrix(q, rows, cols, &raw);
        let map = build_map(q, cols, &raw);
        let mapped = m.apply_column_map(&map).unwrap();
        prop_assert_eq!(m.rank(), mapped.rank());
        // Applying the inverse map undoes the first.
        let back = mapped.apply_column_map(&map.inverse(&m.field).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn column_maps_preserve_spectrum(
        q in prop::sample::select(vec![2u64, 3, 4, 5]),
        delta0 in 3usize..=5,
        raw in prop::collection::vec(0u32..1_000_000, 64),
    ) {
        let q = q.min(delta0 as u64 + 1).max(2);
        let delta0 = delta0.min(q as usize);
        let k0 = 1 + raw[0] as usize % (delta0 - 1);
        let field = make_field_from_order(q).unwrap();
        let code = rs_parity_check(&field, delta0, k0).unwrap();
        let map = build_map(q, delta0, &raw);
        let mapped = ConstituentCode::explicit(code.h0.apply_column_map(&map).unwrap()).unwrap();
        let a = exact_weight_enumerator(&code).unwrap();
        let b = exact_weight_enumerator(&mapped).unwrap();
        prop_assert_eq!(a.counts().unwrap(), b.counts().unwrap());
    }

    #[test]
    fn field_laws(
        q in field_orders(),
        raw in prop::collection::vec(0u32..1_000_000, 3),
    ) {
        let field = make_field_from_order(q).unwrap();
        let (a, b, c) = (raw[0] % field.q, raw[1] % field.q, raw[2] % field.q);
        prop_assert_eq!(field.add(field.add(a, b), c), field.add(a, field.add(b, c)));
        prop_assert_eq!(field.mul(field.mul(a, b), c), field.mul(a, field.mul(b, c)));
        prop_assert_eq!(field.add(a, b), field.add(b, a));
        prop_assert_eq!(field.mul(a, b), field.mul(b, a));
        prop_assert_eq!(
            field.mul(a, field.add(b, c)),
            field.add(field.mul(a, b), field.mul(a, c))
        );
        if a != 0 {
            let inv = field.inv(a).unwrap();
            prop_assert_eq!(field.mul(a, inv), 1);
        }
        prop_assert_eq!(field.sub(a, a), 0);
        prop_assert_eq!(field.add(a, field.neg(a)), 0);
    }

    #[test]
    fn generating_function_log_is_convex(
        delta0 in prop::sample::select(vec![8usize, 16, 32, 64]),
        t1 in -1.0f64..3.0,
        t2 in -1.0f64..3.0,
    ) {
        let g = g0_estimate_rs(64, delta0, Rational::new(1, 2)).unwrap();
        let mid = eval_log_g0(&g, 0.5 * (t1 + t2)).unwrap();
        let chord = 0.5 * (eval_log_g0(&g, t1).unwrap() + eval_log_g0(&g, t2).unwrap());
        prop_assert!(mid <= chord + 1e-8, "midpoint {mid} above chord {chord}");
    }

    #[test]
    fn distance_cap_decreases_in_dimension(
        q in field_orders(),
        k in 1u64..=10,
        n_prime in 1.0f64..100.0,
    ) {
        let lo = plotkin_term(k + 1, q, n_prime).unwrap();
        let hi = plotkin_term(k, q, n_prime).unwrap();
        prop_assert!(lo < hi, "cap must strictly shrink: {lo} !< {hi}");
        prop_assert!(lo > n_prime * (q - 1) as f64 / q as f64 - 1e-9);
    }

    #[test]
    fn matrix_text_round_trip(
        q in field_orders(),
        rows in 1usize..=5,
        cols in 1usize..=8,
        raw in prop::collection::vec(0u32..1_000_000, 64),
    ) {
        let m = build_matrix(q, rows, cols, &raw);
        let parsed = MatrixGF::from_text(&m.to_text()).unwrap();
        prop_assert_eq!(parsed, m);
    }

    #[test]
    fn map_word_round_trip(
        q in field_orders(),
        n in 1usize..=10,
        raw in prop::collection::vec(0u32..1_000_000, 64),
    ) {
        let field = make_field_from_order(q).unwrap();
        let map = build_map(q, n, &raw);
        let word: Vec<u32> = (0..n).map(|i| raw[(i + 13) % raw.len()] % field.q).collect();
        let pushed = map.push_forward(&field, &word).unwrap();
        let back = map.inverse(&field).unwrap().push_forward(&field, &pushed).unwrap();
        prop_assert_eq!(back, word);
    }
}
