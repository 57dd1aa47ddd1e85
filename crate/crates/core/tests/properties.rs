//! Property-based invariants for the permutation and graph kernels.

use proptest::prelude::*;

use hamsym_core::graph::{from_graph6, to_graph6, SimpleGraph};
use hamsym_core::perm::{Perm, PermGroup};

fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            images.swap(i, j);
        }
        Perm::from_images(images).unwrap()
    })
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::ANY, n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in (a + 1)..n {
                    if bits[k] {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            SimpleGraph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn inverse_cancels(a in arb_perm(9)) {
        prop_assert_eq!(a.then(&a.inverse()), Perm::identity(9));
        prop_assert_eq!(a.inverse().then(&a), Perm::identity(9));
    }

    #[test]
    fn product_inverse_reverses(a in arb_perm(9), b in arb_perm(9)) {
        prop_assert_eq!(a.then(&b).inverse(), b.inverse().then(&a.inverse()));
    }

    #[test]
    fn composition_is_left_to_right(a in arb_perm(9), b in arb_perm(9), x in 0usize..9) {
        prop_assert_eq!(a.then(&b).apply(x), b.apply(a.apply(x)));
    }

    #[test]
    fn conjugation_preserves_order(a in arb_perm(9), g in arb_perm(9)) {
        prop_assert_eq!(a.conjugate(&g).order(), a.order());
    }

    #[test]
    fn pow_matches_repeated_composition(a in arb_perm(8), k in 0i64..12) {
        let mut acc = Perm::identity(8);
        for _ in 0..k {
            acc = acc.then(&a);
        }
        prop_assert_eq!(a.pow(k), acc);
    }

    #[test]
    fn cycle_decomposition_round_trips(a in arb_perm(10)) {
        let cycles = a.cycles();
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        prop_assert_eq!(Perm::from_cycles(10, &refs).unwrap(), a);
    }

    #[test]
    fn graph6_round_trips(g in arb_graph(40)) {
        let text = to_graph6(&g);
        let back = from_graph6(&text).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn generator_words_are_members(
        a in arb_perm(7),
        b in arb_perm(7),
        word in proptest::collection::vec(0usize..2, 1..12),
    ) {
        let group = PermGroup::from_generators(7, vec![a.clone(), b.clone()]).unwrap();
        let mut w = Perm::identity(7);
        for &i in &word {
            w = w.then(if i == 0 { &a } else { &b });
        }
        prop_assert!(group.contains(&w));
    }

    #[test]
    fn group_order_divides_symmetric_order(a in arb_perm(7), b in arb_perm(7)) {
        let group = PermGroup::from_generators(7, vec![a, b]).unwrap();
        prop_assert_eq!(5040 % group.order(), 0);
    }

    #[test]
    fn relabeling_preserves_degree_sequence(g in arb_graph(12), p in arb_perm(12)) {
        if g.n() != 12 {
            return Ok(());
        }
        let images: Vec<usize> = (0..12).map(|v| p.apply(v)).collect();
        let h = g.relabeled(&images);
        let mut d1: Vec<usize> = (0..12).map(|v| g.degree(v)).collect();
        let mut d2: Vec<usize> = (0..12).map(|v| h.degree(v)).collect();
        d1.sort_unstable();
        d2.sort_unstable();
        prop_assert_eq!(d1, d2);
        prop_assert_eq!(g.edge_count(), h.edge_count());
    }
}
