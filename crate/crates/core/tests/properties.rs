//! Property tests over randomly generated surfaces and group elements.

use proptest::prelude::*;
use tessella::geom::saddle_connections_up_to;
use tessella::matrix::{matrix_to_word, sl2_to_word, Letter, Sl2, Word};
use tessella::origami::{Marking, Origami};
use tessella::Perm;

/// Random transitive origami on up to six squares.
fn arb_origami() -> impl Strategy<Value = Origami> {
    (2usize..=6)
        .prop_flat_map(|n| {
            let perm = proptest::collection::vec(0..n, n).prop_filter_map(
                "must be a permutation",
                move |v| {
                    let p = Perm(v);
                    if p.is_valid() {
                        Some(p)
                    } else {
                        None
                    }
                },
            );
            (Just(n), perm.clone(), perm)
        })
        .prop_filter_map("must be connected", |(n, h, v)| {
            Origami::build(n, h, v, &Marking::Singular).ok()
        })
}

fn arb_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(
        prop_oneof![Just(Letter::S), Just(Letter::T), Just(Letter::TInv)],
        0..10,
    )
    .prop_map(Word)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_is_idempotent_and_relabeling_invariant(o in arb_origami(), seed in 0u64..1000) {
        let (c1, _) = o.canonical_form();
        let (c2, _) = c1.canonical_form();
        prop_assert_eq!(c1.canonical_key(), c2.canonical_key());

        // Relabel by a pseudo-random permutation derived from the seed.
        let n = o.num_squares();
        let mut img: Vec<usize> = (0..n).collect();
        let mut s = seed | 1;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            img.swap(i, (s >> 33) as usize % (i + 1));
        }
        let relabel = Perm(img);
        let inv = relabel.inverse();
        let h2 = Perm((0..n).map(|j| relabel.apply(o.h().apply(inv.apply(j)))).collect());
        let v2 = Perm((0..n).map(|j| relabel.apply(o.v().apply(inv.apply(j)))).collect());
        let p = Origami::build(n, h2, v2, &Marking::Singular).unwrap();
        prop_assert!(o.is_isomorphic(&p));
    }

    #[test]
    fn word_products_round_trip(w in arb_word()) {
        let m = w.sl2();
        prop_assert_eq!(sl2_to_word(m).sl2(), m);
        let g = w.group_element();
        prop_assert_eq!(matrix_to_word(&g).group_element(), g);
        prop_assert_eq!(w.inverse().sl2(), m.inverse());
    }

    #[test]
    fn surface_action_is_a_left_action(o in arb_origami(), w1 in arb_word(), w2 in arb_word()) {
        let m1 = w1.sl2();
        let m2 = w2.sl2();
        let lhs = o.apply_matrix(&m1).apply_matrix(&m2);
        let rhs = o.apply_matrix(&m2.mul(&m1));
        prop_assert!(lhs.is_isomorphic(&rhs));
        let back = o.apply_matrix(&m1).apply_matrix(&m1.inverse());
        prop_assert!(back.is_isomorphic(&o));
    }

    #[test]
    fn connection_sets_grow_with_the_bound(o in arb_origami(), l2 in 1i64..12) {
        let small = saddle_connections_up_to(&o, l2);
        let large = saddle_connections_up_to(&o, l2 + 7);
        let keys = |v: &[tessella::geom::SaddleConnection]| {
            v.iter().map(|s| s.fwd.key()).collect::<std::collections::BTreeSet<_>>()
        };
        prop_assert!(keys(&small).is_subset(&keys(&large)));
        // Reversal stays within the set and is an involution.
        for sc in &small {
            let r = sc.fwd.reversed(&o);
            prop_assert_eq!(r.reversed(&o), sc.fwd.clone());
        }
    }
}
