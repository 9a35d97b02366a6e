use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::Index;

use grassmap::fixedgraphs::{canonical_form, enumerate_fixed_graphs, TreeEdge};
use grassmap::localization::tangent_weights;
use grassmap::qpoly::{qbinomial, QPolynomial};
use grassmap::weights::{edge_h0_weights, Ambient, Coords, Sign};
use grassmap::DecoratedTree;

fn poly() -> impl Strategy<Value = QPolynomial> {
    prop::collection::vec((0i64..12, -20i64..20), 0..8).prop_map(QPolynomial::from_terms)
}

fn nonzero_poly() -> impl Strategy<Value = QPolynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

/// `(k, n, d)` with a fixed tree chosen by `idx`.
fn tree() -> impl Strategy<Value = DecoratedTree> {
    (2usize..=5, 1usize..=3, any::<Index>(), any::<Index>()).prop_map(|(n, d, ki, ti)| {
        let k = 1 + ki.index(n - 1);
        let trees = enumerate_fixed_graphs(k, n, d).unwrap();
        trees[ti.index(trees.len())].clone()
    })
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn exact_division_inverts_multiplication(a in poly(), b in nonzero_poly()) {
        let product = &a * &b;
        prop_assert_eq!(product.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn addition_and_subtraction_cancel(a in poly(), b in poly()) {
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn reverse_is_an_involution(a in poly(), extra in 0i64..5) {
        let top = a.degree().unwrap_or(0) + extra;
        let r = a.reverse(top).unwrap();
        prop_assert_eq!(r.reverse(top).unwrap(), a.clone());
        prop_assert_eq!(a.is_palindromic(top), r == a);
    }

    #[test]
    fn polynomial_json_round_trips(a in poly()) {
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<QPolynomial>(&json).unwrap(), a);
    }

    #[test]
    fn qbinomial_symmetry_and_count(n in 0i64..16, k in 0i64..16) {
        prop_assume!(k <= n);
        let p = qbinomial(n, k).unwrap();
        prop_assert_eq!(&p, &qbinomial(n, n - k).unwrap());
        prop_assert_eq!(p.eval_at_one(), binom(n as u64, k as u64).into());
        prop_assert_eq!(p.degree(), Some(k * (n - k)));
        prop_assert!(p.is_palindromic(k * (n - k)));
    }

    #[test]
    fn canonical_form_ignores_vertex_order(t in tree(), perm_seed in any::<u64>()) {
        let m = t.vertices().len();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut s = perm_seed;
        for i in (1..m).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let mut vertices = vec![t.vertices()[0]; m];
        for (old, &new) in perm.iter().enumerate() {
            vertices[new] = t.vertices()[old];
        }
        let edges = t.edges().iter().map(|e| TreeEdge { u: perm[e.v], v: perm[e.u], deg: e.deg }).collect();
        let shuffled = DecoratedTree::new(t.k(), *t.ambient(), vertices, edges).unwrap();
        prop_assert_eq!(canonical_form(&shuffled), canonical_form(&t));
        prop_assert_eq!(shuffled.canonical(), t.canonical());
    }

    #[test]
    fn tangent_space_has_the_moduli_dimension(t in tree()) {
        let w = tangent_weights(&t).unwrap();
        prop_assert_eq!(w.len(), t.moduli_dim());
        prop_assert_eq!(w.zero_multiplicity(), 0);
        prop_assert_eq!(w.count_sign(Sign::Positive) + w.count_sign(Sign::Negative), t.moduli_dim());
    }

    #[test]
    fn tree_json_round_trips(t in tree()) {
        let json = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<DecoratedTree>(&json).unwrap(), t);
    }

    #[test]
    fn edge_weights_are_symmetric_in_the_ends(
        n in 2usize..=8,
        picks in prop::collection::vec(any::<Index>(), 3),
        d in 1u32..=3,
        a_mask in any::<u64>(),
    ) {
        let b_u = 1 + picks[0].index(n);
        let b_v = 1 + (b_u + picks[1].index(n - 1)) % n;
        prop_assume!(b_u != b_v);
        let a = Coords::full(n).intersection(Coords::from_mask(a_mask << 1)).without(b_u).without(b_v);
        let ambient = Ambient::full(n);
        let fwd = edge_h0_weights(a, b_u, b_v, d, &ambient).unwrap();
        let back = edge_h0_weights(a, b_v, b_u, d, &ambient).unwrap();
        let kk = a.len() as i64 + 1;
        prop_assert_eq!(fwd.len(), kk * (n as i64 - kk) + d as i64 * n as i64);
        prop_assert_eq!(fwd.zero_multiplicity(), 1);
        prop_assert_eq!(fwd, back);
    }
}

#[test]
fn complement_is_a_bijection_between_dual_grassmannians() {
    for n in 2..=6 {
        for k in 1..n {
            for d in 1..=3 {
                let here: BTreeSet<_> = enumerate_fixed_graphs(k, n, d).unwrap().iter().map(|t| canonical_form(&t.complement())).collect();
                let there: BTreeSet<_> = enumerate_fixed_graphs(n - k, n, d).unwrap().iter().map(canonical_form).collect();
                assert_eq!(here.len(), there.len(), "d={d} G({k},{n})");
                assert_eq!(here, there, "d={d} G({k},{n})");
            }
        }
    }
}
