//! Property tests for the counting and sign invariants.

use koszul_core::blocks::{binomial, mhb, monomial_basis, BlockStructure, Multidegree};
use koszul_core::koszul::inner_derivative;
use num::bigint::BigUint;
use proptest::prelude::*;

fn small_structure() -> impl Strategy<Value = BlockStructure> {
    (
        prop::collection::vec(1usize..=2, 0..=2),
        prop::collection::vec(1usize..=2, 0..=2),
    )
        .prop_filter("at least one block", |(a, b)| !(a.is_empty() && b.is_empty()))
        .prop_map(|(a, b)| BlockStructure::new(a, b).unwrap())
}

proptest! {
    #[test]
    fn monomial_basis_size_is_binomial_product(
        s in small_structure(),
        seed in prop::collection::vec(0i64..=3, 6),
    ) {
        let d = Multidegree::new(seed[..s.q()].to_vec());
        let basis = monomial_basis(&s, &d).unwrap();
        let expect: BigUint = d.0.iter().enumerate().fold(BigUint::from(1u32), |acc, (i, &di)| {
            acc * binomial(di as usize + s.block_dim(i), s.block_dim(i))
        });
        prop_assert_eq!(BigUint::from(basis.len() as u64), expect);
        // all exponents distinct and of the right degree
        let mut seen = std::collections::BTreeSet::new();
        for e in &basis {
            prop_assert_eq!(&e.degree(), &d);
            prop_assert!(seen.insert(e.clone()));
        }
    }

    #[test]
    fn mhb_is_symmetric_in_the_degree_list(
        s in small_structure(),
        seed in prop::collection::vec(0i64..=2, 48),
        rot in 0usize..8,
    ) {
        let n = s.n();
        let q = s.q();
        let mut degrees: Vec<Multidegree> = (0..n)
            .map(|k| Multidegree::new(seed[k * q..(k + 1) * q].to_vec()))
            .collect();
        let base = mhb(&s, &degrees).unwrap();
        degrees.rotate_left(rot % n.max(1));
        degrees.swap(0, n - 1);
        prop_assert_eq!(mhb(&s, &degrees).unwrap(), base);
    }

    #[test]
    fn inner_derivatives_anticommute(
        members in prop::collection::btree_set(0usize..=9, 2..=6),
        pick in prop::collection::vec(0usize..=100, 2),
    ) {
        let wedge: Vec<usize> = members.into_iter().collect();
        let j = wedge[pick[0] % wedge.len()];
        let k = wedge[pick[1] % wedge.len()];
        prop_assume!(j != k);
        let (after_j, s_j) = inner_derivative(j, &wedge).unwrap();
        let (jk, s_jk) = inner_derivative(k, &after_j).unwrap();
        let (after_k, s_k) = inner_derivative(k, &wedge).unwrap();
        let (kj, s_kj) = inner_derivative(j, &after_k).unwrap();
        prop_assert_eq!(&jk, &kj);
        // Delta_j Delta_k = -Delta_k Delta_j
        prop_assert_eq!(s_j * s_jk, -(s_k * s_kj));
        // removing a member twice annihilates
        prop_assert!(inner_derivative(j, &after_j).is_none());
    }
}
