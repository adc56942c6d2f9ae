//! Cross-validation of the two symmetry-group algorithms against the
//! brute-force membership oracle, plus the structural laws the results
//! must satisfy.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

use gwmax_core::gmax::{
    brute_force_gmax_with_cap, gmax_smith_enumerated, gmax_submatrix, is_member,
    weight_group_order, SubmatrixOptions,
};
use gwmax_core::mat::IntMatrix;
use gwmax_core::polynomial::{build_wn, exponent_matrix, weights, ExponentMatrix};
use gwmax_core::qz::canonicalize;

fn full_rank_matrix() -> impl Strategy<Value = ExponentMatrix> {
    (2usize..=3, 0usize..=2)
        .prop_flat_map(|(n, extra)| {
            let m = n + extra;
            prop::collection::vec(0i64..=4, m * n).prop_map(move |vals| {
                IntMatrix::new(m, n, vals.into_iter().map(BigInt::from).collect())
            })
        })
        .prop_filter_map("needs full column rank", |m| ExponentMatrix::new(m).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn algorithms_agree_with_each_other_and_the_oracle(a in full_rank_matrix()) {
        let sub = gmax_submatrix(&a, SubmatrixOptions::default()).unwrap();
        let sub_set = sub.elements.clone().unwrap();

        let smith = gmax_smith_enumerated(&a, 1_000_000).unwrap();
        let smith_set = smith.elements.clone().unwrap();
        prop_assert_eq!(&sub_set, &smith_set);
        prop_assert_eq!(&sub.order, &smith.order);
        prop_assert_eq!(BigUint::from(smith_set.order()), smith.order.clone());

        if let Ok(oracle) = brute_force_gmax_with_cap(&a, 50_000) {
            prop_assert_eq!(&sub_set, &oracle);
        }

        // at most n generators; strictly fewer when a unit factor appears
        // (only factors above 1 are retained, so a short list means units)
        let factors = smith.invariant_factors.unwrap();
        prop_assert!(factors.iter().all(|f| !f.is_one()));
        prop_assert!(smith.generators.len() <= a.cols());
        if factors.len() < a.cols() {
            prop_assert!(smith.generators.len() < a.cols());
        }

        // every generator really is a symmetry
        for g in &smith.generators {
            prop_assert!(is_member(&a, g).unwrap());
        }
    }

    #[test]
    fn row_order_never_changes_the_group(
        a in full_rank_matrix(),
        perm in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let order: Vec<usize> = perm.into_iter().filter(|&i| i < a.rows()).collect();
        let shuffled = ExponentMatrix::new(a.matrix().select_rows(&order)).unwrap();

        let g1 = gmax_submatrix(&a, SubmatrixOptions::default()).unwrap();
        let g2 = gmax_submatrix(&shuffled, SubmatrixOptions::default()).unwrap();
        prop_assert_eq!(g1.elements.unwrap(), g2.elements.unwrap());

        let s1 = gmax_smith_enumerated(&a, 1_000_000).unwrap();
        let s2 = gmax_smith_enumerated(&shuffled, 1_000_000).unwrap();
        prop_assert_eq!(s1.invariant_factors.unwrap(), s2.invariant_factors.unwrap());
        prop_assert_eq!(s1.elements.unwrap(), s2.elements.unwrap());
    }

    #[test]
    fn determinant_law_on_invertible_matrices(vals in prop::collection::vec(0i64..=6, 9)) {
        let m = IntMatrix::new(3, 3, vals.into_iter().map(BigInt::from).collect());
        if m.det().is_zero() {
            return Ok(());
        }
        let a = ExponentMatrix::new(m).unwrap();
        let det = a.matrix().det().magnitude().clone();
        let smith = gmax_smith_enumerated(&a, 1_000_000);
        let Ok(smith) = smith else {
            // enumeration refused: the determinant alone must exceed the cap
            prop_assert!(det > BigUint::from(1_000_000u64));
            return Ok(());
        };
        prop_assert_eq!(&smith.order, &det);
        prop_assert_eq!(BigUint::from(smith.elements.unwrap().order()), det);
    }
}

#[test]
fn weight_vector_is_always_a_member() {
    let fixtures = [
        "x^3 + y^3 + x^2*y",
        "x^2 + x*y^2",
        "x^4 + y^4 + z^2 + x^2*y^2",
        "x^5 + y^5 + z^5 + x^2*y^3 + y^2*z^3",
    ];
    for src in fixtures {
        let a = exponent_matrix(&gwmax_core::polynomial::parse(src).unwrap()).unwrap();
        let q = weights(&a).unwrap();
        let qe = canonicalize(q.as_slice()).unwrap();
        assert!(is_member(&a, &qe).unwrap(), "{src}");
    }
    for n in [4u64, 6] {
        let a = exponent_matrix(&build_wn(n).unwrap()).unwrap();
        let q = weights(&a).unwrap();
        assert!(is_member(&a, &canonicalize(q.as_slice()).unwrap()).unwrap());
        assert_eq!(weight_group_order(&q), BigUint::from(2 * n));
    }
}

#[test]
fn benchmark_family_contains_the_single_variable_lattice() {
    for n in [4u64, 6] {
        let a = exponent_matrix(&build_wn(n).unwrap()).unwrap();
        for i in 0..n as usize {
            let mut coords = vec![num_rational::BigRational::zero(); n as usize];
            coords[i] = num_rational::BigRational::new(BigInt::one(), BigInt::from(n));
            let e = canonicalize(&coords).unwrap();
            assert!(is_member(&a, &e).unwrap(), "e_{i}/{n}");
        }
    }
}
