//! Property tests for the (Q/Z)^n arithmetic: canonicalization, closure
//! group axioms, and intersection laws.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use gwmax_core::qz::{self, canonicalize, element_order, GroupElement};

fn rational() -> impl Strategy<Value = BigRational> {
    (-24i64..=24, 1i64..=6).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn element(dim: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(rational(), dim).prop_map(|v| canonicalize(&v).unwrap())
}

fn generating_set() -> impl Strategy<Value = (usize, Vec<GroupElement>)> {
    (1usize..=3).prop_flat_map(|dim| {
        prop::collection::vec(element(dim), 0..=2).prop_map(move |gens| (dim, gens))
    })
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(v in prop::collection::vec(rational(), 1..=4)) {
        let once = canonicalize(&v).unwrap();
        let rats: Vec<BigRational> =
            once.phases().iter().map(|p| p.as_rational().clone()).collect();
        let twice = canonicalize(&rats).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn phases_stay_in_the_unit_interval(v in prop::collection::vec(rational(), 1..=4)) {
        let g = canonicalize(&v).unwrap();
        for p in g.phases() {
            prop_assert!(!p.as_rational().lt(&BigRational::from(BigInt::from(0))));
            prop_assert!(p.as_rational().lt(&BigRational::one()));
        }
    }

    #[test]
    fn closure_is_a_group((dim, gens) in generating_set()) {
        let g = qz::generate(dim, &gens).unwrap();
        let elems = g.elements();
        prop_assert!(g.contains(&GroupElement::identity(dim)));

        // closed under addition (all pairs on small groups, a diagonal
        // sample on larger ones) and under inversion
        let pairs: Vec<(usize, usize)> = if elems.len() <= 40 {
            (0..elems.len())
                .flat_map(|i| (0..elems.len()).map(move |j| (i, j)))
                .collect()
        } else {
            (0..elems.len()).map(|i| (i, (i * 7 + 3) % elems.len())).collect()
        };
        for (i, j) in pairs {
            let sum = elems[i].add(&elems[j]).unwrap();
            prop_assert!(g.contains(&sum));
        }
        for e in &elems {
            let ord = element_order(e);
            let inv = e.scale(&(&ord - BigUint::one()));
            prop_assert!(g.contains(&inv));
            prop_assert!(e.add(&inv).unwrap().is_identity());
        }
    }

    #[test]
    fn generator_orders_divide_group_order((dim, gens) in generating_set()) {
        let g = qz::generate(dim, &gens).unwrap();
        let n = BigUint::from(g.order());
        for gen in &gens {
            let ord = element_order(gen);
            prop_assert_eq!(&n % &ord, BigUint::from(0u32));
        }
    }

    #[test]
    fn intersection_laws((dim, gens_a) in generating_set(), more in prop::collection::vec(rational(), 0..=3)) {
        let ga = qz::generate(dim, &gens_a).unwrap();
        let gens_b: Vec<GroupElement> = more
            .chunks(dim)
            .filter(|c| c.len() == dim)
            .map(|c| canonicalize(c).unwrap())
            .collect();
        let gb = qz::generate(dim, &gens_b).unwrap();

        let ab = qz::intersect(&ga, &gb).unwrap();
        let ba = qz::intersect(&gb, &ga).unwrap();
        prop_assert_eq!(&ab, &ba);

        // Lagrange: the intersection order divides both orders
        prop_assert_eq!(ga.order() % ab.order(), 0);
        prop_assert_eq!(gb.order() % ab.order(), 0);

        // every intersection element lies in both inputs
        for e in ab.elements() {
            prop_assert!(ga.contains(&e) && gb.contains(&e));
        }

        // associativity against a third small group
        let gc = qz::generate(dim, &[GroupElement::identity(dim)]).unwrap();
        let left = qz::intersect(&qz::intersect(&ga, &gb).unwrap(), &gc).unwrap();
        let right = qz::intersect(&ga, &qz::intersect(&gb, &gc).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rendering_round_trips(g in element(3)) {
        // each phase prints as "k" or "p/q" and parses back to itself
        for p in g.phases() {
            let text = p.to_string();
            let back: gwmax_core::qz::Phase = text.parse().unwrap();
            prop_assert_eq!(p, &back);
        }
    }
}
