use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

use wahl_core::bundle::{c2_closed_form, euler_pairing, exceptional_c2, BundleNumerics, SurfaceNumerics};
use wahl_core::correspondence::{canonical_bundle_class, phi_backward, phi_forward, BundleClass};
use wahl_core::cyclic_quotient::{
    normalize_cq, pair_to_cq, wahl_contraction, wahl_contraction_from_chain, WahlPair,
};
use wahl_core::exact::{chain_determinant, hj_evaluate, hj_expand, mod_inverse, modulo, HjChain};
use wahl_core::markov::{descend, mutate_entries, MarkovTriple};
use wahl_core::toric::toric_wahl_contraction;

fn coprime_pair(max: u64) -> impl Strategy<Value = (u64, u64)> {
    (2..=max).prop_flat_map(|r| (Just(r), 1..r)).prop_filter("coprime", |(r, q)| r.gcd(q) == 1)
}

/// A random upward walk from the root of the Markov tree.
fn markov_walk(bound: BigInt) -> impl Strategy<Value = MarkovTriple> {
    prop::collection::vec(0usize..3, 0..25).prop_map(move |path| {
        path.into_iter().fold(MarkovTriple::root(), |t, pos| {
            let next = t.mutate(pos).expect("valid position");
            if next.largest() > t.largest() && *next.largest() <= bound {
                next
            } else {
                t
            }
        })
    })
}

fn markov_triple() -> impl Strategy<Value = MarkovTriple> {
    markov_walk(BigInt::from(10u32).pow(60))
}

proptest! {
    #[test]
    fn hj_round_trip((r, q) in coprime_pair(5000)) {
        let chain = hj_expand(&BigInt::from(r), &BigInt::from(q)).unwrap();
        prop_assert!(chain.entries().iter().all(|b| *b >= BigInt::from(2)));
        prop_assert_eq!(hj_evaluate(&chain), BigRational::new(r.into(), q.into()));
        prop_assert_eq!(chain_determinant(&chain), BigInt::from(r));
    }

    #[test]
    fn reversed_chain_is_inverse_twist((r, q) in coprime_pair(2000)) {
        let (r, q) = (BigInt::from(r), BigInt::from(q));
        let chain = hj_expand(&r, &q).unwrap();
        let inv = mod_inverse(&q, &r).unwrap();
        prop_assert_eq!(hj_expand(&r, &inv).unwrap(), chain.reversed());
    }

    #[test]
    fn chains_serialize_losslessly(entries in prop::collection::vec(2u64..1000, 1..12)) {
        let chain = HjChain::new(entries.into_iter().map(BigInt::from).collect()).unwrap();
        let text = serde_json::to_string(&chain).unwrap();
        prop_assert_eq!(serde_json::from_str::<HjChain>(&text).unwrap(), chain);
    }

    #[test]
    fn mod_inverse_inverts(a in -10_000i64..10_000, m in 2i64..10_000) {
        let (a, m) = (BigInt::from(a), BigInt::from(m));
        match mod_inverse(&a, &m) {
            Ok(x) => prop_assert_eq!(modulo(&(a * x), &m), BigInt::from(1)),
            Err(_) => prop_assert!(a.gcd(&m) != BigInt::from(1)),
        }
    }

    #[test]
    fn normal_form_ignores_coordinate_order((r, q) in coprime_pair(3000), k in 1u64..50) {
        let (r, q) = (BigInt::from(r), BigInt::from(q));
        let x = normalize_cq(&r, &BigInt::from(1), &q).unwrap();
        prop_assert_eq!(&x, &normalize_cq(&r, &q, &BigInt::from(1)).unwrap());
        // scaling both weights by a unit changes nothing
        let k = BigInt::from(k);
        if k.gcd(&r) == BigInt::from(1) {
            prop_assert_eq!(&x, &normalize_cq(&r, &k, &(&k * &q)).unwrap());
        }
    }

    #[test]
    fn contraction_three_ways((n, a) in coprime_pair(120)) {
        let w = WahlPair::from_u64(n, a).unwrap();
        let closed = wahl_contraction(&w);
        prop_assert_eq!(&closed, &wahl_contraction_from_chain(&w));
        prop_assert_eq!(&closed, &toric_wahl_contraction(&w));
        let cq = pair_to_cq(&w);
        let back: wahl_core::CyclicQuotient = serde_json::from_str(&serde_json::to_string(&cq).unwrap()).unwrap();
        prop_assert_eq!(back, cq);
    }

    #[test]
    fn mutation_is_an_involution(t in markov_triple(), pos in 0usize..3) {
        let once = mutate_entries(t.entries(), pos).unwrap();
        prop_assert!(wahl_core::markov::is_markov(&once[0], &once[1], &once[2]));
        prop_assert_eq!(&mutate_entries(&once, pos).unwrap(), t.entries());
    }

    #[test]
    fn descent_reaches_root(t in markov_triple()) {
        let steps = descend(&t);
        let last = steps.last().map_or(t.clone(), |s| s.to.clone());
        prop_assert!(last.is_root());
        let text = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<MarkovTriple>(&text).unwrap(), t);
    }

    #[test]
    // phi_backward searches the tree up to the rank, so keep ranks moderate
    fn phi_round_trip(t in markov_walk(BigInt::from(10_000_000))) {
        prop_assume!(!t.is_root());
        let b = phi_forward(&t, 2).unwrap();
        prop_assert_eq!(phi_backward(&b).unwrap(), t);
        let text = serde_json::to_string(&b).unwrap();
        prop_assert_eq!(serde_json::from_str::<BundleClass>(&text).unwrap(), b);
    }

    #[test]
    fn c2_forms_agree(r in 1i64..300, d in -300i64..300) {
        let p2 = SurfaceNumerics::projective_plane();
        let (r, d) = (BigInt::from(r), BigInt::from(d));
        let c2 = exceptional_c2(&r, &d, &p2).unwrap();
        prop_assert_eq!(&c2, &c2_closed_form(&r, &BigRational::from_integer(&d * &d)));
        let e = BundleNumerics::new(r, d, c2).unwrap();
        prop_assert_eq!(euler_pairing(&e, &e, &p2), BigRational::from_integer(1.into()));
    }

    #[test]
    fn bundle_classes_are_canonical(r in 2i64..500, d in -2000i64..2000) {
        match canonical_bundle_class(&BigInt::from(r), &BigInt::from(d)) {
            Ok(b) => {
                prop_assert!(b.degree >= BigInt::from(0) && b.degree < b.rank);
                prop_assert_eq!(canonical_bundle_class(&b.rank, &(&b.degree + &b.rank)).unwrap(), b);
            }
            Err(_) => prop_assert!(BigInt::from(r).gcd(&BigInt::from(d)) != BigInt::from(1)),
        }
    }
}
