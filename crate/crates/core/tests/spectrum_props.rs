mod common;

use std::collections::BTreeSet;

use chromloc::group::SubgroupId;
use chromloc::spectrum::{
    ell_to_locus, locus_to_ell, support_of_pushforward, supports_equal, BalmerPrime, ChromaticPoint, EllVector,
    Height, SupportData, VanishingLocus,
};
use common::{lattice, random_locus, random_support_data, random_support_set};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_entry() -> impl Strategy<Value = Option<Height>> {
    prop_oneof![
        2 => Just(None),
        6 => (0u32..6).prop_map(|m| Some(Height::Finite(m))),
        1 => Just(Some(Height::Infinity)),
    ]
}

fn cyclic_spec(p: u32, n: usize) -> String {
    format!("cyclic:{}", p.pow(n as u32))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn valid_ell_gives_valid_locus(p in prop::sample::select(vec![2u32, 3]), entries in prop::collection::vec(arb_entry(), 1..5)) {
        let n = entries.len() - 1;
        let l = lattice(&cyclic_spec(p, n));
        let ell = EllVector::new(p, entries).unwrap();
        let vl = ell_to_locus(&l, &ell).unwrap();
        prop_assert_eq!(vl.is_valid(), ell.validate_ell());
        prop_assert_eq!(locus_to_ell(&vl, p).unwrap(), ell);
    }

    #[test]
    fn valid_locus_gives_valid_ell(p in prop::sample::select(vec![2u32, 3]), n in 0usize..4, seed in prop::collection::vec((0usize..4, 0u32..6, prop::bool::weighted(0.1)), 0..5)) {
        let l = lattice(&cyclic_spec(p, n));
        let primes = seed.iter().map(|&(i, m, inf)| {
            let h = if inf { Height::Infinity } else { Height::Finite(m) };
            BalmerPrime::new(l.class_of(SubgroupId(i.min(n))), h, p)
        });
        let vl = VanishingLocus::closure(l.clone(), primes).unwrap();
        prop_assert!(vl.is_valid(), "{:?}", vl.validate());
        let ell = locus_to_ell(&vl, p).unwrap();
        prop_assert!(ell.validate_ell());
        prop_assert_eq!(ell_to_locus(&l, &ell).unwrap(), vl);
    }

    #[test]
    fn closure_is_valid_idempotent_and_extensive(which in 0..7usize, seed in any::<u64>()) {
        let l = lattice(common::CORPUS[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vl = random_locus(&mut rng, &l);
        prop_assert!(vl.is_valid(), "{:?}", vl.validate());
        let again = VanishingLocus::closure(l.clone(), vl.primes().iter().copied()).unwrap();
        prop_assert_eq!(&again, &vl);
        let extra = random_locus(&mut rng, &l);
        let joined = VanishingLocus::closure(l.clone(), vl.iter().chain(extra.iter()).copied()).unwrap();
        for b in vl.iter().chain(extra.iter()) {
            prop_assert!(joined.contains(b.class, b.point()));
        }
    }

    #[test]
    fn pushforward_is_conjugation_invariant(which in 0..7usize, seed in any::<u64>()) {
        let l = lattice(common::CORPUS[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_support_set(&mut rng);
        let d = support_of_pushforward(l.clone(), &s);
        for h in l.ids() {
            prop_assert_eq!(d.at_subgroup(h), &s);
            for g in l.group().elements() {
                prop_assert_eq!(d.at_subgroup(l.conjugate_subgroup(h, g)), d.at_subgroup(h));
            }
        }
        prop_assert_eq!(d.is_underlying_determined(), s.is_empty() || l.len() == 1);
    }

    #[test]
    fn supports_equal_is_an_equivalence(seed in any::<u64>(), which in 0..7usize) {
        let l = lattice(common::CORPUS[which]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_support_data(&mut rng, &l);
        let b = if seed % 3 == 0 { a.clone() } else { random_support_data(&mut rng, &l) };
        let c = if seed % 5 == 0 { b.clone() } else { random_support_data(&mut rng, &l) };
        prop_assert!(supports_equal(&a, &a).unwrap());
        prop_assert_eq!(supports_equal(&a, &b).unwrap(), supports_equal(&b, &a).unwrap());
        if supports_equal(&a, &b).unwrap() && supports_equal(&b, &c).unwrap() {
            prop_assert!(supports_equal(&a, &c).unwrap());
        }
    }
}

#[test]
fn locus_examples() {
    let l = lattice("cyclic:2");
    let e = l.class_of(l.trivial());
    assert!(VanishingLocus::empty(l.clone()).is_valid());
    let gap = VanishingLocus::new(l.clone(), [BalmerPrime::new(e, Height::Finite(2), 5)]);
    assert!(!gap.is_valid());
    let full = l.classes().iter().flat_map(|c| (0..=3).map(move |m| BalmerPrime::new(c.id, Height::Finite(m), 2)));
    let full: Vec<_> = full.collect();
    assert!(VanishingLocus::new(l.clone(), full).is_valid());
}

#[test]
fn real_theory_models_for_n_up_to_five() {
    let l = lattice("cyclic:2");
    for n in 0..=5 {
        let e = SupportData::real_johnson_wilson(l.clone(), n).unwrap();
        let k = SupportData::real_morava_wedge(l.clone(), n).unwrap();
        assert!(e.is_underlying_determined() && k.is_underlying_determined());
        assert!(supports_equal(&e, &k).unwrap());
        let expected: BTreeSet<ChromaticPoint> = (0..=n).map(|m| ChromaticPoint::new(Height::Finite(m), 2)).collect();
        assert_eq!(e.at_subgroup(l.trivial()), &expected);
        assert!(e.at_subgroup(l.whole()).is_empty());
    }
}
