use std::sync::Arc;

use proptest::prelude::*;
use relcat::dwyer::{check_dwyer, DEFAULT_SDR_BUDGET};
use relcat::io::{parse, serialize_relcat, serialize_relpos, Document};
use relcat::random::{random_relposet, rng};
use relcat::subdiv::{conjugation_iso, xi_i, xi_t};
use relcat::verify::{dwyer_duality, run_property, Property};

fn run(p: Property, cases: usize) {
    let report = run_property(p, 11, cases).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn precomposition_homotopies() {
    run(Property::Precomposition, 10);
}

#[test]
fn subdivided_homotopies() {
    run(Property::SubdividedHomotopy, 10);
}

#[test]
fn retracts_of_dwyer_inclusions() {
    run(Property::Retract, 10);
}

#[test]
fn pushouts_along_dwyer_inclusions() {
    run(Property::Pushout, 10);
}

#[test]
fn composites_of_dwyer_inclusions() {
    run(Property::Composite, 10);
}

#[test]
fn subdivided_cosieves() {
    run(Property::SubdividedCosieve, 10);
}

#[test]
fn boundary_inclusions() {
    run(Property::BoundaryInclusion, 4);
}

#[test]
fn pushout_nerves() {
    run(Property::PushoutNerve, 3);
}

#[test]
fn dwyer_and_co_dwyer_agree_under_opposites() {
    for c in dwyer_duality(5, 20).unwrap() {
        assert!(c.passed, "{}", c.detail);
    }
}

#[test]
fn property_keys_round_trip() {
    for p in Property::ALL {
        assert_eq!(Property::parse(p.key()), Some(p));
        assert_eq!(Property::parse(p.slug()), Some(p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_relposets_are_valid_and_round_trip(seed in any::<u64>(), n in 0usize..7) {
        let p = random_relposet(&mut rng(seed), n, 0.5, 0.5);
        prop_assert!(p.validate().is_empty());
        prop_assert!(p.is_poset());
        let text = serialize_relpos("p", &p).unwrap();
        prop_assert_eq!(parse(&text).unwrap(), Document::RelPos { name: "p".into(), cat: p.clone() });
        let text = serialize_relcat("p", &p).unwrap();
        prop_assert_eq!(parse(&text).unwrap(), Document::RelCat { name: "p".into(), cat: p.clone() });
    }

    #[test]
    fn opposite_is_an_involution(seed in any::<u64>(), n in 0usize..7) {
        let p = random_relposet(&mut rng(seed), n, 0.5, 0.5);
        prop_assert_eq!(p.opposite().opposite(), p);
    }

    #[test]
    fn subdivisions_are_valid_with_opposite_orders(seed in any::<u64>(), n in 0usize..6) {
        let p = Arc::new(random_relposet(&mut rng(seed), n, 0.5, 0.5));
        let t = xi_t(&p).unwrap();
        let i = xi_i(&p).unwrap();
        prop_assert!(t.sub.validate().is_empty() && i.sub.validate().is_empty());
        prop_assert!(t.sub.is_poset() && i.sub.is_poset());
        for m in t.sub.morphisms() {
            // the same chains, related the other way
            prop_assert!(i.sub.arrow(m.dst, m.src).is_some());
        }
        for (k, m) in t.sub.morphisms().iter().enumerate() {
            let pm = t.proj.mor[k];
            prop_assert_eq!(m.we, p.morphism(pm).we);
        }
    }

    #[test]
    fn conjugation_is_an_isomorphism(seed in any::<u64>(), n in 0usize..6) {
        let p = Arc::new(random_relposet(&mut rng(seed), n, 0.5, 0.5));
        prop_assert!(conjugation_iso(&p).unwrap().is_isomorphism());
    }

    #[test]
    fn identities_are_dwyer(seed in any::<u64>(), n in 0usize..5) {
        let p = Arc::new(random_relposet(&mut rng(seed), n, 0.5, 0.5));
        let all: Vec<usize> = (0..n).collect();
        let incl = p.full_subcategory(&all).unwrap();
        prop_assert!(check_dwyer(&incl, Some(DEFAULT_SDR_BUDGET)).unwrap().is_dwyer());
    }
}
