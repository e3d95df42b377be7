use std::collections::BTreeSet;
use std::sync::Arc;

use relcat::relcat::{arrow_category, Flavor, RelCategory};
use relcat::subdiv::{
    conjugation_iso, conjugation_iso_terminal, maximal_iteration_iso, subdivide_map, xi, xi_bar, xi_i, xi_t, Kind,
};

fn cat(k: usize, flavor: Flavor) -> Arc<RelCategory> {
    Arc::new(arrow_category(k, flavor))
}

fn we_edges(c: &RelCategory) -> BTreeSet<(String, String)> {
    c.morphisms()
        .iter()
        .enumerate()
        .filter(|(i, m)| m.we && !c.is_identity(*i))
        .map(|(_, m)| (c.objects()[m.src].clone(), c.objects()[m.dst].clone()))
        .collect()
}

fn edges(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn terminal_subdivision_of_two_arrows() {
    let s = xi_t(&cat(2, Flavor::Minimal)).unwrap();
    assert_eq!(s.sub.objects(), ["0", "1", "2", "01", "02", "12", "012"]);
    assert_eq!(
        we_edges(&s.sub),
        edges(&[("1", "01"), ("12", "012"), ("2", "02"), ("2", "12"), ("2", "012"), ("02", "012")])
    );
    // all twelve proper inclusions are drawn
    assert_eq!(s.sub.num_morphisms(), 7 + 12);
    assert!(s.sub.is_valid());
    assert!(s.proj.is_valid());
}

#[test]
fn initial_subdivision_of_two_arrows() {
    let s = xi_i(&cat(2, Flavor::Minimal)).unwrap();
    assert_eq!(s.sub.objects().len(), 7);
    assert_eq!(
        we_edges(&s.sub),
        edges(&[("012", "01"), ("012", "0"), ("012", "02"), ("01", "0"), ("02", "0"), ("12", "1")])
    );
}

#[test]
fn initial_subdivision_of_one_arrow() {
    let s = xi_i(&cat(1, Flavor::Minimal)).unwrap();
    assert_eq!(s.sub.objects(), ["0", "1", "01"]);
    let c = &s.sub;
    let a = c.arrow(2, 0).unwrap();
    let b = c.arrow(2, 1).unwrap();
    assert!(c.morphism(a).we);
    assert!(!c.morphism(b).we);
}

#[test]
fn chain_counts_of_linear_orders() {
    for k in 0..5 {
        let s = xi_t(&cat(k, Flavor::Minimal)).unwrap();
        assert_eq!(s.sub.num_objects(), (1 << (k + 1)) - 1);
    }
}

#[test]
fn terminal_and_point() {
    let p = Arc::new(RelCategory::terminal());
    for s in [xi_t(&p).unwrap(), xi_i(&p).unwrap()] {
        assert_eq!(s.sub.num_objects(), 1);
        assert_eq!(s.sub.num_morphisms(), 1);
    }
    assert_eq!(xi(&p).unwrap().sub().num_objects(), 1);
    assert_eq!(xi_bar(&p).unwrap().sub().num_objects(), 1);
}

#[test]
fn two_fold_subdivisions_of_one_arrow() {
    let p = cat(1, Flavor::Minimal);
    let x = xi(&p).unwrap();
    assert_eq!(x.sub().num_objects(), 5);
    let chains: Vec<Vec<String>> = x
        .outer
        .chains
        .iter()
        .map(|c| c.iter().map(|&i| x.inner.sub.objects()[i].clone()).collect())
        .collect();
    assert!(chains.contains(&vec!["01".to_string(), "0".to_string()]));
    assert!(chains.contains(&vec!["01".to_string(), "1".to_string()]));
    assert_eq!(xi_bar(&p).unwrap().sub().num_objects(), 5);
    // the projection reflects weak equivalences
    for (i, m) in x.sub().morphisms().iter().enumerate() {
        assert_eq!(m.we, x.proj.cod.morphism(x.proj.mor[i]).we);
    }
}

#[test]
fn subdivisions_are_not_opposites() {
    let p = cat(2, Flavor::Minimal);
    let t = xi_t(&p).unwrap();
    let i = xi_i(&p).unwrap();
    let op = i.sub.opposite();
    // same underlying posets up to the identity on chains
    let mut diff = 0;
    for (a, ca) in t.chains.iter().enumerate() {
        for (b, cb) in t.chains.iter().enumerate() {
            let (ia, ib) = (i.chain_index(ca).unwrap(), i.chain_index(cb).unwrap());
            assert_eq!(t.sub.arrow(a, b).is_some(), op.arrow(ia, ib).is_some());
            if let (Some(m), Some(n)) = (t.sub.arrow(a, b), op.arrow(ia, ib)) {
                if t.sub.morphism(m).we != op.morphism(n).we {
                    diff += 1;
                }
            }
        }
    }
    assert!(diff > 0);
}

#[test]
fn conjugation_on_two_arrows() {
    let p = cat(2, Flavor::Minimal);
    let f = conjugation_iso(&p).unwrap();
    assert!(f.is_isomorphism());
    let g = conjugation_iso_terminal(&p).unwrap();
    assert!(g.is_isomorphism());
}

#[test]
fn subdivide_map_collapses() {
    let p = cat(1, Flavor::Minimal);
    let point = Arc::new(RelCategory::terminal());
    let f = relcat::relcat::constant(&p, &point, 0);
    let (sp, spt) = (xi_t(&p).unwrap(), xi_t(&point).unwrap());
    let g = subdivide_map(&f, &sp, &spt).unwrap();
    assert!(g.obj.iter().all(|&o| o == 0));
    let id = relcat::RelFunctor::identity(&p);
    let h = subdivide_map(&id, &sp, &sp).unwrap();
    assert!(h.same_maps(&relcat::RelFunctor::identity(&sp.sub)));
}

#[test]
fn maximal_iteration() {
    for k in 0..3 {
        let p = cat(k, Flavor::Maximal);
        let f = maximal_iteration_iso(&p, Kind::Terminal).unwrap();
        assert!(f.is_isomorphism());
    }
    assert!(maximal_iteration_iso(&cat(0, Flavor::Maximal), Kind::Initial).is_ok());
    // the iterated initial subdivision is the opposite poset of the two-fold one
    assert!(maximal_iteration_iso(&cat(1, Flavor::Maximal), Kind::Initial).is_err());
    assert!(maximal_iteration_iso(&cat(2, Flavor::Minimal), Kind::Terminal).is_err());
}
