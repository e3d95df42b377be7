use std::sync::Arc;

use relcat::enumerate::enumerate_functors;
use relcat::exponential::exponential;
use relcat::homotopy::*;
use relcat::relcat::{arrow_category, constant, first_projection, product, Flavor, RelCategory, RelFunctor};
use relcat::subdiv::{subdivide_map, xi_t, Kind};

fn cat(k: usize, flavor: Flavor) -> Arc<RelCategory> {
    Arc::new(arrow_category(k, flavor))
}

fn point() -> Arc<RelCategory> {
    Arc::new(RelCategory::terminal())
}

#[test]
fn constant_homotopy_checks() {
    let z = cat(2, Flavor::Minimal);
    let f = RelFunctor::identity(&z);
    let h = StrictHomotopy::constant(&f);
    assert!(h.check());
    assert!(check_strict_homotopy(&h.h, &f, &f).unwrap());
    let g = constant(&z, &z, 0);
    assert!(!check_strict_homotopy(&h.h, &g, &f).unwrap());
}

#[test]
fn homotopic_ends_and_non_homotopic_points() {
    let hat = cat(1, Flavor::Maximal);
    let (a, b) = (constant(&point(), &hat, 0), constant(&point(), &hat, 1));
    let zz = are_homotopic(&a, &b, 3).unwrap().unwrap();
    assert_eq!(zz.len(), 1);
    assert!(zz.connects(&a, &b));
    assert_eq!(are_homotopic(&a, &a, 3).unwrap().unwrap().len(), 0);

    let check = cat(1, Flavor::Minimal);
    let (a, b) = (constant(&point(), &check, 0), constant(&point(), &check, 1));
    assert!(are_homotopic(&a, &b, 4).unwrap().is_none());
}

#[test]
fn zigzag_through_a_cospan() {
    // 0 -> 2 <- 1 in a maximal poset: the points 0 and 1 need two steps
    let z = Arc::new(RelCategory::thin(vec!["0".into(), "1".into(), "2".into()], &[(0, 2, true), (1, 2, true)]).unwrap());
    let (a, b) = (constant(&point(), &z, 0), constant(&point(), &z, 1));
    assert!(are_homotopic(&a, &b, 1).unwrap().is_none());
    let zz = are_homotopic(&a, &b, 2).unwrap().unwrap();
    assert_eq!(zz.len(), 2);
    assert!(zz.connects(&a, &b));
    // symmetric and transitive on found witnesses
    let back = zz.reversed();
    assert!(back.connects(&b, &a));
    let round = zz.clone().then(back).unwrap();
    assert!(round.connects(&a, &a));
}

#[test]
fn homotopy_equivalences_by_search() {
    let hat = cat(1, Flavor::Maximal);
    let id = RelFunctor::identity(&hat);
    let e = find_homotopy_equivalence(&id, 2).unwrap().unwrap();
    assert!(e.inverse.same_maps(&id) && e.unit.is_empty() && e.counit.is_empty());

    let to_point = constant(&hat, &point(), 0);
    let e = find_homotopy_equivalence(&to_point, 2).unwrap().unwrap();
    assert!(e.check());

    let check = cat(1, Flavor::Minimal);
    assert!(find_homotopy_equivalence(&constant(&check, &point(), 0), 3).unwrap().is_none());

    for k in 0..3 {
        let pc = cat(k, Flavor::Minimal);
        let qc = cat(1, Flavor::Maximal);
        let prod = Arc::new(product(&pc, &qc));
        let proj = first_projection(&pc, &qc, &prod);
        assert!(find_homotopy_equivalence(&proj, 2).unwrap().unwrap().check());
    }
}

#[test]
fn sdr_search() {
    let hat = cat(1, Flavor::Maximal);
    let incl = RelFunctor::from_object_map(point(), hat.clone(), vec![0]).unwrap();
    let w = find_sdr(&incl, None).unwrap().unwrap();
    assert!(verify_sdr(&incl, &w).unwrap());
    assert_eq!(w.r.obj, vec![0, 0]);
    assert!(w.s.h.cod.morphism(w.s.components()[1]).we);
    // the homotopy runs from r to the identity, so the top point is not a retract
    let incl = RelFunctor::from_object_map(point(), hat.clone(), vec![1]).unwrap();
    assert!(find_sdr(&incl, None).unwrap().is_none());

    let check = cat(1, Flavor::Minimal);
    let incl = RelFunctor::from_object_map(point(), check.clone(), vec![1]).unwrap();
    assert!(find_sdr(&incl, None).unwrap().is_none());

    let id = RelFunctor::identity(&check);
    let w = find_sdr(&id, None).unwrap().unwrap();
    assert!(verify_sdr(&id, &w).unwrap());

    // a witness whose homotopy is not a weak equivalence somewhere
    let two = cat(1, Flavor::Minimal);
    let bad_r = constant(&two, &point(), 0);
    let incl0 = RelFunctor::from_object_map(point(), two.clone(), vec![0]).unwrap();
    let ir = incl0.after(&bad_r).unwrap();
    let s = StrictHomotopy::from_arrows(&ir, &RelFunctor::identity(&two)).unwrap();
    assert!(!verify_sdr(&incl0, &SdrWitness { r: bad_r, s }).unwrap());
}

#[test]
fn fence_shapes() {
    assert!(build_j(0, Kind::Terminal).is_err());
    for n in 1..5 {
        let j = build_j(n, Kind::Terminal).unwrap();
        assert_eq!(j.num_objects(), 2 * n + 1);
        assert!(j.is_maximal() && j.is_poset() && j.is_valid());
    }
    let j = build_j(1, Kind::Terminal).unwrap();
    assert!(j.arrow(0, 1).is_some() && j.arrow(2, 1).is_some());
}

#[test]
fn k_homotopy_on_the_point() {
    let x = cat(1, Flavor::Maximal);
    let f = constant(&point(), &x, 0);
    let g = constant(&point(), &x, 1);
    let h = StrictHomotopy::from_arrows(&f, &g).unwrap();
    let zz = k_homotopy(&h, Kind::Terminal).unwrap();
    assert_eq!(zz.len(), 2);
    let sp = xi_t(&point()).unwrap();
    let sx = xi_t(&x).unwrap();
    assert!(zz.connects(&subdivide_map(&f, &sp, &sx).unwrap(), &subdivide_map(&g, &sp, &sx).unwrap()));
}

#[test]
fn k_homotopy_constant_is_constant() {
    let p = cat(1, Flavor::Minimal);
    let f = RelFunctor::identity(&p);
    let zz = k_homotopy(&StrictHomotopy::constant(&f), Kind::Terminal).unwrap();
    assert!(zz.check());
    for s in &zz.steps {
        assert!(s.homotopy.source.same_maps(&s.homotopy.target));
    }
}

#[test]
fn k_homotopy_cylinder_inclusions() {
    let p = cat(2, Flavor::Minimal);
    let i = interval();
    let cyl = Arc::new(product(&p, &i));
    let h = StrictHomotopy::from_functor(RelFunctor::identity(&cyl), &p).unwrap();
    assert!(h.check());
    for kind in [Kind::Terminal, Kind::Initial] {
        let zz = k_homotopy(&h, kind).unwrap();
        assert_eq!(zz.len(), 6);
        assert!(zz.check());
    }
}

#[test]
fn k_map_ends() {
    let p = cat(2, Flavor::Minimal);
    let km = k_map(&p, Kind::Terminal).unwrap();
    let nj = km.j.num_objects();
    for (ci, c) in km.sub.chains.iter().enumerate() {
        let top: Vec<usize> = c.iter().map(|&x| 2 * x + 1).collect();
        let bottom: Vec<usize> = c.iter().map(|&x| 2 * x).collect();
        assert_eq!(km.cylinder.chains[km.k.obj[ci * nj]], top);
        assert_eq!(km.cylinder.chains[km.k.obj[ci * nj + nj - 1]], bottom);
    }
}

#[test]
fn induced_maps_of_homotopic_maps_are_homotopic() {
    let x = cat(1, Flavor::Minimal);
    let y = cat(1, Flavor::Maximal);
    let z = cat(1, Flavor::Maximal);
    let f = constant(&x, &y, 0);
    let g = RelFunctor::from_object_map(x.clone(), y.clone(), vec![0, 1]).unwrap();
    let h = StrictHomotopy::from_arrows(&f, &g).unwrap();
    let zy = exponential(&z, &y).unwrap();
    let zx = exponential(&z, &x).unwrap();
    let hs = precomposition_homotopy(&h, &zy, &zx).unwrap();
    assert!(hs.check());
    assert_eq!(zy.functors.len(), enumerate_functors(&y, &z).len());
}

#[test]
fn section_assignments() {
    for p in 0..4 {
        let (s, sec) = initial_section(p).unwrap();
        assert!(s.proj.after(&sec).unwrap().same_maps(&RelFunctor::identity(&s.base)));
        let (s, sec) = terminal_section(p).unwrap();
        assert!(s.proj.after(&sec).unwrap().same_maps(&RelFunctor::identity(&s.base)));
    }
    assert!(reversed_initial_assignment(0).is_ok());
    for p in 1..4 {
        assert!(reversed_initial_assignment(p).is_err());
    }
}

#[test]
fn square_equivalences_small() {
    for (p, q) in [(0, 0), (1, 0), (0, 1)] {
        let eqs = subdivision_square_equivalences(p, q).unwrap();
        assert_eq!(eqs.len(), 9);
        for (name, e) in &eqs {
            assert!(e.check(), "{name} at ({p},{q})");
        }
    }
}
