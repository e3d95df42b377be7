use std::sync::Arc;

use relcat::bisimplicial::{boundary_delta, delta, BiSMap, NerveBudget};
use relcat::dwyer::{check_dwyer, pushout_along_sieve, DEFAULT_SDR_BUDGET};
use relcat::kxi::*;
use relcat::relcat::{arrow_category, Flavor, RelCategory};

fn budget() -> NerveBudget {
    NerveBudget::default()
}

#[test]
fn realized_presentations_match_representables() {
    for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let pres = Presentation::delta(p, q);
        let r = pres.realize((2, 2)).unwrap();
        let d = delta(p, q, (2, 2));
        let digits = |s: &str| s.chars().map(|c| c.to_digit(10).unwrap() as usize).collect::<Vec<_>>();
        let maps = (0..=2)
            .map(|i| {
                (0..=2)
                    .map(|j| {
                        r.cells[i][j]
                            .iter()
                            .map(|c| {
                                let (a, b) = pres.cells[c.cell].name.split_once('|').unwrap();
                                let a: Vec<usize> = c.h.iter().map(|&k| digits(a)[k]).collect();
                                let b: Vec<usize> = c.v.iter().map(|&k| digits(b)[k]).collect();
                                d.index(&a, &b).unwrap()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let f = BiSMap { maps };
        assert!(f.commutes(&r.set, &d.set), "Δ[{p},{q}]");
        assert!(f.is_isomorphism(&d.set), "Δ[{p},{q}]");
        let b = Presentation::boundary_delta(p, q).realize((2, 2)).unwrap();
        assert_eq!(b.set.counts, boundary_delta(p, q, (2, 2)).0.counts);
    }
}

#[test]
fn incomplete_or_inconsistent_data_is_rejected() {
    let mut pres = Presentation::new("bad");
    let a = pres.add_cell("a", (0, 0)).unwrap();
    let e = pres.add_cell("e", (1, 0)).unwrap();
    assert!(pres.realize((1, 1)).is_err());
    assert!(pres.set_face(Direction::Vertical, 0, e, CellRef::plain(a, (0, 0))).is_err());
    assert!(pres.set_face(Direction::Horizontal, 0, e, CellRef::plain(e, (1, 0))).is_err());
    pres.set_face(Direction::Horizontal, 0, e, CellRef::plain(a, (0, 0))).unwrap();
    pres.set_face(Direction::Horizontal, 1, e, CellRef::plain(a, (0, 0))).unwrap();
    // a loop is a valid bisimplicial set
    assert!(pres.realize((2, 1)).is_ok());
    assert!(pres.add_cell("a", (0, 0)).is_err());
}

#[test]
fn realizing_a_bisimplex_gives_its_subdivision() {
    for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)] {
        let pres = Presentation::delta(p, q);
        let k = k_xi(&pres, 500).unwrap();
        let shape = SubdividedBisimplex::new(p, q).unwrap();
        assert_eq!(k.poset.num_objects(), shape.xi.sub().num_objects(), "({p},{q})");
        let top = pres.cells.len() - 1;
        let chi = k.characteristic_functor(&pres, top).unwrap();
        assert!(chi.is_isomorphism(), "({p},{q})");
        assert!(k.attachments.iter().all(|a| a.dwyer_verified));
    }
}

#[test]
fn two_points_give_a_discrete_poset() {
    let mut pres = Presentation::new("two points");
    pres.add_cell("a", (0, 0)).unwrap();
    pres.add_cell("b", (0, 0)).unwrap();
    let k = k_xi(&pres, 500).unwrap();
    assert_eq!(k.poset.num_objects(), 2);
    assert_eq!(k.poset.num_morphisms(), 2);
}

#[test]
fn boundary_inclusions_are_dwyer() {
    for (p, q) in [(1, 0), (0, 1), (1, 1)] {
        let b = Presentation::boundary_delta(p, q);
        let d = Presentation::delta(p, q);
        let kb = k_xi(&b, 500).unwrap();
        let kd = k_xi(&d, 500).unwrap();
        let incl = k_xi_inclusion(&kb, &b, &kd, &d).unwrap();
        assert!(check_dwyer(&incl, Some(DEFAULT_SDR_BUDGET)).unwrap().is_dwyer(), "({p},{q})");
    }
}

#[test]
fn unit_on_bisimplices() {
    let (d, nx, eta) = unit_eta(0, 0, (1, 1), &budget()).unwrap();
    assert!(eta.commutes(&d.set, &nx.set));
    assert!(eta.is_isomorphism(&nx.set));
    let (d, nx, eta) = unit_eta(1, 0, (1, 0), &budget()).unwrap();
    assert!(eta.commutes(&d.set, &nx.set));
    assert!(eta.is_injective());
}

#[test]
fn nerve_pushout_comparison() {
    // collapse the bottom of 1̂ onto a point
    let b = Arc::new(arrow_category(1, Flavor::Maximal));
    let i = b.full_subcategory(&[0]).unwrap();
    let c = Arc::new(RelCategory::terminal());
    let s = relcat::RelFunctor::from_object_map(i.dom.clone(), c, vec![0]).unwrap();
    let po = pushout_along_sieve(&i, &s, None).unwrap();
    let cmp = pushout_comparison(&i, &s, &po, (2, 2), &budget()).unwrap();
    assert!(cmp.map.commutes(&cmp.glued, &cmp.nerve_d.set));
    assert!(cmp.glued.violations().is_empty());
    let cert = relcat::bisimplicial::diagonal_certificate(&cmp.map, &cmp.glued, &cmp.nerve_d.set, 1).unwrap();
    assert!(cert.iso);
}
