use std::sync::Arc;

use relcat::dwyer::*;
use relcat::enumerate::enumerate_functors;
use relcat::relcat::{arrow_category, constant, Flavor, RelCategory, RelFunctor};

fn cat(k: usize, flavor: Flavor) -> Arc<RelCategory> {
    Arc::new(arrow_category(k, flavor))
}

fn point() -> Arc<RelCategory> {
    Arc::new(RelCategory::terminal())
}

fn sub(b: &Arc<RelCategory>, objs: &[usize]) -> RelFunctor {
    b.full_subcategory(objs).unwrap()
}

#[test]
fn sieves_and_cosieves() {
    let c = cat(1, Flavor::Minimal);
    let bottom = sub(&c, &[0]);
    let top = sub(&c, &[1]);
    let cert = is_sieve(&bottom).unwrap().unwrap();
    assert_eq!(cert.alpha.obj, vec![0, 1]);
    assert!(is_sieve(&top).unwrap().is_none());
    assert!(is_cosieve(&top).unwrap());
    assert!(!is_cosieve(&bottom).unwrap());
    let z = cosieve_generated(&bottom).unwrap();
    assert_eq!(z.obj, vec![0, 1]);
}

#[test]
fn dwyer_verdicts() {
    let check = cat(1, Flavor::Minimal);
    match check_dwyer(&sub(&check, &[0]), None).unwrap() {
        Verdict::Refuted(r) => assert_eq!(r, "no strong deformation retraction"),
        Verdict::Dwyer(_) => panic!("expected a refutation"),
    }
    let hat = cat(1, Flavor::Maximal);
    let v = check_dwyer(&sub(&hat, &[0]), None).unwrap();
    assert!(v.witness().unwrap().verify());
    assert!(!check_dwyer(&sub(&hat, &[1]), None).unwrap().is_dwyer());
    // not injective
    let c = constant(&cat(1, Flavor::Maximal), &hat, 0);
    assert!(!check_dwyer(&c, None).unwrap().is_dwyer());
    // identities are Dwyer
    assert!(check_dwyer(&RelFunctor::identity(&check), None).unwrap().is_dwyer());
    // the top point is a co-Dwyer inclusion
    assert!(check_co_dwyer(&sub(&hat, &[1]), None).unwrap().is_dwyer());
}

#[test]
fn supplied_witness_is_checked() {
    let hat = cat(1, Flavor::Maximal);
    let w = check_dwyer(&sub(&hat, &[0]), None).unwrap().witness().unwrap().clone();
    assert!(check_dwyer_with(&sub(&hat, &[0]), &w.sdr).unwrap().is_dwyer());
    let check = cat(1, Flavor::Minimal);
    assert!(!check_dwyer_with(&sub(&check, &[0]), &w.sdr).map(|v| v.is_dwyer()).unwrap_or(false));
}

#[test]
fn pushout_collapsing_the_bottom_point() {
    let hat = cat(1, Flavor::Maximal);
    let i = sub(&hat, &[0]);
    let s = constant(&i.dom, &point(), 0);
    let po = pushout_along_sieve(&i, &s, None).unwrap();
    assert_eq!(po.d.num_objects(), 2);
    assert!(po.d.is_thin() && po.d.is_maximal());
    assert!(po.t.is_isomorphism());
    assert!(po.t.after(&i).unwrap().same_maps(&po.j.after(&s).unwrap()));
}

#[test]
fn pushout_refuses_non_dwyer_maps() {
    let check = cat(1, Flavor::Minimal);
    let i = sub(&check, &[0]);
    let s = constant(&i.dom, &point(), 0);
    assert!(pushout_along_sieve(&i, &s, None).is_err());
    assert!(sieve_pushout(&i, &s).is_ok());
}

fn universal_property(i: &RelFunctor, s: &RelFunctor, po: &PushoutResult, e: &Arc<RelCategory>) {
    let b_maps = enumerate_functors(&i.cod, e);
    let c_maps = enumerate_functors(&s.cod, e);
    let d_maps = enumerate_functors(&po.d, e);
    for u in &b_maps {
        for v in &c_maps {
            if !u.after(i).unwrap().same_maps(&v.after(s).unwrap()) {
                continue;
            }
            let hits = d_maps
                .iter()
                .filter(|w| w.after(&po.t).unwrap().same_maps(u) && w.after(&po.j).unwrap().same_maps(v))
                .count();
            assert_eq!(hits, 1);
        }
    }
}

#[test]
fn pushout_universal_property() {
    // B = 2̂ with sieve {0, 1}, glued to C = 1̂ by collapsing
    let b = cat(2, Flavor::Maximal);
    let i = sub(&b, &[0, 1]);
    let c = cat(1, Flavor::Maximal);
    let s = constant(&i.dom, &c, 1);
    let po = sieve_pushout(&i, &s).unwrap();
    assert!(po.d.is_valid());
    assert!(po.j.is_relative_inclusion());
    assert_eq!(po.xc.dom.num_objects(), 1);
    for e in [cat(1, Flavor::Maximal), cat(2, Flavor::Minimal), cat(1, Flavor::Minimal)] {
        universal_property(&i, &s, &po, &e);
    }
}

#[test]
fn pushout_with_parallel_morphisms() {
    // gluing the two ends of 1̂ ⊔ ... : A = two points, B = two points each under a top, C = point
    let b = Arc::new(
        RelCategory::thin(vec!["a".into(), "b".into(), "x".into()], &[(0, 2, false), (1, 2, false)]).unwrap(),
    );
    let i = sub(&b, &[0, 1]);
    let s = constant(&i.dom, &point(), 0);
    let po = sieve_pushout(&i, &s).unwrap();
    assert_eq!(po.d.num_objects(), 2);
    assert_eq!(po.d.hom(0, 1).len(), 2);
    assert!(!po.d.is_thin());
    assert!(po.d.is_valid());
    universal_property(&i, &s, &po, &cat(1, Flavor::Minimal));
}

#[test]
fn transported_retraction() {
    let b = cat(2, Flavor::Maximal);
    let i = sub(&b, &[0]);
    let w = check_dwyer(&i, None).unwrap().witness().unwrap().clone();
    let c = cat(1, Flavor::Minimal);
    let s = constant(&i.dom, &c, 1);
    let po = pushout_along_sieve(&i, &s, Some(&w.sdr)).unwrap();
    let w2 = transport_sdr_along_pushout(&w, &s, &po).unwrap();
    assert!(w2.verify());
    let zc = cosieve_generated(&po.j).unwrap();
    assert_eq!(zc.obj.len(), 4);
}

#[test]
fn composite_of_dwyer_inclusions() {
    let b = cat(2, Flavor::Maximal);
    let i12 = sub(&b, &[0, 1]);
    let w12 = check_dwyer(&i12, None).unwrap().witness().unwrap().clone();
    let a1 = i12.dom.clone();
    let i01 = sub(&a1, &[0]);
    let w01 = check_dwyer(&i01, None).unwrap().witness().unwrap().clone();
    let w02 = compose_dwyer(&w01, &w12).unwrap();
    assert!(w02.verify());
    assert_eq!(w02.incl.obj, vec![0]);
}

#[test]
fn retract_of_a_dwyer_inclusion() {
    let b = cat(2, Flavor::Maximal);
    let i = sub(&b, &[0]);
    let w = check_dwyer(&i, None).unwrap().witness().unwrap().clone();
    // collapse 1 onto 2
    let e = RelFunctor::from_object_map(b.clone(), b.clone(), vec![0, 2, 2]).unwrap();
    let (a_prime, f, g) = idempotent_retract(&i, &e).unwrap();
    assert_eq!(f.dom.num_objects(), 2);
    let w2 = retract_witness(&w, &a_prime, &f, &g).unwrap();
    assert!(w2.verify());
}

#[test]
fn subdivided_cosieve_retracts_onto_suffixes() {
    let q = cat(2, Flavor::Minimal);
    let p = sub(&q, &[1, 2]);
    let (sp, sq, w) = xi_t_cosieve_witness(&p).unwrap();
    assert!(w.verify());
    assert_eq!(sp.sub.num_objects(), 3);
    let amb = w.ambient();
    let full = sq.chain_index(&[0, 1, 2]).unwrap();
    let r = amb.r_obj[full].unwrap();
    assert_eq!(sq.chains[r], vec![1, 2]);
    assert!(xi_t_cosieve_witness(&sub(&q, &[0])).is_err());
}
