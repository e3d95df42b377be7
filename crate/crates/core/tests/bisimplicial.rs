use std::sync::Arc;

use num_bigint::BigInt;
use relcat::bisimplicial::*;
use relcat::homology::{smith, SparseMatrix};
use relcat::relcat::{arrow_category, product, Flavor, RelCategory};
use relcat::subdiv::{xi, xi_i};

fn cat(k: usize, flavor: Flavor) -> Arc<RelCategory> {
    Arc::new(arrow_category(k, flavor))
}

fn point() -> Arc<RelCategory> {
    Arc::new(RelCategory::terminal())
}

fn budget() -> NerveBudget {
    NerveBudget::default()
}

/// Monotone maps from the product order `[a] × [b]` into `[n]`, by brute force.
fn monotone_grid_maps(a: usize, b: usize, n: usize) -> usize {
    let cells: Vec<(usize, usize)> = (0..=a).flat_map(|i| (0..=b).map(move |j| (i, j))).collect();
    let total = (n + 1).pow(cells.len() as u32);
    (0..total)
        .filter(|&code| {
            let val = |k: usize| (code / (n + 1).pow(k as u32)) % (n + 1);
            cells.iter().enumerate().all(|(k, &(i, j))| {
                cells.iter().enumerate().all(|(l, &(i2, j2))| !(i <= i2 && j <= j2) || val(k) <= val(l))
            })
        })
        .count()
}

#[test]
fn order_map_counts() {
    assert_eq!(order_maps(1, 1), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    for m in 0..4 {
        for n in 0..4 {
            // binomial (m + n + 1 choose m + 1)
            let mut b = 1usize;
            for k in 0..=m {
                b = b * (n + 1 + k) / (k + 1);
            }
            assert_eq!(order_maps(m, n).len(), b);
        }
    }
    assert_eq!(epi_mono(&[0, 0, 2, 2, 3]), (vec![0, 0, 1, 1, 2], vec![0, 2, 3]));
}

#[test]
fn standard_bisimplices() {
    let d = delta(0, 0, (2, 2));
    assert!(d.set.counts.iter().flatten().all(|&n| n == 1));
    let d = delta(1, 0, (2, 2));
    assert_eq!(d.set.counts[1][0], 3);
    assert!(d.set.violations().is_empty());
    let nd: Vec<usize> = (0..3).map(|c| usize::from(d.set.nondegenerate(1, 0)[c])).collect();
    assert_eq!(nd.iter().sum::<usize>(), 1);
    let d = delta(1, 1, (2, 2));
    assert!(d.set.violations().is_empty());
    assert_eq!(d.set.nondegenerate(1, 1).iter().filter(|&&b| b).count(), 1);
}

#[test]
fn boundaries_of_bisimplices() {
    let (b, incl) = boundary_delta(0, 0, (2, 2));
    assert_eq!(b.total_cells(), 0);
    assert!(incl.is_injective());
    let (b, incl) = boundary_delta(1, 0, (2, 2));
    assert!(b.violations().is_empty());
    assert_eq!(b.counts[0][0], 2);
    // two vertices: every cell is a degeneracy of one of them
    assert_eq!(b.counts[2][1], 2);
    assert!(incl.commutes(&b, &delta(1, 0, (2, 2)).set));
    let (b, incl) = boundary_delta(1, 1, (2, 2));
    assert!(incl.commutes(&b, &delta(1, 1, (2, 2)).set));
    assert!(b.nondegenerate(1, 1).iter().all(|&x| !x));
}

#[test]
fn nerve_counts() {
    let n = nerve_n(&point(), (2, 2), &budget()).unwrap();
    assert!(n.set.counts.iter().flatten().all(|&k| k == 1));
    let n = nerve_n(&cat(1, Flavor::Minimal), (2, 2), &budget()).unwrap();
    assert_eq!(n.set.counts[1][0], 3);
    assert_eq!(n.set.counts[0][1], 2);
    assert!(n.set.violations().is_empty());
    let hat = cat(1, Flavor::Maximal);
    let n = nerve_n(&hat, (2, 2), &budget()).unwrap();
    for p in 0..=2 {
        for q in 0..=2 {
            assert_eq!(n.set.counts[p][q], monotone_grid_maps(p, q, 1));
        }
    }
    assert_eq!(n.set.diagonal().unwrap().counts[1], 6);
    // products are preserved levelwise
    let two = cat(2, Flavor::Minimal);
    let prod = Arc::new(product(&two, &hat));
    let np = nerve_n(&prod, (1, 1), &budget()).unwrap();
    let n2 = nerve_n(&two, (1, 1), &budget()).unwrap();
    let nh = nerve_n(&hat, (1, 1), &budget()).unwrap();
    for p in 0..=1 {
        for q in 0..=1 {
            assert_eq!(np.set.counts[p][q], n2.set.counts[p][q] * nh.set.counts[p][q]);
        }
    }
}

#[test]
fn subdivided_nerve_counts() {
    let n = nerve_n_xi(&point(), (1, 1), &budget()).unwrap();
    assert!(n.set.counts.iter().flatten().all(|&k| k == 1));
    let n = nerve_n_xi(&cat(1, Flavor::Maximal), (1, 0), &budget()).unwrap();
    assert_eq!(n.set.counts[0][0], 2);
    let check = cat(1, Flavor::Minimal);
    let n = nerve_n_xi(&check, (1, 1), &budget()).unwrap();
    let x1 = xi(&check).unwrap();
    assert_eq!(n.set.counts[1][0], relcat::enumerate::count_functors(x1.sub(), &check, None).unwrap());
    assert!(n.set.violations().is_empty());
    assert_eq!(subdivided_size(1, 1), 45);
    assert_eq!(subdivided_size(0, 3), 149);
    assert_eq!(subdivided_size(1, 2), 397);
    assert!(nerve_n_xi(&check, (1, 2), &budget()).is_err());
}

#[test]
fn comparison_map_commutes() {
    for x in [point(), cat(1, Flavor::Minimal), cat(2, Flavor::Minimal)] {
        let (n, nx, f) = pi_star_for(&x, (1, 1), &budget()).unwrap();
        assert!(f.commutes(&n.set, &nx.set));
    }
}

#[test]
fn classical_nerve_is_row_zero() {
    let hat = cat(1, Flavor::Maximal);
    let c = classical_nerve(&hat, 3).unwrap();
    assert_eq!(c.counts[0], 2);
    assert_eq!(c.counts[1], 3);
    assert_eq!(c.nondegenerate_counts(), vec![2, 1, 0, 0]);
    let row = nerve_n(&hat, (0, 3), &budget()).unwrap().set.row(0).unwrap();
    assert_eq!(row, c);
    assert!(classical_nerve(&cat(1, Flavor::Minimal), 2).is_err());
    assert_eq!(classical_nerve(&point(), 2).unwrap(), TruncSSet::point(2));
}

#[test]
fn rows_and_diagonals() {
    let d = delta(0, 0, (2, 2));
    assert_eq!(d.set.row(0).unwrap(), TruncSSet::point(2));
    assert_eq!(d.set.diagonal().unwrap(), TruncSSet::point(2));
    assert!(d.set.row(3).is_err());
    assert!(delta(0, 0, (1, 2)).set.diagonal().is_err());
    let n = nerve_n(&cat(2, Flavor::Minimal), (2, 2), &budget()).unwrap();
    assert!(n.set.diagonal().unwrap().violations().is_empty());
}

#[test]
fn homology_of_small_complexes() {
    let h = TruncSSet::point(3).homology(2).unwrap();
    assert_eq!(h.groups[0].rank, 1);
    assert!(h.groups[1..].iter().all(|g| g.is_zero()));
    assert!(TruncSSet::point(2).homology(2).is_err());

    // the crown 0, 1 < 2, 3 has a circle as its nerve
    let crown = Arc::new(
        RelCategory::thin((0..4).map(|i| i.to_string()).collect(), &[(0, 2, true), (0, 3, true), (1, 2, true), (1, 3, true)])
            .unwrap(),
    );
    let circle = classical_nerve(&crown, 3).unwrap();
    assert!(circle.violations().is_empty());
    let h = circle.homology(2).unwrap();
    assert_eq!((h.groups[0].rank, h.groups[1].rank, h.groups[2].rank), (1, 1, 0));

    let n = nerve_n(&cat(1, Flavor::Maximal), (3, 3), &budget()).unwrap();
    let h = n.set.diagonal().unwrap().homology(2).unwrap();
    assert_eq!(h.groups[0].rank, 1);
    assert!(h.groups[1].is_zero() && h.groups[2].is_zero());
}

#[test]
fn smith_forms() {
    let mut m = SparseMatrix::zero(2, 2);
    m.add(0, 0, 2);
    m.add(1, 1, 3);
    let s = smith(&m);
    assert_eq!(s.rank, 2);
    assert_eq!(s.torsion, vec![BigInt::from(6)]);
    let mut m = SparseMatrix::zero(2, 2);
    m.add(0, 0, 2);
    m.add(1, 1, 4);
    assert_eq!(smith(&m).torsion, vec![BigInt::from(2), BigInt::from(4)]);
    let mut m = SparseMatrix::zero(3, 3);
    for (r, c, v) in [(0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 2, 1), (2, 0, 1), (2, 2, 1)] {
        m.add(r, c, v);
    }
    let s = smith(&m);
    assert_eq!((s.rank, s.torsion.clone()), (3, vec![BigInt::from(2)]));
}

#[test]
fn involution_matches_opposites() {
    for x in [cat(1, Flavor::Minimal), cat(2, Flavor::Minimal), cat(1, Flavor::Maximal)] {
        let (nop, _, inv, f) = opposite_comparison(&x, (2, 2), &budget()).unwrap();
        assert!(f.commutes(&nop.set, &inv));
        assert!(f.is_isomorphism(&inv));
        assert_eq!(inv.involution(), nerve_n(&x, (2, 2), &budget()).unwrap().set);
    }
}

#[test]
fn row_certificates() {
    let x = xi_i(&cat(1, Flavor::Minimal)).unwrap().sub;
    let (n, nx, f) = pi_star_for(&x, (0, 2), &budget()).unwrap();
    let cert = row_certificate(&f, &n.set, &nx.set, 0, 1).unwrap();
    assert!(cert.iso, "{:?}", cert);
}
