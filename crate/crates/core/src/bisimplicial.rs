//! Truncated simplicial and bisimplicial sets, the nerves `N` and `N_ξ`,
//! the comparison `π*`, rows, diagonals and homology certificates.
//!
//! Every cell up to the bounds is stored, degenerate or not, together with
//! complete face and degeneracy tables.

use std::collections::HashMap;
use std::sync::Arc;

use crate::enumerate::functor_maps;
use crate::error::{Error, Result};
use crate::homology::{complex_homology, iso_certificate, ChainComplex, ChainMap, HomologySummary, IsoCertificate, SparseMatrix};
use crate::relcat::{arrow_category, product, product_functor, Flavor, RelCategory, RelFunctor};
use crate::subdiv::{subdivide_map_two_fold, xi, TwoFold};

/// A monotone map `[m] -> [n]`, listed by its values.
pub type OrderMap = Vec<usize>;

/// All monotone maps `[m] -> [n]` in lexicographic order.
pub fn order_maps(m: usize, n: usize) -> Vec<OrderMap> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m + 1);
    fn go(m: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<OrderMap>) {
        if cur.len() == m + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(m, n, v, cur, out);
            cur.pop();
        }
    }
    go(m, n, 0, &mut cur, &mut out);
    out
}

/// `δ_i: [n-1] -> [n]`, skipping `i`.
pub fn coface(n: usize, i: usize) -> OrderMap {
    (0..n).map(|k| if k < i { k } else { k + 1 }).collect()
}

/// `σ_i: [n+1] -> [n]`, hitting `i` twice.
pub fn codegeneracy(n: usize, i: usize) -> OrderMap {
    (0..n + 2).map(|k| if k <= i { k } else { k - 1 }).collect()
}

/// `g ∘ f`.
pub fn compose_maps(g: &[usize], f: &[usize]) -> OrderMap {
    f.iter().map(|&x| g[x]).collect()
}

pub fn identity_map(n: usize) -> OrderMap {
    (0..=n).collect()
}

/// Factors `f` as a surjection followed by an injection.
pub fn epi_mono(f: &[usize]) -> (OrderMap, OrderMap) {
    let mut mono: OrderMap = Vec::new();
    let mut epi = Vec::with_capacity(f.len());
    for &v in f {
        if mono.last() != Some(&v) {
            mono.push(v);
        }
        epi.push(mono.len() - 1);
    }
    (epi, mono)
}

fn is_surjective(f: &[usize], n: usize) -> bool {
    f.first() == Some(&0) && f.last() == Some(&n) && f.windows(2).all(|w| w[1] <= w[0] + 1)
}

/// A simplicial set recorded through degree `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSSet {
    pub bound: usize,
    pub counts: Vec<usize>,
    /// `faces[k][i][c]` for `k >= 1`.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[k][i][c]` lands in degree `k + 1`, for `k < bound`.
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

impl TruncSSet {
    pub fn point(bound: usize) -> Self {
        TruncSSet {
            bound,
            counts: vec![1; bound + 1],
            faces: (0..=bound).map(|k| if k == 0 { Vec::new() } else { vec![vec![0]; k + 1] }).collect(),
            degeneracies: (0..bound).map(|k| vec![vec![0]; k + 1]).collect(),
        }
    }

    /// Which `k`-cells are not degeneracies.
    pub fn nondegenerate(&self, k: usize) -> Vec<bool> {
        let mut nd = vec![true; self.counts[k]];
        if k > 0 {
            for s in &self.degeneracies[k - 1] {
                for &c in s {
                    nd[c] = false;
                }
            }
        }
        nd
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.bound).map(|k| self.nondegenerate(k).iter().filter(|&&b| b).count()).collect()
    }

    /// Violated simplicial identities, described.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let d = |k: usize, i: usize, c: usize| self.faces[k][i][c];
        let s = |k: usize, i: usize, c: usize| self.degeneracies[k][i][c];
        for k in 0..=self.bound {
            for c in 0..self.counts[k] {
                if k >= 2 {
                    for j in 0..=k {
                        for i in 0..j {
                            if d(k - 1, i, d(k, j, c)) != d(k - 1, j - 1, d(k, i, c)) {
                                out.push(format!("d{i} d{j} != d{} d{i} on cell {c} of degree {k}", j - 1));
                            }
                        }
                    }
                }
                if k + 2 <= self.bound {
                    for j in 0..=k {
                        for i in 0..=j {
                            if s(k + 1, i, s(k, j, c)) != s(k + 1, j + 1, s(k, i, c)) {
                                out.push(format!("s{i} s{j} != s{} s{i} on cell {c} of degree {k}", j + 1));
                            }
                        }
                    }
                }
                if k < self.bound {
                    for j in 0..=k {
                        let sc = s(k, j, c);
                        for i in 0..=k + 1 {
                            let lhs = d(k + 1, i, sc);
                            let rhs = if i == j || i == j + 1 {
                                Some(c)
                            } else if k == 0 {
                                None
                            } else if i < j {
                                Some(s(k - 1, j - 1, d(k, i, c)))
                            } else {
                                Some(s(k - 1, j, d(k, i - 1, c)))
                            };
                            if rhs.is_some_and(|r| r != lhs) {
                                out.push(format!("d{i} s{j} mismatch on cell {c} of degree {k}"));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The normalized chain complex on nondegenerate cells, with the basis
    /// position of each cell.
    pub fn normalized_chains(&self) -> (ChainComplex, Vec<Vec<Option<usize>>>) {
        let mut pos = Vec::new();
        let mut dims = Vec::new();
        for k in 0..=self.bound {
            let nd = self.nondegenerate(k);
            let mut p = vec![None; nd.len()];
            let mut n = 0;
            for (c, &b) in nd.iter().enumerate() {
                if b {
                    p[c] = Some(n);
                    n += 1;
                }
            }
            pos.push(p);
            dims.push(n);
        }
        let mut higher = Vec::new();
        for k in 1..=self.bound {
            let mut m = SparseMatrix::zero(dims[k - 1], dims[k]);
            for c in 0..self.counts[k] {
                let Some(col) = pos[k][c] else { continue };
                for i in 0..=k {
                    if let Some(row) = pos[k - 1][self.faces[k][i][c]] {
                        m.add(row, col, if i % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            higher.push(m);
        }
        (ChainComplex::new(dims, higher), pos)
    }

    /// Integral homology in degrees `0..=up_to`; needs `up_to < bound`.
    pub fn homology(&self, up_to: usize) -> Result<HomologySummary> {
        if up_to >= self.bound {
            return Err(Error::Precondition(format!(
                "homology through degree {up_to} needs cells of degree {}, truncation is {}",
                up_to + 1,
                self.bound
            )));
        }
        let (c, _) = self.normalized_chains();
        Ok(complex_homology(&c, up_to).expect("bound checked"))
    }

    pub fn truncate(&self, bound: usize) -> TruncSSet {
        let b = bound.min(self.bound);
        TruncSSet {
            bound: b,
            counts: self.counts[..=b].to_vec(),
            faces: self.faces[..=b].to_vec(),
            degeneracies: self.degeneracies[..b].to_vec(),
        }
    }
}

/// Builds a truncated simplicial set from counts and structure maps.
pub fn build_sset(
    bound: usize,
    counts: Vec<usize>,
    face: impl Fn(usize, usize, usize) -> usize,
    degeneracy: impl Fn(usize, usize, usize) -> usize,
) -> TruncSSet {
    let faces = (0..=bound)
        .map(|k| if k == 0 { Vec::new() } else { (0..=k).map(|i| (0..counts[k]).map(|c| face(k, i, c)).collect()).collect() })
        .collect();
    let degeneracies =
        (0..bound).map(|k| (0..=k).map(|i| (0..counts[k]).map(|c| degeneracy(k, i, c)).collect()).collect()).collect();
    TruncSSet { bound, counts, faces, degeneracies }
}

/// A map of truncated simplicial sets, degreewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMap {
    pub maps: Vec<Vec<usize>>,
}

impl SMap {
    pub fn commutes(&self, dom: &TruncSSet, cod: &TruncSSet) -> bool {
        let b = dom.bound.min(cod.bound).min(self.maps.len().saturating_sub(1));
        for k in 0..=b {
            if self.maps[k].len() != dom.counts[k] || self.maps[k].iter().any(|&v| v >= cod.counts[k]) {
                return false;
            }
            for c in 0..dom.counts[k] {
                let fc = self.maps[k][c];
                if k >= 1 && (0..=k).any(|i| self.maps[k - 1][dom.faces[k][i][c]] != cod.faces[k][i][fc]) {
                    return false;
                }
                if k < b && (0..=k).any(|i| self.maps[k + 1][dom.degeneracies[k][i][c]] != cod.degeneracies[k][i][fc]) {
                    return false;
                }
            }
        }
        true
    }

    /// The induced map of normalized chains.
    pub fn chain_map(&self, dom: &TruncSSet, cod: &TruncSSet) -> ChainMap {
        let (_, dpos) = dom.normalized_chains();
        let (cc, cpos) = cod.normalized_chains();
        let (dc, _) = dom.normalized_chains();
        let b = dom.bound.min(cod.bound);
        let degrees = (0..=b)
            .map(|k| {
                let mut m = SparseMatrix::zero(cc.dims[k], dc.dims[k]);
                for c in 0..dom.counts[k] {
                    if let (Some(col), Some(row)) = (dpos[k][c], cpos[k][self.maps[k][c]]) {
                        m.add(row, col, 1);
                    }
                }
                m
            })
            .collect();
        ChainMap { degrees }
    }

    /// Whether the map is an isomorphism on `H_0 .. H_up_to`, by the mapping cone.
    pub fn homology_certificate(&self, dom: &TruncSSet, cod: &TruncSSet, up_to: usize) -> Result<IsoCertificate> {
        if up_to >= dom.bound.min(cod.bound) {
            return Err(Error::Precondition(format!("a certificate through H{up_to} needs cells of degree {}", up_to + 1)));
        }
        let (dc, _) = dom.truncate(up_to + 1).normalized_chains();
        let (cc, _) = cod.truncate(up_to + 1).normalized_chains();
        let f = SMap { maps: self.maps[..=up_to + 1].to_vec() }.chain_map(&dom.truncate(up_to + 1), &cod.truncate(up_to + 1));
        Ok(iso_certificate(&dc, &cc, &f, up_to).expect("bounds checked"))
    }
}

/// A bisimplicial set recorded through bidegree `bounds`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncBiSSet {
    pub bounds: (usize, usize),
    pub counts: Vec<Vec<usize>>,
    /// `hfaces[p][q][i][c]` lands in `(p - 1, q)`.
    pub hfaces: Vec<Vec<Vec<Vec<usize>>>>,
    pub vfaces: Vec<Vec<Vec<Vec<usize>>>>,
    /// `hdegs[p][q][i][c]` lands in `(p + 1, q)`, for `p < P`.
    pub hdegs: Vec<Vec<Vec<Vec<usize>>>>,
    pub vdegs: Vec<Vec<Vec<Vec<usize>>>>,
}

/// Structure maps of a bisimplicial set: `(p, q, index, cell) -> cell`.
pub struct Structure<'a> {
    pub hface: &'a dyn Fn(usize, usize, usize, usize) -> usize,
    pub vface: &'a dyn Fn(usize, usize, usize, usize) -> usize,
    pub hdeg: &'a dyn Fn(usize, usize, usize, usize) -> usize,
    pub vdeg: &'a dyn Fn(usize, usize, usize, usize) -> usize,
}

impl TruncBiSSet {
    pub fn build(bounds: (usize, usize), counts: Vec<Vec<usize>>, s: &Structure<'_>) -> Self {
        let (pm, qm) = bounds;
        let grid = |f: &dyn Fn(usize, usize) -> Vec<Vec<usize>>| -> Vec<Vec<Vec<Vec<usize>>>> {
            (0..=pm).map(|p| (0..=qm).map(|q| f(p, q)).collect()).collect()
        };
        let hfaces = grid(&|p, q| {
            if p == 0 {
                Vec::new()
            } else {
                (0..=p).map(|i| (0..counts[p][q]).map(|c| (s.hface)(p, q, i, c)).collect()).collect()
            }
        });
        let vfaces = grid(&|p, q| {
            if q == 0 {
                Vec::new()
            } else {
                (0..=q).map(|i| (0..counts[p][q]).map(|c| (s.vface)(p, q, i, c)).collect()).collect()
            }
        });
        let hdegs = grid(&|p, q| {
            if p >= pm {
                Vec::new()
            } else {
                (0..=p).map(|i| (0..counts[p][q]).map(|c| (s.hdeg)(p, q, i, c)).collect()).collect()
            }
        });
        let vdegs = grid(&|p, q| {
            if q >= qm {
                Vec::new()
            } else {
                (0..=q).map(|i| (0..counts[p][q]).map(|c| (s.vdeg)(p, q, i, c)).collect()).collect()
            }
        });
        TruncBiSSet { bounds, counts, hfaces, vfaces, hdegs, vdegs }
    }

    pub fn point(bounds: (usize, usize)) -> Self {
        let counts = vec![vec![1; bounds.1 + 1]; bounds.0 + 1];
        let z = |_: usize, _: usize, _: usize, _: usize| 0;
        TruncBiSSet::build(bounds, counts, &Structure { hface: &z, vface: &z, hdeg: &z, vdeg: &z })
    }

    pub fn empty(bounds: (usize, usize)) -> Self {
        let counts = vec![vec![0; bounds.1 + 1]; bounds.0 + 1];
        let z = |_: usize, _: usize, _: usize, _: usize| 0;
        TruncBiSSet::build(bounds, counts, &Structure { hface: &z, vface: &z, hdeg: &z, vdeg: &z })
    }

    pub fn total_cells(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// Cells that are degenerate in neither direction.
    pub fn nondegenerate(&self, p: usize, q: usize) -> Vec<bool> {
        let mut nd = vec![true; self.counts[p][q]];
        if p > 0 {
            for s in &self.hdegs[p - 1][q] {
                for &c in s {
                    nd[c] = false;
                }
            }
        }
        if q > 0 {
            for s in &self.vdegs[p][q - 1] {
                for &c in s {
                    nd[c] = false;
                }
            }
        }
        nd
    }

    /// The simplicial set `T(p, -)`.
    pub fn row(&self, p: usize) -> Result<TruncSSet> {
        if p > self.bounds.0 {
            return Err(Error::Shape(format!("row {p} is beyond the truncation {}", self.bounds.0)));
        }
        Ok(TruncSSet {
            bound: self.bounds.1,
            counts: self.counts[p].clone(),
            faces: self.vfaces[p].clone(),
            degeneracies: self.vdegs[p][..self.bounds.1].to_vec(),
        })
    }

    /// The simplicial set `T(-, q)`.
    pub fn column(&self, q: usize) -> Result<TruncSSet> {
        if q > self.bounds.1 {
            return Err(Error::Shape(format!("column {q} is beyond the truncation {}", self.bounds.1)));
        }
        Ok(TruncSSet {
            bound: self.bounds.0,
            counts: (0..=self.bounds.0).map(|p| self.counts[p][q]).collect(),
            faces: (0..=self.bounds.0).map(|p| self.hfaces[p][q].clone()).collect(),
            degeneracies: (0..self.bounds.0).map(|p| self.hdegs[p][q].clone()).collect(),
        })
    }

    /// The diagonal `k -> T(k, k)`.
    pub fn diagonal(&self) -> Result<TruncSSet> {
        let (pm, qm) = self.bounds;
        if pm != qm {
            return Err(Error::Shape(format!("the diagonal needs square bounds, got ({pm},{qm})")));
        }
        Ok(build_sset(
            pm,
            (0..=pm).map(|k| self.counts[k][k]).collect(),
            |k, i, c| self.hfaces[k][k - 1][i][self.vfaces[k][k][i][c]],
            |k, i, c| self.hdegs[k][k + 1][i][self.vdegs[k][k][i][c]],
        ))
    }

    /// Precomposition with the order reversal in both directions.
    pub fn involution(&self) -> Self {
        let h = |p: usize, q: usize, i: usize, c: usize| self.hfaces[p][q][p - i][c];
        let v = |p: usize, q: usize, i: usize, c: usize| self.vfaces[p][q][q - i][c];
        let hd = |p: usize, q: usize, i: usize, c: usize| self.hdegs[p][q][p - i][c];
        let vd = |p: usize, q: usize, i: usize, c: usize| self.vdegs[p][q][q - i][c];
        TruncBiSSet::build(self.bounds, self.counts.clone(), &Structure { hface: &h, vface: &v, hdeg: &hd, vdeg: &vd })
    }

    /// Violated bisimplicial identities, described.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (pm, qm) = self.bounds;
        for p in 0..=pm {
            for v in self.row(p).map(|r| r.violations()).unwrap_or_default() {
                out.push(format!("row {p}: {v}"));
            }
        }
        for q in 0..=qm {
            for v in self.column(q).map(|r| r.violations()).unwrap_or_default() {
                out.push(format!("column {q}: {v}"));
            }
        }
        for p in 0..=pm {
            for q in 0..=qm {
                for c in 0..self.counts[p][q] {
                    for i in 0..=p {
                        for j in 0..=q {
                            if p > 0 && q > 0 {
                                let a = self.hfaces[p][q - 1][i][self.vfaces[p][q][j][c]];
                                let b = self.vfaces[p - 1][q][j][self.hfaces[p][q][i][c]];
                                if a != b {
                                    out.push(format!("horizontal and vertical faces disagree at ({p},{q}) cell {c}"));
                                }
                            }
                            if p > 0 && q < qm {
                                let a = self.hfaces[p][q + 1][i][self.vdegs[p][q][j][c]];
                                let b = self.vdegs[p - 1][q][j][self.hfaces[p][q][i][c]];
                                if a != b {
                                    out.push(format!("face and degeneracy disagree at ({p},{q}) cell {c}"));
                                }
                            }
                            if q > 0 && p < pm {
                                let a = self.vfaces[p + 1][q][j][self.hdegs[p][q][i][c]];
                                let b = self.hdegs[p][q - 1][i][self.vfaces[p][q][j][c]];
                                if a != b {
                                    out.push(format!("degeneracy and face disagree at ({p},{q}) cell {c}"));
                                }
                            }
                            if p < pm && q < qm {
                                let a = self.hdegs[p][q + 1][i][self.vdegs[p][q][j][c]];
                                let b = self.vdegs[p + 1][q][j][self.hdegs[p][q][i][c]];
                                if a != b {
                                    out.push(format!("degeneracies disagree at ({p},{q}) cell {c}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// A map of truncated bisimplicial sets, levelwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSMap {
    pub maps: Vec<Vec<Vec<usize>>>,
}

impl BiSMap {
    pub fn identity(t: &TruncBiSSet) -> Self {
        BiSMap { maps: t.counts.iter().map(|row| row.iter().map(|&n| (0..n).collect()).collect()).collect() }
    }

    /// Whether the levels are well typed and commute with every structure map.
    pub fn commutes(&self, dom: &TruncBiSSet, cod: &TruncBiSSet) -> bool {
        if dom.bounds != cod.bounds {
            return false;
        }
        let (pm, qm) = dom.bounds;
        for p in 0..=pm {
            for q in 0..=qm {
                let f = &self.maps[p][q];
                if f.len() != dom.counts[p][q] || f.iter().any(|&v| v >= cod.counts[p][q]) {
                    return false;
                }
            }
        }
        for p in 0..=pm {
            for q in 0..=qm {
                for c in 0..dom.counts[p][q] {
                    let fc = self.maps[p][q][c];
                    if p > 0 && (0..=p).any(|i| self.maps[p - 1][q][dom.hfaces[p][q][i][c]] != cod.hfaces[p][q][i][fc]) {
                        return false;
                    }
                    if q > 0 && (0..=q).any(|i| self.maps[p][q - 1][dom.vfaces[p][q][i][c]] != cod.vfaces[p][q][i][fc]) {
                        return false;
                    }
                    if p < pm && (0..=p).any(|i| self.maps[p + 1][q][dom.hdegs[p][q][i][c]] != cod.hdegs[p][q][i][fc]) {
                        return false;
                    }
                    if q < qm && (0..=q).any(|i| self.maps[p][q + 1][dom.vdegs[p][q][i][c]] != cod.vdegs[p][q][i][fc]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().flatten().all(|f| {
            let mut seen = std::collections::HashSet::new();
            f.iter().all(|v| seen.insert(*v))
        })
    }

    pub fn is_isomorphism(&self, cod: &TruncBiSSet) -> bool {
        self.is_injective()
            && self.maps.iter().enumerate().all(|(p, row)| row.iter().enumerate().all(|(q, f)| f.len() == cod.counts[p][q]))
    }

    pub fn row(&self, p: usize) -> SMap {
        SMap { maps: self.maps[p].clone() }
    }

    pub fn diagonal(&self) -> SMap {
        SMap { maps: (0..self.maps.len().min(self.maps[0].len())).map(|k| self.maps[k][k].clone()).collect() }
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &BiSMap) -> BiSMap {
        BiSMap {
            maps: f
                .maps
                .iter()
                .enumerate()
                .map(|(p, row)| row.iter().enumerate().map(|(q, m)| m.iter().map(|&c| self.maps[p][q][c]).collect()).collect())
                .collect(),
        }
    }
}

/// Indexing of all monotone maps into `[n]`, by source dimension.
#[derive(Clone, Debug)]
struct OrderMapIndex {
    lists: Vec<Vec<OrderMap>>,
    index: Vec<HashMap<OrderMap, usize>>,
}

impl OrderMapIndex {
    fn new(n: usize, top: usize) -> Self {
        let lists: Vec<Vec<OrderMap>> = (0..=top).map(|m| order_maps(m, n)).collect();
        let index = lists.iter().map(|l| l.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect()).collect();
        OrderMapIndex { lists, index }
    }
}

/// The standard bisimplex `Δ[p, q]`, cells indexed by pairs of order maps.
#[derive(Clone, Debug)]
pub struct Representable {
    pub p: usize,
    pub q: usize,
    pub set: TruncBiSSet,
    h: OrderMapIndex,
    v: OrderMapIndex,
}

impl Representable {
    /// The pair `(α: [i] -> [p], β: [j] -> [q])` of a cell.
    pub fn cell(&self, i: usize, j: usize, c: usize) -> (&OrderMap, &OrderMap) {
        let nv = self.v.lists[j].len();
        (&self.h.lists[i][c / nv], &self.v.lists[j][c % nv])
    }

    pub fn index(&self, alpha: &[usize], beta: &[usize]) -> Option<usize> {
        let (i, j) = (alpha.len() - 1, beta.len() - 1);
        let a = *self.h.index.get(i)?.get(alpha)?;
        let b = *self.v.index.get(j)?.get(beta)?;
        Some(a * self.v.lists[j].len() + b)
    }

    /// Cells with a non-surjective component.
    pub fn in_boundary(&self, i: usize, j: usize, c: usize) -> bool {
        let (a, b) = self.cell(i, j, c);
        !is_surjective(a, self.p) || !is_surjective(b, self.q)
    }
}

/// `Δ[p, q]` truncated at `bounds`.
pub fn delta(p: usize, q: usize, bounds: (usize, usize)) -> Representable {
    let h = OrderMapIndex::new(p, bounds.0 + 1);
    let v = OrderMapIndex::new(q, bounds.1 + 1);
    let counts = (0..=bounds.0).map(|i| (0..=bounds.1).map(|j| h.lists[i].len() * v.lists[j].len()).collect()).collect();
    let hv = (&h, &v);
    let act = |i: usize, j: usize, c: usize, th: Option<OrderMap>, tv: Option<OrderMap>| -> usize {
        let (h, v) = hv;
        let nv = v.lists[j].len();
        let (a, b) = (&h.lists[i][c / nv], &v.lists[j][c % nv]);
        let a2 = th.map_or_else(|| a.clone(), |t| compose_maps(a, &t));
        let b2 = tv.map_or_else(|| b.clone(), |t| compose_maps(b, &t));
        let (i2, j2) = (a2.len() - 1, b2.len() - 1);
        h.index[i2][&a2] * v.lists[j2].len() + v.index[j2][&b2]
    };
    let hf = |i: usize, j: usize, k: usize, c: usize| act(i, j, c, Some(coface(i, k)), None);
    let vf = |i: usize, j: usize, k: usize, c: usize| act(i, j, c, None, Some(coface(j, k)));
    let hd = |i: usize, j: usize, k: usize, c: usize| act(i, j, c, Some(codegeneracy(i, k)), None);
    let vd = |i: usize, j: usize, k: usize, c: usize| act(i, j, c, None, Some(codegeneracy(j, k)));
    let set = TruncBiSSet::build(bounds, counts, &Structure { hface: &hf, vface: &vf, hdeg: &hd, vdeg: &vd });
    Representable { p, q, set, h, v }
}

/// The sub-bisimplicial set of cells satisfying `keep`, with its inclusion.
pub fn sub_object(t: &TruncBiSSet, keep: impl Fn(usize, usize, usize) -> bool) -> Result<(TruncBiSSet, BiSMap)> {
    let (pm, qm) = t.bounds;
    let mut kept: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); qm + 1]; pm + 1];
    let mut pos: Vec<Vec<Vec<Option<usize>>>> = vec![vec![Vec::new(); qm + 1]; pm + 1];
    for p in 0..=pm {
        for q in 0..=qm {
            pos[p][q] = vec![None; t.counts[p][q]];
            for c in 0..t.counts[p][q] {
                if keep(p, q, c) {
                    pos[p][q][c] = Some(kept[p][q].len());
                    kept[p][q].push(c);
                }
            }
        }
    }
    let closed = (0..=pm).all(|p| {
        (0..=qm).all(|q| {
            kept[p][q].iter().all(|&c| {
                (p == 0 || (0..=p).all(|i| pos[p - 1][q][t.hfaces[p][q][i][c]].is_some()))
                    && (q == 0 || (0..=q).all(|i| pos[p][q - 1][t.vfaces[p][q][i][c]].is_some()))
                    && (p == pm || (0..=p).all(|i| pos[p + 1][q][t.hdegs[p][q][i][c]].is_some()))
                    && (q == qm || (0..=q).all(|i| pos[p][q + 1][t.vdegs[p][q][i][c]].is_some()))
            })
        })
    });
    if !closed {
        return Err(Error::Invalid("the selected cells are not closed under faces and degeneracies".into()));
    }
    let counts = kept.iter().map(|r| r.iter().map(Vec::len).collect()).collect();
    let (kp, pp) = (&kept, &pos);
    let hf = |p: usize, q: usize, i: usize, c: usize| pp[p - 1][q][t.hfaces[p][q][i][kp[p][q][c]]].expect("closed");
    let vf = |p: usize, q: usize, i: usize, c: usize| pp[p][q - 1][t.vfaces[p][q][i][kp[p][q][c]]].expect("closed");
    let hd = |p: usize, q: usize, i: usize, c: usize| pp[p + 1][q][t.hdegs[p][q][i][kp[p][q][c]]].expect("closed");
    let vd = |p: usize, q: usize, i: usize, c: usize| pp[p][q + 1][t.vdegs[p][q][i][kp[p][q][c]]].expect("closed");
    let set = TruncBiSSet::build(t.bounds, counts, &Structure { hface: &hf, vface: &vf, hdeg: &hd, vdeg: &vd });
    Ok((set, BiSMap { maps: kept }))
}

/// `∂Δ[p, q]`: the cells of `Δ[p, q]` missing the top cell, with the inclusion.
pub fn boundary_delta(p: usize, q: usize, bounds: (usize, usize)) -> (TruncBiSSet, BiSMap) {
    let d = delta(p, q, bounds);
    sub_object(&d.set, |i, j, c| d.in_boundary(i, j, c)).expect("the boundary is a subobject")
}

/// Limits on nerve computations.
#[derive(Clone, Copy, Debug)]
pub struct NerveBudget {
    /// Largest shape category (objects) that may be enumerated from.
    pub shape_objects: usize,
    /// Largest number of cells in one bidegree.
    pub cells: usize,
}

impl Default for NerveBudget {
    fn default() -> Self {
        NerveBudget { shape_objects: 200, cells: 500_000 }
    }
}

/// Which categories index the cells of a nerve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    /// `p̌ × q̂`.
    Plain,
    /// `ξ(p̌ × q̂)`.
    Subdivided,
}

/// The shapes `p̌ × q̂` (and their two-fold subdivisions) through some bounds.
#[derive(Clone, Debug)]
pub struct Shapes {
    pub kind: ShapeKind,
    pub bounds: (usize, usize),
    pub checks: Vec<Arc<RelCategory>>,
    pub hats: Vec<Arc<RelCategory>>,
    pub products: Vec<Vec<Arc<RelCategory>>>,
    pub subdivided: Vec<Vec<Option<TwoFold>>>,
}

impl Shapes {
    pub fn new(kind: ShapeKind, bounds: (usize, usize), budget: &NerveBudget) -> Result<Self> {
        let (pm, qm) = bounds;
        let top = pm.max(qm) + 1;
        let checks: Vec<_> = (0..=top).map(|k| Arc::new(arrow_category(k, Flavor::Minimal))).collect();
        let hats: Vec<_> = (0..=top).map(|k| Arc::new(arrow_category(k, Flavor::Maximal))).collect();
        let products: Vec<Vec<_>> =
            (0..=pm + 1).map(|p| (0..=qm + 1).map(|q| Arc::new(product(&checks[p], &hats[q]))).collect()).collect();
        let mut subdivided = vec![vec![None; qm + 2]; pm + 2];
        if kind == ShapeKind::Subdivided {
            for p in 0..=pm {
                for q in 0..=qm {
                    let size = subdivided_size(p, q);
                    if size > budget.shape_objects {
                        return Err(Error::Budget(format!(
                            "ξ({p}̌×{q}̂) has {size} objects, over the budget of {}",
                            budget.shape_objects
                        )));
                    }
                    subdivided[p][q] = Some(xi(&products[p][q])?);
                }
            }
        }
        Ok(Shapes { kind, bounds, checks, hats, products, subdivided })
    }

    pub fn category(&self, p: usize, q: usize) -> &Arc<RelCategory> {
        match self.kind {
            ShapeKind::Plain => &self.products[p][q],
            ShapeKind::Subdivided => self.subdivided[p][q].as_ref().expect("within bounds").sub(),
        }
    }

    /// `θ × θ': m̌ × n̂ -> p̌ × q̂` for order maps `θ: [m] -> [p]`, `θ': [n] -> [q]`.
    pub fn product_map(&self, p: usize, q: usize, th: &[usize], tv: &[usize]) -> Result<RelFunctor> {
        let (m, n) = (th.len() - 1, tv.len() - 1);
        let a = RelFunctor::from_object_map(self.checks[m].clone(), self.checks[p].clone(), th.to_vec())?;
        let b = RelFunctor::from_object_map(self.hats[n].clone(), self.hats[q].clone(), tv.to_vec())?;
        Ok(product_functor(&a, &b).with_domain(self.products[m][n].clone()).with_codomain(self.products[p][q].clone()))
    }

    /// The functor between shapes induced by a pair of order maps.
    pub fn induced(&self, p: usize, q: usize, th: &[usize], tv: &[usize]) -> Result<RelFunctor> {
        let f = self.product_map(p, q, th, tv)?;
        match self.kind {
            ShapeKind::Plain => Ok(f),
            ShapeKind::Subdivided => {
                let (m, n) = (th.len() - 1, tv.len() - 1);
                let dom = self.subdivided[m][n].as_ref().expect("within bounds");
                let cod = self.subdivided[p][q].as_ref().expect("within bounds");
                subdivide_map_two_fold(&f, dom, cod)
            }
        }
    }
}

/// Number of objects of `ξ(p̌ × q̂)`, without building it.
pub fn subdivided_size(p: usize, q: usize) -> usize {
    // chains of chains: count chains in the poset of chains of the grid, ordered by inclusion
    let grid: Vec<(usize, usize)> = (0..=p).flat_map(|a| (0..=q).map(move |b| (a, b))).collect();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    fn extend(grid: &[(usize, usize)], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let start = cur.last().map_or(0, |&l| l + 1);
        for k in start..grid.len() {
            if let Some(&l) = cur.last() {
                if grid[k].0 < grid[l].0 || grid[k].1 < grid[l].1 {
                    continue;
                }
            }
            cur.push(k);
            out.push(cur.clone());
            extend(grid, cur, out);
            cur.pop();
        }
    }
    extend(&grid, &mut Vec::new(), &mut chains);
    // chains of the inclusion order: count by dynamic programming over sizes
    let n = chains.len();
    let sets: Vec<u64> = chains.iter().map(|c| c.iter().fold(0u64, |m, &k| m | (1 << k))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| chains[i].len());
    let mut ending = vec![0usize; n];
    for (pos, &i) in order.iter().enumerate() {
        let mut total = 1usize;
        for &j in &order[..pos] {
            if chains[j].len() < chains[i].len() && sets[j] & sets[i] == sets[j] {
                total = total.saturating_add(ending[j]);
            }
        }
        ending[i] = total;
    }
    ending.iter().fold(0usize, |a, &b| a.saturating_add(b))
}

/// A nerve: cells are relative functors from shapes into a target.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub set: TruncBiSSet,
    pub target: Arc<RelCategory>,
    pub shapes: Shapes,
    /// Object maps when the target is thin, morphism maps otherwise.
    keys: Vec<Vec<Vec<Vec<usize>>>>,
    index: Vec<Vec<HashMap<Vec<usize>, usize>>>,
    by_objects: bool,
}

fn precompose(key: &[usize], g: &RelFunctor, by_objects: bool) -> Vec<usize> {
    if by_objects {
        g.obj.iter().map(|&o| key[o]).collect()
    } else {
        g.mor.iter().map(|&m| key[m]).collect()
    }
}

impl Nerve {
    pub fn build(x: &Arc<RelCategory>, shapes: Shapes, budget: &NerveBudget) -> Result<Self> {
        let (pm, qm) = shapes.bounds;
        let by_objects = x.is_thin();
        let mut keys = vec![vec![Vec::new(); qm + 1]; pm + 1];
        let mut index = vec![vec![HashMap::new(); qm + 1]; pm + 1];
        for p in 0..=pm {
            for q in 0..=qm {
                let maps = functor_maps(shapes.category(p, q), x, None, Some(budget.cells)).map_err(|e| match e {
                    Error::Budget(m) => Error::Budget(format!("bidegree ({p},{q}): {m}")),
                    other => other,
                })?;
                let ks: Vec<Vec<usize>> = maps.into_iter().map(|(o, m)| if by_objects { o } else { m }).collect();
                index[p][q] = ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
                keys[p][q] = ks;
            }
        }
        let set = Self::assemble(&shapes, &keys, &index, by_objects, (pm, qm))?;
        Ok(Nerve { set, target: x.clone(), shapes, keys, index, by_objects })
    }

    fn assemble(
        shapes: &Shapes,
        keys: &[Vec<Vec<Vec<usize>>>],
        index: &[Vec<HashMap<Vec<usize>, usize>>],
        by_objects: bool,
        (pm, qm): (usize, usize),
    ) -> Result<TruncBiSSet> {
        // restricting a cell f at (p, q) along θ × θ': (m, n) -> (p, q) gives f ∘ shape(θ × θ') at (m, n)
        let restrict = |p: usize, q: usize, th: OrderMap, tv: OrderMap| -> Result<Vec<usize>> {
            let (m, n) = (th.len() - 1, tv.len() - 1);
            let g = shapes.induced(p, q, &th, &tv)?;
            keys[p][q]
                .iter()
                .map(|k| {
                    let nk = precompose(k, &g, by_objects);
                    index[m][n].get(&nk).copied().ok_or_else(|| Error::Invalid("a restriction is not a cell".into()))
                })
                .collect()
        };
        let mut hf = HashMap::new();
        let mut vf = HashMap::new();
        let mut hd = HashMap::new();
        let mut vd = HashMap::new();
        for p in 0..=pm {
            for q in 0..=qm {
                for i in 0..=p {
                    if p > 0 {
                        hf.insert((p, q, i), restrict(p, q, coface(p, i), identity_map(q))?);
                    }
                }
                for j in 0..=q {
                    if q > 0 {
                        vf.insert((p, q, j), restrict(p, q, identity_map(p), coface(q, j))?);
                    }
                }
                // s_i on cells at (p, q) restricts cells of (p, q) along σ_i: [p+1] -> [p]
                if p < pm {
                    for i in 0..=p {
                        hd.insert((p, q, i), restrict(p, q, codegeneracy(p, i), identity_map(q))?);
                    }
                }
                if q < qm {
                    for j in 0..=q {
                        vd.insert((p, q, j), restrict(p, q, identity_map(p), codegeneracy(q, j))?);
                    }
                }
            }
        }
        let counts = keys.iter().map(|r| r.iter().map(Vec::len).collect()).collect();
        let h = |p: usize, q: usize, i: usize, c: usize| hf[&(p, q, i)][c];
        let v = |p: usize, q: usize, i: usize, c: usize| vf[&(p, q, i)][c];
        let hdg = |p: usize, q: usize, i: usize, c: usize| hd[&(p, q, i)][c];
        let vdg = |p: usize, q: usize, i: usize, c: usize| vd[&(p, q, i)][c];
        Ok(TruncBiSSet::build((pm, qm), counts, &Structure { hface: &h, vface: &v, hdeg: &hdg, vdeg: &vdg }))
    }

    /// The functor represented by cell `c` of bidegree `(p, q)`.
    pub fn cell(&self, p: usize, q: usize, c: usize) -> RelFunctor {
        let shape = self.shapes.category(p, q).clone();
        let key = &self.keys[p][q][c];
        if self.by_objects {
            RelFunctor::from_object_map(shape, self.target.clone(), key.clone()).expect("stored cells are functors")
        } else {
            let obj = (0..shape.num_objects()).map(|o| self.target.morphism(key[shape.identity(o)]).src).collect();
            RelFunctor { dom: shape, cod: self.target.clone(), obj, mor: key.clone() }
        }
    }

    fn key(&self, f: &RelFunctor) -> Vec<usize> {
        if self.by_objects {
            f.obj.clone()
        } else {
            f.mor.clone()
        }
    }

    /// The cell of bidegree `(p, q)` represented by `f`, if any.
    pub fn index_of(&self, p: usize, q: usize, f: &RelFunctor) -> Option<usize> {
        self.index[p][q].get(&self.key(f)).copied()
    }

    /// The cell `f ∘ g` for a cell `f` at `(p, q)` and a functor `g` into its shape.
    pub fn restrict(&self, p: usize, q: usize, c: usize, g: &RelFunctor, to: (usize, usize)) -> Option<usize> {
        let k = precompose(&self.keys[p][q][c], g, self.by_objects);
        self.index[to.0][to.1].get(&k).copied()
    }
}

/// `N X`: cells `p̌ × q̂ -> X`.
pub fn nerve_n(x: &Arc<RelCategory>, bounds: (usize, usize), budget: &NerveBudget) -> Result<Nerve> {
    Nerve::build(x, Shapes::new(ShapeKind::Plain, bounds, budget)?, budget)
}

/// `N_ξ X`: cells `ξ(p̌ × q̂) -> X`.
pub fn nerve_n_xi(x: &Arc<RelCategory>, bounds: (usize, usize), budget: &NerveBudget) -> Result<Nerve> {
    Nerve::build(x, Shapes::new(ShapeKind::Subdivided, bounds, budget)?, budget)
}

/// `π*: N X -> N_ξ X`, precomposition with the projections `ξ(p̌ × q̂) -> p̌ × q̂`.
pub fn pi_star(n: &Nerve, nx: &Nerve) -> Result<BiSMap> {
    if n.shapes.kind != ShapeKind::Plain || nx.shapes.kind != ShapeKind::Subdivided || n.set.bounds != nx.set.bounds {
        return Err(Error::Shape("π* needs N X and N_ξ X with equal bounds".into()));
    }
    let (pm, qm) = n.set.bounds;
    let mut maps = vec![vec![Vec::new(); qm + 1]; pm + 1];
    for p in 0..=pm {
        for q in 0..=qm {
            let proj = &nx.shapes.subdivided[p][q].as_ref().expect("within bounds").proj;
            maps[p][q] = (0..n.set.counts[p][q])
                .map(|c| {
                    let k = precompose(&n.keys[p][q][c], proj, n.by_objects);
                    nx.index[p][q].get(&k).copied().ok_or_else(|| Error::Invalid("π* leaves N_ξ X".into()))
                })
                .collect::<Result<Vec<_>>>()?;
        }
    }
    Ok(BiSMap { maps })
}

/// Both nerves and `π*` between them.
pub fn pi_star_for(x: &Arc<RelCategory>, bounds: (usize, usize), budget: &NerveBudget) -> Result<(Nerve, Nerve, BiSMap)> {
    let n = nerve_n(x, bounds, budget)?;
    let nx = nerve_n_xi(x, bounds, budget)?;
    let f = pi_star(&n, &nx)?;
    Ok((n, nx, f))
}

/// The classical nerve of a maximal relative category: `q`-simplices are functors `q̂ -> Y`.
pub fn classical_nerve(y: &Arc<RelCategory>, bound: usize) -> Result<TruncSSet> {
    if !y.is_maximal() {
        return Err(Error::Precondition("the classical nerve needs a maximal relative category".into()));
    }
    let hats: Vec<_> = (0..=bound + 1).map(|k| Arc::new(arrow_category(k, Flavor::Maximal))).collect();
    let mut keys: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    for k in 0..=bound {
        let maps: Vec<Vec<usize>> = functor_maps(&hats[k], y, None, None)?.into_iter().map(|(_, m)| m).collect();
        index.push(maps.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect());
        keys.push(maps);
    }
    let restrict = |k: usize, c: usize, th: OrderMap| -> usize {
        let m = th.len() - 1;
        let g = RelFunctor::from_object_map(hats[m].clone(), hats[k].clone(), th).expect("order map");
        index[m][&precompose(&keys[k][c], &g, false)]
    };
    Ok(build_sset(bound, keys.iter().map(Vec::len).collect(), |k, i, c| restrict(k, c, coface(k, i)), |k, i, c| {
        restrict(k, c, codegeneracy(k, i))
    }))
}

/// `N(X^op) -> Inv(N X)`, sending `f` to `f^op` precomposed with the reversal
/// of `p̌ × q̂`. Returns both nerves, `Inv N X` and the map.
pub fn opposite_comparison(
    x: &Arc<RelCategory>,
    bounds: (usize, usize),
    budget: &NerveBudget,
) -> Result<(Nerve, Nerve, TruncBiSSet, BiSMap)> {
    let xop = Arc::new(x.opposite());
    let nop = nerve_n(&xop, bounds, budget)?;
    let n = nerve_n(x, bounds, budget)?;
    let inv = n.set.involution();
    let (pm, qm) = bounds;
    let mut maps = vec![vec![Vec::new(); qm + 1]; pm + 1];
    for p in 0..=pm {
        for q in 0..=qm {
            let shape = n.shapes.category(p, q);
            let rev = |o: usize| {
                let (a, b) = (o / (q + 1), o % (q + 1));
                (p - a) * (q + 1) + (q - b)
            };
            let mut col = Vec::with_capacity(nop.set.counts[p][q]);
            for c in 0..nop.set.counts[p][q] {
                let f = nop.cell(p, q, c);
                let obj: Vec<usize> = (0..shape.num_objects()).map(|o| f.obj[rev(o)]).collect();
                let mor: Vec<usize> = shape
                    .morphisms()
                    .iter()
                    .map(|m| f.mor[shape.arrow(rev(m.dst), rev(m.src)).expect("reversed arrow")])
                    .collect();
                let g = RelFunctor { dom: shape.clone(), cod: x.clone(), obj, mor };
                col.push(n.index_of(p, q, &g).ok_or_else(|| Error::Invalid("the reversed functor is not a cell".into()))?);
            }
            maps[p][q] = col;
        }
    }
    Ok((nop, n, inv, BiSMap { maps }))
}

/// Homology certificate for row `p` of a map.
pub fn row_certificate(f: &BiSMap, dom: &TruncBiSSet, cod: &TruncBiSSet, p: usize, up_to: usize) -> Result<IsoCertificate> {
    f.row(p).homology_certificate(&dom.row(p)?, &cod.row(p)?, up_to)
}

/// Homology certificate for the diagonal of a map.
pub fn diagonal_certificate(f: &BiSMap, dom: &TruncBiSSet, cod: &TruncBiSSet, up_to: usize) -> Result<IsoCertificate> {
    f.diagonal().homology_certificate(&dom.diagonal()?, &cod.diagonal()?, up_to)
}
