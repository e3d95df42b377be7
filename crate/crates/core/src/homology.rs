//! Exact integral homology of finite chain complexes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse integer matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `columns[c]` lists `(row, value)` with nonzero values.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Adds `v` at `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        let col = &mut self.columns[c];
        if let Some(e) = col.iter_mut().find(|e| e.0 == r) {
            e.1 += v;
        } else {
            col.push((r, v));
        }
        col.retain(|e| e.1 != 0);
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c].iter().find(|e| e.0 == r).map_or(0, |e| e.1)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseMatrix::zero(self.rows, other.cols);
        for (c, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, v) in col {
                for &(r, w) in &self.columns[k] {
                    *acc.entry(r).or_default() += v * w;
                }
            }
            out.columns[c] = acc.into_iter().filter(|e| e.1 != 0).collect();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// Rank and the invariant factors other than 1, in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

struct Sparse {
    rows: Vec<BTreeMap<usize, i64>>,
    col_rows: Vec<BTreeSet<usize>>,
    active: BTreeSet<usize>,
}

impl Sparse {
    fn new(m: &SparseMatrix) -> Self {
        let mut rows = vec![BTreeMap::new(); m.rows];
        let mut col_rows = vec![BTreeSet::new(); m.cols];
        for (c, col) in m.columns.iter().enumerate() {
            for &(r, v) in col {
                if v != 0 {
                    *rows[r].entry(c).or_insert(0) += v;
                    col_rows[c].insert(r);
                }
            }
        }
        let active = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
        Sparse { rows, col_rows, active }
    }

    fn find_unit(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for &r in &self.active {
            let len = self.rows[r].len();
            if best.is_some_and(|b| b.0 <= len) {
                continue;
            }
            let unit = self.rows[r]
                .iter()
                .filter(|e| e.1.abs() == 1)
                .min_by_key(|e| self.col_rows[*e.0].len())
                .map(|e| *e.0);
            if let Some(c) = unit {
                best = Some((len, r, c));
                if len == 1 {
                    break;
                }
            }
        }
        best.map(|b| (b.1, b.2))
    }

    /// Eliminates a unit pivot; `false` on overflow.
    fn pivot(&mut self, r: usize, c: usize) -> bool {
        let u = self.rows[r][&c];
        let pivot_row: Vec<(usize, i64)> = self.rows[r].iter().map(|(&k, &v)| (k, v)).collect();
        let others: Vec<usize> = self.col_rows[c].iter().copied().filter(|&x| x != r).collect();
        for r2 in others {
            let factor = self.rows[r2][&c] * u;
            for &(k, v) in &pivot_row {
                let Some(delta) = factor.checked_mul(v) else { return false };
                let entry = self.rows[r2].entry(k).or_insert(0);
                let Some(nv) = entry.checked_sub(delta) else { return false };
                *entry = nv;
                if nv == 0 {
                    self.rows[r2].remove(&k);
                    self.col_rows[k].remove(&r2);
                } else {
                    self.col_rows[k].insert(r2);
                }
            }
            if self.rows[r2].is_empty() {
                self.active.remove(&r2);
            }
        }
        for &(k, _) in &pivot_row {
            self.col_rows[k].remove(&r);
        }
        self.rows[r].clear();
        self.active.remove(&r);
        true
    }

    fn dense_rest(&self) -> Vec<Vec<BigInt>> {
        let cols: Vec<usize> = (0..self.col_rows.len()).filter(|&c| !self.col_rows[c].is_empty()).collect();
        let cpos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        self.active
            .iter()
            .map(|&r| {
                let mut row = vec![BigInt::zero(); cols.len()];
                for (&c, &v) in &self.rows[r] {
                    row[cpos[&c]] = BigInt::from(v);
                }
                row
            })
            .collect()
    }
}

fn dense_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_entry(&a, t, t..m, t..n) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    for j in t..n {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    for row in a.iter_mut().take(m).skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
            // move the smallest remainder in row or column t to the pivot
            let mut best = (t, t);
            for i in t..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_entry(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Invariant factors of a diagonal, by repeated gcd/lcm exchange.
fn normalize(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g.is_zero() {
                continue;
            }
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Smith normal form data of an integer matrix.
pub fn smith(m: &SparseMatrix) -> SmithForm {
    let mut s = Sparse::new(m);
    let mut rank = 0;
    let mut overflow = false;
    while let Some((r, c)) = s.find_unit() {
        if !s.pivot(r, c) {
            overflow = true;
            break;
        }
        rank += 1;
    }
    let rest = if overflow {
        // the partially reduced matrix may be corrupt; redo the whole thing densely
        rank = 0;
        let mut a = vec![vec![BigInt::zero(); m.cols]; m.rows];
        for (c, col) in m.columns.iter().enumerate() {
            for &(r, v) in col {
                a[r][c] += BigInt::from(v);
            }
        }
        a
    } else {
        s.dense_rest()
    };
    let diag = normalize(dense_diagonal(rest));
    let mut torsion = Vec::new();
    for d in diag {
        if d.is_zero() {
            continue;
        }
        rank += 1;
        if !d.is_one() {
            torsion.push(d);
        }
    }
    SmithForm { rank, torsion }
}

/// A bounded chain complex `C_0 <- C_1 <- ... <- C_n`.
#[derive(Clone, Debug, Default)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    /// `boundaries[k]` is `d_k: C_k -> C_{k-1}`; `boundaries[0]` is the zero map.
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, mut higher: Vec<SparseMatrix>) -> Self {
        let mut boundaries = vec![SparseMatrix::zero(0, dims.first().copied().unwrap_or(0))];
        boundaries.append(&mut higher);
        ChainComplex { dims, boundaries }
    }

    /// Whether `d d = 0`.
    pub fn is_complex(&self) -> bool {
        (2..self.boundaries.len()).all(|k| self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero())
    }

    /// The top degree whose homology is determined.
    pub fn top(&self) -> Option<usize> {
        self.dims.len().checked_sub(2)
    }
}

/// One integral homology group `Z^rank ⊕ ⊕ Z/t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology groups in degrees `0..=up_to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub groups: Vec<Group>,
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().enumerate().map(|(k, g)| format!("H{k} = {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Homology of a complex in degrees `0..=up_to`; needs `d_{up_to + 1}`.
pub fn complex_homology(c: &ChainComplex, up_to: usize) -> Option<HomologySummary> {
    if c.top().is_none_or(|t| t < up_to) {
        return None;
    }
    let forms: Vec<SmithForm> = (0..=up_to + 1).map(|k| smith(&c.boundaries[k])).collect();
    let groups = (0..=up_to)
        .map(|k| Group { rank: c.dims[k] - forms[k].rank - forms[k + 1].rank, torsion: forms[k + 1].torsion.clone() })
        .collect();
    Some(HomologySummary { groups })
}

/// A chain map given degreewise as sparse matrices `dom_k -> cod_k`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub degrees: Vec<SparseMatrix>,
}

/// The mapping cone `C_k = cod_k ⊕ dom_{k-1}` with `d(t, s) = (d t + f s, -d s)`.
pub fn mapping_cone(dom: &ChainComplex, cod: &ChainComplex, f: &ChainMap) -> ChainComplex {
    let n = cod.dims.len().min(dom.dims.len() + 1).min(f.degrees.len() + 1);
    let dims: Vec<usize> = (0..n).map(|k| cod.dims[k] + if k > 0 { dom.dims[k - 1] } else { 0 }).collect();
    let mut higher = Vec::new();
    for k in 1..n {
        let mut m = SparseMatrix::zero(dims[k - 1], dims[k]);
        let tk = cod.dims[k];
        for (c, col) in cod.boundaries[k].columns.iter().enumerate() {
            for &(r, v) in col {
                m.add(r, c, v);
            }
        }
        let t_prev = cod.dims[k - 1];
        for (c, col) in f.degrees[k - 1].columns.iter().enumerate() {
            for &(r, v) in col {
                m.add(r, tk + c, v);
            }
        }
        if k >= 2 {
            for (c, col) in dom.boundaries[k - 1].columns.iter().enumerate() {
                for &(r, v) in col {
                    m.add(t_prev + r, tk + c, -v);
                }
            }
        }
        higher.push(m);
    }
    ChainComplex::new(dims, higher)
}

/// Evidence that a chain map induces isomorphisms in degrees `0..=up_to`.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub up_to: usize,
    pub dom: HomologySummary,
    pub cod: HomologySummary,
    pub cone: HomologySummary,
    pub iso: bool,
}

/// The map is an isomorphism on `H_k` for `k <= n` exactly when the cone is
/// acyclic through degree `n` and `H_n` of both ends agree (a surjection
/// between isomorphic finitely generated groups is injective).
pub fn iso_certificate(dom: &ChainComplex, cod: &ChainComplex, f: &ChainMap, up_to: usize) -> Option<IsoCertificate> {
    let hd = complex_homology(dom, up_to)?;
    let hc = complex_homology(cod, up_to)?;
    let cone = complex_homology(&mapping_cone(dom, cod, f), up_to)?;
    let iso = cone.groups.iter().all(Group::is_zero) && hd.groups[up_to] == hc.groups[up_to];
    Some(IsoCertificate { up_to, dom: hd, cod: hc, cone, iso })
}
