//! Exhaustive enumeration of relative functors between finite relative categories.
//!
//! Objects are assigned in index order with forward checking on bitset
//! domains, then morphisms in index order. The output is therefore sorted
//! lexicographically by (object map, morphism map).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::relcat::{RelCategory, RelFunctor};

/// Optional prescribed images for some objects and morphisms.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    pub obj: Vec<Option<usize>>,
    pub mor: Vec<Option<usize>>,
}

impl Constraints {
    pub fn new(dom: &RelCategory) -> Self {
        Constraints { obj: vec![None; dom.num_objects()], mor: vec![None; dom.num_morphisms()] }
    }
}

struct Masks {
    words: usize,
    succ: Vec<u64>,
    succ_we: Vec<u64>,
    pred: Vec<u64>,
    pred_we: Vec<u64>,
}

impl Masks {
    fn new(x: &RelCategory) -> Self {
        let n = x.num_objects();
        let words = n.div_ceil(64).max(1);
        let mut m = Masks {
            words,
            succ: vec![0; n * words],
            succ_we: vec![0; n * words],
            pred: vec![0; n * words],
            pred_we: vec![0; n * words],
        };
        for f in x.morphisms() {
            let (s, d) = (f.src, f.dst);
            m.succ[s * words + d / 64] |= 1 << (d % 64);
            m.pred[d * words + s / 64] |= 1 << (s % 64);
            if f.we {
                m.succ_we[s * words + d / 64] |= 1 << (d % 64);
                m.pred_we[d * words + s / 64] |= 1 << (s % 64);
            }
        }
        m
    }

    fn mask(&self, x: usize, outgoing: bool, we: bool) -> &[u64] {
        let v = match (outgoing, we) {
            (true, false) => &self.succ,
            (true, true) => &self.succ_we,
            (false, false) => &self.pred,
            (false, true) => &self.pred_we,
        };
        &v[x * self.words..(x + 1) * self.words]
    }
}

struct Search<'a, F: FnMut(&[usize], &[usize]) -> bool> {
    a: &'a RelCategory,
    x: &'a RelCategory,
    masks: Masks,
    adj: Vec<Vec<(usize, bool, bool)>>,
    domains: Vec<u64>,
    trail: Vec<(usize, u64)>,
    obj: Vec<usize>,
    mor: Vec<usize>,
    fixed_mor: Vec<Option<usize>>,
    checks: Vec<Vec<(usize, usize, usize)>>,
    mor_order: Vec<usize>,
    need_mor_phase: bool,
    visit: F,
    stopped: bool,
}

impl<'a, F: FnMut(&[usize], &[usize]) -> bool> Search<'a, F> {
    fn objects(&mut self, k: usize) {
        if self.stopped {
            return;
        }
        let n = self.a.num_objects();
        if k == n {
            self.morphisms_start();
            return;
        }
        let w = self.masks.words;
        for word in 0..w {
            let mut bits = self.domains[k * w + word];
            while bits != 0 {
                let bit = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let x = word * 64 + bit;
                self.obj[k] = x;
                let mark = self.trail.len();
                let mut ok = true;
                for idx in 0..self.adj[k].len() {
                    let (b, outgoing, we) = self.adj[k][idx];
                    if b <= k {
                        continue;
                    }
                    let mut empty = true;
                    for j in 0..w {
                        let old = self.domains[b * w + j];
                        let new = old & self.masks.mask(x, outgoing, we)[j];
                        if new != old {
                            self.trail.push((b * w + j, old));
                            self.domains[b * w + j] = new;
                        }
                        if new != 0 {
                            empty = false;
                        }
                    }
                    if empty {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    self.objects(k + 1);
                }
                while self.trail.len() > mark {
                    let (i, old) = self.trail.pop().unwrap();
                    self.domains[i] = old;
                }
                if self.stopped {
                    return;
                }
            }
        }
    }

    fn morphisms_start(&mut self) {
        if !self.need_mor_phase {
            for (i, f) in self.a.morphisms().iter().enumerate() {
                let img = match self.x.arrow(self.obj[f.src], self.obj[f.dst]) {
                    Some(m) => m,
                    None => return,
                };
                if let Some(want) = self.fixed_mor[i] {
                    if want != img {
                        return;
                    }
                }
                self.mor[i] = img;
            }
            if !(self.visit)(&self.obj, &self.mor) {
                self.stopped = true;
            }
            return;
        }
        self.morphisms(0);
    }

    fn morphisms(&mut self, k: usize) {
        if self.stopped {
            return;
        }
        if k == self.mor_order.len() {
            if !(self.visit)(&self.obj, &self.mor) {
                self.stopped = true;
            }
            return;
        }
        let i = self.mor_order[k];
        let f = self.a.morphism(i);
        let (s, d) = (self.obj[f.src], self.obj[f.dst]);
        let candidates: Vec<usize> = if self.a.is_identity(i) {
            vec![self.x.identity(s)]
        } else {
            self.x.hom(s, d).iter().copied().filter(|&m| !f.we || self.x.morphism(m).we).collect()
        };
        for c in candidates {
            if let Some(want) = self.fixed_mor[i] {
                if want != c {
                    continue;
                }
            }
            self.mor[i] = c;
            let ok = self.checks[i].iter().all(|&(g, f, h)| self.x.compose(self.mor[g], self.mor[f]) == Some(self.mor[h]));
            if ok {
                self.morphisms(k + 1);
            }
            if self.stopped {
                return;
            }
        }
    }
}

/// Calls `visit(obj_map, mor_map)` for every relative functor `a -> x` satisfying
/// the constraints, in canonical order, until `visit` returns false.
pub fn for_each_functor(
    a: &RelCategory,
    x: &RelCategory,
    fixed: Option<&Constraints>,
    visit: impl FnMut(&[usize], &[usize]) -> bool,
) {
    let n = a.num_objects();
    let masks = Masks::new(x);
    let w = masks.words;
    let mut adj: Vec<Vec<(usize, bool, bool)>> = vec![Vec::new(); n];
    {
        let mut seen = std::collections::HashMap::new();
        for f in a.morphisms() {
            if f.src == f.dst {
                continue;
            }
            let e = seen.entry((f.src, f.dst)).or_insert(false);
            *e |= f.we;
        }
        let mut pairs: Vec<_> = seen.into_iter().collect();
        pairs.sort();
        for ((s, d), we) in pairs {
            adj[s].push((d, true, we));
            adj[d].push((s, false, we));
        }
    }
    let mut domains = vec![0u64; n * w];
    for o in 0..n {
        for y in 0..x.num_objects() {
            domains[o * w + y / 64] |= 1 << (y % 64);
        }
    }
    let mut fixed_mor = vec![None; a.num_morphisms()];
    if let Some(c) = fixed {
        for (o, v) in c.obj.iter().enumerate() {
            if let Some(y) = *v {
                for j in 0..w {
                    domains[o * w + j] = 0;
                }
                if y < x.num_objects() {
                    domains[o * w + y / 64] |= 1 << (y % 64);
                }
            }
        }
        fixed_mor.clone_from(&c.mor);
    }
    if n > 0 && x.num_objects() == 0 {
        return;
    }
    // Constraints from fixed objects propagate to their neighbours before the search.
    let mut feasible = true;
    if let Some(c) = fixed {
        for (o, v) in c.obj.iter().enumerate() {
            if let Some(y) = *v {
                if y >= x.num_objects() {
                    feasible = false;
                    continue;
                }
                for &(b, outgoing, we) in &adj[o] {
                    for j in 0..w {
                        domains[b * w + j] &= masks.mask(y, outgoing, we)[j];
                    }
                }
            }
        }
    }
    if !feasible {
        return;
    }
    let need_mor_phase = !x.is_thin();
    let mut checks = vec![Vec::new(); a.num_morphisms()];
    let mut mor_order = Vec::new();
    if need_mor_phase {
        mor_order = (0..a.num_morphisms()).collect();
        for f in 0..a.num_morphisms() {
            for &g in a.out_morphisms(a.morphism(f).dst) {
                if let Some(h) = a.compose(g, f) {
                    let last = f.max(g).max(h);
                    checks[last].push((g, f, h));
                }
            }
        }
    }
    let mut search = Search {
        a,
        x,
        masks,
        adj,
        domains,
        trail: Vec::new(),
        obj: vec![0; n],
        mor: vec![0; a.num_morphisms()],
        fixed_mor,
        checks,
        mor_order,
        need_mor_phase,
        visit,
        stopped: false,
    };
    search.objects(0);
}

/// All functor maps `a -> x`, failing when more than `limit` exist.
pub fn functor_maps(
    a: &RelCategory,
    x: &RelCategory,
    fixed: Option<&Constraints>,
    limit: Option<usize>,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_functor(a, x, fixed, |o, m| {
        if limit.is_some_and(|l| out.len() >= l) {
            over = true;
            return false;
        }
        out.push((o.to_vec(), m.to_vec()));
        true
    });
    if over {
        return Err(Error::Budget(format!(
            "more than {} relative functors from a {}-object category",
            limit.unwrap_or(0),
            a.num_objects()
        )));
    }
    Ok(out)
}

/// Object maps of all functors `a -> x` into a thin `x`.
pub fn object_maps(a: &RelCategory, x: &RelCategory, limit: Option<usize>) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_functor(a, x, None, |o, _| {
        if limit.is_some_and(|l| out.len() >= l) {
            over = true;
            return false;
        }
        out.push(o.to_vec());
        true
    });
    if over {
        return Err(Error::Budget(format!(
            "more than {} relative functors from a {}-object category",
            limit.unwrap_or(0),
            a.num_objects()
        )));
    }
    Ok(out)
}

pub fn count_functors(a: &RelCategory, x: &RelCategory, limit: Option<usize>) -> Result<usize> {
    let mut n = 0usize;
    let mut over = false;
    for_each_functor(a, x, None, |_, _| {
        n += 1;
        if limit.is_some_and(|l| n > l) {
            over = true;
            return false;
        }
        true
    });
    if over {
        return Err(Error::Budget(format!("more than {} relative functors", limit.unwrap_or(0))));
    }
    Ok(n)
}

/// Every relative functor `a -> x`, complete and in canonical order.
pub fn enumerate_functors(a: &Arc<RelCategory>, x: &Arc<RelCategory>) -> Vec<RelFunctor> {
    let mut out = Vec::new();
    for_each_functor(a, x, None, |o, m| {
        out.push(RelFunctor { dom: a.clone(), cod: x.clone(), obj: o.to_vec(), mor: m.to_vec() });
        true
    });
    out
}

/// The first functor in canonical order satisfying `fixed` and `accept`.
pub fn find_functor(
    a: &Arc<RelCategory>,
    x: &Arc<RelCategory>,
    fixed: Option<&Constraints>,
    mut accept: impl FnMut(&[usize], &[usize]) -> bool,
) -> Option<RelFunctor> {
    let mut found = None;
    for_each_functor(a, x, fixed, |o, m| {
        if accept(o, m) {
            found = Some(RelFunctor { dom: a.clone(), cod: x.clone(), obj: o.to_vec(), mor: m.to_vec() });
            false
        } else {
            true
        }
    });
    found
}
