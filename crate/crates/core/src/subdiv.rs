//! Terminal and initial subdivisions of relative posets.
//!
//! Objects of a subdivision are the chains of the base poset, written in
//! sequence notation: `012` when every element has a one-character name,
//! `(a,b,c)` otherwise.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::relcat::{RelCategory, RelFunctor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Terminal,
    Initial,
}

/// A subdivision together with its chains and projection.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub kind: Kind,
    pub base: Arc<RelCategory>,
    pub sub: Arc<RelCategory>,
    /// Chains of the base, each listed in increasing order; index = object of `sub`.
    pub chains: Vec<Vec<usize>>,
    pub proj: RelFunctor,
    index: HashMap<Vec<usize>, usize>,
}

impl Subdivision {
    pub fn chain_index(&self, chain: &[usize]) -> Option<usize> {
        self.index.get(chain).copied()
    }
}

/// All chains of a poset, ordered by length and then lexicographically by object index.
pub fn chains(p: &RelCategory) -> Vec<Vec<usize>> {
    let n = p.num_objects();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            let mut v: Vec<usize> = p
                .out_morphisms(a)
                .iter()
                .map(|&m| p.morphism(m).dst)
                .filter(|&b| b != a)
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).rev().map(|a| vec![a]).collect();
    while let Some(c) = stack.pop() {
        let last = *c.last().unwrap();
        for &b in succ[last].iter().rev() {
            let mut d = c.clone();
            d.push(b);
            stack.push(d);
        }
        out.push(c);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Sequence-notation names for chains of `p`.
pub fn chain_names(p: &RelCategory, chains: &[Vec<usize>]) -> Vec<String> {
    let names = p.objects();
    let short = names.iter().all(|s| s.chars().count() == 1);
    let render = |c: &Vec<usize>, compact: bool| -> String {
        if compact {
            c.iter().map(|&x| names[x].as_str()).collect()
        } else {
            let parts: Vec<&str> = c.iter().map(|&x| names[x].as_str()).collect();
            format!("({})", parts.join(","))
        }
    };
    let first: Vec<String> = chains.iter().map(|c| render(c, short)).collect();
    let mut seen = std::collections::HashSet::new();
    if first.iter().all(|s| seen.insert(s.as_str())) {
        first
    } else {
        chains.iter().map(|c| render(c, false)).collect()
    }
}

fn subdivide(p: &Arc<RelCategory>, kind: Kind) -> Result<Subdivision> {
    p.require_poset("subdivisions are defined for relative posets")?;
    let chains = chains(p);
    let names = chain_names(p, &chains);
    let index: HashMap<Vec<usize>, usize> = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let mut arrows = Vec::new();
    for (big_i, big) in chains.iter().enumerate() {
        let len = big.len();
        if len > 62 {
            return Err(Error::Budget("chain too long to subdivide".into()));
        }
        for mask in 1u64..(1u64 << len) - 1 {
            let small: Vec<usize> = (0..len).filter(|&k| mask >> k & 1 == 1).map(|k| big[k]).collect();
            let small_i = index[&small];
            match kind {
                Kind::Terminal => {
                    let (a, b) = (*small.last().unwrap(), *big.last().unwrap());
                    arrows.push((small_i, big_i, a == b || p.has_we(a, b)));
                }
                Kind::Initial => {
                    let (a, b) = (big[0], small[0]);
                    arrows.push((big_i, small_i, a == b || p.has_we(a, b)));
                }
            }
        }
    }
    let sub = Arc::new(RelCategory::thin(names, &arrows)?);
    let proj_obj: Vec<usize> = chains
        .iter()
        .map(|c| match kind {
            Kind::Terminal => *c.last().unwrap(),
            Kind::Initial => c[0],
        })
        .collect();
    let proj = RelFunctor::from_object_map(sub.clone(), p.clone(), proj_obj)?;
    Ok(Subdivision { kind, base: p.clone(), sub, chains, proj, index })
}

/// Terminal subdivision: chain inclusions, weak equivalences detected on last elements.
pub fn xi_t(p: &Arc<RelCategory>) -> Result<Subdivision> {
    subdivide(p, Kind::Terminal)
}

/// Initial subdivision: reversed chain inclusions, weak equivalences detected on first elements.
pub fn xi_i(p: &Arc<RelCategory>) -> Result<Subdivision> {
    subdivide(p, Kind::Initial)
}

pub fn subdivision(p: &Arc<RelCategory>, kind: Kind) -> Result<Subdivision> {
    subdivide(p, kind)
}

/// A two-fold subdivision: `outer` subdivides `inner.sub`.
#[derive(Clone, Debug)]
pub struct TwoFold {
    pub inner: Subdivision,
    pub outer: Subdivision,
    pub proj: RelFunctor,
}

impl TwoFold {
    pub fn sub(&self) -> &Arc<RelCategory> {
        &self.outer.sub
    }

    pub fn base(&self) -> &Arc<RelCategory> {
        &self.inner.base
    }
}

fn two_fold(p: &Arc<RelCategory>, first: Kind, second: Kind) -> Result<TwoFold> {
    let inner = subdivide(p, first)?;
    let outer = subdivide(&inner.sub, second)?;
    let proj = inner.proj.after(&outer.proj)?;
    Ok(TwoFold { inner, outer, proj })
}

/// `ξ P`: the terminal subdivision of the initial subdivision.
pub fn xi(p: &Arc<RelCategory>) -> Result<TwoFold> {
    two_fold(p, Kind::Initial, Kind::Terminal)
}

/// `ξ̄ P`: the initial subdivision of the terminal subdivision.
pub fn xi_bar(p: &Arc<RelCategory>) -> Result<TwoFold> {
    two_fold(p, Kind::Terminal, Kind::Initial)
}

/// Image chain of `c` under an object map, with consecutive repeats collapsed.
pub fn image_chain(obj: &[usize], c: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(c.len());
    for &x in c {
        let y = obj[x];
        if out.last() != Some(&y) {
            out.push(y);
        }
    }
    out
}

/// The induced map of subdivisions, sending a chain to its collapsed image chain.
pub fn subdivide_map(f: &RelFunctor, dom: &Subdivision, cod: &Subdivision) -> Result<RelFunctor> {
    if dom.kind != cod.kind {
        return Err(Error::Shape("subdivisions of different kinds".into()));
    }
    if f.dom.num_objects() != dom.base.num_objects() || f.cod.num_objects() != cod.base.num_objects() {
        return Err(Error::Shape("functor does not match the subdivided posets".into()));
    }
    let mut obj = Vec::with_capacity(dom.chains.len());
    for c in &dom.chains {
        let img = image_chain(&f.obj, c);
        obj.push(cod.chain_index(&img).ok_or_else(|| Error::Invalid("image is not a chain".into()))?);
    }
    RelFunctor::from_object_map(dom.sub.clone(), cod.sub.clone(), obj)
}

/// The induced map of two-fold subdivisions.
pub fn subdivide_map_two_fold(f: &RelFunctor, dom: &TwoFold, cod: &TwoFold) -> Result<RelFunctor> {
    let inner = subdivide_map(f, &dom.inner, &cod.inner)?;
    subdivide_map(&inner, &dom.outer, &cod.outer)
}

/// Object map of the two-fold induced map, without building the functor.
pub fn two_fold_object_map(f_obj: &[usize], dom: &TwoFold, cod: &TwoFold) -> Result<Vec<usize>> {
    let mut inner = Vec::with_capacity(dom.inner.chains.len());
    for c in &dom.inner.chains {
        let img = image_chain(f_obj, c);
        inner.push(cod.inner.chain_index(&img).ok_or_else(|| Error::Invalid("image is not a chain".into()))?);
    }
    let mut outer = Vec::with_capacity(dom.outer.chains.len());
    for c in &dom.outer.chains {
        let img = image_chain(&inner, c);
        outer.push(cod.outer.chain_index(&img).ok_or_else(|| Error::Invalid("image is not a chain".into()))?);
    }
    Ok(outer)
}

/// The isomorphism `(ξ_i P)^op -> ξ_t(P^op)` reversing each chain.
pub fn conjugation_iso(p: &Arc<RelCategory>) -> Result<RelFunctor> {
    let si = xi_i(p)?;
    let pop = Arc::new(p.opposite());
    let st = xi_t(&pop)?;
    let dom = Arc::new(si.sub.opposite());
    let mut obj = Vec::with_capacity(si.chains.len());
    for c in &si.chains {
        let r: Vec<usize> = c.iter().rev().copied().collect();
        obj.push(st.chain_index(&r).ok_or_else(|| Error::Invalid("reversed chain missing".into()))?);
    }
    RelFunctor::from_object_map(dom, st.sub.clone(), obj)
}

/// The companion isomorphism `(ξ_t P)^op -> ξ_i(P^op)`.
pub fn conjugation_iso_terminal(p: &Arc<RelCategory>) -> Result<RelFunctor> {
    let st = xi_t(p)?;
    let pop = Arc::new(p.opposite());
    let si = xi_i(&pop)?;
    let dom = Arc::new(st.sub.opposite());
    let mut obj = Vec::with_capacity(st.chains.len());
    for c in &st.chains {
        let r: Vec<usize> = c.iter().rev().copied().collect();
        obj.push(si.chain_index(&r).ok_or_else(|| Error::Invalid("reversed chain missing".into()))?);
    }
    RelFunctor::from_object_map(dom, si.sub.clone(), obj)
}

/// For maximal `P`, an isomorphism from the iterated subdivision (`ξ_t²P` or
/// `ξ_i²P`) onto `ξP`. Chains of chains are matched as sets of chains; when
/// that correspondence is not a relative functor an exhaustive isomorphism
/// search decides.
pub fn maximal_iteration_iso(p: &Arc<RelCategory>, kind: Kind) -> Result<RelFunctor> {
    p.require_poset("subdivisions are defined for relative posets")?;
    if !p.is_maximal() {
        return Err(Error::Precondition("the poset is not maximal".into()));
    }
    let once = subdivide(p, kind)?;
    let twice = subdivide(&once.sub, kind)?;
    let target = xi(p)?;
    let mut obj = Vec::with_capacity(twice.chains.len());
    for c in &twice.chains {
        let mut as_set: Vec<Vec<usize>> = c.iter().map(|&x| once.chains[x].clone()).collect();
        // Chains of the initial subdivision run from longer to shorter chains.
        as_set.sort_by(|a, b| b.len().cmp(&a.len()));
        let ids: Option<Vec<usize>> = as_set.iter().map(|ch| target.inner.chain_index(ch)).collect();
        let ids = ids.ok_or_else(|| Error::Invalid("chain of chains missing".into()))?;
        obj.push(target.outer.chain_index(&ids).ok_or_else(|| Error::Invalid("chain of chains missing".into()))?);
    }
    if let Ok(f) = RelFunctor::from_object_map(twice.sub.clone(), target.sub().clone(), obj) {
        if f.is_isomorphism() {
            return Ok(f);
        }
    }
    find_isomorphism(&twice.sub, target.sub()).ok_or_else(|| {
        Error::Invalid("the iterated subdivision is not isomorphic to the two-fold subdivision".into())
    })
}

/// An isomorphism of thin relative categories, found by backtracking, or None.
pub fn find_isomorphism(a: &Arc<RelCategory>, b: &Arc<RelCategory>) -> Option<RelFunctor> {
    let n = a.num_objects();
    if n != b.num_objects() || a.num_morphisms() != b.num_morphisms() || !a.is_thin() || !b.is_thin() {
        return None;
    }
    let signature = |c: &RelCategory, o: usize| {
        let out = c.out_morphisms(o);
        let inc = c.in_morphisms(o);
        (
            out.len(),
            inc.len(),
            out.iter().filter(|&&m| c.morphism(m).we).count(),
            inc.iter().filter(|&&m| c.morphism(m).we).count(),
        )
    };
    let sa: Vec<_> = (0..n).map(|o| signature(a, o)).collect();
    let sb: Vec<_> = (0..n).map(|o| signature(b, o)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rel(c: &RelCategory, x: usize, y: usize) -> Option<bool> {
        c.arrow(x, y).map(|m| c.morphism(m).we)
    }
    fn rec(
        k: usize,
        a: &RelCategory,
        b: &RelCategory,
        sa: &[(usize, usize, usize, usize)],
        sb: &[(usize, usize, usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == map.len() {
            return true;
        }
        for y in 0..map.len() {
            if used[y] || sa[k] != sb[y] {
                continue;
            }
            let ok = (0..k).all(|j| {
                rel(a, j, k) == rel(b, map[j], y) && rel(a, k, j) == rel(b, y, map[j])
            });
            if ok {
                map[k] = y;
                used[y] = true;
                if rec(k + 1, a, b, sa, sb, map, used) {
                    return true;
                }
                used[y] = false;
            }
        }
        false
    }
    if !rec(0, a, b, &sa, &sb, &mut map, &mut used) {
        return None;
    }
    let f = RelFunctor::from_object_map(a.clone(), b.clone(), map).ok()?;
    f.is_isomorphism().then_some(f)
}
