//! Strict homotopies, zigzags of them, homotopy equivalences and strong
//! deformation retractions.
//!
//! A strict homotopy `f => g` between functors `Y -> Z` is a relative functor
//! `Y × 1̂ -> Z`, stored together with its two ends.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::enumerate::{find_functor, for_each_functor, Constraints};
use crate::error::{Error, Result};
use crate::exponential::{induced_exponential_map, Exponential};
use crate::relcat::{arrow_category, first_projection, product, Flavor, RelCategory, RelFunctor};
use crate::subdiv::{subdivide_map, subdivision, xi, xi_i, xi_t, Kind, Subdivision};

/// The maximal arrow `0 -> 1`.
pub fn interval() -> Arc<RelCategory> {
    Arc::new(arrow_category(1, Flavor::Maximal))
}

fn interval_parts(i: &RelCategory) -> (usize, usize, usize) {
    (i.identity(0), i.identity(1), i.arrow(0, 1).expect("interval arrow"))
}

fn parallel(f: &RelFunctor, g: &RelFunctor) -> bool {
    f.obj.len() == g.obj.len()
        && f.mor.len() == g.mor.len()
        && (Arc::ptr_eq(&f.cod, &g.cod) || f.cod.num_objects() == g.cod.num_objects())
}

#[derive(Clone, Debug)]
pub struct StrictHomotopy {
    pub h: RelFunctor,
    pub source: RelFunctor,
    pub target: RelFunctor,
}

impl StrictHomotopy {
    /// The homotopy with the given components `f y -> g y`. Naturality and
    /// weak equivalence of the components are left to [`StrictHomotopy::check`].
    pub fn from_components(f: &RelFunctor, g: &RelFunctor, components: &[usize]) -> Result<Self> {
        if !parallel(f, g) || components.len() != f.dom.num_objects() {
            return Err(Error::Shape("homotopy ends are not parallel".into()));
        }
        let i = interval();
        let (id0, id1, up) = interval_parts(&i);
        let z = &f.cod;
        let mi = i.num_morphisms();
        let dom = Arc::new(product(&f.dom, &i));
        let obj: Vec<usize> = (0..f.obj.len()).flat_map(|y| [f.obj[y], g.obj[y]]).collect();
        let mut mor = Vec::with_capacity(f.mor.len() * mi);
        for m in 0..f.mor.len() {
            let src = f.dom.morphism(m).src;
            for u in 0..mi {
                if u == id0 {
                    mor.push(f.mor[m]);
                } else if u == id1 {
                    mor.push(g.mor[m]);
                } else {
                    debug_assert_eq!(u, up);
                    let c = components[src];
                    let d = z.morphism(c);
                    if d.src != f.obj[src] || d.dst != g.obj[src] {
                        return Err(Error::Shape(format!(
                            "component at {} does not run from f to g",
                            f.dom.objects()[src]
                        )));
                    }
                    mor.push(z.compose(g.mor[m], c).ok_or_else(|| Error::Shape("component does not compose".into()))?);
                }
            }
        }
        let h = RelFunctor::new(dom, z.clone(), obj, mor)?;
        Ok(StrictHomotopy { h, source: f.clone(), target: g.clone() })
    }

    /// The homotopy given by the unique arrows `f y -> g y` of a thin codomain.
    pub fn from_arrows(f: &RelFunctor, g: &RelFunctor) -> Result<Self> {
        let z = &f.cod;
        let mut comps = Vec::with_capacity(f.obj.len());
        for y in 0..f.obj.len() {
            comps.push(z.arrow(f.obj[y], g.obj[y]).ok_or_else(|| {
                Error::Invalid(format!("no arrow {} -> {}", z.objects()[f.obj[y]], z.objects()[g.obj[y]]))
            })?);
        }
        Self::from_components(f, g, &comps)
    }

    pub fn constant(f: &RelFunctor) -> Self {
        let comps: Vec<usize> = f.obj.iter().map(|&o| f.cod.identity(o)).collect();
        Self::from_components(f, f, &comps).expect("identity components")
    }

    /// Read the ends of a functor `Y × 1̂ -> Z`.
    pub fn from_functor(h: RelFunctor, y: &Arc<RelCategory>) -> Result<Self> {
        let i = interval();
        let (id0, id1, _) = interval_parts(&i);
        let (ni, mi) = (i.num_objects(), i.num_morphisms());
        if h.obj.len() != y.num_objects() * ni || h.mor.len() != y.num_morphisms() * mi {
            return Err(Error::Shape("domain is not a cylinder on the given category".into()));
        }
        let end = |t: usize, id: usize| RelFunctor {
            dom: y.clone(),
            cod: h.cod.clone(),
            obj: (0..y.num_objects()).map(|o| h.obj[o * ni + t]).collect(),
            mor: (0..y.num_morphisms()).map(|m| h.mor[m * mi + id]).collect(),
        };
        let (source, target) = (end(0, id0), end(1, id1));
        Ok(StrictHomotopy { h, source, target })
    }

    pub fn components(&self) -> Vec<usize> {
        let i = interval();
        let (_, _, up) = interval_parts(&i);
        let mi = i.num_morphisms();
        (0..self.source.dom.num_objects())
            .map(|y| self.h.mor[self.source.dom.identity(y) * mi + up])
            .collect()
    }

    pub fn check(&self) -> bool {
        check_strict_homotopy(&self.h, &self.source, &self.target).unwrap_or(false)
    }

    /// `post ∘ self ∘ pre`.
    pub fn whiskered(&self, pre: &RelFunctor, post: &RelFunctor) -> Result<Self> {
        let f = post.after(&self.source.after(pre)?)?;
        let g = post.after(&self.target.after(pre)?)?;
        let comps = self.components();
        let c: Vec<usize> = pre.obj.iter().map(|&y| post.mor[comps[y]]).collect();
        Self::from_components(&f, &g, &c)
    }

    /// The same components read in the opposite categories, a homotopy `g^op => f^op`.
    pub fn opposite(&self) -> Result<Self> {
        let (f, g) = (self.source.opposite(), self.target.opposite());
        let g = g.with_domain(f.dom.clone()).with_codomain(f.cod.clone());
        Self::from_components(&g, &f, &self.components())
    }
}

/// True iff `h` is a relative functor `Y × 1̂ -> Z` with ends `f` and `g`.
pub fn check_strict_homotopy(h: &RelFunctor, f: &RelFunctor, g: &RelFunctor) -> Result<bool> {
    let i = interval();
    let (id0, id1, _) = interval_parts(&i);
    let (ni, mi) = (i.num_objects(), i.num_morphisms());
    if !parallel(f, g) || h.obj.len() != f.obj.len() * ni || h.mor.len() != f.mor.len() * mi {
        return Err(Error::Shape("homotopy and ends have incompatible shapes".into()));
    }
    if h.cod.num_objects() != f.cod.num_objects() || h.cod.num_morphisms() != f.cod.num_morphisms() {
        return Err(Error::Shape("homotopy and ends have different codomains".into()));
    }
    if !h.is_valid() {
        return Ok(false);
    }
    for y in 0..f.obj.len() {
        if h.obj[y * ni] != f.obj[y] || h.obj[y * ni + 1] != g.obj[y] {
            return Ok(false);
        }
    }
    for m in 0..f.mor.len() {
        if h.mor[m * mi + id0] != f.mor[m] || h.mor[m * mi + id1] != g.mor[m] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct Step {
    pub homotopy: StrictHomotopy,
    /// Forward steps run from the homotopy's source to its target.
    pub forward: bool,
}

impl Step {
    fn from(&self) -> &RelFunctor {
        if self.forward {
            &self.homotopy.source
        } else {
            &self.homotopy.target
        }
    }

    fn to(&self) -> &RelFunctor {
        if self.forward {
            &self.homotopy.target
        } else {
            &self.homotopy.source
        }
    }
}

/// A finite zigzag of strict homotopies starting at `start`.
#[derive(Clone, Debug)]
pub struct Zigzag {
    pub start: RelFunctor,
    pub steps: Vec<Step>,
}

impl Zigzag {
    pub fn identity(f: &RelFunctor) -> Self {
        Zigzag { start: f.clone(), steps: Vec::new() }
    }

    pub fn single(h: StrictHomotopy, forward: bool) -> Self {
        let start = if forward { h.source.clone() } else { h.target.clone() };
        Zigzag { start, steps: vec![Step { homotopy: h, forward }] }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &RelFunctor {
        self.steps.last().map_or(&self.start, Step::to)
    }

    pub fn then(mut self, other: Zigzag) -> Result<Zigzag> {
        if !self.end().same_maps(&other.start) {
            return Err(Error::Shape("zigzags do not meet".into()));
        }
        self.steps.extend(other.steps);
        Ok(self)
    }

    pub fn reversed(&self) -> Zigzag {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| Step { homotopy: s.homotopy.clone(), forward: !s.forward })
            .collect();
        Zigzag { start: self.end().clone(), steps }
    }

    /// `post ∘ self ∘ pre` stepwise.
    pub fn whiskered(&self, pre: &RelFunctor, post: &RelFunctor) -> Result<Zigzag> {
        let start = post.after(&self.start.after(pre)?)?;
        let steps = self
            .steps
            .iter()
            .map(|s| Ok(Step { homotopy: s.homotopy.whiskered(pre, post)?, forward: s.forward }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Zigzag { start, steps })
    }

    /// Every step is a strict homotopy and consecutive steps meet.
    pub fn check(&self) -> bool {
        let mut at = &self.start;
        for s in &self.steps {
            if !s.homotopy.check() || !s.from().same_maps(at) {
                return false;
            }
            at = s.to();
        }
        true
    }

    pub fn connects(&self, f: &RelFunctor, g: &RelFunctor) -> bool {
        self.check() && self.start.same_maps(f) && self.end().same_maps(g)
    }
}

/// The maximal fence `0 - 1 - … - n` with alternating arrows, the first one
/// pointing right when `first_forward`.
fn fence(n: usize, first_forward: bool) -> Arc<RelCategory> {
    let objects = (0..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<(usize, usize, bool)> = (0..n)
        .map(|i| if (i % 2 == 0) == first_forward { (i, i + 1, true) } else { (i + 1, i, true) })
        .collect();
    Arc::new(RelCategory::thin(objects, &arrows).expect("fence"))
}

/// Cut a functor `Y × J -> Z` over a fence `J` into a zigzag from position 0 to the last.
fn slice_fence(h: &RelFunctor, y: &Arc<RelCategory>, j: &RelCategory) -> Result<Zigzag> {
    let (nj, mj) = (j.num_objects(), j.num_morphisms());
    let at = |t: usize| RelFunctor {
        dom: y.clone(),
        cod: h.cod.clone(),
        obj: (0..y.num_objects()).map(|o| h.obj[o * nj + t]).collect(),
        mor: (0..y.num_morphisms()).map(|m| h.mor[m * mj + j.identity(t)]).collect(),
    };
    let mut zz = Zigzag::identity(&at(0));
    for t in 0..nj.saturating_sub(1) {
        let (e, forward, a, b) = match j.arrow(t, t + 1) {
            Some(e) => (e, true, t, t + 1),
            None => (j.arrow(t + 1, t).ok_or_else(|| Error::Shape("not a fence".into()))?, false, t + 1, t),
        };
        let comps: Vec<usize> = (0..y.num_objects()).map(|o| h.mor[y.identity(o) * mj + e]).collect();
        let hom = StrictHomotopy::from_components(&at(a), &at(b), &comps)?;
        zz.steps.push(Step { homotopy: hom, forward });
    }
    Ok(zz)
}

/// A zigzag of length at most `bound` from `f` to `g`, found by searching
/// relative functors `Y × fence -> Z` with prescribed ends. Consecutive steps
/// of equal direction compose, so alternating fences suffice.
pub fn are_homotopic(f: &RelFunctor, g: &RelFunctor, bound: usize) -> Result<Option<Zigzag>> {
    if !parallel(f, g) {
        return Err(Error::Shape("maps are not parallel".into()));
    }
    if f.same_maps(g) {
        return Ok(Some(Zigzag::identity(f)));
    }
    for n in 1..=bound {
        for first_forward in [true, false] {
            let j = fence(n, first_forward);
            let cyl = Arc::new(product(&f.dom, &j));
            let (nj, mj) = (j.num_objects(), j.num_morphisms());
            let mut c = Constraints::new(&cyl);
            for y in 0..f.obj.len() {
                c.obj[y * nj] = Some(f.obj[y]);
                c.obj[y * nj + n] = Some(g.obj[y]);
            }
            for m in 0..f.mor.len() {
                c.mor[m * mj + j.identity(0)] = Some(f.mor[m]);
                c.mor[m * mj + j.identity(n)] = Some(g.mor[m]);
            }
            if let Some(h) = find_functor(&cyl, &f.cod, Some(&c), |_, _| true) {
                let mut zz = slice_fence(&h, &f.dom, &j)?;
                zz.start = f.clone();
                return Ok(Some(zz));
            }
        }
    }
    Ok(None)
}

/// A homotopy equivalence with its inverse and two witnessing zigzags.
#[derive(Clone, Debug)]
pub struct HomotopyEquivalence {
    pub map: RelFunctor,
    pub inverse: RelFunctor,
    /// From `inverse ∘ map` to the identity of the domain.
    pub unit: Zigzag,
    /// From `map ∘ inverse` to the identity of the codomain.
    pub counit: Zigzag,
}

impl HomotopyEquivalence {
    pub fn check(&self) -> bool {
        let (Ok(im), Ok(mi)) = (self.inverse.after(&self.map), self.map.after(&self.inverse)) else {
            return false;
        };
        self.unit.connects(&im, &RelFunctor::identity(&self.map.dom))
            && self.counit.connects(&mi, &RelFunctor::identity(&self.map.cod))
    }

    pub fn identity(c: &Arc<RelCategory>) -> Self {
        let id = RelFunctor::identity(c);
        HomotopyEquivalence { map: id.clone(), inverse: id.clone(), unit: Zigzag::identity(&id), counit: Zigzag::identity(&id) }
    }

    /// An equivalence from a section `inverse` with `map ∘ inverse = id` and a
    /// single strict homotopy between `inverse ∘ map` and the identity, read
    /// from the arrows of a thin domain in whichever direction exists.
    pub fn from_section(map: &RelFunctor, inverse: &RelFunctor) -> Result<Self> {
        let mi = map.after(inverse)?;
        if !mi.same_maps(&RelFunctor::identity(&map.cod)) {
            return Err(Error::Invalid("not a section".into()));
        }
        let im = inverse.after(map)?;
        let id = RelFunctor::identity(&map.dom);
        let unit = match StrictHomotopy::from_arrows(&im, &id) {
            Ok(h) if h.check() => Zigzag::single(h, true),
            _ => {
                let h = StrictHomotopy::from_arrows(&id, &im)?;
                if !h.check() {
                    return Err(Error::Invalid("no weak equivalence between the composite and the identity".into()));
                }
                Zigzag::single(h, false)
            }
        };
        Ok(HomotopyEquivalence { map: map.clone(), inverse: inverse.clone(), unit, counit: Zigzag::identity(&mi) })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &HomotopyEquivalence) -> Result<Self> {
        let map = next.map.after(&self.map)?;
        let inverse = self.inverse.after(&next.inverse)?;
        let unit = next.unit.whiskered(&self.map, &self.inverse)?.then(self.unit.clone())?;
        let counit = self.counit.whiskered(&next.inverse, &next.map)?.then(next.counit.clone())?;
        Ok(HomotopyEquivalence { map, inverse, unit, counit })
    }

    /// Given equivalences `f` and `h` with `f ∘ g = h`, the equivalence `g`.
    pub fn cancel_left(g: &RelFunctor, f: &HomotopyEquivalence, h: &HomotopyEquivalence) -> Result<Self> {
        if !f.map.after(g)?.same_maps(&h.map) {
            return Err(Error::Invalid("square does not commute".into()));
        }
        let inverse = h.inverse.after(&f.map)?;
        let id_b = RelFunctor::identity(&g.cod);
        let unit = h.unit.clone();
        let unit = Zigzag { start: inverse.after(g)?, ..unit };
        // g h' f  ~  f' f g h' f  =  f' h h' f  ~  f' f  ~  id
        let ghf = g.after(&h.inverse)?.after(&f.map)?;
        let a = f.unit.whiskered(&ghf, &id_b)?.reversed();
        let b = h.counit.whiskered(&f.map, &f.inverse)?;
        let b = Zigzag { start: a.end().clone(), ..b };
        let counit = a.then(b)?.then(f.unit.clone())?;
        Ok(HomotopyEquivalence { map: g.clone(), inverse, unit, counit })
    }

    /// Given equivalences `f` and `h` with `g ∘ f = h`, the equivalence `g`.
    pub fn cancel_right(g: &RelFunctor, f: &HomotopyEquivalence, h: &HomotopyEquivalence) -> Result<Self> {
        if !g.after(&f.map)?.same_maps(&h.map) {
            return Err(Error::Invalid("square does not commute".into()));
        }
        let inverse = f.map.after(&h.inverse)?;
        let counit = Zigzag { start: g.after(&inverse)?, ..h.counit.clone() };
        // f h' g  ~  f h' g f f'  =  f h' h f'  ~  f f'  ~  id
        let fhg = f.map.after(&h.inverse)?.after(g)?;
        let id_b = RelFunctor::identity(&g.dom);
        let a = f.counit.whiskered(&id_b, &fhg)?.reversed();
        let b = h.unit.whiskered(&f.inverse, &f.map)?;
        let b = Zigzag { start: a.end().clone(), ..b };
        let unit = a.then(b)?.then(f.counit.clone())?;
        Ok(HomotopyEquivalence { map: g.clone(), inverse, unit, counit })
    }
}

/// Bounded search for a homotopy inverse: candidates `Z -> Y` in canonical order.
pub fn find_homotopy_equivalence(f: &RelFunctor, bound: usize) -> Result<Option<HomotopyEquivalence>> {
    if f.is_isomorphism() {
        let inverse = f.inverse()?;
        return Ok(Some(HomotopyEquivalence {
            map: f.clone(),
            unit: Zigzag::identity(&inverse.after(f)?),
            counit: Zigzag::identity(&f.after(&inverse)?),
            inverse,
        }));
    }
    let id_y = RelFunctor::identity(&f.dom);
    let id_z = RelFunctor::identity(&f.cod);
    let mut found = None;
    let mut failure = None;
    for_each_functor(&f.cod, &f.dom, None, |o, m| {
        let inv = RelFunctor { dom: f.cod.clone(), cod: f.dom.clone(), obj: o.to_vec(), mor: m.to_vec() };
        let attempt = (|| -> Result<Option<HomotopyEquivalence>> {
            let Some(unit) = are_homotopic(&inv.after(f)?, &id_y, bound)? else { return Ok(None) };
            let Some(counit) = are_homotopic(&f.after(&inv)?, &id_z, bound)? else { return Ok(None) };
            Ok(Some(HomotopyEquivalence { map: f.clone(), inverse: inv.clone(), unit, counit }))
        })();
        match attempt {
            Ok(Some(e)) => {
                found = Some(e);
                false
            }
            Ok(None) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// A retraction `r: Z -> A` and a strict homotopy `incl ∘ r => id`.
#[derive(Clone, Debug)]
pub struct SdrWitness {
    pub r: RelFunctor,
    pub s: StrictHomotopy,
}

fn require_inclusion(incl: &RelFunctor) -> Result<()> {
    if incl.is_relative_inclusion() {
        Ok(())
    } else {
        Err(Error::Precondition("not a relative inclusion".into()))
    }
}

/// Checks that `r` fixes `A`, that `s` is a strict homotopy `incl ∘ r => id`
/// and that `s` is the identity on `A`.
pub fn verify_sdr(incl: &RelFunctor, w: &SdrWitness) -> Result<bool> {
    require_inclusion(incl)?;
    let z = &incl.cod;
    if w.r.obj.len() != z.num_objects() || w.r.cod.num_objects() != incl.dom.num_objects() {
        return Ok(false);
    }
    if !w.r.is_valid() || !w.r.after(incl)?.same_maps(&RelFunctor::identity(&incl.dom)) {
        return Ok(false);
    }
    let ir = incl.after(&w.r)?;
    if !w.s.source.same_maps(&ir) || !w.s.target.same_maps(&RelFunctor::identity(z)) || !w.s.check() {
        return Ok(false);
    }
    let comps = w.s.components();
    Ok(incl.obj.iter().all(|&a| comps[a] == z.identity(a)))
}

/// The first strong deformation retraction in canonical order, or none.
/// `budget` caps the number of retractions tried.
pub fn find_sdr(incl: &RelFunctor, budget: Option<usize>) -> Result<Option<SdrWitness>> {
    require_inclusion(incl)?;
    let (a, z) = (&incl.dom, &incl.cod);
    let mut c = Constraints::new(z);
    for (i, &o) in incl.obj.iter().enumerate() {
        c.obj[o] = Some(i);
    }
    for (i, &m) in incl.mor.iter().enumerate() {
        c.mor[m] = Some(i);
    }
    let i = interval();
    let (id0, id1, up) = interval_parts(&i);
    let (ni, mi) = (i.num_objects(), i.num_morphisms());
    let cyl = Arc::new(product(z, &i));
    let id_z = RelFunctor::identity(z);
    let mut tried = 0usize;
    let mut found = None;
    let mut over = false;
    for_each_functor(z, a, Some(&c), |o, m| {
        tried += 1;
        if budget.is_some_and(|b| tried > b) {
            over = true;
            return false;
        }
        let r = RelFunctor { dom: z.clone(), cod: a.clone(), obj: o.to_vec(), mor: m.to_vec() };
        let ir = incl.after(&r).expect("composable");
        let mut hc = Constraints::new(&cyl);
        for y in 0..z.num_objects() {
            hc.obj[y * ni] = Some(ir.obj[y]);
            hc.obj[y * ni + 1] = Some(y);
        }
        for k in 0..z.num_morphisms() {
            hc.mor[k * mi + id0] = Some(ir.mor[k]);
            hc.mor[k * mi + id1] = Some(k);
        }
        for &x in &incl.obj {
            hc.mor[z.identity(x) * mi + up] = Some(z.identity(x));
        }
        if let Some(h) = find_functor(&cyl, z, Some(&hc), |_, _| true) {
            found = Some(SdrWitness { r, s: StrictHomotopy { h, source: ir, target: id_z.clone() } });
            return false;
        }
        true
    });
    if over {
        return Err(Error::Budget(format!("more than {} retractions tried", budget.unwrap_or(0))));
    }
    Ok(found)
}

/// The maximal fence `j0 -> j1 <- j2 -> … <- j2n`, or its opposite for the
/// initial subdivision.
pub fn build_j(n: usize, kind: Kind) -> Result<Arc<RelCategory>> {
    if n < 1 {
        return Err(Error::Precondition("the fence needs n >= 1".into()));
    }
    let objects = (0..=2 * n).map(|i| format!("j{i}")).collect();
    let mut arrows = Vec::new();
    for i in 0..n {
        let (a, b, c) = (2 * i, 2 * i + 1, 2 * i + 2);
        match kind {
            Kind::Terminal => arrows.extend([(a, b, true), (c, b, true)]),
            Kind::Initial => arrows.extend([(b, a, true), (b, c, true)]),
        }
    }
    Ok(Arc::new(RelCategory::thin(objects, &arrows)?))
}

/// Objects of a poset in a linear extension, smallest available index first.
pub fn linear_extension(p: &RelCategory) -> Vec<usize> {
    let n = p.num_objects();
    let mut indeg = vec![0usize; n];
    for m in p.morphisms() {
        if m.src != m.dst {
            indeg[m.dst] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&o| indeg[o] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(&o) = ready.iter().next() {
        ready.remove(&o);
        out.push(o);
        for &m in p.out_morphisms(o) {
            let d = p.morphism(m).dst;
            if d != o {
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    ready.insert(d);
                }
            }
        }
    }
    out
}

/// The map `k: ξP × J -> ξ(P × 1̂)` for a terminal or initial subdivision `ξ`.
#[derive(Clone, Debug)]
pub struct KMap {
    pub kind: Kind,
    /// Position of each object of P in the chosen linear extension, from 1.
    pub number: Vec<usize>,
    pub j: Arc<RelCategory>,
    pub sub: Subdivision,
    pub cylinder: Subdivision,
    pub k: RelFunctor,
}

/// The chain `k(c, j_t)` in `P × 1̂`: elements numbered at most `t/2` carry
/// `0`, the rest `1`, and at odd `t` the element numbered `(t+1)/2` carries both.
pub fn k_chain(number: &[usize], chain: &[usize], t: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(chain.len() + 1);
    let i = t / 2;
    for &x in chain {
        let nx = number[x];
        if t % 2 == 1 && nx == i + 1 {
            out.push(x * 2);
            out.push(x * 2 + 1);
        } else if nx <= i {
            out.push(x * 2);
        } else {
            out.push(x * 2 + 1);
        }
    }
    out
}

pub fn k_map(p: &Arc<RelCategory>, kind: Kind) -> Result<KMap> {
    p.require_poset("the subdivision homotopy needs a relative poset")?;
    let n = p.num_objects();
    let mut number = vec![0; n];
    for (pos, &o) in linear_extension(p).iter().enumerate() {
        number[o] = pos + 1;
    }
    let j = build_j(n.max(1), kind)?;
    let sub = subdivision(p, kind)?;
    let cyl_base = Arc::new(product(p, &interval()));
    let cylinder = subdivision(&cyl_base, kind)?;
    let nj = j.num_objects();
    let dom = Arc::new(product(&sub.sub, &j));
    let mut obj = Vec::with_capacity(dom.num_objects());
    for c in &sub.chains {
        for t in 0..nj {
            let img = k_chain(&number, c, t);
            obj.push(cylinder.chain_index(&img).ok_or_else(|| Error::Invalid("k image is not a chain".into()))?);
        }
    }
    let k = RelFunctor::from_object_map(dom, cylinder.sub.clone(), obj)?;
    let bad = k.violations();
    if !bad.is_empty() {
        return Err(Error::Invalid(format!("k is not a relative functor: {}", bad.join("; "))));
    }
    Ok(KMap { kind, number, j, sub, cylinder, k })
}

/// A zigzag from `ξf` to `ξg` built from a strict homotopy `f => g` of maps out
/// of a finite relative poset, through `ξh ∘ k`.
pub fn k_homotopy(h: &StrictHomotopy, kind: Kind) -> Result<Zigzag> {
    let p = &h.source.dom;
    let x = &h.h.cod;
    let sx = subdivision(x, kind)?;
    let km = k_map(p, kind)?;
    let xf = subdivide_map(&h.source, &km.sub, &sx)?;
    let xg = subdivide_map(&h.target, &km.sub, &sx)?;
    if p.num_objects() == 0 {
        return Ok(Zigzag::identity(&xf));
    }
    let xh = subdivide_map(&h.h, &km.cylinder, &sx)?;
    let big = xh.after(&km.k)?;
    let zz = slice_fence(&big, &km.sub.sub, &km.j)?.reversed();
    if !zz.connects(&xf, &xg) {
        return Err(Error::Invalid("the assembled zigzag does not connect the subdivided ends".into()));
    }
    Ok(zz)
}

/// Apply a subdivision to every step of a zigzag of maps between finite relative posets.
pub fn subdivide_zigzag(zz: &Zigzag, kind: Kind) -> Result<Zigzag> {
    let sp = subdivision(&zz.start.dom, kind)?;
    let sx = subdivision(&zz.start.cod, kind)?;
    let mut out = Zigzag::identity(&subdivide_map(&zz.start, &sp, &sx)?);
    for s in &zz.steps {
        let part = k_homotopy(&s.homotopy, kind)?;
        out = out.then(if s.forward { part } else { part.reversed() })?;
    }
    Ok(out)
}

/// The subdivided equivalence `ξe` with subdivided witnesses.
pub fn subdivide_equivalence(e: &HomotopyEquivalence, kind: Kind) -> Result<HomotopyEquivalence> {
    let sd = subdivision(&e.map.dom, kind)?;
    let sc = subdivision(&e.map.cod, kind)?;
    Ok(HomotopyEquivalence {
        map: subdivide_map(&e.map, &sd, &sc)?,
        inverse: subdivide_map(&e.inverse, &sc, &sd)?,
        unit: subdivide_zigzag(&e.unit, kind)?,
        counit: subdivide_zigzag(&e.counit, kind)?,
    })
}

/// The strict homotopy `f* => g*` of precomposition maps `Z^Y -> Z^X`
/// induced by a strict homotopy `f => g: X -> Y`.
pub fn precomposition_homotopy(h: &StrictHomotopy, zy: &Exponential, zx: &Exponential) -> Result<StrictHomotopy> {
    let fs = induced_exponential_map(&h.source, zy, zx)?;
    let gs = induced_exponential_map(&h.target, zy, zx)?;
    let eta = h.components();
    let mut comps = Vec::with_capacity(zy.functors.len());
    for (i, func) in zy.functors.iter().enumerate() {
        let c: Vec<usize> = eta.iter().map(|&e| func.mor[e]).collect();
        comps.push(
            zx.transformation(fs.obj[i], gs.obj[i], &c)
                .ok_or_else(|| Error::Invalid("induced transformation missing".into()))?,
        );
    }
    StrictHomotopy::from_components(&fs, &gs, &comps)
}

/// `i ↦ (0,…,i)`, a section of the projection `ξ_t p̌ -> p̌`.
pub fn terminal_section(p: usize) -> Result<(Subdivision, RelFunctor)> {
    let pc = Arc::new(arrow_category(p, Flavor::Minimal));
    let s = xi_t(&pc)?;
    let obj = (0..=p).map(|i| s.chain_index(&(0..=i).collect::<Vec<_>>()).expect("chain")).collect();
    let f = RelFunctor::from_object_map(pc, s.sub.clone(), obj)?;
    Ok((s, f))
}

/// `i ↦ (i,…,p)`, a section of the projection `ξ_i p̌ -> p̌`.
pub fn initial_section(p: usize) -> Result<(Subdivision, RelFunctor)> {
    let pc = Arc::new(arrow_category(p, Flavor::Minimal));
    let s = xi_i(&pc)?;
    let obj = (0..=p).map(|i| s.chain_index(&(i..=p).collect::<Vec<_>>()).expect("chain")).collect();
    let f = RelFunctor::from_object_map(pc, s.sub.clone(), obj)?;
    Ok((s, f))
}

/// The assignment `i ↦ (p-i,…,p)` into `ξ_i p̌`, which is a functor only for `p = 0`.
pub fn reversed_initial_assignment(p: usize) -> Result<RelFunctor> {
    let pc = Arc::new(arrow_category(p, Flavor::Minimal));
    let s = xi_i(&pc)?;
    let obj = (0..=p).map(|i| s.chain_index(&((p - i)..=p).collect::<Vec<_>>()).expect("chain")).collect();
    RelFunctor::from_object_map(pc, s.sub.clone(), obj)
}

/// Witnessed homotopy equivalences for the maps of the square relating
/// `ξ(p̌×q̂) -> ξ_i(p̌×q̂) -> p̌×q̂` to `ξp̌ -> ξ_ip̌ -> p̌`, together with the
/// auxiliary maps `π_t: ξ_t p̌ -> p̌` and `ξ_t π_i`. Maps with an explicit
/// section carry a single strict homotopy; the others are obtained by
/// subdividing zigzags and cancelling in commutative squares.
pub fn subdivision_square_equivalences(p: usize, q: usize) -> Result<Vec<(&'static str, HomotopyEquivalence)>> {
    let pc = Arc::new(arrow_category(p, Flavor::Minimal));
    let qc = Arc::new(arrow_category(q, Flavor::Maximal));
    let prod = Arc::new(product(&pc, &qc));
    let proj = first_projection(&pc, &qc, &prod);
    let zero = (0..=p).map(|a| a * (q + 1)).collect();
    let incl0 = RelFunctor::from_object_map(pc.clone(), prod.clone(), zero)?;
    let e_proj = HomotopyEquivalence::from_section(&proj, &incl0)?;

    let (si, sec_i) = initial_section(p)?;
    let e_pi_i = HomotopyEquivalence::from_section(&si.proj, &sec_i)?;
    let (st, sec_t) = terminal_section(p)?;
    let e_pi_t = HomotopyEquivalence::from_section(&st.proj, &sec_t)?;

    let e_xi_i_proj = subdivide_equivalence(&e_proj, Kind::Initial)?;
    let e_xi_proj = subdivide_equivalence(&e_xi_i_proj, Kind::Terminal)?;
    let e_xi_t_pi_i = subdivide_equivalence(&e_pi_i, Kind::Terminal)?;

    let base = xi(&pc)?;
    let e_pit_base = HomotopyEquivalence::cancel_left(&base.outer.proj, &e_pi_i, &e_xi_t_pi_i.then(&e_pi_t)?)?;

    let top = xi(&prod)?;
    let e_pi_i_top = HomotopyEquivalence::cancel_left(&top.inner.proj, &e_proj, &e_xi_i_proj.then(&e_pi_i)?)?;
    let e_pit_top = HomotopyEquivalence::cancel_left(&top.outer.proj, &e_xi_i_proj, &e_xi_proj.then(&e_pit_base)?)?;

    Ok(vec![
        ("proj", e_proj),
        ("xi_i proj", e_xi_i_proj),
        ("xi proj", e_xi_proj),
        ("pi_i", e_pi_i),
        ("pi_t xi_i", e_pit_base),
        ("pi_i on the product", e_pi_i_top),
        ("pi_t xi_i on the product", e_pit_top),
        ("pi_t", e_pi_t),
        ("xi_t pi_i", e_xi_t_pi_i),
    ])
}
