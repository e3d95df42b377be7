//! Finite relative categories and relative functors.
//!
//! Morphisms carry explicit ids. Composition is either an explicit table or,
//! for thin categories (at most one morphism between any two objects), the
//! unique morphism between the outer endpoints.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub we: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Composition {
    Thin,
    Table(HashMap<(usize, usize), usize>),
}

#[derive(Clone, Debug)]
pub struct RelCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    composition: Composition,
    hom: HashMap<(usize, usize), Vec<usize>>,
    obj_index: HashMap<String, usize>,
    mor_index: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl PartialEq for RelCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.composition == other.composition
    }
}

impl Eq for RelCategory {}

/// Category data without weak equivalences, input to [`make_minimal`] and [`make_maximal`].
#[derive(Clone, Debug, Default)]
pub struct CategoryData {
    pub objects: Vec<String>,
    /// Non-identity morphisms as (id, src, dst).
    pub morphisms: Vec<(String, usize, usize)>,
    /// Composites (g, f, g∘f) indexing into `morphisms`; may be empty for thin data.
    pub composites: Vec<(usize, usize, usize)>,
}

impl CategoryData {
    pub fn linear_order(k: usize) -> Self {
        let objects = (0..=k).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        for a in 0..=k {
            for b in a + 1..=k {
                morphisms.push((format!("{a}->{b}"), a, b));
            }
        }
        CategoryData { objects, morphisms, composites: Vec::new() }
    }
}

/// A single failed axiom, naming the witnessing morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadIdentity { object: String, morphism: String },
    IdentityNotWe { object: String, morphism: String },
    IdentityLaw { identity: String, f: String },
    MissingComposite { g: String, f: String },
    CompositeEnds { g: String, f: String, h: String },
    NotComposable { g: String, f: String },
    NotAssociative { h: String, g: String, f: String },
    WeNotClosed { g: String, f: String, h: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadIdentity { object, morphism } => {
                write!(out, "identity {morphism} of {object} is not an endomorphism of it")
            }
            Violation::IdentityNotWe { object, morphism } => {
                write!(out, "identity {morphism} of {object} is not a weak equivalence")
            }
            Violation::IdentityLaw { identity, f } => {
                write!(out, "identity law fails for {identity} and {f}")
            }
            Violation::MissingComposite { g, f } => write!(out, "composite {g}.{f} undefined"),
            Violation::CompositeEnds { g, f, h } => {
                write!(out, "composite {g}.{f} = {h} has the wrong source or target")
            }
            Violation::NotComposable { g, f } => {
                write!(out, "composite {g}.{f} defined on a non-composable pair")
            }
            Violation::NotAssociative { h, g, f } => {
                write!(out, "({h}.{g}).{f} differs from {h}.({g}.{f})")
            }
            Violation::WeNotClosed { g, f, h } => {
                write!(out, "{g} and {f} are weak equivalences but {h} = {g}.{f} is not")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Minimal,
    Maximal,
}

impl RelCategory {
    /// Builds a category from explicit data. Identities are listed per object.
    /// `composites` holds (g, f, g∘f); composites with identities are filled in
    /// when absent. With no composites and all hom-sets of size at most one the
    /// category is thin and composition is implicit.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        composites: Vec<(usize, usize, usize)>,
    ) -> Result<Self> {
        let n = objects.len();
        let m = morphisms.len();
        if identities.len() != n {
            return Err(Error::Invalid(format!(
                "{} identities for {} objects",
                identities.len(),
                n
            )));
        }
        let mut obj_index = HashMap::with_capacity(n);
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate object id {o}")));
            }
        }
        let mut mor_index = HashMap::with_capacity(m);
        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, f) in morphisms.iter().enumerate() {
            if f.src >= n || f.dst >= n {
                return Err(Error::Invalid(format!("morphism {} has an unknown endpoint", f.id)));
            }
            out[f.src].push(i);
            inc[f.dst].push(i);
            if mor_index.insert(f.id.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate morphism id {}", f.id)));
            }
            hom.entry((f.src, f.dst)).or_default().push(i);
        }
        if let Some(&bad) = identities.iter().find(|&&i| i >= m) {
            return Err(Error::Invalid(format!("identity index {bad} out of range")));
        }
        for &(g, f, h) in &composites {
            if g >= m || f >= m || h >= m {
                return Err(Error::Invalid("composite entry out of range".into()));
            }
        }
        let thin = hom.values().all(|v| v.len() <= 1);
        let composition = if thin && composites.is_empty() {
            Composition::Thin
        } else {
            let mut table = HashMap::new();
            for &(g, f, h) in &composites {
                table.insert((g, f), h);
            }
            for (i, f) in morphisms.iter().enumerate() {
                let (s, d) = (f.src, f.dst);
                table.entry((identities[d], i)).or_insert(i);
                table.entry((i, identities[s])).or_insert(i);
            }
            Composition::Table(table)
        };
        Ok(RelCategory { objects, morphisms, identities, composition, hom, obj_index, mor_index, out, inc })
    }

    /// A thin category on `objects` with the given non-identity arrows
    /// (src, dst, we). Identities are named `1_x` and arrows `x->y`.
    pub fn thin(objects: Vec<String>, arrows: &[(usize, usize, bool)]) -> Result<Self> {
        let mut morphisms: Vec<Morphism> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism { id: format!("1_{o}"), src: i, dst: i, we: true })
            .collect();
        let identities = (0..objects.len()).collect();
        let mut sorted = arrows.to_vec();
        sorted.sort();
        for &(a, b, we) in &sorted {
            if a >= objects.len() || b >= objects.len() {
                return Err(Error::Invalid("arrow endpoint out of range".into()));
            }
            morphisms.push(Morphism {
                id: format!("{}->{}", objects[a], objects[b]),
                src: a,
                dst: b,
                we,
            });
        }
        RelCategory::new(objects, morphisms, identities, Vec::new())
    }

    pub fn empty() -> Self {
        RelCategory::new(Vec::new(), Vec::new(), Vec::new(), Vec::new()).expect("empty category")
    }

    pub fn terminal() -> Self {
        arrow_category(0, Flavor::Minimal)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, i: usize) -> &Morphism {
        &self.morphisms[i]
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, m: usize) -> bool {
        let f = &self.morphisms[m];
        f.src == f.dst && self.identities[f.src] == m
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.obj_index.get(id).copied()
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.mor_index.get(id).copied()
    }

    pub fn is_thin(&self) -> bool {
        matches!(self.composition, Composition::Thin)
    }

    /// Explicit composites (g, f, g∘f), empty for thin categories.
    pub fn composite_table(&self) -> Vec<(usize, usize, usize)> {
        match &self.composition {
            Composition::Thin => Vec::new(),
            Composition::Table(t) => {
                let mut v: Vec<_> = t.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
                v.sort();
                v
            }
        }
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.hom.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// First morphism a -> b, the unique one in a thin category.
    pub fn arrow(&self, a: usize, b: usize) -> Option<usize> {
        self.hom(a, b).first().copied()
    }

    pub fn has_we(&self, a: usize, b: usize) -> bool {
        self.hom(a, b).iter().any(|&m| self.morphisms[m].we)
    }

    /// `g ∘ f`, or None when not composable or not defined.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let (fm, gm) = (&self.morphisms[f], &self.morphisms[g]);
        if fm.dst != gm.src {
            return None;
        }
        match &self.composition {
            Composition::Thin => self.arrow(fm.src, gm.dst),
            Composition::Table(t) => t.get(&(g, f)).copied(),
        }
    }

    /// Composite of a path given in application order (first morphism first).
    pub fn compose_path(&self, path: &[usize]) -> Option<usize> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.compose(g, acc))
    }

    pub fn is_minimal(&self) -> bool {
        self.morphisms.iter().enumerate().all(|(i, f)| f.we == self.is_identity(i))
    }

    pub fn is_maximal(&self) -> bool {
        self.morphisms.iter().all(|f| f.we)
    }

    /// Thin and antisymmetric.
    pub fn is_poset(&self) -> bool {
        self.is_thin()
            && self
                .morphisms
                .iter()
                .all(|f| f.src == f.dst || self.hom(f.dst, f.src).is_empty())
    }

    pub fn require_poset(&self, what: &str) -> Result<()> {
        if self.is_poset() && self.validate().is_empty() {
            Ok(())
        } else {
            Err(Error::NotPoset(what.to_string()))
        }
    }

    /// Every failed axiom. Empty means the data is a relative category.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let name = |m: usize| self.morphisms[m].id.clone();
        for (o, &i) in self.identities.iter().enumerate() {
            let f = &self.morphisms[i];
            if f.src != o || f.dst != o {
                out.push(Violation::BadIdentity { object: self.objects[o].clone(), morphism: name(i) });
            } else if !f.we {
                out.push(Violation::IdentityNotWe { object: self.objects[o].clone(), morphism: name(i) });
            }
        }
        match &self.composition {
            Composition::Thin => {
                for f in 0..self.morphisms.len() {
                    let fm = &self.morphisms[f];
                    for &g in &self.out[fm.dst] {
                        match self.arrow(fm.src, self.morphisms[g].dst) {
                            None => out.push(Violation::MissingComposite { g: name(g), f: name(f) }),
                            Some(h) => {
                                if fm.we && self.morphisms[g].we && !self.morphisms[h].we {
                                    out.push(Violation::WeNotClosed { g: name(g), f: name(f), h: name(h) });
                                }
                            }
                        }
                    }
                }
            }
            Composition::Table(t) => {
                for (&(g, f), &h) in t {
                    let (fm, gm, hm) = (&self.morphisms[f], &self.morphisms[g], &self.morphisms[h]);
                    if fm.dst != gm.src {
                        out.push(Violation::NotComposable { g: name(g), f: name(f) });
                    } else if hm.src != fm.src || hm.dst != gm.dst {
                        out.push(Violation::CompositeEnds { g: name(g), f: name(f), h: name(h) });
                    }
                }
                for f in 0..self.morphisms.len() {
                    let fm = &self.morphisms[f];
                    let (s, d) = (self.identities[fm.src], self.identities[fm.dst]);
                    if t.get(&(d, f)) != Some(&f) {
                        out.push(Violation::IdentityLaw { identity: name(d), f: name(f) });
                    }
                    if t.get(&(f, s)) != Some(&f) {
                        out.push(Violation::IdentityLaw { identity: name(s), f: name(f) });
                    }
                }
                let mut pairs = Vec::new();
                for f in 0..self.morphisms.len() {
                    for &g in self.out_morphisms(self.morphisms[f].dst) {
                        pairs.push((g, f));
                        match t.get(&(g, f)) {
                            None => out.push(Violation::MissingComposite { g: name(g), f: name(f) }),
                            Some(&h) => {
                                if self.morphisms[f].we && self.morphisms[g].we && !self.morphisms[h].we {
                                    out.push(Violation::WeNotClosed { g: name(g), f: name(f), h: name(h) });
                                }
                            }
                        }
                    }
                }
                for &(g, f) in &pairs {
                    let Some(&gf) = t.get(&(g, f)) else { continue };
                    for &h in self.out_morphisms(self.morphisms[g].dst) {
                        let (Some(&hg), Some(&lhs)) = (t.get(&(h, g)), t.get(&(h, gf))) else {
                            continue;
                        };
                        if t.get(&(hg, f)) != Some(&lhs) {
                            out.push(Violation::NotAssociative { h: name(h), g: name(g), f: name(f) });
                        }
                    }
                }
            }
        }
        out.sort_by_key(|v| v.to_string());
        out.dedup();
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Morphisms with source `a`, in index order.
    pub fn out_morphisms(&self, a: usize) -> &[usize] {
        &self.out[a]
    }

    /// Morphisms with target `a`, in index order.
    pub fn in_morphisms(&self, a: usize) -> &[usize] {
        &self.inc[a]
    }

    pub fn with_we(&self, we: impl Fn(usize, &Morphism) -> bool) -> Result<Self> {
        let morphisms = self
            .morphisms
            .iter()
            .enumerate()
            .map(|(i, f)| Morphism { we: we(i, f), ..f.clone() })
            .collect();
        RelCategory::new(self.objects.clone(), morphisms, self.identities.clone(), self.composite_table())
    }

    /// Same category with objects and morphisms renamed.
    pub fn renamed(&self, objects: Vec<String>, morphisms: Vec<String>) -> Result<Self> {
        let morphisms = self
            .morphisms
            .iter()
            .zip(morphisms)
            .map(|(f, id)| Morphism { id, ..f.clone() })
            .collect();
        RelCategory::new(objects, morphisms, self.identities.clone(), self.composite_table())
    }

    /// Src/dst swapped and composition reversed; ids and we flags kept.
    pub fn opposite(&self) -> RelCategory {
        let morphisms = self
            .morphisms
            .iter()
            .map(|f| Morphism { id: f.id.clone(), src: f.dst, dst: f.src, we: f.we })
            .collect();
        let composites = self.composite_table().into_iter().map(|(g, f, h)| (f, g, h)).collect();
        RelCategory::new(self.objects.clone(), morphisms, self.identities.clone(), composites)
            .expect("opposite of valid data")
    }

    /// Full relative subcategory on the given objects (in the given order),
    /// with its inclusion.
    pub fn full_subcategory(self: &Arc<Self>, objects: &[usize]) -> Result<RelFunctor> {
        let mut pos = vec![usize::MAX; self.num_objects()];
        for (i, &o) in objects.iter().enumerate() {
            pos[o] = i;
        }
        let names = objects.iter().map(|&o| self.objects[o].clone()).collect();
        let mut keep = Vec::new();
        let mut new_index = vec![usize::MAX; self.num_morphisms()];
        for (i, f) in self.morphisms.iter().enumerate() {
            if pos[f.src] != usize::MAX && pos[f.dst] != usize::MAX {
                new_index[i] = keep.len();
                keep.push(i);
            }
        }
        let morphisms = keep
            .iter()
            .map(|&i| {
                let f = &self.morphisms[i];
                Morphism { id: f.id.clone(), src: pos[f.src], dst: pos[f.dst], we: f.we }
            })
            .collect();
        let identities = objects.iter().map(|&o| new_index[self.identities[o]]).collect();
        let composites = self
            .composite_table()
            .into_iter()
            .filter(|&(g, f, h)| new_index[g] != usize::MAX && new_index[f] != usize::MAX && new_index[h] != usize::MAX)
            .map(|(g, f, h)| (new_index[g], new_index[f], new_index[h]))
            .collect();
        let sub = if self.is_thin() {
            RelCategory::new(names, morphisms, identities, Vec::new())?
        } else {
            RelCategory::new(names, morphisms, identities, composites)?
        };
        RelFunctor::new(Arc::new(sub), self.clone(), objects.to_vec(), keep)
    }
}

impl fmt::Display for RelCategory {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{} objects, {} morphisms", self.objects.len(), self.morphisms.len())
    }
}

fn from_data(data: CategoryData, flavor: Flavor) -> Result<RelCategory> {
    let n = data.objects.len();
    let mut morphisms: Vec<Morphism> = data
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| Morphism { id: format!("1_{o}"), src: i, dst: i, we: true })
        .collect();
    for (id, s, d) in data.morphisms {
        morphisms.push(Morphism { id, src: s, dst: d, we: flavor == Flavor::Maximal });
    }
    let composites = data.composites.into_iter().map(|(g, f, h)| (g + n, f + n, h + n)).collect();
    let c = RelCategory::new(data.objects, morphisms, (0..n).collect(), composites)?;
    let violations = c.validate();
    if let Some(v) = violations.first() {
        return Err(Error::Invalid(v.to_string()));
    }
    Ok(c)
}

/// Reflexive-transitive closure of strict relations `(a, b, we)` on `n`
/// objects, with weak equivalences closed under composition. Fails with the
/// index of a relation that closes a cycle.
pub(crate) fn order_closure(n: usize, stated: &[(usize, usize, bool)]) -> std::result::Result<Vec<(usize, usize, bool)>, usize> {
    let mut le = vec![vec![false; n]; n];
    let mut we = vec![vec![false; n]; n];
    for a in 0..n {
        le[a][a] = true;
        we[a][a] = true;
    }
    for (k, &(a, b, w)) in stated.iter().enumerate() {
        if a == b {
            return Err(k);
        }
        le[a][b] = true;
        we[a][b] |= w;
    }
    for k in 0..n {
        for a in 0..n {
            if le[a][k] {
                for b in 0..n {
                    if le[k][b] {
                        le[a][b] = true;
                    }
                    if we[a][k] && we[k][b] {
                        we[a][b] = true;
                    }
                }
            }
        }
    }
    if let Some(k) = stated.iter().position(|&(a, b, _)| le[b][a]) {
        return Err(k);
    }
    let mut arrows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && le[a][b] {
                arrows.push((a, b, we[a][b]));
            }
        }
    }
    Ok(arrows)
}

/// The relative poset generated by strict relations `(a, b, we)`.
pub fn relative_poset(objects: Vec<String>, stated: &[(usize, usize, bool)]) -> Result<RelCategory> {
    let arrows = order_closure(objects.len(), stated).map_err(|k| {
        let (a, b, _) = stated[k];
        Error::NotPoset(format!("{} < {} closes a cycle", objects[a], objects[b]))
    })?;
    RelCategory::thin(objects, &arrows)
}

/// Only the identities are weak equivalences.
pub fn make_minimal(data: CategoryData) -> Result<RelCategory> {
    from_data(data, Flavor::Minimal)
}

/// Every morphism is a weak equivalence.
pub fn make_maximal(data: CategoryData) -> Result<RelCategory> {
    from_data(data, Flavor::Maximal)
}

/// The linear order 0 -> ... -> k with minimal or maximal weak equivalences.
pub fn arrow_category(k: usize, flavor: Flavor) -> RelCategory {
    from_data(CategoryData::linear_order(k), flavor).expect("linear order is a category")
}

pub fn opposite(c: &RelCategory) -> RelCategory {
    c.opposite()
}

/// Cartesian product; a pair of morphisms is a weak equivalence iff both are.
/// Object (a, b) has index a * |D| + b and morphism (f, g) index f * |mor D| + g.
pub fn product(c: &RelCategory, d: &RelCategory) -> RelCategory {
    let (nd, md) = (d.num_objects(), d.num_morphisms());
    let mut objects = Vec::with_capacity(c.num_objects() * nd);
    for a in c.objects() {
        for b in d.objects() {
            objects.push(format!("({a},{b})"));
        }
    }
    let mut morphisms = Vec::with_capacity(c.num_morphisms() * md);
    for f in c.morphisms() {
        for g in d.morphisms() {
            morphisms.push(Morphism {
                id: format!("({},{})", f.id, g.id),
                src: f.src * nd + g.src,
                dst: f.dst * nd + g.dst,
                we: f.we && g.we,
            });
        }
    }
    let mut identities = Vec::with_capacity(objects.len());
    for a in 0..c.num_objects() {
        for b in 0..nd {
            identities.push(c.identity(a) * md + d.identity(b));
        }
    }
    let composites = if c.is_thin() && d.is_thin() {
        Vec::new()
    } else {
        let mut v = Vec::new();
        for f1 in 0..c.num_morphisms() {
            for &f2 in c.out_morphisms(c.morphism(f1).dst) {
                let h1 = c.compose(f2, f1);
                for g1 in 0..md {
                    for &g2 in d.out_morphisms(d.morphism(g1).dst) {
                        if let (Some(h1), Some(h2)) = (h1, d.compose(g2, g1)) {
                            v.push((f2 * md + g2, f1 * md + g1, h1 * md + h2));
                        }
                    }
                }
            }
        }
        v
    };
    RelCategory::new(objects, morphisms, identities, composites).expect("product of valid categories")
}

/// A weak-equivalence preserving functor, stored as object and morphism maps.
#[derive(Clone, Debug)]
pub struct RelFunctor {
    pub dom: Arc<RelCategory>,
    pub cod: Arc<RelCategory>,
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl PartialEq for RelFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.obj == other.obj
            && self.mor == other.mor
            && (Arc::ptr_eq(&self.dom, &other.dom) || self.dom == other.dom)
            && (Arc::ptr_eq(&self.cod, &other.cod) || self.cod == other.cod)
    }
}

impl RelFunctor {
    pub fn new(dom: Arc<RelCategory>, cod: Arc<RelCategory>, obj: Vec<usize>, mor: Vec<usize>) -> Result<Self> {
        if obj.len() != dom.num_objects() || mor.len() != dom.num_morphisms() {
            return Err(Error::Shape("functor maps do not match the domain".into()));
        }
        if obj.iter().any(|&o| o >= cod.num_objects()) || mor.iter().any(|&m| m >= cod.num_morphisms()) {
            return Err(Error::Shape("functor maps leave the codomain".into()));
        }
        Ok(RelFunctor { dom, cod, obj, mor })
    }

    /// Functor into a thin codomain determined by its object map.
    pub fn from_object_map(dom: Arc<RelCategory>, cod: Arc<RelCategory>, obj: Vec<usize>) -> Result<Self> {
        if !cod.is_thin() {
            return Err(Error::Precondition("object map determines a functor only into a thin category".into()));
        }
        if obj.len() != dom.num_objects() {
            return Err(Error::Shape("object map does not match the domain".into()));
        }
        let mut mor = Vec::with_capacity(dom.num_morphisms());
        for f in dom.morphisms() {
            let img = cod.arrow(obj[f.src], obj[f.dst]).ok_or_else(|| {
                Error::Invalid(format!(
                    "no morphism {} -> {} for the image of {}",
                    cod.objects()[obj[f.src]],
                    cod.objects()[obj[f.dst]],
                    f.id
                ))
            })?;
            mor.push(img);
        }
        RelFunctor::new(dom, cod, obj, mor)
    }

    pub fn identity(c: &Arc<RelCategory>) -> Self {
        RelFunctor {
            dom: c.clone(),
            cod: c.clone(),
            obj: (0..c.num_objects()).collect(),
            mor: (0..c.num_morphisms()).collect(),
        }
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &RelFunctor) -> Result<RelFunctor> {
        if !(Arc::ptr_eq(&f.cod, &self.dom) || *f.cod == *self.dom) {
            return Err(Error::Shape("functors are not composable".into()));
        }
        Ok(RelFunctor {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            obj: f.obj.iter().map(|&o| self.obj[o]).collect(),
            mor: f.mor.iter().map(|&m| self.mor[m]).collect(),
        })
    }

    pub fn violations(&self) -> Vec<String> {
        let (d, c) = (&self.dom, &self.cod);
        let mut out = Vec::new();
        for (i, f) in d.morphisms().iter().enumerate() {
            let g = c.morphism(self.mor[i]);
            if g.src != self.obj[f.src] || g.dst != self.obj[f.dst] {
                out.push(format!("image of {} has the wrong endpoints", f.id));
            }
            if f.we && !g.we {
                out.push(format!("{} is a weak equivalence but its image {} is not", f.id, g.id));
            }
        }
        for o in 0..d.num_objects() {
            if self.mor[d.identity(o)] != c.identity(self.obj[o]) {
                out.push(format!("identity of {} not preserved", d.objects()[o]));
            }
        }
        if !out.is_empty() || c.is_thin() {
            return out;
        }
        for f in 0..d.num_morphisms() {
            for &g in d.out_morphisms(d.morphism(f).dst) {
                if let Some(h) = d.compose(g, f) {
                    if c.compose(self.mor[g], self.mor[f]) != Some(self.mor[h]) {
                        out.push(format!(
                            "composite {}.{} not preserved",
                            d.morphism(g).id,
                            d.morphism(f).id
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen_o = vec![false; self.cod.num_objects()];
        let mut seen_m = vec![false; self.cod.num_morphisms()];
        self.obj.iter().all(|&o| !std::mem::replace(&mut seen_o[o], true))
            && self.mor.iter().all(|&m| !std::mem::replace(&mut seen_m[m], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective()
            && self.obj.len() == self.cod.num_objects()
            && self.mor.len() == self.cod.num_morphisms()
    }

    /// Injective, and a morphism is a weak equivalence iff its image is.
    pub fn is_relative_inclusion(&self) -> bool {
        self.is_valid()
            && self.is_injective()
            && self
                .mor
                .iter()
                .enumerate()
                .all(|(i, &m)| self.dom.morphism(i).we == self.cod.morphism(m).we)
    }

    /// A bijective relative inclusion, i.e. an isomorphism of relative categories.
    pub fn is_isomorphism(&self) -> bool {
        self.is_relative_inclusion() && self.is_bijective()
    }

    /// The inverse of an isomorphism.
    pub fn inverse(&self) -> Result<RelFunctor> {
        if !self.is_bijective() {
            return Err(Error::Precondition("functor is not bijective".into()));
        }
        let mut obj = vec![0; self.obj.len()];
        for (i, &o) in self.obj.iter().enumerate() {
            obj[o] = i;
        }
        let mut mor = vec![0; self.mor.len()];
        for (i, &m) in self.mor.iter().enumerate() {
            mor[m] = i;
        }
        RelFunctor::new(self.cod.clone(), self.dom.clone(), obj, mor)
    }

    /// The same maps viewed between opposite categories.
    pub fn opposite(&self) -> RelFunctor {
        RelFunctor {
            dom: Arc::new(self.dom.opposite()),
            cod: Arc::new(self.cod.opposite()),
            obj: self.obj.clone(),
            mor: self.mor.clone(),
        }
    }

    pub fn with_codomain(&self, cod: Arc<RelCategory>) -> RelFunctor {
        RelFunctor { cod, ..self.clone() }
    }

    pub fn with_domain(&self, dom: Arc<RelCategory>) -> RelFunctor {
        RelFunctor { dom, ..self.clone() }
    }

    pub fn same_maps(&self, other: &RelFunctor) -> bool {
        self.obj == other.obj && self.mor == other.mor
    }
}

pub fn is_relative_inclusion(f: &RelFunctor) -> bool {
    f.is_relative_inclusion()
}

/// The product functor f × g.
pub fn product_functor(f: &RelFunctor, g: &RelFunctor) -> RelFunctor {
    let dom = Arc::new(product(&f.dom, &g.dom));
    let cod = Arc::new(product(&f.cod, &g.cod));
    let (ncod, mcod) = (g.cod.num_objects(), g.cod.num_morphisms());
    let mut obj = Vec::with_capacity(dom.num_objects());
    for &a in &f.obj {
        for &b in &g.obj {
            obj.push(a * ncod + b);
        }
    }
    let mut mor = Vec::with_capacity(dom.num_morphisms());
    for &a in &f.mor {
        for &b in &g.mor {
            mor.push(a * mcod + b);
        }
    }
    RelFunctor { dom, cod, obj, mor }
}

/// The embedding x ↦ (x, at) of X into X × Y.
pub fn slice_at(x: &Arc<RelCategory>, y: &RelCategory, prod: &Arc<RelCategory>, at: usize) -> RelFunctor {
    let (ny, my) = (y.num_objects(), y.num_morphisms());
    let id = y.identity(at);
    RelFunctor {
        dom: x.clone(),
        cod: prod.clone(),
        obj: (0..x.num_objects()).map(|o| o * ny + at).collect(),
        mor: (0..x.num_morphisms()).map(|m| m * my + id).collect(),
    }
}

/// The projection C × D -> C.
pub fn first_projection(c: &Arc<RelCategory>, d: &RelCategory, prod: &Arc<RelCategory>) -> RelFunctor {
    let (nd, md) = (d.num_objects(), d.num_morphisms());
    RelFunctor {
        dom: prod.clone(),
        cod: c.clone(),
        obj: (0..prod.num_objects()).map(|o| o / nd).collect(),
        mor: (0..prod.num_morphisms()).map(|m| m / md).collect(),
    }
}

/// The projection C × D -> D.
pub fn second_projection(c: &RelCategory, d: &Arc<RelCategory>, prod: &Arc<RelCategory>) -> RelFunctor {
    let _ = c;
    let (nd, md) = (d.num_objects(), d.num_morphisms());
    RelFunctor {
        dom: prod.clone(),
        cod: d.clone(),
        obj: (0..prod.num_objects()).map(|o| o % nd).collect(),
        mor: (0..prod.num_morphisms()).map(|m| m % md).collect(),
    }
}

/// The constant functor at `object`.
pub fn constant(dom: &Arc<RelCategory>, cod: &Arc<RelCategory>, object: usize) -> RelFunctor {
    RelFunctor {
        dom: dom.clone(),
        cod: cod.clone(),
        obj: vec![object; dom.num_objects()],
        mor: vec![cod.identity(object); dom.num_morphisms()],
    }
}
