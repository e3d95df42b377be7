//! Sieves, cosieves and Dwyer maps, with witnesses for their closure under
//! retracts, pushouts and finite composition.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homotopy::{find_sdr, interval, verify_sdr, SdrWitness, StrictHomotopy};
use crate::relcat::{Morphism, RelCategory, RelFunctor};
use crate::subdiv::{subdivide_map, xi_t, Subdivision};

/// Default cap on the retractions tried by [`check_dwyer`].
pub const DEFAULT_SDR_BUDGET: usize = 100_000;

/// A characteristic functor `α: B -> 1̂` whose fibre over 0 is the sieve.
#[derive(Clone, Debug)]
pub struct SieveCert {
    pub alpha: RelFunctor,
}

fn require_inclusion(incl: &RelFunctor) -> Result<()> {
    if incl.is_relative_inclusion() {
        Ok(())
    } else {
        Err(Error::Precondition("not a relative inclusion".into()))
    }
}

fn membership(incl: &RelFunctor) -> Vec<bool> {
    let mut inside = vec![false; incl.cod.num_objects()];
    for &o in &incl.obj {
        inside[o] = true;
    }
    inside
}

/// Position of each ambient object in the image of an injective map, if any.
fn positions(image: &[usize], len: usize) -> Vec<Option<usize>> {
    let mut pos = vec![None; len];
    for (i, &o) in image.iter().enumerate() {
        pos[o] = Some(i);
    }
    pos
}

/// The sieve certificate of `A ⊆ B`, or none when some map ends in `A` but
/// does not lie in it.
pub fn is_sieve(incl: &RelFunctor) -> Result<Option<SieveCert>> {
    require_inclusion(incl)?;
    let b = &incl.cod;
    let in_obj = membership(incl);
    let mut in_mor = vec![false; b.num_morphisms()];
    for &m in &incl.mor {
        in_mor[m] = true;
    }
    if b.morphisms().iter().enumerate().any(|(i, m)| in_obj[m.dst] && !in_mor[i]) {
        return Ok(None);
    }
    let obj = (0..b.num_objects()).map(|o| usize::from(!in_obj[o])).collect();
    let alpha = RelFunctor::from_object_map(b.clone(), interval(), obj)?;
    Ok(Some(SieveCert { alpha }))
}

/// Whether `A ⊆ B` is closed under maps out of it.
pub fn is_cosieve(incl: &RelFunctor) -> Result<bool> {
    require_inclusion(incl)?;
    let b = &incl.cod;
    let in_obj = membership(incl);
    let mut in_mor = vec![false; b.num_morphisms()];
    for &m in &incl.mor {
        in_mor[m] = true;
    }
    Ok(b.morphisms().iter().enumerate().all(|(i, m)| !in_obj[m.src] || in_mor[i]))
}

/// The full relative subcategory `Z(A, B)` of objects receiving a map from
/// `A`, in ambient order, with its inclusion into `B`.
pub fn cosieve_generated(incl: &RelFunctor) -> Result<RelFunctor> {
    require_inclusion(incl)?;
    let b = &incl.cod;
    let in_obj = membership(incl);
    let mut reached = in_obj.clone();
    for m in b.morphisms() {
        if in_obj[m.src] {
            reached[m.dst] = true;
        }
    }
    let objs: Vec<usize> = (0..b.num_objects()).filter(|&o| reached[o]).collect();
    b.full_subcategory(&objs)
}

/// Everything certifying that `incl: A -> B` (after `iso: A' -> A`) is a Dwyer map.
#[derive(Clone, Debug)]
pub struct DwyerWitness {
    pub iso: RelFunctor,
    pub incl: RelFunctor,
    pub sieve: SieveCert,
    /// The inclusion `Z(A, B) -> B`.
    pub za: RelFunctor,
    /// `A -> Z(A, B)`.
    pub a_in_za: RelFunctor,
    pub sdr: SdrWitness,
}

/// Retraction data read in the ambient category `B`.
#[derive(Clone, Debug)]
pub struct AmbientSdr {
    /// `r z` as an object of `B`, for `z` in `Z(A, B)`.
    pub r_obj: Vec<Option<usize>>,
    pub r_mor: Vec<Option<usize>>,
    /// The component `r z -> z` as a morphism of `B`.
    pub s: Vec<Option<usize>>,
}

impl DwyerWitness {
    pub fn ambient(&self) -> AmbientSdr {
        let b = &self.incl.cod;
        let mut r_obj = vec![None; b.num_objects()];
        let mut s = vec![None; b.num_objects()];
        let comps = self.sdr.s.components();
        for (k, &z) in self.za.obj.iter().enumerate() {
            r_obj[z] = Some(self.incl.obj[self.sdr.r.obj[k]]);
            s[z] = Some(self.za.mor[comps[k]]);
        }
        let mut r_mor = vec![None; b.num_morphisms()];
        for (k, &m) in self.za.mor.iter().enumerate() {
            r_mor[m] = Some(self.incl.mor[self.sdr.r.mor[k]]);
        }
        AmbientSdr { r_obj, r_mor, s }
    }

    pub fn verify(&self) -> bool {
        verify_sdr(&self.a_in_za, &self.sdr).unwrap_or(false)
            && self.iso.is_isomorphism()
            && self.incl.is_relative_inclusion()
            && matches!(is_sieve(&self.incl), Ok(Some(_)))
    }
}

/// Outcome of a Dwyer test.
#[derive(Clone, Debug)]
pub enum Verdict {
    Dwyer(Box<DwyerWitness>),
    Refuted(String),
}

impl Verdict {
    pub fn witness(&self) -> Option<&DwyerWitness> {
        match self {
            Verdict::Dwyer(w) => Some(w),
            Verdict::Refuted(_) => None,
        }
    }

    pub fn is_dwyer(&self) -> bool {
        matches!(self, Verdict::Dwyer(_))
    }
}

/// `A -> Z(A, B)` for an inclusion and its generated cosieve.
fn inclusion_into(incl: &RelFunctor, za: &RelFunctor) -> Result<RelFunctor> {
    let opos = positions(&za.obj, incl.cod.num_objects());
    let mpos = positions(&za.mor, incl.cod.num_morphisms());
    let obj = incl.obj.iter().map(|&o| opos[o].expect("A lies in Z A")).collect();
    let mor = incl.mor.iter().map(|&m| mpos[m].expect("A lies in Z A")).collect();
    RelFunctor::new(incl.dom.clone(), za.dom.clone(), obj, mor)
}

/// Splits an injective relative functor into an isomorphism onto its image
/// followed by the inclusion of the image; `Err(reason)` when that fails.
fn factor_through_image(f: &RelFunctor) -> Result<std::result::Result<(RelFunctor, RelFunctor), String>> {
    if !f.is_valid() {
        return Err(Error::Invalid(format!("not a relative functor: {}", f.violations().join("; "))));
    }
    if !f.is_injective() {
        return Ok(Err("not injective".into()));
    }
    let b = &f.cod;
    let mut in_mor = vec![false; b.num_morphisms()];
    for &m in &f.mor {
        in_mor[m] = true;
    }
    let in_obj = membership(f);
    if b.morphisms().iter().enumerate().any(|(i, m)| in_obj[m.dst] && !in_mor[i]) {
        return Ok(Err("the image is not a sieve".into()));
    }
    let incl = b.full_subcategory(&f.obj)?;
    let mpos = positions(&incl.mor, b.num_morphisms());
    let mor = f.mor.iter().map(|&m| mpos[m].expect("image morphism")).collect();
    let iso = RelFunctor::new(f.dom.clone(), incl.dom.clone(), (0..f.obj.len()).collect(), mor)?;
    if !iso.is_isomorphism() {
        return Ok(Err("the image is not a relative subcategory with the induced weak equivalences".into()));
    }
    Ok(Ok((iso, incl)))
}

/// Decides whether `f` is a Dwyer map, searching for a strong deformation
/// retraction of `Z A` onto `A` within `budget` retractions.
pub fn check_dwyer(f: &RelFunctor, budget: Option<usize>) -> Result<Verdict> {
    let (iso, incl) = match factor_through_image(f)? {
        Ok(x) => x,
        Err(reason) => return Ok(Verdict::Refuted(reason)),
    };
    let Some(sieve) = is_sieve(&incl)? else {
        return Ok(Verdict::Refuted("the image is not a sieve".into()));
    };
    let za = cosieve_generated(&incl)?;
    let a_in_za = inclusion_into(&incl, &za)?;
    match find_sdr(&a_in_za, budget)? {
        Some(sdr) => Ok(Verdict::Dwyer(Box::new(DwyerWitness { iso, incl, sieve, za, a_in_za, sdr }))),
        None => Ok(Verdict::Refuted("no strong deformation retraction".into())),
    }
}

/// [`check_dwyer`] with a supplied retraction of `Z A` onto the image, which
/// is verified instead of searched for.
pub fn check_dwyer_with(f: &RelFunctor, sdr: &SdrWitness) -> Result<Verdict> {
    let (iso, incl) = match factor_through_image(f)? {
        Ok(x) => x,
        Err(reason) => return Ok(Verdict::Refuted(reason)),
    };
    let Some(sieve) = is_sieve(&incl)? else {
        return Ok(Verdict::Refuted("the image is not a sieve".into()));
    };
    let za = cosieve_generated(&incl)?;
    let a_in_za = inclusion_into(&incl, &za)?;
    if sdr.r.dom.num_objects() != za.dom.num_objects() || !verify_sdr(&a_in_za, sdr)? {
        return Ok(Verdict::Refuted("the supplied retraction does not verify".into()));
    }
    Ok(Verdict::Dwyer(Box::new(DwyerWitness { iso, incl, sieve, za, a_in_za, sdr: sdr.clone() })))
}

/// Dwyer test on opposite categories.
pub fn check_co_dwyer(f: &RelFunctor, budget: Option<usize>) -> Result<Verdict> {
    check_dwyer(&f.opposite(), budget)
}

/// Assemble and verify a witness for the sieve inclusion `incl: A -> B` from
/// retraction data on `Z(A, B)` given in ambient indices of `B`. Without
/// `r_mor` the codomain must be thin.
pub fn witness_from_ambient(
    incl: &RelFunctor,
    r_obj: impl Fn(usize) -> usize,
    r_mor: Option<&dyn Fn(usize) -> usize>,
    s: impl Fn(usize) -> usize,
) -> Result<DwyerWitness> {
    let b = incl.cod.clone();
    let Some(sieve) = is_sieve(incl)? else {
        return Err(Error::Precondition("not a sieve".into()));
    };
    let za = cosieve_generated(incl)?;
    let a_in_za = inclusion_into(incl, &za)?;
    let apos = positions(&incl.obj, b.num_objects());
    let amor = positions(&incl.mor, b.num_morphisms());
    let zmor = positions(&za.mor, b.num_morphisms());
    let r_objects: Vec<usize> = za.obj.iter().map(|&z| r_obj(z)).collect();
    let mut obj = Vec::with_capacity(r_objects.len());
    for &o in &r_objects {
        obj.push(apos[o].ok_or_else(|| Error::Invalid("the retraction leaves A".into()))?);
    }
    let mut mor = Vec::with_capacity(za.mor.len());
    for &m in &za.mor {
        let img = match r_mor {
            Some(f) => f(m),
            None => {
                let mm = b.morphism(m);
                b.arrow(r_obj(mm.src), r_obj(mm.dst)).ok_or_else(|| Error::Invalid("retraction is not functorial".into()))?
            }
        };
        mor.push(amor[img].ok_or_else(|| Error::Invalid("the retraction leaves A".into()))?);
    }
    let r = RelFunctor::new(za.dom.clone(), incl.dom.clone(), obj, mor)?;
    let mut comps = Vec::with_capacity(za.obj.len());
    for &z in &za.obj {
        comps.push(zmor[s(z)].ok_or_else(|| Error::Invalid("a component leaves Z A".into()))?);
    }
    let ir = a_in_za.after(&r)?;
    let hom = StrictHomotopy::from_components(&ir, &RelFunctor::identity(&za.dom), &comps)?;
    let sdr = SdrWitness { r, s: hom };
    if !verify_sdr(&a_in_za, &sdr)? {
        return Err(Error::Invalid("the constructed strong deformation retraction does not verify".into()));
    }
    Ok(DwyerWitness { iso: RelFunctor::identity(&incl.dom), incl: incl.clone(), sieve, za, a_in_za, sdr })
}

/// The witness for a retract `A' ⊆ B'` of a Dwyer inclusion `A ⊆ B`, given
/// `f: B' -> B` and `g: B -> B'` with `g f = 1`, `f A' ⊆ A` and `g A ⊆ A'`:
/// `r' = g r f` and `s' = g s f`.
pub fn retract_witness(w: &DwyerWitness, a_prime: &RelFunctor, f: &RelFunctor, g: &RelFunctor) -> Result<DwyerWitness> {
    if !g.after(f)?.same_maps(&RelFunctor::identity(&f.dom)) {
        return Err(Error::Precondition("g f is not the identity".into()));
    }
    let inside = membership(&w.incl);
    let inside_prime = membership(a_prime);
    if a_prime.obj.iter().any(|&o| !inside[f.obj[o]]) || w.incl.obj.iter().any(|&o| !inside_prime[g.obj[o]]) {
        return Err(Error::Precondition("the retraction does not respect the subcategories".into()));
    }
    let amb = w.ambient();
    let r_obj = |z: usize| g.obj[amb.r_obj[f.obj[z]].expect("f maps Z A' into Z A")];
    let r_mor = |m: usize| g.mor[amb.r_mor[f.mor[m]].expect("f maps Z A' into Z A")];
    let s = |z: usize| g.mor[amb.s[f.obj[z]].expect("f maps Z A' into Z A")];
    witness_from_ambient(a_prime, r_obj, Some(&r_mor), s)
}

/// The image of an idempotent `e` on `B` with `e A ⊆ A`, as a retract:
/// `(A' ⊆ B', f: B' -> B, g: B -> B')`.
pub fn idempotent_retract(incl: &RelFunctor, e: &RelFunctor) -> Result<(RelFunctor, RelFunctor, RelFunctor)> {
    let b = &incl.cod;
    if !e.after(e)?.same_maps(e) {
        return Err(Error::Precondition("not idempotent".into()));
    }
    let fixed: Vec<usize> = (0..b.num_objects()).filter(|&o| e.obj[o] == o).collect();
    let f = b.full_subcategory(&fixed)?;
    let bp = f.dom.clone();
    let opos = positions(&f.obj, b.num_objects());
    let mpos = positions(&f.mor, b.num_morphisms());
    let mut gm = Vec::with_capacity(b.num_morphisms());
    for m in 0..b.num_morphisms() {
        gm.push(mpos[e.mor[m]].ok_or_else(|| Error::Precondition("the image of e is not full".into()))?);
    }
    let g = RelFunctor::new(b.clone(), bp.clone(), e.obj.iter().map(|&o| opos[o].expect("fixed")).collect(), gm)?;
    let inside = membership(incl);
    let a_objs: Vec<usize> = (0..bp.num_objects()).filter(|&o| inside[f.obj[o]]).collect();
    let a_prime = bp.full_subcategory(&a_objs)?;
    Ok((a_prime, f, g))
}

/// The Dwyer witness of the composite `A0 ⊆ A1 ⊆ A2`: `r02 = r01 r12` and
/// `s02 = s12 · s01`, composed componentwise in `A2`.
pub fn compose_dwyer(w01: &DwyerWitness, w12: &DwyerWitness) -> Result<DwyerWitness> {
    if w01.incl.cod.num_objects() != w12.incl.dom.num_objects() {
        return Err(Error::Shape("inclusions do not compose".into()));
    }
    let i12 = &w12.incl;
    let incl = i12.after(&w01.incl)?;
    let a01 = w01.ambient();
    let a12 = w12.ambient();
    let a2 = incl.cod.clone();
    let pos1 = positions(&i12.obj, a2.num_objects());
    let mpos1 = positions(&i12.mor, a2.num_morphisms());
    let r_obj = |z: usize| {
        let y = pos1[a12.r_obj[z].expect("Z(A0,A2) lies in Z(A1,A2)")].expect("lands in A1");
        i12.obj[a01.r_obj[y].expect("r12 maps into Z(A0,A1)")]
    };
    let r_mor = |m: usize| {
        let y = mpos1[a12.r_mor[m].expect("Z(A0,A2) lies in Z(A1,A2)")].expect("lands in A1");
        i12.mor[a01.r_mor[y].expect("r12 maps into Z(A0,A1)")]
    };
    let s = |z: usize| {
        let y = pos1[a12.r_obj[z].expect("in Z(A1,A2)")].expect("lands in A1");
        let inner = i12.mor[a01.s[y].expect("in Z(A0,A1)")];
        a2.compose(a12.s[z].expect("in Z(A1,A2)"), inner).expect("components compose")
    };
    witness_from_ambient(&incl, r_obj, Some(&r_mor), s)
}

/// For a relative inclusion of posets `P ⊆ Q` with `P` a cosieve, the
/// inclusion `ξ_t P ⊆ ξ_t Q` with `r` keeping the part of a chain inside `P`.
pub fn xi_t_cosieve_witness(incl: &RelFunctor) -> Result<(Subdivision, Subdivision, DwyerWitness)> {
    require_inclusion(incl)?;
    incl.dom.require_poset("subdivisions need relative posets")?;
    incl.cod.require_poset("subdivisions need relative posets")?;
    if !is_cosieve(incl)? {
        return Err(Error::Precondition("P is not a cosieve in Q".into()));
    }
    let sp = xi_t(&incl.dom)?;
    let sq = xi_t(&incl.cod)?;
    let sub_incl = subdivide_map(incl, &sp, &sq)?;
    let inside = membership(incl);
    let suffix = |z: usize| -> Vec<usize> { sq.chains[z].iter().copied().filter(|&x| inside[x]).collect() };
    let r_obj = |z: usize| sq.chain_index(&suffix(z)).expect("suffix is a chain");
    let s = |z: usize| sq.sub.arrow(r_obj(z), z).expect("suffix inclusion");
    let w = witness_from_ambient(&sub_incl, r_obj, None, s)?;
    Ok((sp, sq, w))
}

/// A pushout of `B <- A -> C` along a sieve inclusion `A ⊆ B`.
#[derive(Clone, Debug)]
pub struct PushoutResult {
    pub d: Arc<RelCategory>,
    pub j: RelFunctor,
    pub t: RelFunctor,
    /// The inclusions of the objects outside `A` and outside `C`.
    pub xa: RelFunctor,
    pub xc: RelFunctor,
    /// Mixed morphisms `c -> x` of `D` as representative pairs `(g, h)`
    /// with `g: a -> x` in `B` and `h: c -> s a` in `C`.
    pub mixed: HashMap<usize, (usize, usize)>,
}

fn unique_names(taken: &[String], wanted: &[String]) -> Vec<String> {
    let mut used: std::collections::HashSet<String> = taken.iter().cloned().collect();
    wanted
        .iter()
        .map(|w| {
            let mut n = w.clone();
            while used.contains(&n) {
                n.push('\'');
            }
            used.insert(n.clone());
            n
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// The pushout of `i: A -> B` (a relative inclusion onto a sieve) and
/// `s: A -> C`. Objects are those of `C` followed by those of `B` outside `A`;
/// mixed morphisms are classes of pairs under `(g α, h) ~ (g, s(α) h)`; the
/// weak equivalences are the composites of images of weak equivalences.
pub fn sieve_pushout(i: &RelFunctor, s: &RelFunctor) -> Result<PushoutResult> {
    if is_sieve(i)?.is_none() {
        return Err(Error::Precondition("A is not a sieve in B".into()));
    }
    if s.dom.num_objects() != i.dom.num_objects() || s.dom.num_morphisms() != i.dom.num_morphisms() {
        return Err(Error::Shape("the two maps have different domains".into()));
    }
    let (a, b, c) = (&i.dom, &i.cod, &s.cod);
    let inside = membership(i);
    let xs: Vec<usize> = (0..b.num_objects()).filter(|&o| !inside[o]).collect();
    let nc = c.num_objects();
    let xpos = positions(&xs, b.num_objects());
    let apos = positions(&i.obj, b.num_objects());
    let amor = positions(&i.mor, b.num_morphisms());

    let mut objects: Vec<String> = c.objects().to_vec();
    let xnames: Vec<String> = xs.iter().map(|&x| b.objects()[x].clone()).collect();
    objects.extend(unique_names(c.objects(), &xnames));

    let mut morphisms: Vec<Morphism> = c.morphisms().to_vec();
    let mut used_ids: std::collections::HashSet<String> = morphisms.iter().map(|m| m.id.clone()).collect();
    let mut fresh = |id: String| {
        let mut n = id;
        while used_ids.contains(&n) {
            n.push('\'');
        }
        used_ids.insert(n.clone());
        n
    };
    // morphisms of B between objects outside A
    let mut xmor = vec![None; b.num_morphisms()];
    for (k, m) in b.morphisms().iter().enumerate() {
        if let (Some(p), Some(q)) = (xpos[m.src], xpos[m.dst]) {
            xmor[k] = Some(morphisms.len());
            morphisms.push(Morphism { id: fresh(m.id.clone()), src: nc + p, dst: nc + q, we: m.we });
        }
    }
    // pairs (g: a -> x, h: c -> s a), grouped by (c, x)
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut pair_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (g, gm) in b.morphisms().iter().enumerate() {
        let (Some(ai), Some(_)) = (apos[gm.src], xpos[gm.dst]) else { continue };
        let sa = s.obj[ai];
        for h in 0..c.num_morphisms() {
            if c.morphism(h).dst == sa {
                pair_index.insert((g, h), pairs.len());
                pairs.push((g, h));
            }
        }
    }
    let mut uf = UnionFind((0..pairs.len()).collect());
    for (al, alm) in a.morphisms().iter().enumerate() {
        let bal = i.mor[al];
        let sal = s.mor[al];
        let (a_src, a_dst) = (i.obj[alm.src], i.obj[alm.dst]);
        for &gp in b.out_morphisms(a_dst) {
            if xpos[b.morphism(gp).dst].is_none() {
                continue;
            }
            let g = b.compose(gp, bal).expect("composable in B");
            debug_assert_eq!(b.morphism(g).src, a_src);
            for h in 0..c.num_morphisms() {
                if c.morphism(h).dst != s.obj[alm.src] {
                    continue;
                }
                let sh = c.compose(sal, h).expect("composable in C");
                let (Some(&p), Some(&q)) = (pair_index.get(&(g, h)), pair_index.get(&(gp, sh))) else {
                    return Err(Error::Invalid("pair bookkeeping failed".into()));
                };
                uf.union(p, q);
            }
        }
    }
    let mut class_mor: HashMap<usize, usize> = HashMap::new();
    let mut mixed = HashMap::new();
    for p in 0..pairs.len() {
        let root = uf.find(p);
        if root == p {
            let (g, h) = pairs[p];
            let (gm, hm) = (b.morphism(g), c.morphism(h));
            let idx = morphisms.len();
            morphisms.push(Morphism {
                id: fresh(format!("{}.{}", gm.id, hm.id)),
                src: hm.src,
                dst: nc + xpos[gm.dst].expect("x"),
                we: false,
            });
            class_mor.insert(root, idx);
            mixed.insert(idx, (g, h));
        }
    }
    let mut class_of = |g: usize, h: usize| -> usize { class_mor[&uf.find(pair_index[&(g, h)])] };

    let identities: Vec<usize> =
        (0..nc).map(|o| c.identity(o)).chain(xs.iter().map(|&x| xmor[b.identity(x)].expect("identity"))).collect();

    // composition table
    let mut composites: Vec<(usize, usize, usize)> = c.composite_table();
    for (g, f, h) in b.composite_table() {
        if let (Some(g2), Some(f2), Some(h2)) = (xmor[g], xmor[f], xmor[h]) {
            composites.push((g2, f2, h2));
        }
    }
    let mixed_list: Vec<(usize, (usize, usize))> = {
        let mut v: Vec<_> = mixed.iter().map(|(&k, &v)| (k, v)).collect();
        v.sort();
        v
    };
    let xmor_list: Vec<(usize, usize)> = xmor.iter().enumerate().filter_map(|(k, v)| v.map(|d| (k, d))).collect();
    for &(dm, (g, h)) in &mixed_list {
        let x = b.morphism(g).dst;
        for &(u, du) in &xmor_list {
            if b.morphism(u).src == x {
                let ug = b.compose(u, g).expect("composable");
                composites.push((du, dm, class_of(ug, h)));
            }
        }
        let cs = c.morphism(h).src;
        for k in 0..c.num_morphisms() {
            if c.morphism(k).dst == cs {
                let hk = c.compose(h, k).expect("composable");
                composites.push((dm, k, class_of(g, hk)));
            }
        }
    }

    // t on morphisms of B
    let mut t_mor = Vec::with_capacity(b.num_morphisms());
    for (k, m) in b.morphisms().iter().enumerate() {
        if let Some(al) = amor[k] {
            t_mor.push(s.mor[al]);
        } else if let Some(d) = xmor[k] {
            t_mor.push(d);
        } else {
            let ai = apos[m.src].expect("mixed morphism starts in A");
            t_mor.push(class_of(k, c.identity(s.obj[ai])));
        }
    }

    // weak equivalences: close the images of we(B) and we(C) under composition
    let mut we: Vec<bool> = morphisms.iter().map(|m| m.we).collect();
    for (k, m) in b.morphisms().iter().enumerate() {
        if m.we {
            we[t_mor[k]] = true;
        }
    }
    let table: HashMap<(usize, usize), usize> = composites.iter().map(|&(g, f, h)| ((g, f), h)).collect();
    loop {
        let mut changed = false;
        for (&(g, f), &h) in &table {
            if we[g] && we[f] && !we[h] {
                we[h] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for (m, w) in morphisms.iter_mut().zip(&we) {
        m.we = *w;
    }

    let mut hom_sizes: HashMap<(usize, usize), usize> = HashMap::new();
    for m in &morphisms {
        *hom_sizes.entry((m.src, m.dst)).or_default() += 1;
    }
    let thin = hom_sizes.values().all(|&n| n <= 1);
    let d = Arc::new(RelCategory::new(objects, morphisms, identities, if thin { Vec::new() } else { composites })?);
    let j = RelFunctor::new(c.clone(), d.clone(), (0..nc).collect(), (0..c.num_morphisms()).collect())?;
    let t_obj = (0..b.num_objects())
        .map(|o| match apos[o] {
            Some(ai) => s.obj[ai],
            None => nc + xpos[o].expect("outside A"),
        })
        .collect();
    let t = RelFunctor::new(b.clone(), d.clone(), t_obj, t_mor)?;
    let xa = b.full_subcategory(&xs)?;
    let xc = d.full_subcategory(&(nc..nc + xs.len()).collect::<Vec<_>>())?;
    Ok(PushoutResult { d, j, t, xa, xc, mixed })
}

/// Pushout along a Dwyer inclusion, with the retraction either supplied or
/// found by search.
pub fn pushout_along_sieve(i: &RelFunctor, s: &RelFunctor, witness: Option<&SdrWitness>) -> Result<PushoutResult> {
    let verdict = match witness {
        Some(w) => check_dwyer_with(i, w)?,
        None => check_dwyer(i, Some(DEFAULT_SDR_BUDGET))?,
    };
    if let Verdict::Refuted(reason) = verdict {
        return Err(Error::Precondition(format!("not a Dwyer inclusion: {reason}")));
    }
    sieve_pushout(i, s)
}

/// The retraction of `Z C` onto `C` induced on a pushout: `r' = r ⊔ C` and
/// `s'` with components `[s_x, id]` outside `C`.
pub fn transport_sdr_along_pushout(w: &DwyerWitness, s: &RelFunctor, po: &PushoutResult) -> Result<DwyerWitness> {
    let amb = w.ambient();
    let (b, c, d) = (&w.incl.cod, &s.cod, &po.d);
    let nc = c.num_objects();
    let apos = positions(&w.incl.obj, b.num_objects());
    let amor = positions(&w.incl.mor, b.num_morphisms());
    // objects of D outside C correspond to objects of B outside A via t
    let mut back = vec![None; d.num_objects()];
    for (o, &img) in po.t.obj.iter().enumerate() {
        if img >= nc {
            back[img] = Some(o);
        }
    }
    let mut back_mor = vec![None; d.num_morphisms()];
    for (k, &img) in po.t.mor.iter().enumerate() {
        if amor[k].is_none() {
            back_mor[img] = Some(k);
        }
    }
    let r_obj = |z: usize| -> usize {
        if z < nc {
            z
        } else {
            let x = back[z].expect("outside C");
            s.obj[apos[amb.r_obj[x].expect("in Z A")].expect("in A")]
        }
    };
    let r_mor = |m: usize| -> usize {
        let mm = d.morphism(m);
        if mm.dst < nc {
            return m;
        }
        if let Some(&(g, h)) = po.mixed.get(&m) {
            let rg = s.mor[amor[amb.r_mor[g].expect("in Z A")].expect("in A")];
            return c.compose(rg, h).expect("composable in C");
        }
        let u = back_mor[m].expect("morphism outside C");
        s.mor[amor[amb.r_mor[u].expect("in Z A")].expect("in A")]
    };
    let comp = |z: usize| -> usize {
        if z < nc {
            return d.identity(z);
        }
        let x = back[z].expect("outside C");
        let sx = amb.s[x].expect("in Z A");
        let ra = s.obj[apos[amb.r_obj[x].expect("in Z A")].expect("in A")];
        // the class of (s_x, id) is the image of s_x under t
        let img = po.t.mor[sx];
        debug_assert_eq!(d.morphism(img).src, ra);
        img
    };
    witness_from_ambient(&po.j, r_obj, Some(&r_mor), comp)
}
