//! Bisimplicial sets presented by nondegenerate cells, the realization
//! `K_ξ` by attaching subdivided bisimplices, the unit `Δ[p,q] -> N_ξ K_ξ Δ[p,q]`
//! and the comparison of a nerve pushout with the nerve of a pushout.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bisimplicial::{
    codegeneracy, coface, compose_maps, delta, epi_mono, identity_map, nerve_n, nerve_n_xi, order_maps, BiSMap, Nerve,
    NerveBudget, OrderMap, Representable, Structure, TruncBiSSet,
};
use crate::dwyer::{pushout_along_sieve, witness_from_ambient, xi_t_cosieve_witness, DwyerWitness, PushoutResult};
use crate::error::{Error, Result};
use crate::relcat::{arrow_category, product, Flavor, RelCategory, RelFunctor};
use crate::subdiv::{subdivide_map_two_fold, two_fold_object_map, xi, TwoFold};

/// A cell written as `x · (h, v)` with `x` presented and `h`, `v` surjections.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellRef {
    pub cell: usize,
    pub h: OrderMap,
    pub v: OrderMap,
}

impl CellRef {
    pub fn plain(cell: usize, degree: (usize, usize)) -> Self {
        CellRef { cell, h: identity_map(degree.0), v: identity_map(degree.1) }
    }

    pub fn degree(&self) -> (usize, usize) {
        (self.h.len() - 1, self.v.len() - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedCell {
    pub name: String,
    pub degree: (usize, usize),
    pub hfaces: Vec<Option<CellRef>>,
    pub vfaces: Vec<Option<CellRef>>,
}

/// A bisimplicial set given by its nondegenerate cells and their faces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub cells: Vec<PresentedCell>,
}

fn surjections(m: usize, n: usize) -> Vec<OrderMap> {
    order_maps(m, n).into_iter().filter(|f| f[0] == 0 && f[m] == n && f.windows(2).all(|w| w[1] <= w[0] + 1)).collect()
}

fn is_surjection(f: &[usize]) -> bool {
    f.first() == Some(&0) && f.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

impl Presentation {
    pub fn new(name: &str) -> Self {
        Presentation { name: name.to_string(), cells: Vec::new() }
    }

    pub fn cell_index(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.name == name)
    }

    pub fn add_cell(&mut self, name: &str, degree: (usize, usize)) -> Result<usize> {
        if self.cell_index(name).is_some() {
            return Err(Error::Invalid(format!("duplicate cell {name}")));
        }
        self.cells.push(PresentedCell {
            name: name.to_string(),
            degree,
            hfaces: vec![None; if degree.0 > 0 { degree.0 + 1 } else { 0 }],
            vfaces: vec![None; if degree.1 > 0 { degree.1 + 1 } else { 0 }],
        });
        Ok(self.cells.len() - 1)
    }

    pub fn set_face(&mut self, dir: Direction, i: usize, cell: usize, target: CellRef) -> Result<()> {
        let (p, q) = self.cells[cell].degree;
        let want = match dir {
            Direction::Horizontal if p > 0 && i <= p => (p - 1, q),
            Direction::Vertical if q > 0 && i <= q => (p, q - 1),
            _ => return Err(Error::Invalid(format!("cell {} has no face {i} in that direction", self.cells[cell].name))),
        };
        let t = self.cells.get(target.cell).ok_or_else(|| Error::Invalid("face names an unknown cell".into()))?;
        if target.degree() != want
            || !is_surjection(&target.h)
            || !is_surjection(&target.v)
            || target.h.last() != Some(&t.degree.0)
            || target.v.last() != Some(&t.degree.1)
        {
            return Err(Error::Invalid(format!(
                "face {i} of {} must have bidegree ({},{}) and be a degeneracy of a presented cell",
                self.cells[cell].name, want.0, want.1
            )));
        }
        let slot = match dir {
            Direction::Horizontal => &mut self.cells[cell].hfaces[i],
            Direction::Vertical => &mut self.cells[cell].vfaces[i],
        };
        *slot = Some(target);
        Ok(())
    }

    /// Every face of every cell is given.
    pub fn check_complete(&self) -> Result<()> {
        for c in &self.cells {
            for (dir, faces) in [("h", &c.hfaces), ("v", &c.vfaces)] {
                if let Some(i) = faces.iter().position(Option::is_none) {
                    return Err(Error::Invalid(format!("incomplete presentation: cell {} lacks face {dir} {i}", c.name)));
                }
            }
        }
        Ok(())
    }

    /// `c · (θ, θ')` in normal form.
    pub fn act(&self, c: &CellRef, th: &[usize], tv: &[usize]) -> CellRef {
        let (eh, mh) = epi_mono(&compose_maps(&c.h, th));
        let (ev, mv) = epi_mono(&compose_maps(&c.v, tv));
        let z = self.face_along(c.cell, &mh, &mv);
        CellRef { cell: z.cell, h: compose_maps(&z.h, &eh), v: compose_maps(&z.v, &ev) }
    }

    fn face_along(&self, x: usize, mh: &[usize], mv: &[usize]) -> CellRef {
        let cell = &self.cells[x];
        let (px, qx) = cell.degree;
        if let Some(k) = (0..=px).find(|k| !mh.contains(k)) {
            let rest: OrderMap = mh.iter().map(|&v| if v > k { v - 1 } else { v }).collect();
            let face = cell.hfaces[k].as_ref().expect("complete presentation");
            return self.act(face, &rest, mv);
        }
        if let Some(k) = (0..=qx).find(|k| !mv.contains(k)) {
            let rest: OrderMap = mv.iter().map(|&v| if v > k { v - 1 } else { v }).collect();
            let face = cell.vfaces[k].as_ref().expect("complete presentation");
            return self.act(face, mh, &rest);
        }
        CellRef::plain(x, cell.degree)
    }

    /// All cells through `bounds` with their structure maps; fails on
    /// incomplete data or violated identities.
    pub fn realize(&self, bounds: (usize, usize)) -> Result<Realization> {
        self.check_complete()?;
        let (pm, qm) = bounds;
        let mut cells = vec![vec![Vec::new(); qm + 1]; pm + 1];
        let mut index = vec![vec![HashMap::new(); qm + 1]; pm + 1];
        for p in 0..=pm {
            for q in 0..=qm {
                for (x, c) in self.cells.iter().enumerate() {
                    let (px, qx) = c.degree;
                    if px > p || qx > q {
                        continue;
                    }
                    for h in surjections(p, px) {
                        for v in surjections(q, qx) {
                            let r = CellRef { cell: x, h: h.clone(), v };
                            index[p][q].insert(r.clone(), cells[p][q].len());
                            cells[p][q].push(r);
                        }
                    }
                }
            }
        }
        let counts = cells.iter().map(|r| r.iter().map(Vec::len).collect()).collect();
        let (cs, ix) = (&cells, &index);
        let look = |p: usize, q: usize, c: usize, th: OrderMap, tv: OrderMap| -> usize {
            let r = self.act(&cs[p][q][c], &th, &tv);
            let (a, b) = r.degree();
            ix[a][b][&r]
        };
        let hf = |p: usize, q: usize, i: usize, c: usize| look(p, q, c, coface(p, i), identity_map(q));
        let vf = |p: usize, q: usize, i: usize, c: usize| look(p, q, c, identity_map(p), coface(q, i));
        let hd = |p: usize, q: usize, i: usize, c: usize| look(p, q, c, codegeneracy(p, i), identity_map(q));
        let vd = |p: usize, q: usize, i: usize, c: usize| look(p, q, c, identity_map(p), codegeneracy(q, i));
        let set = TruncBiSSet::build(bounds, counts, &Structure { hface: &hf, vface: &vf, hdeg: &hd, vdeg: &vd });
        let bad = set.violations();
        if let Some(v) = bad.first() {
            return Err(Error::Invalid(format!("the face data violates the bisimplicial identities: {v}")));
        }
        Ok(Realization { set, cells, index })
    }

    /// `Δ[p, q]` presented by its nondegenerate cells `(α, β)`, both injective.
    pub fn delta(p: usize, q: usize) -> Self {
        Self::delta_cells(p, q, true)
    }

    /// `∂Δ[p, q]`: the same cells without the top one.
    pub fn boundary_delta(p: usize, q: usize) -> Self {
        Self::delta_cells(p, q, false)
    }

    fn delta_cells(p: usize, q: usize, with_top: bool) -> Self {
        let name = |a: &[usize], b: &[usize]| {
            let s = |m: &[usize]| m.iter().map(|x| x.to_string()).collect::<String>();
            format!("{}|{}", s(a), s(b))
        };
        let injective = |m: usize, n: usize| -> Vec<OrderMap> {
            order_maps(m, n).into_iter().filter(|f| f.windows(2).all(|w| w[0] < w[1])).collect()
        };
        let mut pres = Presentation::new(&format!("{}delta_{p}_{q}", if with_top { "" } else { "boundary_" }));
        let mut pairs = Vec::new();
        for total in 0..=p + q {
            for i in 0..=p.min(total) {
                let j = total - i;
                if j > q {
                    continue;
                }
                for a in injective(i, p) {
                    for b in injective(j, q) {
                        if !with_top && i == p && j == q {
                            continue;
                        }
                        pres.add_cell(&name(&a, &b), (i, j)).expect("distinct names");
                        pairs.push((a.clone(), b));
                    }
                }
            }
        }
        let find = |a: &[usize], b: &[usize]| pairs.iter().position(|(x, y)| x == a && y == b).expect("face is a cell");
        for (k, (a, b)) in pairs.clone().iter().enumerate() {
            let (i, j) = (a.len() - 1, b.len() - 1);
            for f in 0..=i {
                if i > 0 {
                    let fa = compose_maps(a, &coface(i, f));
                    pres.set_face(Direction::Horizontal, f, k, CellRef::plain(find(&fa, b), (i - 1, j))).expect("valid face");
                }
            }
            for f in 0..=j {
                if j > 0 {
                    let fb = compose_maps(b, &coface(j, f));
                    pres.set_face(Direction::Vertical, f, k, CellRef::plain(find(a, &fb), (i, j - 1))).expect("valid face");
                }
            }
        }
        pres
    }
}

/// A realized presentation: cells in normal form with their index.
#[derive(Clone, Debug)]
pub struct Realization {
    pub set: TruncBiSSet,
    pub cells: Vec<Vec<Vec<CellRef>>>,
    index: Vec<Vec<HashMap<CellRef, usize>>>,
}

impl Realization {
    pub fn index_of(&self, r: &CellRef) -> Option<usize> {
        let (p, q) = r.degree();
        self.index.get(p)?.get(q)?.get(r).copied()
    }
}

/// One step of the cell-by-cell construction of `K_ξ`.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub cell: String,
    pub degree: (usize, usize),
    pub boundary_objects: usize,
    pub new_objects: usize,
    /// The supplied retraction verified for the boundary inclusion.
    pub dwyer_verified: bool,
}

/// `K_ξ L` with the characteristic maps of its cells.
#[derive(Clone, Debug)]
pub struct KXi {
    pub poset: Arc<RelCategory>,
    /// Object maps `ξ(p̌ × q̂) -> K_ξ L`, one per presented cell.
    pub characteristic: Vec<Vec<usize>>,
    /// For each object, the cell that created it and its object in that cell's shape.
    pub origin: Vec<(usize, usize)>,
    pub attachments: Vec<Attachment>,
}

/// `ξ(p̌ × q̂)` with its underlying product.
#[derive(Clone, Debug)]
pub struct SubdividedBisimplex {
    pub p: usize,
    pub q: usize,
    pub product: Arc<RelCategory>,
    pub xi: TwoFold,
}

impl SubdividedBisimplex {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let prod = Arc::new(product(&arrow_category(p, Flavor::Minimal), &arrow_category(q, Flavor::Maximal)));
        Ok(SubdividedBisimplex { p, q, xi: xi(&prod)?, product: prod })
    }

    /// Chains of `ξ_i(p̌ × q̂)` lying in a proper face.
    pub fn inner_boundary(&self) -> Vec<usize> {
        let q1 = self.q + 1;
        self.xi
            .inner
            .chains
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let firsts: std::collections::BTreeSet<usize> = c.iter().map(|&o| o / q1).collect();
                let seconds: std::collections::BTreeSet<usize> = c.iter().map(|&o| o % q1).collect();
                firsts.len() < self.p + 1 || seconds.len() < self.q + 1
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Object map of `ξ(θ × θ')` from the subdivided bisimplex `dom`.
    pub fn induced_objects(&self, dom: &SubdividedBisimplex, th: &[usize], tv: &[usize]) -> Result<Vec<usize>> {
        let n1 = tv.len();
        let obj: Vec<usize> = (0..th.len() * n1).map(|o| th[o / n1] * (self.q + 1) + tv[o % n1]).collect();
        two_fold_object_map(&obj, &dom.xi, &self.xi)
    }
}

struct ShapeCache {
    shapes: HashMap<(usize, usize), SubdividedBisimplex>,
    budget: usize,
}

impl ShapeCache {
    fn get(&mut self, p: usize, q: usize) -> Result<&SubdividedBisimplex> {
        if !self.shapes.contains_key(&(p, q)) {
            let size = crate::bisimplicial::subdivided_size(p, q);
            if size > self.budget {
                return Err(Error::Budget(format!("ξ({p}̌×{q}̂) has {size} objects, over the budget of {}", self.budget)));
            }
            self.shapes.insert((p, q), SubdividedBisimplex::new(p, q)?);
        }
        Ok(&self.shapes[&(p, q)])
    }
}

/// Names the objects and morphisms added by a pushout after the cell.
fn rename_new(po: PushoutResult, k: &RelCategory, cell: &str, shape: &RelCategory) -> Result<PushoutResult> {
    let (nc, nm) = (k.num_objects(), k.num_morphisms());
    let mut objects: Vec<String> = po.d.objects().to_vec();
    for (o, &img) in po.t.obj.iter().enumerate() {
        if img >= nc {
            objects[img] = format!("{cell}:{}", shape.objects()[o]);
        }
    }
    let morphisms = po
        .d
        .morphisms()
        .iter()
        .enumerate()
        .map(|(m, f)| if m < nm { f.id.clone() } else { format!("{cell}:{}", f.id) })
        .collect();
    let d = Arc::new(po.d.renamed(objects, morphisms)?);
    Ok(PushoutResult { j: po.j.with_codomain(d.clone()), t: po.t.with_codomain(d.clone()), d, ..po })
}

/// `K_ξ L`, attaching the cells of `L` in order of total degree along the
/// Dwyer inclusions `K_ξ ∂Δ[p,q] -> ξ(p̌ × q̂)`.
pub fn k_xi(pres: &Presentation, shape_budget: usize) -> Result<KXi> {
    pres.check_complete()?;
    let mut order: Vec<usize> = (0..pres.cells.len()).collect();
    order.sort_by_key(|&x| (pres.cells[x].degree.0 + pres.cells[x].degree.1, x));
    let mut cache = ShapeCache { shapes: HashMap::new(), budget: shape_budget };
    let mut k = Arc::new(RelCategory::empty());
    let mut characteristic: Vec<Option<Vec<usize>>> = vec![None; pres.cells.len()];
    let mut origin = Vec::new();
    let mut attachments = Vec::new();
    for x in order {
        let cell = &pres.cells[x];
        let (p, q) = cell.degree;
        cache.get(p, q)?;
        let mut faces: Vec<(OrderMap, OrderMap, &CellRef)> = Vec::new();
        for (i, f) in cell.hfaces.iter().enumerate() {
            faces.push((coface(p, i), identity_map(q), f.as_ref().expect("complete")));
        }
        for (j, f) in cell.vfaces.iter().enumerate() {
            faces.push((identity_map(p), coface(q, j), f.as_ref().expect("complete")));
        }
        let shape_size = cache.get(p, q)?.xi.sub().num_objects();
        let mut att: Vec<Option<usize>> = vec![None; shape_size];
        for (th, tv, f) in faces {
            let (fp, fq) = f.degree();
            let (y, ydeg) = (f.cell, pres.cells[f.cell].degree);
            let phi_y = characteristic[y].clone().ok_or_else(|| Error::Invalid("a face was not attached first".into()))?;
            cache.get(fp, fq)?;
            cache.get(ydeg.0, ydeg.1)?;
            let face_shape = &cache.shapes[&(fp, fq)];
            let y_shape = &cache.shapes[&ydeg];
            let into_y = y_shape.induced_objects(face_shape, &f.h, &f.v)?;
            let into_x = cache.shapes[&(p, q)].induced_objects(face_shape, &th, &tv)?;
            for (w, &img) in into_x.iter().enumerate() {
                let val = phi_y[into_y[w]];
                match att[img] {
                    None => att[img] = Some(val),
                    Some(old) if old != val => {
                        return Err(Error::Invalid(format!("inconsistent faces on the boundary of {}", cell.name)))
                    }
                    _ => {}
                }
            }
        }
        let shape = &cache.shapes[&(p, q)];
        let p_incl = shape.xi.inner.sub.full_subcategory(&shape.inner_boundary())?;
        let (_, sq, w) = xi_t_cosieve_witness(&p_incl)?;
        if sq.chains != shape.xi.outer.chains {
            return Err(Error::Invalid("subdivision bookkeeping differs".into()));
        }
        let mut s_obj = Vec::with_capacity(w.incl.dom.num_objects());
        for &o in &w.incl.obj {
            s_obj.push(att[o].ok_or_else(|| Error::Invalid(format!("the faces of {} do not cover its boundary", cell.name)))?);
        }
        if att.iter().enumerate().any(|(o, a)| a.is_some() && !w.incl.obj.contains(&o)) {
            return Err(Error::Invalid("a face lands outside the boundary".into()));
        }
        let s = RelFunctor::from_object_map(w.incl.dom.clone(), k.clone(), s_obj)
            .map_err(|e| Error::Invalid(format!("the attaching map of {} is not a relative functor: {e}", cell.name)))?;
        let po: PushoutResult = pushout_along_sieve(&w.incl, &s, Some(&w.sdr))?;
        if !po.d.is_thin() || !po.d.is_poset() {
            return Err(Error::Invalid(format!("attaching {} does not give a relative poset", cell.name)));
        }
        let po = rename_new(po, &k, &cell.name, shape.xi.sub())?;
        let nc = k.num_objects();
        origin.resize(po.d.num_objects(), (usize::MAX, 0));
        for (o, &img) in po.t.obj.iter().enumerate() {
            if img >= nc {
                origin[img] = (x, o);
            }
        }
        attachments.push(Attachment {
            cell: cell.name.clone(),
            degree: (p, q),
            boundary_objects: w.incl.dom.num_objects(),
            new_objects: po.d.num_objects() - nc,
            dwyer_verified: true,
        });
        characteristic[x] = Some(po.t.obj.clone());
        k = po.d.clone();
    }
    Ok(KXi {
        poset: k,
        characteristic: characteristic.into_iter().map(|c| c.expect("every cell attached")).collect(),
        origin,
        attachments,
    })
}

impl KXi {
    /// The characteristic functor of cell `x`.
    pub fn characteristic_functor(&self, pres: &Presentation, x: usize) -> Result<RelFunctor> {
        let (p, q) = pres.cells[x].degree;
        let shape = SubdividedBisimplex::new(p, q)?;
        RelFunctor::from_object_map(shape.xi.sub().clone(), self.poset.clone(), self.characteristic[x].clone())
    }
}

/// The map `K_ξ L' -> K_ξ L` induced by a sub-presentation (cells matched by name).
pub fn k_xi_inclusion(sub: &KXi, sub_pres: &Presentation, sup: &KXi, sup_pres: &Presentation) -> Result<RelFunctor> {
    let mut obj = Vec::with_capacity(sub.poset.num_objects());
    for &(x, o) in &sub.origin {
        let name = &sub_pres.cells[x].name;
        let y = sup_pres.cell_index(name).ok_or_else(|| Error::Invalid(format!("cell {name} is missing")))?;
        obj.push(sup.characteristic[y][o]);
    }
    RelFunctor::from_object_map(sub.poset.clone(), sup.poset.clone(), obj)
}

/// The unit `Δ[p, q] -> N_ξ ξ(p̌ × q̂)`: a cell `(α, β)` goes to `ξ(α × β)`.
pub fn unit_eta(p: usize, q: usize, bounds: (usize, usize), budget: &NerveBudget) -> Result<(Representable, Nerve, BiSMap)> {
    let target = SubdividedBisimplex::new(p, q)?;
    let y = target.xi.sub().clone();
    let nx = nerve_n_xi(&y, bounds, budget)?;
    let d = delta(p, q, bounds);
    let (pm, qm) = bounds;
    let mut maps = vec![vec![Vec::new(); qm + 1]; pm + 1];
    for i in 0..=pm {
        for j in 0..=qm {
            let dom = nx.shapes.subdivided[i][j].as_ref().expect("within bounds");
            let mut col = Vec::with_capacity(d.set.counts[i][j]);
            for c in 0..d.set.counts[i][j] {
                let (a, b) = d.cell(i, j, c);
                let obj: Vec<usize> = (0..(i + 1) * (j + 1)).map(|o| a[o / (j + 1)] * (q + 1) + b[o % (j + 1)]).collect();
                let f = RelFunctor::from_object_map(nx.shapes.products[i][j].clone(), target.product.clone(), obj)?;
                let g = subdivide_map_two_fold(&f, dom, &target.xi)?;
                col.push(nx.index_of(i, j, &g).ok_or_else(|| Error::Invalid("ξ(α × β) is not a cell".into()))?);
            }
            maps[i][j] = col;
        }
    }
    Ok((d, nx, BiSMap { maps }))
}

/// `N f` between two plain nerves.
pub fn nerve_map(src: &Nerve, dst: &Nerve, f: &RelFunctor) -> Result<BiSMap> {
    let (pm, qm) = src.set.bounds;
    let mut maps = vec![vec![Vec::new(); qm + 1]; pm + 1];
    for p in 0..=pm {
        for q in 0..=qm {
            maps[p][q] = (0..src.set.counts[p][q])
                .map(|c| {
                    let g = f.after(&src.cell(p, q, c))?;
                    dst.index_of(p, q, &g).ok_or_else(|| Error::Invalid("image is not a cell".into()))
                })
                .collect::<Result<Vec<_>>>()?;
        }
    }
    Ok(BiSMap { maps })
}

/// The pushout of `B <- A -> C` along a levelwise injective `i`, with the
/// maps from `C` and from `B`. Cells are those of `C` followed by those of
/// `B` outside the image of `A`.
pub fn pushout_along_mono(
    a: &TruncBiSSet,
    b: &TruncBiSSet,
    c: &TruncBiSSet,
    i: &BiSMap,
    s: &BiSMap,
) -> Result<(TruncBiSSet, BiSMap, BiSMap)> {
    if !i.is_injective() || !i.commutes(a, b) || !s.commutes(a, c) {
        return Err(Error::Precondition("need a levelwise injective map and a second map from the same source".into()));
    }
    let (pm, qm) = b.bounds;
    let mut from_b = vec![vec![Vec::new(); qm + 1]; pm + 1];
    let mut counts = vec![vec![0; qm + 1]; pm + 1];
    for p in 0..=pm {
        for q in 0..=qm {
            let mut pre = vec![None; b.counts[p][q]];
            for (x, &y) in i.maps[p][q].iter().enumerate() {
                pre[y] = Some(x);
            }
            let nc = c.counts[p][q];
            let mut next = nc;
            from_b[p][q] = pre
                .iter()
                .map(|pa| match pa {
                    Some(x) => s.maps[p][q][*x],
                    None => {
                        next += 1;
                        next - 1
                    }
                })
                .collect();
            counts[p][q] = next;
        }
    }
    // a representative of each new cell in B
    let mut rep = vec![vec![Vec::new(); qm + 1]; pm + 1];
    for p in 0..=pm {
        for q in 0..=qm {
            let nc = c.counts[p][q];
            rep[p][q] = vec![0; counts[p][q] - nc];
            for (y, &img) in from_b[p][q].iter().enumerate() {
                if img >= nc && !i.maps[p][q].contains(&y) {
                    rep[p][q][img - nc] = y;
                }
            }
        }
    }
    let (fb, rp) = (&from_b, &rep);
    let via = |p: usize, q: usize, cell: usize, on_c: &dyn Fn(usize) -> usize, on_b: &dyn Fn(usize) -> (usize, usize, usize)| {
        let nc = c.counts[p][q];
        if cell < nc {
            on_c(cell)
        } else {
            let (tp, tq, y) = on_b(rp[p][q][cell - nc]);
            fb[tp][tq][y]
        }
    };
    let hf = |p: usize, q: usize, k: usize, x: usize| {
        via(p, q, x, &|y| c.hfaces[p][q][k][y], &|y| (p - 1, q, b.hfaces[p][q][k][y]))
    };
    let vf = |p: usize, q: usize, k: usize, x: usize| {
        via(p, q, x, &|y| c.vfaces[p][q][k][y], &|y| (p, q - 1, b.vfaces[p][q][k][y]))
    };
    let hd = |p: usize, q: usize, k: usize, x: usize| {
        via(p, q, x, &|y| c.hdegs[p][q][k][y], &|y| (p + 1, q, b.hdegs[p][q][k][y]))
    };
    let vd = |p: usize, q: usize, k: usize, x: usize| {
        via(p, q, x, &|y| c.vdegs[p][q][k][y], &|y| (p, q + 1, b.vdegs[p][q][k][y]))
    };
    let set = TruncBiSSet::build(b.bounds, counts.clone(), &Structure { hface: &hf, vface: &vf, hdeg: &hd, vdeg: &vd });
    let from_c = BiSMap { maps: c.counts.iter().map(|r| r.iter().map(|&n| (0..n).collect()).collect()).collect() };
    Ok((set, from_c, BiSMap { maps: from_b }))
}

/// The nerve pushout `N B ⊔_{N A} N C` and its comparison map to `N D` for a
/// pushout `D` along a sieve.
#[derive(Clone, Debug)]
pub struct PushoutComparison {
    pub glued: TruncBiSSet,
    pub nerve_d: Nerve,
    pub map: BiSMap,
}

pub fn pushout_comparison(
    i: &RelFunctor,
    s: &RelFunctor,
    po: &PushoutResult,
    bounds: (usize, usize),
    budget: &NerveBudget,
) -> Result<PushoutComparison> {
    let na = nerve_n(&i.dom, bounds, budget)?;
    let nb = nerve_n(&i.cod, bounds, budget)?;
    let nc = nerve_n(&s.cod, bounds, budget)?;
    let nd = nerve_n(&po.d, bounds, budget)?;
    let ni = nerve_map(&na, &nb, i)?;
    let ns = nerve_map(&na, &nc, s)?;
    let (glued, from_c, from_b) = pushout_along_mono(&na.set, &nb.set, &nc.set, &ni, &ns)?;
    let nj = nerve_map(&nc, &nd, &po.j)?;
    let nt = nerve_map(&nb, &nd, &po.t)?;
    let (pm, qm) = bounds;
    let mut maps = vec![vec![Vec::new(); qm + 1]; pm + 1];
    for p in 0..=pm {
        for q in 0..=qm {
            let mut col = vec![usize::MAX; glued.counts[p][q]];
            for (x, &y) in from_c.maps[p][q].iter().enumerate() {
                col[y] = nj.maps[p][q][x];
            }
            for (x, &y) in from_b.maps[p][q].iter().enumerate() {
                col[y] = nt.maps[p][q][x];
            }
            maps[p][q] = col;
        }
    }
    Ok(PushoutComparison { glued, nerve_d: nd, map: BiSMap { maps } })
}

/// `K_ξ ∂Δ[p,q] -> K_ξ Δ[p,q]` with the retraction onto the boundary that
/// keeps the part of each chain lying in the boundary.
pub fn boundary_inclusion(p: usize, q: usize, shape_budget: usize) -> Result<(RelFunctor, DwyerWitness)> {
    let b = Presentation::boundary_delta(p, q);
    let d = Presentation::delta(p, q);
    let kb = k_xi(&b, shape_budget)?;
    let kd = k_xi(&d, shape_budget)?;
    let incl = k_xi_inclusion(&kb, &b, &kd, &d)?;
    let shape = SubdividedBisimplex::new(p, q)?;
    let inner = shape.xi.inner.sub.full_subcategory(&shape.inner_boundary())?;
    let (_, _, w) = xi_t_cosieve_witness(&inner)?;
    let top = d.cells.iter().position(|c| c.degree == (p, q)).expect("top cell");
    let chi = &kd.characteristic[top];
    let mut back = vec![usize::MAX; chi.len()];
    for (o, &x) in chi.iter().enumerate() {
        back[x] = o;
    }
    let amb = w.ambient();
    let r_obj = |z: usize| chi[amb.r_obj[back[z]].expect("z lies in the generated cosieve")];
    let s = |z: usize| kd.poset.arrow(r_obj(z), z).expect("r z <= z");
    let wit = witness_from_ambient(&incl, r_obj, None, s)?;
    Ok((incl, wit))
}
