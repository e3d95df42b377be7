//! Relative categories of relative functors and the currying bijection.

use std::collections::HashMap;
use std::sync::Arc;

use crate::enumerate::{enumerate_functors, for_each_functor, Constraints};
use crate::error::{Error, Result};
use crate::relcat::{product, Morphism, RelCategory, RelFunctor};

/// `Z^Y`: objects are relative functors Y -> Z, morphisms natural
/// transformations stored by their components, weak equivalences the
/// transformations whose components are all weak equivalences.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub cat: Arc<RelCategory>,
    pub base: Arc<RelCategory>,
    pub target: Arc<RelCategory>,
    pub functors: Vec<RelFunctor>,
    /// Components (one per object of the base) of each morphism.
    pub components: Vec<Vec<usize>>,
    functor_index: HashMap<(Vec<usize>, Vec<usize>), usize>,
    transformation_index: HashMap<(usize, usize, Vec<usize>), usize>,
}

fn natural_transformations(y: &RelCategory, z: &RelCategory, f: &RelFunctor, g: &RelFunctor) -> Vec<Vec<usize>> {
    let n = y.num_objects();
    let mut out = Vec::new();
    let mut comp = vec![0; n];
    fn rec(
        k: usize,
        y: &RelCategory,
        z: &RelCategory,
        f: &RelFunctor,
        g: &RelFunctor,
        comp: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == y.num_objects() {
            out.push(comp.clone());
            return;
        }
        for &c in z.hom(f.obj[k], g.obj[k]) {
            comp[k] = c;
            let natural = y.morphisms().iter().enumerate().all(|(i, m)| {
                if m.src > k || m.dst > k {
                    return true;
                }
                let lhs = z.compose(g.mor[i], comp[m.src]);
                let rhs = z.compose(comp[m.dst], f.mor[i]);
                lhs.is_some() && lhs == rhs
            });
            if natural {
                rec(k + 1, y, z, f, g, comp, out);
            }
        }
    }
    rec(0, y, z, f, g, &mut comp, &mut out);
    out
}

/// The relative category `Z^Y`.
pub fn exponential(z: &Arc<RelCategory>, y: &Arc<RelCategory>) -> Result<Exponential> {
    let functors = enumerate_functors(y, z);
    let objects: Vec<String> = functors
        .iter()
        .map(|f| {
            let names: Vec<&str> = f.obj.iter().map(|&o| z.objects()[o].as_str()).collect();
            let base = format!("[{}]", names.join(","));
            if z.is_thin() {
                base
            } else {
                let mors: Vec<&str> = f.mor.iter().map(|&m| z.morphism(m).id.as_str()).collect();
                format!("{base}{{{}}}", mors.join(","))
            }
        })
        .collect();
    let mut morphisms = Vec::new();
    let mut components = Vec::new();
    let mut identities = vec![0; functors.len()];
    let mut transformation_index = HashMap::new();
    for (a, fa) in functors.iter().enumerate() {
        for (b, fb) in functors.iter().enumerate() {
            for comp in natural_transformations(y, z, fa, fb) {
                let is_id = a == b && comp.iter().enumerate().all(|(o, &c)| c == z.identity(fa.obj[o]));
                if is_id {
                    identities[a] = morphisms.len();
                }
                let names: Vec<&str> = comp.iter().map(|&c| z.morphism(c).id.as_str()).collect();
                let we = comp.iter().all(|&c| z.morphism(c).we);
                transformation_index.insert((a, b, comp.clone()), morphisms.len());
                morphisms.push(Morphism {
                    id: format!("{}=>{}:<{}>", objects[a], objects[b], names.join(",")),
                    src: a,
                    dst: b,
                    we,
                });
                components.push(comp);
            }
        }
    }
    let mut composites = Vec::new();
    let thin = {
        let mut seen = std::collections::HashSet::new();
        morphisms.iter().all(|m| seen.insert((m.src, m.dst)))
    };
    if !thin {
        for f in 0..morphisms.len() {
            for g in 0..morphisms.len() {
                if morphisms[f].dst != morphisms[g].src {
                    continue;
                }
                let comp: Vec<usize> = (0..y.num_objects())
                    .map(|o| z.compose(components[g][o], components[f][o]).expect("components compose"))
                    .collect();
                let h = transformation_index[&(morphisms[f].src, morphisms[g].dst, comp)];
                composites.push((g, f, h));
            }
        }
    }
    let cat = RelCategory::new(objects, morphisms, identities, composites)?;
    let functor_index = functors
        .iter()
        .enumerate()
        .map(|(i, f)| ((f.obj.clone(), f.mor.clone()), i))
        .collect();
    Ok(Exponential {
        cat: Arc::new(cat),
        base: y.clone(),
        target: z.clone(),
        functors,
        components,
        functor_index,
        transformation_index,
    })
}

impl Exponential {
    pub fn functor_index(&self, f: &RelFunctor) -> Option<usize> {
        self.functor_index.get(&(f.obj.clone(), f.mor.clone())).copied()
    }

    pub fn index_of_maps(&self, obj: &[usize], mor: &[usize]) -> Option<usize> {
        self.functor_index.get(&(obj.to_vec(), mor.to_vec())).copied()
    }

    pub fn transformation(&self, src: usize, dst: usize, components: &[usize]) -> Option<usize> {
        self.transformation_index.get(&(src, dst, components.to_vec())).copied()
    }
}

/// Curries `f: X × Y -> Z` into `X -> Z^Y`; `(g x) y = f(x, y)`.
pub fn transpose(f: &RelFunctor, x: &Arc<RelCategory>, exp: &Exponential) -> Result<RelFunctor> {
    let y = &exp.base;
    let (ny, my) = (y.num_objects(), y.num_morphisms());
    if f.dom.num_objects() != x.num_objects() * ny || f.dom.num_morphisms() != x.num_morphisms() * my {
        return Err(Error::Shape("functor domain is not X × Y".into()));
    }
    let mut obj = Vec::with_capacity(x.num_objects());
    for a in 0..x.num_objects() {
        let o: Vec<usize> = (0..ny).map(|b| f.obj[a * ny + b]).collect();
        let m: Vec<usize> = (0..my).map(|n| f.mor[x.identity(a) * my + n]).collect();
        obj.push(exp.index_of_maps(&o, &m).ok_or_else(|| Error::Shape("slice is not a relative functor".into()))?);
    }
    let mut mor = Vec::with_capacity(x.num_morphisms());
    for (i, m) in x.morphisms().iter().enumerate() {
        let comp: Vec<usize> = (0..ny).map(|b| f.mor[i * my + y.identity(b)]).collect();
        mor.push(
            exp.transformation(obj[m.src], obj[m.dst], &comp)
                .ok_or_else(|| Error::Shape("components are not a natural transformation".into()))?,
        );
    }
    RelFunctor::new(x.clone(), exp.cat.clone(), obj, mor)
}

/// Inverse of [`transpose`]: `g: X -> Z^Y` to `X × Y -> Z`.
pub fn untranspose(g: &RelFunctor, exp: &Exponential) -> Result<RelFunctor> {
    let x = &g.dom;
    let y = &exp.base;
    let z = &exp.target;
    let dom = Arc::new(product(x, y));
    let (ny, my) = (y.num_objects(), y.num_morphisms());
    let mut obj = vec![0; dom.num_objects()];
    for a in 0..x.num_objects() {
        for b in 0..ny {
            obj[a * ny + b] = exp.functors[g.obj[a]].obj[b];
        }
    }
    let mut mor = vec![0; dom.num_morphisms()];
    for (i, m) in x.morphisms().iter().enumerate() {
        let eta = &exp.components[g.mor[i]];
        let target_functor = &exp.functors[g.obj[m.dst]];
        for (n, k) in y.morphisms().iter().enumerate() {
            mor[i * my + n] = z
                .compose(target_functor.mor[n], eta[k.src])
                .ok_or_else(|| Error::Shape("transformation does not compose".into()))?;
        }
    }
    RelFunctor::new(dom, z.clone(), obj, mor)
}

/// Precomposition `Z^Y -> Z^X` with `e: X -> Y`.
pub fn induced_exponential_map(e: &RelFunctor, zy: &Exponential, zx: &Exponential) -> Result<RelFunctor> {
    let mut obj = Vec::with_capacity(zy.functors.len());
    for f in &zy.functors {
        let c = f.after(e)?;
        obj.push(zx.functor_index(&c).ok_or_else(|| Error::Shape("precomposite missing".into()))?);
    }
    let mut mor = Vec::with_capacity(zy.cat.num_morphisms());
    for (i, m) in zy.cat.morphisms().iter().enumerate() {
        let comp: Vec<usize> = e.obj.iter().map(|&o| zy.components[i][o]).collect();
        mor.push(
            zx.transformation(obj[m.src], obj[m.dst], &comp)
                .ok_or_else(|| Error::Shape("whiskered transformation missing".into()))?,
        );
    }
    RelFunctor::new(zy.cat.clone(), zx.cat.clone(), obj, mor)
}

/// Number of relative functors `a -> x` under optional constraints.
pub fn hom_count(a: &RelCategory, x: &RelCategory) -> usize {
    let mut n = 0;
    for_each_functor(a, x, None::<&Constraints>, |_, _| {
        n += 1;
        true
    });
    n
}
