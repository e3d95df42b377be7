//! Seeded random relative posets, sieves, cosieves, functors and Dwyer inclusions.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dwyer::{check_dwyer, DwyerWitness, DEFAULT_SDR_BUDGET};
use crate::enumerate::{functor_maps, object_maps};
use crate::error::Result;
use crate::relcat::{relative_poset, RelCategory, RelFunctor};

pub type CaseRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CaseRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A relative poset on objects `0..n` whose order extends the index order.
/// Each pair is related with probability `density`, and a stated relation is
/// a weak equivalence with probability `we`.
pub fn random_relposet(rng: &mut CaseRng, n: usize, density: f64, we: f64) -> RelCategory {
    let mut stated = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                stated.push((a, b, rng.gen_bool(we)));
            }
        }
    }
    // shuffle the names so that the index order is not always a linear extension
    let mut names: Vec<usize> = (0..n).collect();
    names.shuffle(rng);
    relative_poset(names.iter().map(|i| i.to_string()).collect(), &stated).expect("acyclic by construction")
}

/// A relative poset with between `lo` and `hi` objects.
pub fn random_relposet_between(rng: &mut CaseRng, lo: usize, hi: usize) -> Arc<RelCategory> {
    let n = rng.gen_range(lo..=hi);
    let density = rng.gen_range(0.2..0.7);
    let we = rng.gen_range(0.0..1.0);
    Arc::new(random_relposet(rng, n, density, we))
}

fn closure(p: &RelCategory, seed: &[usize], upward: bool) -> Vec<usize> {
    (0..p.num_objects())
        .filter(|&x| seed.iter().any(|&s| if upward { p.arrow(s, x).is_some() } else { p.arrow(x, s).is_some() }))
        .collect()
}

fn random_subset(rng: &mut CaseRng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.35)).collect()
}

/// The full inclusion of a random up-closed set.
pub fn random_cosieve(rng: &mut CaseRng, p: &Arc<RelCategory>) -> Result<RelFunctor> {
    let seed = random_subset(rng, p.num_objects());
    p.full_subcategory(&closure(p, &seed, true))
}

/// The full inclusion of a random down-closed set.
pub fn random_sieve(rng: &mut CaseRng, p: &Arc<RelCategory>) -> Result<RelFunctor> {
    let seed = random_subset(rng, p.num_objects());
    p.full_subcategory(&closure(p, &seed, false))
}

/// A uniformly chosen relative functor `a -> x`, if there are at most `limit`.
pub fn random_functor(rng: &mut CaseRng, a: &Arc<RelCategory>, x: &Arc<RelCategory>, limit: usize) -> Result<Option<RelFunctor>> {
    let maps = functor_maps(a, x, None, Some(limit))?;
    Ok(maps.choose(rng).map(|(o, m)| RelFunctor { dom: a.clone(), cod: x.clone(), obj: o.clone(), mor: m.clone() }))
}

/// A random sieve inclusion into a random relative poset that passes
/// `check_dwyer`, with its searched witness.
pub fn random_dwyer_inclusion(rng: &mut CaseRng, lo: usize, hi: usize, tries: usize) -> Result<Option<DwyerWitness>> {
    for _ in 0..tries {
        let b = random_relposet_between(rng, lo, hi);
        let incl = random_sieve(rng, &b)?;
        if let Some(w) = check_dwyer(&incl, Some(DEFAULT_SDR_BUDGET))?.witness() {
            return Ok(Some(w.clone()));
        }
    }
    Ok(None)
}

/// A random Dwyer sieve inclusion into a given relative poset.
pub fn random_dwyer_sieve_in(rng: &mut CaseRng, b: &Arc<RelCategory>, tries: usize) -> Result<Option<DwyerWitness>> {
    for _ in 0..tries {
        let incl = random_sieve(rng, b)?;
        if let Some(w) = check_dwyer(&incl, Some(DEFAULT_SDR_BUDGET))?.witness() {
            return Ok(Some(w.clone()));
        }
    }
    Ok(None)
}

/// A random idempotent relative endofunctor of a relative poset `B` that maps
/// the image of `incl` into itself.
pub fn random_idempotent(rng: &mut CaseRng, incl: &RelFunctor, limit: usize) -> Result<Option<RelFunctor>> {
    let b = &incl.cod;
    let mut inside = vec![false; b.num_objects()];
    for &o in &incl.obj {
        inside[o] = true;
    }
    let maps = object_maps(b, b, Some(limit))?;
    let good: Vec<&Vec<usize>> = maps
        .iter()
        .filter(|e| (0..e.len()).all(|o| e[e[o]] == e[o]) && (0..e.len()).all(|o| !inside[o] || inside[e[o]]))
        .collect();
    match good.choose(rng) {
        Some(e) => Ok(Some(RelFunctor::from_object_map(b.clone(), b.clone(), (*e).clone())?)),
        None => Ok(None),
    }
}
