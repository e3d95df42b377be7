//! Randomized property suites and homology certificates, shared by the
//! command line and the test suites.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::bisimplicial::{diagonal_certificate, pi_star_for, row_certificate, NerveBudget};
use crate::dwyer::{
    check_co_dwyer, check_dwyer, check_dwyer_with, compose_dwyer, cosieve_generated, idempotent_retract, is_sieve,
    pushout_along_sieve, retract_witness, transport_sdr_along_pushout, xi_t_cosieve_witness, DEFAULT_SDR_BUDGET,
};
use crate::enumerate::functor_maps;
use crate::error::{Error, Result};
use crate::exponential::exponential;
use crate::homology::IsoCertificate;
use crate::homotopy::{k_homotopy, precomposition_homotopy, verify_sdr, StrictHomotopy};
use crate::kxi::{boundary_inclusion, pushout_comparison, unit_eta};
use crate::random::{
    random_cosieve, random_dwyer_inclusion, random_dwyer_sieve_in, random_functor, random_idempotent,
    random_relposet_between, random_sieve, rng, CaseRng,
};
use crate::relcat::{arrow_category, Flavor, RelCategory, RelFunctor};
use crate::subdiv::{find_isomorphism, subdivide_map, subdivision, xi_i, Kind};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    /// Strict homotopies induce strict homotopies of precomposition maps.
    Precomposition,
    /// Strict homotopies subdivide to verified zigzags.
    SubdividedHomotopy,
    /// Retracts of Dwyer inclusions are Dwyer, with transported witnesses.
    Retract,
    /// Pushouts along Dwyer inclusions.
    Pushout,
    /// Composites of Dwyer inclusions.
    Composite,
    /// Terminal subdivisions of cosieve inclusions are Dwyer.
    SubdividedCosieve,
    /// `K_ξ ∂Δ[p,q] -> K_ξ Δ[p,q]` is Dwyer.
    BoundaryInclusion,
    /// Nerves of Dwyer pushouts compared with pushouts of nerves.
    PushoutNerve,
    /// The unit `Δ[p,q] -> N_ξ K_ξ Δ[p,q]`.
    Unit,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Precomposition,
        Property::SubdividedHomotopy,
        Property::Retract,
        Property::Pushout,
        Property::Composite,
        Property::SubdividedCosieve,
        Property::BoundaryInclusion,
        Property::PushoutNerve,
        Property::Unit,
    ];

    /// The short key used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            Property::Precomposition => "6.2",
            Property::SubdividedHomotopy => "6.3",
            Property::Retract => "8.1",
            Property::Pushout => "8.2",
            Property::Composite => "8.3",
            Property::SubdividedCosieve => "8.4",
            Property::BoundaryInclusion => "8.5",
            Property::PushoutNerve => "9.1",
            Property::Unit => "9.3",
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Property::Precomposition => "precomposition",
            Property::SubdividedHomotopy => "subdivided-homotopy",
            Property::Retract => "retract",
            Property::Pushout => "pushout",
            Property::Composite => "composite",
            Property::SubdividedCosieve => "subdivided-cosieve",
            Property::BoundaryInclusion => "boundary-inclusion",
            Property::PushoutNerve => "pushout-nerve",
            Property::Unit => "unit",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.key() == s || p.slug() == s)
    }

    pub fn default_cases(self) -> usize {
        match self {
            Property::BoundaryInclusion => 4,
            Property::Unit => 3,
            Property::PushoutNerve => 10,
            _ => 50,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub property: Property,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.cases.iter().filter(|c| c.passed).count();
        writeln!(out, "{} ({}) seed {}: {}/{} cases pass", self.property.slug(), self.property.key(), self.seed, ok, self.cases.len())?;
        for c in &self.cases {
            writeln!(out, "  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.label, c.detail)?;
        }
        Ok(())
    }
}

fn case(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> CaseResult {
    CaseResult { label: label.into(), passed, detail: detail.into() }
}

fn describe(c: &RelCategory) -> String {
    let rels: Vec<String> = c
        .morphisms()
        .iter()
        .filter(|m| m.src != m.dst)
        .map(|m| format!("{}<{}{}", c.objects()[m.src], c.objects()[m.dst], if m.we { "~" } else { "" }))
        .collect();
    format!("{{{}}} [{}]", c.objects().join(","), rels.join(" "))
}

fn names(c: &RelCategory, objs: &[usize]) -> String {
    objs.iter().map(|&o| c.objects()[o].as_str()).collect::<Vec<_>>().join(",")
}

/// Runs `cases` random cases of a property from `seed`.
pub fn run_property(property: Property, seed: u64, cases: usize) -> Result<PropertyReport> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(cases);
    for k in 0..cases {
        let res = match property {
            Property::Precomposition => precomposition_case(&mut r, k),
            Property::SubdividedHomotopy => subdivided_homotopy_case(&mut r, k),
            Property::Retract => retract_case(&mut r, k),
            Property::Pushout => pushout_case(&mut r, k),
            Property::Composite => composite_case(&mut r, k),
            Property::SubdividedCosieve => subdivided_cosieve_case(&mut r, k),
            Property::BoundaryInclusion => boundary_case(k),
            Property::PushoutNerve => pushout_nerve_case(k),
            Property::Unit => unit_case(k),
        };
        out.push(res.unwrap_or_else(|e| case(format!("case {k}"), false, format!("error: {e}"))));
    }
    Ok(PropertyReport { property, seed, cases: out })
}

/// A random strict homotopy between functors `X -> Y` of the given sizes.
fn random_homotopy(r: &mut CaseRng, x_size: (usize, usize), y_size: (usize, usize)) -> Result<Option<StrictHomotopy>> {
    for _ in 0..20 {
        let x = random_relposet_between(r, x_size.0, x_size.1);
        let y = random_relposet_between(r, y_size.0, y_size.1);
        let hs = strict_homotopies(&x, &y, 2000)?;
        if let Some(h) = hs.choose(r) {
            return Ok(Some(h.clone()));
        }
    }
    Ok(None)
}

/// Every strict homotopy between relative functors `x -> y`, if there are at
/// most `limit` functors.
pub fn strict_homotopies(x: &Arc<RelCategory>, y: &Arc<RelCategory>, limit: usize) -> Result<Vec<StrictHomotopy>> {
    let fs: Vec<RelFunctor> = functor_maps(x, y, None, Some(limit))?
        .into_iter()
        .map(|(o, m)| RelFunctor { dom: x.clone(), cod: y.clone(), obj: o, mor: m })
        .collect();
    let mut out = Vec::new();
    for f in &fs {
        for g in &fs {
            if let Ok(h) = StrictHomotopy::from_arrows(f, g) {
                if h.check() {
                    out.push(h);
                }
            }
        }
    }
    Ok(out)
}

fn precomposition_case(r: &mut CaseRng, k: usize) -> Result<CaseResult> {
    let Some(h) = random_homotopy(r, (1, 3), (1, 3))? else {
        return Ok(case(format!("case {k}"), false, "no strict homotopy found"));
    };
    let z = random_relposet_between(r, 1, 3);
    let zy = exponential(&z, &h.source.cod)?;
    let zx = exponential(&z, &h.source.dom)?;
    let hs = precomposition_homotopy(&h, &zy, &zx)?;
    let ok = hs.check();
    Ok(case(
        format!("case {k}"),
        ok,
        format!(
            "X = {}, Y = {}, Z = {}; f = {:?}, g = {:?}; {} functors Y -> Z",
            describe(&h.source.dom),
            describe(&h.source.cod),
            describe(&z),
            h.source.obj,
            h.target.obj,
            zy.functors.len()
        ),
    ))
}

/// Checks the subdivided zigzags of one strict homotopy in both directions.
pub fn check_subdivided_homotopy(h: &StrictHomotopy) -> Result<(bool, String)> {
    let mut ok = true;
    let mut lengths = Vec::new();
    for kind in [Kind::Terminal, Kind::Initial] {
        let zz = k_homotopy(h, kind)?;
        let sd = subdivision(&h.source.dom, kind)?;
        let sc = subdivision(&h.source.cod, kind)?;
        let f = subdivide_map(&h.source, &sd, &sc)?;
        let g = subdivide_map(&h.target, &sd, &sc)?;
        ok &= zz.connects(&f, &g) || zz.connects(&g, &f);
        lengths.push(zz.len());
    }
    Ok((ok, format!("zigzag lengths {lengths:?}")))
}

fn subdivided_homotopy_case(r: &mut CaseRng, k: usize) -> Result<CaseResult> {
    let p = random_relposet_between(r, 1, 4);
    let x = random_relposet_between(r, 1, 3);
    let mut hs = strict_homotopies(&x, &p, 2000)?;
    hs.shuffle(r);
    hs.truncate(8);
    let mut ok = !hs.is_empty();
    let mut details = Vec::new();
    for h in &hs {
        let (good, d) = check_subdivided_homotopy(h).unwrap_or_else(|e| (false, format!("error: {e}")));
        ok &= good;
        details.push(format!("{:?}=>{:?} {d}", h.source.obj, h.target.obj));
    }
    Ok(case(format!("case {k}"), ok, format!("P = {}, X = {}; {}", describe(&p), describe(&x), details.join("; "))))
}

fn retract_case(r: &mut CaseRng, k: usize) -> Result<CaseResult> {
    for _ in 0..50 {
        let Some(w) = random_dwyer_inclusion(r, 2, 6, 20)? else { continue };
        let Some(e) = random_idempotent(r, &w.incl, 200_000)? else { continue };
        let (a_prime, f, g) = idempotent_retract(&w.incl, &e)?;
        let wp = retract_witness(&w, &a_prime, &f, &g)?;
        let transported = verify_sdr(&wp.a_in_za, &wp.sdr)?;
        let searched = check_dwyer(&a_prime, Some(DEFAULT_SDR_BUDGET))?.is_dwyer();
        let b = &w.incl.cod;
        return Ok(case(
            format!("case {k}"),
            transported && searched && wp.verify(),
            format!(
                "B = {}, A = {{{}}}, e = {:?}; retract A' = {{{}}} in B' = {{{}}}; r' = {:?}",
                describe(b),
                names(b, &w.incl.obj),
                e.obj,
                names(&a_prime.cod, &a_prime.obj),
                a_prime.cod.objects().join(","),
                wp.ambient().r_obj
            ),
        ));
    }
    Ok(case(format!("case {k}"), false, "no Dwyer inclusion with a nontrivial idempotent found"))
}

/// The checks on one pushout along a Dwyer inclusion: the result is Dwyer
/// (searched and transported), `Z C` is `C` glued to the image of
/// `Z A \ A`, `X A ≅ X C`, and posets stay posets.
pub fn check_pushout(i: &RelFunctor, s: &RelFunctor) -> Result<(bool, String)> {
    let w = check_dwyer(i, Some(DEFAULT_SDR_BUDGET))?
        .witness()
        .cloned()
        .ok_or_else(|| Error::Precondition("not a Dwyer inclusion".into()))?;
    let po = pushout_along_sieve(i, s, Some(&w.sdr))?;
    let searched = check_dwyer(&po.j, Some(DEFAULT_SDR_BUDGET))?.is_dwyer();
    let transported = transport_sdr_along_pushout(&w, s, &po)?.verify();
    let zc = cosieve_generated(&po.j)?;
    let mut glued: Vec<usize> = (0..s.cod.num_objects()).collect();
    let inside: Vec<bool> = (0..i.cod.num_objects()).map(|o| i.obj.contains(&o)).collect();
    for &z in &w.za.obj {
        if !inside[z] {
            glued.push(po.t.obj[z]);
        }
    }
    glued.sort_unstable();
    let mut zc_objs = zc.obj.clone();
    zc_objs.sort_unstable();
    let glued_ok = glued == zc_objs;
    let xs_ok = find_isomorphism(&po.xa.dom, &po.xc.dom).is_some();
    let posets = !(i.cod.is_poset() && s.cod.is_poset()) || po.d.is_poset();
    let ok = searched && transported && glued_ok && xs_ok && posets;
    Ok((
        ok,
        format!(
            "D has {} objects; searched {searched}, transported {transported}, Z C glued {glued_ok}, X A ≅ X C {xs_ok}, poset {posets}",
            po.d.num_objects()
        ),
    ))
}

/// A random pushout square along a Dwyer inclusion.
pub fn random_dwyer_span(r: &mut CaseRng, b_size: (usize, usize), c_size: (usize, usize)) -> Result<Option<(RelFunctor, RelFunctor)>> {
    for _ in 0..50 {
        let Some(w) = random_dwyer_inclusion(r, b_size.0, b_size.1, 20)? else { continue };
        let c = random_relposet_between(r, c_size.0, c_size.1);
        if let Some(s) = random_functor(r, &w.incl.dom, &c, 100_000)? {
            return Ok(Some((w.incl.clone(), s)));
        }
    }
    Ok(None)
}

fn pushout_case(r: &mut CaseRng, k: usize) -> Result<CaseResult> {
    let Some((i, s)) = random_dwyer_span(r, (2, 6), (1, 4))? else {
        return Ok(case(format!("case {k}"), false, "no Dwyer span found"));
    };
    let (ok, d) = check_pushout(&i, &s)?;
    Ok(case(
        format!("case {k}"),
        ok,
        format!("B = {}, A = {{{}}}, C = {}, s = {:?}; {d}", describe(&i.cod), names(&i.cod, &i.obj), describe(&s.cod), s.obj),
    ))
}

fn composite_case(r: &mut CaseRng, k: usize) -> Result<CaseResult> {
    for _ in 0..50 {
        let c = random_relposet_between(r, 3, 6);
        let Some(w12) = random_dwyer_sieve_in(r, &c, 10)? else { continue };
        let Some(w01) = random_dwyer_sieve_in(r, &w12.incl.dom, 10)? else { continue };
        let w02 = compose_dwyer(&w01, &w12)?;
        let verified = verify_sdr(&w02.a_in_za, &w02.sdr)? && w02.verify();
        // on Z(A0, A1) the composite retraction is the first one
        let a02 = w02.ambient();
        let a01 = w01.ambient();
        let i12 = &w12.incl;
        let restricts = w01.za.obj.iter().all(|&z| a02.r_obj[i12.obj[z]] == a01.r_obj[z].map(|y| i12.obj[y]));
        return Ok(case(
            format!("case {k}"),
            verified && restricts,
            format!(
                "A2 = {}, A1 = {{{}}}, A0 = {{{}}}; verified {verified}, restricts {restricts}",
                describe(&c),
                names(&c, &w12.incl.obj),
                names(&w01.incl.cod, &w01.incl.obj)
            ),
        ));
    }
    Ok(case(format!("case {k}"), false, "no chain of Dwyer inclusions found"))
}

fn subdivided_cosieve_case(r: &mut CaseRng, k: usize) -> Result<CaseResult> {
    let q = random_relposet_between(r, 1, 5);
    let incl = random_cosieve(r, &q)?;
    let (_, sq, w) = xi_t_cosieve_witness(&incl)?;
    let sieve = is_sieve(&w.incl)?.is_some();
    let ok = sieve && w.verify();
    let amb = w.ambient();
    let dump: Vec<String> = amb
        .r_obj
        .iter()
        .enumerate()
        .filter_map(|(z, rz)| rz.map(|rz| format!("{} -> {}", sq.sub.objects()[z], sq.sub.objects()[rz])))
        .collect();
    Ok(case(
        format!("case {k}"),
        ok,
        format!("Q = {}, P = {{{}}}; r: {}", describe(&q), names(&q, &incl.obj), dump.join(", ")),
    ))
}

pub const BOUNDARY_DEGREES: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

fn boundary_case(k: usize) -> Result<CaseResult> {
    let (p, q) = BOUNDARY_DEGREES[k % BOUNDARY_DEGREES.len()];
    let (incl, w) = boundary_inclusion(p, q, 500)?;
    let verdict = check_dwyer_with(&incl, &w.sdr)?;
    Ok(case(
        format!("({p},{q})"),
        verdict.is_dwyer(),
        format!("{} boundary objects in {} objects; supplied retraction {}", incl.dom.num_objects(), incl.cod.num_objects(), verdict.is_dwyer()),
    ))
}

/// Diagonal certificate for the comparison of a nerve pushout with the nerve
/// of the pushout.
pub fn pushout_nerve_certificate(i: &RelFunctor, s: &RelFunctor, budget: &NerveBudget) -> Result<IsoCertificate> {
    let po = pushout_along_sieve(i, s, None)?;
    let cmp = pushout_comparison(i, s, &po, (2, 2), budget)?;
    if !cmp.map.commutes(&cmp.glued, &cmp.nerve_d.set) {
        return Err(Error::Invalid("the comparison map does not commute with faces".into()));
    }
    diagonal_certificate(&cmp.map, &cmp.glued, &cmp.nerve_d.set, 1)
}

/// The small relative posets `0̂, 1̌, 1̂, 2̌, ξ_i 1̌`.
pub fn suite() -> Vec<(String, Arc<RelCategory>)> {
    let one_check = Arc::new(arrow_category(1, Flavor::Minimal));
    let xi_i_one_check = xi_i(&one_check).expect("subdivision of a poset").sub;
    vec![
        ("0^".to_string(), Arc::new(arrow_category(0, Flavor::Maximal))),
        ("1v".to_string(), one_check),
        ("1^".to_string(), Arc::new(arrow_category(1, Flavor::Maximal))),
        ("2v".to_string(), Arc::new(arrow_category(2, Flavor::Minimal))),
        ("xi_i 1v".to_string(), xi_i_one_check),
    ]
}

/// Spans `B <- A -> C` with `B`, `C` in the suite and `A -> B` a Dwyer sieve,
/// proper nonempty sieves first.
pub fn suite_dwyer_spans() -> Result<Vec<(RelFunctor, RelFunctor)>> {
    let members = suite();
    let mut proper = Vec::new();
    let mut other = Vec::new();
    for (_, b) in &members {
        let n = b.num_objects();
        for mask in 0u32..(1 << n) {
            let objs: Vec<usize> = (0..n).filter(|&o| mask >> o & 1 == 1).collect();
            let down = objs.iter().all(|&y| (0..n).all(|x| b.arrow(x, y).is_none() || objs.contains(&x)));
            if !down {
                continue;
            }
            let incl = b.full_subcategory(&objs)?;
            if !check_dwyer(&incl, Some(DEFAULT_SDR_BUDGET))?.is_dwyer() {
                continue;
            }
            for (_, c) in &members {
                for (obj, mor) in functor_maps(&incl.dom, c, None, Some(10_000))? {
                    let s = RelFunctor { dom: incl.dom.clone(), cod: c.clone(), obj, mor };
                    if !objs.is_empty() && objs.len() < n {
                        proper.push((incl.clone(), s));
                    } else {
                        other.push((incl.clone(), s));
                    }
                }
            }
        }
    }
    proper.extend(other);
    Ok(proper)
}

fn pushout_nerve_case(k: usize) -> Result<CaseResult> {
    let spans = suite_dwyer_spans()?;
    let (i, s) = spans[k % spans.len()].clone();
    let cert = pushout_nerve_certificate(&i, &s, &NerveBudget::default())?;
    Ok(case(
        format!("case {k}"),
        cert.iso,
        format!("B = {}, A = {{{}}}, C = {}; {}", describe(&i.cod), names(&i.cod, &i.obj), describe(&s.cod), show_certificate(&cert)),
    ))
}

pub fn show_certificate(c: &IsoCertificate) -> String {
    format!("source [{}], target [{}], cone [{}], iso through H{}: {}", c.dom, c.cod, c.cone, c.up_to, c.iso)
}

pub const UNIT_DEGREES: [(usize, usize); 3] = [(0, 0), (1, 0), (0, 1)];

/// The unit at `(p, q)`: `(0, 0)` must be an isomorphism, the others are
/// certified on diagonals through `H1`.
pub fn unit_certificate(p: usize, q: usize, budget: &NerveBudget) -> Result<(bool, String)> {
    if (p, q) == (0, 0) {
        let (d, nx, eta) = unit_eta(0, 0, (1, 1), budget)?;
        let ok = eta.commutes(&d.set, &nx.set) && eta.is_isomorphism(&nx.set);
        return Ok((ok, format!("exact isomorphism at bounds (1,1): {ok}")));
    }
    let (d, nx, eta) = unit_eta(p, q, (2, 2), budget)?;
    if !eta.commutes(&d.set, &nx.set) {
        return Ok((false, "the unit does not commute with faces".into()));
    }
    let cert = diagonal_certificate(&eta, &d.set, &nx.set, 1)?;
    Ok((cert.iso, show_certificate(&cert)))
}

fn unit_case(k: usize) -> Result<CaseResult> {
    let (p, q) = UNIT_DEGREES[k % UNIT_DEGREES.len()];
    let (ok, d) = unit_certificate(p, q, &NerveBudget::default())?;
    Ok(case(format!("({p},{q})"), ok, d))
}

/// Row `p` of `π*: N X -> N_ξ X` through `H1`, using cells of vertical degree
/// at most 2 (all that `H0` and `H1` see).
pub fn key_lemma_certificate(x: &Arc<RelCategory>, p: usize, budget: &NerveBudget) -> Result<IsoCertificate> {
    let (n, nx, f) = pi_star_for(x, (p, 2), budget)?;
    row_certificate(&f, &n.set, &nx.set, p, 1)
}

/// `check_dwyer(f)` agrees with `check_co_dwyer(f^op)` on random inclusions.
pub fn dwyer_duality(seed: u64, cases: usize) -> Result<Vec<CaseResult>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(cases);
    for k in 0..cases {
        let b = random_relposet_between(&mut r, 1, 5);
        let incl = if k % 2 == 0 { random_sieve(&mut r, &b)? } else { random_cosieve(&mut r, &b)? };
        let op = incl.opposite();
        let a = check_dwyer(&incl, Some(DEFAULT_SDR_BUDGET))?.is_dwyer();
        let c = check_co_dwyer(&op, Some(DEFAULT_SDR_BUDGET))?.is_dwyer();
        out.push(case(format!("case {k}"), a == c, format!("B = {}, A = {{{}}}: dwyer {a}, co-dwyer of opposite {c}", describe(&b), names(&b, &incl.obj))));
    }
    Ok(out)
}
