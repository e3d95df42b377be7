//! Line-oriented text formats for relative categories, relative posets,
//! functors and presented bisimplicial sets, and a DOT renderer.
//!
//! ```text
//! relcat NAME            relpos NAME           map NAME : SRC -> DST     bisset NAME
//! obj a b c              obj a b c             obj a |-> x               cell c : (p,q)
//! mor f: a -> b [we]     le a < b [we]         mor f |-> g               face h i c = d [h=0,0,1] [v=0]
//! id a = f               # comment                                       face v j c = d
//! cmp g.f = h
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kxi::{CellRef, Direction, Presentation};
use crate::relcat::{order_closure, Morphism, RelCategory, RelFunctor, Violation};

/// A parsed file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    RelCat { name: String, cat: RelCategory },
    RelPos { name: String, cat: RelCategory },
    Map(MapSpec),
    BisSet(Presentation),
}

impl Document {
    pub fn name(&self) -> &str {
        match self {
            Document::RelCat { name, .. } | Document::RelPos { name, .. } => name,
            Document::Map(m) => &m.name,
            Document::BisSet(p) => &p.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::RelCat { .. } => "relcat",
            Document::RelPos { .. } => "relpos",
            Document::Map(_) => "map",
            Document::BisSet(_) => "bisset",
        }
    }

    /// The category of a relcat or relpos file.
    pub fn category(&self) -> Result<Arc<RelCategory>> {
        match self {
            Document::RelCat { cat, .. } | Document::RelPos { cat, .. } => Ok(Arc::new(cat.clone())),
            _ => Err(Error::Precondition(format!("{} is a {} file, not a category", self.name(), self.kind()))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MapEntry {
    pub from: String,
    pub to: String,
    pub line: usize,
}

impl PartialEq for MapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.from == other.from && self.to == other.to
    }
}

impl Eq for MapEntry {}

/// A functor described by names, resolved against its categories with [`MapSpec::resolve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub objects: Vec<MapEntry>,
    pub morphisms: Vec<MapEntry>,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl Line<'_> {
    fn err(&self, k: usize, msg: impl Into<String>) -> Error {
        let col = self.tokens.get(k).or(self.tokens.last()).map_or(1, |t| t.0);
        Error::Parse { line: self.number, col, msg: msg.into() }
    }

    fn tok(&self, k: usize) -> Result<&str> {
        self.tokens.get(k).map(|t| t.1).ok_or_else(|| self.err(k, "unexpected end of line"))
    }

    fn expect(&self, k: usize, word: &str) -> Result<()> {
        if self.tok(k)? == word {
            Ok(())
        } else {
            Err(self.err(k, format!("expected `{word}`")))
        }
    }

    fn end(&self, k: usize) -> Result<()> {
        if self.tokens.len() > k {
            Err(self.err(k, "unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push((content[..s].chars().count() + 1, &content[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((content[..s].chars().count() + 1, &content[s..]));
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens });
        }
    }
    out
}

/// Parses any of the four file kinds, chosen by the header line.
pub fn parse(text: &str) -> Result<Document> {
    let ls = lines(text);
    let head = ls.first().ok_or(Error::Parse { line: 1, col: 1, msg: "empty file".into() })?;
    match head.tok(0)? {
        "relcat" => parse_relcat(&ls),
        "relpos" => parse_relpos(&ls),
        "map" => parse_map(&ls),
        "bisset" => parse_bisset(&ls),
        _ => Err(head.err(0, "expected a header: relcat, relpos, map or bisset")),
    }
}

fn header_name(l: &Line) -> Result<String> {
    let name = l.tok(1)?.to_string();
    l.end(2)?;
    Ok(name)
}

fn add_objects(l: &Line, objects: &mut Vec<String>, index: &mut HashMap<String, usize>, lines: &mut Vec<usize>) -> Result<()> {
    if l.tokens.len() < 2 {
        return Err(l.err(1, "`obj` needs at least one name"));
    }
    for k in 1..l.tokens.len() {
        let name = l.tok(k)?;
        if index.insert(name.to_string(), objects.len()).is_some() {
            return Err(l.err(k, format!("duplicate object {name}")));
        }
        objects.push(name.to_string());
        lines.push(l.number);
    }
    Ok(())
}

fn object(l: &Line, k: usize, index: &HashMap<String, usize>) -> Result<usize> {
    let name = l.tok(k)?;
    index.get(name).copied().ok_or_else(|| l.err(k, format!("unknown object {name}")))
}

fn violation_names(v: &Violation) -> Vec<&str> {
    match v {
        Violation::BadIdentity { morphism, .. } | Violation::IdentityNotWe { morphism, .. } => vec![morphism],
        Violation::IdentityLaw { identity, f } => vec![f, identity],
        Violation::MissingComposite { g, f } | Violation::NotComposable { g, f } => vec![g, f],
        Violation::CompositeEnds { g, f, h } | Violation::WeNotClosed { g, f, h } => vec![h, g, f],
        Violation::NotAssociative { h, g, f } => vec![h, g, f],
    }
}

fn parse_relcat(ls: &[Line]) -> Result<Document> {
    let name = header_name(&ls[0])?;
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    let mut obj_lines = Vec::new();
    // declared morphisms (id, src, dst, we, line)
    let mut declared: Vec<(String, usize, usize, bool, usize)> = Vec::new();
    let mut mor_index: HashMap<String, usize> = HashMap::new();
    let mut explicit_ids: Vec<(usize, String, &Line)> = Vec::new();
    let mut cmps: Vec<&Line> = Vec::new();
    for l in &ls[1..] {
        match l.tok(0)? {
            "obj" => add_objects(l, &mut objects, &mut obj_index, &mut obj_lines)?,
            "mor" => {
                let (id, next) = match l.tok(1)?.strip_suffix(':') {
                    Some(id) if !id.is_empty() => (id.to_string(), 2),
                    _ => {
                        l.expect(2, ":")?;
                        (l.tok(1)?.to_string(), 3)
                    }
                };
                let a = object(l, next, &obj_index)?;
                l.expect(next + 1, "->")?;
                let b = object(l, next + 2, &obj_index)?;
                let we = match l.tokens.get(next + 3) {
                    None => false,
                    Some((_, "we")) => {
                        l.end(next + 4)?;
                        true
                    }
                    Some(_) => return Err(l.err(next + 3, "expected `we` or end of line")),
                };
                if mor_index.insert(id.clone(), declared.len()).is_some() {
                    return Err(l.err(1, format!("duplicate morphism {id}")));
                }
                declared.push((id, a, b, we, l.number));
            }
            "id" => {
                let a = object(l, 1, &obj_index)?;
                l.expect(2, "=")?;
                let f = l.tok(3)?.to_string();
                l.end(4)?;
                explicit_ids.push((a, f, l));
            }
            "cmp" => cmps.push(l),
            _ => return Err(l.err(0, "expected obj, mor, id or cmp")),
        }
    }
    let n = objects.len();
    let mut identity: Vec<Option<usize>> = vec![None; n];
    for (a, f, l) in &explicit_ids {
        let m = *mor_index.get(f).ok_or_else(|| l.err(3, format!("unknown morphism {f}")))?;
        if identity[*a].replace(m).is_some() {
            return Err(l.err(1, "identity declared twice"));
        }
    }
    for a in 0..n {
        if identity[a].is_none() {
            let id = format!("1_{}", objects[a]);
            if let Some(&m) = mor_index.get(&id) {
                if declared[m].1 == a && declared[m].2 == a {
                    identity[a] = Some(m);
                }
            }
        }
    }
    // implicit identities come first, in object order
    let implicit: Vec<usize> = (0..n).filter(|&a| identity[a].is_none()).collect();
    let shift = implicit.len();
    let mut morphisms = Vec::with_capacity(shift + declared.len());
    let mut identities = vec![0; n];
    for (k, &a) in implicit.iter().enumerate() {
        let id = format!("1_{}", objects[a]);
        if let Some(&m) = mor_index.get(&id) {
            let line = declared[m].4;
            return Err(Error::Parse { line, col: 1, msg: format!("{id} is reserved for the identity of {}", objects[a]) });
        }
        morphisms.push(Morphism { id, src: a, dst: a, we: true });
        identities[a] = k;
    }
    for a in 0..n {
        if let Some(m) = identity[a] {
            identities[a] = m + shift;
        }
    }
    let mut mor_lines = vec![obj_lines.first().copied().unwrap_or(1); shift];
    for (id, a, b, we, line) in &declared {
        morphisms.push(Morphism { id: id.clone(), src: *a, dst: *b, we: *we });
        mor_lines.push(*line);
    }
    let by_name: HashMap<String, usize> = morphisms.iter().enumerate().map(|(i, m)| (m.id.clone(), i)).collect();
    let mut composites = Vec::new();
    for l in cmps {
        let lhs = l.tok(1)?;
        let pair = lhs
            .match_indices('.')
            .map(|(i, _)| (&lhs[..i], &lhs[i + 1..]))
            .find(|(g, f)| by_name.contains_key(*g) && by_name.contains_key(*f))
            .ok_or_else(|| l.err(1, format!("`{lhs}` is not g.f with known morphisms g and f")))?;
        l.expect(2, "=")?;
        let h = l.tok(3)?;
        let h = *by_name.get(h).ok_or_else(|| l.err(3, format!("unknown morphism {h}")))?;
        l.end(4)?;
        composites.push((by_name[pair.0], by_name[pair.1], h));
    }
    let line_of = |id: &str| by_name.get(id).map_or(1, |&m| mor_lines[m]);
    let cat = RelCategory::new(objects, morphisms, identities, composites)
        .map_err(|e| Error::Parse { line: 1, col: 1, msg: e.to_string() })?;
    if let Some(v) = cat.validate().first() {
        let line = violation_names(v).first().map_or(1, |id| line_of(id));
        return Err(Error::Parse { line, col: 1, msg: v.to_string() });
    }
    Ok(Document::RelCat { name, cat })
}

fn parse_relpos(ls: &[Line]) -> Result<Document> {
    let name = header_name(&ls[0])?;
    let mut objects = Vec::new();
    let mut index = HashMap::new();
    let mut obj_lines = Vec::new();
    let mut stated: Vec<(usize, usize, bool, usize)> = Vec::new();
    for l in &ls[1..] {
        match l.tok(0)? {
            "obj" => add_objects(l, &mut objects, &mut index, &mut obj_lines)?,
            "le" => {
                let a = object(l, 1, &index)?;
                l.expect(2, "<")?;
                let b = object(l, 3, &index)?;
                let we = match l.tokens.get(4) {
                    None => false,
                    Some((_, "we")) => {
                        l.end(5)?;
                        true
                    }
                    Some(_) => return Err(l.err(4, "expected `we` or end of line")),
                };
                if a == b {
                    return Err(l.err(3, "a strict relation needs two different objects"));
                }
                stated.push((a, b, we, l.number));
            }
            _ => return Err(l.err(0, "expected obj or le")),
        }
    }
    let rels: Vec<(usize, usize, bool)> = stated.iter().map(|&(a, b, w, _)| (a, b, w)).collect();
    let arrows = order_closure(objects.len(), &rels).map_err(|k| {
        let (a, b, _, line) = stated[k];
        Error::Parse {
            line,
            col: 1,
            msg: format!("{} < {} closes a cycle; a relative poset is antisymmetric", objects[a], objects[b]),
        }
    })?;
    let cat = RelCategory::thin(objects, &arrows).map_err(|e| Error::Parse { line: 1, col: 1, msg: e.to_string() })?;
    Ok(Document::RelPos { name, cat })
}

fn parse_map(ls: &[Line]) -> Result<Document> {
    let h = &ls[0];
    let name = h.tok(1)?.to_string();
    h.expect(2, ":")?;
    let src = h.tok(3)?.to_string();
    h.expect(4, "->")?;
    let dst = h.tok(5)?.to_string();
    h.end(6)?;
    let mut spec = MapSpec { name, src, dst, objects: Vec::new(), morphisms: Vec::new() };
    for l in &ls[1..] {
        let entry = |l: &Line| -> Result<MapEntry> {
            l.expect(2, "|->")?;
            let e = MapEntry { from: l.tok(1)?.to_string(), to: l.tok(3)?.to_string(), line: l.number };
            l.end(4)?;
            Ok(e)
        };
        let list = match l.tok(0)? {
            "obj" => &mut spec.objects,
            "mor" => &mut spec.morphisms,
            _ => return Err(l.err(0, "expected obj or mor")),
        };
        let e = entry(l)?;
        if list.iter().any(|x| x.from == e.from) {
            return Err(l.err(1, format!("{} is mapped twice", e.from)));
        }
        list.push(e);
    }
    Ok(Document::Map(spec))
}

impl MapSpec {
    /// The functor named by this file; morphism images are inferred where the
    /// target hom-set has exactly one element.
    pub fn resolve(&self, src: &Arc<RelCategory>, dst: &Arc<RelCategory>) -> Result<RelFunctor> {
        let at = |line: usize, msg: String| Error::Parse { line, col: 1, msg };
        let mut obj = vec![None; src.num_objects()];
        for e in &self.objects {
            let a = src.object_index(&e.from).ok_or_else(|| at(e.line, format!("unknown object {} of {}", e.from, self.src)))?;
            let x = dst.object_index(&e.to).ok_or_else(|| at(e.line, format!("unknown object {} of {}", e.to, self.dst)))?;
            obj[a] = Some(x);
        }
        let obj: Vec<usize> = obj
            .iter()
            .enumerate()
            .map(|(a, x)| x.ok_or_else(|| at(1, format!("object {} has no image", src.objects()[a]))))
            .collect::<Result<_>>()?;
        let mut mor = vec![None; src.num_morphisms()];
        for e in &self.morphisms {
            let f = src.morphism_index(&e.from).ok_or_else(|| at(e.line, format!("unknown morphism {} of {}", e.from, self.src)))?;
            let g = dst.morphism_index(&e.to).ok_or_else(|| at(e.line, format!("unknown morphism {} of {}", e.to, self.dst)))?;
            mor[f] = Some(g);
        }
        let mor: Vec<usize> = mor
            .iter()
            .enumerate()
            .map(|(f, g)| {
                if let Some(g) = g {
                    return Ok(*g);
                }
                let m = src.morphism(f);
                if src.is_identity(f) {
                    return Ok(dst.identity(obj[m.src]));
                }
                match dst.hom(obj[m.src], obj[m.dst]) {
                    [g] => Ok(*g),
                    [] => Err(at(1, format!("no morphism for the image of {}", m.id))),
                    _ => Err(at(1, format!("the image of {} is not unique; add a mor line", m.id))),
                }
            })
            .collect::<Result<_>>()?;
        let f = RelFunctor::new(src.clone(), dst.clone(), obj, mor)?;
        if let Some(v) = f.violations().first() {
            return Err(at(self.morphisms.first().map_or(1, |e| e.line), format!("not a relative functor: {v}")));
        }
        Ok(f)
    }

    /// The description of `f` that [`MapSpec::resolve`] turns back into `f`.
    pub fn describe(name: &str, src: &str, dst: &str, f: &RelFunctor) -> MapSpec {
        let objects = (0..f.dom.num_objects())
            .map(|a| MapEntry { from: f.dom.objects()[a].clone(), to: f.cod.objects()[f.obj[a]].clone(), line: 0 })
            .collect();
        let morphisms = (0..f.dom.num_morphisms())
            .filter(|&m| {
                let d = f.dom.morphism(m);
                !f.dom.is_identity(m) && f.cod.hom(f.obj[d.src], f.obj[d.dst]).len() > 1
            })
            .map(|m| MapEntry { from: f.dom.morphism(m).id.clone(), to: f.cod.morphism(f.mor[m]).id.clone(), line: 0 })
            .collect();
        MapSpec { name: name.into(), src: src.into(), dst: dst.into(), objects, morphisms }
    }
}

fn parse_order_map(l: &Line, k: usize, text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| l.err(k, format!("`{text}` is not a list of numbers"))))
        .collect()
}

fn parse_bisset(ls: &[Line]) -> Result<Document> {
    let name = header_name(&ls[0])?;
    let mut pres = Presentation::new(&name);
    let mut cell_lines = Vec::new();
    let mut faces = Vec::new();
    for l in &ls[1..] {
        match l.tok(0)? {
            "cell" => {
                let id = l.tok(1)?;
                l.expect(2, ":")?;
                let rest: String = l.tokens[3..].iter().map(|t| t.1).collect();
                let inner = rest
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| l.err(3, "expected a bidegree (p,q)"))?;
                let degree = match parse_order_map(l, 3, inner)?.as_slice() {
                    [p, q] => (*p, *q),
                    _ => return Err(l.err(3, "expected a bidegree (p,q)")),
                };
                pres.add_cell(id, degree).map_err(|e| l.err(1, e.to_string()))?;
                cell_lines.push(l.number);
            }
            "face" => faces.push(l),
            _ => return Err(l.err(0, "expected cell or face")),
        }
    }
    for l in faces {
        let dir = match l.tok(1)? {
            "h" => Direction::Horizontal,
            "v" => Direction::Vertical,
            _ => return Err(l.err(1, "expected h or v")),
        };
        let i: usize = l.tok(2)?.parse().map_err(|_| l.err(2, "expected a face index"))?;
        let cell_of = |k: usize| -> Result<usize> {
            let n = l.tok(k)?;
            pres.cell_index(n).ok_or_else(|| l.err(k, format!("unknown cell {n}")))
        };
        let c = cell_of(3)?;
        l.expect(4, "=")?;
        let d = cell_of(5)?;
        let (mut p, mut q) = pres.cells[c].degree;
        match dir {
            Direction::Horizontal => p = p.saturating_sub(1),
            Direction::Vertical => q = q.saturating_sub(1),
        }
        let (dp, dq) = pres.cells[d].degree;
        let mut h = if p == dp { Some((0..=p).collect()) } else { None };
        let mut v = if q == dq { Some((0..=q).collect()) } else { None };
        for k in 6..l.tokens.len() {
            let t = l.tok(k)?;
            if let Some(s) = t.strip_prefix("h=") {
                h = Some(parse_order_map(l, k, s)?);
            } else if let Some(s) = t.strip_prefix("v=") {
                v = Some(parse_order_map(l, k, s)?);
            } else {
                return Err(l.err(k, "expected h=... or v=..."));
            }
        }
        let (h, v) = match (h, v) {
            (Some(h), Some(v)) => (h, v),
            _ => return Err(l.err(5, "the face has another bidegree; give h= and v= degeneracy data")),
        };
        pres.set_face(dir, i, c, CellRef { cell: d, h, v }).map_err(|e| l.err(2, e.to_string()))?;
    }
    if let Err(e) = pres.check_complete() {
        let bad = pres.cells.iter().position(|c| c.hfaces.iter().chain(&c.vfaces).any(Option::is_none)).unwrap_or(0);
        return Err(Error::Parse { line: cell_lines.get(bad).copied().unwrap_or(1), col: 1, msg: e.to_string() });
    }
    Ok(Document::BisSet(pres))
}

fn check_token(s: &str) -> Result<&str> {
    if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '#') {
        Err(Error::Invalid(format!("`{s}` cannot be written as a single token")))
    } else {
        Ok(s)
    }
}

/// Writes a relcat file; identities are listed only when they are not `1_x`.
pub fn serialize_relcat(name: &str, c: &RelCategory) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "relcat {}", check_token(name)?).unwrap();
    if c.num_objects() > 0 {
        let objs: Vec<&str> = c.objects().iter().map(|o| check_token(o)).collect::<Result<_>>()?;
        writeln!(out, "obj {}", objs.join(" ")).unwrap();
    }
    let n = c.num_objects();
    let canonical = (0..n).all(|a| c.identity(a) == a && c.morphism(a).id == format!("1_{}", c.objects()[a]));
    for (i, m) in c.morphisms().iter().enumerate() {
        if canonical && i < n {
            continue;
        }
        let we = if m.we { " we" } else { "" };
        writeln!(out, "mor {}: {} -> {}{we}", check_token(&m.id)?, c.objects()[m.src], c.objects()[m.dst]).unwrap();
    }
    if !canonical {
        for a in 0..n {
            writeln!(out, "id {} = {}", c.objects()[a], c.morphism(c.identity(a)).id).unwrap();
        }
    }
    if !c.is_thin() || !composites_are_implicit(c) {
        for (g, f, h) in c.composite_table() {
            if !c.is_identity(g) && !c.is_identity(f) {
                let id = |m: usize| &c.morphism(m).id;
                writeln!(out, "cmp {}.{} = {}", id(g), id(f), id(h)).unwrap();
            }
        }
    }
    Ok(out)
}

fn composites_are_implicit(c: &RelCategory) -> bool {
    // a thin category rebuilt without a table compares equal
    RelCategory::new(
        c.objects().to_vec(),
        c.morphisms().to_vec(),
        c.identities().to_vec(),
        Vec::new(),
    )
    .is_ok_and(|d| d == *c)
}

/// Writes a relative poset as its full strict order relation.
pub fn serialize_relpos(name: &str, c: &RelCategory) -> Result<String> {
    c.require_poset("relpos files hold relative posets")?;
    let mut out = String::new();
    writeln!(out, "relpos {}", check_token(name)?).unwrap();
    if c.num_objects() > 0 {
        let objs: Vec<&str> = c.objects().iter().map(|o| check_token(o)).collect::<Result<_>>()?;
        writeln!(out, "obj {}", objs.join(" ")).unwrap();
    }
    let mut rels: Vec<(usize, usize, bool)> =
        c.morphisms().iter().filter(|m| m.src != m.dst).map(|m| (m.src, m.dst, m.we)).collect();
    rels.sort();
    for (a, b, we) in rels {
        writeln!(out, "le {} < {}{}", c.objects()[a], c.objects()[b], if we { " we" } else { "" }).unwrap();
    }
    Ok(out)
}

pub fn serialize_map(spec: &MapSpec) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "map {} : {} -> {}", check_token(&spec.name)?, check_token(&spec.src)?, check_token(&spec.dst)?).unwrap();
    for e in &spec.objects {
        writeln!(out, "obj {} |-> {}", e.from, e.to).unwrap();
    }
    for e in &spec.morphisms {
        writeln!(out, "mor {} |-> {}", e.from, e.to).unwrap();
    }
    Ok(out)
}

pub fn serialize_bisset(p: &Presentation) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "bisset {}", check_token(&p.name)?).unwrap();
    for c in &p.cells {
        writeln!(out, "cell {} : ({},{})", check_token(&c.name)?, c.degree.0, c.degree.1).unwrap();
    }
    let list = |m: &[usize]| m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    for c in &p.cells {
        for (dir, faces) in [("h", &c.hfaces), ("v", &c.vfaces)] {
            for (i, f) in faces.iter().enumerate() {
                let Some(f) = f else { continue };
                let target = &p.cells[f.cell];
                write!(out, "face {dir} {i} {} = {}", c.name, target.name).unwrap();
                if f.h.len() != target.degree.0 + 1 || f.v.len() != target.degree.1 + 1 {
                    write!(out, " h={} v={}", list(&f.h), list(&f.v)).unwrap();
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

pub fn serialize(doc: &Document) -> Result<String> {
    match doc {
        Document::RelCat { name, cat } => serialize_relcat(name, cat),
        Document::RelPos { name, cat } => serialize_relpos(name, cat),
        Document::Map(spec) => serialize_map(spec),
        Document::BisSet(p) => serialize_bisset(p),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering: weak equivalences dashed and labeled `~`, identities omitted.
pub fn to_dot(name: &str, c: &RelCategory) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for o in c.objects() {
        writeln!(out, "  {};", quote(o)).unwrap();
    }
    let multi = !c.is_thin();
    for (i, m) in c.morphisms().iter().enumerate() {
        if c.is_identity(i) {
            continue;
        }
        let mut attrs = Vec::new();
        if m.we {
            attrs.push("label=\"~\"".to_string());
            attrs.push("style=dashed".to_string());
        }
        if multi {
            attrs.push(format!("tooltip={}", quote(&m.id)));
        }
        let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
        writeln!(out, "  {} -> {}{attrs};", quote(&c.objects()[m.src]), quote(&c.objects()[m.dst])).unwrap();
    }
    out.push_str("}\n");
    out
}
