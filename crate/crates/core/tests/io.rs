use std::path::PathBuf;
use std::sync::Arc;

use relcat::io::*;
use relcat::kxi::{k_xi, Presentation};
use relcat::relcat::{arrow_category, product, Flavor};
use relcat::subdiv::{xi_i, xi_t};
use relcat::Error;

fn corpus(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn corpus_files() -> Vec<String> {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus"].iter().collect();
    let mut names: Vec<String> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    names
}

fn position(e: Error) -> (usize, usize) {
    match e {
        Error::Parse { line, col, .. } => (line, col),
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn arrow_categories_round_trip() {
    for flavor in [Flavor::Minimal, Flavor::Maximal] {
        let c = arrow_category(2, flavor);
        let text = serialize_relcat("two", &c).unwrap();
        assert_eq!(parse(&text).unwrap(), Document::RelCat { name: "two".into(), cat: c });
    }
    let prod = product(&arrow_category(1, Flavor::Minimal), &arrow_category(1, Flavor::Maximal));
    let text = serialize_relcat("prod", &prod).unwrap();
    assert_eq!(parse(&text).unwrap().category().unwrap().as_ref(), &prod);
}

#[test]
fn one_hat_from_a_single_relation() {
    let doc = parse(&corpus("one_hat.relpos")).unwrap();
    let hat = doc.category().unwrap();
    assert_eq!(hat.as_ref(), &arrow_category(1, Flavor::Maximal));
}

#[test]
fn figure_files_load_verbatim() {
    let two = Arc::new(arrow_category(2, Flavor::Minimal));
    let t = parse(&corpus("xi_t_2check.relpos")).unwrap().category().unwrap();
    assert_eq!(t.as_ref(), xi_t(&two).unwrap().sub.as_ref());
    let i = parse(&corpus("xi_i_2check.relpos")).unwrap().category().unwrap();
    assert_eq!(i.as_ref(), xi_i(&two).unwrap().sub.as_ref());
}

#[test]
fn corpus_round_trips() {
    let files = corpus_files();
    assert!(files.len() >= 10);
    for f in files {
        let doc = parse(&corpus(&f)).unwrap_or_else(|e| panic!("{f}: {e}"));
        let again = parse(&serialize(&doc).unwrap()).unwrap();
        assert_eq!(again, doc, "{f}");
    }
}

#[test]
fn relpos_closure_and_we_propagation() {
    let doc = parse("relpos p\nobj a b c\nle a < b we\nle b < c we\n").unwrap();
    let p = doc.category().unwrap();
    assert!(p.has_we(0, 2));
    let doc = parse("relpos p\nobj a b c\nle a < b we\nle b < c\n").unwrap();
    let p = doc.category().unwrap();
    assert!(p.arrow(0, 2).is_some() && !p.has_we(0, 2));
}

#[test]
fn maps_resolve_with_inferred_morphisms() {
    let point = parse(&corpus("point.relcat")).unwrap().category().unwrap();
    let check = parse(&corpus("one_check.relcat")).unwrap().category().unwrap();
    let Document::Map(spec) = parse(&corpus("bottom.map")).unwrap() else { panic!("map expected") };
    let f = spec.resolve(&point, &check).unwrap();
    assert_eq!(f.obj, vec![0]);
    let described = MapSpec::describe("bottom", "point", "one_check", &f);
    assert_eq!(described, spec);

    // parallel arrows need an explicit image
    let par = parse(&corpus("parallel.relcat")).unwrap().category().unwrap();
    let hat = parse(&corpus("one_hat.relpos")).unwrap().category().unwrap();
    let Document::Map(spec) = parse("map m : one_hat -> parallel\nobj 0 |-> a\nobj 1 |-> b\n").unwrap() else { panic!() };
    assert!(spec.resolve(&hat, &par).is_err());
    let Document::Map(spec) = parse("map m : one_hat -> parallel\nobj 0 |-> a\nobj 1 |-> b\nmor 0->1 |-> g\n").unwrap() else { panic!() };
    let f = spec.resolve(&hat, &par).unwrap();
    assert_eq!(MapSpec::describe("m", "one_hat", "parallel", &f), spec);
    // a weak equivalence cannot go to a plain arrow
    let Document::Map(spec) = parse("map m : one_hat -> parallel\nobj 0 |-> a\nobj 1 |-> b\nmor 0->1 |-> f\n").unwrap() else { panic!() };
    assert!(spec.resolve(&hat, &par).is_err());
}

#[test]
fn presentations_round_trip_and_realize() {
    for name in ["delta_1_0.bisset", "square.bisset", "loop.bisset", "boundary_1_0.bisset"] {
        let Document::BisSet(p) = parse(&corpus(name)).unwrap() else { panic!("bisset expected") };
        assert!(p.realize((2, 2)).is_ok(), "{name}");
    }
    let d = Presentation::delta(1, 1);
    let text = serialize_bisset(&d).unwrap();
    assert_eq!(parse(&text).unwrap(), Document::BisSet(d.clone()));
    let Document::BisSet(sq) = parse(&corpus("square.bisset")).unwrap() else { panic!() };
    let k = k_xi(&sq, 500).unwrap();
    assert_eq!(k.poset.num_objects(), k_xi(&d, 500).unwrap().poset.num_objects());
}

#[test]
fn degenerate_faces_in_files() {
    // a (1,1)-cell whose vertical faces are degenerate on a horizontal edge
    let text = "bisset deg\ncell a : (0,0)\ncell b : (0,0)\ncell e : (1,0)\ncell s : (1,1)\n\
                face h 0 e = b\nface h 1 e = a\n\
                face h 0 s = b v=0,0 h=0\nface h 1 s = a h=0 v=0,0\nface v 0 s = e\nface v 1 s = e\n";
    let Document::BisSet(p) = parse(text).unwrap() else { panic!() };
    assert!(p.realize((2, 2)).is_ok());
    assert_eq!(parse(&serialize_bisset(&p).unwrap()).unwrap(), Document::BisSet(p));
}

#[test]
fn errors_carry_positions() {
    assert_eq!(position(parse("relcat c\nobj a b\nmor f: a -> q\n").unwrap_err()), (3, 13));
    assert_eq!(position(parse("relcat c\nobj a a\n").unwrap_err()), (2, 7));
    assert_eq!(position(parse("poset c\n").unwrap_err()), (1, 1));
    assert_eq!(position(parse("relpos c\nobj a b\nle a < b\nle b < a\n").unwrap_err()).0, 3);
    // missing composite is reported at a morphism involved
    let e = parse("relcat c\nobj a b c\nmor f: a -> b\nmor g: b -> c\nmor h: a -> c\nmor k: a -> c\n").unwrap_err();
    assert!(matches!(e, Error::Parse { .. }), "{e}");
    let e = parse("bisset b\ncell e : (1,0)\n").unwrap_err();
    assert_eq!(position(e).0, 2);
    let e = parse("bisset b\ncell a : (0,0)\ncell e : (1,0)\nface h 0 e = a\nface h 2 e = a\n").unwrap_err();
    assert_eq!(position(e).0, 5);
    assert!(parse("").is_err());
}

#[test]
fn dot_output() {
    let point = parse(&corpus("point.relcat")).unwrap().category().unwrap();
    assert_eq!(to_dot("point", &point), "digraph \"point\" {\n  node [shape=plaintext];\n  \"0\";\n}\n");
    let t = parse(&corpus("xi_t_2check.relpos")).unwrap().category().unwrap();
    let dot = to_dot("xi_t", &t);
    assert_eq!(dot.matches("label=\"~\", style=dashed").count(), 6);
    assert_eq!(dot.matches(" -> ").count(), t.num_morphisms() - t.num_objects());
    assert_eq!(dot, to_dot("xi_t", &t));
    assert!(dot.contains("  \"2\" -> \"012\" [label=\"~\", style=dashed];\n"));
}
