use std::path::PathBuf;
use std::process::{Command, Output};

use relcat::io::{parse, Document};
use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn relcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcat")).args(args).output().expect("run relcat")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = relcat(&all);
    (o.status.code().unwrap(), serde_json::from_str(&stdout(&o)).expect("json output"))
}

#[test]
fn dot_output() {
    let o = relcat(&["dot", &corpus("point.relcat")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "digraph \"point\" {\n  node [shape=plaintext];\n  \"0\";\n}\n");
}

#[test]
fn subdivisions_match_the_figure_files() {
    for (kind, file) in [("xi_t", "xi_t_2check.relpos"), ("xi_i", "xi_i_2check.relpos")] {
        let o = relcat(&["subdivide", "--kind", kind, "--format", "relpos", &corpus("two_check.relcat")]);
        assert_eq!(o.status.code(), Some(0));
        let got = parse(&stdout(&o)).unwrap().category().unwrap();
        let want = parse(&std::fs::read_to_string(corpus(file)).unwrap()).unwrap().category().unwrap();
        assert_eq!(got.objects(), want.objects(), "{kind}");
        for a in 0..got.num_objects() {
            for b in 0..got.num_objects() {
                let g = got.arrow(a, b).map(|m| got.morphisms()[m].we);
                let w = want.arrow(a, b).map(|m| want.morphisms()[m].we);
                assert_eq!(g, w, "{kind}: {} {}", got.objects()[a], got.objects()[b]);
            }
        }
    }
    let (code, v) = json(&["subdivide", "--kind", "xi_t", &corpus("two_check.relcat")]);
    assert_eq!(code, 0);
    assert_eq!(v["objects"].as_array().unwrap().len(), 7);
    assert!(v["output"].as_str().unwrap().starts_with("digraph"));
}

#[test]
fn dwyer_verdicts_and_exit_codes() {
    let o = relcat(&["dwyer", &corpus("point.relcat"), &corpus("one_check.relcat"), &corpus("bottom.map")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no strong deformation retraction"));

    let (code, v) = json(&["dwyer", &corpus("point.relcat"), &corpus("one_hat.relpos"), &corpus("bottom_of_hat.map")]);
    assert_eq!(code, 0);
    assert_eq!(v["dwyer"], true);
    assert_eq!(v["ok"], true);

    let (code, v) = json(&["dwyer", "--co", &corpus("point.relcat"), &corpus("one_hat.relpos"), &corpus("bottom_of_hat.map")]);
    assert_eq!(code, 1);
    assert_eq!(v["dwyer"], false);
}

#[test]
fn pushout_collapses_along_a_point() {
    let (code, v) = json(&[
        "pushout",
        &corpus("point.relcat"),
        &corpus("one_hat.relpos"),
        &corpus("point.relcat"),
        &corpus("bottom_of_hat.map"),
        &corpus("bottom_of_hat.map"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["checks_pass"], true);
    assert_eq!(v["poset"], true);
    assert_eq!(v["objects"].as_array().unwrap().len(), 2);
    let text = v["output"].as_str().unwrap();
    let d = parse(text).unwrap().category().unwrap();
    assert_eq!(d.num_objects(), 2);
}

#[test]
fn nerve_counts() {
    let (code, v) = json(&["nerve", "--pmax", "1", "--qmax", "1", &corpus("one_hat.relpos")]);
    assert_eq!(code, 0);
    assert_eq!(v["identities_hold"], true);
    assert_eq!(v["counts"], serde_json::json!([[2, 3], [3, 6]]));
}

#[test]
fn homology_of_files() {
    let o = relcat(&["homology", "--dim", "2", &corpus("loop.bisset")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H0 = Z, H1 = Z, H2 = 0"), "{}", stdout(&o));

    let (code, v) = json(&["homology", "--dim", "1", "--row", "0", "--xi", &corpus("one_hat.relpos")]);
    assert_eq!(code, 0);
    assert_eq!(v["homology"][0]["rank"], 1);
    assert_eq!(v["homology"][1]["rank"], 0);
}

#[test]
fn compare_nerves_row_zero() {
    let (code, v) = json(&["compare-nerves", "--p", "0", &corpus("two_check.relcat")]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["iso"], true);
}

#[test]
fn verify_is_reproducible() {
    let a = json(&["verify", "--prop", "8.1", "--seed", "3", "--cases", "4"]);
    let b = json(&["verify", "--prop", "retract", "--seed", "3", "--cases", "4"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_eq!(a.1["cases"].as_array().unwrap().len(), 4);
    assert_eq!(a.1["property"], "8.1");
}

#[test]
fn kxi_of_a_square() {
    let (code, v) = json(&["kxi", &corpus("square.bisset")]);
    assert_eq!(code, 0);
    let cells = v["attachments"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    assert!(cells.iter().all(|c| c["dwyer_verified"] == true));
    match parse(v["output"].as_str().unwrap()).unwrap() {
        Document::RelPos { cat, .. } => assert_eq!(cat.num_objects() as u64, v["objects"].as_u64().unwrap()),
        other => panic!("unexpected {}", other.kind()),
    }
}

#[test]
fn errors_exit_with_two() {
    let o = relcat(&["dot", &corpus("missing.relcat")]);
    assert_eq!(o.status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("relcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.relcat");
    std::fs::write(&bad, "relcat bad\nobj a b\nmor f: a -> c\n").unwrap();
    let o = relcat(&["dot", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let (code, v) = json(&["verify", "--prop", "nope"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("nope"));
    std::fs::remove_dir_all(&dir).ok();
}
