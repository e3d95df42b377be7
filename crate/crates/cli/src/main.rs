use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use relcat::bisimplicial::{nerve_n, nerve_n_xi, NerveBudget, TruncBiSSet};
use relcat::dwyer::{check_co_dwyer, check_dwyer, pushout_along_sieve, Verdict, DEFAULT_SDR_BUDGET};
use relcat::homology::{Group, HomologySummary, IsoCertificate};
use relcat::io::{parse, serialize_relcat, serialize_relpos, to_dot, Document, MapSpec};
use relcat::kxi::k_xi;
use relcat::subdiv::{subdivision, xi, xi_bar, Kind};
use relcat::verify::{check_pushout, key_lemma_certificate, run_property, show_certificate, Property, DEFAULT_SEED};
use relcat::{Error, RelCategory, RelFunctor};

#[derive(Parser)]
#[command(name = "relcat", version, about = "Relative categories, subdivisions, Dwyer maps and bisimplicial nerves")]
struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubKind {
    #[value(name = "xi_t")]
    XiT,
    #[value(name = "xi_i")]
    XiI,
    #[value(name = "xi")]
    Xi,
    #[value(name = "xibar")]
    XiBar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Relpos,
    Relcat,
}

#[derive(Subcommand)]
enum Command {
    /// Render a relcat or relpos file as DOT.
    Dot { file: PathBuf },
    /// Subdivide a relative poset.
    Subdivide {
        #[arg(long, value_enum)]
        kind: SubKind,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        file: PathBuf,
    },
    /// Decide whether a map A -> B is a Dwyer map (or co-Dwyer with --co).
    Dwyer {
        a: PathBuf,
        b: PathBuf,
        map: PathBuf,
        #[arg(long)]
        co: bool,
        /// Largest number of candidate retractions to try.
        #[arg(long, default_value_t = DEFAULT_SDR_BUDGET)]
        budget: usize,
    },
    /// Push out B <- A -> C along a Dwyer inclusion A -> B.
    Pushout {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        /// The inclusion A -> B.
        i: PathBuf,
        /// The map A -> C.
        s: PathBuf,
        #[arg(long, value_enum, default_value = "relcat")]
        format: Format,
    },
    /// Count the cells of N X (or N_ξ X with --xi) through bidegree (P, Q).
    Nerve {
        #[arg(long)]
        xi: bool,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
        #[arg(long, default_value_t = 2)]
        qmax: usize,
        #[arg(long, default_value_t = 200)]
        shape_budget: usize,
        file: PathBuf,
    },
    /// Integral homology of the diagonal (or of row P) of a nerve or of a presented bisimplicial set.
    Homology {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        xi: bool,
        #[arg(long)]
        row: Option<usize>,
        #[arg(long, default_value_t = 200)]
        shape_budget: usize,
        file: PathBuf,
    },
    /// Compare row P of N X and N_ξ X through H1.
    CompareNerves {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 400)]
        shape_budget: usize,
        file: PathBuf,
    },
    /// Run a randomized property suite.
    Verify {
        /// 6.2, 6.3, 8.1, 8.2, 8.3, 8.4, 8.5, 9.1, 9.3 or a property name.
        #[arg(long)]
        prop: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Realize a presented bisimplicial set as a relative poset.
    Kxi {
        #[arg(long, value_enum, default_value = "relpos")]
        format: Format,
        #[arg(long, default_value_t = 500)]
        shape_budget: usize,
        file: PathBuf,
    },
}

struct Outcome {
    ok: bool,
    text: String,
    json: Value,
}

fn load(path: &Path) -> Result<Document, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_category(path: &Path) -> Result<(String, Arc<RelCategory>), Error> {
    let doc = load(path)?;
    Ok((doc.name().to_string(), doc.category()?))
}

fn load_map(path: &Path, src: &Arc<RelCategory>, dst: &Arc<RelCategory>) -> Result<RelFunctor, Error> {
    match load(path)? {
        Document::Map(spec) => spec.resolve(src, dst).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        other => Err(Error::Precondition(format!("{} is a {} file, not a map", path.display(), other.kind()))),
    }
}

fn render(name: &str, c: &RelCategory, format: Format) -> Result<String, Error> {
    match format {
        Format::Dot => Ok(to_dot(name, c)),
        Format::Relpos => serialize_relpos(name, c),
        Format::Relcat => serialize_relcat(name, c),
    }
}

fn group_json(g: &Group) -> Value {
    json!({ "rank": g.rank, "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>() })
}

fn homology_json(h: &HomologySummary) -> Value {
    Value::Array(h.groups.iter().map(group_json).collect())
}

fn certificate_json(c: &IsoCertificate) -> Value {
    json!({
        "up_to": c.up_to,
        "source": homology_json(&c.dom),
        "target": homology_json(&c.cod),
        "cone": homology_json(&c.cone),
        "iso": c.iso,
    })
}

fn counts_json(set: &TruncBiSSet) -> Value {
    json!(set.counts)
}

fn dwyer_verdict(v: &Verdict) -> (bool, String, Value) {
    match v {
        Verdict::Dwyer(w) => {
            let amb = w.ambient();
            let b = &w.incl.cod;
            let r: Vec<Value> = amb
                .r_obj
                .iter()
                .enumerate()
                .filter_map(|(z, rz)| rz.map(|rz| json!([b.objects()[z], b.objects()[rz]])))
                .collect();
            let text = format!(
                "Dwyer: the image is a sieve and a strong deformation retract of its generated cosieve ({} objects)\nr: {}",
                w.za.dom.num_objects(),
                r.iter().map(|p| format!("{} -> {}", p[0].as_str().unwrap_or(""), p[1].as_str().unwrap_or(""))).collect::<Vec<_>>().join(", ")
            );
            (true, text, json!({ "dwyer": true, "cosieve_objects": w.za.dom.num_objects(), "retraction": r }))
        }
        Verdict::Refuted(reason) => (false, format!("not Dwyer: {reason}"), json!({ "dwyer": false, "reason": reason })),
    }
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Dot { file } => {
            let (name, c) = load_category(&file)?;
            let dot = to_dot(&name, &c);
            Ok(Outcome { ok: true, json: json!({ "name": name, "dot": dot }), text: dot })
        }
        Command::Subdivide { kind, format, file } => {
            let (name, c) = load_category(&file)?;
            let (label, sub) = match kind {
                SubKind::XiT => ("xi_t", subdivision(&c, Kind::Terminal)?.sub),
                SubKind::XiI => ("xi_i", subdivision(&c, Kind::Initial)?.sub),
                SubKind::Xi => ("xi", xi(&c)?.sub().clone()),
                SubKind::XiBar => ("xibar", xi_bar(&c)?.sub().clone()),
            };
            let out_name = format!("{label}_{name}");
            let text = render(&out_name, &sub, format)?;
            let we: Vec<Value> = sub
                .morphisms()
                .iter()
                .filter(|m| m.we && m.src != m.dst)
                .map(|m| json!([sub.objects()[m.src], sub.objects()[m.dst]]))
                .collect();
            let js = json!({ "name": out_name, "objects": sub.objects(), "we_edges": we, "output": text });
            Ok(Outcome { ok: true, text, json: js })
        }
        Command::Dwyer { a, b, map, co, budget } => {
            let (_, ca) = load_category(&a)?;
            let (_, cb) = load_category(&b)?;
            let f = load_map(&map, &ca, &cb)?;
            let verdict = if co { check_co_dwyer(&f, Some(budget))? } else { check_dwyer(&f, Some(budget))? };
            let (ok, text, js) = dwyer_verdict(&verdict);
            let text = if co { text.replace("Dwyer", "co-Dwyer (the opposite map is Dwyer)") } else { text };
            Ok(Outcome { ok, text, json: js })
        }
        Command::Pushout { a, b, c, i, s, format } => {
            let (_, ca) = load_category(&a)?;
            let (nb, cb) = load_category(&b)?;
            let (nc, cc) = load_category(&c)?;
            let fi = load_map(&i, &ca, &cb)?;
            let fs = load_map(&s, &ca, &cc)?;
            let po = pushout_along_sieve(&fi, &fs, None)?;
            let (ok, checks) = check_pushout(&fi, &fs)?;
            let name = format!("{nb}_glued_{nc}");
            let body = render(&name, &po.d, format)?;
            let j = MapSpec::describe("j", &nc, &name, &po.j);
            let text = format!("{body}# checks: {checks}\n# j: C -> D is the identity on C; t sends {}\n", t_summary(&po.t));
            let js = json!({
                "name": name,
                "objects": po.d.objects(),
                "morphisms": po.d.num_morphisms(),
                "poset": po.d.is_poset(),
                "checks_pass": ok,
                "checks": checks,
                "t": po.t.obj.iter().map(|&o| po.d.objects()[o].clone()).collect::<Vec<_>>(),
                "j": j.objects.iter().map(|e| json!([e.from, e.to])).collect::<Vec<_>>(),
                "output": body,
            });
            Ok(Outcome { ok, text, json: js })
        }
        Command::Nerve { xi, pmax, qmax, shape_budget, file } => {
            let (name, c) = load_category(&file)?;
            let budget = NerveBudget { shape_objects: shape_budget, ..NerveBudget::default() };
            let n = if xi { nerve_n_xi(&c, (pmax, qmax), &budget)? } else { nerve_n(&c, (pmax, qmax), &budget)? };
            let bad = n.set.violations();
            let mut text = format!("{} of {name} through ({pmax},{qmax})\n", if xi { "N_xi" } else { "N" });
            let mut nondeg = vec![vec![0; qmax + 1]; pmax + 1];
            for p in 0..=pmax {
                for q in 0..=qmax {
                    nondeg[p][q] = n.set.nondegenerate(p, q).iter().filter(|&&b| b).count();
                    text.push_str(&format!("  ({p},{q}): {} cells, {} nondegenerate\n", n.set.counts[p][q], nondeg[p][q]));
                }
            }
            text.push_str(&format!("bisimplicial identities: {}\n", if bad.is_empty() { "hold" } else { "FAIL" }));
            let js = json!({ "name": name, "subdivided": xi, "counts": counts_json(&n.set), "nondegenerate": nondeg, "identities_hold": bad.is_empty() });
            Ok(Outcome { ok: bad.is_empty(), text, json: js })
        }
        Command::Homology { dim, xi, row, shape_budget, file } => {
            let doc = load(&file)?;
            let budget = NerveBudget { shape_objects: shape_budget, ..NerveBudget::default() };
            let bound = dim + 1;
            let (label, set) = match &doc {
                Document::BisSet(p) => ("presented bisimplicial set".to_string(), p.realize((bound, bound))?.set),
                _ => {
                    let c = doc.category()?;
                    let bounds = match row {
                        Some(p) => (p, bound),
                        None => (bound, bound),
                    };
                    let n = if xi { nerve_n_xi(&c, bounds, &budget)? } else { nerve_n(&c, bounds, &budget)? };
                    (if xi { "N_xi".to_string() } else { "N".to_string() }, n.set)
                }
            };
            let s = match row {
                Some(p) => set.row(p)?,
                None => set.diagonal()?,
            };
            let h = s.homology(dim)?;
            let part = match row {
                Some(p) => format!("row {p}"),
                None => "diagonal".to_string(),
            };
            let text = format!("{part} of {label} of {}: {h}\n", doc.name());
            Ok(Outcome { ok: true, text, json: json!({ "name": doc.name(), "part": part, "homology": homology_json(&h) }) })
        }
        Command::CompareNerves { p, shape_budget, file } => {
            let (name, c) = load_category(&file)?;
            let budget = NerveBudget { shape_objects: shape_budget, ..NerveBudget::default() };
            let cert = key_lemma_certificate(&c, p, &budget)?;
            let text = format!(
                "row {p} of N {name} -> N_xi {name} (cells of vertical degree <= 2): {}\n{}\n",
                show_certificate(&cert),
                if cert.iso { "H0 and H1 isomorphism" } else { "not an isomorphism on H0 and H1" }
            );
            Ok(Outcome { ok: cert.iso, text, json: json!({ "name": name, "row": p, "certificate": certificate_json(&cert) }) })
        }
        Command::Verify { prop, seed, cases } => {
            let property = Property::parse(&prop).ok_or_else(|| Error::Precondition(format!("unknown property {prop}")))?;
            let report = run_property(property, seed, cases.unwrap_or(property.default_cases()))?;
            let js = json!({
                "property": property.key(),
                "name": property.slug(),
                "seed": seed,
                "passed": report.passed(),
                "cases": report.cases.iter().map(|c| json!({ "label": c.label, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
            });
            Ok(Outcome { ok: report.passed(), text: report.to_string(), json: js })
        }
        Command::Kxi { format, shape_budget, file } => {
            let doc = load(&file)?;
            let Document::BisSet(pres) = &doc else {
                return Err(Error::Precondition(format!("{} is a {} file, not a bisset", file.display(), doc.kind())));
            };
            let k = k_xi(pres, shape_budget)?;
            let name = format!("k_xi_{}", pres.name);
            let body = render(&name, &k.poset, format)?;
            let mut text = body.clone();
            for a in &k.attachments {
                text.push_str(&format!(
                    "# cell {} ({},{}): {} boundary objects, {} new objects\n",
                    a.cell, a.degree.0, a.degree.1, a.boundary_objects, a.new_objects
                ));
            }
            let js = json!({
                "name": name,
                "objects": k.poset.num_objects(),
                "attachments": k.attachments.iter().map(|a| json!({
                    "cell": a.cell, "degree": [a.degree.0, a.degree.1],
                    "boundary_objects": a.boundary_objects, "new_objects": a.new_objects,
                    "dwyer_verified": a.dwyer_verified,
                })).collect::<Vec<_>>(),
                "output": body,
            });
            Ok(Outcome { ok: true, text, json: js })
        }
    }
}

fn t_summary(t: &RelFunctor) -> String {
    (0..t.dom.num_objects())
        .map(|o| format!("{} -> {}", t.dom.objects()[o], t.cod.objects()[t.obj[o]]))
        .collect::<Vec<_>>()
        .join(", ")
}

fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.command) {
        Ok(out) => {
            if json {
                let mut v = out.json;
                v["ok"] = Value::Bool(out.ok);
                emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json")));
            } else if out.text.ends_with('\n') {
                emit(&out.text);
            } else {
                emit(&format!("{}\n", out.text));
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&json!({ "ok": false, "error": e.to_string() })).expect("json")));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
