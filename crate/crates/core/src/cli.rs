//! Command-line front end.
//!
//! Exit status: 0 on success or when every check passes, 1 when a check fails, 2 on
//! usage errors and unreadable or malformed input.

use crate::error::{Error, Result};
use crate::product::{double_from_vogan, is_inner, sigma_action_result, vogan_reconstruction, VoganDiagram, VoganJson};
use crate::rootsys::{RootSystem, TypeLabel};
use crate::satake::{analyze, catalog_case_by_id, table2, verify_table2, DiagramJson, DoubleSatakeDiagram, Table2Check};
use crate::schema::TriadJson;
use crate::triads::{are_equiv_with, are_sim_with, canonical, catalog_axiom_suite, check_equiv_witness, check_sim_witness, identify_tag, sim_class, Kind, Mode, MultSymmetricTriad};
use crate::typeiv::{classify_type_iv, enumerate_gamma_q0, format_sigma_type, sample_gamma_invariance, sigma_type, sigma_y_shape, table1_bases, type_iv_axiom_suite, typeiv_sim, verify_table1_base, AffineWeylDatum};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IsoMode {
    /// Witnesses must be isometries.
    Strict,
    /// Witnesses may rescale each irreducible component.
    Scaled,
}

impl From<IsoMode> for Mode {
    fn from(m: IsoMode) -> Mode {
        match m {
            IsoMode::Strict => Mode::Strict,
            IsoMode::Scaled => Mode::Scaled,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "symtriad", version, about = "Symmetric triads with multiplicities: classification and table checks")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Largest parameter value for classical Table 2 families.
    #[arg(long, default_value_t = 10, global = true)]
    pub max_param: i64,
    /// Largest rank for table and axiom sweeps.
    #[arg(long, default_value_t = 8, global = true)]
    pub rank_cap: usize,
    /// Seed for randomized invariant sampling.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Points of Γ ∩ Q̄₀ over a base with their Σ_Y types and table names.
    EnumerateTypeiv {
        #[arg(long)]
        base: TypeLabel,
    },
    /// Catalog name and `~`-class of a triad given as JSON.
    Classify { file: String },
    /// Decide `~` between two triads.
    SimCheck {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "strict")]
        mode: IsoMode,
    },
    /// Decide `≡` between two triads.
    EquivCheck {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "strict")]
        mode: IsoMode,
    },
    /// Triad of a double Satake diagram: a Table 2 entry or a diagram JSON file.
    FromSatake {
        #[arg(long, conflicts_with = "diagram", required_unless_present = "diagram")]
        case: Option<String>,
        /// `a,b,c,d` in the row's parameter order, or `name=value,...`.
        #[arg(long, requires = "case")]
        params: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Triad of the σ-action for a Vogan diagram, with inner/outer type and reconstruction.
    SigmaAction {
        #[arg(long = "type")]
        label: TypeLabel,
        /// Vogan JSON text, or a path to a file containing it.
        #[arg(long)]
        vogan: String,
    },
    /// Compare the type-(IV) classification with the embedded Table 1.
    VerifyTable1,
    /// Compare the double Satake computation with the embedded Table 2.
    VerifyTable2,
    /// Catalog axiom suite, type-(IV) structure and Γ invariance sampling.
    VerifyAxioms {
        /// Samples per base for the Γ invariance check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

/// Outcome of a command: structured output, text rendering and exit status.
struct Outcome {
    json: Value,
    text: String,
    status: i32,
}

fn ok(json: Value, text: String) -> Outcome {
    Outcome { json, text, status: 0 }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).unwrap_or_default()),
                Format::Text => write!(out, "{}", o.text),
            };
            o.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Internal(_) => 1,
                _ => 2,
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::EnumerateTypeiv { base } => enumerate_typeiv(*base),
        Command::Classify { file } => classify(&read_triad(file)?),
        Command::SimCheck { a, b, mode } => sim_check(&read_triad(a)?, &read_triad(b)?, (*mode).into()),
        Command::EquivCheck { a, b, mode } => equiv_check(&read_triad(a)?, &read_triad(b)?, (*mode).into()),
        Command::FromSatake { case, params, diagram } => from_satake(case.as_deref(), params.as_deref(), diagram.as_deref()),
        Command::SigmaAction { label, vogan } => sigma_action(*label, vogan),
        Command::VerifyTable1 => verify_table1(cli.rank_cap),
        Command::VerifyTable2 => verify_t2(cli.max_param),
        Command::VerifyAxioms { samples } => verify_axioms(cli.rank_cap, cli.seed, *samples),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

fn read_triad(path: &str) -> Result<MultSymmetricTriad> {
    read_json::<TriadJson>(path)?.to_triad()
}

fn triad_json(t: &MultSymmetricTriad) -> Result<Value> {
    Ok(serde_json::to_value(TriadJson::from_triad(t)?)?)
}

fn mn_strings(t: &MultSymmetricTriad) -> Option<Vec<(String, String)>> {
    t.mn_by_length().map(|v| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect())
}

fn mn_text(mn: &Option<Vec<(String, String)>>) -> String {
    match mn {
        Some(v) => v.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(" "),
        None => "(not constant on length classes)".into(),
    }
}

fn tag_text<T: ToString>(t: &Option<T>) -> String {
    t.as_ref().map_or("-".into(), |t| t.to_string())
}

fn pass_word(p: bool) -> &'static str {
    if p {
        "PASS"
    } else {
        "FAIL"
    }
}

fn enumerate_typeiv(label: TypeLabel) -> Result<Outcome> {
    let base = Arc::new(RootSystem::build(label)?);
    let classes = classify_type_iv(base.clone())?;
    let mut rows = vec![];
    let mut text = String::new();
    for p in enumerate_gamma_q0(&base)? {
        let t = sigma_y_shape(base.clone(), &p.y)?;
        let st = format_sigma_type(&base, &sigma_type(&t));
        let class = classes.iter().position(|c| c.members.contains(&p.y));
        let tag = class.and_then(|c| classes[c].tags.first().copied());
        text += &format!("Y={} Σ={} class={} tag={}\n", p.y, st, class.map_or("trivial".into(), |c| c.to_string()), tag_text(&tag));
        rows.push(json!({"y": p.y.coeffs, "wall_values": p.wall_values, "trivial": p.is_trivial(&base), "class": class, "sigma_type": st, "tag": tag}));
    }
    Ok(ok(json!({"base": label, "rows": rows}), text))
}

fn classify(t: &MultSymmetricTriad) -> Result<Outcome> {
    if t.kind == Kind::TypeIv {
        let st = format_sigma_type(&t.sigma_tilde, &sigma_type(t));
        let text = format!("type (IV) over {}: Σ = {st}\n", t.sigma_tilde.label().iter().map(|l| l.to_string()).collect::<Vec<_>>().join("+"));
        return Ok(ok(json!({"kind": t.kind, "sigma_type": st}), text));
    }
    let tag = identify_tag(t);
    let (u, ctag) = canonical(t);
    let class = sim_class(t);
    let members: Vec<Value> = class.iter().map(|c| json!({"tag": identify_tag(c), "mn": mn_strings(c)})).collect();
    let mut text = format!("tag: {}\ncanonical: {} {}\nclass size: {}\n", tag_text(&tag), tag_text(&ctag), mn_text(&mn_strings(&u)), class.len());
    for c in &class {
        text += &format!("  {} {}\n", tag_text(&identify_tag(c)), mn_text(&mn_strings(c)));
    }
    Ok(ok(json!({"kind": t.kind, "tag": tag, "canonical": {"tag": ctag, "mn": mn_strings(&u), "triad": triad_json(&u)?}, "class_size": class.len(), "class": members}), text))
}

fn sim_check(t: &MultSymmetricTriad, u: &MultSymmetricTriad, mode: Mode) -> Result<Outcome> {
    if t.kind == Kind::TypeIv && u.kind == Kind::TypeIv {
        let w = typeiv_sim(t, u);
        let text = format!("{}\n", if w.is_some() { "similar" } else { "not similar" });
        let j = json!({"similar": w.is_some(), "witness": w.map(|f| json!({"simple_images": f.simple_images, "scales": f.scales.iter().map(|s| s.to_string()).collect::<Vec<_>>()}))});
        return Ok(Outcome { status: if j["similar"] == true { 0 } else { 1 }, json: j, text });
    }
    match are_sim_with(t, u, mode) {
        Some((f, y)) => {
            let verified = check_sim_witness(t, u, &f, &y);
            let scales: Vec<String> = f.scales.iter().map(|s| s.to_string()).collect();
            let text = format!("similar: f = {:?}, Y = {} (witness {})\n", f.simple_images, y, if verified { "verified" } else { "NOT verified" });
            Ok(Outcome {
                json: json!({"similar": true, "witness": {"simple_images": f.simple_images, "scales": scales, "y": y.coeffs}, "verified": verified}),
                text,
                status: if verified { 0 } else { 1 },
            })
        }
        None => Ok(Outcome { json: json!({"similar": false}), text: "not similar\n".into(), status: 1 }),
    }
}

fn equiv_check(t: &MultSymmetricTriad, u: &MultSymmetricTriad, mode: Mode) -> Result<Outcome> {
    match are_equiv_with(t, u, mode) {
        Some(f) => {
            let verified = check_equiv_witness(t, u, &f);
            let scales: Vec<String> = f.scales.iter().map(|s| s.to_string()).collect();
            Ok(Outcome {
                json: json!({"equivalent": true, "witness": {"simple_images": f.simple_images, "scales": scales}, "verified": verified}),
                text: format!("equivalent: f = {:?} (witness {})\n", f.simple_images, if verified { "verified" } else { "NOT verified" }),
                status: if verified { 0 } else { 1 },
            })
        }
        None => Ok(Outcome { json: json!({"equivalent": false}), text: "not equivalent\n".into(), status: 1 }),
    }
}

fn parse_params(case: &str, params: Option<&str>) -> Result<Vec<(String, i64)>> {
    let Some(p) = params else { return Ok(vec![]) };
    let row = table2().iter().find(|r| r.id == case).ok_or_else(|| Error::InvalidInput(format!("unknown case `{case}`")))?;
    let mut out = vec![];
    for (k, item) in p.split(',').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let (name, value) = match item.split_once('=') {
            Some((n, v)) => (n.trim().to_string(), v.trim()),
            None => (row.params.get(k).map(|p| p.0.clone()).ok_or_else(|| Error::InvalidInput(format!("{case} takes {} parameters", row.params.len())))?, item),
        };
        let v: i64 = value.parse().map_err(|_| Error::InvalidInput(format!("bad parameter value `{value}`")))?;
        out.push((name, v));
    }
    Ok(out)
}

fn from_satake(case: Option<&str>, params: Option<&str>, diagram: Option<&str>) -> Result<Outcome> {
    let (d, head): (DoubleSatakeDiagram, Value) = match (case, diagram) {
        (Some(c), _) => {
            let ps = parse_params(c, params)?;
            let refs: Vec<(&str, i64)> = ps.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            let (inst, d) = catalog_case_by_id(c, &refs)?;
            (d, json!({"case": inst.id, "params": inst.params, "printed_tag": inst.tag, "printed_mn": inst.mn}))
        }
        (None, Some(path)) => (read_json::<DiagramJson>(path)?.to_diagram()?, json!({"diagram": path})),
        (None, None) => return Err(Error::InvalidInput("give --case or --diagram".into())),
    };
    let res = analyze(&d, &[])?;
    let t = &res.triads[0];
    let tag = identify_tag(t);
    let (_, ctag) = canonical(t);
    let mn = mn_strings(t);
    let text = format!(
        "triad: {} {}\ncanonical: {}\nlabelings: {} (free parities {}, rejected {}), consistent: {}\n",
        tag_text(&tag),
        mn_text(&mn),
        tag_text(&ctag),
        res.triads.len(),
        res.free_parities,
        res.rejected,
        res.consistent
    );
    let j = json!({"input": head, "tag": tag, "canonical_tag": ctag, "mn": mn, "triad": triad_json(t)?,
        "labelings": res.triads.len(), "free_parities": res.free_parities, "rejected": res.rejected, "consistent": res.consistent});
    Ok(Outcome { json: j, text, status: if res.consistent { 0 } else { 1 } })
}

fn sigma_action(label: TypeLabel, vogan: &str) -> Result<Outcome> {
    let src = if vogan.trim_start().starts_with('{') { vogan.to_string() } else { std::fs::read_to_string(vogan)? };
    let vj: VoganJson = serde_json::from_str(&src).map_err(|e| Error::InvalidInput(format!("vogan: {e}")))?;
    let v = VoganDiagram::from_json(label, &vj)?;
    let (d, res) = sigma_action_result(label, &v)?;
    let t = &res.triads[0];
    let inner = is_inner(&d);
    let tag = identify_tag(t);
    let rec = vogan_reconstruction(&double_from_vogan(label, &v)?, t)?;
    let round_trip = rec.candidates.iter().any(|c| *c == v) && !rec.ambiguous;
    let text = format!(
        "{} σ: triad {} {} (kind {:?})\nreconstructed Vogan: {} (rank K = {}, {:?}{})\n",
        if inner { "inner" } else { "outer" },
        tag_text(&tag),
        mn_text(&mn_strings(t)),
        t.kind,
        serde_json::to_string(&rec.vogan.to_json())?,
        rec.rank_k,
        rec.matched,
        if rec.ambiguous { ", ambiguous" } else { "" }
    );
    let j = json!({"type": label, "vogan": vj, "inner": inner, "kind": t.kind, "tag": tag, "mn": mn_strings(t), "triad": triad_json(t)?,
        "consistent": res.consistent,
        "reconstruction": {"vogan": rec.vogan.to_json(), "candidates": rec.candidates.iter().map(|c| c.to_json()).collect::<Vec<_>>(), "matched": rec.matched, "ambiguous": rec.ambiguous, "rank_k": rec.rank_k, "round_trip": round_trip}});
    Ok(ok(j, text))
}

fn verify_table1(rank_cap: usize) -> Result<Outcome> {
    let mut reports = vec![];
    let mut text = String::new();
    let mut all = true;
    for label in table1_bases(rank_cap) {
        let r = verify_table1_base(label)?;
        for row in &r.rows {
            text += &format!("{} {} {} {}: expected {}, computed {}\n", pass_word(row.pass), label, row.row_id, row.tag, row.expected_sigma, row.computed_sigma);
        }
        if !r.unmatched_classes.is_empty() {
            text += &format!("FAIL {label}: computed classes {:?} match no table row\n", r.unmatched_classes);
        }
        all &= r.pass;
        reports.push(r);
    }
    text += &format!("{}\n", pass_word(all));
    Ok(Outcome { json: json!({"bases": reports, "pass": all}), text, status: if all { 0 } else { 1 } })
}

fn check_line(c: &Table2Check) -> String {
    let params: Vec<String> = c.instance.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut s = format!("{} {} [{}] {}", pass_word(c.pass()), c.instance.id, params.join(","), c.instance.tag);
    if !c.consistent {
        s += " (labelings disagree)";
    }
    if !c.matches {
        s += " (triad differs)";
    }
    if let Some(e) = &c.error {
        s += &format!(" (error: {e})");
    }
    s + "\n"
}

fn verify_t2(max_param: i64) -> Result<Outcome> {
    let checks = verify_table2(max_param)?;
    let all = checks.iter().all(|c| c.pass());
    let mut text: String = checks.iter().map(check_line).collect();
    text += &format!("{} ({} of {} entries pass)\n", pass_word(all), checks.iter().filter(|c| c.pass()).count(), checks.len());
    let rows: Vec<Value> = checks.iter().map(|c| json!({"check": c, "pass": c.pass()})).collect();
    Ok(Outcome { json: json!({"max_param": max_param, "rows": rows, "pass": all}), text, status: if all { 0 } else { 1 } })
}

fn verify_axioms(rank_cap: usize, seed: u64, samples: usize) -> Result<Outcome> {
    let catalog = catalog_axiom_suite(rank_cap)?;
    let type_iv = type_iv_axiom_suite(rank_cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gamma = vec![];
    for label in table1_bases(rank_cap.min(4)) {
        let datum = AffineWeylDatum::new(Arc::new(RootSystem::build(label)?))?;
        let (good, total) = sample_gamma_invariance(&datum, &mut rng, samples);
        gamma.push(json!({"base": label, "ok": good, "samples": total}));
    }
    let cat_ok = catalog.iter().all(|c| c.passes());
    let iv_ok = type_iv.iter().all(|c| c.passes());
    let gamma_ok = gamma.iter().all(|g| g["ok"] == g["samples"]);
    let mut text = String::new();
    for c in catalog.iter().filter(|c| !c.passes()) {
        let ps: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        text += &format!("FAIL {} [{}]: triad conditions {:?}, multiplicity conditions {:?}\n", c.tag, ps.join(","), c.triad_axioms.failed(), c.multiplicity_axioms.failed());
    }
    for c in type_iv.iter().filter(|c| !c.passes()) {
        text += &format!("FAIL type (IV) {} Y={}\n", c.base, c.y);
    }
    text += &format!("{} catalog: {} of {} pass\n", pass_word(cat_ok), catalog.iter().filter(|c| c.passes()).count(), catalog.len());
    text += &format!("{} type (IV): {} of {} pass\n", pass_word(iv_ok), type_iv.iter().filter(|c| c.passes()).count(), type_iv.len());
    text += &format!("{} Γ invariance sampling (seed {seed}, {samples} per base)\n", pass_word(gamma_ok));
    let all = cat_ok && iv_ok && gamma_ok;
    let j = json!({"catalog": catalog.iter().map(|c| json!({"case": c, "pass": c.passes()})).collect::<Vec<_>>(),
        "type_iv": type_iv.iter().map(|c| json!({"case": c, "pass": c.passes()})).collect::<Vec<_>>(),
        "gamma_invariance": gamma, "pass": all});
    Ok(Outcome { json: j, text, status: if all { 0 } else { 1 } })
}
