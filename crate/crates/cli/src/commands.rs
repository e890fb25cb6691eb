//! The four commands. Each returns an [`Outcome`] instead of printing, so
//! the binary and the tests share one code path.

use std::path::Path;

use serde::Serialize;
use serre_core::cech::cohomology_dim;
use serre_core::cover::AmbientKind;
use serre_core::serre::{
    build_transitions, compare_bundles, correct, obstruction, prepare, BuildInput, Construction, ObstructionData,
};
use serre_core::verify::{verify_all, Check, Report, Scope};
use serre_core::{Error, Stage, StageError};

use crate::convert::*;
use crate::document::*;
use crate::{CliError, Format, Outcome};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(CliError::Json)
}

/// Pretty JSON with keys sorted at every level.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn failure(stage: Stage, e: &Error, obs: Option<&ObstructionData>) -> Outcome {
    let class = match e {
        Error::Obstructed(cs) => {
            cs.iter().map(|c| ClassComponentDoc { slot: c.slot, exponents: c.exponents.clone() }).collect()
        }
        _ => Vec::new(),
    };
    let status = match e {
        Error::Obstructed(_) => "obstructed",
        Error::Inconclusive => "inconclusive",
        _ => "error",
    };
    let doc = FailureDocument {
        status: status.to_string(),
        stage: stage.name().to_string(),
        kind: error_kind(e).to_string(),
        message: e.to_string(),
        obstruction: obs.map(obstruction_doc),
        class,
    };
    let code = match e {
        Error::Obstructed(_) => 2,
        Error::Inconclusive => 3,
        _ => 1,
    };
    Outcome { code, stdout: to_json(&doc), stderr: Some(format!("stage {}: {}", stage, e)) }
}

fn stage_failure(e: StageError) -> Outcome {
    failure(e.stage, &e.error, None)
}

fn render(format: Format, json: String, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => json,
        Format::Text => text(),
    }
}

fn report_text(r: &ReportDoc) -> String {
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    let mut out = format!("verification: {} checks, {} failed\n", r.checks.len(), failed);
    for c in r.checks.iter().filter(|c| !c.passed) {
        out.push_str(&format!("  FAILED {} on {}: {}\n", c.name, c.scope, c.witness.as_deref().unwrap_or("")));
    }
    out
}

fn matrix_text(m: &MatrixDoc) -> String {
    let widths: Vec<usize> =
        (0..m.first().map_or(0, |r| r.len())).map(|c| m.iter().map(|r| r[c].len()).max().unwrap()).collect();
    m.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{:>w$}", s, w = w)).collect();
            format!("    [ {} ]\n", cells.join("  "))
        })
        .collect()
}

fn bundle_text(doc: &BundleDocument) -> String {
    let mut out = String::from("bundle built\n");
    for c in &doc.charts {
        out.push_str(&format!("chart {}: t = {}, unit {}, Y {}\n", c.chart, c.t, c.tier, if c.on_y { "meets" } else { "misses" }));
    }
    for o in &doc.transitions.overlaps {
        out.push_str(&format!("Z_{}{} =\n{}", o.i, o.j, matrix_text(&o.z)));
    }
    out.push_str(&report_text(&doc.verification));
    out
}

fn bundle_document(
    doc: &InputDocument,
    cx: &Construction,
    raw: &serre_core::serre::TransitionSet,
    obs: &ObstructionData,
    xi: &serre_core::cech::CechCochain,
    corrected: &serre_core::serre::TransitionSet,
    report: &Report,
) -> BundleDocument {
    BundleDocument {
        status: String::from("ok"),
        input: doc.clone(),
        charts: charts_doc(cx),
        gluing: gluing_doc(cx),
        raw: transitions_doc(raw),
        obstruction: obstruction_doc(obs),
        xi: cochain_doc(xi),
        transitions: transitions_doc(corrected),
        verification: report_doc(report),
    }
}

/// Options of the `build` command.
#[derive(Clone, Debug, Default)]
pub struct BuildFlags {
    pub max_degree: Option<u32>,
    /// Solve this 2-cochain in the correction stage instead of the computed
    /// obstruction.
    pub replay_cochain: Option<CochainDoc>,
}

pub fn build_document(doc: &InputDocument, flags: &BuildFlags, format: Format) -> Outcome {
    let input: BuildInput = build_input(doc, flags.max_degree);
    let (cx, _) = match prepare(&input) {
        Ok(v) => v,
        Err(e) => return stage_failure(e),
    };
    let raw = match build_transitions(&cx) {
        Ok(v) => v,
        Err(e) => return failure(Stage::BuildTransitions, &e, None),
    };
    let obs = match obstruction(&cx, &raw) {
        Ok(v) => v,
        Err(e) => return failure(Stage::Obstruction, &e, None),
    };
    let mut target = obs.clone();
    if let Some(replay) = &flags.replay_cochain {
        let c = match cochain(replay, &cx.complex(), cx.atlas.nvars()) {
            Ok(c) => c,
            Err(e) => return cli_failure(&e),
        };
        let projective = cx.atlas.cover().ambient().kind == AmbientKind::Projective;
        if projective && c.iter().flat_map(|(_, v)| v).any(|v| !v.is_zero() && v.degree() != Some(0)) {
            let msg = "replayed cochain values must be degree-zero functions; check its twist";
            return cli_failure(&CliError::Document(msg.to_string()));
        }
        target.cochain = c;
    }
    let (corrected, xi) = match correct(&cx, &raw, &target, &input.options.solve) {
        Ok(v) => v,
        Err(e) => return failure(Stage::Correct, &e, Some(&target)),
    };
    let report = match verify_all(&cx, Some((&raw, &obs)), &corrected) {
        Ok(v) => v,
        Err(e) => return failure(Stage::Verify, &e, None),
    };
    let out = bundle_document(doc, &cx, &raw, &obs, &xi, &corrected, &report);
    let code = if report.passed() { 0 } else { 1 };
    let stderr = report.first_failure().map(|c| format!("stage verify: {}", c.describe()));
    Outcome { code, stdout: render(format, to_json(&out), || bundle_text(&out)), stderr }
}

pub fn cmd_build(input: &Path, flags: &BuildFlags, format: Format) -> Outcome {
    match read(input).and_then(|t| parse::<InputDocument>(&t)) {
        Ok(doc) => build_document(&doc, flags, format),
        Err(e) => cli_failure(&e),
    }
}

pub fn cli_failure(e: &CliError) -> Outcome {
    let doc = FailureDocument {
        status: String::from("error"),
        stage: Stage::Input.name().to_string(),
        kind: e.kind().to_string(),
        message: e.to_string(),
        obstruction: None,
        class: Vec::new(),
    };
    Outcome { code: 1, stdout: to_json(&doc), stderr: Some(format!("stage input: {}", e)) }
}

fn push(report: &mut Report, name: &str, scope: Scope, passed: bool, witness: &str) {
    let witness = if passed { None } else { Some(witness.to_string()) };
    report.checks.push(Check { name: name.to_string(), scope, passed, witness });
}

/// Checks that the recorded frames, gluing and `ξ` are the ones the input
/// determines.
fn document_checks(doc: &BundleDocument, cx: &Construction, obs: &ObstructionData, report: &mut Report) {
    let charts = charts_doc(cx);
    for (i, c) in charts.iter().enumerate() {
        let same = doc.charts.get(i) == Some(c);
        push(report, "document_frames", Scope::Chart(i), same, "recorded chart data differs from the rebuilt data");
    }
    if doc.charts.len() != charts.len() {
        push(report, "document_frames", Scope::Global, false, "wrong number of charts");
    }
    let gluing = gluing_doc(cx);
    push(report, "document_gluing", Scope::Global, doc.gluing == gluing, "recorded gluing differs from the rebuilt gluing");
    let cx_complex = cx.complex();
    let nv = cx.atlas.nvars();
    let recorded = cochain(&doc.obstruction.cochain, &cx_complex, nv);
    let same_obs = matches!(&recorded, Ok(c) if *c == obs.cochain);
    push(report, "document_obstruction", Scope::Global, same_obs, "recorded obstruction differs from the recomputed one");
    let xi_ok = match cochain(&doc.xi, &cx_complex, nv) {
        Ok(xi) => xi.degree() == 1 && cx_complex.differential(&xi) == obs.cochain,
        Err(_) => false,
    };
    push(report, "document_xi", Scope::Global, xi_ok, "the recorded 1-cochain does not bound the obstruction");
}

pub fn cmd_verify(bundle: &Path, format: Format) -> Outcome {
    let doc = match read(bundle).and_then(|t| parse::<BundleDocument>(&t)) {
        Ok(d) => d,
        Err(e) => return cli_failure(&e),
    };
    if doc.status != "ok" {
        return cli_failure(&CliError::Document(format!("document status is {:?}, not a built bundle", doc.status)));
    }
    let (cx, _) = match prepare(&build_input(&doc.input, None)) {
        Ok(v) => v,
        Err(e) => return stage_failure(e),
    };
    let loaded = transitions(&doc.raw, &cx).and_then(|raw| Ok((raw, transitions(&doc.transitions, &cx)?)));
    let (raw, corrected) = match loaded {
        Ok(v) => v,
        Err(e) => return cli_failure(&e),
    };
    let obs = match obstruction(&cx, &raw) {
        Ok(v) => v,
        Err(e) => return failure(Stage::Obstruction, &e, None),
    };
    let mut report = match verify_all(&cx, Some((&raw, &obs)), &corrected) {
        Ok(v) => v,
        Err(e) => return failure(Stage::Verify, &e, None),
    };
    document_checks(&doc, &cx, &obs, &mut report);
    let out = report_doc(&report);
    let code = if report.passed() { 0 } else { 1 };
    let stderr = report.first_failure().map(|c| format!("stage verify: {}", c.describe()));
    Outcome { code, stdout: render(format, to_json(&out), || report_text(&out)), stderr }
}

pub fn cmd_compare(a: &Path, b: &Path, format: Format) -> Outcome {
    let docs = read(a).and_then(|t| parse::<BundleDocument>(&t)).and_then(|da| {
        let db = read(b).and_then(|t| parse::<BundleDocument>(&t))?;
        Ok((da, db))
    });
    let (da, db) = match docs {
        Ok(v) => v,
        Err(e) => return cli_failure(&e),
    };
    if !da.input.same_data(&db.input) {
        return cli_failure(&CliError::Document(String::from("the documents describe different input data")));
    }
    let (cx, _) = match prepare(&build_input(&da.input, None)) {
        Ok(v) => v,
        Err(e) => return stage_failure(e),
    };
    let loaded = transitions(&da.transitions, &cx).and_then(|ta| Ok((ta, transitions(&db.transitions, &cx)?)));
    let (ta, tb) = match loaded {
        Ok(v) => v,
        Err(e) => return cli_failure(&e),
    };
    let opts = build_input(&da.input, None).options.solve;
    match compare_bundles(&cx, &ta, &tb, &opts) {
        Ok(iso) => {
            let out = isomorphism_doc(&iso);
            let text = || {
                let mut s = String::from("isomorphic\n");
                for n in &out.n {
                    s.push_str(&format!("N_{} =\n{}", n.chart, matrix_text(&n.matrix)));
                }
                s
            };
            Outcome { code: 0, stdout: render(format, to_json(&out), text), stderr: None }
        }
        Err(e @ Error::FormMismatch) => {
            let mut o = failure(Stage::Compare, &e, None);
            o.code = 2;
            o
        }
        Err(e) => {
            let mut o = failure(Stage::Compare, &e, None);
            o.code = 1;
            o
        }
    }
}

/// Parses `Pn` (or `P^n`).
pub fn parse_ambient(s: &str) -> Result<usize, CliError> {
    let digits = s.strip_prefix("P^").or_else(|| s.strip_prefix('P'));
    match digits.and_then(|d| d.parse::<usize>().ok()) {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(CliError::Document(format!("ambient {:?} is not a projective space Pn with n >= 1", s))),
    }
}

pub fn cmd_cohomology(ambient: &str, twist: i64, degree: usize, format: Format) -> Outcome {
    let n = match parse_ambient(ambient) {
        Ok(n) => n,
        Err(e) => return cli_failure(&e),
    };
    let dimension = cohomology_dim(n, twist, degree);
    let doc = CohomologyDocument { ambient: format!("P{}", n), twist, degree, dimension };
    Outcome { code: 0, stdout: render(format, to_json(&doc), || format!("{}\n", dimension)), stderr: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ambient_names() {
        assert_eq!(parse_ambient("P2").unwrap(), 2);
        assert_eq!(parse_ambient("P^3").unwrap(), 3);
        assert!(parse_ambient("A2").is_err());
        assert!(parse_ambient("P0").is_err());
    }

    #[test]
    fn cohomology_text() {
        assert_eq!(cmd_cohomology("P2", -3, 2, Format::Text).stdout, "1\n");
        assert_eq!(cmd_cohomology("P3", -2, 2, Format::Text).stdout, "0\n");
        assert_eq!(cmd_cohomology("P2", 1, 0, Format::Text).stdout, "3\n");
        assert_eq!(cmd_cohomology("Q2", 1, 0, Format::Text).code, 1);
    }

    #[test]
    fn json_keys_are_sorted() {
        let s = cmd_cohomology("P2", 1, 0, Format::Json).stdout;
        let keys: Vec<usize> = ["ambient", "degree", "dimension", "twist"].iter().map(|k| s.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zero_section_is_a_stage_error() {
        let doc: InputDocument = serde_json::from_str(
            r#"{"ambient": {"kind": "projective", "dim": 3}, "line_bundle": {"twist": 2}, "rank": 2,
                "subscheme": {"mode": "global_ci", "equations": ["x0", "x1"]},
                "sections": [{"chart": 2, "values": ["0"]}, {"chart": 3, "values": ["1"]}]}"#,
        )
        .unwrap();
        let out = build_document(&doc, &BuildFlags::default(), Format::Json);
        assert_eq!(out.code, 1);
        let f: FailureDocument = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!((f.stage.as_str(), f.kind.as_str()), ("load_sections", "not_generating"));
    }
}
