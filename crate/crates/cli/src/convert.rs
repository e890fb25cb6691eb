//! Translation between documents and the in-memory construction.

use std::collections::BTreeMap;

use serre_core::algebra::{parse_loc, LocElem, MatrixL};
use serre_core::cech::{CechCochain, CechComplex, SolveOptions};
use serre_core::cover::{AmbientKind, AmbientSpec};
use serre_core::serre::{
    BuildInput, BuildOptions, Construction, IsomorphismData, ObstructionData, SubschemeSpec, TransitionSet,
    TransitionStatus,
};
use serre_core::verify::Report;
use serre_core::Error;

use crate::document::*;
use crate::CliError;

pub fn build_input(doc: &InputDocument, max_degree: Option<u32>) -> BuildInput {
    let defaults = SolveOptions::default();
    let solve = SolveOptions {
        max_degree: max_degree.or(doc.options.max_degree).unwrap_or(defaults.max_degree),
        max_den_exp: doc.options.max_den_exp.unwrap_or(defaults.max_den_exp),
    };
    let kind = match doc.ambient.kind {
        AmbientKindDoc::Projective => AmbientKind::Projective,
        AmbientKindDoc::Affine => AmbientKind::Affine,
    };
    let subscheme = match &doc.subscheme {
        SubschemeDoc::GlobalCi { equations: [f, g] } => SubschemeSpec::GlobalCi { f: f.clone(), g: g.clone() },
        SubschemeDoc::Charts { charts } => SubschemeSpec::Charts(
            charts.iter().map(|c| (c.chart, c.pair[0].clone(), c.pair[1].clone())).collect(),
        ),
    };
    BuildInput {
        ambient: AmbientSpec { kind, dim: doc.ambient.dim },
        twist: doc.line_bundle.twist,
        rank: doc.rank,
        subscheme,
        sections: doc.sections.iter().map(|s| (s.chart, s.values.clone())).collect(),
        options: BuildOptions { solve, permute_generators: doc.options.permute_generators },
    }
}

fn elem(s: &str, nv: usize) -> Result<LocElem, CliError> {
    parse_loc(s, nv).map_err(|e| CliError::Document(format!("bad function {:?}: {}", s, e)))
}

fn elems(v: &[String], nv: usize) -> Result<Vec<LocElem>, CliError> {
    v.iter().map(|s| elem(s, nv)).collect()
}

fn show(v: &[LocElem]) -> Vec<String> {
    v.iter().map(|e| e.to_string()).collect()
}

pub fn matrix_doc(m: &MatrixL) -> MatrixDoc {
    m.to_rows().iter().map(|r| show(r)).collect()
}

pub fn matrix(doc: &MatrixDoc, nv: usize) -> Result<MatrixL, CliError> {
    let rows = doc.iter().map(|r| elems(r, nv)).collect::<Result<Vec<_>, _>>()?;
    MatrixL::from_rows(nv, rows).map_err(|e| CliError::Document(e.to_string()))
}

pub fn transitions_doc(ts: &TransitionSet) -> TransitionsDoc {
    TransitionsDoc {
        status: ts.status.name().to_string(),
        overlaps: ts
            .z
            .iter()
            .map(|(&(i, j), z)| OverlapDoc {
                i,
                j,
                z: matrix_doc(z),
                corrections: ts.corrections.get(&(i, j)).map(|c| show(c)).unwrap_or_default(),
            })
            .collect(),
    }
}

/// Reads a transition set, insisting on exactly one `r x r` matrix per
/// sorted overlap of the construction.
pub fn transitions(doc: &TransitionsDoc, cx: &Construction) -> Result<TransitionSet, CliError> {
    let nv = cx.atlas.nvars();
    let r = cx.sec.rank;
    let status = match doc.status.as_str() {
        "raw" => TransitionStatus::Raw,
        "corrected" => TransitionStatus::Corrected,
        s => return Err(CliError::Document(format!("unknown transition status {:?}", s))),
    };
    let mut z = BTreeMap::new();
    let mut corrections = BTreeMap::new();
    for o in &doc.overlaps {
        let m = matrix(&o.z, nv)?;
        if m.rows() != r || m.cols() != r {
            return Err(CliError::Document(format!("overlap ({},{}): expected a {}x{} matrix", o.i, o.j, r, r)));
        }
        if z.insert((o.i, o.j), m).is_some() {
            return Err(CliError::Document(format!("overlap ({},{}) listed twice", o.i, o.j)));
        }
        if !o.corrections.is_empty() {
            corrections.insert((o.i, o.j), elems(&o.corrections, nv)?);
        }
    }
    let expected: Vec<(usize, usize)> = cx.atlas.overlaps(2).iter().map(|p| (p[0], p[1])).collect();
    if z.keys().copied().collect::<Vec<_>>() != expected {
        return Err(CliError::Document(String::from("transition overlaps do not match the cover")));
    }
    let mut ts = TransitionSet::new(r, nv, z, status);
    ts.corrections = corrections;
    Ok(ts)
}

pub fn cochain_doc(c: &CechCochain) -> CochainDoc {
    CochainDoc {
        degree: c.degree(),
        mult: c.mult(),
        twisted: false,
        values: c.iter().map(|(t, v)| CochainEntryDoc { tuple: t.clone(), values: show(v) }).collect(),
    }
}

/// Reads a cochain; twisted values are converted with the complex's
/// last-index trivialization.
pub fn cochain(doc: &CochainDoc, cx: &CechComplex<'_>, nv: usize) -> Result<CechCochain, CliError> {
    let mut entries = Vec::with_capacity(doc.values.len());
    for e in &doc.values {
        let mut vals = elems(&e.values, nv)?;
        if doc.twisted {
            vals = vals.iter().map(|v| cx.from_twisted(&e.tuple, v)).collect();
        }
        entries.push((e.tuple.clone(), vals));
    }
    CechCochain::from_values(doc.degree, doc.mult, nv, entries).map_err(|e| CliError::Document(e.to_string()))
}

pub fn obstruction_doc(obs: &ObstructionData) -> ObstructionDoc {
    ObstructionDoc {
        triples: obs
            .triples
            .iter()
            .map(|(&(i, j, k), t)| TripleDoc { i, j, k, beta: show(&t.beta) })
            .collect(),
        cochain: cochain_doc(&obs.cochain),
    }
}

pub fn report_doc(report: &Report) -> ReportDoc {
    ReportDoc {
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckDoc {
                name: c.name.clone(),
                scope: c.scope.to_string(),
                passed: c.passed,
                witness: c.witness.clone(),
            })
            .collect(),
    }
}

pub fn charts_doc(cx: &Construction) -> Vec<ChartDoc> {
    (0..cx.atlas.num_charts())
        .map(|i| {
            let (f, g) = cx.sub.pair(i);
            ChartDoc {
                chart: i,
                on_y: cx.sub.pairs[i].on_y,
                t: cx.sec.t[i],
                tier: cx.sec.tiers[i].name().to_string(),
                pair: [f.to_string(), g.to_string()],
                sections: show(&cx.sec.reps[i]),
                m: matrix_doc(&cx.frames.m[i]),
            }
        })
        .collect()
}

pub fn gluing_doc(cx: &Construction) -> Vec<GlueDoc> {
    cx.sub
        .glue
        .iter()
        .map(|(&(i, j), g)| GlueDoc { i, j, case: g.case.name().to_string(), a: matrix_doc(&g.a), deferred: g.deferred })
        .collect()
}

pub fn isomorphism_doc(iso: &IsomorphismData) -> IsomorphismDocument {
    IsomorphismDocument {
        status: String::from("isomorphic"),
        x: iso.x.iter().map(|(&(i, j), v)| OverlapVectorDoc { i, j, values: show(v) }).collect(),
        y: iso.y.iter().enumerate().map(|(chart, v)| ChartVectorDoc { chart, values: show(v) }).collect(),
        n: iso.n.iter().enumerate().map(|(chart, m)| ChartMatrixDoc { chart, matrix: matrix_doc(m) }).collect(),
    }
}

/// Short machine-readable name of an error.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ArityMismatch { .. } => "arity_mismatch",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::Parse { .. } => "parse",
        Error::UnitNotDesignated(_) => "unit_not_designated",
        Error::NotCoprime => "not_coprime",
        Error::NotInIdeal => "not_in_ideal",
        Error::PreconditionViolated(_) => "precondition_violated",
        Error::NotRegularPair => "not_regular_pair",
        Error::InvalidAmbient(_) => "invalid_ambient",
        Error::NonzeroAffineTwist(_) => "nonzero_affine_twist",
        Error::NotCodimTwo { .. } => "not_codim_two",
        Error::GluingFailure { .. } => "gluing_failure",
        Error::CompatibilityFailure { .. } => "compatibility_failure",
        Error::NotGenerating { .. } => "not_generating",
        Error::RefinementRequired { .. } => "refinement_required",
        Error::ShapeViolation(_) => "shape_violation",
        Error::NotACocycle => "not_a_cocycle",
        Error::Obstructed(_) => "obstructed",
        Error::Inconclusive => "inconclusive",
        Error::FormMismatch => "form_mismatch",
        Error::H1Obstruction => "h1_obstruction",
        Error::VerificationFailed(_) => "verification_failed",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_round_trip() {
        let m = MatrixL::from_rows(
            3,
            vec![
                vec![parse_loc("x1/x0", 3).unwrap(), parse_loc("-3/2", 3).unwrap()],
                vec![parse_loc("x2^2/(x0*x1)", 3).unwrap(), parse_loc("(x0 + x1)/x2", 3).unwrap()],
            ],
        )
        .unwrap();
        assert_eq!(matrix(&matrix_doc(&m), 3).unwrap(), m);
    }

    #[test]
    fn options_fall_back_to_defaults() {
        let doc: InputDocument = serde_json::from_str(
            r#"{"ambient": {"kind": "projective", "dim": 2}, "rank": 2,
                "subscheme": {"mode": "global_ci", "equations": ["x0", "x1"]},
                "options": {"max_den_exp": 2}}"#,
        )
        .unwrap();
        let input = build_input(&doc, None);
        assert_eq!(input.options.solve.max_degree, 8);
        assert_eq!(input.options.solve.max_den_exp, 2);
        assert_eq!(build_input(&doc, Some(3)).options.solve.max_degree, 3);
        assert_eq!(input.twist, 0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = r#"{"ambient": {"kind": "projective", "dim": 2, "extra": 1}, "rank": 2,
                      "subscheme": {"mode": "global_ci", "equations": ["x0", "x1"]}}"#;
        assert!(serde_json::from_str::<InputDocument>(bad).is_err());
    }
}
