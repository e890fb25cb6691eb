//! The construction: normalization, frames, transition matrices, the
//! obstruction cocycle and its correction, and comparison of two results.

mod compare;
mod frames;
mod normalize;
mod transitions;

pub use compare::{automorphism, compare_bundles, IsomorphismData};
pub use frames::{build_frames, frame_identities, tprime_apply, tprime_apply_inverse, FrameData};
pub use normalize::{adjust_glue, normalize_generators, sections_compatible};
pub use transitions::{
    annihilator, build_transitions, correct, obstruction, ObstructionData, TransitionSet, TransitionStatus,
    TripleDefect,
};

use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{parse_poly, LocElem};
use crate::cech::{CechCochain, SolveOptions};
use crate::cover::{
    extend_off_y, line_bundle, load_sections, load_subscheme, standard_cover, AmbientSpec, Atlas, LineBundle,
    SectionData, SubschemeData, SubschemeInput,
};
use crate::error::{AtStage, Error, Stage, StageError};
use crate::verify::{verify_all, Report};

/// Everything the transition matrices are built from, after
/// normalization.
#[derive(Clone, Debug)]
pub struct Construction {
    pub atlas: Atlas,
    pub line: LineBundle,
    pub sub: SubschemeData,
    pub sec: SectionData,
    pub frames: FrameData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubschemeSpec {
    /// Homogeneous global equations.
    GlobalCi { f: String, g: String },
    /// `(chart, f, g)` in chart coordinates.
    Charts(Vec<(usize, String, String)>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub solve: SolveOptions,
    /// Reverse generator order in every lift.
    pub permute_generators: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildInput {
    pub ambient: AmbientSpec,
    pub twist: i64,
    pub rank: usize,
    pub subscheme: SubschemeSpec,
    /// `(chart, values)` in chart coordinates.
    pub sections: Vec<(usize, Vec<String>)>,
    pub options: BuildOptions,
}

#[derive(Clone, Debug)]
pub struct BundleResult {
    pub construction: Construction,
    /// Sections as loaded, before normalization.
    pub loaded_sections: SectionData,
    pub raw: TransitionSet,
    pub obstruction: ObstructionData,
    /// The 1-cochain `ξ` with `δξ = c`.
    pub xi: CechCochain,
    pub transitions: TransitionSet,
    pub report: Report,
}

/// Runs every stage up to and including the frames.
pub fn prepare(input: &BuildInput) -> Result<(Construction, SectionData), StageError> {
    let cover = standard_cover(input.ambient).at(Stage::Input)?;
    let mut atlas = Atlas::new(cover).with_reversed_generators(input.options.permute_generators);
    let line = line_bundle(atlas.cover(), input.twist).at(Stage::Input)?;
    let nv = atlas.nvars();
    let sub_in = match &input.subscheme {
        SubschemeSpec::GlobalCi { f, g } => SubschemeInput::GlobalCi {
            f: parse_poly(f, nv).at(Stage::Input)?,
            g: parse_poly(g, nv).at(Stage::Input)?,
        },
        SubschemeSpec::Charts(cs) => {
            let mut out = Vec::with_capacity(cs.len());
            for (c, f, g) in cs {
                check_chart(&atlas, *c)?;
                out.push((*c, atlas.parse_chart(*c, f).at(Stage::Input)?, atlas.parse_chart(*c, g).at(Stage::Input)?));
            }
            SubschemeInput::Charts(out)
        }
    };
    let mut reps = Vec::with_capacity(input.sections.len());
    for (c, vals) in &input.sections {
        check_chart(&atlas, *c)?;
        let parsed: Vec<LocElem> = vals.iter().map(|v| atlas.parse_chart(*c, v)).collect::<Result<_, _>>().at(Stage::Input)?;
        reps.push((*c, parsed));
    }
    let sub = load_subscheme(&atlas, &sub_in).at(Stage::LoadSubscheme)?;
    let sub = extend_off_y(&atlas, &sub).at(Stage::ExtendOffY)?;
    let sec = load_sections(&mut atlas, &sub, &line, input.rank, &reps).at(Stage::LoadSections)?;
    let (sub, nsec) = normalize_generators(&atlas, &sub, &sec).at(Stage::NormalizeGenerators)?;
    let sub = adjust_glue(&atlas, &sub, &nsec, &line).at(Stage::AdjustGlue)?;
    let frames = build_frames(&sub, &nsec).at(Stage::BuildFrames)?;
    Ok((Construction { atlas, line, sub, sec: nsec, frames }, sec))
}

fn check_chart(atlas: &Atlas, c: usize) -> Result<(), StageError> {
    if c >= atlas.num_charts() {
        return Err(StageError {
            stage: Stage::Input,
            error: Error::PreconditionViolated(alloc::format!("chart {} out of range", c)),
        });
    }
    Ok(())
}

/// The full pipeline, ending with the verification report.
pub fn build_bundle(input: &BuildInput) -> Result<BundleResult, StageError> {
    let (cx, loaded) = prepare(input)?;
    let raw = build_transitions(&cx).at(Stage::BuildTransitions)?;
    let obs = obstruction(&cx, &raw).at(Stage::Obstruction)?;
    let (transitions, xi) = correct(&cx, &raw, &obs, &input.options.solve).at(Stage::Correct)?;
    let report = verify_all(&cx, Some((&raw, &obs)), &transitions).at(Stage::Verify)?;
    if let Some(bad) = report.first_failure() {
        return Err(StageError { stage: Stage::Verify, error: Error::VerificationFailed(bad.describe()) });
    }
    Ok(BundleResult { construction: cx, loaded_sections: loaded, raw, obstruction: obs, xi, transitions, report })
}
