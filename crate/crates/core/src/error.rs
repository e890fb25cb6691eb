use alloc::string::String;
use alloc::vec::Vec;

/// Where in the construction an error was raised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Input,
    LoadSubscheme,
    ExtendOffY,
    LoadSections,
    NormalizeGenerators,
    AdjustGlue,
    BuildFrames,
    BuildTransitions,
    Obstruction,
    Correct,
    Verify,
    Compare,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Input => "input",
            Stage::LoadSubscheme => "load_subscheme",
            Stage::ExtendOffY => "extend_off_y",
            Stage::LoadSections => "load_sections",
            Stage::NormalizeGenerators => "normalize_generators",
            Stage::AdjustGlue => "adjust_glue",
            Stage::BuildFrames => "build_frames",
            Stage::BuildTransitions => "build_z",
            Stage::Obstruction => "obstruction",
            Stage::Correct => "correct",
            Stage::Verify => "verify",
            Stage::Compare => "compare",
        }
    }
}

impl core::fmt::Display for Stage {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// One unsolvable multidegree component of a cocycle: the tuple slot and
/// the Laurent exponent vector of the offending monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassComponent {
    pub slot: usize,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("denominator unit {0} is not designated on this overlap")]
    UnitNotDesignated(String),
    #[error("functions have a common zero on the overlap; no unit certificate exists")]
    NotCoprime,
    #[error("element is not in the ideal")]
    NotInIdeal,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("generators do not form a regular pair")]
    NotRegularPair,
    #[error("invalid ambient space: {0}")]
    InvalidAmbient(String),
    #[error("affine ambient requires twist 0, got {0}")]
    NonzeroAffineTwist(i64),
    #[error("chart {chart}: generators are not a regular pair (not codimension two)")]
    NotCodimTwo { chart: usize },
    #[error("overlap ({i},{j}): gluing failed: {reason}")]
    GluingFailure { i: usize, j: usize, reason: String },
    #[error("overlap ({i},{j}): section {t} violates the compatibility relation")]
    CompatibilityFailure { i: usize, j: usize, t: usize },
    #[error("chart {chart}: sections do not generate together with the local equations")]
    NotGenerating { chart: usize },
    #[error("chart {chart}: no single section is a unit near Y; the cover must be refined")]
    RefinementRequired { chart: usize },
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("cocycle is not a coboundary: {} obstructed component(s)", .0.len())]
    Obstructed(Vec<ClassComponent>),
    #[error("bounded coboundary search found no solution")]
    Inconclusive,
    #[error("bundles do not share their P and R blocks")]
    FormMismatch,
    #[error("the difference cocycle is not a coboundary")]
    H1Obstruction,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

/// An [`Error`] tagged with the pipeline stage that produced it.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("stage {stage}: {error}")]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

pub trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, StageError>;
}

impl<T> AtStage<T> for Result<T, Error> {
    fn at(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}
