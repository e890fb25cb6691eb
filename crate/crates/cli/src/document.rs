//! On-disk document formats. Every function value is written as a
//! degree-zero fraction in the homogeneous coordinates `x0..xn` (plain
//! polynomials in `x0..x{n-1}` on affine space).

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbientKindDoc {
    Projective,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientDoc {
    pub kind: AmbientKindDoc,
    pub dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineBundleDoc {
    #[serde(default)]
    pub twist: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartEquationsDoc {
    pub chart: usize,
    /// `(f, g)` in the chart's own coordinates.
    pub pair: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubschemeDoc {
    /// Two homogeneous equations.
    GlobalCi { equations: [String; 2] },
    Charts { charts: Vec<ChartEquationsDoc> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionsDoc {
    pub chart: usize,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_den_exp: Option<u32>,
    #[serde(default)]
    pub permute_generators: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub ambient: AmbientDoc,
    #[serde(default)]
    pub line_bundle: LineBundleDoc,
    pub rank: usize,
    pub subscheme: SubschemeDoc,
    #[serde(default)]
    pub sections: Vec<SectionsDoc>,
    #[serde(default)]
    pub options: OptionsDoc,
}

impl InputDocument {
    /// Equal up to options.
    pub fn same_data(&self, other: &InputDocument) -> bool {
        self.ambient == other.ambient
            && self.line_bundle == other.line_bundle
            && self.rank == other.rank
            && self.subscheme == other.subscheme
            && self.sections == other.sections
    }
}

pub type MatrixDoc = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDoc {
    pub chart: usize,
    pub on_y: bool,
    pub t: usize,
    pub tier: String,
    pub pair: [String; 2],
    pub sections: Vec<String>,
    pub m: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueDoc {
    pub i: usize,
    pub j: usize,
    pub case: String,
    pub a: MatrixDoc,
    pub deferred: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapDoc {
    pub i: usize,
    pub j: usize,
    pub z: MatrixDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub corrections: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionsDoc {
    pub status: String,
    pub overlaps: Vec<OverlapDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntryDoc {
    pub tuple: Vec<usize>,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDoc {
    pub degree: usize,
    pub mult: usize,
    /// Values are Laurent sections of `L*` rather than functions in the
    /// trivialization of the last index.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub twisted: bool,
    pub values: Vec<CochainEntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleDoc {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub beta: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionDoc {
    pub triples: Vec<TripleDoc>,
    pub cochain: CochainDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub scope: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDocument {
    pub status: String,
    pub input: InputDocument,
    pub charts: Vec<ChartDoc>,
    pub gluing: Vec<GlueDoc>,
    pub raw: TransitionsDoc,
    pub obstruction: ObstructionDoc,
    pub xi: CochainDoc,
    pub transitions: TransitionsDoc,
    pub verification: ReportDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassComponentDoc {
    pub slot: usize,
    pub exponents: Vec<i64>,
}

/// Written instead of a bundle when a stage fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureDocument {
    pub status: String,
    pub stage: String,
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub class: Vec<ClassComponentDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartMatrixDoc {
    pub chart: usize,
    pub matrix: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartVectorDoc {
    pub chart: usize,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapVectorDoc {
    pub i: usize,
    pub j: usize,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismDocument {
    pub status: String,
    pub x: Vec<OverlapVectorDoc>,
    pub y: Vec<ChartVectorDoc>,
    pub n: Vec<ChartMatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDocument {
    pub ambient: String,
    pub twist: i64,
    pub degree: usize,
    pub dimension: u64,
}
