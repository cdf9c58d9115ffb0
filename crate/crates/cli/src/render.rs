//! Output plumbing: JSON documents with a fixed field order, CSV tables
//! with fixed headers, and a terse text mode.
//!
//! Every exact rational is emitted as both a `"num/den"` string and a
//! float rendering; integers that may outgrow 64 bits are decimal
//! strings. JSON field order follows the struct declarations and maps
//! are B-tree backed, so identical invocations produce identical bytes.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Output format selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// An exact rational with a float rendering alongside.
#[derive(Serialize)]
pub struct RationalDto {
    pub exact: String,
    pub float: f64,
}

pub fn rational(r: &BigRational) -> RationalDto {
    RationalDto {
        exact: format!("{}/{}", r.numer(), r.denom()),
        float: float_approx(r),
    }
}

/// A float approximation that survives numerators and denominators far
/// beyond `f64` range: shift the quotient into ~80 bits first.
pub fn float_approx(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    if n.is_zero() {
        return 0.0;
    }
    let k = (80i64 + d.bits() as i64 - n.bits() as i64).max(0) as usize;
    let q = (n.abs() << k) / d;
    let f = q.to_f64().expect("an ~80-bit integer fits in a float") * 2f64.powi(-(k as i32));
    if n.is_negative() {
        -f
    } else {
        f
    }
}

/// Pretty JSON with a trailing newline.
pub fn json(dto: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(dto).expect("every report serializes");
    text.push('\n');
    text
}

/// The structured error object emitted on domain failures in JSON mode.
pub fn error_json(kind: &str, message: &str) -> String {
    json(&serde_json::json!({ "error": { "kind": kind, "message": message } }))
}

/// A CSV table with the given header row.
pub fn csv_table(headers: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(headers).expect("in-memory CSV");
    for row in rows {
        writer.write_record(&row).expect("in-memory CSV");
    }
    let bytes = writer.into_inner().expect("in-memory CSV");
    String::from_utf8(bytes).expect("CSV output is UTF-8")
}

/// Two CSV cells for one rational: exact text and float rendering.
pub fn csv_rational(r: &BigRational) -> [String; 2] {
    [
        format!("{}/{}", r.numer(), r.denom()),
        float_approx(r).to_string(),
    ]
}

// ---------------------------------------------------------------------
// Per-command documents. Field order here is the byte order in the JSON
// output, so additions belong at the end of a struct.

/// Positions picked per bin: 1-based bin index → sorted 0-based slots.
pub type PicksDto = BTreeMap<usize, Vec<usize>>;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SequenceDto {
    pub schedule: String,
    pub bins: Vec<Vec<String>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionDto {
    pub summands: Vec<String>,
    pub picks: PicksDto,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecomposeDto {
    pub schedule: String,
    pub x: String,
    pub found: bool,
    pub summands: Vec<String>,
    pub picks: PicksDto,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EnumerateDto {
    pub schedule: String,
    pub x: String,
    pub limit: usize,
    pub truncated: bool,
    pub count: usize,
    pub decompositions: Vec<DecompositionDto>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BinReasonDto {
    pub bin: usize,
    pub reason: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyDto {
    pub schedule: String,
    pub bins: usize,
    pub adjacency: usize,
    pub verdict: String,
    pub per_bin: Vec<BinReasonDto>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FindingDto {
    ConfirmedUnique,
    Collision {
        x: String,
        first: DecompositionDto,
        second: DecompositionDto,
    },
    CoverageGap {
        x: String,
    },
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyDto {
    pub schedule: String,
    pub bound: u64,
    pub threads: usize,
    pub unique: bool,
    pub finding: FindingDto,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndivisibleDto {
    pub bin: usize,
    pub term: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DivisibilityDto {
    pub schedule: String,
    pub n0: usize,
    pub k: String,
    pub modulus: String,
    pub all_divisible: bool,
    pub first_indivisible: Option<IndivisibleDto>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MomentsDto {
    pub schedule: String,
    pub bin: usize,
    pub delta: u32,
    pub mu: RationalDto,
    pub sigma2: RationalDto,
    pub rho2d: RationalDto,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LyapunovRowDto {
    pub n: usize,
    pub s2: RationalDto,
    pub e: RationalDto,
    pub squared_ratio: Option<RationalDto>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LyapunovDto {
    pub schedule: String,
    pub delta: u32,
    pub max_n: usize,
    pub rows: Vec<LyapunovRowDto>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DistDto {
    pub source: String,
    pub schedule: String,
    pub bin: usize,
    pub include_top_bin: bool,
    pub total: String,
    pub weights: BTreeMap<u64, String>,
    pub probs: BTreeMap<u64, RationalDto>,
    pub mean: RationalDto,
    pub variance: RationalDto,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KsDto {
    pub schedule: String,
    pub bin: usize,
    pub include_top_bin: bool,
    pub ks_distance: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub grid_size: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Thm35RowDto {
    pub n: usize,
    pub rho: RationalDto,
    pub ratio: RationalDto,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Thm35Dto {
    pub delta: u32,
    pub max_n: usize,
    pub bounded: bool,
    pub max_ratio: RationalDto,
    pub max_ratio_at: usize,
    pub sigma_is_quarter_n: bool,
    pub closed_form_matches_general: bool,
    pub alternating_sum_vanishes: bool,
    pub weighted_alternating_sum_vanishes: bool,
    pub rows: Vec<Thm35RowDto>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RepresentableDto {
    pub n: usize,
    pub actual: u64,
    pub predicted_constant: Option<String>,
    pub predicted_general: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GnaryReportDto {
    pub b: u64,
    pub g: u64,
    pub method: String,
    pub schedule: String,
    pub omegas: Vec<String>,
    pub gaps: Vec<Vec<String>>,
    pub gap_verdicts: Vec<Vec<bool>>,
    pub uniform_gap_is_omega_plus_one: Vec<bool>,
    pub all_gaps_exceed_prior_omega: bool,
    pub representable: Vec<RepresentableDto>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeDto {
    pub levels: Vec<Vec<String>>,
    pub diagonal: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MismatchDto {
    pub level: usize,
    pub position: usize,
    pub built: String,
    pub predicted: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReadingDto {
    pub reading: String,
    pub mismatches: Vec<MismatchDto>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeCheckDto {
    pub levels: usize,
    pub telephone: bool,
    pub bin_equivalence: bool,
    pub passing: Vec<String>,
    pub readings: Vec<ReadingDto>,
}
