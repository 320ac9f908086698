//! Machine-readable report structures shared by the subcommands.

use serde::Serialize;

use mframe::dilation::OrthoBasisReport;
use mframe::disjoint::{NineConditionReport, PairClassification};
use mframe::fileio::{FrameFile, OperatorFile};
use mframe::frame::{Frame, RieszReport, VerifyReport};

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub algebra_blocks: Vec<usize>,
    pub rank: usize,
    pub free_module: bool,
    pub elements: usize,
    pub bounds: (f64, f64),
    pub is_frame: bool,
    pub tight: bool,
    pub normalized_tight: bool,
    pub riesz: RieszReport,
    pub verify: VerifyReport,
    pub tol: f64,
}

impl AnalyzeReport {
    pub fn new(frame: &Frame, tol: f64, seed: u64) -> Self {
        let (c, d) = frame.optimal_bounds();
        let verify = frame.verify(c, d, tol, seed, 50);
        AnalyzeReport {
            algebra_blocks: frame.module().algebra().blocks().to_vec(),
            rank: frame.module().rank(),
            free_module: frame.module().is_free(),
            elements: frame.len(),
            bounds: (c, d),
            is_frame: !verify.not_a_frame,
            tight: frame.is_tight(tol),
            normalized_tight: frame.is_normalized_tight(tol),
            riesz: frame.riesz_report(tol),
            verify,
            tol,
        }
    }
}

#[derive(Serialize)]
pub struct DualReport {
    pub input_bounds: (f64, f64),
    pub dual_bounds: (f64, f64),
    pub max_reconstruction_residual: f64,
    pub output: String,
}

#[derive(Serialize)]
pub struct DilateReport {
    pub mode: &'static str,
    pub input_bounds: (f64, f64),
    pub dilated_bounds: (f64, f64),
    pub complement_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ortho_certificate: Option<OrthoBasisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub riesz_certificate: Option<RieszReport>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dilated_output: Option<String>,
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub classification: PairClassification,
    pub strong_disjointness: NineConditionReport,
}

#[derive(Serialize)]
pub struct PartReport {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial_isometry_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub riesz: Option<bool>,
}

#[derive(Serialize)]
pub struct DecomposeReport {
    pub method: String,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub parts: Vec<PartReport>,
}

#[derive(Serialize)]
pub struct CantorReport {
    pub levels: u32,
    pub grid_points: usize,
    pub elements: usize,
    pub partition_defect: f64,
    pub bounds: (f64, f64),
    pub self_reconstruction_residual: f64,
}

#[derive(Serialize)]
pub struct SingleGeneratorReport {
    pub levels: u32,
    pub bounds_per_level: Vec<(u32, f64)>,
    pub upper_bound: f64,
}

#[derive(Serialize)]
pub struct BracketReport {
    pub samples_per_unit: usize,
    pub values: Vec<(f64, f64)>,
    pub max_deviation_from_unit: f64,
    pub positive: bool,
}

#[derive(Serialize)]
pub struct FixtureReport {
    pub kind: String,
    pub seed: u64,
    pub outputs: Vec<String>,
}
