//! JSON shapes printed with `--format json`. Field order is part of the
//! output contract.

use hefcheck::hef::SearchStats;
use hefcheck::reduction::CrossValidation;
use hefcheck::text::CertificateJson;
use serde::Serialize;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct HefReport {
    pub version: u32,
    pub program_sha256: String,
    pub mode: &'static str,
    pub status: &'static str,
    pub certificate: Option<CertificateJson>,
    pub limit: Option<String>,
    pub stats: SearchStats,
}

#[derive(Debug, Serialize)]
pub struct HcfReport {
    pub version: u32,
    pub program_sha256: String,
    pub mode: &'static str,
    pub status: &'static str,
    pub violating_rule: Option<usize>,
    pub atoms: Option<[String; 2]>,
}

#[derive(Debug, Serialize)]
pub struct ElementaryReport {
    pub version: u32,
    pub set: Vec<String>,
    pub elementary: bool,
    pub failing_subset: Option<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub version: u32,
    pub valid: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct StableReport {
    pub version: u32,
    pub models: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct FormulaReport {
    pub file: String,
    #[serde(flatten)]
    pub result: CrossValidation,
}

#[derive(Debug, Serialize)]
pub struct XvalidateReport {
    pub version: u32,
    pub formulas: Vec<FormulaReport>,
    pub all_consistent: bool,
}
