use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::program::{parse_rules_in, render_program, render_rule, ParseError};
use crate::atoms::AtomSet;
use crate::hef::HefCertificate;
use crate::program::Program;

pub const CERTIFICATE_VERSION: u32 = 1;

/// Serialized form of a [`HefCertificate`]. Field order is the on-disk order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub version: u32,
    pub program_sha256: String,
    pub status: String,
    pub elementary_set: Vec<String>,
    pub witness: Vec<String>,
    pub violating_rule: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("unsupported certificate version {0}")]
    Version(u32),
    #[error("certificate status must be `not_hef`, found `{0}`")]
    Status(String),
    #[error("certificate was issued for a different program")]
    ProgramMismatch,
    #[error("unknown atom `{0}` in the elementary set")]
    UnknownAtom(String),
    #[error("witness rule: {0}")]
    Witness(#[from] ParseError),
}

/// Hex SHA-256 of the canonical rendering.
pub fn program_sha256(program: &Program) -> String {
    hex::encode(Sha256::digest(render_program(program).as_bytes()))
}

pub fn certificate_to_json(program: &Program, cert: &HefCertificate) -> CertificateJson {
    CertificateJson {
        version: CERTIFICATE_VERSION,
        program_sha256: program_sha256(program),
        status: "not_hef".into(),
        elementary_set: program.sorted_names(&cert.elementary_set),
        witness: cert
            .witness
            .rules()
            .iter()
            .map(|r| render_rule(&cert.witness, r))
            .collect(),
        violating_rule: cert.violating_rule,
    }
}

/// Resolves a serialized certificate against `program`. Structural problems
/// are errors; whether the certificate is actually valid is left to
/// [`crate::hef::verify_certificate`].
pub fn certificate_from_json(
    program: &Program,
    json: &CertificateJson,
) -> Result<HefCertificate, CertificateError> {
    if json.version != CERTIFICATE_VERSION {
        return Err(CertificateError::Version(json.version));
    }
    if json.status != "not_hef" {
        return Err(CertificateError::Status(json.status.clone()));
    }
    if json.program_sha256 != program_sha256(program) {
        return Err(CertificateError::ProgramMismatch);
    }
    let elementary_set = json
        .elementary_set
        .iter()
        .map(|n| {
            program
                .atom(n)
                .ok_or_else(|| CertificateError::UnknownAtom(n.clone()))
        })
        .collect::<Result<AtomSet, _>>()?;
    let witness = parse_rules_in(&json.witness.join("\n"), program)?;
    Ok(HefCertificate {
        elementary_set,
        witness,
        violating_rule: json.violating_rule,
    })
}
