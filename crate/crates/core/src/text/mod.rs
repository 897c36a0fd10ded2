//! Surface syntax for programs, DIMACS input and certificate JSON.

mod cert;
mod dimacs;
mod program;

pub use cert::{
    certificate_from_json, certificate_to_json, program_sha256, CertificateError, CertificateJson,
    CERTIFICATE_VERSION,
};
pub use dimacs::{parse_dimacs, Cnf3, CnfError, DimacsError};
pub use program::{
    parse_program, parse_rules_in, render_program, render_rule, ParseError, ParseErrorKind,
    SourceSpan,
};
