//! Analysis of propositional disjunctive logic programs: dependency graphs
//! and head-cycle-freeness, outbound and elementary sets, the
//! head-elementary-set-free (HEF) decision procedure with checkable
//! certificates, stable models, shifting, and a reduction from 3-SAT.
//!
//! ```
//! use hefcheck::{is_hef, parse_program, HefStatus, Limits};
//!
//! let p = parse_program("b | c :- a.\nb :- c.\nc :- b.\na :- b.\nd :- b, c.").unwrap();
//! let verdict = is_hef(&p, &Limits::default());
//! assert_eq!(verdict.status, HefStatus::NotHef);
//! ```

pub mod atoms;
pub mod depgraph;
pub mod elementary;
pub mod hef;
pub mod program;
pub mod reduction;
pub mod semantics;
pub mod text;

pub use atoms::{Atom, AtomSet, MAX_ATOM_CAPACITY};
pub use depgraph::{is_hcf, DepGraph, HcfVerdict};
pub use elementary::{
    is_elementary_bruteforce, is_elementary_poly, is_outbound, verify_witness, ElementaryError,
    ElementaryVerdict, OutboundEvidence, WitnessCheck,
};
pub use hef::{
    extract_witness, is_hef, is_hef_with, verify_certificate, HefCertificate, HefStatus,
    HefVerdict, Limits, SearchOptions, SearchStats,
};
pub use program::{AtomTable, ModelError, Program, ProgramBuilder, Rule};
pub use semantics::{is_model, reduct, shift, stable_models, Interpretation};
pub use text::{parse_dimacs, parse_program, render_program, Cnf3};
