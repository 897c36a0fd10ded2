//! The program built from a 3-CNF formula that is not HEF exactly when the
//! formula is satisfiable, plus a brute-force SAT oracle to check it against.

use serde::Serialize;
use thiserror::Error;

use crate::atoms::{Atom, AtomSet};
use crate::elementary::is_elementary_bruteforce;
use crate::hef::{is_hef, verify_certificate, HefStatus, Limits};
use crate::program::{Program, ProgramBuilder};
use crate::text::Cnf3;

/// Default ceiling on the variable count for [`sat_bruteforce`].
pub const DEFAULT_SAT_CAP: usize = 24;

const MAX_SAT_CAP: usize = 63;

/// Atoms of the reduction program: `phi`, `c0..c{n+1}`, `a1..am`, `na1..nam`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionAtoms {
    pub phi: Atom,
    /// `c[0..=n+1]`.
    pub c: Vec<Atom>,
    /// `a[i]` stands for variable `i + 1` being true.
    pub a: Vec<Atom>,
    /// `na[i]` stands for variable `i + 1` being false.
    pub na: Vec<Atom>,
}

impl ReductionAtoms {
    /// The atom for a DIMACS literal: `a_j` for `j`, `na_j` for `-j`.
    pub fn literal_atom(&self, literal: i32) -> Atom {
        let j = literal.unsigned_abs() as usize - 1;
        if literal > 0 {
            self.a[j]
        } else {
            self.na[j]
        }
    }

    /// `na_i` for `a_i` and vice versa.
    pub fn opposite(&self, atom: Atom) -> Option<Atom> {
        if let Some(i) = self.a.iter().position(|&x| x == atom) {
            Some(self.na[i])
        } else {
            self.na.iter().position(|&x| x == atom).map(|i| self.a[i])
        }
    }

    /// Atoms of the clause's literals.
    pub fn clause_atoms(&self, clause: &[i32; 3]) -> AtomSet {
        clause.iter().map(|&l| self.literal_atom(l)).collect()
    }

    /// Opposites of the clause's literal atoms.
    pub fn clause_opposites(&self, clause: &[i32; 3]) -> AtomSet {
        clause.iter().map(|&l| self.literal_atom(-l)).collect()
    }
}

/// Builds the reduction program. Rules come in this order:
///
/// 1. `c0 | c{n+1} :- phi.`
/// 2. `c1 :- c0.`
/// 3. `c{i+1} :- c{i}, x.` for every clause `i` and every opposite `x` of
///    one of its literals
/// 4. `a1 :- c{n+1}, na1.`
/// 5. `na1 :- c{n+1}, a1.`
/// 6. to 9. for `i` in `1..m`: `a{i+1} :- a{i}, na{i+1}.`,
///    `na{i+1} :- a{i}, a{i+1}.`, `a{i+1} :- na{i}, na{i+1}.`,
///    `na{i+1} :- na{i}, a{i+1}.`
/// 10. `c0 :- a{m}, na{m}.`
///
/// Atom ids follow first appearance, so rendering and reparsing the result
/// gives back the same program.
pub fn build_reduction(formula: &Cnf3) -> (Program, ReductionAtoms) {
    let n = formula.clauses().len();
    let m = formula.num_vars();
    let c = |i: usize| format!("c{i}");
    let a = |i: usize| format!("a{i}");
    let na = |i: usize| format!("na{i}");
    let lit = |l: i32| {
        let j = l.unsigned_abs() as usize;
        if l > 0 {
            a(j)
        } else {
            na(j)
        }
    };

    let mut b = ProgramBuilder::new();
    let mut rule = |head: &[String], body: &[String]| {
        b.rule(head, body, &[] as &[String])
            .expect("generated names are valid");
    };
    rule(&[c(0), c(n + 1)], &["phi".into()]);
    rule(&[c(1)], &[c(0)]);
    for (i, clause) in formula.clauses().iter().enumerate() {
        let i = i + 1;
        for &l in clause {
            rule(&[c(i + 1)], &[c(i), lit(-l)]);
        }
    }
    rule(&[a(1)], &[c(n + 1), na(1)]);
    rule(&[na(1)], &[c(n + 1), a(1)]);
    for i in 1..m {
        rule(&[a(i + 1)], &[a(i), na(i + 1)]);
        rule(&[na(i + 1)], &[a(i), a(i + 1)]);
        rule(&[a(i + 1)], &[na(i), na(i + 1)]);
        rule(&[na(i + 1)], &[na(i), a(i + 1)]);
    }
    rule(&[c(0)], &[a(m), na(m)]);
    let program = b.build();

    let get = |name: String| program.atom(&name).expect("every atom occurs in a rule");
    let atoms = ReductionAtoms {
        phi: get("phi".into()),
        c: (0..=n + 1).map(|i| get(c(i))).collect(),
        a: (1..=m).map(|i| get(a(i))).collect(),
        na: (1..=m).map(|i| get(na(i))).collect(),
    };
    (program, atoms)
}

/// A total truth assignment; `values[i]` is the value of variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    /// Variable 1 is the most significant bit of `bits`.
    pub fn from_bits(bits: u64, num_vars: usize) -> Self {
        Assignment(
            (0..num_vars)
                .map(|i| bits >> (num_vars - 1 - i) & 1 == 1)
                .collect(),
        )
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn satisfies_literal(&self, literal: i32) -> bool {
        self.value(literal.unsigned_abs() as usize) == (literal > 0)
    }
}

pub fn satisfies(formula: &Cnf3, x: &Assignment) -> bool {
    formula
        .clauses()
        .iter()
        .all(|c| c.iter().any(|&l| x.satisfies_literal(l)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("formula has {vars} variables, above the cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },
}

/// The first satisfying assignment in ascending bitmask order (false before
/// true, variable 1 most significant), or `None` if unsatisfiable.
pub fn sat_bruteforce(formula: &Cnf3, cap: usize) -> Result<Option<Assignment>, ReductionError> {
    let vars = formula.num_vars();
    let cap = cap.min(MAX_SAT_CAP);
    if vars > cap {
        return Err(ReductionError::CapExceeded { vars, cap });
    }
    Ok((0..1u64 << vars)
        .map(|bits| Assignment::from_bits(bits, vars))
        .find(|x| satisfies(formula, x)))
}

/// All `c` atoms plus `a_i` for true and `na_i` for false variables.
pub fn assignment_set(x: &Assignment, atoms: &ReductionAtoms) -> AtomSet {
    let mut set: AtomSet = atoms.c.iter().copied().collect();
    for (i, &v) in x.0.iter().enumerate() {
        set.insert(if v { atoms.a[i] } else { atoms.na[i] });
    }
    set
}

/// For every clause, some opposite of one of its literals lies outside `e`.
/// For sets of the shape [`assignment_set`] this is equivalent to being
/// elementary for the reduction program.
pub fn opposites_condition_holds(formula: &Cnf3, atoms: &ReductionAtoms, e: &AtomSet) -> bool {
    formula
        .clauses()
        .iter()
        .all(|c| !atoms.clause_opposites(c).is_subset(e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossVerdict {
    Consistent,
    Mismatch,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub atoms: usize,
    pub rules: usize,
    pub satisfiable: Option<bool>,
    pub model: Option<Vec<bool>>,
    pub hef_status: HefStatus,
    /// Whether the set built from the model is elementary.
    pub model_set_elementary: Option<bool>,
    pub certificate_verifies: Option<bool>,
    pub verdict: CrossVerdict,
    pub note: Option<String>,
}

/// Checks satisfiability against non-HEF-ness of the reduction program and,
/// for satisfiable formulas, that the model's set is elementary and the
/// emitted certificate verifies.
pub fn cross_validate(formula: &Cnf3, limits: &Limits) -> CrossValidation {
    let (program, atoms) = build_reduction(formula);
    let sat = sat_bruteforce(formula, DEFAULT_SAT_CAP);
    let verdict = is_hef(&program, limits);
    let mut report = CrossValidation {
        num_vars: formula.num_vars(),
        num_clauses: formula.clauses().len(),
        atoms: program.atom_count(),
        rules: program.len(),
        satisfiable: None,
        model: None,
        hef_status: verdict.status,
        model_set_elementary: None,
        certificate_verifies: None,
        verdict: CrossVerdict::Inconclusive,
        note: None,
    };
    let model = match sat {
        Ok(model) => model,
        Err(err) => {
            report.note = Some(err.to_string());
            return report;
        }
    };
    report.satisfiable = Some(model.is_some());
    if let Some(x) = &model {
        report.model = Some(x.0.clone());
        let e = assignment_set(x, &atoms);
        match is_elementary_bruteforce(&e, &program, limits.max_subset) {
            Ok(v) => report.model_set_elementary = Some(v.is_elementary()),
            Err(err) => {
                report.note = Some(err.to_string());
                return report;
            }
        }
    }
    if let Some(cert) = &verdict.certificate {
        report.certificate_verifies = Some(verify_certificate(&program, cert).valid);
    }
    if verdict.status == HefStatus::ResourceLimit {
        report.note = verdict.limit;
        return report;
    }
    let agrees = model.is_some() == (verdict.status == HefStatus::NotHef);
    let extras = model.is_none()
        || (report.model_set_elementary == Some(true) && report.certificate_verifies == Some(true));
    report.verdict = if agrees && extras {
        CrossVerdict::Consistent
    } else {
        CrossVerdict::Mismatch
    };
    report
}
