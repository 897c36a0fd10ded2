//! Stable models by exhaustive search, and the shifting transformation.

use rayon::prelude::*;
use thiserror::Error;

use crate::atoms::AtomSet;
use crate::program::{Program, Rule};

/// Default ceiling on the atom count for [`stable_models`].
pub const DEFAULT_MODEL_CAP: usize = 20;

const MAX_MODEL_CAP: usize = 30;

pub type Interpretation = AtomSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("program has {atoms} atoms, above the cap of {cap}")]
    CapExceeded { atoms: usize, cap: usize },
}

/// Drops every rule with a negated body atom in `i` and strips the negated
/// bodies of the rest.
pub fn reduct(program: &Program, i: &Interpretation) -> Program {
    let rules = program
        .rules()
        .iter()
        .filter(|r| r.neg_body.is_disjoint(i))
        .map(|r| Rule::positive(r.head.clone(), r.pos_body.clone()))
        .collect();
    program.with_rules(rules)
}

/// Every rule has a head atom in `i` or a body literal false in `i`.
pub fn is_model(program: &Program, i: &Interpretation) -> bool {
    program
        .rules()
        .iter()
        .all(|r| r.head.intersects(i) || !r.pos_body.is_subset(i) || r.neg_body.intersects(i))
}

#[derive(Clone, Copy)]
struct MaskRule {
    head: u64,
    pos: u64,
    neg: u64,
}

fn mask(set: &AtomSet) -> u64 {
    set.as_mask().expect("atom count checked against the cap")
}

fn satisfies(rules: &[MaskRule], i: u64) -> bool {
    rules.iter().all(|r| r.head & i != 0 || r.pos & !i != 0)
}

/// All stable models in ascending bitmask order.
pub fn stable_models(program: &Program, cap: usize) -> Result<Vec<Interpretation>, SemanticsError> {
    let atoms = program.atom_count();
    let cap = cap.min(MAX_MODEL_CAP);
    if atoms > cap {
        return Err(SemanticsError::CapExceeded { atoms, cap });
    }
    let rules: Vec<MaskRule> = program
        .rules()
        .iter()
        .map(|r| MaskRule {
            head: mask(&r.head),
            pos: mask(&r.pos_body),
            neg: mask(&r.neg_body),
        })
        .collect();
    let is_stable = |i: u64| {
        let reduct: Vec<MaskRule> = rules.iter().filter(|r| r.neg & i == 0).copied().collect();
        if !satisfies(&reduct, i) {
            return false;
        }
        // Every proper submask of i, largest first.
        let mut j = i;
        while j != 0 {
            j = (j - 1) & i;
            if satisfies(&reduct, j) {
                return false;
            }
        }
        true
    };
    Ok((0..1u64 << atoms)
        .into_par_iter()
        .filter(|&i| is_stable(i))
        .map(AtomSet::from_mask)
        .collect())
}

/// Replaces each disjunctive rule by one rule per head atom, moving the
/// other head atoms into the negated body.
pub fn shift(program: &Program) -> Program {
    let mut rules = Vec::with_capacity(program.len());
    for rule in program.rules() {
        if !rule.is_disjunctive() {
            rules.push(rule.clone());
            continue;
        }
        for h in rule.head.iter() {
            let mut rest = rule.head.clone();
            rest.remove(h);
            rules.push(Rule::new(
                AtomSet::singleton(h),
                rule.pos_body.clone(),
                rule.neg_body.union(&rest),
            ));
        }
    }
    program.with_rules(rules)
}
