//! Outbound and elementary sets.
//!
//! [`is_elementary_bruteforce`] follows the definition literally and is the
//! ground truth. [`is_elementary_poly`] is the elementary-subgraph fixpoint
//! for nondisjunctive programs and is only trusted because it agrees with
//! the brute force on the oracle suites.

use std::collections::HashSet;

use thiserror::Error;

use crate::atoms::{proper_subsets_by_size, Atom, AtomSet};
use crate::depgraph::tarjan;
use crate::program::{Program, Rule};

/// Default ceiling on `|Y|` for subset enumeration.
pub const DEFAULT_SUBSET_CAP: usize = 20;

/// Local masks are `u64`, so no cap can exceed this.
const MAX_SUBSET_CAP: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementaryError {
    #[error("Z must be a nonempty proper subset of Y")]
    BadSubset,
    #[error("elementary sets are nonempty")]
    EmptySet,
    #[error("set of {size} atoms exceeds the subset cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("the polynomial check needs a nondisjunctive program")]
    DisjunctiveInput,
}

/// `Z` together with the first rule that makes it outbound in `Y`, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutboundEvidence {
    pub subset: AtomSet,
    pub rule: Option<usize>,
}

impl OutboundEvidence {
    pub fn is_outbound(&self) -> bool {
        self.rule.is_some()
    }
}

fn separates(rule: &Rule, z: &AtomSet, rest: &AtomSet) -> bool {
    rule.head.intersects(z)
        && rule.pos_body.intersects(rest)
        && rule.pos_body.is_disjoint(z)
        && rule.head.is_disjoint(rest)
}

/// Whether `z` is outbound in `y`: some rule has a head atom in `Z`, a body
/// atom in `Y \ Z`, no body atom in `Z` and no head atom in `Y \ Z`.
pub fn is_outbound(
    z: &AtomSet,
    y: &AtomSet,
    program: &Program,
) -> Result<OutboundEvidence, ElementaryError> {
    if z.is_empty() || !z.is_subset(y) || z == y {
        return Err(ElementaryError::BadSubset);
    }
    let rest = y.difference(z);
    Ok(OutboundEvidence {
        subset: z.clone(),
        rule: program.rules().iter().position(|r| separates(r, z, &rest)),
    })
}

/// The same test phrased over the projection `P_Y`: some projected rule has
/// `∅ ⊂ H' ⊆ Z` and `∅ ⊂ B' ⊆ Y \ Z`.
pub fn is_outbound_projected(
    z: &AtomSet,
    y: &AtomSet,
    program: &Program,
) -> Result<bool, ElementaryError> {
    if z.is_empty() || !z.is_subset(y) || z == y {
        return Err(ElementaryError::BadSubset);
    }
    let rest = y.difference(z);
    Ok(program
        .project(y)
        .rules()
        .iter()
        .any(|r| r.head.is_subset(z) && r.pos_body.is_subset(&rest)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryVerdict {
    Elementary,
    /// The first nonempty proper subset, in size-then-bitmask order, that
    /// is not outbound. It is minimal under inclusion.
    NotElementary {
        subset: AtomSet,
    },
}

impl ElementaryVerdict {
    pub fn is_elementary(&self) -> bool {
        matches!(self, ElementaryVerdict::Elementary)
    }
}

/// Rules restricted to `Y`, in local coordinates (bit `i` = `i`-th member of
/// `Y` in id order). Definition 1 only inspects `H ∩ Y` and `B ∩ Y`.
struct LocalRules {
    members: Vec<Atom>,
    rules: Vec<(u64, u64)>,
}

impl LocalRules {
    fn new(y: &AtomSet, program: &Program) -> Self {
        let members: Vec<Atom> = y.iter().collect();
        let local = |set: &AtomSet| -> u64 {
            members
                .iter()
                .enumerate()
                .filter(|(_, a)| set.contains(**a))
                .fold(0, |m, (i, _)| m | 1 << i)
        };
        let mut rules = Vec::new();
        for rule in program.rules() {
            let (h, b) = (local(&rule.head), local(&rule.pos_body));
            if h != 0 && b != 0 {
                rules.push((h, b));
            }
        }
        LocalRules { members, rules }
    }

    fn outbound(&self, z: u64, full: u64) -> bool {
        let rest = full & !z;
        self.rules
            .iter()
            .any(|&(h, b)| h & z != 0 && b & rest != 0 && b & z == 0 && h & rest == 0)
    }

    fn to_set(&self, mask: u64) -> AtomSet {
        self.members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| *a)
            .collect()
    }
}

/// Decides elementarity by checking every nonempty proper subset.
pub fn is_elementary_bruteforce(
    y: &AtomSet,
    program: &Program,
    cap: usize,
) -> Result<ElementaryVerdict, ElementaryError> {
    if y.is_empty() {
        return Err(ElementaryError::EmptySet);
    }
    let cap = cap.min(MAX_SUBSET_CAP);
    let k = y.len();
    if k > cap {
        return Err(ElementaryError::CapExceeded { size: k, cap });
    }
    let local = LocalRules::new(y, program);
    let full = (1u64 << k) - 1;
    for z in proper_subsets_by_size(k) {
        if !local.outbound(z, full) {
            return Ok(ElementaryVerdict::NotElementary {
                subset: local.to_set(z),
            });
        }
    }
    Ok(ElementaryVerdict::Elementary)
}

/// Elementarity for nondisjunctive programs in polynomial time.
///
/// Builds the elementary subgraph of `Y`: starting from no edges, a rule
/// `a :- B` with `a ∈ Y` contributes edges from `a` to every atom of
/// `B ∩ Y` once `B ∩ Y` is nonempty and lies inside one strongly connected
/// component of the edges collected so far. `Y` is elementary iff the
/// fixpoint graph is strongly connected.
pub fn is_elementary_poly(y: &AtomSet, program: &Program) -> Result<bool, ElementaryError> {
    if program.is_disjunctive() {
        return Err(ElementaryError::DisjunctiveInput);
    }
    if y.is_empty() {
        return Err(ElementaryError::EmptySet);
    }
    let members: Vec<Atom> = y.iter().collect();
    let k = members.len();
    if k == 1 {
        return Ok(true);
    }
    let position = |a: Atom| members.binary_search(&a).ok();
    let rules: Vec<(usize, Vec<usize>)> = program
        .rules()
        .iter()
        .filter_map(|r| {
            let head = position(r.head.first()?)?;
            let body: Vec<usize> = r.pos_body.iter().filter_map(position).collect();
            (!body.is_empty()).then_some((head, body))
        })
        .collect();

    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut comp = vec![0usize; k];
    loop {
        let mut steps = 0;
        for (id, members) in tarjan(&edges, &mut steps).iter().enumerate() {
            for &v in members {
                comp[v] = id;
            }
        }
        let mut changed = false;
        for (head, body) in &rules {
            if body.iter().all(|&b| comp[b] == comp[body[0]]) {
                for &b in body {
                    if present.insert((*head, b)) {
                        edges[*head].push(b);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut steps = 0;
    Ok(tarjan(&edges, &mut steps).len() == 1)
}

/// Per-atom support conditions every elementary `Y` with `|Y| > 1` meets:
/// each `a ∈ Y` is the only `Y`-atom in the head of some rule whose body
/// meets `Y` without containing `a`, and the only `Y`-atom in the body of
/// some rule whose head meets `Y` without containing `a`.
pub fn support_conditions_hold(y: &AtomSet, program: &Program) -> bool {
    if y.len() <= 1 {
        return true;
    }
    let local = LocalRules::new(y, program);
    let mut head_ok = 0u64;
    let mut body_ok = 0u64;
    for &(h, b) in &local.rules {
        if h.count_ones() == 1 && b & h == 0 {
            head_ok |= h;
        }
        if b.count_ones() == 1 && b & h == 0 {
            body_ok |= b;
        }
    }
    let full = (1u64 << y.len()) - 1;
    head_ok == full && body_ok == full
}

/// Same as [`support_conditions_hold`] without the 63-atom local-mask limit.
fn support_conditions_hold_wide(y: &AtomSet, program: &Program) -> bool {
    y.iter().all(|a| {
        let rules = program.rules();
        let single_head = rules.iter().any(|r| {
            !r.pos_body.contains(a)
                && r.pos_body.intersects(y)
                && r.head.intersection_len(y) == 1
                && r.head.contains(a)
        });
        let single_body = rules.iter().any(|r| {
            !r.head.contains(a)
                && r.head.intersects(y)
                && r.pos_body.intersection_len(y) == 1
                && r.pos_body.contains(a)
        });
        single_head && single_body
    })
}

/// Per-atom support pruning test usable for any `|Y|`.
pub fn passes_support_pruning(y: &AtomSet, program: &Program) -> bool {
    if y.len() <= MAX_SUBSET_CAP {
        support_conditions_hold(y, program)
    } else {
        support_conditions_hold_wide(y, program)
    }
}

/// Result of checking a candidate witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCheck {
    pub valid: bool,
    pub reason: Option<String>,
}

impl WitnessCheck {
    fn ok() -> Self {
        WitnessCheck {
            valid: true,
            reason: None,
        }
    }

    fn reject(reason: impl Into<String>) -> Self {
        WitnessCheck {
            valid: false,
            reason: Some(reason.into()),
        }
    }
}

/// Checks that `witness` consists of projections of `program`'s rules on
/// `e` and that `e` is elementary for `witness`. Together these imply that
/// `e` is elementary for `program`.
pub fn verify_witness(e: &AtomSet, witness: &Program, program: &Program) -> WitnessCheck {
    if e.is_empty() {
        return WitnessCheck::reject("the set is empty");
    }
    if !e.iter().all(|a| a.index() < program.atom_count()) {
        return WitnessCheck::reject("the set mentions atoms outside the program");
    }
    if witness.table() != program.table() {
        return WitnessCheck::reject("the witness uses a different atom table");
    }
    let projection = program.project(e);
    let projected: HashSet<&Rule> = projection.rules().iter().collect();
    for (i, rule) in witness.rules().iter().enumerate() {
        if !projected.contains(rule) {
            return WitnessCheck::reject(format!(
                "witness rule {i} (`{}`) is not the projection of a program rule on the set",
                crate::text::render_rule(witness, rule)
            ));
        }
    }
    let elementary = if witness.is_disjunctive() {
        match is_elementary_bruteforce(e, witness, DEFAULT_SUBSET_CAP) {
            Ok(v) => v.is_elementary(),
            Err(err) => return WitnessCheck::reject(format!("cannot decide elementarity: {err}")),
        }
    } else {
        is_elementary_poly(e, witness).expect("witness is nondisjunctive and the set nonempty")
    };
    if elementary {
        WitnessCheck::ok()
    } else {
        WitnessCheck::reject("the set is not elementary for the witness")
    }
}
