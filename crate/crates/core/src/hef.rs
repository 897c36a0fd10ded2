//! Deciding head-elementary-set-freeness, extracting nondisjunctive
//! witnesses and checking certificates.
//!
//! A program is not HEF iff some set is both disjunctive and elementary.
//! The search walks candidate sets in a fixed order:
//!
//! 1. programs without disjunctive rules, and head-cycle-free programs,
//!    are HEF outright;
//! 2. for every component of the dependency graph (by number) and every
//!    rule (by position) with two or more head atoms in it, subsets of the
//!    component holding two of those head atoms are enumerated by size and
//!    then by bitmask;
//! 3. candidates whose induced subgraph is not strongly connected, or that
//!    miss an atom's single-head or single-body support rule, are dropped;
//! 4. the survivors are decided by brute force.
//!
//! Elementary checks run in parallel in ordered batches; the verdict and
//! the reported statistics are those of the sequential scan.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::atoms::{AtomSet, MAX_ATOM_CAPACITY};
use crate::depgraph::{is_hcf, DepGraph};
use crate::elementary::{
    is_elementary_bruteforce, passes_support_pruning, verify_witness, ElementaryError,
    ElementaryVerdict, WitnessCheck, DEFAULT_SUBSET_CAP,
};
use crate::program::{Program, Rule};

pub const DEFAULT_MAX_ATOMS: usize = 64;

const BATCH: usize = 256;
const DEADLINE_POLL: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Programs with more atoms are refused (at most [`MAX_ATOM_CAPACITY`]).
    pub max_atoms: usize,
    /// Largest set handed to the brute-force elementary check.
    pub max_subset: usize,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_atoms: DEFAULT_MAX_ATOMS,
            max_subset: DEFAULT_SUBSET_CAP,
            deadline: None,
        }
    }
}

impl Limits {
    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Which necessary conditions the search may use to skip candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Head-cycle-free shortcut, per-component candidates and induced
    /// strong connectivity.
    pub connectivity: bool,
    /// Single-head / single-body support rules for every atom.
    pub support: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            connectivity: true,
            support: true,
        }
    }
}

impl SearchOptions {
    pub fn unpruned() -> Self {
        SearchOptions {
            connectivity: false,
            support: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HefStatus {
    Hef,
    NotHef,
    ResourceLimit,
}

impl HefStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            HefStatus::Hef => "hef",
            HefStatus::NotHef => "not_hef",
            HefStatus::ResourceLimit => "resource_limit",
        }
    }
}

/// Evidence that a program is not HEF: `elementary_set` meets the head of
/// `violating_rule` in two or more atoms and is elementary for the
/// nondisjunctive `witness`, whose rules are projections of the program's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HefCertificate {
    pub elementary_set: AtomSet,
    pub witness: Program,
    pub violating_rule: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub candidates: u64,
    pub pruned_connectivity: u64,
    pub pruned_support: u64,
    pub elementary_checks: u64,
}

#[derive(Debug, Clone)]
pub struct HefVerdict {
    pub status: HefStatus,
    pub certificate: Option<HefCertificate>,
    pub stats: SearchStats,
    /// Which limit was hit, for `ResourceLimit`.
    pub limit: Option<String>,
}

impl HefVerdict {
    fn hef(stats: SearchStats) -> Self {
        HefVerdict {
            status: HefStatus::Hef,
            certificate: None,
            stats,
            limit: None,
        }
    }

    fn limit(stats: SearchStats, why: impl Into<String>) -> Self {
        HefVerdict {
            status: HefStatus::ResourceLimit,
            certificate: None,
            stats,
            limit: Some(why.into()),
        }
    }
}

/// `k`-subsets of `0..n` in ascending bitmask order, as index lists.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // Colexicographic successor: bump the lowest position that can move.
        let mut i = 0;
        while i < k {
            let bound = if i + 1 < k { next[i + 1] } else { self.n };
            if next[i] + 1 < bound {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                self.current = Some(next);
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

/// Decides HEF with every pruning enabled.
pub fn is_hef(program: &Program, limits: &Limits) -> HefVerdict {
    is_hef_with(program, limits, SearchOptions::default())
}

pub fn is_hef_with(program: &Program, limits: &Limits, options: SearchOptions) -> HefVerdict {
    let mut stats = SearchStats::default();
    let max_atoms = limits.max_atoms.min(MAX_ATOM_CAPACITY);
    if program.atom_count() > max_atoms {
        return HefVerdict::limit(
            stats,
            format!(
                "program has {} atoms, above the cap of {max_atoms}",
                program.atom_count()
            ),
        );
    }
    if !program.is_disjunctive() {
        return HefVerdict::hef(stats);
    }

    let mut groups: Vec<(AtomSet, usize)> = Vec::new();
    let graph;
    if options.connectivity {
        if is_hcf(program).is_hcf() {
            return HefVerdict::hef(stats);
        }
        graph = Some(DepGraph::build(program));
        for component in graph.as_ref().expect("just built").sccs() {
            if component.len() < 2 {
                continue;
            }
            for (i, rule) in program.rules().iter().enumerate() {
                if rule.head.intersection_len(component) >= 2 {
                    groups.push((component.clone(), i));
                }
            }
        }
    } else {
        graph = None;
        for (i, rule) in program.rules().iter().enumerate() {
            if rule.is_disjunctive() {
                groups.push((program.all_atoms(), i));
            }
        }
    }

    let mut search = Search {
        program,
        limits,
        options,
        graph: graph.as_ref(),
        stats,
        batch: Vec::with_capacity(BATCH),
    };
    match search.run(&groups) {
        Ok(Some(y)) => {
            stats = search.stats;
            match extract_witness(&y, program, limits.max_subset) {
                Ok(witness) => {
                    let violating_rule = program
                        .first_disjunctive_rule_for(&witness.set)
                        .expect("witness sets are disjunctive");
                    HefVerdict {
                        status: HefStatus::NotHef,
                        certificate: Some(HefCertificate {
                            elementary_set: witness.set,
                            witness: witness.program,
                            violating_rule,
                        }),
                        stats,
                        limit: None,
                    }
                }
                Err(WitnessError::Elementary(err)) => HefVerdict::limit(stats, err.to_string()),
                Err(err) => unreachable!("search produced an invalid candidate: {err}"),
            }
        }
        Ok(None) => HefVerdict::hef(search.stats),
        Err(why) => HefVerdict::limit(search.stats, why),
    }
}

struct Search<'a> {
    program: &'a Program,
    limits: &'a Limits,
    options: SearchOptions,
    graph: Option<&'a DepGraph>,
    stats: SearchStats,
    /// Pending survivors with the statistics as of their enumeration.
    batch: Vec<(AtomSet, SearchStats)>,
}

impl Search<'_> {
    fn run(&mut self, groups: &[(AtomSet, usize)]) -> Result<Option<AtomSet>, String> {
        for (universe, rule) in groups {
            let members: Vec<_> = universe.iter().collect();
            let head = &self.program.rule(*rule).head;
            for size in 2..=members.len() {
                for combo in Combinations::new(members.len(), size) {
                    if combo.iter().filter(|&&i| head.contains(members[i])).count() < 2 {
                        continue;
                    }
                    self.stats.candidates += 1;
                    if self.stats.candidates.is_multiple_of(DEADLINE_POLL) && self.limits.expired()
                    {
                        return Err("time budget exhausted".into());
                    }
                    let y: AtomSet = combo.iter().map(|&i| members[i]).collect();
                    if let Some(graph) = self.graph {
                        if !graph.induced_strongly_connected(&y) {
                            self.stats.pruned_connectivity += 1;
                            continue;
                        }
                    }
                    if self.options.support && !passes_support_pruning(&y, self.program) {
                        self.stats.pruned_support += 1;
                        continue;
                    }
                    if size > self.limits.max_subset {
                        return Err(format!(
                            "candidate of {size} atoms exceeds the subset cap of {}",
                            self.limits.max_subset
                        ));
                    }
                    self.batch.push((y, self.stats));
                    if self.batch.len() == BATCH {
                        if let Some(found) = self.flush()? {
                            return Ok(Some(found));
                        }
                    }
                }
                if let Some(found) = self.flush()? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }

    /// Decides the pending batch; returns its first elementary member.
    fn flush(&mut self) -> Result<Option<AtomSet>, String> {
        if self.batch.is_empty() {
            return Ok(None);
        }
        if self.limits.expired() {
            return Err("time budget exhausted".into());
        }
        let program = self.program;
        let cap = self.limits.max_subset;
        let verdicts: Vec<Result<ElementaryVerdict, ElementaryError>> = self
            .batch
            .par_iter()
            .map(|(y, _)| is_elementary_bruteforce(y, program, cap))
            .collect();
        let checks_before = self.stats.elementary_checks;
        for (i, verdict) in verdicts.into_iter().enumerate() {
            match verdict {
                Ok(ElementaryVerdict::Elementary) => {
                    let (y, snapshot) = self.batch.swap_remove(i);
                    self.batch.clear();
                    self.stats = SearchStats {
                        elementary_checks: checks_before + i as u64 + 1,
                        ..snapshot
                    };
                    return Ok(Some(y));
                }
                Ok(ElementaryVerdict::NotElementary { .. }) => {}
                Err(err) => return Err(err.to_string()),
            }
        }
        self.stats.elementary_checks += self.batch.len() as u64;
        self.batch.clear();
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the set is not elementary for the program")]
    NotElementary,
    #[error("the set is not disjunctive for the program")]
    NotDisjunctive,
    #[error(transparent)]
    Elementary(#[from] ElementaryError),
}

/// A set together with a witness program for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub set: AtomSet,
    pub program: Program,
}

fn disjunctive_count(rules: &[Rule]) -> usize {
    rules.iter().filter(|r| r.is_disjunctive()).count()
}

/// Shrinks `(E, P_E)` to a disjunctive set with a nondisjunctive witness.
///
/// While the witness still has a disjunctive rule, that rule is dropped if
/// the set stays elementary without it. Otherwise the set is replaced by
/// the minimal subset that is no longer outbound (it contains the rule's
/// projected head, so it is still disjunctive) and the witness by the
/// projections onto it of the remaining rules whose head and body both
/// meet it. Each round removes at least one disjunctive rule.
pub fn extract_witness(
    e: &AtomSet,
    program: &Program,
    cap: usize,
) -> Result<Witness, WitnessError> {
    if !program.is_disjunctive_set(e) {
        return Err(WitnessError::NotDisjunctive);
    }
    if !is_elementary_bruteforce(e, program, cap)?.is_elementary() {
        return Err(WitnessError::NotElementary);
    }
    let mut set = e.clone();
    let mut rules: Vec<Rule> = program.project(e).rules().to_vec();
    while let Some(pos) = rules.iter().position(Rule::is_disjunctive) {
        let before = disjunctive_count(&rules);
        let dropped = rules.remove(pos);
        let reduced = program.with_rules(rules);
        match is_elementary_bruteforce(&set, &reduced, cap)? {
            ElementaryVerdict::Elementary => {}
            ElementaryVerdict::NotElementary { subset } => {
                debug_assert!(dropped.head.is_subset(&subset));
                debug_assert!(dropped.pos_body.is_disjoint(&subset));
                let projected = reduced
                    .rules()
                    .iter()
                    .filter(|r| r.head.intersects(&subset) && r.pos_body.intersects(&subset))
                    .filter_map(|r| r.project(&subset))
                    .collect();
                set = subset;
                rules = projected;
                assert!(
                    disjunctive_count(&rules) < before,
                    "witness extraction must remove a disjunctive rule each round"
                );
                continue;
            }
        }
        rules = reduced.rules().to_vec();
        assert!(
            disjunctive_count(&rules) < before,
            "witness extraction must remove a disjunctive rule each round"
        );
    }
    Ok(Witness {
        set,
        program: program.with_rules(rules),
    })
}

/// The polynomial-time certificate check.
pub fn verify_certificate(program: &Program, cert: &HefCertificate) -> WitnessCheck {
    let reject = |reason: String| WitnessCheck {
        valid: false,
        reason: Some(reason),
    };
    let Some(rule) = program.rules().get(cert.violating_rule) else {
        return reject(format!("rule {} does not exist", cert.violating_rule));
    };
    if rule.head.intersection_len(&cert.elementary_set) < 2 {
        return reject(format!(
            "the set meets the head of rule {} in fewer than two atoms",
            cert.violating_rule
        ));
    }
    if let Some(i) = cert.witness.rules().iter().position(Rule::is_disjunctive) {
        return reject(format!("witness rule {i} is disjunctive"));
    }
    verify_witness(&cert.elementary_set, &cert.witness, program)
}
