#![allow(dead_code)]

use hefcheck::{is_elementary_bruteforce, AtomSet, Program, ProgramBuilder};
use proptest::prelude::*;

/// `(head, positive body, negative body)` as bitmasks over `x0..x{n-1}`.
pub type MaskRule = (u32, u32, u32);

pub fn build(rules: &[MaskRule]) -> Program {
    let names = |mask: u32| -> Vec<String> {
        (0..32)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| format!("x{i}"))
            .collect()
    };
    let mut b = ProgramBuilder::new();
    for &(h, p, n) in rules {
        b.rule(&names(h), &names(p), &names(n)).unwrap();
    }
    b.build()
}

fn rule(atoms: usize, negation: bool, max_head: usize) -> impl Strategy<Value = MaskRule> {
    let full = (1u32 << atoms) - 1;
    let head = (1..=full).prop_filter("head size", move |h| h.count_ones() as usize <= max_head);
    let neg = if negation {
        (0..=full).boxed()
    } else {
        Just(0).boxed()
    };
    (head, 0..=full, neg, any::<bool>())
        // Keep negation sparse so stable models stay interesting.
        .prop_map(|(h, p, n, keep)| (h, p, if keep { n & !p } else { 0 }))
}

/// Random programs over at most `max_atoms` atoms.
pub fn programs(
    max_atoms: usize,
    max_rules: usize,
    negation: bool,
) -> impl Strategy<Value = Program> {
    (1..=max_atoms).prop_flat_map(move |n| {
        prop::collection::vec(rule(n, negation, n), 0..=max_rules).prop_map(|rs| build(&rs))
    })
}

/// Random programs whose rules all have singleton heads.
pub fn nondisjunctive_programs(
    max_atoms: usize,
    max_rules: usize,
) -> impl Strategy<Value = Program> {
    (1..=max_atoms).prop_flat_map(move |n| {
        prop::collection::vec(rule(n, false, 1), 0..=max_rules).prop_map(|rs| build(&rs))
    })
}

pub fn subsets(n: usize) -> impl Iterator<Item = AtomSet> {
    (1u64..1 << n).map(AtomSet::from_mask)
}

pub fn elementary(y: &AtomSet, p: &Program) -> bool {
    is_elementary_bruteforce(y, p, 20).unwrap().is_elementary()
}

/// Not HEF by definition: some set is disjunctive and elementary.
pub fn definitionally_not_hef(p: &Program) -> bool {
    subsets(p.atom_count()).any(|y| p.is_disjunctive_set(&y) && elementary(&y, p))
}
