//! Propositional disjunctive programs over interned atoms.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::atoms::{Atom, AtomSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("rule {0} has an empty head")]
    EmptyHead(usize),
    #[error("`{0}` is not a valid atom name")]
    BadAtomName(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
}

/// Checks `[a-z][A-Za-z0-9_]*`, with `not` reserved for negation.
pub fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    name != "not" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Bidirectional name/id map. Ids are dense and assigned in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Result<Atom, ModelError> {
        if let Some(&atom) = self.index.get(name) {
            return Ok(atom);
        }
        if !is_valid_atom_name(name) {
            return Err(ModelError::BadAtomName(name.to_string()));
        }
        let atom = Atom::new(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), atom);
        Ok(atom)
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.names.len()).map(Atom::new)
    }
}

/// `pos_body, not neg_body -> head`, with a disjunctive head.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: AtomSet,
    pub pos_body: AtomSet,
    pub neg_body: AtomSet,
}

impl Rule {
    pub fn new(head: AtomSet, pos_body: AtomSet, neg_body: AtomSet) -> Self {
        debug_assert!(!head.is_empty(), "rule heads are nonempty");
        Rule {
            head,
            pos_body,
            neg_body,
        }
    }

    pub fn positive(head: AtomSet, pos_body: AtomSet) -> Self {
        Self::new(head, pos_body, AtomSet::new())
    }

    pub fn is_disjunctive(&self) -> bool {
        self.head.len() > 1
    }

    pub fn atoms(&self) -> AtomSet {
        self.head.union(&self.pos_body).union(&self.neg_body)
    }

    /// Projection onto `x`: `B∩X -> H∩X` when both sides are nonempty.
    /// Negative bodies are dropped.
    pub fn project(&self, x: &AtomSet) -> Option<Rule> {
        let head = self.head.intersection(x);
        let body = self.pos_body.intersection(x);
        if head.is_empty() || body.is_empty() {
            None
        } else {
            Some(Rule::positive(head, body))
        }
    }
}

/// Raw, un-interned rule: `(head names, positive body names, negated names)`.
pub type RawRule<S> = (Vec<S>, Vec<S>, Vec<S>);

/// An ordered list of rules over a shared atom table.
///
/// Programs derived from another program (projections, reducts, rule
/// subsets) share the parent's table, so atom sets stay comparable.
#[derive(Clone)]
pub struct Program {
    table: Arc<AtomTable>,
    rules: Vec<Rule>,
}

impl Program {
    pub fn new(table: AtomTable, rules: Vec<Rule>) -> Self {
        let program = Program {
            table: Arc::new(table),
            rules,
        };
        debug_assert!(program
            .rules
            .iter()
            .all(|r| r.atoms().iter().all(|a| a.index() < program.table.len())));
        program
    }

    pub fn empty() -> Self {
        Self::new(AtomTable::new(), Vec::new())
    }

    /// Same atom table, different rules.
    pub fn with_rules(&self, rules: Vec<Rule>) -> Program {
        Program {
            table: Arc::clone(&self.table),
            rules,
        }
    }

    pub fn table(&self) -> &AtomTable {
        &self.table
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> &Rule {
        &self.rules[index]
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.table.len()
    }

    pub fn all_atoms(&self) -> AtomSet {
        self.table.atoms().collect()
    }

    /// Atoms that occur in at least one rule.
    pub fn occurring_atoms(&self) -> AtomSet {
        self.rules
            .iter()
            .fold(AtomSet::new(), |acc, r| acc.union(&r.atoms()))
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.table.get(name)
    }

    pub fn name(&self, atom: Atom) -> &str {
        self.table.name(atom)
    }

    /// Resolves a list of names against this program's table.
    pub fn atom_set<S: AsRef<str>>(&self, names: &[S]) -> Result<AtomSet, ModelError> {
        names
            .iter()
            .map(|n| {
                self.atom(n.as_ref())
                    .ok_or_else(|| ModelError::UnknownAtom(n.as_ref().to_string()))
            })
            .collect()
    }

    /// Member names in ascending id order.
    pub fn names(&self, set: &AtomSet) -> Vec<String> {
        set.iter().map(|a| self.name(a).to_string()).collect()
    }

    /// Member names sorted alphabetically.
    pub fn sorted_names(&self, set: &AtomSet) -> Vec<String> {
        let mut names = self.names(set);
        names.sort();
        names
    }

    /// `{a, b, c}` with names in ascending id order.
    pub fn display_set<'a>(&'a self, set: &'a AtomSet) -> impl fmt::Display + 'a {
        DisplaySet { program: self, set }
    }

    pub fn is_disjunctive(&self) -> bool {
        self.rules.iter().any(Rule::is_disjunctive)
    }

    /// True iff some rule's head meets `set` in more than one atom.
    pub fn is_disjunctive_set(&self, set: &AtomSet) -> bool {
        self.first_disjunctive_rule_for(set).is_some()
    }

    /// Index of the first rule with `|H ∩ set| > 1`.
    pub fn first_disjunctive_rule_for(&self, set: &AtomSet) -> Option<usize> {
        self.rules
            .iter()
            .position(|r| r.head.intersection_len(set) > 1)
    }

    /// Projection `P_X`. Rule order is inherited; the atom table is shared
    /// with `self`, so every atom of the result lies in `x`.
    pub fn project(&self, x: &AtomSet) -> Program {
        self.with_rules(self.rules.iter().filter_map(|r| r.project(x)).collect())
    }

    /// Rule-for-rule equality by atom names, independent of id numbering.
    pub fn same_rules(&self, other: &Program) -> bool {
        let names = |p: &Program, s: &AtomSet| {
            let mut v: Vec<String> = p.names(s);
            v.sort();
            v
        };
        self.rules.len() == other.rules.len()
            && self.rules.iter().zip(other.rules.iter()).all(|(a, b)| {
                names(self, &a.head) == names(other, &b.head)
                    && names(self, &a.pos_body) == names(other, &b.pos_body)
                    && names(self, &a.neg_body) == names(other, &b.neg_body)
            })
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
            && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}

impl Eq for Program {}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Program {{ {:?} }}", crate::text::render_program(self))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::render_program(self))
    }
}

struct DisplaySet<'a> {
    program: &'a Program,
    set: &'a AtomSet,
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, atom) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(self.program.name(atom))?;
        }
        f.write_str("}")
    }
}

/// Incremental construction of a [`Program`].
#[derive(Debug, Default)]
pub struct ProgramBuilder {
    table: AtomTable,
    rules: Vec<Rule>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reserves the next id for `name` without adding a rule.
    pub fn atom(&mut self, name: &str) -> Result<Atom, ModelError> {
        self.table.intern(name)
    }

    pub fn rule<S: AsRef<str>>(
        &mut self,
        head: &[S],
        pos_body: &[S],
        neg_body: &[S],
    ) -> Result<usize, ModelError> {
        let index = self.rules.len();
        if head.is_empty() {
            return Err(ModelError::EmptyHead(index));
        }
        let mut intern = |names: &[S]| -> Result<AtomSet, ModelError> {
            names
                .iter()
                .map(|n| self.table.intern(n.as_ref()))
                .collect()
        };
        let head = intern(head)?;
        let pos_body = intern(pos_body)?;
        let neg_body = intern(neg_body)?;
        self.rules.push(Rule::new(head, pos_body, neg_body));
        Ok(index)
    }

    pub fn build(self) -> Program {
        Program::new(self.table, self.rules)
    }
}

/// Interns raw rules. Ids are assigned in first-occurrence order, scanning
/// each rule's head, then positive body, then negative body.
pub fn intern_program<S: AsRef<str>>(rules: &[RawRule<S>]) -> Result<Program, ModelError> {
    let mut builder = ProgramBuilder::new();
    for (head, pos, neg) in rules {
        builder.rule(head, pos, neg)?;
    }
    Ok(builder.build())
}
