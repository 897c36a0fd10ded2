//! Positive dependency graph, strongly connected components and the
//! head-cycle-freeness test.

use std::fmt::Write as _;

use crate::atoms::{Atom, AtomSet};
use crate::program::Program;

/// Tarjan's algorithm, iterative. Components come out in reverse
/// topological order (sinks first); `steps` counts node and edge visits.
pub(crate) fn tarjan(succ: &[Vec<usize>], steps: &mut usize) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0;
    // (node, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[v] == UNVISITED {
                *steps += 1;
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                *steps += 1;
                if index[w] == UNVISITED {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                components.push(component);
            }
        }
    }
    components
}

/// The positive dependency graph: an edge `m -> n` for every rule with `m`
/// in the positive body and `n` in the head. Atoms that only occur under
/// negation have no node.
#[derive(Debug, Clone)]
pub struct DepGraph {
    nodes: AtomSet,
    succ: Vec<AtomSet>,
    pred: Vec<AtomSet>,
    scc_id: Vec<Option<usize>>,
    components: Vec<AtomSet>,
    reverse_topological: Vec<usize>,
}

impl DepGraph {
    pub fn build(program: &Program) -> DepGraph {
        let n = program.atom_count();
        let mut nodes = AtomSet::new();
        let mut succ = vec![AtomSet::new(); n];
        let mut pred = vec![AtomSet::new(); n];
        for rule in program.rules() {
            nodes = nodes.union(&rule.head).union(&rule.pos_body);
            for m in &rule.pos_body {
                succ[m.index()] = succ[m.index()].union(&rule.head);
            }
            for h in &rule.head {
                pred[h.index()] = pred[h.index()].union(&rule.pos_body);
            }
        }

        let adjacency: Vec<Vec<usize>> = succ
            .iter()
            .map(|s| s.iter().map(Atom::index).collect())
            .collect();
        let mut steps = 0;
        let raw = tarjan(&adjacency, &mut steps);

        // Renumber by smallest member so numbering is independent of
        // traversal details; keep the tarjan order separately.
        let mut found: Vec<(usize, AtomSet)> = raw
            .iter()
            .enumerate()
            .filter_map(|(order, members)| {
                let set: AtomSet = members
                    .iter()
                    .map(|&i| Atom::new(i))
                    .filter(|a| nodes.contains(*a))
                    .collect();
                (!set.is_empty()).then_some((order, set))
            })
            .collect();
        found.sort_by_key(|(_, set)| set.first());
        let mut scc_id = vec![None; n];
        let mut reverse_topological = vec![0; found.len()];
        let mut order_to_id: Vec<(usize, usize)> = Vec::new();
        let components: Vec<AtomSet> = found
            .into_iter()
            .enumerate()
            .map(|(id, (order, set))| {
                for a in &set {
                    scc_id[a.index()] = Some(id);
                }
                order_to_id.push((order, id));
                set
            })
            .collect();
        order_to_id.sort_unstable();
        for (slot, (_, id)) in order_to_id.into_iter().enumerate() {
            reverse_topological[slot] = id;
        }

        DepGraph {
            nodes,
            succ,
            pred,
            scc_id,
            components,
            reverse_topological,
        }
    }

    pub fn nodes(&self) -> &AtomSet {
        &self.nodes
    }

    pub fn successors(&self, atom: Atom) -> &AtomSet {
        &self.succ[atom.index()]
    }

    pub fn predecessors(&self, atom: Atom) -> &AtomSet {
        &self.pred[atom.index()]
    }

    pub fn has_edge(&self, from: Atom, to: Atom) -> bool {
        self.succ[from.index()].contains(to)
    }

    /// All edges, ordered by source then target id.
    pub fn edges(&self) -> Vec<(Atom, Atom)> {
        self.nodes
            .iter()
            .flat_map(|m| self.succ[m.index()].iter().map(move |n| (m, n)))
            .collect()
    }

    /// Components, numbered by ascending smallest member id.
    pub fn sccs(&self) -> &[AtomSet] {
        &self.components
    }

    /// Component ids with sink components first.
    pub fn reverse_topological(&self) -> &[usize] {
        &self.reverse_topological
    }

    pub fn scc_of(&self, atom: Atom) -> Option<usize> {
        self.scc_id.get(atom.index()).copied().flatten()
    }

    /// Atoms of `y` reachable from `start` using only edges inside `y`.
    fn reach_within(&self, start: Atom, y: &AtomSet, forward: bool) -> AtomSet {
        let adjacency = if forward { &self.succ } else { &self.pred };
        let mut seen = AtomSet::singleton(start);
        let mut frontier = vec![start];
        while let Some(a) = frontier.pop() {
            for b in adjacency[a.index()].intersection(y).iter() {
                if seen.insert(b) {
                    frontier.push(b);
                }
            }
        }
        seen
    }

    /// Whether the subgraph induced by `y` is strongly connected. A
    /// singleton is; an empty set or a set with a node-less atom and more
    /// than one member is not.
    pub fn induced_strongly_connected(&self, y: &AtomSet) -> bool {
        let Some(start) = y.first() else {
            return false;
        };
        if y.len() == 1 {
            return true;
        }
        if !y.is_subset(&self.nodes) {
            return false;
        }
        self.reach_within(start, y, true) == *y && self.reach_within(start, y, false) == *y
    }

    /// Graphviz rendering with nodes filled by component.
    pub fn to_dot(&self, program: &Program) -> String {
        const PALETTE: [&str; 8] = [
            "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
        ];
        let mut out = String::from("digraph dependencies {\n  node [style=filled];\n");
        for a in &self.nodes {
            let id = self.scc_of(a).expect("every node has a component");
            let _ = writeln!(
                out,
                "  \"{}\" [fillcolor=\"{}\", tooltip=\"scc {}\"];",
                program.name(a),
                PALETTE[id % PALETTE.len()],
                id
            );
        }
        for (m, n) in self.edges() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", program.name(m), program.name(n));
        }
        out.push_str("}\n");
        out
    }
}

/// Outcome of the head-cycle-freeness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HcfVerdict {
    /// `(rule index, first atom, second atom)` of the first head pair
    /// sharing a component, when the program is not head-cycle-free.
    pub violation: Option<(usize, Atom, Atom)>,
    /// Node and edge visits performed.
    pub steps: usize,
}

impl HcfVerdict {
    pub fn is_hcf(&self) -> bool {
        self.violation.is_none()
    }
}

/// Head-cycle-freeness in time linear in the program size.
///
/// Each rule gets an auxiliary node with edges `body atom -> rule -> head
/// atom`, so atom reachability is that of the dependency graph while the
/// edge count stays linear in the number of literals.
pub fn is_hcf(program: &Program) -> HcfVerdict {
    let atoms = program.atom_count();
    let mut steps = 0;
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); atoms + program.len()];
    for (i, rule) in program.rules().iter().enumerate() {
        let node = atoms + i;
        for b in &rule.pos_body {
            succ[b.index()].push(node);
            steps += 1;
        }
        for h in &rule.head {
            succ[node].push(h.index());
            steps += 1;
        }
    }
    let mut comp = vec![0usize; succ.len()];
    for (id, members) in tarjan(&succ, &mut steps).iter().enumerate() {
        for &v in members {
            comp[v] = id;
        }
    }
    for (i, rule) in program.rules().iter().enumerate() {
        if !rule.is_disjunctive() {
            continue;
        }
        // First pair in (first atom, second atom) id order.
        let head: Vec<Atom> = rule.head.iter().collect();
        let mut first_of: std::collections::HashMap<usize, Atom> = Default::default();
        let mut best: Option<(Atom, Atom)> = None;
        for &h in &head {
            steps += 1;
            match first_of.get(&comp[h.index()]) {
                Some(&g) => {
                    if best.is_none_or(|(b0, b1)| (g, h) < (b0, b1)) {
                        best = Some((g, h));
                    }
                }
                None => {
                    first_of.insert(comp[h.index()], h);
                }
            }
        }
        if let Some((a, b)) = best {
            return HcfVerdict {
                violation: Some((i, a, b)),
                steps,
            };
        }
    }
    HcfVerdict {
        violation: None,
        steps,
    }
}
