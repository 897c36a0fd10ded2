//! Test-side oracles written straight from the definitions over `u32`
//! masks, plus exhaustive program enumeration modulo atom renaming.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hefcheck::{AtomSet, Program, ProgramBuilder};

/// `(head, positive body, negative body)` over atoms `x0..x{n-1}`.
pub type Shape = (u32, u32, u32);

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn hefcheck(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hefcheck"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("HEFCHECK_THREADS", t.to_string()),
        None => cmd.env_remove("HEFCHECK_THREADS"),
    };
    cmd.output().expect("hefcheck runs")
}

fn names(mask: u32) -> Vec<String> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("x{i}"))
        .collect()
}

/// Atom `xi` gets id `i`, so masks and atom sets line up.
pub fn program(n: usize, rules: &[Shape]) -> Program {
    let mut b = ProgramBuilder::new();
    for i in 0..n {
        b.atom(&format!("x{i}")).unwrap();
    }
    for &(h, p, f) in rules {
        b.rule(&names(h), &names(p), &names(f)).unwrap();
    }
    b.build()
}

pub fn mask(set: &AtomSet) -> u32 {
    set.as_mask().unwrap() as u32
}

pub fn shapes_of(p: &Program) -> Vec<Shape> {
    p.rules()
        .iter()
        .map(|r| (mask(&r.head), mask(&r.pos_body), mask(&r.neg_body)))
        .collect()
}

pub fn set(y: u32) -> AtomSet {
    AtomSet::from_mask(y as u64)
}

/// Nonempty submasks of `y` other than `y`.
pub fn proper_submasks(y: u32) -> impl Iterator<Item = u32> {
    let mut z = y;
    std::iter::from_fn(move || {
        z = z.wrapping_sub(1) & y;
        (z != 0).then_some(z)
    })
}

pub fn outbound(z: u32, y: u32, rules: &[Shape]) -> bool {
    let rest = y & !z;
    rules
        .iter()
        .any(|&(h, b, _)| h & z != 0 && b & rest != 0 && b & z == 0 && h & rest == 0)
}

pub fn elementary(y: u32, rules: &[Shape]) -> bool {
    y != 0 && proper_submasks(y).all(|z| outbound(z, y, rules))
}

pub fn disjunctive(y: u32, rules: &[Shape]) -> bool {
    rules.iter().any(|&(h, _, _)| (h & y).count_ones() > 1)
}

pub fn not_hef(n: usize, rules: &[Shape]) -> bool {
    (1u32..1 << n).any(|y| disjunctive(y, rules) && elementary(y, rules))
}

pub fn project(rules: &[Shape], x: u32) -> Vec<Shape> {
    rules
        .iter()
        .filter(|&&(h, b, _)| h & x != 0 && b & x != 0)
        .map(|&(h, b, _)| (h & x, b & x, 0))
        .collect()
}

/// Strong connectivity of the dependency graph restricted to `y`.
pub fn induced_strongly_connected(y: u32, rules: &[Shape]) -> bool {
    let reach = |from: u32, forward: bool| {
        let mut seen = from;
        loop {
            let mut next = seen;
            for &(h, b, _) in rules {
                let (src, dst) = if forward { (b, h) } else { (h, b) };
                if src & seen & y != 0 {
                    next |= dst & y;
                }
            }
            if next == seen {
                return seen;
            }
            seen = next;
        }
    };
    let start = y & y.wrapping_neg();
    reach(start, true) == y && reach(start, false) == y
}

/// Each atom of `y` is the only head atom in `y` of a rule fed from the rest
/// of `y`, and the only body atom in `y` of a rule feeding the rest of `y`.
pub fn support_conditions(y: u32, rules: &[Shape]) -> bool {
    (0..32).filter(|i| y >> i & 1 == 1).all(|i| {
        let a = 1u32 << i;
        let fed = rules
            .iter()
            .any(|&(h, b, _)| h & y == a && b & a == 0 && b & y != 0);
        let feeds = rules
            .iter()
            .any(|&(h, b, _)| b & y == a && h & a == 0 && h & y != 0);
        fed && feeds
    })
}

/// Stable models straight from the definition: models of the reduct with
/// no proper submask that is also a model.
pub fn stable_models(n: usize, rules: &[Shape]) -> Vec<u32> {
    let model = |rs: &[(u32, u32)], i: u32| rs.iter().all(|&(h, b)| h & i != 0 || b & !i != 0);
    (0u32..1 << n)
        .filter(|&i| {
            let reduct: Vec<(u32, u32)> = rules
                .iter()
                .filter(|&&(_, _, f)| f & i == 0)
                .map(|&(h, b, _)| (h, b))
                .collect();
            model(&reduct, i)
                && !proper_submasks(i)
                    .chain([0])
                    .any(|j| j != i && model(&reduct, j))
        })
        .collect()
}

/// Satisfying assignments of a 3-CNF, as bitmasks with variable 1 as the
/// most significant of `m` bits, in ascending order.
pub fn sat_models(m: usize, clauses: &[[i32; 3]]) -> Vec<u64> {
    (0u64..1 << m)
        .filter(|&bits| {
            let value = |v: usize| bits >> (m - v) & 1 == 1;
            clauses.iter().all(|c| {
                c.iter()
                    .any(|&l| value(l.unsigned_abs() as usize) == (l > 0))
            })
        })
        .collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

fn permute(mask: u32, perm: &[usize]) -> u32 {
    perm.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(0, |acc, (_, &j)| acc | 1 << j)
}

/// Rule shapes over `n` atoms, and how atom renamings act on them.
pub struct ShapeSpace {
    pub n: usize,
    pub shapes: Vec<Shape>,
    renamings: Vec<Vec<u16>>,
}

impl ShapeSpace {
    pub fn new(n: usize, mut shapes: Vec<Shape>) -> Self {
        shapes.sort_unstable();
        shapes.dedup();
        let index: HashMap<Shape, u16> = shapes
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i as u16))
            .collect();
        let renamings = permutations(n)
            .into_iter()
            .skip(1)
            .map(|perm| {
                shapes
                    .iter()
                    .map(|&(h, b, f)| {
                        let s = (permute(h, &perm), permute(b, &perm), permute(f, &perm));
                        *index.get(&s).expect("shape sets are closed under renaming")
                    })
                    .collect()
            })
            .collect();
        ShapeSpace {
            n,
            shapes,
            renamings,
        }
    }

    /// Positive shapes; `disjoint` keeps only those whose head and body do
    /// not share an atom.
    pub fn positive(n: usize, max_head: usize, max_body: usize, disjoint: bool) -> Self {
        let full = (1u32 << n) - 1;
        let mut shapes = Vec::new();
        for h in 1..=full {
            for b in 0..=full {
                if h.count_ones() as usize <= max_head
                    && b.count_ones() as usize <= max_body
                    && !(disjoint && h & b != 0)
                {
                    shapes.push((h, b, 0));
                }
            }
        }
        Self::new(n, shapes)
    }

    /// Shapes with negation: each atom may be in the positive body, the
    /// negative body, or neither, with at most `max_body` body literals.
    pub fn with_negation(n: usize, max_head: usize, max_body: usize) -> Self {
        let full = (1u32 << n) - 1;
        let mut shapes = Vec::new();
        for h in 1..=full {
            for b in 0..=full {
                for f in 0..=full {
                    if f & b == 0
                        && h.count_ones() as usize <= max_head
                        && (b | f).count_ones() as usize <= max_body
                    {
                        shapes.push((h, b, f));
                    }
                }
            }
        }
        Self::new(n, shapes)
    }

    fn is_canonical(&self, combo: &[u16]) -> bool {
        let mut buf = [0u16; 8];
        let k = combo.len();
        for renaming in &self.renamings {
            for (slot, &s) in buf.iter_mut().zip(combo) {
                *slot = renaming[s as usize];
            }
            buf[..k].sort_unstable();
            if buf[..k] < *combo {
                return false;
            }
        }
        true
    }

    /// Calls `f` once per set of at most `max_rules` distinct shapes, up to
    /// atom renaming. Returns the number of programs visited.
    pub fn for_each_program(&self, max_rules: usize, mut f: impl FnMut(&[Shape])) -> usize {
        assert!(max_rules <= 8);
        let mut combo: Vec<u16> = Vec::with_capacity(max_rules);
        let mut rules: Vec<Shape> = Vec::with_capacity(max_rules);
        let mut count = 0;
        self.extend(&mut combo, &mut rules, 0, max_rules, &mut f, &mut count);
        count
    }

    fn extend(
        &self,
        combo: &mut Vec<u16>,
        rules: &mut Vec<Shape>,
        from: usize,
        max_rules: usize,
        f: &mut impl FnMut(&[Shape]),
        count: &mut usize,
    ) {
        if self.is_canonical(combo) {
            *count += 1;
            f(rules);
        }
        if combo.len() == max_rules {
            return;
        }
        for s in from..self.shapes.len() {
            combo.push(s as u16);
            rules.push(self.shapes[s]);
            self.extend(combo, rules, s + 1, max_rules, f, count);
            combo.pop();
            rules.pop();
        }
    }
}
