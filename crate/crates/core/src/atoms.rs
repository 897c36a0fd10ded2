//! Atom identifiers and bitmask atom sets.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Hard ceiling on the number of atoms any analysis will accept.
pub const MAX_ATOM_CAPACITY: usize = 1024;

/// Dense identifier of an atom inside one program's atom table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u32);

impl Atom {
    pub fn new(index: usize) -> Self {
        Atom(u32::try_from(index).expect("atom index overflows u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of atoms stored as a bitmask over atom ids.
///
/// The word vector never carries trailing zero words, so the derived
/// equality and hashing are set equality and set hashing. [`Ord`] compares
/// the sets as unsigned integers (bit `i` is atom `i`), which is the
/// "ascending bitmask" order used for deterministic enumeration.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct AtomSet {
    words: SmallVec<[u64; 1]>,
}

impl AtomSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(atom: Atom) -> Self {
        let mut set = Self::new();
        set.insert(atom);
        set
    }

    /// Builds the set from the low bits of `mask`, mapping bit `i` to atom `i`.
    pub fn from_mask(mask: u64) -> Self {
        let mut set = Self::new();
        if mask != 0 {
            set.words.push(mask);
        }
        set
    }

    /// The set as a single word, when every member id is below 64.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        let (w, b) = (atom.index() / 64, atom.index() % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let was = self.words[w] & (1 << b) != 0;
        self.words[w] |= 1 << b;
        !was
    }

    pub fn remove(&mut self, atom: Atom) -> bool {
        let (w, b) = (atom.index() / 64, atom.index() % 64);
        if w >= self.words.len() {
            return false;
        }
        let was = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        was
    }

    pub fn contains(&self, atom: Atom) -> bool {
        let (w, b) = (atom.index() / 64, atom.index() % 64);
        self.words.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(short.words.iter()) {
            *w |= s;
        }
        AtomSet { words }
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        let mut set = AtomSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        };
        set.trim();
        set
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        let mut words = self.words.clone();
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        let mut set = AtomSet { words };
        set.trim();
        set
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words.iter().enumerate().all(|(i, w)| {
            let o = other.words.get(i).copied().unwrap_or(0);
            w & !o == 0
        })
    }

    pub fn is_disjoint(&self, other: &AtomSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        !self.is_disjoint(other)
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_len(&self, other: &AtomSet) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn first(&self) -> Option<Atom> {
        self.iter().next()
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl Ord for AtomSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words.len().cmp(&other.words.len()).then_with(|| {
            for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for AtomSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut set = AtomSet::new();
        for atom in iter {
            set.insert(atom);
        }
        set
    }
}

impl Extend<Atom> for AtomSet {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        for atom in iter {
            self.insert(atom);
        }
    }
}

impl<'a> IntoIterator for &'a AtomSet {
    type Item = Atom;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = Atom;

    fn next(&mut self) -> Option<Atom> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(Atom::new(self.word * 64 + bit));
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word];
        }
    }
}

/// Every `k`-subset of `{0, .., n-1}` as a bitmask, in ascending numeric
/// order (Gosper's hack). Requires `n <= 63`.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 63, "k_subsets supports at most 63 elements");
    let limit = 1u64 << n;
    let mut next = if k > n {
        limit
    } else if k == 0 {
        0
    } else {
        (1u64 << k) - 1
    };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = next;
        if current == 0 {
            done = true;
            return Some(0);
        }
        let c = current & current.wrapping_neg();
        let r = current + c;
        next = (((r ^ current) >> 2) / c) | r;
        if next >= limit {
            done = true;
        }
        Some(current)
    })
}

/// Nonempty proper subsets of a `k`-element universe, cardinality-ascending
/// and then numerically ascending within each cardinality.
pub fn proper_subsets_by_size(k: usize) -> impl Iterator<Item = u64> {
    (1..k).flat_map(move |size| k_subsets(k, size))
}
