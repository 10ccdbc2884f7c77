//! Atoms, atom universes and compact atom sets.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// A propositional atom, identified by its dense index in a [`Universe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The ordered, finite set of atoms a program talks about.
///
/// Ids are dense `0..len()` and their order is the total order used by every
/// ordering-sensitive construction (≺ on supports, lexicographic model order).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut universe = Self::new();
        for name in names {
            universe.intern(name);
        }
        universe
    }

    /// Returns the atom for `name`, adding it at the end of the order if new.
    pub fn intern(&mut self, name: impl Into<String>) -> Atom {
        let name = name.into();
        if let Some(&atom) = self.index.get(&name) {
            return atom;
        }
        let atom = Atom(self.names.len() as u32);
        self.index.insert(name.clone(), atom);
        self.names.push(name);
        atom
    }

    pub fn lookup(&self, name: &str) -> Option<Atom> {
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
        (0..self.names.len() as u32).map(Atom)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The set of all atoms of the universe.
    pub fn full_set(&self) -> AtomSet {
        self.atoms().collect()
    }

    /// Names of the atoms of `set`, in atom order.
    pub fn set_names(&self, set: &AtomSet) -> Vec<String> {
        set.iter().map(|a| self.name(a).to_string()).collect()
    }

    pub fn display_set<'a>(&'a self, set: &'a AtomSet) -> SetDisplay<'a> {
        SetDisplay {
            universe: self,
            set,
        }
    }
}

pub struct SetDisplay<'a> {
    universe: &'a Universe,
    set: &'a AtomSet,
}

impl fmt::Display for SetDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, atom) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(self.universe.name(atom))?;
        }
        f.write_str("}")
    }
}

/// A finite set of atoms stored as a bitset.
///
/// Trailing zero words are always trimmed so that derived equality and
/// hashing are set equality. `Ord` compares the ascending id sequences
/// lexicographically, which is the order models are reported in.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct AtomSet {
    words: Vec<u64>,
}

impl AtomSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set whose members are the set bits of `mask` (bit i = atom i).
    pub fn from_mask(mask: u64) -> Self {
        let mut set = Self { words: vec![mask] };
        set.trim();
        set
    }

    /// Low 64 bits of the set. Only meaningful for universes of at most 64 atoms.
    pub fn to_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        let (w, b) = (atom.index() / 64, atom.index() % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, atom: Atom) -> bool {
        let (w, b) = (atom.index() / 64, atom.index() % 64);
        if w >= self.words.len() {
            return false;
        }
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        present
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

    /// Largest atom of the set under the universe order.
    pub fn max_atom(&self) -> Option<Atom> {
        let last = self.words.len().checked_sub(1)?;
        let word = self.words[last];
        Some(Atom(
            (last * 64 + 63 - word.leading_zeros() as usize) as u32,
        ))
    }

    pub fn iter(&self) -> AtomSetIter<'_> {
        AtomSetIter {
            words: &self.words,
            word: 0,
            bits: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        let mut out = AtomSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        };
        out.trim();
        out
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words.len() <= other.words.len()
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &AtomSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection_len(&self, other: &AtomSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        let mut set = AtomSet::new();
        for atom in iter {
            set.insert(atom);
        }
        set
    }
}

impl Extend<Atom> for AtomSet {
    fn extend<T: IntoIterator<Item = Atom>>(&mut self, iter: T) {
        for atom in iter {
            self.insert(atom);
        }
    }
}

impl<'a> IntoIterator for &'a AtomSet {
    type Item = Atom;
    type IntoIter = AtomSetIter<'a>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

impl Ord for AtomSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
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

pub struct AtomSetIter<'a> {
    words: &'a [u64],
    word: usize,
    bits: u64,
}

impl Iterator for AtomSetIter<'_> {
    type Item = Atom;

    fn next(&mut self) -> Option<Atom> {
        loop {
            if self.bits != 0 {
                let bit = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(Atom((self.word * 64 + bit) as u32));
            }
            self.word += 1;
            self.bits = *self.words.get(self.word)?;
        }
    }
}

/// A candidate model: the set of atoms taken to be true.
pub type Interpretation = AtomSet;

/// Enumerates every subset of the first `n` atoms in mask order.
pub fn subsets(n: usize) -> impl Iterator<Item = AtomSet> {
    assert!(n < 64, "subset enumeration needs fewer than 64 atoms");
    (0..1u64 << n).map(AtomSet::from_mask)
}
