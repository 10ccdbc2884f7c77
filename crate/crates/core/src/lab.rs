//! Explicit operators on small universes: antimonotonicity, duality, the
//! program realizing a given antimonotone operator as its GL operator, and
//! support-count probes over growing program families.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde_json::{json, Value};

use crate::atoms::{AtomSet, Interpretation, Universe};
use crate::equations::fsp_report;
use crate::error::{Error, Result};
use crate::fixpoint::{gl_operator, tp_step};
use crate::syntax::{Clause, Program};

/// Largest universe an [`OperatorTable`] may range over.
pub const MAX_TABLE_ATOMS: usize = 5;
/// Largest universe for which [`exhaustive_antimonotone_tables`] runs.
pub const EXHAUSTIVE_TABLE_ATOMS: usize = 3;

/// An operator on the subsets of a small universe, one entry per subset in
/// mask order (bit i set = atom i present).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTable {
    universe: Universe,
    entries: Vec<u32>,
}

impl OperatorTable {
    pub fn from_masks(universe: Universe, entries: Vec<u32>) -> Result<Self> {
        let n = universe.len();
        if n > MAX_TABLE_ATOMS {
            return Err(Error::TooManyAtoms {
                count: n,
                limit: MAX_TABLE_ATOMS,
            });
        }
        assert_eq!(entries.len(), 1 << n, "a table needs one entry per subset");
        assert!(
            entries.iter().all(|&e| e < 1 << n),
            "table values must lie in the universe"
        );
        Ok(Self { universe, entries })
    }

    pub fn from_fn(universe: Universe, f: impl Fn(&AtomSet) -> AtomSet) -> Result<Self> {
        let n = universe.len();
        if n > MAX_TABLE_ATOMS {
            return Err(Error::TooManyAtoms {
                count: n,
                limit: MAX_TABLE_ATOMS,
            });
        }
        let entries = (0..1u64 << n)
            .map(|x| f(&AtomSet::from_mask(x)).to_mask() as u32)
            .collect();
        Self::from_masks(universe, entries)
    }

    /// Universe `a, b, c, ...` of the given size.
    pub fn letters(n: usize) -> Universe {
        Universe::from_names((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, x: &AtomSet) -> AtomSet {
        AtomSet::from_mask(self.entries[x.to_mask() as usize] as u64)
    }

    pub fn set(&mut self, x: &AtomSet, value: &AtomSet) {
        self.entries[x.to_mask() as usize] = value.to_mask() as u32;
    }

    fn full(&self) -> u32 {
        (1u32 << self.universe.len()) - 1
    }

    pub fn to_json(&self) -> Value {
        let u = &self.universe;
        let rows: Vec<Value> = (0..self.entries.len())
            .map(|x| {
                let x = AtomSet::from_mask(x as u64);
                json!({"x": u.set_names(&x), "f": u.set_names(&self.get(&x))})
            })
            .collect();
        json!({"atoms": u.names(), "entries": rows})
    }
}

impl fmt::Display for OperatorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..self.entries.len() {
            let x = AtomSet::from_mask(x as u64);
            writeln!(
                f,
                "{} -> {}",
                self.universe.display_set(&x),
                self.universe.display_set(&self.get(&x))
            )?;
        }
        Ok(())
    }
}

/// The table of `GL_P` over the program's universe.
pub fn gl_table(p: &Program) -> Result<OperatorTable> {
    OperatorTable::from_fn(p.universe().clone(), |m| gl_operator(p, m))
}

/// The table of `T_P` of a Horn program.
pub fn tp_table(p: &Program) -> Result<OperatorTable> {
    tp_step(p, &AtomSet::new())?;
    OperatorTable::from_fn(p.universe().clone(), |i| {
        tp_step(p, i).expect("checked Horn above")
    })
}

/// Pairs `X ⊆ Y` in order of `X`'s mask, then `Y`'s.
fn subset_pairs(n: usize) -> impl Iterator<Item = (u32, u32)> {
    let full = (1u32 << n) - 1;
    (0..=full).flat_map(move |x| (x..=full).filter(move |y| y & x == x).map(move |y| (x, y)))
}

/// `Ok` when `X ⊆ Y` implies `f(Y) ⊆ f(X)`, otherwise the first violating pair.
pub fn check_antimonotone(f: &OperatorTable) -> Result<()> {
    let e = &f.entries;
    match subset_pairs(f.universe.len()).find(|&(x, y)| e[y as usize] & !e[x as usize] != 0) {
        None => Ok(()),
        Some((x, y)) => Err(Error::NotAntimonotone {
            smaller: AtomSet::from_mask(x as u64),
            larger: AtomSet::from_mask(y as u64),
        }),
    }
}

pub fn is_antimonotone(f: &OperatorTable) -> bool {
    check_antimonotone(f).is_ok()
}

pub fn is_monotone(f: &OperatorTable) -> bool {
    let e = &f.entries;
    subset_pairs(f.universe.len()).all(|(x, y)| e[x as usize] & !e[y as usize] == 0)
}

/// `O^d(X) = At \ O(At \ X)`.
pub fn dual_operator(f: &OperatorTable) -> OperatorTable {
    let full = f.full();
    OperatorTable {
        universe: f.universe.clone(),
        entries: (0..=full)
            .map(|x| full & !f.entries[(full & !x) as usize])
            .collect(),
    }
}

/// `{ p <- not Q : p ∈ f(At \ Q) }` with `Q` in mask order.
pub fn program_from_operator(f: &OperatorTable) -> Result<Program> {
    check_antimonotone(f)?;
    Ok(program_from_operator_unchecked(f))
}

/// The same construction without the antimonotonicity check.
pub fn program_from_operator_unchecked(f: &OperatorTable) -> Program {
    let full = f.full();
    let mut clauses = Vec::new();
    for q in 0..=full {
        let neg = AtomSet::from_mask(q as u64);
        let value = AtomSet::from_mask(f.entries[(full & !q) as usize] as u64);
        for head in &value {
            clauses.push(Clause::new(head, AtomSet::new(), neg.clone()));
        }
    }
    Program::new(f.universe.clone(), clauses)
}

/// First subset on which a table and the GL operator of its program differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub at: Interpretation,
    pub expected: Interpretation,
    pub actual: Interpretation,
}

/// Compares `GL_P` with `f` on every subset, where `P` is built from `f`.
pub fn verify_operator_realization(f: &OperatorTable) -> Option<Mismatch> {
    let p = program_from_operator_unchecked(f);
    (0..f.entries.len()).find_map(|x| {
        let at = AtomSet::from_mask(x as u64);
        let expected = f.get(&at);
        let actual = gl_operator(&p, &at);
        (expected != actual).then_some(Mismatch {
            at,
            expected,
            actual,
        })
    })
}

/// Every antimonotone operator on `n ≤ 3` atoms, sorted by entries.
///
/// Subsets are assigned from the largest mask down; each value must contain
/// the values of the one-atom supersets already assigned.
pub fn exhaustive_antimonotone_tables(n: usize) -> Result<Vec<OperatorTable>> {
    if n > EXHAUSTIVE_TABLE_ATOMS {
        return Err(Error::TooManyAtoms {
            count: n,
            limit: EXHAUSTIVE_TABLE_ATOMS,
        });
    }
    let full = (1u32 << n) - 1;
    let mut out = Vec::new();
    let mut entries = vec![0u32; 1 << n];
    fill(n, full, full as i64, &mut entries, &mut out);
    out.sort();
    let universe = OperatorTable::letters(n);
    Ok(out
        .into_iter()
        .map(|entries| OperatorTable {
            universe: universe.clone(),
            entries,
        })
        .collect())
}

fn fill(n: usize, full: u32, x: i64, entries: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if x < 0 {
        out.push(entries.clone());
        return;
    }
    let x = x as u32;
    let floor = (0..n)
        .map(|i| 1u32 << i)
        .filter(|bit| x & bit == 0)
        .fold(0, |acc, bit| acc | entries[(x | bit) as usize]);
    let free = full & !floor;
    // every subset of `free` added to the floor
    let mut extra = free;
    loop {
        entries[x as usize] = floor | extra;
        fill(n, full, x as i64 - 1, entries, out);
        if extra == 0 {
            break;
        }
        extra = (extra - 1) & free;
    }
}

/// A random antimonotone operator: start from the constant `At` table and
/// repeatedly remove an atom from the values on an upward-closed family.
pub fn random_antimonotone_table<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<OperatorTable> {
    let universe = OperatorTable::letters(n);
    let full = (1u32 << n) - 1;
    let mut entries = vec![full; 1 << n];
    if n > 0 {
        let removals = rng.gen_range(0..=2 * (n << n));
        for _ in 0..removals {
            let atom = 1u32 << rng.gen_range(0..n);
            let from = rng.gen_range(0..=full);
            for (y, e) in entries.iter_mut().enumerate() {
                if y as u32 & from == from {
                    *e &= !atom;
                }
            }
        }
    }
    let table = OperatorTable::from_masks(universe, entries)?;
    debug_assert!(is_antimonotone(&table));
    Ok(table)
}

/// A uniformly random table.
pub fn random_table<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<OperatorTable> {
    let full = (1u32 << n) - 1;
    let entries = (0..1usize << n).map(|_| rng.gen_range(0..=full)).collect();
    OperatorTable::from_masks(OperatorTable::letters(n), entries)
}

/// Checks `GL_P(∩ Xn) = ∪ GL_P(Xn)` on a decreasing chain. A finite chain is
/// eventually constant, so this guards the implementation only.
pub fn check_lower_half_continuity(p: &Program, chain: &[Interpretation]) -> Result<bool> {
    if let Some(i) = chain.windows(2).position(|w| !w[1].is_subset(&w[0])) {
        return Err(Error::NotDecreasing { index: i + 1 });
    }
    let Some(first) = chain.first() else {
        return Ok(true);
    };
    let mut meet = first.clone();
    let mut images = AtomSet::new();
    for x in chain {
        meet = meet.intersection(x);
        images.union_with(&gl_operator(p, x));
    }
    Ok(gl_operator(p, &meet) == images)
}

/// Finite truncations of two infinite programs over `p, p1, p2, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProgramFamily {
    /// `p :- not pi` for every `i`.
    E2,
    /// `p :- not p1, ..., not pi` for every `i`.
    Ex3,
}

impl ProgramFamily {
    pub fn name(self) -> &'static str {
        match self {
            ProgramFamily::E2 => "e2",
            ProgramFamily::Ex3 => "ex3",
        }
    }
}

impl fmt::Display for ProgramFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProgramFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "e2" => Ok(ProgramFamily::E2),
            "ex3" => Ok(ProgramFamily::Ex3),
            other => Err(format!("unknown family `{other}`, expected e2 or ex3")),
        }
    }
}

/// The first `n` clauses of the family, over the universe `p, p1, ..., pn`.
pub fn family_program(family: ProgramFamily, n: usize) -> Program {
    assert!(n >= 1, "families start at n = 1");
    let universe = Universe::from_names(
        std::iter::once("p".to_string()).chain((1..=n).map(|i| format!("p{i}"))),
    );
    let p = universe.lookup("p").expect("p is the first atom");
    let pi = |i: usize| universe.lookup(&format!("p{i}")).expect("declared above");
    let clauses = (1..=n)
        .map(|i| {
            let neg = match family {
                ProgramFamily::E2 => AtomSet::from_iter([pi(i)]),
                ProgramFamily::Ex3 => (1..=i).map(pi).collect(),
            };
            Clause::new(p, AtomSet::new(), neg)
        })
        .collect();
    Program::new(universe, clauses)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Bounded,
    Growing,
}

impl Trend {
    pub fn name(self) -> &'static str {
        match self {
            Trend::Bounded => "bounded",
            Trend::Growing => "growing",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FspProbe {
    pub family: ProgramFamily,
    /// `(n, number of minimal supports of p)` for `n = 1..=n_max`.
    pub counts: Vec<(usize, usize)>,
    pub trend: Trend,
}

impl FspProbe {
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family.name(),
            "counts": self.counts.iter().map(|&(n, c)| json!({"n": n, "supports": c})).collect::<Vec<_>>(),
            "trend": self.trend.name(),
        })
    }
}

/// Minimal-support counts of `p` along the family, tagged growing when the
/// last count exceeds the first.
pub fn fsp_growth_probe(family: ProgramFamily, n_max: usize) -> Result<FspProbe> {
    assert!(n_max >= 1, "probe needs n_max >= 1");
    let mut counts = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let prog = family_program(family, n);
        let report = fsp_report(&prog)?;
        counts.push((n, report.count(prog.atom("p")?)));
    }
    let trend = if counts.last().map(|c| c.1) > counts.first().map(|c| c.1) {
        Trend::Growing
    } else {
        Trend::Bounded
    };
    Ok(FspProbe {
        family,
        counts,
        trend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    const EX1: &str = "p. q :- p, not r. r :- not q. s :- not t.";

    fn table(n: usize, entries: &[u32]) -> OperatorTable {
        OperatorTable::from_masks(OperatorTable::letters(n), entries.to_vec()).unwrap()
    }

    #[test]
    fn antimonotonicity_checks() {
        let p = Program::parse(EX1).unwrap();
        assert!(check_antimonotone(&gl_table(&p).unwrap()).is_ok());
        let identity = table(2, &[0, 1, 2, 3]);
        assert_eq!(
            check_antimonotone(&identity),
            Err(Error::NotAntimonotone {
                smaller: AtomSet::new(),
                larger: AtomSet::from_mask(1),
            })
        );
        assert!(is_monotone(&identity));
        let constant = table(2, &[2, 2, 2, 2]);
        assert!(is_antimonotone(&constant) && is_monotone(&constant));
    }

    #[test]
    fn duals() {
        let empty = table(2, &[0; 4]);
        assert_eq!(dual_operator(&empty), table(2, &[3; 4]));
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let t = random_table(3, &mut rng).unwrap();
            assert_eq!(dual_operator(&dual_operator(&t)), t);
        }
        let horn = Program::parse("a. b :- a. c :- b, d.").unwrap();
        let tp = tp_table(&horn).unwrap();
        assert!(is_monotone(&tp) && is_monotone(&dual_operator(&tp)));
        assert!(tp_table(&Program::parse(EX1).unwrap()).is_err());
    }

    #[test]
    fn programs_from_operators() {
        let flip = table(1, &[1, 0]);
        assert_eq!(
            program_from_operator(&flip).unwrap().to_string(),
            "a :- not a.\n"
        );
        assert_eq!(verify_operator_realization(&flip), None);

        let constant = table(2, &[1; 4]);
        let p = program_from_operator(&constant).unwrap();
        assert_eq!(
            p.to_string(),
            "a.\na :- not a.\na :- not b.\na :- not a, not b.\n"
        );
        let empty = program_from_operator(&table(2, &[0; 4])).unwrap();
        assert!(empty.is_empty());
        assert!(matches!(
            program_from_operator(&table(1, &[0, 1])),
            Err(Error::NotAntimonotone { .. })
        ));
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut t = table(2, &[3, 1, 2, 0]);
        assert_eq!(verify_operator_realization(&t), None);
        t.set(&AtomSet::from_mask(3), &AtomSet::from_mask(1));
        let m = verify_operator_realization(&t).unwrap();
        // the fact `a` now fires everywhere, first visible at {b}
        assert_eq!(m.at, AtomSet::from_mask(2));
        assert_eq!(m.expected, AtomSet::from_mask(2));
        assert_eq!(m.actual, AtomSet::from_mask(3));
    }

    #[test]
    fn exhaustive_generation_counts() {
        // one downward-closed family of subsets per atom
        assert_eq!(exhaustive_antimonotone_tables(0).unwrap().len(), 1);
        assert_eq!(exhaustive_antimonotone_tables(1).unwrap().len(), 3);
        assert_eq!(exhaustive_antimonotone_tables(2).unwrap().len(), 36);
        let all = exhaustive_antimonotone_tables(3).unwrap();
        assert_eq!(all.len(), 8000);
        assert!(all.iter().all(is_antimonotone));
        assert!(exhaustive_antimonotone_tables(4).is_err());
    }

    #[test]
    fn random_antimonotone_tables_are_realized() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in 1..=4 {
            for _ in 0..20 {
                let t = random_antimonotone_table(n, &mut rng).unwrap();
                assert!(is_antimonotone(&t));
                assert_eq!(verify_operator_realization(&t), None);
            }
        }
    }

    #[test]
    fn table_size_limit() {
        let wide = Program::parse("a. b. c. d. e. f.").unwrap();
        assert!(matches!(
            gl_table(&wide),
            Err(Error::TooManyAtoms { count: 6, limit: 5 })
        ));
    }

    #[test]
    fn lower_half_continuity() {
        let p = Program::parse(EX1).unwrap();
        let s = |n: &str| p.atom_set(n).unwrap();
        let chain = [s("p,q,r,s,t"), s("p,q,s"), s("p")];
        assert!(check_lower_half_continuity(&p, &chain).unwrap());
        assert!(check_lower_half_continuity(&p, &[s("q"), s("q"), s("q")]).unwrap());
        assert!(check_lower_half_continuity(&p, &[s("q")]).unwrap());
        assert_eq!(
            check_lower_half_continuity(&p, &[s("p"), s("p,q")]),
            Err(Error::NotDecreasing { index: 1 })
        );
    }

    #[test]
    fn families() {
        let e2 = family_program(ProgramFamily::E2, 2);
        assert_eq!(e2.to_string(), "p :- not p1.\np :- not p2.\n");
        let ex3 = family_program(ProgramFamily::Ex3, 2);
        assert_eq!(ex3.to_string(), "p :- not p1.\np :- not p1, not p2.\n");
        assert_eq!(
            family_program(ProgramFamily::E2, 1),
            family_program(ProgramFamily::Ex3, 1)
        );
        assert_eq!("ex3".parse::<ProgramFamily>(), Ok(ProgramFamily::Ex3));
        assert!("e4".parse::<ProgramFamily>().is_err());
    }

    #[test]
    fn growth_probes() {
        let e2 = fsp_growth_probe(ProgramFamily::E2, 6).unwrap();
        assert_eq!(
            e2.counts.iter().map(|c| c.1).collect::<Vec<_>>(),
            [1, 2, 3, 4, 5, 6]
        );
        assert_eq!(e2.trend, Trend::Growing);
        let ex3 = fsp_growth_probe(ProgramFamily::Ex3, 6).unwrap();
        assert_eq!(ex3.counts.iter().map(|c| c.1).collect::<Vec<_>>(), [1; 6]);
        assert_eq!(ex3.trend, Trend::Bounded);
        assert_eq!(
            fsp_growth_probe(ProgramFamily::E2, 1).unwrap().counts,
            [(1, 1)]
        );
    }
}
