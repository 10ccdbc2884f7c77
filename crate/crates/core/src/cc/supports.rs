//! Supports of CC proof schemes: sets of upper constraints, the formula
//! `φ_U` a model has to satisfy to admit them, the preorder `U1 ⪯ U2` iff
//! `φ_U2 ⊨ φ_U1`, and the defining equations built from them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde_json::{Map, Value};

use crate::atoms::{subsets, Atom, AtomSet, Interpretation, Universe};
use crate::error::{Error, Result};
use crate::fixpoint::BRUTEFORCE_LIMIT;
use crate::logic::{all_models, entails, Formula, Theory, ENTAILMENT_LIMIT};
use crate::schemes::{SupportLimits, SupportMode};

use super::syntax::{CcClause, CcProgram, SplitProgram, Upper};

/// Relevant-atom count up to which admission is tabulated over all valuations.
const TABLE_LIMIT: usize = 16;

/// The upper constraints collected along a CC proof scheme.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CcSupport(BTreeSet<Upper>);

impl CcSupport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uppers(&self) -> impl Iterator<Item = &Upper> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, upper: Upper) -> bool {
        self.0.insert(upper)
    }

    pub fn union(&self, other: &CcSupport) -> CcSupport {
        CcSupport(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &CcSupport) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `M` admits the support when it satisfies every upper constraint.
    pub fn admits(&self, m: &Interpretation) -> bool {
        self.0.iter().all(|u| u.satisfied_by(m))
    }

    pub fn formula(&self) -> Formula {
        cc_support_formula(self)
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> impl fmt::Display + 'a {
        struct D<'a>(&'a CcSupport, &'a Universe);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("[")?;
                for (i, u) in self.0.uppers().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", u.display(self.1))?;
                }
                f.write_str("]")
            }
        }
        D(self, universe)
    }

    pub fn to_json(&self, universe: &Universe) -> Value {
        Value::Array(
            self.uppers()
                .map(|u| Value::from(u.display(universe).to_string()))
                .collect(),
        )
    }
}

impl FromIterator<Upper> for CcSupport {
    fn from_iter<T: IntoIterator<Item = Upper>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Fewer constraints first, then the constraints in order.
impl Ord for CcSupport {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for CcSupport {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `k`-element subsets of `atoms` in lexicographic order.
pub(crate) fn combinations(atoms: &AtomSet, k: usize) -> Vec<AtomSet> {
    let items: Vec<Atom> = atoms.iter().collect();
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `∧_i ∨_{W ⊆ Xi, |W| = |Xi| - ui} ¬W`: at least `|Xi| - ui` atoms of each
/// `Xi` are false.
pub fn cc_support_formula(u: &CcSupport) -> Formula {
    let conjuncts = u
        .uppers()
        .filter_map(|up| {
            let k = up.atoms.len().saturating_sub(up.bound as usize);
            if k == 0 {
                return None;
            }
            let disjuncts = combinations(&up.atoms, k)
                .iter()
                .map(Formula::neg_set)
                .collect();
            Some(Formula::or(disjuncts))
        })
        .collect();
    Formula::and(conjuncts)
}

/// `U1 ⪯ U2`, that is `φ_U2 ⊨ φ_U1`.
pub fn cc_support_preceq(u1: &CcSupport, u2: &CcSupport) -> Result<bool> {
    entails(&u2.formula(), &u1.formula())
}

/// Decides `⪯` by comparing admission tables over the atoms occurring in
/// upper constraints. Tables are cached per support.
struct Preorder {
    relevant: Vec<Atom>,
    tables: HashMap<CcSupport, Vec<u64>>,
    pairs: HashMap<(CcSupport, CcSupport), bool>,
}

impl Preorder {
    fn new(p: &SplitProgram) -> Self {
        let mut relevant = AtomSet::new();
        for c in &p.clauses {
            for u in &c.uppers {
                relevant.union_with(&u.atoms);
            }
        }
        Self {
            relevant: relevant.iter().collect(),
            tables: HashMap::new(),
            pairs: HashMap::new(),
        }
    }

    fn table(&mut self, u: &CcSupport) -> &[u64] {
        if !self.tables.contains_key(u) {
            let n = self.relevant.len();
            let pos: HashMap<Atom, usize> = self
                .relevant
                .iter()
                .enumerate()
                .map(|(i, &a)| (a, i))
                .collect();
            let masks: Vec<(u32, u32)> = u
                .uppers()
                .map(|up| {
                    let mask = up.atoms.iter().fold(0u32, |m, a| m | 1 << pos[&a]);
                    (mask, up.bound)
                })
                .collect();
            let mut bits = vec![0u64; (1usize << n).div_ceil(64)];
            for v in 0u32..1 << n {
                if masks.iter().all(|&(m, b)| (v & m).count_ones() <= b) {
                    bits[v as usize / 64] |= 1 << (v % 64);
                }
            }
            self.tables.insert(u.clone(), bits);
        }
        &self.tables[u]
    }

    /// `u1 ⪯ u2`.
    fn preceq(&mut self, u1: &CcSupport, u2: &CcSupport) -> Result<bool> {
        if u1.is_subset(u2) {
            return Ok(true);
        }
        let key = (u1.clone(), u2.clone());
        if let Some(&known) = self.pairs.get(&key) {
            return Ok(known);
        }
        let answer = if self.relevant.len() <= TABLE_LIMIT {
            let t2 = self.table(u2).to_vec();
            let t1 = self.table(u1);
            t2.iter().zip(t1).all(|(a, b)| a & !b == 0)
        } else {
            admission_entails(u2, u1)?
        };
        self.pairs.insert(key, answer);
        Ok(answer)
    }
}

/// Every valuation of the atoms of `a` and `b` admitted by `a` is admitted by `b`.
fn admission_entails(a: &CcSupport, b: &CcSupport) -> Result<bool> {
    let mut atoms = AtomSet::new();
    for u in a.uppers().chain(b.uppers()) {
        atoms.union_with(&u.atoms);
    }
    let atoms: Vec<Atom> = atoms.iter().collect();
    if atoms.len() > ENTAILMENT_LIMIT {
        return Err(Error::TooManyAtoms {
            count: atoms.len(),
            limit: ENTAILMENT_LIMIT,
        });
    }
    for mask in 0u64..1 << atoms.len() {
        let v: AtomSet = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        if a.admits(&v) && !b.admits(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Adds `candidate` to a list of ⪯-minimal supports. Within a class of
/// mutually ⪯-related supports only the least in [`CcSupport`] order is kept.
fn insert_preceq_minimal(
    list: &mut Vec<CcSupport>,
    candidate: CcSupport,
    order: &mut Preorder,
) -> Result<bool> {
    for slot in list.iter_mut() {
        if order.preceq(slot, &candidate)? {
            if order.preceq(&candidate, slot)? && candidate < *slot {
                *slot = candidate;
                return Ok(true);
            }
            return Ok(false);
        }
    }
    let mut kept = Vec::with_capacity(list.len() + 1);
    for u in list.drain(..) {
        if !order.preceq(&candidate, &u)? {
            kept.push(u);
        }
    }
    kept.push(candidate);
    *list = kept;
    Ok(true)
}

fn explosion(universe: &Universe, atom: Atom, limit: usize) -> Error {
    Error::SupportExplosion {
        atom: universe.name(atom).to_string(),
        limit,
    }
}

/// Saturation over derivation trees. A clause fires once each lower `l X`
/// is met by `l` chosen atoms of `X`; its support is its own uppers plus one
/// support of every chosen atom. Choosing more atoms than needed only adds
/// constraints, and replacing a child support by a ⪯-smaller one keeps the
/// result ⪯-smaller, so it is enough to combine ⪯-minimal supports.
fn saturate_minimal(p: &SplitProgram, limits: SupportLimits) -> Result<Vec<Vec<CcSupport>>> {
    let n = p.universe.len();
    let mut order = Preorder::new(p);
    let mut family: Vec<Vec<CcSupport>> = vec![Vec::new(); n];
    let choices: Vec<Vec<AtomSet>> = p.clauses.iter().map(lower_choices).collect();
    loop {
        let mut changed = false;
        for (c, options) in p.clauses.iter().zip(&choices) {
            let base: CcSupport = c.uppers.iter().cloned().collect();
            for needed in options {
                if needed.iter().any(|a| family[a.index()].is_empty()) {
                    continue;
                }
                let mut partial = vec![base.clone()];
                for a in needed {
                    let mut next: Vec<CcSupport> = Vec::new();
                    for u in &partial {
                        for v in &family[a.index()] {
                            let w = u.union(v);
                            if next.iter().any(|x| x.is_subset(&w)) {
                                continue;
                            }
                            next.retain(|x| !w.is_subset(x));
                            next.push(w);
                        }
                    }
                    partial = next;
                }
                for cand in partial {
                    let list = &mut family[c.head.index()];
                    if insert_preceq_minimal(list, cand, &mut order)? {
                        changed = true;
                        if list.len() > limits.per_atom {
                            return Err(explosion(&p.universe, c.head, limits.per_atom));
                        }
                    }
                }
            }
        }
        if !changed {
            return Ok(family);
        }
    }
}

/// For each way of meeting every lower bound with exactly `l` atoms of its
/// set, the union of the chosen atoms.
fn lower_choices(c: &CcClause) -> Vec<AtomSet> {
    let mut out = vec![AtomSet::new()];
    for lower in &c.lowers {
        let picks = combinations(&lower.atoms, lower.bound as usize);
        let mut next = Vec::new();
        for acc in &out {
            for pick in &picks {
                let u = acc.union(pick);
                if !next.contains(&u) {
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

/// Every support of every CC proof scheme: states are (derived atoms,
/// collected uppers) pairs of scheme prefixes.
fn saturate_all(p: &SplitProgram, limits: SupportLimits) -> Result<Vec<Vec<CcSupport>>> {
    let n = p.universe.len();
    let mut per_atom: Vec<HashSet<CcSupport>> = vec![HashSet::new(); n];
    let start = (AtomSet::new(), CcSupport::new());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((derived, support)) = queue.pop_front() {
        for c in &p.clauses {
            if !c.lowers_met(&derived) {
                continue;
            }
            let mut d = derived.clone();
            d.insert(c.head);
            let mut u = support.clone();
            for up in &c.uppers {
                u.insert(up.clone());
            }
            let state = (d, u);
            if seen.contains(&state) {
                continue;
            }
            if seen.len() >= limits.states {
                return Err(explosion(&p.universe, c.head, limits.states));
            }
            for a in &state.0 {
                let set = &mut per_atom[a.index()];
                if set.insert(state.1.clone()) && set.len() > limits.per_atom {
                    return Err(explosion(&p.universe, a, limits.per_atom));
                }
            }
            seen.insert(state.clone());
            queue.push_back(state);
        }
    }
    Ok(per_atom
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect())
}

/// Supports of every atom of a CC program, each list in [`CcSupport`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcSupportFamily {
    mode: SupportMode,
    supports: Vec<Vec<CcSupport>>,
}

impl CcSupportFamily {
    pub fn compute(p: &CcProgram, mode: SupportMode) -> Result<Self> {
        Self::compute_with_limits(p, mode, SupportLimits::default())
    }

    pub fn compute_with_limits(
        p: &CcProgram,
        mode: SupportMode,
        limits: SupportLimits,
    ) -> Result<Self> {
        let split = p.transform();
        let mut supports = match mode {
            SupportMode::All => saturate_all(&split, limits)?,
            SupportMode::Minimal => saturate_minimal(&split, limits)?,
        };
        for list in &mut supports {
            list.sort();
        }
        Ok(Self { mode, supports })
    }

    pub fn mode(&self) -> SupportMode {
        self.mode
    }

    pub fn of(&self, atom: Atom) -> &[CcSupport] {
        &self.supports[atom.index()]
    }

    /// Atoms with a support whose formula `m` satisfies.
    pub fn admitted(&self, m: &Interpretation) -> Interpretation {
        self.supports
            .iter()
            .enumerate()
            .filter(|(_, list)| list.iter().any(|u| u.formula().evaluate(m)))
            .map(|(i, _)| Atom(i as u32))
            .collect()
    }

    /// `{ "atom": [["{r} 1"], ...], ... }` in atom order.
    pub fn to_json(&self, universe: &Universe) -> Value {
        let mut map = Map::new();
        for atom in universe.atoms() {
            let list = self.of(atom).iter().map(|u| u.to_json(universe)).collect();
            map.insert(universe.name(atom).to_string(), Value::Array(list));
        }
        Value::Object(map)
    }
}

/// The ⪯-minimal supports of CC proof schemes concluding `target`.
pub fn cc_minimal_supports(p: &CcProgram, target: Atom) -> Result<Vec<CcSupport>> {
    Ok(CcSupportFamily::compute(p, SupportMode::Minimal)?
        .of(target)
        .to_vec())
}

/// The supports of all CC proof schemes concluding `target`.
pub fn cc_all_supports(p: &CcProgram, target: Atom) -> Result<Vec<CcSupport>> {
    Ok(CcSupportFamily::compute(p, SupportMode::All)?
        .of(target)
        .to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcDefiningEquation {
    pub atom: Atom,
    pub supports: Vec<CcSupport>,
    pub rhs: Formula,
    pub reduced: bool,
}

impl CcDefiningEquation {
    pub fn formula(&self) -> Formula {
        Formula::iff(Formula::Atom(self.atom), self.rhs.clone())
    }

    pub fn to_text(&self, universe: &Universe) -> String {
        self.formula().display(universe).to_string()
    }
}

/// `φ_U1 | φ_U2 | ...`; ⊥ without supports, ⊤ once some `φ_U` is ⊤.
pub fn cc_rhs(supports: &[CcSupport]) -> Formula {
    let disjuncts: Vec<Formula> = supports.iter().map(CcSupport::formula).collect();
    if disjuncts.contains(&Formula::True) {
        return Formula::True;
    }
    Formula::or(disjuncts)
}

pub fn cc_equations(p: &CcProgram, reduced: bool) -> Result<Vec<CcDefiningEquation>> {
    let mode = if reduced {
        SupportMode::Minimal
    } else {
        SupportMode::All
    };
    let family = CcSupportFamily::compute(p, mode)?;
    Ok(p.universe()
        .atoms()
        .map(|atom| {
            let supports = family.of(atom).to_vec();
            CcDefiningEquation {
                atom,
                rhs: cc_rhs(&supports),
                supports,
                reduced,
            }
        })
        .collect())
}

pub fn cc_theory(p: &CcProgram, reduced: bool) -> Result<Theory> {
    let formulas = cc_equations(p, reduced)?
        .iter()
        .map(CcDefiningEquation::formula)
        .collect();
    Ok(Theory::new(p.universe().clone(), formulas))
}

pub fn cc_stable_models_via_equations(p: &CcProgram, reduced: bool) -> Result<Vec<Interpretation>> {
    all_models(&cc_theory(p, reduced)?)
}

/// `CCGL_P(M)` read off the ⪯-minimal supports.
pub fn cc_gl_via_schemes(p: &CcProgram, m: &Interpretation) -> Result<Interpretation> {
    Ok(CcSupportFamily::compute(p, SupportMode::Minimal)?.admitted(m))
}

/// Fixpoints of [`cc_gl_via_schemes`] over every subset of the universe.
pub fn cc_stable_models_via_schemes(p: &CcProgram) -> Result<Vec<Interpretation>> {
    let n = p.universe().len();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooManyAtoms {
            count: n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let family = CcSupportFamily::compute(p, SupportMode::Minimal)?;
    let mut models: Vec<_> = subsets(n).filter(|m| family.admitted(m) == *m).collect();
    models.sort();
    Ok(models)
}
