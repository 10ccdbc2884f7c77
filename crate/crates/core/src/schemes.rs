//! Proof schemes, their supports, and the proof-theoretic reading of the
//! Gelfond-Lifschitz operator.
//!
//! A proof scheme is a sequence of `(clause, derived atom)` steps where
//! every step's positive body was derived earlier. Its support is the union
//! of the negative bodies used; a set `M` admits the scheme when it misses
//! the support entirely.

use std::collections::{HashSet, VecDeque};

use serde_json::{Map, Value};

use crate::atoms::{subsets, Atom, AtomSet, Interpretation, Universe};
use crate::equations::support_cmp;
use crate::error::{Error, Result};
use crate::fixpoint::BRUTEFORCE_LIMIT;
use crate::syntax::Program;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    /// Index of the clause in the program.
    pub clause: usize,
    pub derived: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofScheme {
    pub steps: Vec<Step>,
    pub support: AtomSet,
}

impl ProofScheme {
    /// Builds a scheme from clause indices, deriving heads and the support.
    pub fn from_clauses(p: &Program, clauses: &[usize]) -> Self {
        let mut support = AtomSet::new();
        let steps = clauses
            .iter()
            .map(|&i| {
                let c = &p.clauses()[i];
                support.union_with(&c.neg);
                Step {
                    clause: i,
                    derived: c.head,
                }
            })
            .collect();
        Self { steps, support }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn conclusion(&self) -> Option<Atom> {
        self.steps.last().map(|s| s.derived)
    }

    pub fn to_json(&self, p: &Program) -> Value {
        let u = p.universe();
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                serde_json::json!({
                    "clause": p.clause_text(&p.clauses()[s.clause]),
                    "index": s.clause,
                    "atom": u.name(s.derived),
                })
            })
            .collect();
        serde_json::json!({
            "steps": steps,
            "support": u.set_names(&self.support),
            "conclusion": self.conclusion().map(|a| u.name(a)),
        })
    }
}

/// Checks conditions (I)/(II): heads match, positive bodies are covered by
/// earlier steps, and the support is exactly the union of negative bodies.
pub fn validate_scheme(p: &Program, s: &ProofScheme) -> bool {
    if s.steps.is_empty() {
        return false;
    }
    let mut derived = AtomSet::new();
    let mut support = AtomSet::new();
    for step in &s.steps {
        let Some(c) = p.clauses().get(step.clause) else {
            return false;
        };
        if c.head != step.derived || !c.pos.is_subset(&derived) {
            return false;
        }
        derived.insert(c.head);
        support.union_with(&c.neg);
    }
    support == s.support
}

pub fn admits(m: &Interpretation, s: &ProofScheme) -> bool {
    m.is_disjoint(&s.support)
}

/// Irredundant schemes concluding `target` with at most `max_steps` steps.
///
/// Irredundant means no atom is derived twice and every step before the last
/// feeds the positive body of a later step. Each choice of clauses is
/// reported once, linearised with the smallest clause index first among the
/// ready steps. Output is ordered by length, then clause-index sequence.
pub fn enumerate_schemes(p: &Program, target: Atom, max_steps: usize) -> Vec<ProofScheme> {
    let n = p.universe().len();
    let mut out = Vec::new();
    let mut chosen: Vec<Option<usize>> = vec![None; n];
    choose(
        p,
        &mut chosen,
        &mut vec![target],
        0,
        max_steps,
        target,
        &mut out,
    );
    out.sort_by(|a, b| {
        a.len().cmp(&b.len()).then_with(|| {
            a.steps
                .iter()
                .map(|s| s.clause)
                .cmp(b.steps.iter().map(|s| s.clause))
        })
    });
    out
}

fn choose(
    p: &Program,
    chosen: &mut Vec<Option<usize>>,
    pending: &mut Vec<Atom>,
    count: usize,
    max_steps: usize,
    target: Atom,
    out: &mut Vec<ProofScheme>,
) {
    let Some(next) = pending.iter().rposition(|a| chosen[a.index()].is_none()) else {
        if let Some(order) = linearise(p, chosen, target) {
            out.push(ProofScheme::from_clauses(p, &order));
        }
        return;
    };
    let atom = pending.remove(next);
    if count < max_steps {
        for (ci, c) in p.heads_of(atom) {
            chosen[atom.index()] = Some(ci);
            let before = pending.len();
            pending.extend(c.pos.iter().filter(|b| chosen[b.index()].is_none()));
            choose(p, chosen, pending, count + 1, max_steps, target, out);
            pending.truncate(before);
        }
        chosen[atom.index()] = None;
    }
    pending.insert(next, atom);
}

/// Topological order of the chosen clauses, or `None` when they are cyclic.
fn linearise(p: &Program, chosen: &[Option<usize>], target: Atom) -> Option<Vec<usize>> {
    let mut remaining: Vec<usize> = chosen.iter().flatten().copied().collect();
    let mut derived = AtomSet::new();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let ready = remaining
            .iter()
            .enumerate()
            .filter(|(_, &ci)| p.clauses()[ci].pos.is_subset(&derived))
            .min_by_key(|(_, &ci)| ci)
            .map(|(i, _)| i)?;
        let ci = remaining.swap_remove(ready);
        derived.insert(p.clauses()[ci].head);
        order.push(ci);
    }
    debug_assert_eq!(order.last().map(|&ci| p.clauses()[ci].head), Some(target));
    Some(order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportMode {
    /// Every support of every proof scheme.
    All,
    /// Inclusion-minimal supports only.
    Minimal,
}

#[derive(Clone, Copy, Debug)]
pub struct SupportLimits {
    /// Cap on the supports kept for one atom.
    pub per_atom: usize,
    /// Cap on saturation states when computing all supports.
    pub states: usize,
}

impl Default for SupportLimits {
    fn default() -> Self {
        Self {
            per_atom: 100_000,
            states: 4_000_000,
        }
    }
}

/// Supports of every atom of a program, each list sorted by ≺.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFamily {
    mode: SupportMode,
    supports: Vec<Vec<AtomSet>>,
}

impl SupportFamily {
    pub fn compute(p: &Program, mode: SupportMode) -> Result<Self> {
        Self::compute_with_limits(p, mode, SupportLimits::default())
    }

    pub fn compute_with_limits(
        p: &Program,
        mode: SupportMode,
        limits: SupportLimits,
    ) -> Result<Self> {
        let mut supports = match mode {
            SupportMode::All => saturate_all(p, limits)?,
            SupportMode::Minimal => saturate_minimal(p, limits)?,
        };
        for list in &mut supports {
            list.sort_by(support_cmp);
        }
        Ok(Self { mode, supports })
    }

    pub fn mode(&self) -> SupportMode {
        self.mode
    }

    pub fn of(&self, atom: Atom) -> &[AtomSet] {
        &self.supports[atom.index()]
    }

    /// Atoms with a support disjoint from `m`.
    pub fn admitted(&self, m: &Interpretation) -> Interpretation {
        self.supports
            .iter()
            .enumerate()
            .filter(|(_, list)| list.iter().any(|u| u.is_disjoint(m)))
            .map(|(i, _)| Atom(i as u32))
            .collect()
    }

    /// `{ "atom": [["q"], ["q", "r"]], ... }` in atom order.
    pub fn to_json(&self, universe: &Universe) -> Value {
        let mut map = Map::new();
        for atom in universe.atoms() {
            let sets = self
                .of(atom)
                .iter()
                .map(|s| Value::from(universe.set_names(s)))
                .collect();
            map.insert(universe.name(atom).to_string(), Value::Array(sets));
        }
        Value::Object(map)
    }
}

/// The supports of all proof schemes concluding `target`, ≺-sorted.
pub fn all_supports(p: &Program, target: Atom) -> Result<Vec<AtomSet>> {
    Ok(SupportFamily::compute(p, SupportMode::All)?
        .of(target)
        .to_vec())
}

/// The inclusion-minimal supports of proof schemes concluding `target`, ≺-sorted.
pub fn minimal_supports(p: &Program, target: Atom) -> Result<Vec<AtomSet>> {
    Ok(SupportFamily::compute(p, SupportMode::Minimal)?
        .of(target)
        .to_vec())
}

/// `GL_P(M)` read off the minimal supports: atoms with an admitted scheme.
pub fn gl_via_schemes(p: &Program, m: &Interpretation) -> Result<Interpretation> {
    Ok(SupportFamily::compute(p, SupportMode::Minimal)?.admitted(m))
}

/// Fixpoints of [`gl_via_schemes`] over every subset of the universe.
pub fn stable_models_via_schemes(p: &Program) -> Result<Vec<Interpretation>> {
    let n = p.universe().len();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooManyAtoms {
            count: n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let family = SupportFamily::compute(p, SupportMode::Minimal)?;
    let mut models: Vec<_> = subsets(n).filter(|m| family.admitted(m) == *m).collect();
    models.sort();
    Ok(models)
}

fn explosion(p: &Program, atom: Atom, limit: usize) -> Error {
    Error::SupportExplosion {
        atom: p.universe().name(atom).to_string(),
        limit,
    }
}

/// Every scheme prefix is summarised by the atoms it derived and its support;
/// appending a clause moves to a new state. The supports of `a` are the
/// supports of reachable states that derived `a`, since the clause for `a`
/// can be repeated as the last step.
fn saturate_all(p: &Program, limits: SupportLimits) -> Result<Vec<Vec<AtomSet>>> {
    let n = p.universe().len();
    let mut per_atom: Vec<HashSet<AtomSet>> = vec![HashSet::new(); n];
    let start = (AtomSet::new(), AtomSet::new());
    let mut seen: HashSet<(AtomSet, AtomSet)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((derived, support)) = queue.pop_front() {
        for c in p.clauses() {
            if !c.pos.is_subset(&derived) {
                continue;
            }
            let mut d = derived.clone();
            d.insert(c.head);
            let u = support.union(&c.neg);
            let state = (d, u);
            if seen.contains(&state) {
                continue;
            }
            if seen.len() >= limits.states {
                return Err(explosion(p, c.head, limits.states));
            }
            for a in &state.0 {
                let set = &mut per_atom[a.index()];
                if set.insert(state.1.clone()) && set.len() > limits.per_atom {
                    return Err(explosion(p, a, limits.per_atom));
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

/// Adds `candidate` to an inclusion antichain unless an existing member is a
/// subset of it; members that are supersets of it are dropped.
pub(crate) fn insert_minimal(antichain: &mut Vec<AtomSet>, candidate: AtomSet) -> bool {
    if antichain.iter().any(|u| u.is_subset(&candidate)) {
        return false;
    }
    antichain.retain(|u| !candidate.is_subset(u));
    antichain.push(candidate);
    true
}

/// Bottom-up saturation over derivation trees: a clause combines one support
/// per positive body atom with its own negative body. Candidates subsumed by
/// a known support are discarded as they appear.
fn saturate_minimal(p: &Program, limits: SupportLimits) -> Result<Vec<Vec<AtomSet>>> {
    let n = p.universe().len();
    let mut family: Vec<Vec<AtomSet>> = vec![Vec::new(); n];
    let mut changed = true;
    while changed {
        changed = false;
        for c in p.clauses() {
            let mut partial = vec![c.neg.clone()];
            for b in &c.pos {
                let mut next = Vec::new();
                for x in &partial {
                    for s in &family[b.index()] {
                        insert_minimal(&mut next, x.union(s));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for candidate in partial {
                let list = &mut family[c.head.index()];
                if insert_minimal(list, candidate) {
                    changed = true;
                    if list.len() > limits.per_atom {
                        return Err(explosion(p, c.head, limits.per_atom));
                    }
                }
            }
        }
    }
    Ok(family)
}
