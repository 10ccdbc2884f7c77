use crate::atoms::{subsets, AtomSet, Interpretation};
use crate::error::{Error, Result};
use crate::fixpoint::BRUTEFORCE_LIMIT;

use super::syntax::{CardConstraint, CcClause, CcProgram, SplitProgram};

pub fn cc_satisfies(m: &Interpretation, c: &CardConstraint) -> bool {
    c.satisfied_by(m)
}

fn require_cc_horn(p: &SplitProgram) -> Result<()> {
    match p.clauses.iter().find(|c| !c.is_cc_horn()) {
        Some(c) => Err(Error::NotCcHorn {
            clause: p.clause_text(c),
        }),
        None => Ok(()),
    }
}

fn step(p: &SplitProgram, i: &AtomSet) -> AtomSet {
    p.clauses
        .iter()
        .filter(|c| c.lowers_met(i))
        .map(|c| c.head)
        .collect()
}

/// One-step provability for a CC-Horn program.
pub fn cc_tp_step(p: &SplitProgram, i: &Interpretation) -> Result<Interpretation> {
    require_cc_horn(p)?;
    Ok(step(p, i))
}

pub fn cc_least_model(p: &SplitProgram) -> Result<Interpretation> {
    require_cc_horn(p)?;
    Ok(lfp(p))
}

fn lfp(p: &SplitProgram) -> AtomSet {
    let mut current = AtomSet::new();
    loop {
        let next = step(p, &current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Drops the clauses with an upper constraint violated by `m`, then erases
/// the upper constraints of the survivors.
pub fn nss_reduct(p: &CcProgram, m: &Interpretation) -> SplitProgram {
    let split = p.transform();
    SplitProgram {
        clauses: split
            .clauses
            .into_iter()
            .filter(|c| c.uppers.iter().all(|u| u.satisfied_by(m)))
            .map(|c| CcClause {
                uppers: Vec::new(),
                ..c
            })
            .collect(),
        universe: split.universe,
    }
}

/// Least model of the NSS-reduct.
pub fn ccgl(p: &CcProgram, m: &Interpretation) -> Interpretation {
    lfp(&nss_reduct(p, m))
}

pub fn is_cc_stable(p: &CcProgram, m: &Interpretation) -> bool {
    ccgl(p, m) == *m
}

/// All fixpoints of [`ccgl`], found by testing every subset of the universe.
pub fn cc_stable_models_bruteforce(p: &CcProgram) -> Result<Vec<Interpretation>> {
    let n = p.universe().len();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooManyAtoms {
            count: n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let split = p.transform();
    let mut models: Vec<_> = subsets(n)
        .filter(|m| {
            let reduct = SplitProgram {
                universe: split.universe.clone(),
                clauses: split
                    .clauses
                    .iter()
                    .filter(|c| c.uppers.iter().all(|u| u.satisfied_by(m)))
                    .cloned()
                    .collect(),
            };
            lfp(&reduct) == *m
        })
        .collect();
    models.sort();
    Ok(models)
}

/// Checks `T(∪ Xn) = ∪ T(Xn)` for the one-step operator of a CC-Horn
/// program on an increasing chain. Finite chains are eventually constant, so
/// this only guards the implementation.
pub fn check_cc_lower_half_continuity(p: &SplitProgram, chain: &[Interpretation]) -> Result<bool> {
    require_cc_horn(p)?;
    if let Some(i) = chain.windows(2).position(|w| !w[0].is_subset(&w[1])) {
        return Err(Error::NotIncreasing { index: i + 1 });
    }
    let mut union = AtomSet::new();
    let mut images = AtomSet::new();
    for x in chain {
        union.union_with(x);
        images.union_with(&step(p, x));
    }
    Ok(step(p, &union) == images)
}
