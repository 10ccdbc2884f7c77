//! Propositional formulas, entailment and model enumeration.

mod cnf;
mod formula;

use std::time::{Duration, Instant};

pub use cnf::{Cnf, Lit};
pub use formula::{Formula, FormulaDisplay};

use crate::atoms::{AtomSet, Interpretation, Universe};
use crate::error::{Error, Result};

/// Default bound on the number of atoms for exhaustive entailment checks.
pub const ENTAILMENT_LIMIT: usize = 20;
/// Default bound on the universe size for exhaustive model enumeration.
pub const EXHAUSTIVE_MODELS_LIMIT: usize = 24;

/// An ordered list of formulas over a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub universe: Universe,
    pub formulas: Vec<Formula>,
}

impl Theory {
    pub fn new(universe: Universe, formulas: Vec<Formula>) -> Self {
        Self { universe, formulas }
    }

    pub fn satisfied_by(&self, v: &AtomSet) -> bool {
        self.formulas.iter().all(|f| f.evaluate(v))
    }

    pub fn to_cnf(&self) -> Cnf {
        Cnf::from_formulas(self.universe.len(), &self.formulas)
    }

    /// One formula per line in the extended concrete syntax.
    pub fn lines(&self) -> Vec<String> {
        self.formulas
            .iter()
            .map(|f| f.display(&self.universe).to_string())
            .collect()
    }
}

pub fn evaluate(f: &Formula, v: &Interpretation) -> bool {
    f.evaluate(v)
}

/// `f ⊨ g`, decided over every valuation of the atoms of `f` and `g`.
pub fn entails(f: &Formula, g: &Formula) -> Result<bool> {
    entails_with_limit(f, g, ENTAILMENT_LIMIT)
}

pub fn entails_with_limit(f: &Formula, g: &Formula, limit: usize) -> Result<bool> {
    let mut atoms = f.atoms();
    g.collect_atoms(&mut atoms);
    let atoms: Vec<_> = atoms.iter().collect();
    if atoms.len() > limit {
        return Err(Error::TooManyAtoms {
            count: atoms.len(),
            limit,
        });
    }
    for mask in 0u64..1 << atoms.len() {
        let v: AtomSet = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        if f.evaluate(&v) && !g.evaluate(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All models of the theory, sorted by atom order.
pub fn all_models(theory: &Theory) -> Result<Vec<Interpretation>> {
    all_models_with_timeout(theory, None)
}

pub fn all_models_with_timeout(
    theory: &Theory,
    timeout: Option<Duration>,
) -> Result<Vec<Interpretation>> {
    let deadline = timeout.map(|t| Instant::now() + t);
    theory
        .to_cnf()
        .enumerate(deadline)
        .map_err(|partial| Error::Timeout { partial })
}

/// Model enumeration by checking every valuation of the universe.
pub fn all_models_exhaustive(theory: &Theory) -> Result<Vec<Interpretation>> {
    all_models_exhaustive_with_limit(theory, EXHAUSTIVE_MODELS_LIMIT)
}

pub fn all_models_exhaustive_with_limit(
    theory: &Theory,
    limit: usize,
) -> Result<Vec<Interpretation>> {
    let n = theory.universe.len();
    if n > limit {
        return Err(Error::TooManyAtoms { count: n, limit });
    }
    let mut models: Vec<_> = crate::atoms::subsets(n)
        .filter(|v| theory.satisfied_by(v))
        .collect();
    models.sort();
    Ok(models)
}
