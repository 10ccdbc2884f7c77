use std::fmt;

use crate::atoms::{Atom, AtomSet, Universe};

/// Propositional formula in negation normal form over atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// n-ary conjunction; no children is ⊤ and a single child is returned as is.
    pub fn and(mut children: Vec<Formula>) -> Formula {
        match children.len() {
            0 => Formula::True,
            1 => children.pop().unwrap(),
            _ => Formula::And(children),
        }
    }

    /// n-ary disjunction; no children is ⊥ and a single child is returned as is.
    pub fn or(mut children: Vec<Formula>) -> Formula {
        match children.len() {
            0 => Formula::False,
            1 => children.pop().unwrap(),
            _ => Formula::Or(children),
        }
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// `¬S = ¬s1 ∧ ... ∧ ¬sn`, which is ⊤ for the empty set.
    pub fn neg_set(set: &AtomSet) -> Formula {
        Formula::and(set.iter().map(Formula::Not).collect())
    }

    pub fn evaluate(&self, v: &AtomSet) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => v.contains(*a),
            Formula::Not(a) => !v.contains(*a),
            Formula::And(cs) => cs.iter().all(|c| c.evaluate(v)),
            Formula::Or(cs) => cs.iter().any(|c| c.evaluate(v)),
            Formula::Iff(l, r) => l.evaluate(v) == r.evaluate(v),
        }
    }

    pub fn atoms(&self) -> AtomSet {
        let mut out = AtomSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut AtomSet) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) | Formula::Not(a) => {
                out.insert(*a);
            }
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_atoms(out)),
            Formula::Iff(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Not(_))
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            universe,
        }
    }
}

/// Renders formulas as `p <-> ~q | (~r & ~s)`, with `true`/`false` constants.
pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    universe: &'a Universe,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, formula: &Formula, nested: bool) -> fmt::Result {
        let u = self.universe;
        let join = |f: &mut fmt::Formatter<'_>, cs: &[Formula], sep: &str| -> fmt::Result {
            if nested {
                f.write_str("(")?;
            }
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                self.write(f, c, true)?;
            }
            if nested {
                f.write_str(")")?;
            }
            Ok(())
        };
        match formula {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => f.write_str(u.name(*a)),
            Formula::Not(a) => write!(f, "~{}", u.name(*a)),
            Formula::And(cs) => join(f, cs, " & "),
            Formula::Or(cs) => join(f, cs, " | "),
            Formula::Iff(l, r) => {
                if nested {
                    f.write_str("(")?;
                }
                self.write(f, l, true)?;
                f.write_str(" <-> ")?;
                self.write(f, r, false)?;
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, false)
    }
}
