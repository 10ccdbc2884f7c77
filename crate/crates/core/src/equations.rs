//! Defining equations `p <-> ~U1 | ~U2 | ...` and the theories they form.
//!
//! The full theory uses every support of every proof scheme, the reduced one
//! only the inclusion-minimal supports. Both have exactly the stable models
//! of the program as their models.

use std::cmp::Ordering;

use crate::atoms::{Atom, AtomSet, Interpretation, Universe};
use crate::error::{Error, Result};
use crate::logic::{all_models, Formula, Theory};
use crate::schemes::{SupportFamily, SupportMode};
use crate::syntax::Program;

/// Non-reduced equations with more supports than this are logged.
const LARGE_EQUATION: usize = 1000;

/// The total order ≺ on finite atom sets: by largest atom, then by size,
/// then lexicographically. The empty set comes first.
pub fn support_cmp(u: &AtomSet, v: &AtomSet) -> Ordering {
    u.max_atom()
        .cmp(&v.max_atom())
        .then_with(|| u.len().cmp(&v.len()))
        .then_with(|| u.cmp(v))
}

/// `U ≺ V` for distinct sets.
pub fn support_precedes(u: &AtomSet, v: &AtomSet) -> Result<bool> {
    match support_cmp(u, v) {
        Ordering::Equal => Err(Error::EqualSets),
        ord => Ok(ord == Ordering::Less),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningEquation {
    pub atom: Atom,
    /// Supports in ≺ order; the disjuncts of `rhs`.
    pub supports: Vec<AtomSet>,
    pub rhs: Formula,
    pub reduced: bool,
}

impl DefiningEquation {
    pub fn formula(&self) -> Formula {
        Formula::iff(Formula::Atom(self.atom), self.rhs.clone())
    }

    pub fn to_text(&self, universe: &Universe) -> String {
        self.formula().display(universe).to_string()
    }
}

/// `~U1 | ~U2 | ...`, ⊥ without supports and ⊤ as soon as one support is empty.
pub fn rhs_from_supports(supports: &[AtomSet]) -> Formula {
    if supports.iter().any(AtomSet::is_empty) {
        return Formula::True;
    }
    Formula::or(supports.iter().map(Formula::neg_set).collect())
}

fn equation_from_family(family: &SupportFamily, atom: Atom) -> DefiningEquation {
    let supports = family.of(atom).to_vec();
    DefiningEquation {
        atom,
        rhs: rhs_from_supports(&supports),
        supports,
        reduced: family.mode() == SupportMode::Minimal,
    }
}

fn mode(reduced: bool) -> SupportMode {
    if reduced {
        SupportMode::Minimal
    } else {
        SupportMode::All
    }
}

pub fn defining_equation(p: &Program, atom: Atom, reduced: bool) -> Result<DefiningEquation> {
    let family = SupportFamily::compute(p, mode(reduced))?;
    Ok(equation_from_family(&family, atom))
}

/// One equation per universe atom, in atom order.
pub fn equations(p: &Program, reduced: bool) -> Result<Vec<DefiningEquation>> {
    let family = SupportFamily::compute(p, mode(reduced))?;
    let eqs: Vec<_> = p
        .universe()
        .atoms()
        .map(|a| equation_from_family(&family, a))
        .collect();
    if !reduced {
        for eq in eqs.iter().filter(|e| e.supports.len() > LARGE_EQUATION) {
            log::warn!(
                "defining equation of `{}` has {} disjuncts",
                p.universe().name(eq.atom),
                eq.supports.len()
            );
        }
    }
    Ok(eqs)
}

pub fn theory(p: &Program, reduced: bool) -> Result<Theory> {
    let formulas = equations(p, reduced)?
        .iter()
        .map(DefiningEquation::formula)
        .collect();
    Ok(Theory::new(p.universe().clone(), formulas))
}

pub fn stable_models_via_equations(p: &Program, reduced: bool) -> Result<Vec<Interpretation>> {
    all_models(&theory(p, reduced)?)
}

/// Clark's completion of a purely negative program.
pub fn clark_completion_purely_negative(p: &Program) -> Result<Theory> {
    if let Some(c) = p.clauses().iter().find(|c| !c.pos.is_empty()) {
        return Err(Error::NotPurelyNegative {
            clause: p.clause_text(c),
        });
    }
    let formulas = p
        .universe()
        .atoms()
        .map(|a| {
            let mut bodies: Vec<AtomSet> = Vec::new();
            for (_, c) in p.heads_of(a) {
                if !bodies.contains(&c.neg) {
                    bodies.push(c.neg.clone());
                }
            }
            Formula::iff(Formula::Atom(a), rhs_from_supports(&bodies))
        })
        .collect();
    Ok(Theory::new(p.universe().clone(), formulas))
}

/// Number of inclusion-minimal supports per atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FspReport {
    pub counts: Vec<(Atom, usize)>,
}

impl FspReport {
    pub fn count(&self, atom: Atom) -> usize {
        self.counts[atom.index()].1
    }
}

pub fn fsp_report(p: &Program) -> Result<FspReport> {
    let family = SupportFamily::compute(p, SupportMode::Minimal)?;
    Ok(FspReport {
        counts: p
            .universe()
            .atoms()
            .map(|a| (a, family.of(a).len()))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::{least_model, stable_models_bruteforce};

    const EX1: &str = "p. q :- p, not r. r :- not q. s :- not t.";

    fn prog(text: &str) -> Program {
        Program::parse(text).unwrap()
    }

    fn set(p: &Program, names: &str) -> AtomSet {
        p.atom_set(names).unwrap()
    }

    #[test]
    fn precedence_clauses() {
        let p = prog("#atoms p, q, r, s, t.");
        assert!(support_precedes(&set(&p, "q"), &set(&p, "r")).unwrap());
        assert!(!support_precedes(&set(&p, "r"), &set(&p, "q")).unwrap());
        assert!(support_precedes(&set(&p, "q"), &set(&p, "q,p")).unwrap());
        assert!(support_precedes(&set(&p, "p,r"), &set(&p, "q,r")).unwrap());
        assert!(support_precedes(&AtomSet::new(), &set(&p, "p")).unwrap());
        assert_eq!(
            support_precedes(&set(&p, "q"), &set(&p, "q")),
            Err(Error::EqualSets)
        );
    }

    #[test]
    fn example_equations() {
        let p = prog(EX1);
        let q = defining_equation(&p, p.atom("q").unwrap(), true).unwrap();
        assert_eq!(q.to_text(p.universe()), "q <-> ~r");
        let t = theory(&p, true).unwrap();
        assert_eq!(
            t.lines(),
            [
                "p <-> true",
                "q <-> ~r",
                "r <-> ~q",
                "s <-> ~t",
                "t <-> false"
            ]
        );
        let full = theory(&p, false).unwrap();
        assert_eq!(full.lines()[0], "p <-> true");
        assert_eq!(
            full.lines()[2],
            "r <-> ~q | (~q & ~r) | (~q & ~t) | (~q & ~r & ~t)"
        );
    }

    #[test]
    fn truncated_infinite_example() {
        let p = prog("p :- not p1. p :- not p1, not p2. p :- not p1, not p2, not p3.");
        let a = p.atom("p").unwrap();
        assert_eq!(
            defining_equation(&p, a, false)
                .unwrap()
                .to_text(p.universe()),
            "p <-> ~p1 | (~p1 & ~p2) | (~p1 & ~p2 & ~p3)"
        );
        assert_eq!(
            defining_equation(&p, a, true)
                .unwrap()
                .to_text(p.universe()),
            "p <-> ~p1"
        );
    }

    #[test]
    fn horn_equations_are_constants() {
        let p = prog("a. b :- a. c :- d.");
        let lm = least_model(&p).unwrap();
        for eq in equations(&p, false).unwrap() {
            let expected = if lm.contains(eq.atom) {
                Formula::True
            } else {
                Formula::False
            };
            assert_eq!(eq.rhs, expected);
        }
    }

    #[test]
    fn theories_of_small_programs() {
        assert!(theory(&Program::default(), true)
            .unwrap()
            .formulas
            .is_empty());
        let p = prog("p :- not q.");
        assert_eq!(
            theory(&p, true).unwrap().lines(),
            ["p <-> ~q", "q <-> false"]
        );
    }

    #[test]
    fn models_via_equations() {
        let p = prog(EX1);
        for reduced in [true, false] {
            assert_eq!(
                stable_models_via_equations(&p, reduced).unwrap(),
                vec![set(&p, "p,q,s"), set(&p, "p,r,s")]
            );
        }
        assert!(stable_models_via_equations(&prog("p :- not p."), true)
            .unwrap()
            .is_empty());
        let strat = prog("a. b :- not a. c :- not b. d :- c, not e.");
        assert!(strat.is_stratified());
        let models = stable_models_via_equations(&strat, true).unwrap();
        assert_eq!(models.len(), 1);
        assert_eq!(models, stable_models_bruteforce(&strat).unwrap());
    }

    #[test]
    fn clark_completion() {
        let p = prog("p :- not q. q :- not p.");
        assert_eq!(
            clark_completion_purely_negative(&p).unwrap().lines(),
            ["p <-> ~q", "q <-> ~p"]
        );
        let p = prog("p :- not q. p :- not r.");
        assert_eq!(
            clark_completion_purely_negative(&p).unwrap().lines(),
            ["p <-> ~q | ~r", "q <-> false", "r <-> false"]
        );
        assert!(matches!(
            clark_completion_purely_negative(&prog(EX1)),
            Err(Error::NotPurelyNegative { clause }) if clause == "q :- p, not r."
        ));
    }

    #[test]
    fn fsp_counts() {
        let p = prog(EX1);
        let r = fsp_report(&p).unwrap();
        let counts: Vec<usize> = r.counts.iter().map(|(_, c)| *c).collect();
        assert_eq!(counts, [1, 1, 1, 1, 0]);
        assert_eq!(r.count(p.atom("t").unwrap()), 0);
    }

    #[test]
    fn universe_atoms_without_clauses_are_false() {
        let p = prog("#atoms x. p :- not q.");
        let t = theory(&p, true).unwrap();
        assert_eq!(t.lines()[0], "x <-> false");
    }
}
