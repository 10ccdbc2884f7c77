//! Seeded random programs and theories for test corpora and the lab.

use rand::seq::index::sample;
use rand::Rng;

use crate::atoms::{Atom, AtomSet, Universe};
use crate::cc::{CardConstraint, CcProgram, CcRule};
use crate::logic::{Formula, Theory};
use crate::syntax::{Clause, Program};

/// Size bounds for random normal programs. Universes are `a0, a1, ...`,
/// all declared, so the universe size is exactly `atoms`.
#[derive(Clone, Copy, Debug)]
pub struct ProgramShape {
    pub atoms: usize,
    pub clauses: usize,
    pub max_pos: usize,
    pub max_neg: usize,
}

impl ProgramShape {
    pub fn new(atoms: usize, clauses: usize) -> Self {
        Self {
            atoms,
            clauses,
            max_pos: 2,
            max_neg: 2,
        }
    }
}

pub fn numbered_universe(n: usize) -> Universe {
    Universe::from_names((0..n).map(|i| format!("a{i}")))
}

fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, max: usize) -> AtomSet {
    let k = rng.gen_range(0..=max.min(n));
    sample(rng, n, k).iter().map(|i| Atom(i as u32)).collect()
}

pub fn random_program<R: Rng + ?Sized>(shape: &ProgramShape, rng: &mut R) -> Program {
    let n = shape.atoms;
    let clauses = if n == 0 {
        Vec::new()
    } else {
        (0..shape.clauses)
            .map(|_| {
                let head = Atom(rng.gen_range(0..n) as u32);
                let pos = random_subset(rng, n, shape.max_pos);
                let neg = random_subset(rng, n, shape.max_neg);
                Clause::new(head, pos, neg)
            })
            .collect()
    };
    Program::new(numbered_universe(n), clauses)
}

/// A program between 1 and `max_atoms` atoms with up to `max_clauses` clauses.
pub fn random_program_up_to<R: Rng + ?Sized>(
    max_atoms: usize,
    max_clauses: usize,
    rng: &mut R,
) -> Program {
    let atoms = rng.gen_range(1..=max_atoms);
    let clauses = rng.gen_range(0..=max_clauses);
    random_program(&ProgramShape::new(atoms, clauses), rng)
}

/// Like [`random_program`] with empty positive bodies.
pub fn random_purely_negative_program<R: Rng + ?Sized>(
    shape: &ProgramShape,
    rng: &mut R,
) -> Program {
    random_program(
        &ProgramShape {
            max_pos: 0,
            ..*shape
        },
        rng,
    )
}

/// Size bounds for random CC programs.
#[derive(Clone, Copy, Debug)]
pub struct CcShape {
    pub atoms: usize,
    pub rules: usize,
    pub max_constraints: usize,
    pub max_set: usize,
}

/// Each constraint draws a nonempty set and independent optional bounds
/// within `0..=|X|`, with `lower <= upper`.
pub fn random_cc_program<R: Rng + ?Sized>(shape: &CcShape, rng: &mut R) -> CcProgram {
    let n = shape.atoms;
    let mut rules = Vec::new();
    if n > 0 {
        for _ in 0..shape.rules {
            let head = Atom(rng.gen_range(0..n) as u32);
            let count = rng.gen_range(0..=shape.max_constraints);
            let body = (0..count)
                .map(|_| {
                    let size = rng.gen_range(1..=shape.max_set.clamp(1, n));
                    let atoms: AtomSet = sample(rng, n, size)
                        .iter()
                        .map(|i| Atom(i as u32))
                        .collect();
                    let lower = rng.gen_bool(0.5).then(|| rng.gen_range(0..=size as u32));
                    let floor = lower.unwrap_or(0);
                    let upper = rng
                        .gen_bool(0.5)
                        .then(|| rng.gen_range(floor..=size as u32));
                    CardConstraint::new(lower, atoms, upper)
                })
                .collect();
            rules.push(CcRule { head, body });
        }
    }
    CcProgram::new(numbered_universe(n), rules)
}

/// A random formula of bounded depth over the first `atoms` atoms.
pub fn random_formula<R: Rng + ?Sized>(atoms: usize, depth: usize, rng: &mut R) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            k => {
                let a = Atom(rng.gen_range(0..atoms) as u32);
                if k % 2 == 0 {
                    Formula::Atom(a)
                } else {
                    Formula::Not(a)
                }
            }
        };
    }
    let kind = rng.gen_range(0..3);
    let width = if kind == 2 { 2 } else { rng.gen_range(2..=3) };
    let mut c: Vec<Formula> = (0..width)
        .map(|_| random_formula(atoms, depth - 1, rng))
        .collect();
    match kind {
        0 => Formula::And(c),
        1 => Formula::Or(c),
        _ => {
            let rhs = c.pop().expect("two children");
            Formula::Iff(Box::new(c.pop().expect("two children")), Box::new(rhs))
        }
    }
}

pub fn random_theory<R: Rng + ?Sized>(atoms: usize, formulas: usize, rng: &mut R) -> Theory {
    let formulas = if atoms == 0 {
        Vec::new()
    } else {
        (0..formulas)
            .map(|_| random_formula(atoms, 3, rng))
            .collect()
    };
    Theory::new(numbered_universe(atoms), formulas)
}
