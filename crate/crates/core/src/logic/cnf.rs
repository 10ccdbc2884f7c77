//! Clausal translation of theories and a DPLL all-models enumerator.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use crate::atoms::{Atom, AtomSet, Universe};
use crate::logic::formula::Formula;

/// Literal: `2 * var` for the positive, `2 * var + 1` for the negative literal.
pub type Lit = u32;

fn pos(var: u32) -> Lit {
    var << 1
}

fn neg(var: u32) -> Lit {
    (var << 1) | 1
}

fn var(lit: Lit) -> usize {
    (lit >> 1) as usize
}

fn atom_lit(f: &Formula) -> Option<Lit> {
    match f {
        Formula::Atom(a) => Some(pos(a.0)),
        Formula::Not(a) => Some(neg(a.0)),
        _ => None,
    }
}

/// A clause set over the universe atoms (variables `0..universe_len`) and
/// auxiliary variables, each auxiliary fully defined by a subformula.
#[derive(Clone, Debug)]
pub struct Cnf {
    universe_len: usize,
    aux: Vec<Formula>,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn from_formulas(universe_len: usize, formulas: &[Formula]) -> Self {
        let mut t = Translator {
            cnf: Cnf {
                universe_len,
                aux: Vec::new(),
                clauses: Vec::new(),
            },
            memo: HashMap::new(),
        };
        for f in formulas {
            t.assert(&simplify(f));
        }
        t.cnf
    }

    pub fn num_vars(&self) -> usize {
        self.universe_len + self.aux.len()
    }

    pub fn universe_len(&self) -> usize {
        self.universe_len
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn clauses_mut(&mut self) -> &mut Vec<Vec<Lit>> {
        &mut self.clauses
    }

    /// DIMACS text with a comment header naming every variable.
    pub fn to_dimacs(&self, universe: &Universe) -> String {
        let mut out = String::new();
        for a in 0..self.universe_len {
            let _ = writeln!(out, "c var {} = {}", a + 1, universe.name(Atom(a as u32)));
        }
        for (i, f) in self.aux.iter().enumerate() {
            let _ = writeln!(
                out,
                "c aux {} = {}",
                self.universe_len + i + 1,
                f.display(universe)
            );
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars(), self.clauses.len());
        for clause in &self.clauses {
            for &l in clause {
                let v = var(l) as i64 + 1;
                let _ = write!(out, "{} ", if l & 1 == 1 { -v } else { v });
            }
            out.push_str("0\n");
        }
        out
    }

    /// Enumerates all models projected on the universe variables, sorted.
    ///
    /// Returns `Err(partial)` with the models found so far when the deadline passes.
    pub fn enumerate(&self, deadline: Option<Instant>) -> Result<Vec<AtomSet>, Vec<AtomSet>> {
        let mut models = Dpll::new(self).run(deadline)?;
        models.sort();
        Ok(models)
    }
}

/// Pushes constants out of a formula; the result contains `True`/`False`
/// only at the root.
pub(crate) fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::And(cs) => {
            let mut out = Vec::with_capacity(cs.len());
            for c in cs {
                match simplify(c) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    s => out.push(s),
                }
            }
            Formula::and(out)
        }
        Formula::Or(cs) => {
            let mut out = Vec::with_capacity(cs.len());
            for c in cs {
                match simplify(c) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    s => out.push(s),
                }
            }
            Formula::or(out)
        }
        Formula::Iff(l, r) => match (simplify(l), simplify(r)) {
            (Formula::True, x) | (x, Formula::True) => x,
            (Formula::False, x) | (x, Formula::False) => negate(&x),
            (l, r) => Formula::iff(l, r),
        },
        other => other.clone(),
    }
}

pub(crate) fn negate(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(a) => Formula::Not(*a),
        Formula::Not(a) => Formula::Atom(*a),
        Formula::And(cs) => Formula::Or(cs.iter().map(negate).collect()),
        Formula::Or(cs) => Formula::And(cs.iter().map(negate).collect()),
        Formula::Iff(l, r) => Formula::iff((**l).clone(), negate(r)),
    }
}

struct Translator {
    cnf: Cnf,
    memo: HashMap<Formula, Lit>,
}

impl Translator {
    fn add(&mut self, mut clause: Vec<Lit>) {
        clause.sort_unstable();
        clause.dedup();
        if clause.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        self.cnf.clauses.push(clause);
    }

    fn lit(&mut self, f: &Formula) -> Lit {
        if let Some(l) = atom_lit(f) {
            return l;
        }
        if let Some(&l) = self.memo.get(f) {
            return l;
        }
        let d = (self.cnf.universe_len + self.cnf.aux.len()) as u32;
        self.cnf.aux.push(f.clone());
        match f {
            Formula::And(cs) => {
                let lits: Vec<Lit> = cs.iter().map(|c| self.lit(c)).collect();
                for &l in &lits {
                    self.add(vec![neg(d), l]);
                }
                let mut long: Vec<Lit> = lits.iter().map(|l| l ^ 1).collect();
                long.push(pos(d));
                self.add(long);
            }
            Formula::Or(cs) => {
                let lits: Vec<Lit> = cs.iter().map(|c| self.lit(c)).collect();
                for &l in &lits {
                    self.add(vec![pos(d), l ^ 1]);
                }
                let mut long = lits;
                long.push(neg(d));
                self.add(long);
            }
            Formula::Iff(a, b) => {
                let (la, lb) = (self.lit(a), self.lit(b));
                self.add(vec![neg(d), la ^ 1, lb]);
                self.add(vec![neg(d), la, lb ^ 1]);
                self.add(vec![pos(d), la, lb]);
                self.add(vec![pos(d), la ^ 1, lb ^ 1]);
            }
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Not(_) => {
                unreachable!("constants are simplified away and literals have no auxiliary")
            }
        }
        self.memo.insert(f.clone(), pos(d));
        pos(d)
    }

    /// Clauses `c -> head` for a disjunct `c` of an equation's right-hand side.
    fn implies_head(&mut self, c: &Formula, head: Lit) {
        match c {
            Formula::And(ls) if ls.iter().all(Formula::is_literal) => {
                let mut clause: Vec<Lit> = ls.iter().map(|l| atom_lit(l).unwrap() ^ 1).collect();
                clause.push(head);
                self.add(clause);
            }
            _ => {
                let l = self.lit(c);
                self.add(vec![l ^ 1, head]);
            }
        }
    }

    fn assert(&mut self, f: &Formula) {
        match f {
            Formula::True => {}
            Formula::False => self.cnf.clauses.push(Vec::new()),
            Formula::Atom(_) | Formula::Not(_) => self.add(vec![atom_lit(f).unwrap()]),
            Formula::And(cs) => cs.iter().for_each(|c| self.assert(c)),
            Formula::Or(cs) => {
                let clause = cs.iter().map(|c| self.lit(c)).collect();
                self.add(clause);
            }
            Formula::Iff(l, r) => {
                let (head, body) = match (atom_lit(l), atom_lit(r)) {
                    (Some(h), _) => (h, &**r),
                    (None, Some(h)) => (h, &**l),
                    (None, None) => {
                        let (la, lb) = (self.lit(l), self.lit(r));
                        self.add(vec![la ^ 1, lb]);
                        self.add(vec![la, lb ^ 1]);
                        return;
                    }
                };
                // Defining-equation shape: head <-> d1 | d2 | ... encoded
                // two-sided, auxiliaries only for non-literal disjuncts.
                match body {
                    Formula::Or(cs) => {
                        let mut forward = vec![head ^ 1];
                        for c in cs {
                            forward.push(self.lit(c));
                            self.implies_head(c, head);
                        }
                        self.add(forward);
                    }
                    Formula::And(cs) => {
                        let lits: Vec<Lit> = cs.iter().map(|c| self.lit(c)).collect();
                        for &l in &lits {
                            self.add(vec![head ^ 1, l]);
                        }
                        let mut back: Vec<Lit> = lits.iter().map(|l| l ^ 1).collect();
                        back.push(head);
                        self.add(back);
                    }
                    other => {
                        let lb = self.lit(other);
                        self.add(vec![head ^ 1, lb]);
                        self.add(vec![head, lb ^ 1]);
                    }
                }
            }
        }
    }
}

const UNASSIGNED: u8 = 2;

struct Dpll {
    universe_len: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    units: Vec<Lit>,
    trivially_unsat: bool,
    value: Vec<u8>,
    trail: Vec<Lit>,
    /// (trail length before the decision, decision literal, second branch taken)
    decisions: Vec<(usize, Lit, bool)>,
    qhead: usize,
}

fn lit_value(value: &[u8], l: Lit) -> u8 {
    match value[var(l)] {
        UNASSIGNED => UNASSIGNED,
        v => v ^ (l as u8 & 1),
    }
}

impl Dpll {
    fn new(cnf: &Cnf) -> Self {
        let n = cnf.num_vars();
        let mut s = Dpll {
            universe_len: cnf.universe_len,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            units: Vec::new(),
            trivially_unsat: false,
            value: vec![UNASSIGNED; n],
            trail: Vec::new(),
            decisions: Vec::new(),
            qhead: 0,
        };
        for clause in &cnf.clauses {
            match clause.len() {
                0 => s.trivially_unsat = true,
                1 => s.units.push(clause[0]),
                _ => {
                    let ci = s.clauses.len();
                    s.watches[clause[0] as usize].push(ci);
                    s.watches[clause[1] as usize].push(ci);
                    s.clauses.push(clause.clone());
                }
            }
        }
        s
    }

    fn enqueue(&mut self, l: Lit) -> bool {
        match lit_value(&self.value, l) {
            1 => true,
            0 => false,
            _ => {
                self.value[var(l)] = (l as u8 & 1) ^ 1;
                self.trail.push(l);
                true
            }
        }
    }

    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let mut ws = std::mem::take(&mut self.watches[falsified as usize]);
            let (mut i, mut j) = (0, 0);
            let mut ok = true;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                if lit_value(&self.value, clause[0]) == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                if let Some(k) = (2..clause.len()).find(|&k| lit_value(&self.value, clause[k]) != 0)
                {
                    clause.swap(1, k);
                    self.watches[clause[1] as usize].push(ci);
                    continue;
                }
                ws[j] = ci;
                j += 1;
                let first = clause[0];
                if lit_value(&self.value, first) == 0 {
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                    ok = false;
                } else {
                    self.value[var(first)] = (first as u8 & 1) ^ 1;
                    self.trail.push(first);
                }
            }
            ws.truncate(j);
            self.watches[falsified as usize] = ws;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Chronological backtracking: flips the deepest decision not yet flipped.
    fn backtrack(&mut self) -> bool {
        while let Some((at, lit, flipped)) = self.decisions.pop() {
            for l in self.trail.drain(at..) {
                self.value[var(l)] = UNASSIGNED;
            }
            self.qhead = at;
            if !flipped {
                self.decisions.push((at, lit ^ 1, true));
                self.enqueue(lit ^ 1);
                return true;
            }
        }
        false
    }

    fn run(mut self, deadline: Option<Instant>) -> Result<Vec<AtomSet>, Vec<AtomSet>> {
        let mut models = Vec::new();
        if self.trivially_unsat {
            return Ok(models);
        }
        for l in std::mem::take(&mut self.units) {
            if !self.enqueue(l) {
                return Ok(models);
            }
        }
        let mut steps: u64 = 0;
        loop {
            steps += 1;
            if steps.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(models);
            }
            if !self.propagate() {
                if !self.backtrack() {
                    break;
                }
                continue;
            }
            match self.value.iter().position(|&v| v == UNASSIGNED) {
                Some(v) => {
                    // lowest id first, false first
                    let lit = neg(v as u32);
                    self.decisions.push((self.trail.len(), lit, false));
                    self.enqueue(lit);
                }
                None => {
                    models.push(
                        (0..self.universe_len)
                            .filter(|&v| self.value[v] == 1)
                            .map(|v| Atom(v as u32))
                            .collect(),
                    );
                    if !self.backtrack() {
                        break;
                    }
                }
            }
        }
        Ok(models)
    }
}
