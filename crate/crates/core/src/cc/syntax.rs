use std::cmp::Ordering;
use std::fmt;

use crate::atoms::{Atom, AtomSet, Universe};
use crate::equations::support_cmp;
use crate::error::{Error, Result};
use crate::syntax::{parse_source, Program, RawLiteral};

/// `l {X} u`; absent bounds impose nothing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CardConstraint {
    pub lower: Option<u32>,
    pub atoms: AtomSet,
    pub upper: Option<u32>,
}

impl CardConstraint {
    /// Drops the bounds that carry no information: a lower bound of 0 and an
    /// upper bound of at least `|X|`.
    pub fn new(lower: Option<u32>, atoms: AtomSet, upper: Option<u32>) -> Self {
        let size = atoms.len() as u32;
        Self {
            lower: lower.filter(|&l| l > 0),
            upper: upper.filter(|&u| u < size),
            atoms,
        }
    }

    /// `l <= |M ∩ X| <= u`.
    pub fn satisfied_by(&self, m: &AtomSet) -> bool {
        let k = self.atoms.intersection_len(m) as u32;
        self.lower.is_none_or(|l| l <= k) && self.upper.is_none_or(|u| k <= u)
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, universe: &Universe) -> fmt::Result {
        if let Some(l) = self.lower {
            write!(f, "{l} ")?;
        }
        write_braced(f, universe, &self.atoms)?;
        if let Some(u) = self.upper {
            write!(f, " {u}")?;
        }
        Ok(())
    }
}

fn write_braced(f: &mut fmt::Formatter<'_>, universe: &Universe, atoms: &AtomSet) -> fmt::Result {
    f.write_str("{")?;
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            f.write_str("; ")?;
        }
        f.write_str(universe.name(a))?;
    }
    f.write_str("}")
}

/// `p :- C1, ..., Cm.` as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcRule {
    pub head: Atom,
    pub body: Vec<CardConstraint>,
}

/// Lower part `l X` of a split constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lower {
    pub bound: u32,
    pub atoms: AtomSet,
}

/// Upper part `X u` of a split constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Upper {
    pub atoms: AtomSet,
    pub bound: u32,
}

impl Upper {
    pub fn satisfied_by(&self, m: &AtomSet) -> bool {
        self.atoms.intersection_len(m) as u32 <= self.bound
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Upper, &'a Universe);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_braced(f, self.1, &self.0.atoms)?;
                write!(f, " {}", self.0.bound)
            }
        }
        D(self, universe)
    }
}

impl Ord for Upper {
    fn cmp(&self, other: &Self) -> Ordering {
        support_cmp(&self.atoms, &other.atoms).then(self.bound.cmp(&other.bound))
    }
}

impl PartialOrd for Upper {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A clause in split form `p :- l1 X1, ..., X1 u1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcClause {
    pub head: Atom,
    pub lowers: Vec<Lower>,
    pub uppers: Vec<Upper>,
}

impl CcClause {
    pub fn is_cc_horn(&self) -> bool {
        self.uppers.is_empty()
    }

    /// Every lower constraint is met by `derived`.
    pub fn lowers_met(&self, derived: &AtomSet) -> bool {
        self.lowers
            .iter()
            .all(|l| l.atoms.intersection_len(derived) as u32 >= l.bound)
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> impl fmt::Display + 'a {
        struct D<'a>(&'a CcClause, &'a Universe);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let (c, u) = (self.0, self.1);
                f.write_str(u.name(c.head))?;
                let mut first = true;
                let mut sep = |f: &mut fmt::Formatter<'_>| {
                    let s = if first { " :- " } else { ", " };
                    first = false;
                    f.write_str(s)
                };
                for l in &c.lowers {
                    sep(f)?;
                    write!(f, "{} ", l.bound)?;
                    write_braced(f, u, &l.atoms)?;
                }
                for up in &c.uppers {
                    sep(f)?;
                    write!(f, "{}", up.display(u))?;
                }
                f.write_str(".")
            }
        }
        D(self, universe)
    }
}

/// Splits every `l X u` of the body into `l X` and `X u`; omitted bounds
/// produce no constraint.
pub fn cc_transform(rule: &CcRule) -> CcClause {
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    for c in &rule.body {
        if let Some(bound) = c.lower {
            lowers.push(Lower {
                bound,
                atoms: c.atoms.clone(),
            });
        }
    }
    for c in &rule.body {
        if let Some(bound) = c.upper {
            uppers.push(Upper {
                atoms: c.atoms.clone(),
                bound,
            });
        }
    }
    CcClause {
        head: rule.head,
        lowers,
        uppers,
    }
}

/// A program with cardinality-constraint bodies and atomic heads.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CcProgram {
    universe: Universe,
    rules: Vec<CcRule>,
}

impl CcProgram {
    pub fn new(universe: Universe, rules: Vec<CcRule>) -> Self {
        Self { universe, rules }
    }

    /// Parses `p :- 1 {q; r} 1, {s} 0, t, not u.`; a bare atom `q` stands for
    /// `1 {q}` and `not q` for `{q} 0`.
    pub fn parse(text: &str) -> Result<Self> {
        let parsed = parse_source(text, true)?;
        let mut universe = Universe::from_names(parsed.declared.iter().map(|(n, _)| n.as_str()));
        let mut rules = Vec::with_capacity(parsed.rules.len());
        for raw in &parsed.rules {
            let head = universe.intern(&raw.head);
            let mut body = Vec::with_capacity(raw.body.len());
            for lit in &raw.body {
                body.push(match lit {
                    RawLiteral::Pos(name) => {
                        let atoms = AtomSet::from_iter([universe.intern(name)]);
                        CardConstraint::new(Some(1), atoms, None)
                    }
                    RawLiteral::Neg(name) => {
                        let atoms = AtomSet::from_iter([universe.intern(name)]);
                        CardConstraint::new(None, atoms, Some(0))
                    }
                    RawLiteral::Card(raw) => {
                        if let (Some(l), Some(u)) = (raw.lower, raw.upper) {
                            if l > u {
                                return Err(Error::Syntax {
                                    line: raw.line,
                                    column: raw.column,
                                    message: format!("lower bound {l} exceeds upper bound {u}"),
                                });
                            }
                        }
                        let atoms = raw.atoms.iter().map(|n| universe.intern(n)).collect();
                        CardConstraint::new(raw.lower, atoms, raw.upper)
                    }
                });
            }
            rules.push(CcRule { head, body });
        }
        Ok(Self { universe, rules })
    }

    /// The constraint reading of a normal program: `q` becomes `1 {q}` and
    /// `not r` becomes `{r} 0`.
    pub fn from_normal(p: &Program) -> Self {
        let single = |a: Atom| AtomSet::from_iter([a]);
        let rules = p
            .clauses()
            .iter()
            .map(|c| CcRule {
                head: c.head,
                body: c
                    .pos
                    .iter()
                    .map(|a| CardConstraint::new(Some(1), single(a), None))
                    .chain(
                        c.neg
                            .iter()
                            .map(|a| CardConstraint::new(None, single(a), Some(0))),
                    )
                    .collect(),
            })
            .collect();
        Self {
            universe: p.universe().clone(),
            rules,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn rules(&self) -> &[CcRule] {
        &self.rules
    }

    pub fn atom(&self, name: &str) -> Result<Atom> {
        self.universe
            .lookup(name)
            .ok_or_else(|| Error::UnknownAtom {
                name: name.to_string(),
            })
    }

    pub fn atom_set(&self, names: &str) -> Result<AtomSet> {
        names
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|n| self.atom(n))
            .collect()
    }

    pub fn transform(&self) -> SplitProgram {
        SplitProgram {
            universe: self.universe.clone(),
            clauses: self.rules.iter().map(cc_transform).collect(),
        }
    }
}

impl fmt::Display for CcProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#atoms {}.", self.universe.names().join(", "))?;
        for rule in &self.rules {
            f.write_str(self.universe.name(rule.head))?;
            for (i, c) in rule.body.iter().enumerate() {
                f.write_str(if i == 0 { " :- " } else { ", " })?;
                c.write(f, &self.universe)?;
            }
            writeln!(f, ".")?;
        }
        Ok(())
    }
}

/// A program of split clauses; CC-Horn when no clause has upper constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitProgram {
    pub universe: Universe,
    pub clauses: Vec<CcClause>,
}

impl SplitProgram {
    pub fn is_cc_horn(&self) -> bool {
        self.clauses.iter().all(CcClause::is_cc_horn)
    }

    pub fn clause_text(&self, c: &CcClause) -> String {
        c.display(&self.universe).to_string()
    }
}

impl fmt::Display for SplitProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#atoms {}.", self.universe.names().join(", "))?;
        for c in &self.clauses {
            writeln!(f, "{}", c.display(&self.universe))?;
        }
        Ok(())
    }
}
