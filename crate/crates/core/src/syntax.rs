//! Normal propositional programs: data model, text format and dependency analysis.
//!
//! The text format is one clause per `.`:
//!
//! ```text
//! % Example program
//! p.
//! q :- p, not r.
//! r :- not q.
//! #atoms t.
//! ```
//!
//! Atoms declared with `#atoms` come first in the atom order, in declaration
//! order; every other atom follows in order of first occurrence.

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::atoms::{Atom, AtomSet, Universe};
use crate::error::{Error, Result};

/// `head :- pos, not neg.`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Atom,
    pub pos: AtomSet,
    pub neg: AtomSet,
}

impl Clause {
    pub fn new(head: Atom, pos: AtomSet, neg: AtomSet) -> Self {
        Self { head, pos, neg }
    }

    pub fn fact(head: Atom) -> Self {
        Self::new(head, AtomSet::new(), AtomSet::new())
    }

    pub fn is_horn(&self) -> bool {
        self.neg.is_empty()
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> ClauseDisplay<'a> {
        ClauseDisplay {
            clause: self,
            universe,
        }
    }
}

pub struct ClauseDisplay<'a> {
    clause: &'a Clause,
    universe: &'a Universe,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.universe;
        f.write_str(u.name(self.clause.head))?;
        let body: Vec<String> = self
            .clause
            .pos
            .iter()
            .map(|a| u.name(a).to_string())
            .chain(self.clause.neg.iter().map(|a| format!("not {}", u.name(a))))
            .collect();
        if !body.is_empty() {
            write!(f, " :- {}", body.join(", "))?;
        }
        f.write_str(".")
    }
}

/// A finite normal propositional program over an ordered universe.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    universe: Universe,
    clauses: Vec<Clause>,
}

impl Program {
    /// Panics if a clause mentions an atom outside `universe`.
    pub fn new(universe: Universe, clauses: Vec<Clause>) -> Self {
        let n = universe.len();
        for clause in &clauses {
            let max = [
                Some(clause.head),
                clause.pos.max_atom(),
                clause.neg.max_atom(),
            ]
            .into_iter()
            .flatten()
            .max();
            assert!(
                max.is_none_or(|a| a.index() < n),
                "clause mentions an atom outside the universe"
            );
        }
        Self { universe, clauses }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parsed = parse_source(text, false)?;
        let mut universe = Universe::from_names(parsed.declared.iter().map(|(n, _)| n.as_str()));
        let mut clauses = Vec::with_capacity(parsed.rules.len());
        for rule in &parsed.rules {
            let head = universe.intern(&rule.head);
            let mut pos = AtomSet::new();
            let mut neg = AtomSet::new();
            for lit in &rule.body {
                match lit {
                    RawLiteral::Pos(name) => pos.insert(universe.intern(name)),
                    RawLiteral::Neg(name) => neg.insert(universe.intern(name)),
                    RawLiteral::Card(c) => {
                        return Err(Error::Syntax {
                            line: c.line,
                            column: c.column,
                            message: "cardinality constraints are not allowed in normal programs"
                                .into(),
                        })
                    }
                };
            }
            clauses.push(Clause::new(head, pos, neg));
        }
        Ok(Self { universe, clauses })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn atom(&self, name: &str) -> Result<Atom> {
        self.universe
            .lookup(name)
            .ok_or_else(|| Error::UnknownAtom {
                name: name.to_string(),
            })
    }

    /// Parses a comma separated list of atom names into a set.
    pub fn atom_set(&self, names: &str) -> Result<AtomSet> {
        names
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|n| self.atom(n))
            .collect()
    }

    pub fn clause_text(&self, clause: &Clause) -> String {
        clause.display(&self.universe).to_string()
    }

    /// The subprogram of clauses without negative literals.
    pub fn horn_part(&self) -> Program {
        Program {
            universe: self.universe.clone(),
            clauses: self
                .clauses
                .iter()
                .filter(|c| c.is_horn())
                .cloned()
                .collect(),
        }
    }

    pub fn is_horn(&self) -> bool {
        self.clauses.iter().all(Clause::is_horn)
    }

    pub fn is_purely_negative(&self) -> bool {
        self.clauses.iter().all(|c| c.pos.is_empty())
    }

    /// True iff no strongly connected component of the atom dependency graph
    /// contains a negative edge.
    pub fn is_stratified(&self) -> bool {
        let mut graph = DiGraph::<Atom, bool>::with_capacity(self.universe.len(), 0);
        let nodes: Vec<_> = self.universe.atoms().map(|a| graph.add_node(a)).collect();
        for clause in &self.clauses {
            let head = nodes[clause.head.index()];
            for a in &clause.pos {
                graph.add_edge(nodes[a.index()], head, false);
            }
            for a in &clause.neg {
                graph.add_edge(nodes[a.index()], head, true);
            }
        }
        let mut component = vec![0; self.universe.len()];
        for (i, scc) in tarjan_scc(&graph).into_iter().enumerate() {
            for node in scc {
                component[node.index()] = i;
            }
        }
        graph.edge_indices().all(|e| {
            let (from, to) = graph.edge_endpoints(e).unwrap();
            !graph[e] || component[from.index()] != component[to.index()]
        })
    }

    pub(crate) fn heads_of(&self, atom: Atom) -> impl Iterator<Item = (usize, &Clause)> {
        self.clauses
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.head == atom)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // The `#atoms` line is only needed when the clauses alone would not
        // reproduce the universe and its order.
        let mut implied = Universe::new();
        for c in &self.clauses {
            implied.intern(self.universe.name(c.head));
            for a in c.pos.iter().chain(c.neg.iter()) {
                implied.intern(self.universe.name(a));
            }
        }
        if implied != self.universe {
            writeln!(f, "#atoms {}.", self.universe.names().join(", "))?;
        }
        for c in &self.clauses {
            writeln!(f, "{}", c.display(&self.universe))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Lexer and raw parser shared with the cardinality-constraint syntax.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Name(String),
    If,
    Not,
    Comma,
    Semi,
    Dot,
    LBrace,
    RBrace,
    Atoms,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut push = |tok, len: usize, i: &mut usize, column: &mut usize| {
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += len;
            *column += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            ':' if chars.get(i + 1) == Some(&'-') => push(Tok::If, 2, &mut i, &mut column),
            ',' => push(Tok::Comma, 1, &mut i, &mut column),
            ';' => push(Tok::Semi, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            '{' => push(Tok::LBrace, 1, &mut i, &mut column),
            '}' => push(Tok::RBrace, 1, &mut i, &mut column),
            '#' => {
                let word: String = chars[i + 1..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .collect();
                if word != "atoms" {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: format!("unknown directive `#{word}`"),
                    });
                }
                push(Tok::Atoms, word.len() + 1, &mut i, &mut column);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let word: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .collect();
                let len = word.len();
                let tok = if word == "not" {
                    Tok::Not
                } else {
                    Tok::Name(word)
                };
                push(tok, len, &mut i, &mut column);
            }
            c if c.is_ascii_digit() => {
                let word: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                if chars
                    .get(i + word.len())
                    .is_some_and(|c| c.is_ascii_alphabetic() || *c == '_')
                {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: "atom names must not start with a digit".into(),
                    });
                }
                let len = word.len();
                push(Tok::Name(word), len, &mut i, &mut column);
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub(crate) struct RawCard {
    pub lower: Option<u32>,
    pub atoms: Vec<String>,
    pub upper: Option<u32>,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug)]
pub(crate) enum RawLiteral {
    Pos(String),
    Neg(String),
    Card(RawCard),
}

#[derive(Clone, Debug)]
pub(crate) struct RawRule {
    pub head: String,
    pub body: Vec<RawLiteral>,
}

#[derive(Debug, Default)]
pub(crate) struct RawSource {
    pub declared: Vec<(String, (usize, usize))>,
    pub rules: Vec<RawRule>,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    cardinality: bool,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.pos + 1).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.eof)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.error("expected an atom"),
        }
    }

    fn bound(&mut self) -> Result<Option<u32>> {
        if let Some(Tok::Name(n)) = self.peek() {
            if let Ok(v) = n.parse::<u32>() {
                self.pos += 1;
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    fn card(&mut self) -> Result<RawCard> {
        let (line, column) = self.here();
        let lower = self.bound()?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut atoms = vec![self.name()?];
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            atoms.push(self.name()?);
        }
        self.expect(Tok::RBrace, "`}`")?;
        let upper = self.bound()?;
        Ok(RawCard {
            lower,
            atoms,
            upper,
            line,
            column,
        })
    }

    fn starts_card(&self) -> bool {
        match (self.peek(), self.peek2()) {
            (Some(Tok::LBrace), _) => true,
            (Some(Tok::Name(n)), Some(Tok::LBrace)) => n.parse::<u32>().is_ok(),
            _ => false,
        }
    }

    fn literal(&mut self) -> Result<RawLiteral> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(RawLiteral::Neg(self.name()?));
        }
        if self.cardinality && self.starts_card() {
            return Ok(RawLiteral::Card(self.card()?));
        }
        Ok(RawLiteral::Pos(self.name()?))
    }

    fn source(&mut self) -> Result<RawSource> {
        let mut out = RawSource::default();
        while self.peek().is_some() {
            if self.peek() == Some(&Tok::Atoms) {
                self.pos += 1;
                loop {
                    let at = self.here();
                    let name = self.name()?;
                    if !out.declared.iter().any(|(n, _)| *n == name) {
                        out.declared.push((name, at));
                    }
                    if self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect(Tok::Dot, "`.` after `#atoms` declaration")?;
                continue;
            }
            if self.starts_card() {
                let (line, column) = self.here();
                return Err(Error::CompoundHead { line, column });
            }
            let head = self.name()?;
            let mut body = Vec::new();
            if self.peek() == Some(&Tok::If) {
                self.pos += 1;
                body.push(self.literal()?);
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    body.push(self.literal()?);
                }
            }
            self.expect(Tok::Dot, "`.` at the end of the clause")?;
            out.rules.push(RawRule { head, body });
        }
        Ok(out)
    }
}

pub(crate) fn parse_source(text: &str, cardinality: bool) -> Result<RawSource> {
    let tokens = lex(text)?;
    let line = text.lines().count().max(1);
    let column = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Parser {
        tokens,
        pos: 0,
        cardinality,
        eof: (line, column),
    }
    .source()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EX1: &str = "p. q :- p, not r. r :- not q. s :- not t.";

    fn set(p: &Program, names: &str) -> AtomSet {
        p.atom_set(names).unwrap()
    }

    #[test]
    fn parses_four_clause_example() {
        let p = Program::parse(EX1).unwrap();
        assert_eq!(p.universe().names(), &["p", "q", "r", "s", "t"]);
        assert_eq!(p.len(), 4);
        let c2 = &p.clauses()[1];
        assert_eq!(c2.head, p.atom("q").unwrap());
        assert_eq!(c2.pos, set(&p, "p"));
        assert_eq!(c2.neg, set(&p, "r"));
        assert_eq!(p.clause_text(&p.clauses()[2]), "r :- not q.");
    }

    #[test]
    fn empty_and_self_referential() {
        let p = Program::parse("").unwrap();
        assert!(p.is_empty() && p.universe().is_empty());
        let p = Program::parse("p :- not p.").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.universe().names(), &["p"]);
    }

    #[test]
    fn atoms_directive_comes_first_and_is_idempotent() {
        let p = Program::parse("q :- not r. % comment\n#atoms z, q, z.").unwrap();
        assert_eq!(p.universe().names(), &["z", "q", "r"]);
        assert_eq!(p.to_string(), "#atoms z, q, r.\nq :- not r.\n");
    }

    #[test]
    fn syntax_errors_carry_position() {
        match Program::parse("p.\nq :- , r.") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Program::parse("p :- q"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(Program::parse("p :- 1x.").is_err());
        assert!(Program::parse("#foo p.").is_err());
        assert!(Program::parse("p :- not.").is_err());
    }

    #[test]
    fn integer_atoms_are_names() {
        let p = Program::parse("1 :- not 2.").unwrap();
        assert_eq!(p.universe().names(), &["1", "2"]);
    }

    #[test]
    fn horn_part_of_example() {
        let p = Program::parse(EX1).unwrap();
        let h = p.horn_part();
        assert_eq!(h.len(), 1);
        assert_eq!(h.clause_text(&h.clauses()[0]), "p.");
        assert_eq!(h.universe(), p.universe());

        let horn = Program::parse("p. q :- p.").unwrap();
        assert_eq!(horn.horn_part(), horn);

        let neg = Program::parse("p :- not q.").unwrap();
        assert!(neg.horn_part().is_empty());
        assert_eq!(neg.horn_part().universe().names(), &["p", "q"]);
    }

    #[test]
    fn purely_negative() {
        assert!(Program::parse("p :- not q. q :- not p.")
            .unwrap()
            .is_purely_negative());
        assert!(!Program::parse(EX1).unwrap().is_purely_negative());
        assert!(Program::default().is_purely_negative());
    }

    #[test]
    fn stratification() {
        assert!(!Program::parse(EX1).unwrap().is_stratified());
        assert!(Program::parse("p. q :- p. p :- q.")
            .unwrap()
            .is_stratified());
        assert!(Program::parse("s :- not t.").unwrap().is_stratified());
        assert!(!Program::parse("p :- not p.").unwrap().is_stratified());
        assert!(!Program::parse("p :- q. q :- not p.")
            .unwrap()
            .is_stratified());
    }

    #[test]
    fn display_round_trips() {
        for text in [EX1, "", "#atoms a. b :- not c, d.", "p :- not p, p."] {
            let p = Program::parse(text).unwrap();
            assert_eq!(Program::parse(&p.to_string()).unwrap(), p);
        }
    }
}
