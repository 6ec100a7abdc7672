//! Propositional rule bases: atoms, literals, rules, directives.
//!
//! The surface syntax (`.lp`) is
//!
//! ```text
//! rule      := atom ":-" body "." | atom "." | ":-" body "."
//! body      := literal ("," literal)*
//! literal   := "not" atom | atom
//! directive := "#abducible" atom "." | "#pred" atom "::" 'text' "."
//! ```
//!
//! with `%` comments running to the end of the line. Atoms match
//! `[a-z][a-zA-Z0-9_]*`; the infix `__` is reserved for hidden atoms created
//! by [`desugar_abducibles`].

mod desugar;
mod lexer;
mod parser;
mod print;
mod validate;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub use desugar::{desugar_abducibles, hidden_name, DesugarError};
pub use parser::{parse_program, parse_query, ParseError, QueryLiteral};
pub use validate::{validate, ValidationReport};

/// Interned identifier of an atom inside one [`Program`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub(crate) u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    /// Negation as failure, written `not`.
    Naf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: AtomId,
    pub sign: Sign,
}

impl Literal {
    pub fn pos(atom: AtomId) -> Self {
        Literal { atom, sign: Sign::Positive }
    }

    pub fn naf(atom: AtomId) -> Self {
        Literal { atom, sign: Sign::Naf }
    }

    pub fn is_naf(self) -> bool {
        self.sign == Sign::Naf
    }

    /// The complementary literal; `not not p` collapses to `p`.
    pub fn negate(self) -> Self {
        match self.sign {
            Sign::Positive => Literal::naf(self.atom),
            Sign::Naf => Literal::pos(self.atom),
        }
    }
}

/// Where a rule came from. Loop rules are generated by [`desugar_abducibles`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleOrigin {
    Source,
    AbducibleLoop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    /// `None` for a constraint.
    pub head: Option<AtomId>,
    pub body: Vec<Literal>,
    pub origin: RuleOrigin,
}

impl Rule {
    pub fn fact(head: AtomId) -> Self {
        Rule { head: Some(head), body: Vec::new(), origin: RuleOrigin::Source }
    }

    pub fn new(head: AtomId, body: Vec<Literal>) -> Self {
        Rule { head: Some(head), body, origin: RuleOrigin::Source }
    }

    pub fn constraint(body: Vec<Literal>) -> Self {
        Rule { head: None, body, origin: RuleOrigin::Source }
    }

    pub fn is_fact(&self) -> bool {
        self.head.is_some() && self.body.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    Abducible(AtomId),
    /// `#pred atom :: 'text'.`
    Template(AtomId, String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("`{0}` is not a valid atom name (expected [a-z][a-zA-Z0-9_]*)")]
    InvalidName(String),
    #[error("`{0}` uses the reserved `__` infix")]
    ReservedName(String),
    #[error("a constraint needs a non-empty body")]
    EmptyConstraint,
    #[error("duplicate #pred template for `{0}`")]
    DuplicateTemplate(String),
    #[error("unknown atom id {0}")]
    UnknownAtom(u32),
}

#[derive(Clone, Debug)]
struct AtomInfo {
    name: String,
    hidden: bool,
}

/// A parsed rule base. Rule order is significant: the engine tries rules in
/// source order.
#[derive(Clone, Debug, Default)]
pub struct Program {
    atoms: Vec<AtomInfo>,
    index: BTreeMap<String, AtomId>,
    rules: Vec<Rule>,
    directives: Vec<Directive>,
}

pub(crate) fn check_name(name: &str) -> Result<(), ProgramError> {
    let mut chars = name.chars();
    let valid = matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "not";
    if !valid {
        return Err(ProgramError::InvalidName(name.to_string()));
    }
    if name.contains("__") {
        return Err(ProgramError::ReservedName(name.to_string()));
    }
    Ok(())
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.atoms.len() as u32).map(AtomId)
    }

    pub fn atom(&self, name: &str) -> Option<AtomId> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        atom.index() < self.atoms.len()
    }

    /// Name of an atom. Panics on an id from another program.
    pub fn name(&self, atom: AtomId) -> &str {
        &self.atoms[atom.index()].name
    }

    pub fn is_hidden(&self, atom: AtomId) -> bool {
        self.atoms[atom.index()].hidden
    }

    /// Interns a user-visible atom, validating its name.
    pub fn intern(&mut self, name: &str) -> Result<AtomId, ProgramError> {
        if let Some(id) = self.index.get(name) {
            return Ok(*id);
        }
        check_name(name)?;
        Ok(self.push_atom(name.to_string(), false))
    }

    pub(crate) fn intern_hidden(&mut self, name: String) -> AtomId {
        if let Some(id) = self.index.get(&name) {
            self.atoms[id.index()].hidden = true;
            return *id;
        }
        self.push_atom(name, true)
    }

    fn push_atom(&mut self, name: String, hidden: bool) -> AtomId {
        let id = AtomId(self.atoms.len() as u32);
        self.index.insert(name.clone(), id);
        self.atoms.push(AtomInfo { name, hidden });
        id
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn directives(&self) -> &[Directive] {
        &self.directives
    }

    pub fn add_rule(&mut self, rule: Rule) -> Result<(), ProgramError> {
        if rule.is_constraint() && rule.body.is_empty() {
            return Err(ProgramError::EmptyConstraint);
        }
        let ids = rule.head.into_iter().chain(rule.body.iter().map(|l| l.atom));
        for id in ids {
            if !self.contains(id) {
                return Err(ProgramError::UnknownAtom(id.0));
            }
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn add_directive(&mut self, directive: Directive) -> Result<(), ProgramError> {
        match &directive {
            Directive::Template(atom, _) => {
                if !self.contains(*atom) {
                    return Err(ProgramError::UnknownAtom(atom.0));
                }
                if self.template(*atom).is_some() {
                    return Err(ProgramError::DuplicateTemplate(self.name(*atom).to_string()));
                }
            }
            Directive::Abducible(atom) => {
                if !self.contains(*atom) {
                    return Err(ProgramError::UnknownAtom(atom.0));
                }
                if self.abducible_directives().any(|a| a == *atom) {
                    return Ok(());
                }
            }
        }
        self.directives.push(directive);
        Ok(())
    }

    pub(crate) fn retain_directives(&mut self, keep: impl FnMut(&Directive) -> bool) {
        self.directives.retain(keep);
    }

    /// `#pred` text for an atom, if declared.
    pub fn template(&self, atom: AtomId) -> Option<&str> {
        self.directives.iter().find_map(|d| match d {
            Directive::Template(a, text) if *a == atom => Some(text.as_str()),
            _ => None,
        })
    }

    /// Atoms named by `#abducible` directives that have not been desugared yet.
    pub fn abducible_directives(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.directives.iter().filter_map(|d| match d {
            Directive::Abducible(a) => Some(*a),
            _ => None,
        })
    }

    /// Visible atoms whose even loop was generated by desugaring, paired with
    /// their hidden complement.
    pub fn desugared_abducibles(&self) -> Vec<(AtomId, AtomId)> {
        self.rules
            .iter()
            .filter(|r| r.origin == RuleOrigin::AbducibleLoop)
            .filter_map(|r| {
                let head = r.head?;
                if self.is_hidden(head) {
                    return None;
                }
                Some((head, r.body.first()?.atom))
            })
            .collect()
    }

    /// Copy of the program with `atoms` added as facts (after existing rules).
    pub fn with_facts(&self, atoms: impl IntoIterator<Item = AtomId>) -> Program {
        let mut out = self.clone();
        for atom in atoms {
            out.rules.push(Rule::fact(atom));
        }
        out
    }

    pub(crate) fn push_rule_unchecked(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    /// Resolves parsed query literals against this program's atom table.
    pub fn resolve_query(&self, query: &[QueryLiteral]) -> Result<Vec<Literal>, String> {
        query
            .iter()
            .map(|q| {
                let atom = self.atom(&q.name).ok_or_else(|| q.name.clone())?;
                Ok(Literal { atom, sign: q.sign })
            })
            .collect()
    }

    pub fn display_literal(&self, lit: Literal) -> LiteralDisplay<'_> {
        LiteralDisplay { program: self, lit }
    }
}

/// Structural equality: same rules and directives, compared by atom name.
impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        let lit_eq = |a: &Literal, b: &Literal| a.sign == b.sign && self.name(a.atom) == other.name(b.atom);
        let rules_eq = self.rules.len() == other.rules.len()
            && self.rules.iter().zip(&other.rules).all(|(a, b)| {
                a.origin == b.origin
                    && a.head.map(|h| self.name(h)) == b.head.map(|h| other.name(h))
                    && a.body.len() == b.body.len()
                    && a.body.iter().zip(&b.body).all(|(x, y)| lit_eq(x, y))
            });
        let directives_eq = self.directives.len() == other.directives.len()
            && self.directives.iter().zip(&other.directives).all(|pair| match pair {
                (Directive::Abducible(a), Directive::Abducible(b)) => self.name(*a) == other.name(*b),
                (Directive::Template(a, x), Directive::Template(b, y)) => self.name(*a) == other.name(*b) && x == y,
                _ => false,
            });
        rules_eq && directives_eq
    }
}

pub struct LiteralDisplay<'a> {
    program: &'a Program,
    lit: Literal,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lit.is_naf() {
            f.write_str("not ")?;
        }
        f.write_str(self.program.name(self.lit.atom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_idempotent() {
        let mut p = Program::new();
        let a = p.intern("bird_tweety").unwrap();
        let b = p.intern("bird_tweety").unwrap();
        assert_eq!(a, b);
        assert_eq!(p.atom_count(), 1);
    }

    #[test]
    fn rejects_bad_names() {
        let mut p = Program::new();
        assert!(matches!(p.intern("Bird"), Err(ProgramError::InvalidName(_))));
        assert!(matches!(p.intern("not"), Err(ProgramError::InvalidName(_))));
        assert!(matches!(p.intern("a__b"), Err(ProgramError::ReservedName(_))));
        assert!(matches!(p.intern(""), Err(ProgramError::InvalidName(_))));
    }

    #[test]
    fn constraint_needs_body() {
        let mut p = Program::new();
        assert_eq!(p.add_rule(Rule::constraint(Vec::new())), Err(ProgramError::EmptyConstraint));
    }

    #[test]
    fn negate_round_trips() {
        let l = Literal::pos(AtomId(3));
        assert_eq!(l.negate().negate(), l);
        assert!(l.negate().is_naf());
    }
}
