//! Brute-force stable models through the Gelfond-Lifschitz reduct.
//!
//! Ground truth for tests; it shares nothing with [`crate::engine`] beyond the
//! program representation. Interpretations are bit sets over the atom
//! universe. Atoms that head no rule are false in every stable model and facts
//! are true in every one, so only the remaining rule heads are enumerated.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::engine::PartialModel;
use crate::rulebase::{desugar_abducibles, AtomId, DesugarError, Program};

/// Most atoms whose truth value is enumerated.
pub const MAX_FREE_ATOMS: usize = 26;
/// Size of the bit-set universe.
pub const MAX_ATOMS: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{0} atoms to enumerate, more than the bound of {MAX_FREE_ATOMS}")]
    TooManyFreeAtoms(usize),
    #[error("{0} atoms in the program, more than the bound of {MAX_ATOMS}")]
    TooManyAtoms(usize),
    #[error(transparent)]
    Desugar(#[from] DesugarError),
}

/// All stable models of a program, each as a set of true atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableModelSet {
    pub models: BTreeSet<BTreeSet<AtomId>>,
    pub atom_count: usize,
}

impl StableModelSet {
    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    /// True iff `atom` belongs to some stable model.
    pub fn brave(&self, atom: AtomId) -> bool {
        self.models.iter().any(|m| m.contains(&atom))
    }

    /// True iff `atom` belongs to every stable model (vacuously true when
    /// there are none).
    pub fn cautious(&self, atom: AtomId) -> bool {
        self.models.iter().all(|m| m.contains(&atom))
    }
}

struct BitRule {
    head: Option<usize>,
    pos: u128,
    neg: u128,
}

/// Enumerates candidate interpretations and keeps those equal to the least
/// model of their own reduct that violate no constraint.
///
/// Atom ids refer to `desugar_abducibles(program)`, which keeps the ids of
/// `program` and appends the hidden atoms.
pub fn stable_models(program: &Program) -> Result<StableModelSet, OracleError> {
    let program = desugar_abducibles(program)?;
    let n = program.atom_count();
    if n > MAX_ATOMS {
        return Err(OracleError::TooManyAtoms(n));
    }
    let rules: Vec<BitRule> = program
        .rules()
        .iter()
        .map(|r| {
            let mut pos = 0u128;
            let mut neg = 0u128;
            for l in &r.body {
                if l.is_naf() {
                    neg |= 1 << l.atom.index();
                } else {
                    pos |= 1 << l.atom.index();
                }
            }
            BitRule { head: r.head.map(|h| h.index()), pos, neg }
        })
        .collect();

    let mut facts = 0u128;
    let mut heads = 0u128;
    for r in &rules {
        if let Some(h) = r.head {
            heads |= 1 << h;
            if r.pos == 0 && r.neg == 0 {
                facts |= 1 << h;
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&a| heads & !facts & (1 << a) != 0).collect();
    if free.len() > MAX_FREE_ATOMS {
        return Err(OracleError::TooManyFreeAtoms(free.len()));
    }

    let mut models = BTreeSet::new();
    for bits in 0u64..(1u64 << free.len()) {
        let mut interp = facts;
        for (i, &a) in free.iter().enumerate() {
            if bits & (1 << i) != 0 {
                interp |= 1 << a;
            }
        }
        if is_stable(&rules, interp) {
            models.insert((0..n).filter(|&a| interp & (1 << a) != 0).map(|a| AtomId(a as u32)).collect());
        }
    }
    Ok(StableModelSet { models, atom_count: n })
}

fn is_stable(rules: &[BitRule], interp: u128) -> bool {
    // reduct: drop rules blocked by a `not` literal, forget the rest of the `not`s
    let mut least = 0u128;
    loop {
        let mut grown = least;
        for r in rules {
            if let Some(h) = r.head {
                if r.neg & interp == 0 && r.pos & !grown == 0 {
                    grown |= 1 << h;
                }
            }
        }
        if grown == least {
            break;
        }
        least = grown;
    }
    least == interp && rules.iter().filter(|r| r.head.is_none()).all(|r| !(r.pos & !interp == 0 && r.neg & interp == 0))
}

/// True iff some stable model contains every positive and no negative of
/// `partial`.
pub fn extends(partial: &PartialModel, set: &StableModelSet) -> bool {
    set.models
        .iter()
        .any(|s| partial.positives.iter().all(|a| s.contains(a)) && partial.negatives.iter().all(|a| !s.contains(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulebase::parse_program;
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn names(p: &Program, set: &StableModelSet) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> =
            set.models.iter().map(|m| m.iter().map(|a| p.name(*a).to_string()).collect()).collect();
        out.sort();
        out
    }

    fn models(src: &str) -> (Program, StableModelSet) {
        let p = desugar_abducibles(&parse_program(src).unwrap()).unwrap();
        let s = stable_models(&p).unwrap();
        (p, s)
    }

    #[test]
    fn even_loop_has_two_models() {
        let (p, s) = models("p :- not q. q :- not p.");
        assert_eq!(names(&p, &s), vec![vec!["p"], vec!["q"]]);
    }

    #[test]
    fn empty_program_has_empty_model() {
        let s = stable_models(&Program::new()).unwrap();
        assert_eq!(s.models.len(), 1);
        assert!(s.models.iter().next().unwrap().is_empty());
    }

    #[test]
    fn abducible_has_both_worlds() {
        let (p, s) = models("#abducible c.");
        assert_eq!(names(&p, &s), vec![vec!["c"], vec!["c__neg"]]);
    }

    #[test]
    fn constraints_and_odd_loops() {
        let (p, s) = models("p :- not q. q :- not p. :- p.");
        assert_eq!(names(&p, &s), vec![vec!["q"]]);
        assert!(models("p :- not p.").1.is_empty());
        let (p, s) = models("a :- b. b :- a.");
        assert_eq!(names(&p, &s), vec![Vec::<&str>::new()]);
    }

    #[test]
    fn stratified_chain() {
        let (p, s) = models("a. b :- a, not c. c :- d. e :- not b.");
        assert_eq!(names(&p, &s), vec![vec!["a", "b"]]);
    }

    #[test]
    fn extends_checks_signs() {
        let (p, s) = models("p :- not q. q :- not p.");
        let (a, b) = (p.atom("p").unwrap(), p.atom("q").unwrap());
        let mut partial = PartialModel::default();
        partial.positives.insert(a);
        partial.negatives.insert(b);
        assert!(extends(&partial, &s));
        partial.negatives.clear();
        partial.positives.insert(b);
        assert!(!extends(&partial, &s));
    }

    #[test]
    fn tweety_oracle() {
        let (p, s) = models("flies_tweety :- bird_tweety, not penguin_tweety. bird_tweety.");
        assert_eq!(names(&p, &s), vec![vec!["flies_tweety", "bird_tweety"]]);
    }

    #[test]
    fn free_atom_bound() {
        let mut src = alloc::string::String::new();
        for i in 0..27 {
            src.push_str(&alloc::format!("a{i} :- not b{i}. b{i} :- not a{i}.\n"));
        }
        let p = parse_program(&src).unwrap();
        assert_eq!(stable_models(&p), Err(OracleError::TooManyFreeAtoms(54)));
    }
}
