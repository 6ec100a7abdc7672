//! Minimal answer changes that remove violations.
//!
//! Every questionnaire condition is made abducible and `not violation_n` is
//! queried. Each partial model fixes some conditions; the others keep the
//! user's answers. The candidate with the fewest flipped answers wins, ties
//! going first to candidates that keep one of the user's "yes" answers, then
//! to candidates with more no→yes changes, then to the lexicographically
//! smallest list of changed conditions.
//!
//! [`fix_oracle`] is the exhaustive counterpart used in tests: it walks the
//! answer assignments in order of distance from the user's answers and checks
//! each with the stable-model oracle.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::compliance::{answers_to_facts, AnswerSet, ComplianceError, KnowledgeBase};
use crate::engine::{solve, PartialModel, SolveError, SolveOptions};
use crate::oracle::{stable_models, OracleError};
use crate::rulebase::{AtomId, Literal};

/// Partial models examined per fix before settling on the best found.
pub const CANDIDATE_CAP: usize = 1024;
/// Condition bound for [`fix_oracle`].
pub const ORACLE_MAX_CONDITIONS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionChange {
    pub condition: String,
    pub from: bool,
    pub to: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixSuggestion {
    /// In questionnaire order.
    pub changes: Vec<ConditionChange>,
    /// The abductive partial model the changes were read from.
    pub resulting_model: PartialModel,
    /// The candidate cap was hit; the suggestion is the best among those seen.
    pub truncated: bool,
}

impl FixSuggestion {
    /// `answers` with the changes applied.
    pub fn apply(&self, answers: &AnswerSet) -> AnswerSet {
        let mut out = answers.clone();
        for c in &self.changes {
            out.set(c.condition.clone(), c.to);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FixError {
    #[error("violation_{0} is not part of the rule base")]
    UnknownViolation(u32),
    #[error("violation_{0} does not hold under the given answers")]
    NotViolated(u32),
    #[error("no change of answers removes violation_{0}")]
    NoFix(u32),
    #[error("{0} conditions, more than the oracle bound of {ORACLE_MAX_CONDITIONS}")]
    TooManyConditions(usize),
    #[error(transparent)]
    Compliance(#[from] ComplianceError),
    #[error(transparent)]
    Engine(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Smallest set of answer flips after which `violation_id` has no proof.
pub fn minimal_fix(violation_id: u32, answers: &AnswerSet, kb: &KnowledgeBase) -> Result<FixSuggestion, FixError> {
    let atom = kb.violation_atom(violation_id).ok_or(FixError::UnknownViolation(violation_id))?;
    if !kb.is_violated(violation_id, answers)? {
        return Err(FixError::NotViolated(violation_id));
    }
    fix_targets(&[atom], answers, kb).ok_or(FixError::NoFix(violation_id))?
}

/// Smallest set of answer flips after which no violation has a proof.
pub fn full_compliance_fix(answers: &AnswerSet, kb: &KnowledgeBase) -> Result<FixSuggestion, FixError> {
    let atoms: Vec<AtomId> = kb.violations().iter().map(|&(_, a)| a).collect();
    let first = kb.violations()[0].0;
    fix_targets(&atoms, answers, kb).ok_or(FixError::NoFix(first))?
}

struct Candidate {
    assignment: Vec<bool>,
    changes: Vec<ConditionChange>,
    model: PartialModel,
}

impl Candidate {
    fn rank(&self, user: &[bool]) -> (usize, bool, Reverse<usize>, Vec<&str>) {
        let keeps_yes = !user.iter().any(|&v| v) || user.iter().zip(&self.assignment).any(|(&u, &a)| u && a);
        let no_to_yes = self.changes.iter().filter(|c| c.to).count();
        let mut names: Vec<&str> = self.changes.iter().map(|c| c.condition.as_str()).collect();
        names.sort_unstable();
        (self.changes.len(), !keeps_yes, Reverse(no_to_yes), names)
    }
}

fn user_assignment(answers: &AnswerSet, kb: &KnowledgeBase) -> Vec<bool> {
    kb.questionnaire().conditions().map(|c| answers.get(c).unwrap_or(false)).collect()
}

fn to_answers(assignment: &[bool], kb: &KnowledgeBase) -> AnswerSet {
    kb.questionnaire().conditions().zip(assignment).map(|(c, &v)| (c, v)).collect()
}

fn changes_between(user: &[bool], assignment: &[bool], kb: &KnowledgeBase) -> Vec<ConditionChange> {
    kb.questionnaire()
        .conditions()
        .zip(user.iter().zip(assignment))
        .filter(|(_, (u, a))| u != a)
        .map(|(c, (&from, &to))| ConditionChange { condition: c.into(), from, to })
        .collect()
}

fn any_provable(targets: &[AtomId], answers: &AnswerSet, kb: &KnowledgeBase) -> Result<bool, FixError> {
    let dual = kb.with_answers(answers)?;
    for &t in targets {
        if !solve(&[Literal::pos(t)], &dual, SolveOptions::limit(1))?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `None` when no candidate removes every target.
fn fix_targets(targets: &[AtomId], answers: &AnswerSet, kb: &KnowledgeBase) -> Option<Result<FixSuggestion, FixError>> {
    let run = || -> Result<Option<FixSuggestion>, FixError> {
        answers_to_facts(answers, kb)?;
        let user = user_assignment(answers, kb);
        let query: Vec<Literal> = targets.iter().map(|&t| Literal::naf(t)).collect();
        let models = solve(&query, kb.abductive_program(), SolveOptions::limit(CANDIDATE_CAP))?;
        let truncated = models.len() >= CANDIDATE_CAP;

        let mut seen = BTreeSet::new();
        let mut candidates: Vec<Candidate> = Vec::new();
        for answer in models {
            let assignment: Vec<bool> = kb
                .condition_atoms()
                .iter()
                .zip(&user)
                .map(|(&atom, &u)| answer.model.value(atom).unwrap_or(u))
                .collect();
            if !seen.insert(assignment.clone()) {
                continue;
            }
            let changes = changes_between(&user, &assignment, kb);
            candidates.push(Candidate { assignment, changes, model: answer.model });
        }
        candidates.sort_by(|a, b| a.rank(&user).cmp(&b.rank(&user)));

        for c in candidates {
            if !any_provable(targets, &to_answers(&c.assignment, kb), kb)? {
                return Ok(Some(FixSuggestion { changes: c.changes, resulting_model: c.model, truncated }));
            }
        }
        Ok(None)
    };
    run().transpose()
}

/// Exhaustive minimum for comparison with [`minimal_fix`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleFix {
    pub min_flips: usize,
    /// Every change set of size `min_flips` that works, each in questionnaire
    /// order.
    pub minimal_sets: Vec<Vec<ConditionChange>>,
}

/// `Ok(None)` when no assignment removes the violation.
pub fn fix_oracle(violation_id: u32, answers: &AnswerSet, kb: &KnowledgeBase) -> Result<Option<OracleFix>, FixError> {
    fix_oracle_all(&[violation_id], answers, kb)
}

/// Like [`fix_oracle`] for the conjunction of several violations.
pub fn fix_oracle_all(
    violation_ids: &[u32],
    answers: &AnswerSet,
    kb: &KnowledgeBase,
) -> Result<Option<OracleFix>, FixError> {
    answers_to_facts(answers, kb)?;
    let targets = violation_ids
        .iter()
        .map(|&id| kb.violation_atom(id).ok_or(FixError::UnknownViolation(id)))
        .collect::<Result<Vec<_>, _>>()?;
    let n = kb.condition_atoms().len();
    if n > ORACLE_MAX_CONDITIONS {
        return Err(FixError::TooManyConditions(n));
    }
    let user = user_assignment(answers, kb);

    for flips in 0..=n {
        let mut minimal_sets = Vec::new();
        for mask in masks_with_popcount(n, flips) {
            let assignment: Vec<bool> = user.iter().enumerate().map(|(i, &u)| u ^ (mask >> i & 1 == 1)).collect();
            let program = kb
                .program()
                .with_facts(kb.condition_atoms().iter().zip(&assignment).filter(|(_, &v)| v).map(|(&a, _)| a));
            let models = stable_models(&program)?;
            if targets.iter().all(|&t| !models.brave(t)) {
                minimal_sets.push(changes_between(&user, &assignment, kb));
            }
        }
        if !minimal_sets.is_empty() {
            return Ok(Some(OracleFix { min_flips: flips, minimal_sets }));
        }
    }
    Ok(None)
}

/// All `n`-bit masks with exactly `k` bits set, ascending.
fn masks_with_popcount(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let first: u32 = if k == 0 { 0 } else { (1u32 << k) - 1 };
    let limit = 1u64 << n;
    let mut next = Some(first);
    core::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur as u64 + c as u64;
            let succ = (((r as u32 ^ cur) >> 2) / c) | r as u32;
            (r < limit && (succ as u64) < limit).then_some(succ)
        };
        Some(cur)
    })
}
