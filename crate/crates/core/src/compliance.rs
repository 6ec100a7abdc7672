//! Questionnaires, answers and the per-violation compliance check.
//!
//! A rule base for compliance declares heads `violation_1 … violation_N`. Each
//! question of the questionnaire controls one condition atom; a "yes" answer
//! adds that atom as a fact, a "no" adds nothing.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::engine::{solve, DualProgram, SolveError, SolveOptions};
use crate::explain::{minimal_fix, FixError, FixSuggestion};
use crate::justify::{ProofNode, TemplateMap};
use crate::rulebase::{validate, AtomId, Directive, Literal, Program, Rule};

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Question {
    pub id: String,
    pub condition: String,
    pub text: String,
    pub display_order: u32,
}

/// Questions sorted by `display_order`, one per condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Questionnaire {
    questions: Vec<Question>,
}

impl Questionnaire {
    pub fn new(mut questions: Vec<Question>) -> Result<Self, ComplianceError> {
        questions.sort_by_key(|q| q.display_order);
        for (i, q) in questions.iter().enumerate() {
            if questions[..i].iter().any(|o| o.id == q.id) {
                return Err(ComplianceError::DuplicateQuestion(q.id.clone()));
            }
            if questions[..i].iter().any(|o| o.condition == q.condition) {
                return Err(ComplianceError::DuplicateQuestion(q.condition.clone()));
            }
        }
        Ok(Questionnaire { questions })
    }

    pub fn questions(&self) -> &[Question] {
        &self.questions
    }

    pub fn conditions(&self) -> impl Iterator<Item = &str> {
        self.questions.iter().map(|q| q.condition.as_str())
    }

    pub fn len(&self) -> usize {
        self.questions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.questions.is_empty()
    }

    pub fn has_condition(&self, condition: &str) -> bool {
        self.questions.iter().any(|q| q.condition == condition)
    }
}

/// Yes/no answer per condition atom name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct AnswerSet {
    answers: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnswerProblem {
    Missing,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnswerIssue {
    pub condition: String,
    pub problem: AnswerProblem,
}

impl core::fmt::Display for AnswerIssue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.problem {
            AnswerProblem::Missing => write!(f, "`{}`: missing answer", self.condition),
            AnswerProblem::Unknown => write!(f, "`{}`: not a questionnaire condition", self.condition),
        }
    }
}

impl AnswerSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every condition of the questionnaire answered "no".
    pub fn all_no(questionnaire: &Questionnaire) -> Self {
        questionnaire.conditions().map(|c| (c.to_string(), false)).collect()
    }

    pub fn set(&mut self, condition: impl Into<String>, value: bool) -> &mut Self {
        self.answers.insert(condition.into(), value);
        self
    }

    pub fn with(mut self, condition: &str, value: bool) -> Self {
        self.set(condition, value);
        self
    }

    pub fn get(&self, condition: &str) -> Option<bool> {
        self.answers.get(condition).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.answers.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    /// Every questionnaire condition answered and nothing else, in
    /// questionnaire order then name order.
    pub fn check_total(&self, questionnaire: &Questionnaire) -> Result<(), Vec<AnswerIssue>> {
        let mut issues: Vec<AnswerIssue> = questionnaire
            .conditions()
            .filter(|c| !self.answers.contains_key(*c))
            .map(|c| AnswerIssue { condition: c.to_string(), problem: AnswerProblem::Missing })
            .collect();
        issues.extend(
            self.answers
                .keys()
                .filter(|c| !questionnaire.has_condition(c))
                .map(|c| AnswerIssue { condition: c.clone(), problem: AnswerProblem::Unknown }),
        );
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }
}

impl FromIterator<(String, bool)> for AnswerSet {
    fn from_iter<T: IntoIterator<Item = (String, bool)>>(iter: T) -> Self {
        AnswerSet { answers: iter.into_iter().collect() }
    }
}

impl<'a> FromIterator<(&'a str, bool)> for AnswerSet {
    fn from_iter<T: IntoIterator<Item = (&'a str, bool)>>(iter: T) -> Self {
        iter.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ComplianceError {
    #[error("duplicate question or condition `{0}`")]
    DuplicateQuestion(String),
    #[error("questionnaire condition `{0}` does not occur in the rule base")]
    ConditionNotInRuleBase(String),
    #[error("the rule base declares no violation_<n> rule")]
    NoViolations,
    #[error("the rule base has odd loops through negation involving: {}", .0.join(", "))]
    OddLoops(Vec<String>),
    #[error("answers are not total over the questionnaire: {}", join_issues(.0))]
    IncompleteAnswers(Vec<AnswerIssue>),
    #[error("evaluating violation_{violation}: {source}")]
    Engine { violation: u32, source: SolveError },
    #[error(transparent)]
    Setup(SolveError),
}

fn join_issues(issues: &[AnswerIssue]) -> String {
    issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
}

/// The loaded rule base with its questionnaire and English rule texts.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    program: Program,
    questionnaire: Questionnaire,
    rule_texts: BTreeMap<u32, String>,
    violations: Vec<(u32, AtomId)>,
    conditions: Vec<AtomId>,
    abductive: DualProgram,
    templates: TemplateMap,
}

fn violation_number(name: &str) -> Option<u32> {
    let digits = name.strip_prefix("violation_")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl KnowledgeBase {
    pub fn new(
        program: Program,
        questionnaire: Questionnaire,
        rule_texts: BTreeMap<u32, String>,
    ) -> Result<Self, ComplianceError> {
        let report = validate(&program);
        if !report.is_ok() {
            return Err(ComplianceError::OddLoops(report.odd_loop_atoms));
        }
        let conditions = questionnaire
            .conditions()
            .map(|c| program.atom(c).ok_or_else(|| ComplianceError::ConditionNotInRuleBase(c.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut violations: Vec<(u32, AtomId)> = program
            .rules()
            .iter()
            .filter_map(|r| r.head)
            .filter_map(|h| violation_number(program.name(h)).map(|n| (n, h)))
            .collect();
        violations.sort();
        violations.dedup();
        if violations.is_empty() {
            return Err(ComplianceError::NoViolations);
        }

        // every condition becomes abducible for fix search
        let mut abducible = program.clone();
        for &c in &conditions {
            abducible.add_directive(Directive::Abducible(c)).expect("condition atom exists");
        }
        let abductive = DualProgram::new(&abducible).map_err(ComplianceError::Setup)?;
        let templates = TemplateMap::new(&program);
        Ok(KnowledgeBase { program, questionnaire, rule_texts, violations, conditions, abductive, templates })
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn questionnaire(&self) -> &Questionnaire {
        &self.questionnaire
    }

    pub fn templates(&self) -> &TemplateMap {
        &self.templates
    }

    /// `(n, atom)` for every `violation_n` head, ordered by `n`.
    pub fn violations(&self) -> &[(u32, AtomId)] {
        &self.violations
    }

    pub fn violation_atom(&self, id: u32) -> Option<AtomId> {
        self.violations.iter().find(|(n, _)| *n == id).map(|(_, a)| *a)
    }

    /// Condition atoms in questionnaire order.
    pub fn condition_atoms(&self) -> &[AtomId] {
        &self.conditions
    }

    /// The rule base with every condition declared abducible.
    pub fn abductive_program(&self) -> &DualProgram {
        &self.abductive
    }

    /// English text of rule `n`; falls back to the atom's template.
    pub fn rule_text(&self, id: u32) -> String {
        if let Some(text) = self.rule_texts.get(&id) {
            return text.clone();
        }
        match self.violation_atom(id) {
            Some(atom) => self.templates.text(atom).to_string(),
            None => alloc::format!("rule {id}"),
        }
    }

    /// The rule base plus the facts for `answers`, ready for solving.
    pub fn with_answers(&self, answers: &AnswerSet) -> Result<DualProgram, ComplianceError> {
        let facts = answers_to_facts(answers, self)?;
        let mut program = self.program.clone();
        for fact in facts {
            program.add_rule(fact).expect("condition atoms belong to the program");
        }
        DualProgram::new(&program).map_err(ComplianceError::Setup)
    }

    /// Whether `violation_id` has a proof under `answers`.
    pub fn is_violated(&self, violation_id: u32, answers: &AnswerSet) -> Result<bool, ComplianceError> {
        let dual = self.with_answers(answers)?;
        let atom = self.violation_atom(violation_id).ok_or(ComplianceError::NoViolations)?;
        let found = solve(&[Literal::pos(atom)], &dual, SolveOptions::limit(1))
            .map_err(|source| ComplianceError::Engine { violation: violation_id, source })?;
        Ok(!found.is_empty())
    }
}

/// One fact per "yes" answer, in questionnaire order.
pub fn answers_to_facts(answers: &AnswerSet, kb: &KnowledgeBase) -> Result<Vec<Rule>, ComplianceError> {
    answers.check_total(&kb.questionnaire).map_err(ComplianceError::IncompleteAnswers)?;
    Ok(kb
        .questionnaire
        .conditions()
        .zip(&kb.conditions)
        .filter(|(name, _)| answers.get(name) == Some(true))
        .map(|(_, &atom)| Rule::fact(atom))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViolationFinding {
    pub violation_id: u32,
    pub rule_text: String,
    /// Proof rooted at the positive literal `violation_n`.
    pub proof: ProofNode,
    /// `None` when no change of answers can remove the violation.
    pub fix: Option<FixSuggestion>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplianceReport {
    pub compliant: bool,
    pub findings: Vec<ViolationFinding>,
    pub elapsed_ms: f64,
}

/// Wall-clock source for [`ComplianceReport::elapsed_ms`].
pub trait Clock {
    fn now_ms(&self) -> f64;
}

/// Reports zero elapsed time.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_ms(&self) -> f64 {
        0.0
    }
}

/// Proves each `violation_n` against the rule base plus the answer facts and
/// computes a minimal fix for every violation found.
pub fn check_compliance(
    answers: &AnswerSet,
    kb: &KnowledgeBase,
    clock: &dyn Clock,
) -> Result<ComplianceReport, ComplianceError> {
    let start = clock.now_ms();
    let dual = kb.with_answers(answers)?;
    let mut findings = Vec::new();
    for &(id, atom) in kb.violations() {
        let mut found = solve(&[Literal::pos(atom)], &dual, SolveOptions::limit(1))
            .map_err(|source| ComplianceError::Engine { violation: id, source })?;
        let Some(answer) = found.pop() else { continue };
        let fix = match minimal_fix(id, answers, kb) {
            Ok(fix) => Some(fix),
            Err(FixError::NoFix(_)) => None,
            Err(FixError::Compliance(e)) => return Err(e),
            Err(FixError::Engine(source)) => return Err(ComplianceError::Engine { violation: id, source }),
            Err(other) => unreachable!("violation_{id} was just proven: {other}"),
        };
        let proof = answer.proofs.into_iter().next().expect("one proof per query literal");
        findings.push(ViolationFinding { violation_id: id, rule_text: kb.rule_text(id), proof, fix });
    }
    Ok(ComplianceReport { compliant: findings.is_empty(), findings, elapsed_ms: clock.now_ms() - start })
}
