//! Goal-directed answer set programming over propositional rule bases.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that does
//! not touch the outside world:
//!
//! * [`rulebase`]: the `.lp` dialect, its parser, printer, loop validation and
//!   the desugaring of `#abducible` directives into even loops.
//! * [`engine`]: dual rules and a co-inductive, depth-first proof search that
//!   enumerates partial stable models together with their proof trees.
//! * [`oracle`]: brute-force stable models via the Gelfond-Lifschitz reduct,
//!   used as ground truth in tests.
//! * [`justify`]: English rendering of proof trees.
//! * [`compliance`]: questionnaires, answers and the per-violation check.
//! * [`explain`]: minimal answer changes that remove a violation.
//!
//! File formats, the REST service and the command line live in the
//! `flightgate` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod compliance;
pub mod engine;
pub mod explain;
pub mod justify;
pub mod oracle;
pub mod rulebase;

pub use compliance::{
    check_compliance, AnswerSet, Clock, ComplianceError, ComplianceReport, KnowledgeBase, NoClock, Question,
    Questionnaire, ViolationFinding,
};
pub use engine::{brave_entails, compute_duals, solve, Answer, DualProgram, PartialModel, SolveError, SolveOptions};
pub use explain::{full_compliance_fix, minimal_fix, ConditionChange, FixError, FixSuggestion};
pub use justify::{render_structured, render_text, JustificationDoc, ProofNode, Reason, TemplateMap};
pub use rulebase::{
    desugar_abducibles, parse_program, parse_query, validate, AtomId, Directive, Literal, ParseError, Program, Rule,
    Sign, ValidationReport,
};
