//! JSON documents exchanged by the service and printed by `check --format json`.

use std::collections::BTreeMap;

use flightgate_core::{render_structured, ComplianceReport, ConditionChange, JustificationDoc, KnowledgeBase};
use serde::{Deserialize, Serialize};

/// Bumped on any incompatible change to the response documents.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRequest {
    #[serde(default)]
    pub answers: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResponse {
    pub schema_version: u32,
    pub compliant: bool,
    pub elapsed_ms: f64,
    pub findings: Vec<Finding>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub violation_id: u32,
    pub rule_text: String,
    pub justification: JustificationDoc,
    pub fix: Fix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fix {
    pub changes: Vec<ConditionChange>,
    /// False when no change of answers removes the violation.
    pub available: bool,
}

impl CheckResponse {
    pub fn new(report: &ComplianceReport, kb: &KnowledgeBase) -> Self {
        let findings = report
            .findings
            .iter()
            .map(|f| Finding {
                violation_id: f.violation_id,
                rule_text: f.rule_text.clone(),
                justification: render_structured(&f.proof, kb.templates()).expect("violation atoms are visible"),
                fix: Fix {
                    changes: f.fix.as_ref().map(|x| x.changes.clone()).unwrap_or_default(),
                    available: f.fix.is_some(),
                },
            })
            .collect();
        CheckResponse {
            schema_version: SCHEMA_VERSION,
            compliant: report.compliant,
            elapsed_ms: report.elapsed_ms,
            findings,
        }
    }
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryRequest {
    /// Replaces the loaded rule base for this request.
    #[serde(default)]
    pub program: Option<String>,
    pub query: String,
    #[serde(default = "one")]
    pub max_models: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub schema_version: u32,
    pub models: Vec<ModelDoc>,
    /// No further models exist beyond those returned.
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    /// Visible literals of the partial model, e.g. `["p", "not q"]`.
    pub literals: Vec<String>,
    /// One tree per query literal.
    pub justifications: Vec<JustificationDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl ErrorBody {
    pub fn new(error: impl Into<String>) -> Self {
        ErrorBody { error: error.into(), fields: Vec::new(), location: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldError {
    pub condition: String,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}
