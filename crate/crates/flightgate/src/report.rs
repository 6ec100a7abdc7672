//! Plain-text rendering for the command line.

use std::fmt::Write;

use flightgate_core::{render_text, ComplianceReport, KnowledgeBase};

use crate::query::QueryOutcome;

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn indent(text: &str, by: usize) -> String {
    text.lines().map(|l| format!("{:by$}{l}\n", "")).collect()
}

pub fn compliance_text(report: &ComplianceReport, kb: &KnowledgeBase) -> String {
    if report.compliant {
        return "COMPLIANT\n".into();
    }
    let mut out = String::new();
    let n = report.findings.len();
    let _ = writeln!(out, "NOT COMPLIANT: {n} violation{}", if n == 1 { "" } else { "s" });
    for f in &report.findings {
        let _ = writeln!(out, "\nRule {}: {}", f.violation_id, f.rule_text);
        out.push_str(&indent(&render_text(&f.proof, kb.templates()), 2));
        match &f.fix {
            Some(fix) => {
                let _ = writeln!(out, "  To comply, change:");
                for c in &fix.changes {
                    let question = kb
                        .questionnaire()
                        .questions()
                        .iter()
                        .find(|q| q.condition == c.condition)
                        .map_or(c.condition.as_str(), |q| q.text.as_str());
                    let _ = writeln!(out, "    {question} {} -> {}", yes_no(c.from), yes_no(c.to));
                }
            }
            None => {
                let _ = writeln!(out, "  No change of answers removes this violation.");
            }
        }
    }
    out
}

pub fn query_text(outcome: &QueryOutcome) -> String {
    let mut out = String::new();
    if outcome.answers.is_empty() {
        out.push_str("no models\n");
        return out;
    }
    for (i, answer) in outcome.answers.iter().enumerate() {
        let _ = writeln!(out, "Model {}: {{{}}}", i + 1, outcome.literal_names(answer).join(", "));
        for proof in &answer.proofs {
            out.push_str(&indent(&render_text(proof, &outcome.templates), 2));
        }
    }
    if outcome.exhausted {
        out.push_str("no more models\n");
    }
    out
}
