#![allow(dead_code)]

use flightgate_core::{parse_program, Program};
use proptest::prelude::*;

#[derive(Clone, Debug)]
pub struct RawRule {
    pub head: Option<usize>,
    pub body: Vec<(usize, bool)>,
}

#[derive(Clone, Debug)]
pub struct RawProgram {
    pub atoms: usize,
    pub rules: Vec<RawRule>,
    pub abducibles: Vec<usize>,
}

impl RawProgram {
    pub fn source(&self) -> String {
        let mut src = String::new();
        for a in &self.abducibles {
            src.push_str(&format!("#abducible a{a}.\n"));
        }
        for r in &self.rules {
            if let Some(h) = r.head {
                src.push_str(&format!("a{h}"));
            }
            if !r.body.is_empty() {
                let body: Vec<String> =
                    r.body.iter().map(|&(a, naf)| if naf { format!("not a{a}") } else { format!("a{a}") }).collect();
                src.push_str(&format!(" :- {}", body.join(", ")));
            }
            src.push_str(".\n");
        }
        // every atom should exist even if no rule mentions it
        for a in 0..self.atoms {
            src.push_str(&format!("#pred a{a} :: 'atom {a}'.\n"));
        }
        src
    }

    pub fn program(&self) -> Program {
        parse_program(&self.source()).expect("generated programs parse")
    }
}

fn rule(atoms: usize, constraint: bool) -> impl Strategy<Value = RawRule> {
    let head = if constraint { Just(None).boxed() } else { (0..atoms).prop_map(Some).boxed() };
    let min_body = usize::from(constraint);
    (head, prop::collection::vec((0..atoms, prop::bool::weighted(0.35)), min_body..=3))
        .prop_map(|(head, body)| RawRule { head, body })
}

/// Up to 12 atoms, 20 rules and 3 constraints.
pub fn raw_program() -> impl Strategy<Value = RawProgram> {
    (1usize..=12)
        .prop_flat_map(|atoms| {
            (
                Just(atoms),
                prop::collection::vec(rule(atoms, false), 0..=17),
                prop::collection::vec(rule(atoms, true), 0..=3),
                prop::collection::vec(0..atoms, 0..=2),
            )
        })
        .prop_map(|(atoms, mut rules, constraints, mut abducibles)| {
            rules.extend(constraints);
            abducibles.sort_unstable();
            abducibles.dedup();
            RawProgram { atoms, rules, abducibles }
        })
}
