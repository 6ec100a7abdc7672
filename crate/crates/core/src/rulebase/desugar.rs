use alloc::format;
use alloc::string::String;
use alloc::vec;

use super::{Directive, Literal, Program, Rule, RuleOrigin};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DesugarError {
    #[error("atom `{0}` collides with the hidden complement of an abducible; rename it")]
    NameCollision(String),
}

/// Name of the hidden complement generated for abducible `atom`.
pub fn hidden_name(atom: &str) -> String {
    format!("{atom}__neg")
}

/// Replaces every `#abducible c` with the even loop
/// `c :- not c__neg.  c__neg :- not c.` over a fresh hidden atom.
///
/// Rules the program already has for `c` are kept alongside the loop.
pub fn desugar_abducibles(program: &Program) -> Result<Program, DesugarError> {
    let abducibles: alloc::vec::Vec<_> = program.abducible_directives().collect();
    if abducibles.is_empty() {
        return Ok(program.clone());
    }
    let mut out = program.clone();
    out.retain_directives(|d| !matches!(d, Directive::Abducible(_)));
    for atom in abducibles {
        let name = hidden_name(program.name(atom));
        if let Some(existing) = program.atom(&name) {
            if !program.is_hidden(existing) {
                return Err(DesugarError::NameCollision(name));
            }
        }
        let hidden = out.intern_hidden(name);
        out.push_rule_unchecked(Rule {
            head: Some(atom),
            body: vec![Literal::naf(hidden)],
            origin: RuleOrigin::AbducibleLoop,
        });
        out.push_rule_unchecked(Rule {
            head: Some(hidden),
            body: vec![Literal::naf(atom)],
            origin: RuleOrigin::AbducibleLoop,
        });
    }
    Ok(out)
}
