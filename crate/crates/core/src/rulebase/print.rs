use core::fmt;

use super::{Directive, Program, RuleOrigin};

fn write_text(f: &mut fmt::Formatter<'_>, text: &str) -> fmt::Result {
    f.write_str("'")?;
    for c in text.chars() {
        match c {
            '\'' => f.write_str("\\'")?,
            '\\' => f.write_str("\\\\")?,
            c => fmt::Write::write_char(f, c)?,
        }
    }
    f.write_str("'")
}

/// Prints the program back in the `.lp` dialect: directives first, then rules
/// in order. Generated abducible loops are printed as `#abducible` again.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.directives() {
            match d {
                Directive::Abducible(a) => writeln!(f, "#abducible {}.", self.name(*a))?,
                Directive::Template(a, text) => {
                    write!(f, "#pred {} :: ", self.name(*a))?;
                    write_text(f, text)?;
                    writeln!(f, ".")?;
                }
            }
        }
        for (atom, _) in self.desugared_abducibles() {
            writeln!(f, "#abducible {}.", self.name(atom))?;
        }
        for rule in self.rules().iter().filter(|r| r.origin == RuleOrigin::Source) {
            if let Some(head) = rule.head {
                f.write_str(self.name(head))?;
                if !rule.body.is_empty() {
                    f.write_str(" :- ")?;
                }
            } else {
                f.write_str(":- ")?;
            }
            for (i, lit) in rule.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.display_literal(*lit))?;
            }
            writeln!(f, ".")?;
        }
        Ok(())
    }
}
