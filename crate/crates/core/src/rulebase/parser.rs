use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexer::{tokenize, Spanned, Tok};
use super::{check_name, Directive, Literal, Program, ProgramError, Rule, Sign};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message} (found `{found}`)")]
    Syntax { line: usize, column: usize, found: String, message: String },
    #[error("{line}:{column}: duplicate #pred template for `{atom}`")]
    DuplicateTemplate { line: usize, column: usize, atom: String },
}

impl ParseError {
    pub fn location(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::DuplicateTemplate { line, column, .. } => {
                (*line, *column)
            }
        }
    }
}

/// A query literal by name, before it is resolved against a program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryLiteral {
    pub name: String,
    pub sign: Sign,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        let toks = tokenize(src).map_err(|e| ParseError::Syntax {
            line: e.line,
            column: e.column,
            found: e.found,
            message: e.message.to_string(),
        })?;
        Ok(Parser { toks, pos: 0 })
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: at.line, column: at.column, found: at.tok.describe(), message: message.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.error_at(&t, alloc::format!("expected {what}")))
        }
    }

    fn atom_name(&mut self) -> Result<(String, Spanned), ParseError> {
        let t = self.next();
        let Tok::Ident(name) = &t.tok else {
            return Err(self.error_at(&t, "expected an atom"));
        };
        if self.peek().tok == Tok::LParen {
            let paren = self.peek().clone();
            return Err(self.error_at(&paren, "arguments are not supported; write ground atoms such as `flies_tweety`"));
        }
        if let Err(e) = check_name(name) {
            let message = match e {
                ProgramError::ReservedName(_) => "the `__` infix is reserved for hidden atoms".to_string(),
                _ if name.starts_with(|c: char| c.is_uppercase() || c == '_') => {
                    "variables are not supported; atoms start with a lowercase letter".to_string()
                }
                _ if name == "not" => "`not` must be followed by an atom".to_string(),
                _ => "invalid atom name (expected [a-z][a-zA-Z0-9_]*)".to_string(),
            };
            return Err(self.error_at(&t, message));
        }
        Ok((name.clone(), t))
    }

    fn literal(&mut self) -> Result<QueryLiteral, ParseError> {
        let sign = match &self.peek().tok {
            Tok::Ident(w) if w == "not" => {
                self.next();
                Sign::Naf
            }
            _ => Sign::Positive,
        };
        let (name, _) = self.atom_name()?;
        Ok(QueryLiteral { name, sign })
    }

    fn body(&mut self) -> Result<Vec<QueryLiteral>, ParseError> {
        let mut lits = alloc::vec![self.literal()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            lits.push(self.literal()?);
        }
        Ok(lits)
    }
}

fn resolve(program: &mut Program, body: Vec<QueryLiteral>) -> Vec<Literal> {
    body.into_iter().map(|q| Literal { atom: intern_checked(program, &q.name), sign: q.sign }).collect()
}

fn intern_checked(program: &mut Program, name: &str) -> super::AtomId {
    // names were validated by the parser
    program.intern(name).expect("validated atom name")
}

/// Parses a rule base in the `.lp` dialect. Rule order is preserved.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(source)?;
    let mut program = Program::new();
    loop {
        let start = p.peek().clone();
        match &start.tok {
            Tok::Eof => break,
            Tok::If => {
                p.next();
                let body = p.body()?;
                p.expect(Tok::Dot, "`.` after constraint body")?;
                let body = resolve(&mut program, body);
                program.push_rule_unchecked(Rule::constraint(body));
            }
            Tok::Ident(_) => {
                let (name, _) = p.atom_name()?;
                let head = intern_checked(&mut program, &name);
                let t = p.next();
                match t.tok {
                    Tok::Dot => program.push_rule_unchecked(Rule::fact(head)),
                    Tok::If => {
                        let body = p.body()?;
                        p.expect(Tok::Dot, "`.` or `,` in rule body")?;
                        let body = resolve(&mut program, body);
                        program.push_rule_unchecked(Rule::new(head, body));
                    }
                    _ => return Err(p.error_at(&t, "expected `:-` or `.` after rule head")),
                }
            }
            Tok::Hash(word) if word == "abducible" => {
                p.next();
                let (name, _) = p.atom_name()?;
                p.expect(Tok::Dot, "`.` after #abducible directive")?;
                let atom = intern_checked(&mut program, &name);
                program.add_directive(Directive::Abducible(atom)).expect("known atom");
            }
            Tok::Hash(word) if word == "pred" => {
                p.next();
                let (name, at) = p.atom_name()?;
                p.expect(Tok::DoubleColon, "`::` in #pred directive")?;
                let t = p.next();
                let Tok::Str(text) = t.tok else {
                    return Err(p.error_at(&t, "expected quoted template text"));
                };
                p.expect(Tok::Dot, "`.` after #pred directive")?;
                let atom = intern_checked(&mut program, &name);
                if program.add_directive(Directive::Template(atom, text)).is_err() {
                    return Err(ParseError::DuplicateTemplate { line: at.line, column: at.column, atom: name });
                }
            }
            Tok::Hash(_) => return Err(p.error_at(&start, "unknown directive (expected #abducible or #pred)")),
            _ => return Err(p.error_at(&start, "expected a rule, constraint or directive")),
        }
    }
    Ok(program)
}

/// Parses a query such as `?- p, not q.`; the `?-` prefix and final `.` are
/// optional.
pub fn parse_query(source: &str) -> Result<Vec<QueryLiteral>, ParseError> {
    let mut p = Parser::new(source)?;
    if p.peek().tok == Tok::Query {
        p.next();
    }
    let lits = p.body()?;
    if p.peek().tok == Tok::Dot {
        p.next();
    }
    let t = p.next();
    if t.tok != Tok::Eof {
        return Err(p.error_at(&t, "expected `,` or end of query"));
    }
    Ok(lits)
}
