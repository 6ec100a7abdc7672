use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    If,
    Query,
    Comma,
    Dot,
    DoubleColon,
    Hash(String),
    Str(String),
    LParen,
    RParen,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        use alloc::format;
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::If => ":-".into(),
            Tok::Query => "?-".into(),
            Tok::Comma => ",".into(),
            Tok::Dot => ".".into(),
            Tok::DoubleColon => "::".into(),
            Tok::Hash(s) => format!("#{s}"),
            Tok::Str(s) => format!("'{s}'"),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug)]
pub(crate) struct LexError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub message: &'static str,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, LexError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: l, column: col });
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            ',' => {
                bump!();
                push(&mut out, Tok::Comma);
            }
            '.' => {
                bump!();
                push(&mut out, Tok::Dot);
            }
            '(' => {
                bump!();
                push(&mut out, Tok::LParen);
            }
            ')' => {
                bump!();
                push(&mut out, Tok::RParen);
            }
            ':' => {
                bump!();
                match chars.peek() {
                    Some('-') => {
                        bump!();
                        push(&mut out, Tok::If);
                    }
                    Some(':') => {
                        bump!();
                        push(&mut out, Tok::DoubleColon);
                    }
                    _ => {
                        return Err(LexError {
                            line: l,
                            column: col,
                            found: ":".into(),
                            message: "expected `:-` or `::`",
                        })
                    }
                }
            }
            '?' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    push(&mut out, Tok::Query);
                } else {
                    return Err(LexError { line: l, column: col, found: "?".into(), message: "expected `?-`" });
                }
            }
            '#' => {
                bump!();
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_ascii_alphanumeric() && c != '_' {
                        break;
                    }
                    word.push(c);
                    bump!();
                }
                push(&mut out, Tok::Hash(word));
            }
            '\'' => {
                bump!();
                let mut text = String::new();
                loop {
                    match bump!() {
                        None => {
                            return Err(LexError {
                                line: l,
                                column: col,
                                found: "'".into(),
                                message: "unterminated quoted text",
                            })
                        }
                        Some('\'') => break,
                        Some('\\') => match bump!() {
                            Some(e @ ('\'' | '\\')) => text.push(e),
                            _ => {
                                return Err(LexError {
                                    line,
                                    column,
                                    found: "\\".into(),
                                    message: "only \\' and \\\\ escapes are allowed",
                                })
                            }
                        },
                        Some(c) => text.push(c),
                    }
                }
                push(&mut out, Tok::Str(text));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_alphanumeric() && c != '_' {
                        break;
                    }
                    word.push(c);
                    bump!();
                }
                push(&mut out, Tok::Ident(word));
            }
            other => {
                let mut found = String::new();
                found.push(other);
                return Err(LexError { line: l, column: col, found, message: "unexpected character" });
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}
