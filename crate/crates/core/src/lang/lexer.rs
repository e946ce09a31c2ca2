use std::fmt;

use super::{ParseError, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Equals,
    Dot,
    Mu,
    Ident(String),
    Nat(u64),
    /// `:name`
    Command(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Mu => f.write_str("`μ`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Nat(n) => write!(f, "number {n}"),
            Tok::Command(c) => write!(f, "command `:{c}`"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(start, c)) = it.peek() {
        let single = |t: Tok| (t, Span::new(start, start + c.len_utf8()));
        match c {
            _ if c.is_whitespace() => {
                it.next();
            }
            '#' => {
                while let Some(&(_, c)) = it.peek() {
                    if c == '\n' {
                        break;
                    }
                    it.next();
                }
            }
            '{' | '}' | '(' | ')' | ',' | ';' | '=' | '.' | 'μ' => {
                it.next();
                out.push(single(match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '=' => Tok::Equals,
                    '.' => Tok::Dot,
                    _ => Tok::Mu,
                }));
            }
            // `∅` is accepted as the empty set.
            '∅' => {
                it.next();
                out.push((Tok::LBrace, Span::new(start, start + c.len_utf8())));
                out.push((Tok::RBrace, Span::new(start, start + c.len_utf8())));
            }
            ':' => {
                it.next();
                let mut end = start + 1;
                let mut name = String::new();
                while let Some(&(i, c)) = it.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    name.push(c);
                    end = i + c.len_utf8();
                    it.next();
                }
                if name.is_empty() {
                    return Err(ParseError::new(
                        "expected a command name after `:`",
                        Span::new(start, end),
                        src,
                    ));
                }
                out.push((Tok::Command(name), Span::new(start, end)));
            }
            _ if c.is_ascii_digit() => {
                let mut end = start;
                let mut value: u64 = 0;
                while let Some(&(i, c)) = it.peek() {
                    let Some(d) = c.to_digit(10) else { break };
                    end = i + 1;
                    it.next();
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(u64::from(d)))
                        .ok_or_else(|| {
                            ParseError::new("number too large", Span::new(start, end), src)
                        })?;
                }
                out.push((Tok::Nat(value), Span::new(start, end)));
            }
            _ if is_ident_start(c) => {
                let mut end = start;
                let mut name = String::new();
                while let Some(&(i, c)) = it.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    name.push(c);
                    end = i + c.len_utf8();
                    it.next();
                }
                let tok = if name == "mu" {
                    Tok::Mu
                } else {
                    Tok::Ident(name)
                };
                out.push((tok, Span::new(start, end)));
            }
            _ => {
                return Err(ParseError::new(
                    format!("unexpected character {c:?}"),
                    Span::new(start, start + c.len_utf8()),
                    src,
                ))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("μx.{x, 12} # comment\n:eq mu"),
            vec![
                Tok::Mu,
                Tok::Ident("x".into()),
                Tok::Dot,
                Tok::LBrace,
                Tok::Ident("x".into()),
                Tok::Comma,
                Tok::Nat(12),
                Tok::RBrace,
                Tok::Command("eq".into()),
                Tok::Mu,
            ]
        );
        assert_eq!(toks("∅"), vec![Tok::LBrace, Tok::RBrace]);
    }

    #[test]
    fn errors_carry_position() {
        let e = lex("{\n  $}").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(lex("99999999999999999999999").is_err());
        assert!(lex(": x").is_err());
    }
}
