//! Tokens of the `.catt` surface syntax.

use crate::error::{FrontendError, Result, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(usize),
    Let,
    Coh,
    Check,
    CylComp,
    CylStack,
    ConeComp,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Arrow,
    Star,
    Eq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Eof => "end of file".into(),
            t => format!("`{}`", t.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Let => "let",
            Tok::Coh => "coh",
            Tok::Check => "check",
            Tok::CylComp => "cylcomp",
            Tok::CylStack => "cylstack",
            Tok::ConeComp => "conecomp",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Arrow => "->",
            Tok::Star => "*",
            Tok::Eq => "=",
            _ => "",
        }
    }
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub const KEYWORDS: [&str; 6] = ["let", "coh", "check", "cylcomp", "cylstack", "conecomp"];

/// Splits `src` into tokens. Line comments start with `--`.
pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if src[i..].starts_with("--") {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        if src[i..].starts_with("->") {
            it.next();
            it.next();
            out.push((Tok::Arrow, Span::new(i, i + 2)));
            continue;
        }
        if is_ident_start(c) {
            let mut j = i;
            while let Some(&(k, c)) = it.peek() {
                if !is_ident_char(c) {
                    break;
                }
                j = k + c.len_utf8();
                it.next();
            }
            let word = &src[i..j];
            let tok = match word {
                "let" => Tok::Let,
                "coh" => Tok::Coh,
                "check" => Tok::Check,
                "cylcomp" => Tok::CylComp,
                "cylstack" => Tok::CylStack,
                "conecomp" => Tok::ConeComp,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((tok, Span::new(i, j)));
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while let Some(&(k, c)) = it.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                j = k + 1;
                it.next();
            }
            let span = Span::new(i, j);
            let n = src[i..j].parse().map_err(|_| FrontendError::Syntax {
                span,
                expected: "a number that fits in a machine word".into(),
            })?;
            out.push((Tok::Num(n), span));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '*' => Tok::Star,
            '=' => Tok::Eq,
            _ => {
                return Err(FrontendError::Syntax {
                    span: Span::new(i, i + c.len_utf8()),
                    expected: "a token".into(),
                })
            }
        };
        it.next();
        out.push((tok, Span::new(i, i + c.len_utf8())));
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn keywords_arrows_and_comments() {
        assert_eq!(
            toks("let f' (x : *) -- note\n= x -> y"),
            vec![
                Tok::Let,
                Tok::Ident("f'".into()),
                Tok::LParen,
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::Star,
                Tok::RParen,
                Tok::Eq,
                Tok::Ident("x".into()),
                Tok::Arrow,
                Tok::Ident("y".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("cylcomp(2,1,2)")[..3], [Tok::CylComp, Tok::LParen, Tok::Num(2)]);
    }

    #[test]
    fn stray_character() {
        assert!(matches!(lex("let ?"), Err(FrontendError::Syntax { .. })));
    }
}
