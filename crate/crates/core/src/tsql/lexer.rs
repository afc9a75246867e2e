use std::fmt;

use crate::temporal::Instant;

use super::{ParseError, Position};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Word(String),
    Int(i64),
    Real(f64),
    Str(String),
    Instant(Instant),
    Comma,
    LParen,
    RParen,
    LBracket,
    Star,
    Semicolon,
    Op(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Real(r) => write!(f, "`{r}`"),
            Tok::Str(s) => write!(f, "string '{s}'"),
            Tok::Instant(t) => write!(f, "instant {t}"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Semicolon => f.write_str("`;`"),
            Tok::Op(op) => write!(f, "`{op}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Position,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    // advances over chars[i..j] keeping line/column in step
    let advance = |i: &mut usize, j: usize, line: &mut usize, col: &mut usize| {
        for &c in &chars[*i..j] {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
        *i = j;
    };

    while i < chars.len() {
        let c = chars[i];
        let pos = Position { line, column: col };
        if c.is_whitespace() {
            let next = i + 1;
            advance(&mut i, next, &mut line, &mut col);
            continue;
        }
        let (tok, end) = if c.is_ascii_alphabetic() || c == '_' {
            let end = scan(&chars, i, |c| c.is_ascii_alphanumeric() || c == '_');
            (Tok::Word(chars[i..end].iter().collect()), end)
        } else if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            lex_number_or_instant(&chars, i, pos)?
        } else if c == '\'' {
            lex_string(&chars, i, pos)?
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            match two.as_str() {
                "<>" | "!=" => (Tok::Op("<>"), i + 2),
                "<=" => (Tok::Op("<="), i + 2),
                ">=" => (Tok::Op(">="), i + 2),
                _ => {
                    let tok = match c {
                        ',' => Tok::Comma,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '[' => Tok::LBracket,
                        '*' => Tok::Star,
                        ';' => Tok::Semicolon,
                        '=' => Tok::Op("="),
                        '<' => Tok::Op("<"),
                        '>' => Tok::Op(">"),
                        other => {
                            return Err(ParseError::syntax(pos, vec![], format!("character `{other}`")));
                        }
                    };
                    (tok, i + 1)
                }
            }
        };
        tokens.push(Token { tok, pos });
        advance(&mut i, end, &mut line, &mut col);
    }
    tokens.push(Token { tok: Tok::Eof, pos: Position { line, column: col } });
    Ok(tokens)
}

fn scan(chars: &[char], start: usize, pred: impl Fn(char) -> bool) -> usize {
    let mut j = start;
    while j < chars.len() && pred(chars[j]) {
        j += 1;
    }
    j
}

fn lex_number_or_instant(chars: &[char], i: usize, pos: Position) -> Result<(Tok, usize), ParseError> {
    let digits_end = scan(chars, i, |c| c.is_ascii_digit());
    // YYYY- starts an ISO instant
    if chars[i] != '-' && digits_end - i == 4 && chars.get(digits_end) == Some(&'-') {
        let end = scan(chars, i, |c| c.is_ascii_alphanumeric() || c == '-' || c == ':');
        let text: String = chars[i..end].iter().collect();
        let t = Instant::parse(&text).map_err(|e| ParseError::literal(pos, e.to_string()))?;
        return Ok((Tok::Instant(t), end));
    }
    let int_end = scan(chars, i + 1, |c| c.is_ascii_digit());
    let mut end = int_end;
    let mut is_real = false;
    if chars.get(end) == Some(&'.') && chars.get(end + 1).is_some_and(|c| c.is_ascii_digit()) {
        end = scan(chars, end + 1, |c| c.is_ascii_digit());
        is_real = true;
    }
    let text: String = chars[i..end].iter().collect();
    let tok = if is_real {
        Tok::Real(text.parse().map_err(|_| ParseError::literal(pos, format!("bad number `{text}`")))?)
    } else {
        Tok::Int(text.parse().map_err(|_| ParseError::literal(pos, format!("integer `{text}` out of range")))?)
    };
    Ok((tok, end))
}

fn lex_string(chars: &[char], i: usize, pos: Position) -> Result<(Tok, usize), ParseError> {
    let mut out = String::new();
    let mut j = i + 1;
    loop {
        match chars.get(j) {
            None => return Err(ParseError::literal(pos, "unterminated string literal".into())),
            Some('\'') if chars.get(j + 1) == Some(&'\'') => {
                out.push('\'');
                j += 2;
            }
            Some('\'') => return Ok((Tok::Str(out), j + 1)),
            Some(&c) => {
                out.push(c);
                j += 1;
            }
        }
    }
}
