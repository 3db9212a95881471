//! Tokens of the diagram format.
//!
//! Newlines end statements, except inside `{ }` and `[ ]`.

use super::FormatError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semi,
    Eq,
    Minus,
    Slash,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("'{w}'"),
            Tok::Arrow => "'->'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Colon => "':'".into(),
            Tok::Semi => "';'".into(),
            Tok::Eq => "'='".into(),
            Tok::Minus => "'-'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, FormatError> {
    let mut out = Vec::new();
    let mut depth: Vec<(char, usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let column = k + 1;
            let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line, column });
            match c {
                '#' => break,
                c if c.is_whitespace() => {}
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = k;
                    while k + 1 < chars.len()
                        && (chars[k + 1].is_ascii_alphanumeric() || chars[k + 1] == '_')
                    {
                        k += 1;
                    }
                    push(&mut out, Tok::Word(chars[start..=k].iter().collect()));
                }
                '-' if chars.get(k + 1) == Some(&'>') => {
                    push(&mut out, Tok::Arrow);
                    k += 1;
                }
                '-' => push(&mut out, Tok::Minus),
                '/' => push(&mut out, Tok::Slash),
                '(' => push(&mut out, Tok::LParen),
                ')' => push(&mut out, Tok::RParen),
                '{' | '[' => {
                    depth.push((c, line, column));
                    push(&mut out, if c == '{' { Tok::LBrace } else { Tok::LBracket });
                }
                '}' | ']' => {
                    let open = if c == '}' { '{' } else { '[' };
                    match depth.pop() {
                        Some((o, _, _)) if o == open => {}
                        _ => return Err(syntax(line, column, format!("unmatched '{c}'"))),
                    }
                    push(&mut out, if c == '}' { Tok::RBrace } else { Tok::RBracket });
                }
                ',' => push(&mut out, Tok::Comma),
                ':' => push(&mut out, Tok::Colon),
                ';' => push(&mut out, Tok::Semi),
                '=' => push(&mut out, Tok::Eq),
                other => {
                    return Err(syntax(
                        line,
                        column,
                        format!("unexpected character {other:?}"),
                    ))
                }
            }
            k += 1;
        }
        if depth.is_empty() {
            out.push(Token {
                tok: Tok::Newline,
                line,
                column: chars.len() + 1,
            });
        }
    }
    if let Some((c, line, column)) = depth.pop() {
        return Err(syntax(line, column, format!("unclosed '{c}'")));
    }
    let line = text.lines().count() + 1;
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: 1,
    });
    Ok(out)
}
