//! Tokenizer for the surface syntax. Produces a flat token stream with
//! source spans for error reporting.

use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// `all`, `mu`, `lambda`, `nu`, `let`, `in`, `Top`, `Bot`.
    Kw(Keyword),
    /// Identifier starting with a lowercase letter: variables and term labels.
    Ident(String),
    /// Identifier starting with an uppercase letter: type labels.
    UpIdent(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Dot,
    DotDot,
    Amp,
    Eq,
    Semi,
    /// `/\`, the definition aggregator.
    AndDef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keyword {
    All,
    Mu,
    Lambda,
    Nu,
    Let,
    In,
    Top,
    Bot,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Kw(k) => {
                let s = match k {
                    Keyword::All => "all",
                    Keyword::Mu => "mu",
                    Keyword::Lambda => "lambda",
                    Keyword::Nu => "nu",
                    Keyword::Let => "let",
                    Keyword::In => "in",
                    Keyword::Top => "Top",
                    Keyword::Bot => "Bot",
                };
                f.write_str(s)
            }
            Tok::Ident(s) | Tok::UpIdent(s) => f.write_str(s),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::LBrace => f.write_str("{"),
            Tok::RBrace => f.write_str("}"),
            Tok::Colon => f.write_str(":"),
            Tok::Dot => f.write_str("."),
            Tok::DotDot => f.write_str(".."),
            Tok::Amp => f.write_str("&"),
            Tok::Eq => f.write_str("="),
            Tok::Semi => f.write_str(";"),
            Tok::AndDef => f.write_str("/\\"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;
    while i < bytes.len() {
        let (start_line, start_col, start) = (line, col, i);
        let c = bytes[i] as char;
        let advance = |n: usize, line: &mut u32, col: &mut u32, i: &mut usize| {
            for k in 0..n {
                if bytes[*i + k] == b'\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
            }
            *i += n;
        };
        if c.is_whitespace() {
            advance(1, &mut line, &mut col, &mut i);
            continue;
        }
        let span = |end: usize| SourceSpan {
            start,
            end,
            line: start_line,
            col: start_col,
        };
        let tok = match c {
            '(' => Some((Tok::LParen, 1)),
            ')' => Some((Tok::RParen, 1)),
            '{' => Some((Tok::LBrace, 1)),
            '}' => Some((Tok::RBrace, 1)),
            ':' => Some((Tok::Colon, 1)),
            '&' => Some((Tok::Amp, 1)),
            '=' => Some((Tok::Eq, 1)),
            ';' => Some((Tok::Semi, 1)),
            '.' => {
                if bytes.get(i + 1) == Some(&b'.') {
                    Some((Tok::DotDot, 2))
                } else {
                    Some((Tok::Dot, 1))
                }
            }
            '/' => {
                if bytes.get(i + 1) == Some(&b'\\') {
                    Some((Tok::AndDef, 2))
                } else {
                    return Err(ParseError::UnexpectedChar {
                        found: '/',
                        span: span(i + 1),
                    });
                }
            }
            _ => None,
        };
        if let Some((tok, n)) = tok {
            advance(n, &mut line, &mut col, &mut i);
            toks.push(Token { tok, span: span(i) });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < bytes.len() {
                let d = bytes[j] as char;
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    j += 1;
                } else {
                    break;
                }
            }
            let word = &src[i..j];
            let tok = match word {
                "all" => Tok::Kw(Keyword::All),
                "mu" => Tok::Kw(Keyword::Mu),
                "lambda" => Tok::Kw(Keyword::Lambda),
                "nu" => Tok::Kw(Keyword::Nu),
                "let" => Tok::Kw(Keyword::Let),
                "in" => Tok::Kw(Keyword::In),
                "Top" => Tok::Kw(Keyword::Top),
                "Bot" => Tok::Kw(Keyword::Bot),
                _ if c.is_ascii_uppercase() => Tok::UpIdent(word.to_string()),
                _ => Tok::Ident(word.to_string()),
            };
            let n = j - i;
            advance(n, &mut line, &mut col, &mut i);
            toks.push(Token { tok, span: span(i) });
            continue;
        }
        return Err(ParseError::UnexpectedChar {
            found: c,
            span: span(i + c.len_utf8()),
        });
    }
    Ok(toks)
}
