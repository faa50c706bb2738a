use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    And,
    Or,
    Bang,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Assign,
    Le,
    EqEq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(x) => write!(f, "`{x}`"),
            Tok::And => f.write_str("`/\\`"),
            Tok::Or => f.write_str("`\\/`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Assign => f.write_str("`=`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let start = i;
        let push = |tok: Tok, len: usize, out: &mut Vec<Token>| {
            out.push(Token { tok, line: tl, col: tc });
            len
        };
        let len = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '/' if chars.get(i + 1) == Some(&'\\') => push(Tok::And, 2, &mut out),
            '\\' if chars.get(i + 1) == Some(&'/') => push(Tok::Or, 2, &mut out),
            '<' if chars.get(i + 1) == Some(&'=') => push(Tok::Le, 2, &mut out),
            '=' if chars.get(i + 1) == Some(&'=') => push(Tok::EqEq, 2, &mut out),
            '=' => push(Tok::Assign, 1, &mut out),
            '!' => push(Tok::Bang, 1, &mut out),
            '(' => push(Tok::LParen, 1, &mut out),
            ')' => push(Tok::RParen, 1, &mut out),
            '[' => push(Tok::LBracket, 1, &mut out),
            ']' => push(Tok::RBracket, 1, &mut out),
            ',' => push(Tok::Comma, 1, &mut out),
            ':' => push(Tok::Colon, 1, &mut out),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                push(Tok::Ident(word), j - i, &mut out)
            }
            c if c.is_ascii_digit() || c == '.' || (c == '-' || c == '+') && starts_number(&chars, i + 1) => {
                let j = scan_number(&chars, i);
                let text: String = chars[i..j].iter().collect();
                let x: f64 = text.parse().map_err(|_| ParseError::new(tl, tc, &["number"], format!("`{text}`")))?;
                push(Tok::Number(x), j - i, &mut out)
            }
            other => return Err(ParseError::new(tl, tc, &["token"], format!("`{other}`"))),
        };
        i = start + len;
        col += len;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn starts_number(chars: &[char], i: usize) -> bool {
    match chars.get(i) {
        Some(c) if c.is_ascii_digit() => true,
        Some('.') => matches!(chars.get(i + 1), Some(c) if c.is_ascii_digit()),
        _ => false,
    }
}

fn scan_number(chars: &[char], mut j: usize) -> usize {
    if chars[j] == '-' || chars[j] == '+' {
        j += 1;
    }
    while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
        j += 1;
    }
    if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
        let mut k = j + 1;
        if k < chars.len() && (chars[k] == '-' || chars[k] == '+') {
            k += 1;
        }
        if k < chars.len() && chars[k].is_ascii_digit() {
            j = k;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
        }
    }
    j
}
