use alloc::string::String;
use alloc::vec::Vec;

use super::ExprError;

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Num(v) => alloc::format!("number {v}"),
            TokenKind::Ident(s) => alloc::format!("identifier `{s}`"),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::Caret => "'^'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
        }
    }
}

/// A token and its 0-based character column.
#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub column: usize,
}

/// Longest-match tokenizer. Whitespace separates tokens and is otherwise
/// ignored.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i;
        let single = match c {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            tokens.push(Token { kind, column });
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let end = scan_number(&chars, i);
            let text: String = chars[i..end].iter().collect();
            let value: f64 = text.parse().map_err(|_| ExprError::BadLiteral { column, text: text.clone() })?;
            if !value.is_finite() {
                return Err(ExprError::BadLiteral { column, text });
            }
            tokens.push(Token { kind: TokenKind::Num(value), column });
            i = end;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i + 1;
            while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_') {
                end += 1;
            }
            tokens.push(Token { kind: TokenKind::Ident(chars[i..end].iter().collect()), column });
            i = end;
        } else {
            return Err(ExprError::Lex { column, found: c });
        }
    }
    Ok(tokens)
}

fn scan_number(chars: &[char], start: usize) -> usize {
    let digits = |mut k: usize| {
        while k < chars.len() && chars[k].is_ascii_digit() {
            k += 1;
        }
        k
    };
    let mut end = digits(start);
    if end < chars.len() && chars[end] == '.' {
        end = digits(end + 1);
    }
    if end < chars.len() && (chars[end] == 'e' || chars[end] == 'E') {
        let mut k = end + 1;
        if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
            k += 1;
        }
        let after = digits(k);
        // exponent only counts if it has digits
        if after > k {
            end = after;
        }
    }
    end
}
