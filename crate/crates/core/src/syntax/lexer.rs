use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    /// `#name`
    Directive(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Dot,
    If,
    Assign,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Backslash,
    Union,
    Inter,
    Arrow,
    In,
    Not,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Directive(s) => format!("`#{s}`"),
        Tok::Eof => "end of input".to_string(),
        other => format!("`{}`", symbol(other)),
    }
}

fn symbol(tok: &Tok) -> &'static str {
    match tok {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::Comma => ",",
        Tok::Semi => ";",
        Tok::Colon => ":",
        Tok::Dot => ".",
        Tok::If => ":-",
        Tok::Assign => ":=",
        Tok::Eq => "=",
        Tok::Ne => "!=",
        Tok::Lt => "<",
        Tok::Le => "<=",
        Tok::Gt => ">",
        Tok::Ge => ">=",
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Slash => "/",
        Tok::Backslash => "\\",
        Tok::Union => "\\/",
        Tok::Inter => "/\\",
        Tok::Arrow => "->",
        Tok::In => "in",
        Tok::Not => "not",
        _ => "?",
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        let peek = chars.get(i + 1).copied();
        let (tok, len) = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let n = text.parse::<i64>().map_err(|_| Error::Syntax {
                line,
                col,
                msg: format!("integer literal `{text}` is too large"),
            })?;
            (Tok::Int(n), j - i)
        } else if c.is_alphabetic() || c == '_' || c == '#' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let tok = if let Some(rest) = text.strip_prefix('#') {
                if rest.is_empty() {
                    return Err(Error::Syntax {
                        line,
                        col,
                        msg: "expected a directive name after `#`".into(),
                    });
                }
                Tok::Directive(rest.to_string())
            } else if text == "not" {
                Tok::Not
            } else if text == "in" {
                Tok::In
            } else if c.is_uppercase() || c == '_' {
                Tok::Var(text)
            } else {
                Tok::Ident(text)
            };
            (tok, j - i)
        } else {
            match (c, peek) {
                (':', Some('-')) => (Tok::If, 2),
                (':', Some('=')) => (Tok::Assign, 2),
                (':', _) => (Tok::Colon, 1),
                ('!', Some('=')) => (Tok::Ne, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('<', _) => (Tok::Lt, 1),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('>', _) => (Tok::Gt, 1),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('-', _) => (Tok::Minus, 1),
                ('\\', Some('/')) => (Tok::Union, 2),
                ('\\', _) => (Tok::Backslash, 1),
                ('/', Some('\\')) => (Tok::Inter, 2),
                ('/', _) => (Tok::Slash, 1),
                ('=', _) => (Tok::Eq, 1),
                ('+', _) => (Tok::Plus, 1),
                ('*', _) => (Tok::Star, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                ('.', _) => (Tok::Dot, 1),
                ('∪', _) => (Tok::Union, 1),
                ('∩', _) => (Tok::Inter, 1),
                ('∖', _) => (Tok::Backslash, 1),
                ('∈', _) => (Tok::In, 1),
                ('≤', _) => (Tok::Le, 1),
                ('≥', _) => (Tok::Ge, 1),
                ('≠', _) => (Tok::Ne, 1),
                ('←', _) => (Tok::If, 1),
                _ => {
                    return Err(Error::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push(Token {
            tok,
            line,
            col: start_col,
        });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn multi_char_operators() {
        assert_eq!(
            toks(":- := : -> - \\/ \\ /\\ / <= < != >="),
            vec![
                Tok::If,
                Tok::Assign,
                Tok::Colon,
                Tok::Arrow,
                Tok::Minus,
                Tok::Union,
                Tok::Backslash,
                Tok::Inter,
                Tok::Slash,
                Tok::Le,
                Tok::Lt,
                Tok::Ne,
                Tok::Ge,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn identifiers_and_comments() {
        assert_eq!(
            toks("p(X, _y, 12) % trailing\n#count not in"),
            vec![
                Tok::Ident("p".into()),
                Tok::LParen,
                Tok::Var("X".into()),
                Tok::Comma,
                Tok::Var("_y".into()),
                Tok::Comma,
                Tok::Int(12),
                Tok::RParen,
                Tok::Directive("count".into()),
                Tok::Not,
                Tok::In,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_are_tracked() {
        let t = tokenize("a.\n  b").unwrap();
        assert_eq!((t[2].line, t[2].col), (2, 3));
    }

    #[test]
    fn stray_character_is_reported() {
        match tokenize("p :- q & r.") {
            Err(Error::Syntax { line: 1, col: 8, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
