use std::fmt;

use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident(String),
    Not,
    Dot,
    Colon,
    Arrow,
    Amp,
    Semi,
    Bang,
    BangBang,
    Plus,
    Minus,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(name) => write!(f, "identifier `{name}`"),
            TokenKind::Not => f.write_str("`not`"),
            TokenKind::Dot => f.write_str("`.`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::Arrow => f.write_str("`<-`"),
            TokenKind::Amp => f.write_str("`&`"),
            TokenKind::Semi => f.write_str("`;`"),
            TokenKind::Bang => f.write_str("`!`"),
            TokenKind::BangBang => f.write_str("`!!`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();

    loop {
        let (line, column) = (cur.line, cur.column);
        let Some(c) = cur.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                line,
                column,
            });
            return Ok(tokens);
        };

        let kind = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '%' => {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
                continue;
            }
            'a'..='z' => {
                let mut name = String::new();
                while let Some(c) = cur.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                if name == "not" {
                    TokenKind::Not
                } else {
                    TokenKind::Ident(name)
                }
            }
            '!' => {
                cur.bump();
                if cur.peek() == Some('!') {
                    cur.bump();
                    TokenKind::BangBang
                } else {
                    TokenKind::Bang
                }
            }
            '<' => {
                cur.bump();
                if cur.peek() == Some('-') {
                    cur.bump();
                    TokenKind::Arrow
                } else {
                    return Err(ParseError::new(line, column, "`<-`", "`<`"));
                }
            }
            _ => {
                let kind = match c {
                    '.' => TokenKind::Dot,
                    ':' => TokenKind::Colon,
                    '&' => TokenKind::Amp,
                    ';' => TokenKind::Semi,
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    other => {
                        return Err(ParseError::new(
                            line,
                            column,
                            "a token",
                            format!("character {other:?}"),
                        ))
                    }
                };
                cur.bump();
                kind
            }
        };
        tokens.push(Token { kind, line, column });
    }
}
