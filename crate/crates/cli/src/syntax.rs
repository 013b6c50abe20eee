//! Word arguments with commutator and conjugation sugar.
//!
//! ```text
//! word   := factor*
//! factor := atom ('^' (int | atom))*
//! atom   := name | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `g^n` is a power, `g^h` is `h⁻¹ g h`, and `[g,h]` is `g h g⁻¹ h⁻¹`.

use std::collections::BTreeSet;

use slopelab::words::{commutator, conjugate, Alphabet, Word};
use slopelab::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Name(String),
    Int(i64),
    Caret,
    Open(char),
    Close(char),
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() || c == '*' || c == '.' => i += 1,
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' | '[' => {
                out.push(Token::Open(ch));
                i += 1;
            }
            ')' | ']' => {
                out.push(Token::Close(ch));
                i += 1;
            }
            ',' => {
                out.push(Token::Comma);
                i += 1;
            }
            c if c == '-' || c == '+' || c.is_ascii_digit() => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse::<i64>()
                    .map_err(|_| Error::Syntax(format!("bad integer `{s}` in `{text}`")))?;
                out.push(Token::Int(n));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Name(chars[start..i].iter().collect()));
            }
            c => return Err(Error::Syntax(format!("unexpected `{c}` in `{text}`"))),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Gen(String),
    Seq(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Conj(Box<Expr>, Box<Expr>),
    Comm(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error(&self, what: &str) -> Error {
        Error::Syntax(format!("{what} in `{}`", self.text))
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {t:?}")))
        }
    }

    fn word(&mut self) -> Result<Expr> {
        let mut factors = Vec::new();
        while matches!(self.peek(), Some(Token::Name(_) | Token::Open(_))) {
            factors.push(self.factor()?);
        }
        Ok(Expr::Seq(factors))
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            e = match self.peek() {
                Some(Token::Int(0)) => return Err(Error::ZeroExponent(self.text.to_string())),
                Some(&Token::Int(n)) => {
                    self.pos += 1;
                    Expr::Pow(Box::new(e), n)
                }
                _ => Expr::Conj(Box::new(e), Box::new(self.atom()?)),
            };
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::Name(n)) => {
                self.pos += 1;
                Ok(Expr::Gen(n))
            }
            Some(Token::Open('(')) => {
                self.pos += 1;
                let e = self.word()?;
                self.expect(Token::Close(')'))?;
                Ok(e)
            }
            Some(Token::Open('[')) => {
                self.pos += 1;
                let g = self.word()?;
                self.expect(Token::Comma)?;
                let h = self.word()?;
                self.expect(Token::Close(']'))?;
                Ok(Expr::Comm(Box::new(g), Box::new(h)))
            }
            _ => Err(self.error("expected a generator, `(` or `[`")),
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        text,
    };
    let e = p.word()?;
    if p.pos != tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

fn build(e: &Expr, alphabet: &Alphabet) -> Result<Word> {
    Ok(match e {
        Expr::Gen(n) => alphabet.word(n)?,
        Expr::Seq(parts) => {
            let mut w = Word::identity();
            for p in parts {
                w = &w * &build(p, alphabet)?;
            }
            w
        }
        Expr::Pow(b, n) => build(b, alphabet)?.pow(*n),
        Expr::Conj(g, b) => conjugate(&build(g, alphabet)?, &build(b, alphabet)?),
        Expr::Comm(g, h) => commutator(&build(g, alphabet)?, &build(h, alphabet)?),
    })
}

fn names(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Gen(n) => {
            out.insert(n.clone());
        }
        Expr::Seq(parts) => parts.iter().for_each(|p| names(p, out)),
        Expr::Pow(b, _) => names(b, out),
        Expr::Conj(a, b) | Expr::Comm(a, b) => {
            names(a, out);
            names(b, out);
        }
    }
}

/// Parses `text` over `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word> {
    build(&parse_expr(text)?, alphabet)
}

/// The sorted set of generator names used by `texts`.
pub fn infer_alphabet<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Alphabet> {
    let mut all = BTreeSet::new();
    for t in texts {
        names(&parse_expr(t)?, &mut all);
    }
    Alphabet::new(all)
}
