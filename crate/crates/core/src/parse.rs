//! Tokenizer and recursive-descent parser for the polynomial grammar.

use crate::error::{Error, Result};
use crate::graded::{GradedPolynomial, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Lexed {
    tokens: Vec<(Token, usize)>,
    end: usize,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Lexed> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' => {
                tokens.push((Token::Plus, col));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, col));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, col));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, col));
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse::<i64>()
                    .map_err(|_| Error::parse(line, col, format!("integer `{s}` is too large")))?;
                tokens.push((Token::Int(n), col));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push((Token::Ident(chars[start..i].iter().collect()), col));
            }
            _ => {
                return Err(Error::parse(
                    line,
                    col,
                    format!("unexpected character `{c}`"),
                ))
            }
        }
    }
    Ok(Lexed {
        tokens,
        end: col0 + chars.len(),
    })
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    end: usize,
    line: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(_, c)| c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), message)
    }

    fn expression(&mut self) -> Result<GradedPolynomial> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            let negate = match tok {
                Token::Plus => false,
                Token::Minus => true,
                _ => return Err(self.error("expected `+` or end of expression")),
            };
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add(&if negate { t.neg() } else { t })?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GradedPolynomial> {
        let mut sign = 1i64;
        while self.peek() == Some(&Token::Minus) {
            sign = -sign;
            self.pos += 1;
        }
        let mut coeff = sign;
        let mut factors: Vec<(String, u16)> = Vec::new();
        match self.peek() {
            Some(Token::Int(n)) => {
                coeff *= *n;
                self.pos += 1;
            }
            Some(Token::Ident(_)) => factors.push(self.factor()?),
            _ => return Err(self.error("expected a coefficient or a variable")),
        }
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            match self.peek() {
                Some(Token::Ident(_)) => factors.push(self.factor()?),
                _ => return Err(self.error("expected a variable after `*`")),
            }
        }
        let refs: Vec<(&str, u16)> = factors.iter().map(|(n, e)| (n.as_str(), *e)).collect();
        GradedPolynomial::term(self.ring, coeff, &refs)
    }

    fn factor(&mut self) -> Result<(String, u16)> {
        let col = self.column();
        let Some(Token::Ident(name)) = self.peek().cloned() else {
            return Err(self.error("expected a variable"));
        };
        self.pos += 1;
        let Some(index) = self.ring.index_of(&name) else {
            return Err(Error::parse(
                self.line,
                col,
                format!("unknown variable `{name}`"),
            ));
        };
        let mut exp = 1u16;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.peek() {
                Some(&Token::Int(n)) if n >= 1 && n <= u16::MAX as i64 => {
                    exp = n as u16;
                    self.pos += 1;
                }
                _ => return Err(self.error("expected a positive integer exponent")),
            }
            if exp > 1 && self.ring.generator(index).is_odd() {
                return Err(Error::parse(
                    self.line,
                    col,
                    format!("odd variable `{name}` cannot carry exponent {exp}"),
                ));
            }
        }
        Ok((name, exp))
    }
}

pub(crate) fn parse_polynomial(
    text: &str,
    ring: &Ring,
    line: usize,
    column: usize,
) -> Result<GradedPolynomial> {
    let lexed = lex(text, line, column)?;
    let mut parser = Parser {
        tokens: &lexed.tokens,
        pos: 0,
        end: lexed.end,
        line,
        ring,
    };
    parser.expression()
}
