//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr     := term { ("+" | "-") term }
//! term     := factor { ("*" | "/") factor }
//! factor   := "-" factor | power
//! power    := atom { "^" exponent }
//! exponent := [ "-" ] integer
//! atom     := integer | identifier | "(" expr ")"
//! ```
//!
//! Identifiers are declared names or jet spellings `y_xxt`; derivative
//! subscripts commute, so `y_xt` and `y_tx` parse to the same
//! coordinate. Errors carry the byte offset they were raised at.

use crate::error::{Error, Result};
use crate::jetspace::JetSpace;
use crate::scalar::Scalar;
use crate::symexpr::RatExpr;

const MAX_EXPONENT: i64 = 512;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].to_string()), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a, S: Scalar> {
    space: &'a JetSpace<S>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

pub fn parse<S: Scalar>(space: &JetSpace<S>, text: &str) -> Result<RatExpr<S>> {
    let toks = tokenize(text)?;
    let mut p = Parser { space, toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if let Some((_, at)) = p.peek() {
        return Err(Error::Parse { pos: at, msg: "unexpected trailing input".into() });
    }
    Ok(e)
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn peek(&self) -> Option<(&Tok, usize)> {
        self.toks.get(self.pos).map(|(t, p)| (t, *p))
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(_, p)| p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<RatExpr<S>> {
        let mut acc = self.term()?;
        while let Some((t, _)) = self.peek() {
            match t {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatExpr<S>> {
        let mut acc = self.factor()?;
        while let Some((t, at)) = self.peek() {
            match t {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs).map_err(|_| Error::Parse {
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatExpr<S>> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatExpr<S>> {
        let mut base = self.atom()?;
        while let Some((Tok::Caret, at)) = self.peek() {
            self.bump();
            let exp = self.exponent()?;
            base = base.pow(exp).map_err(|_| Error::Parse {
                pos: at,
                msg: "zero raised to a negative power".into(),
            })?;
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let mut sign = 1i64;
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            sign = -1;
        }
        match self.bump() {
            Some((Tok::Int(digits), at)) => {
                let v: i64 = digits.parse().map_err(|_| Error::Parse {
                    pos: at,
                    msg: "exponent too large".into(),
                })?;
                if v > MAX_EXPONENT {
                    return Err(Error::Parse { pos: at, msg: "exponent too large".into() });
                }
                Ok(sign * v)
            }
            Some((_, at)) => {
                Err(Error::Parse { pos: at, msg: "expected integer exponent".into() })
            }
            None => Err(Error::Parse {
                pos: self.end,
                msg: "expected integer exponent".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<RatExpr<S>> {
        match self.bump() {
            Some((Tok::Int(digits), _)) => {
                let mut acc = S::zero();
                let ten = S::from_int(10);
                for d in digits.bytes() {
                    acc = acc * ten.clone() + S::from_int((d - b'0') as i64);
                }
                Ok(RatExpr::constant(self.space.id(), acc))
            }
            Some((Tok::Ident(name), at)) => {
                let coord = self.space.resolve(&name).map_err(|e| match e {
                    Error::UnknownIdentifier { name, .. } => {
                        Error::UnknownIdentifier { name, pos: at }
                    }
                    other => other,
                })?;
                Ok(RatExpr::coord(coord))
            }
            Some((Tok::LParen, at)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => Err(Error::Parse {
                        pos: at,
                        msg: "unbalanced parenthesis".into(),
                    }),
                }
            }
            Some((t, at)) => Err(Error::Parse {
                pos: at,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(Error::Parse {
                pos: self.here(),
                msg: "unexpected end of input".into(),
            }),
        }
    }
}
