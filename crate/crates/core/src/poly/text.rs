//! Canonical text form for polynomials.
//!
//! Printing lists terms in descending grevlex order, coefficient first, with
//! `^` powers and `*` separators: `2*x^5*y^2 - 3/4*x + 1`. Parsing accepts
//! integers, `p/q` rationals (Q only), variables, `+ - * ^`, and parentheses;
//! whitespace is insignificant. Every printed string re-parses to the
//! identical polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Coeff, CoeffKind, RingDesc};

use super::{Monomial, Poly};

/// True when the coefficient prints with a leading minus sign.
fn is_negative(c: &Coeff) -> bool {
    match c {
        Coeff::Rat(r) => r.is_negative(),
        Coeff::Int(n) => n.is_negative(),
        Coeff::Mod(_) => false,
    }
}

fn abs_coeff(c: &Coeff) -> Coeff {
    match c {
        Coeff::Rat(r) => Coeff::Rat(r.abs()),
        Coeff::Int(n) => Coeff::Int(n.abs()),
        Coeff::Mod(v) => Coeff::Mod(*v),
    }
}

fn format_term(ring: &RingDesc, m: &Monomial, c: &Coeff, out: &mut String) {
    let a = abs_coeff(c);
    if m.is_one() {
        out.push_str(&a.to_string());
        return;
    }
    if !a.is_one() {
        out.push_str(&a.to_string());
        out.push('*');
    }
    let mut first = true;
    for (i, e) in m.0.iter().enumerate() {
        if *e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(&ring.vars()[i]);
        if *e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

pub(super) fn format_poly(f: &Poly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in f.terms_desc().enumerate() {
        if i == 0 {
            if is_negative(c) {
                out.push('-');
            }
        } else if is_negative(c) {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        format_term(f.ring(), m, c, &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut toks = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                toks.push(Token::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Token::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Token::Star);
            }
            '^' => {
                chars.next();
                toks.push(Token::Caret);
            }
            '/' => {
                chars.next();
                toks.push(Token::Slash);
            }
            '(' => {
                chars.next();
                toks.push(Token::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Token::RParen);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Token::Int(digits.parse().expect("digit string parses")));
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Token::Ident(name));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    ring: &'a RingDesc,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            self.next();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Token::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.next();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.peek() == Some(&Token::Caret) {
            self.next();
            match self.next() {
                Some(Token::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent out of range".into()))?;
                    Ok(base.pow(e))
                }
                other => Err(Error::Parse(format!("expected integer exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Poly> {
        match self.next() {
            Some(Token::Int(n)) => {
                if self.peek() == Some(&Token::Slash) {
                    self.next();
                    let den = match self.next() {
                        Some(Token::Int(d)) => d,
                        other => {
                            return Err(Error::Parse(format!(
                                "expected denominator after '/', found {other:?}"
                            )))
                        }
                    };
                    if *self.ring.coeff() != CoeffKind::Q {
                        return Err(Error::Parse(
                            "rational constants are only valid over Q".into(),
                        ));
                    }
                    if den.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    Ok(Poly::constant(self.ring, Coeff::Rat(BigRational::new(n, den))))
                } else {
                    Ok(Poly::constant(self.ring, self.ring.coeff().from_bigint(n)))
                }
            }
            Some(Token::Ident(name)) => Poly::var_named(self.ring, &name)
                .map_err(|_| Error::Parse(format!("unknown variable {name:?}"))),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    other => Err(Error::Parse(format!("expected ')', found {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_poly(ring: &RingDesc, s: &str) -> Result<Poly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { ring, toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}
