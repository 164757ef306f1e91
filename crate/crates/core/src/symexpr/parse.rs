use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::error::Error;
use crate::symexpr::{Coefficient, Expr, Generator};

/// Plain-text expression grammar (round-trips with the `Display` impl):
///
/// ```text
/// sum     := ['-']* product (('+' | '-') ['-']* product)*
/// product := power (('*' | '/') power | power)*        ; juxtaposition = *
/// power   := atom ['^' ['-'] integer]
/// atom    := integer | 'i' | 'exp' '(' sum ')' | generator | '(' sum ')'
/// ```
///
/// Generators are the fixed names (`x0..x3`, `phi`, `phibar`, `pi0..pi3`,
/// `hbar`, `c`, `m`, `V`, `L`, `A`, `Abar`, `C`, `k0..k3`, `omega`, `v0`,
/// `alpha0`); any other identifier is a parse error. Rationals are written
/// with `/` (`3/2`), complex units with `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => { toks.push((Tok::Plus, i)); i += 1 }
            b'-' => { toks.push((Tok::Minus, i)); i += 1 }
            b'*' => { toks.push((Tok::Star, i)); i += 1 }
            b'/' => { toks.push((Tok::Slash, i)); i += 1 }
            b'^' => { toks.push((Tok::Caret, i)); i += 1 }
            b'(' => { toks.push((Tok::LParen, i)); i += 1 }
            b')' => { toks.push((Tok::RParen, i)); i += 1 }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &input[start..i];
                let n = digits
                    .parse::<BigInt>()
                    .map_err(|_| err(start, "invalid integer"))?;
                toks.push((Tok::Num(n), start));
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(input[start..i].to_string()), start));
            }
            _ => return Err(err(i, format!("unexpected character `{}`", b as char))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), Error> {
        let pos = self.here();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => Err(err(pos, format!("expected {what}"))),
        }
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut acc = self.signed_product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.signed_product()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.signed_product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed_product(&mut self) -> Result<Expr, Error> {
        let mut negate = false;
        while self.peek() == Some(&Tok::Minus) {
            self.next();
            negate = !negate;
        }
        let e = self.product()?;
        Ok(if negate { e.neg() } else { e })
    }

    fn product(&mut self) -> Result<Expr, Error> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let pos = self.here();
                    let rhs = self.power()?;
                    let inv = rhs
                        .invert()
                        .map_err(|e| err(pos, format!("division: {e}")))?;
                    acc = acc.mul(&inv);
                }
                // juxtaposition
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.next();
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            negate = true;
        }
        let pos = self.here();
        let n = match self.next() {
            Some(Tok::Num(n)) => i64::try_from(n)
                .map_err(|_| err(pos, "exponent out of range"))?,
            _ => return Err(err(pos, "expected integer exponent")),
        };
        let n = if negate { -n } else { n };
        base.pow(n).map_err(|e| err(pos, format!("power: {e}")))
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        let pos = self.here();
        match self.next() {
            Some(Tok::Num(n)) => Ok(Expr::coeff(Coefficient::new(
                BigRational::from_integer(n),
                BigRational::zero(),
            ))),
            Some(Tok::Ident(name)) => match name.as_str() {
                "i" => Ok(Expr::imag()),
                "exp" => {
                    self.expect(Tok::LParen, "`(` after exp")?;
                    let arg = self.sum()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Expr::exp_of(arg).map_err(|_| err(pos, "nested exponential"))
                }
                other => Generator::from_name(other)
                    .map(Expr::gen)
                    .ok_or_else(|| err(pos, format!("unknown symbol `{other}`"))),
            },
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(err(pos, "expected expression")),
        }
    }
}

pub fn parse_expr(input: &str) -> Result<Expr, Error> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, end: input.len() };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(err(p.here(), "trailing input"));
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Expr, Error> {
        parse_expr(s)
    }
}
