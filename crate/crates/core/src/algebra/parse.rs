//! Polynomial expression parser for algebra elements.
//!
//! Accepts numbers, `p/q` rationals, the imaginary unit `i`, symbols known to
//! the algebra, `+ - * /`, integer powers `^n` (negative powers use the
//! algebra's declared inverse of a symbol), parentheses and implicit
//! multiplication such as `2x` or `(x+1)(x-1)`. Division is only by scalars.

use num_bigint::BigInt;

use super::{Algebra, Element};
use crate::{Error, Result, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[start..k].iter().map(|(_, c)| *c).collect();
            out.push((pos, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            out.push((pos, Tok::Ident(chars[start..k].iter().map(|(_, c)| *c).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            k += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a, A: Algebra> {
    alg: &'a A,
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl<A: Algebra> Parser<'_, A> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Element<A::Key>> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Element<A::Key>> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?, self.alg)?;
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.power()?;
                let c = self.as_scalar(&d).ok_or(Error::Parse { pos, msg: "division by a non-scalar".into() })?;
                let inv = c.inv().ok_or(Error::Parse { pos, msg: "division by zero".into() })?;
                acc = acc.scaled(&inv);
            } else if self.starts_factor() {
                acc = acc.mul(&self.power()?, self.alg)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn as_scalar(&self, e: &Element<A::Key>) -> Option<Scalar> {
        let unit = self.alg.unit_key();
        if e.nonunit_terms(&unit).next().is_some() {
            return None;
        }
        Some(e.coefficient(&unit))
    }

    fn power(&mut self) -> Result<Element<A::Key>> {
        let (base, name) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let n = match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.at += 1;
                u32::try_from(n).or_else(|_| self.err("exponent too large"))?
            }
            _ => return self.err("expected an integer exponent"),
        };
        let base = if negative {
            if let Some(c) = self.as_scalar(&base) {
                match c.inv() {
                    Some(ci) => Element::scalar(self.alg, ci),
                    None => return self.err("zero to a negative power"),
                }
            } else {
                match name.and_then(|s| self.alg.symbol_inverse(&s)) {
                    Some(inv) => inv,
                    None => return self.err("negative power of a symbol without a declared inverse"),
                }
            }
        } else {
            base
        };
        let mut acc = self.alg.one();
        for _ in 0..n {
            acc = acc.mul(&base, self.alg)?;
        }
        Ok(acc)
    }

    /// An atom and, when it is a bare symbol, its name.
    fn atom(&mut self) -> Result<(Element<A::Key>, Option<String>)> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok((Element::scalar(self.alg, Scalar::from(n)), None))
            }
            Some(Tok::Ident(s)) => {
                if s == "i" {
                    self.at += 1;
                    return Ok((Element::scalar(self.alg, Scalar::i()), None));
                }
                match self.alg.symbol(&s) {
                    Some(e) => {
                        self.at += 1;
                        Ok((e, Some(s)))
                    }
                    None => self.err(format!("unknown symbol `{s}`")),
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok((e, None))
            }
            _ => self.err("expected a number, symbol or `(`"),
        }
    }
}

/// Parses an expression into an element of `alg`.
pub fn parse_element<A: Algebra>(alg: &A, s: &str) -> Result<Element<A::Key>> {
    let toks = lex(s)?;
    let mut p = Parser { alg, toks, at: 0, len: s.len() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a scalar expression such as `-3/4 + 1/2 i`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let field = ScalarField;
    let e = parse_element(&field, s)?;
    Ok(e.coefficient(&()))
}

/// The coefficient field viewed as a one-dimensional algebra.
struct ScalarField;

impl Algebra for ScalarField {
    type Key = ();

    fn unit_key(&self) {}

    fn mul_keys(&self, _: &(), _: &()) -> Result<Element<()>> {
        Ok(Element::basis(()))
    }

    fn key_label(&self, _: &()) -> String {
        "1".into()
    }

    fn symbol(&self, _: &str) -> Option<Element<()>> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("1/2").unwrap(), Scalar::ratio(1, 2));
        assert_eq!(parse_scalar("-3/4 + 2i").unwrap(), Scalar::ratio(-3, 4) + Scalar::gaussian(0, 2));
        assert_eq!(parse_scalar("(1+i)^2").unwrap(), Scalar::gaussian(0, 2));
        assert_eq!(parse_scalar("2^-2").unwrap(), Scalar::ratio(1, 4));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_scalar("1 + $"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_scalar("(1"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_scalar("1/0").is_err());
        let s = models::sphere();
        assert!(parse_element(&s, "1/x").is_err());
        assert!(parse_element(&s, "x^-1").is_err());
        assert!(parse_element(&s, "w").is_err());
    }

    #[test]
    fn implicit_multiplication() {
        let s = models::sphere();
        let a = parse_element(&s, "2x(y+1)").unwrap();
        let b = parse_element(&s, "2*x*y + 2*x").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn labels_of_fd_algebras() {
        let m = models::matrix_algebra_c(2);
        // e11 is replaced by the unit in the adapted basis
        let e = parse_element(&m, "e12*e21 + e22").unwrap();
        assert_eq!(e, m.one());
    }
}
