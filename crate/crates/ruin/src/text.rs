//! Plain-text formula grammar.
//!
//! ```text
//! formula     := sum [ "/(" total ")" [ "^" int ] ]
//! sum         := term { ("+" | "-") term }
//! term        := [ "-" ] ( coefficient { "*" factor } | factor { "*" factor } )
//! coefficient := int [ "/" int ]
//! factor      := ("A" | "B" | "C") [ "^" int ]
//! total       := "A+B" | "A+B+C"
//! ```
//!
//! Rendering is canonical: terms in graded lexicographic order, every
//! coefficient printed (including 1), and the denominator as
//! `/(A+B+C)^k` with an explicit exponent.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use ruin_core::algebra::{Monomial, MultiPoly, Rational, RationalFormula, VAR_NAMES};

fn write_coefficient(out: &mut String, c: &Rational) {
    if c.is_integer() {
        let _ = write!(out, "{}", c.numer());
    } else {
        let _ = write!(out, "{}/{}", c.numer(), c.denom());
    }
}

pub fn render_canonical(f: &RationalFormula) -> String {
    let mut out = String::new();
    let num = f.numerator();
    if num.is_zero() {
        out.push('0');
    }
    for (i, (m, c)) in num.terms().enumerate() {
        let magnitude = c.abs();
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        write_coefficient(&mut out, &magnitude);
        for (name, &e) in VAR_NAMES.iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => {
                    let _ = write!(out, "*{name}");
                }
                _ => {
                    let _ = write!(out, "*{name}^{e}");
                }
            }
        }
    }
    let k = f.denominator_power();
    if k > 0 {
        let total = if f.vars() == 3 { "A+B+C" } else { "A+B" };
        let _ = write!(out, "/({total})^{k}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.eat(byte) {
            Ok(())
        } else {
            self.error(format!("expected '{}'", byte as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as an integer"))
    }

    fn small_integer(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let n = self.integer()?;
        u32::try_from(n).or_else(|_| {
            self.pos = start;
            self.error("exponent too large")
        })
    }

    fn variable(&mut self) -> Option<usize> {
        let c = self.peek()?;
        let idx = VAR_NAMES.iter().position(|&v| v as u8 == c)?;
        self.pos += 1;
        Some(idx)
    }

    fn factor(&mut self, exps: &mut [u16; 3]) -> Result<(), ParseError> {
        let Some(v) = self.variable() else {
            return self.error("expected A, B or C");
        };
        if v >= self.vars {
            self.pos -= 1;
            return self.error(format!(
                "variable {} outside {} variables",
                VAR_NAMES[v], self.vars
            ));
        }
        let e = if self.eat(b'^') {
            self.small_integer()?
        } else {
            1
        };
        let total = u32::from(exps[v]) + e;
        exps[v] = u16::try_from(total).or_else(|_| self.error("exponent too large"))?;
        Ok(())
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let negative = self.eat(b'-');
        let mut exps = [0u16; 3];
        let mut coeff = Rational::one();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                // "p/q" is a fraction; "/(" starts the denominator.
                let save = self.pos;
                let d = if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let d = self.integer()?;
                    if d.is_zero() {
                        return self.error("zero denominator in coefficient");
                    }
                    d
                } else {
                    self.pos = save;
                    BigInt::one()
                };
                coeff = Rational::new(n, d);
            }
            Some(_) => self.factor(&mut exps)?,
            None => return self.error("expected a term"),
        }
        while self.eat(b'*') {
            self.factor(&mut exps)?;
        }
        if negative {
            coeff = -coeff;
        }
        Ok((Monomial::new(&exps), coeff))
    }

    fn denominator(&mut self) -> Result<u32, ParseError> {
        self.expect(b'(')?;
        for v in 0..self.vars {
            if v > 0 {
                self.expect(b'+')?;
            }
            if self.variable() != Some(v) {
                return self.error(format!("expected {} in the total capital", VAR_NAMES[v]));
            }
        }
        self.expect(b')')?;
        if self.eat(b'^') {
            self.small_integer()
        } else {
            Ok(1)
        }
    }

    fn formula(&mut self) -> Result<RationalFormula, ParseError> {
        let mut terms = vec![self.term()?];
        let mut power = 0;
        loop {
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let (m, c) = self.term()?;
                    terms.push((m, -c));
                }
                Some(b'/') => {
                    self.pos += 1;
                    power = self.denominator()?;
                    if self.peek().is_some() {
                        return self.error("unexpected input after the denominator");
                    }
                    break;
                }
                Some(_) => return self.error("expected '+', '-' or '/'"),
            }
        }
        Ok(RationalFormula::new(
            MultiPoly::from_terms(self.vars, terms),
            power,
        ))
    }
}

/// Parses a formula in `vars` variables. Non-canonical input (repeated
/// monomials, any term order, cancellable denominators) is accepted and
/// canonicalized.
pub fn parse_formula(text: &str, vars: usize) -> Result<RationalFormula, ParseError> {
    if vars != 2 && vars != 3 {
        return Err(ParseError {
            position: 0,
            message: format!("unsupported variable count {vars}"),
        });
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    p.formula()
}

/// Like [`parse_formula`], taking three variables when `C` appears and two
/// otherwise.
pub fn parse_canonical(text: &str) -> Result<RationalFormula, ParseError> {
    let vars = if text.contains('C') { 3 } else { 2 };
    parse_formula(text, vars)
}
