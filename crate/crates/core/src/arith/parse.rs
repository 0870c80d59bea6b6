//! Text input for rational functions and truncated series.
//!
//! Grammar, over a single variable name:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/')? power)*
//! power  := atom ('^' ['+'|'-'] integer)?
//! atom   := integer | var | '(' expr ')' | '-' atom
//! ```
//!
//! Juxtaposition multiplies, so `2t` reads as `2*t`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Polynomial, Rational, RationalFunction, TruncatedLaurentSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str, var: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let var_chars: Vec<char> = var.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' | '·' | '×' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(text.parse().unwrap()));
            }
            _ if chars[i..].starts_with(&var_chars) => {
                let end = i + var_chars.len();
                if chars.get(end).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
                    return Err(Error::Parse(format!("unknown identifier at {:?}", &s[..])));
                }
                out.push(Tok::Var);
                i = end;
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?} (variable is {var})"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    acc = acc.div(&d).map_err(|_| Error::Parse("division by zero".into()))?;
                }
                Some(Tok::Num(_)) | Some(Tok::Var) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let e = match self.next() {
            Some(Tok::Num(n)) => i32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?,
            other => return Err(Error::Parse(format!("expected integer exponent, found {other:?}"))),
        };
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|_| Error::Parse("negative power of zero".into()))
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(RationalFunction::constant(Rational::from_integer(n))),
            Some(Tok::Var) => Ok(RationalFunction::t()),
            Some(Tok::Minus) => Ok(-self.atom()?),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    other => Err(Error::Parse(format!("expected ')', found {other:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a rational function in the variable `var`.
pub fn parse_rational_function(s: &str, var: &str) -> Result<RationalFunction> {
    let toks = lex(s, var)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(r)
}

/// Parses a Laurent polynomial such as `"z^-1 + 1/2 - 3*z^2"`, returned as
/// `(numerator, shift)` meaning `numerator · var^shift`.
fn laurent_polynomial(s: &str, var: &str) -> Result<(Polynomial, i64)> {
    let r = parse_rational_function(s, var)?;
    let den = r.denominator();
    let k = den.degree().unwrap();
    if *den != Polynomial::monomial(Rational::one(), k) {
        return Err(Error::Parse(format!("{s:?} is not a Laurent polynomial in {var}")));
    }
    Ok((r.numerator().clone(), -(k as i64)))
}

/// Parses the text form of a series, `"1 + z^2/2 + O(z^8)"`. The
/// variable is read from the `O(…)` term.
pub fn parse_series(s: &str) -> Result<TruncatedLaurentSeries> {
    let s = s.trim();
    let bad = || Error::Parse(format!("series {s:?} must end with an O(var^n) term"));
    let at = s.rfind("O(").ok_or_else(bad)?;
    let inner = s[at + 2..].strip_suffix(')').ok_or_else(bad)?.trim();
    let (var, prec) = match inner.split_once('^') {
        Some((v, e)) => (v.trim(), e.trim().parse::<i64>().map_err(|_| bad())?),
        None => (inner, 1),
    };
    if var.is_empty() || !var.chars().all(|c| c.is_alphabetic()) {
        return Err(bad());
    }
    let body = s[..at].trim_end();
    let body = match body.strip_suffix('+') {
        Some(b) => b.trim_end(),
        None if body.is_empty() => body,
        None => return Err(bad()),
    };
    if body.is_empty() {
        return Ok(TruncatedLaurentSeries::zero(var, prec));
    }
    let (num, shift) = laurent_polynomial(body, var)?;
    let terms = num
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as i64 + shift, c.clone()));
    let terms: Vec<_> = terms.collect();
    if let Some((k, _)) = terms.iter().find(|(k, _)| *k >= prec) {
        return Err(Error::Parse(format!("term of degree {k} at or beyond precision {prec}")));
    }
    Ok(TruncatedLaurentSeries::new(var, prec, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(n), Polynomial::from_ints(d)).unwrap()
    }

    #[test]
    fn parses_rational_functions() {
        assert_eq!(parse_rational_function("(t^2+1)/(t-3)", "t").unwrap(), rf(&[1, 0, 1], &[-3, 1]));
        assert_eq!(parse_rational_function("1/t", "t").unwrap(), rf(&[1], &[0, 1]));
        assert_eq!(parse_rational_function("t^-2", "t").unwrap(), rf(&[1], &[0, 0, 1]));
        assert_eq!(parse_rational_function("-t + 2t^2", "t").unwrap(), rf(&[0, -1, 2], &[1]));
        assert_eq!(parse_rational_function("1/2 * t", "t").unwrap(), rf(&[0, 1], &[2]));
        assert_eq!(parse_rational_function("-(t-1)^2", "t").unwrap(), rf(&[-1, 2, -1], &[1]));
        assert_eq!(parse_rational_function("3/(2*z)", "z").unwrap(), rf(&[3], &[0, 2]));
    }

    #[test]
    fn rejects_malformed_input() {
        for s in ["", "t +", "(t", "x", "t^t", "1/0", "tt", "0^-1"] {
            assert!(parse_rational_function(s, "t").is_err(), "{s}");
        }
    }

    #[test]
    fn series_text_round_trip() {
        let s = parse_series("1 + z^2/2 + O(z^8)").unwrap();
        assert_eq!(s.precision(), 8);
        assert_eq!(s.coeff(2), Some(rat(1, 2)));
        assert_eq!(s.to_string(), "1 + z^2/2 + O(z^8)");
        let t = parse_series("-2*z^-1 + 3 - 3*z^4/8 + O(z^5)").unwrap();
        assert_eq!(t.coeff(-1), Some(int(-2)));
        assert_eq!(parse_series(&t.to_string()).unwrap(), t);
        assert_eq!(parse_series("O(w^3)").unwrap(), TruncatedLaurentSeries::zero("w", 3));
        assert!(parse_series("1 + z^9 + O(z^8)").is_err());
        assert!(parse_series("1 + z").is_err());
    }
}
