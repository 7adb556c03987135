//! Text literals for polynomials and complex rationals.
//!
//! Canonical form: terms ordered by descending total degree, then descending
//! z-power; `c*z^p*zb^q` with unit exponents written bare (`z`, `zb`), unit
//! coefficients dropped, and coefficients with both parts nonzero parenthesised,
//! e.g. `(1/2+3/4i)*z^2*zb-zb+7`. The zero polynomial prints as `0`.
//! The parser accepts a superset: whitespace, `^1`, explicit `1*`, decimals,
//! juxtaposition (`2z`, `3/4 i`) and division by a nonzero constant.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BiPoly, GaussianRational};
use crate::error::{Error, Result};

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| {
            let (pa, qa) = *a.0;
            let (pb, qb) = *b.0;
            (pb + qb, pb).cmp(&(pa + qa, pa))
        });
        for (idx, (&(p, q), c)) in terms.into_iter().enumerate() {
            let mono = monomial_str(p, q);
            let both = !c.re.is_zero() && !c.im.is_zero();
            let negative = !both && (c.re.is_negative() || c.im.is_negative());
            if negative {
                write!(f, "-")?;
            } else if idx > 0 {
                write!(f, "+")?;
            }
            if both {
                write!(f, "({c})")?;
                if !mono.is_empty() {
                    write!(f, "*{mono}")?;
                }
                continue;
            }
            let abs = GaussianRational::new(c.re.abs(), c.im.abs());
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn monomial_str(p: u32, q: u32) -> String {
    let pow = |base: &str, e: u32| match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{e}"),
    };
    let parts: Vec<String> = [pow("z", p), pow("zb", q)].into_iter().filter(|s| !s.is_empty()).collect();
    parts.join("*")
}

impl FromStr for BiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<BiPoly> {
        parse_poly(s)
    }
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<GaussianRational> {
        parse_complex(s)
    }
}

pub fn parse_poly(s: &str) -> Result<BiPoly> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let out = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Complex rational literal such as `-2+3i`, `10i`, `1/2-i`, `0.25`.
pub fn parse_complex(s: &str) -> Result<GaussianRational> {
    let p = parse_poly(s)?;
    if p.terms().any(|(&e, _)| e != (0, 0)) {
        return Err(Error::Parse { pos: 0, msg: format!("expected a constant, got `{s}`") });
    }
    Ok(p.coeff(0, 0))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<BiPoly> {
        let mut acc = BiPoly::zero();
        let mut first = true;
        loop {
            let negate = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                break;
            };
            first = false;
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') | Some(b'-') => continue,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') || matches!(self.peek(), Some(b'z') | Some(b'i') | Some(b'(')) {
                let f = self.factor()?;
                acc = &acc * &f;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.factor()?;
                let inv = if d.terms().any(|(&e, _)| e != (0, 0)) { None } else { d.coeff(0, 0).inv() };
                let Some(inv) = inv else {
                    return Err(Error::Parse { pos: at, msg: "divisor must be a nonzero constant".into() });
                };
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                if self.eat(b'^') {
                    let e = self.uint()?;
                    let degree = inner.degree().saturating_mul(e);
                    if degree > super::MAX_DEGREE {
                        return Err(Error::DegreeCap { degree, cap: super::MAX_DEGREE });
                    }
                    return Ok(inner.pow(e));
                }
                Ok(inner)
            }
            Some(b'z') => {
                self.pos += 1;
                let bar = self.src.get(self.pos) == Some(&b'b');
                if bar {
                    self.pos += 1;
                }
                let e = if self.eat(b'^') { self.uint()? } else { 1 };
                Ok(if bar {
                    BiPoly::monomial(GaussianRational::one(), 0, e)
                } else {
                    BiPoly::monomial(GaussianRational::one(), e, 0)
                })
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(BiPoly::constant(GaussianRational::i()))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let r = self.number()?;
                // a digit run directly followed by `i` is an imaginary literal
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    Ok(BiPoly::constant(GaussianRational::new(BigRational::zero(), r)))
                } else {
                    Ok(BiPoly::constant(GaussianRational::real(r)))
                }
            }
            _ => Err(self.err("expected a coefficient, `z`, `zb`, `i` or `(`")),
        }
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            return Err(self.err("expected an exponent"));
        }
        std::str::from_utf8(d)
            .unwrap()
            .parse()
            .map_err(|_| self.err("exponent out of range"))
    }

    fn number(&mut self) -> Result<BigRational> {
        let int_part = self.digits().to_vec();
        let mut frac_part = Vec::new();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_part = self.digits().to_vec();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(self.err("expected digits"));
        }
        let mut all = int_part;
        all.extend_from_slice(&frac_part);
        let numer = parse_bigint(&all);
        let mut value = BigRational::new(numer, BigInt::from(10u32).pow(frac_part.len() as u32));
        let save = self.pos;
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            self.skip_ws();
            let d = self.digits().to_vec();
            if d.is_empty() {
                return Err(self.err("expected a denominator"));
            }
            let den = parse_bigint(&d);
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            value /= BigRational::from_integer(den);
        } else {
            self.pos = save;
        }
        Ok(value)
    }
}

fn parse_bigint(d: &[u8]) -> BigInt {
    if d.is_empty() {
        return BigInt::zero();
    }
    BigInt::parse_bytes(d, 10).expect("ascii digits")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parses_simple_forms() {
        assert_eq!(p("z"), BiPoly::z());
        assert_eq!(p("zb"), BiPoly::zbar());
        assert_eq!(p("z*zb - 1"), &BiPoly::abs_sqr() - &BiPoly::one());
        assert_eq!(p("0"), BiPoly::zero());
        assert_eq!(p("1*z^1*zb^0"), BiPoly::z());
        assert_eq!(
            p("(1/2+3/4i)*z^2"),
            BiPoly::monomial("1/2+3/4i".parse().unwrap(), 2, 0)
        );
    }

    #[test]
    fn canonical_print() {
        assert_eq!(p("zb + z*zb*2 - 1").to_string(), "2*z*zb+zb-1");
        assert_eq!(p("-z^2*zb + (1-2i)*zb^3 + 3/4i").to_string(), "-z^2*zb+(1-2i)*zb^3+3/4i");
        assert_eq!(p("i*z").to_string(), "i*z");
        assert_eq!(p("-i").to_string(), "-i");
        assert_eq!(BiPoly::zero().to_string(), "0");
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("-2+3i").unwrap(), GaussianRational::from_ints(-2, 3));
        assert_eq!(parse_complex("10i").unwrap(), GaussianRational::from_ints(0, 10));
        assert_eq!(parse_complex("100").unwrap(), GaussianRational::from_ints(100, 0));
        assert_eq!(parse_complex("0.25").unwrap(), GaussianRational::from_ratio(1, 4));
        assert_eq!(parse_complex("1/2 + 3/4 i").unwrap().to_string(), "1/2+3/4i");
        assert!(parse_complex("z").is_err());
        assert!(parse_complex("1/0").is_err());
        assert!(parse_complex("2+").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        for s in ["2*z*zb+zb-1", "-z^2*zb+(1-2i)*zb^3+3/4i", "-5/7*z^4+(2+i)*z*zb^2-i*zb", "0", "z"] {
            let parsed = p(s);
            assert_eq!(parsed.to_string(), s);
            assert_eq!(p(&parsed.to_string()), parsed);
        }
    }
}
