//! Text grammar for Laurent polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := integer | var ['^' ['-'] integer]
//! var    := 't' | 't' digits
//! ```
//!
//! `t` is shorthand for `t1`. When no rank is supplied it is inferred as the
//! largest variable index used (at least 1).

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{LaurentPoly, Monomial};
use crate::error::{Error, Result};

pub fn parse_poly(src: &str, rank: Option<usize>) -> Result<LaurentPoly> {
    let mut parser = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let raw = parser.poly()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    let used = raw
        .iter()
        .flat_map(|(vars, _)| vars.iter().map(|(i, _)| i + 1))
        .max()
        .unwrap_or(1);
    let rank = match rank {
        Some(r) if r < used => {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("variable t{used} exceeds rank {r}"),
            })
        }
        Some(r) => r,
        None => used,
    };
    let mut out = LaurentPoly::zero(rank);
    for (vars, c) in raw {
        let mut e = vec![0i64; rank];
        for (i, a) in vars {
            e[i] += a;
        }
        out.add_term(Monomial(e), c);
    }
    Ok(out)
}

type RawTerm = (Vec<(usize, i64)>, BigInt);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut sign = BigInt::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(self.err("empty polynomial")),
            _ => {}
        }
        loop {
            let (vars, c) = self.term()?;
            terms.push((vars, c * &sign));
            match self.peek() {
                Some(b'+') => {
                    sign = BigInt::one();
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -BigInt::one();
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut vars = Vec::new();
        let mut coeff = BigInt::one();
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.integer()?;
                }
                Some(b't') => {
                    self.pos += 1;
                    let idx = match self.src.get(self.pos) {
                        Some(c) if c.is_ascii_digit() => {
                            let i = self.integer()?;
                            let i: usize = i
                                .try_into()
                                .map_err(|_| self.err("variable index too large"))?;
                            if i == 0 {
                                return Err(self.err("variables are numbered from t1"));
                            }
                            i - 1
                        }
                        _ => 0,
                    };
                    let mut exp = 1i64;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        exp = self.exponent()?;
                    }
                    vars.push((idx, exp));
                }
                _ if factors == 0 => return Err(self.err("expected integer or variable")),
                _ => break,
            }
            factors += 1;
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if !matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b't') {
                    return Err(self.err("expected factor after '*'"));
                }
            }
        }
        Ok((vars, coeff))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let v: i64 = self
            .integer()?
            .try_into()
            .map_err(|_| self.err("exponent out of range"))?;
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(if neg { -v } else { v })
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse().map_err(|_| self.err("bad integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_examples() {
        let f = parse_poly("4 - 3*t", None).unwrap();
        assert_eq!(f.rank(), 1);
        assert_eq!(f.trace_coefficient(), BigInt::from(4));
        let g = parse_poly("3 + t1 + t2^-1", None).unwrap();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.len(), 3);
        assert_eq!(g.augment(), BigInt::from(5));
    }

    #[test]
    fn implicit_multiplication_and_parenthesized_exponents() {
        let a = parse_poly("2t1t2^(-1) - 3", None).unwrap();
        let b = parse_poly("2*t1*t2^-1 - 3", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn like_terms_cancel() {
        let f = parse_poly("t - t + 2 - 2", None).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn explicit_rank_pads_and_validates() {
        let f = parse_poly("t - 2", Some(3)).unwrap();
        assert_eq!(f.rank(), 3);
        assert!(parse_poly("t4", Some(2)).is_err());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "+", "3 +", "x", "t^", "3 * + t", "t0", "(t)"] {
            assert!(parse_poly(bad, None).is_err(), "{bad:?} should fail");
        }
    }
}
