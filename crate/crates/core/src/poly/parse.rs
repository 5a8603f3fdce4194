//! Plain-text polynomial format: `3*x0^2*y5 - 1/2*x1 + 7`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, PolyError, VarSet};

pub fn parse(vars: &Arc<VarSet>, text: &str) -> Result<MultiPoly, PolyError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, vars };
    let out = p.poly()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a Arc<VarSet>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(self.vars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                _ if first => 1,
                _ => return Err(self.err("expected `+` or `-`")),
            };
            first = false;
            let (m, c) = self.term()?;
            out.add_term(m, if sign < 0 { -c } else { c });
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Vec<u16>, BigRational), PolyError> {
        let mut m = vec![0u16; self.vars.len()];
        let mut c = BigRational::one();
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let n = self.integer()?;
                    let mut q = BigRational::from_integer(n);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.skip_ws();
                        let d = self.integer()?;
                        if d.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        q /= BigRational::from_integer(d);
                    }
                    c *= q;
                }
                Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                    let start = self.pos;
                    while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                    let i = self.vars.index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                    let mut e: u16 = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let n = self.integer()?;
                        e = u16::try_from(n).map_err(|_| self.err("exponent out of range"))?;
                    }
                    m[i] += e;
                }
                _ => return Err(self.err("expected coefficient or variable")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((m, c))
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        Ok(t.parse().expect("digits parse"))
    }
}

pub(super) fn format_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let names = p.vars().names();
    let mut out = String::new();
    for (k, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let is_const = m.iter().all(|&e| e == 0);
        if !a.is_one() || is_const {
            factors.push(a.to_string());
        }
        for (i, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[i].clone()),
                _ => factors.push(format!("{}^{}", names[i], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_frac;

    #[test]
    fn round_trip() {
        let v = VarSet::unweighted(&["x0", "x1", "y5"]);
        let p = parse(&v, "3*x0^2*y5 - 1/2*x1 + 7 - y5").unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coeff(&[0, 1, 0]), rat_frac(-1, 2));
        assert_eq!(parse(&v, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn repeated_factors_accumulate() {
        let v = VarSet::unweighted(&["a", "b"]);
        assert_eq!(parse(&v, "2*a*a*3").unwrap(), parse(&v, "6*a^2").unwrap());
    }

    #[test]
    fn errors_carry_context() {
        let v = VarSet::unweighted(&["a"]);
        assert_eq!(parse(&v, "a + z").unwrap_err(), PolyError::UnknownVariable("z".into()));
        assert!(matches!(parse(&v, "a +"), Err(PolyError::Parse { .. })));
        assert!(matches!(parse(&v, "1/0*a"), Err(PolyError::Parse { .. })));
        assert!(matches!(parse(&v, ""), Err(PolyError::Parse { .. })));
    }
}
