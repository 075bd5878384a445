//! Canonical text form of polynomials.
//!
//! Terms are written `coeff*g1^e1*g2^e2*...` (the `^1` is omitted, the
//! coefficient never is) and joined by ` + `, sorted by descending
//! graded-lexicographic order. The zero polynomial is `0`. `parse` inverts
//! `serialize` bit-exactly for all three coefficient rings.

use super::{GeneratorTable, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::{CoeffRing, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::sync::Arc;

pub fn serialize(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let table = p.table();
    let mut parts = Vec::with_capacity(p.num_terms());
    for (m, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        let mut s = c.to_string();
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            s.push('*');
            s.push_str(&table.gen(i).name);
            if e > 1 {
                s.push('^');
                s.push_str(&e.to_string());
            }
        }
        parts.push(s);
    }
    parts.join(" + ")
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            Err(self.err("expected digits"))
        } else {
            Ok(self.text[start..self.pos].to_string())
        }
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                self.bump();
            }
            _ => return Err(self.err("expected generator name")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        Ok(self.text[start..self.pos].to_string())
    }
}

pub fn parse(table: &Arc<GeneratorTable>, ring: CoeffRing, text: &str) -> Result<Polynomial> {
    let mut cur = Cursor { text, pos: 0 };
    if text == "0" {
        return Ok(Polynomial::zero(table, ring));
    }
    let mut poly = Polynomial::zero(table, ring);
    loop {
        let (m, c) = parse_term(&mut cur, table)?;
        poly.add_term(m, c);
        if cur.rest().is_empty() {
            break;
        }
        if !cur.eat(" + ") {
            return Err(cur.err("expected ` + ` between terms"));
        }
    }
    Ok(poly)
}

fn parse_term(cur: &mut Cursor, table: &GeneratorTable) -> Result<(Monomial, Scalar)> {
    let neg = cur.eat("-");
    let num: BigInt = cur.digits()?.parse().expect("digits form an integer");
    let num = if neg { -num } else { num };
    let coeff = if cur.eat("/") {
        let den_pos = cur.pos;
        let den: BigInt = cur.digits()?.parse().expect("digits form an integer");
        if den == BigInt::from(0) {
            return Err(Error::Parse {
                pos: den_pos,
                msg: "zero denominator".to_string(),
            });
        }
        Scalar::Rat(BigRational::new(num, den))
    } else {
        Scalar::Int(num)
    };
    let mut exps = vec![0u16; table.len()];
    while cur.eat("*") {
        let name_pos = cur.pos;
        let name = cur.ident()?;
        let idx = table.index_of(&name).ok_or(Error::Parse {
            pos: name_pos,
            msg: format!("unknown generator `{name}`"),
        })?;
        let e: u16 = if cur.eat("^") {
            let e_pos = cur.pos;
            cur.digits()?.parse().map_err(|_| Error::Parse {
                pos: e_pos,
                msg: "exponent out of range".to_string(),
            })?
        } else {
            1
        };
        if exps[idx] != 0 {
            return Err(Error::Parse {
                pos: name_pos,
                msg: format!("repeated generator `{name}` in one term"),
            });
        }
        exps[idx] = e;
    }
    Ok((Monomial::new(table, exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Parity::*;

    fn sigma_table() -> Arc<GeneratorTable> {
        GeneratorTable::new(vec![("s1", 2, Even), ("s2", 4, Even)])
    }

    #[test]
    fn zero_serializes_to_0() {
        let t = sigma_table();
        let z = Polynomial::zero(&t, CoeffRing::Z);
        assert_eq!(serialize(&z), "0");
        assert_eq!(parse(&t, CoeffRing::Z, "0").unwrap(), z);
    }

    #[test]
    fn gamma2_rendering() {
        // 3*s2 - s1^2 prints with the lex-greater monomial first
        let t = sigma_table();
        let r = CoeffRing::Z;
        let p = Polynomial::from_terms(
            &t,
            r,
            [
                (Monomial::new(&t, vec![0, 1]), Scalar::from_i64(r, 3)),
                (Monomial::new(&t, vec![2, 0]), Scalar::from_i64(r, -1)),
            ],
        );
        assert_eq!(serialize(&p), "-1*s1^2 + 3*s2");
        assert_eq!(parse(&t, r, "-1*s1^2 + 3*s2").unwrap(), p);
    }

    #[test]
    fn parse_error_positions() {
        let t = sigma_table();
        let err = parse(&t, CoeffRing::Z, "3*s9").unwrap_err();
        match err {
            Error::Parse { pos, .. } => assert_eq!(pos, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse(&t, CoeffRing::Z, "3*s1 - 2*s2").is_err());
    }

    #[test]
    fn rational_roundtrip() {
        let t = sigma_table();
        let r = CoeffRing::Q;
        let p = Polynomial::from_terms(
            &t,
            r,
            [(
                Monomial::new(&t, vec![1, 1]),
                Scalar::Rat(BigRational::new(BigInt::from(-2), BigInt::from(3))),
            )],
        );
        let s = serialize(&p);
        assert_eq!(s, "-2/3*s1*s2");
        assert_eq!(parse(&t, r, &s).unwrap(), p);
    }
}
