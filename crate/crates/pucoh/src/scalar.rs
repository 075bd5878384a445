//! Exact coefficient arithmetic over Z, Q and F_p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficient ring descriptor. `Fp(p)` records the prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Z,
    Q,
    Fp(u32),
}

impl CoeffRing {
    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffRing::Z)
    }

    pub fn name(&self) -> String {
        match self {
            CoeffRing::Z => "Z".to_string(),
            CoeffRing::Q => "Q".to_string(),
            CoeffRing::Fp(p) => format!("F{p}"),
        }
    }

    pub fn parse_name(s: &str) -> Option<CoeffRing> {
        match s {
            "Z" => Some(CoeffRing::Z),
            "Q" => Some(CoeffRing::Q),
            _ => s
                .strip_prefix('F')
                .and_then(|t| t.parse::<u32>().ok())
                .map(CoeffRing::Fp),
        }
    }
}

/// An exact scalar. Z and F_p values use the `Int` variant (F_p canonical
/// representatives live in `[0, p)`); Q values use `Rat` with reduced
/// fraction and positive denominator, which `BigRational` maintains.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
}

impl Scalar {
    pub fn from_i64(ring: CoeffRing, v: i64) -> Scalar {
        ring.normalize(Scalar::Int(BigInt::from(v)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Scalar::Int(v) => Some(v),
            Scalar::Rat(_) => None,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Int(v) => BigRational::from(v.clone()),
            Scalar::Rat(v) => v.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) => {
                if v.is_integer() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
        }
    }
}

impl CoeffRing {
    pub fn zero(&self) -> Scalar {
        match self {
            CoeffRing::Q => Scalar::Rat(BigRational::zero()),
            _ => Scalar::Int(BigInt::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            CoeffRing::Q => Scalar::Rat(BigRational::one()),
            _ => Scalar::Int(BigInt::one()),
        }
    }

    /// Put a scalar in canonical form for this ring.
    pub fn normalize(&self, s: Scalar) -> Scalar {
        match (self, s) {
            (CoeffRing::Z, s @ Scalar::Int(_)) => s,
            (CoeffRing::Z, Scalar::Rat(v)) => {
                assert!(v.is_integer(), "rational scalar in Z context");
                Scalar::Int(v.to_integer())
            }
            (CoeffRing::Q, Scalar::Int(v)) => Scalar::Rat(BigRational::from(v)),
            (CoeffRing::Q, s @ Scalar::Rat(_)) => s,
            (CoeffRing::Fp(p), Scalar::Int(v)) => {
                let p = BigInt::from(*p);
                let mut r = v % &p;
                if r.is_negative() {
                    r += &p;
                }
                Scalar::Int(r)
            }
            (CoeffRing::Fp(p), Scalar::Rat(v)) => {
                // reduce a fraction mod p; denominator must be a unit
                let num = self.normalize(Scalar::Int(v.numer().clone()));
                let den = self.normalize(Scalar::Int(v.denom().clone()));
                let inv = self
                    .inverse(&den)
                    .unwrap_or_else(|| panic!("denominator divisible by {p}"));
                self.mul(&num, &inv)
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let raw = match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            _ => Scalar::Rat(a.to_rational() + b.to_rational()),
        };
        self.normalize(raw)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let raw = match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            _ => Scalar::Rat(a.to_rational() * b.to_rational()),
        };
        self.normalize(raw)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        let raw = match a {
            Scalar::Int(x) => Scalar::Int(-x),
            Scalar::Rat(x) => Scalar::Rat(-x),
        };
        self.normalize(raw)
    }

    /// Multiplicative inverse; `None` when the element is not a unit.
    pub fn inverse(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            CoeffRing::Z => {
                let v = a.as_int().expect("Z scalar");
                if v.abs().is_one() {
                    Some(Scalar::Int(v.clone()))
                } else {
                    None
                }
            }
            CoeffRing::Q => Some(Scalar::Rat(a.to_rational().recip())),
            CoeffRing::Fp(p) => {
                let v = a.as_int().expect("Fp scalar");
                let inv = mod_inverse(v, &BigInt::from(*p))?;
                Some(self.normalize(Scalar::Int(inv)))
            }
        }
    }

    /// Divide `a` by `b` (b must be a unit).
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let inv = self.inverse(b).expect("division by non-unit");
        self.mul(a, &inv)
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    // extended Euclid
    let (mut r0, mut r1) = (p.clone(), a.mod_floor_custom(p));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_one() {
        Some(t0)
    } else {
        None
    }
}

trait ModFloor {
    fn mod_floor_custom(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_custom(&self, m: &BigInt) -> BigInt {
        let mut r = self % m;
        if r.is_negative() {
            r += m;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_canonical_representatives() {
        let r = CoeffRing::Fp(3);
        assert_eq!(r.normalize(Scalar::from_i64(CoeffRing::Z, -4)), Scalar::from_i64(r, 2));
        assert_eq!(Scalar::from_i64(r, 6), r.zero());
    }

    #[test]
    fn fp_inverse() {
        let r = CoeffRing::Fp(5);
        let two = Scalar::from_i64(r, 2);
        let inv = r.inverse(&two).unwrap();
        assert_eq!(r.mul(&two, &inv), r.one());
    }

    #[test]
    fn rational_display_reduced() {
        let r = CoeffRing::Q;
        let x = r.div(&Scalar::from_i64(r, 4), &Scalar::from_i64(r, -6));
        assert_eq!(x.to_string(), "-2/3");
    }

    #[test]
    fn z_units_only() {
        let r = CoeffRing::Z;
        assert!(r.inverse(&Scalar::from_i64(r, 2)).is_none());
        assert_eq!(r.inverse(&Scalar::from_i64(r, -1)).unwrap(), Scalar::from_i64(r, -1));
    }
}
