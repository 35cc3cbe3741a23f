use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field descriptor: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// An exact element of a [`Field`].
///
/// Rationals are kept in lowest terms with a positive denominator (this is
/// what `BigRational` normalizes to); residues live in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    P(u64),
}

impl Field {
    /// Builds a prime-field descriptor, rejecting non-primes.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidField(format!("{p} exceeds the supported modulus")));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `Q`, `Zp:7`, `Zp7` or a bare prime.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix("Zp:")
            .or_else(|| t.strip_prefix("Zp"))
            .or_else(|| t.strip_prefix("zp:"))
            .unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("cannot parse field '{s}'")))?;
        Field::prime(p)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(_) => Scalar::P(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::P(v.rem_euclid(p as i64) as u64),
        }
    }

    /// Maps a rational into the field; fails if the denominator vanishes mod p.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match *self {
            Field::Rational => Ok(Scalar::Q(r.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| {
                    let m = ((x % &pb) + &pb) % &pb;
                    m.to_u64().expect("residue fits in u64")
                };
                let num = reduce(r.numer());
                let den = reduce(r.denom());
                if den == 0 {
                    return Err(Error::InvalidField(format!(
                        "denominator of {r} vanishes mod {p}"
                    )));
                }
                Ok(Scalar::P(mul_mod(num, inv_mod(den, p), p)))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, self) {
            (Scalar::Q(x), Scalar::Q(y), _) => Scalar::Q(x + y),
            (Scalar::P(x), Scalar::P(y), Field::Prime(p)) => Scalar::P((x + y) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (a, self) {
            (Scalar::Q(x), _) => Scalar::Q(-x),
            (Scalar::P(x), Field::Prime(p)) => Scalar::P((p - x) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, self) {
            (Scalar::Q(x), Scalar::Q(y), _) => Scalar::Q(x * y),
            (Scalar::P(x), Scalar::P(y), Field::Prime(p)) => Scalar::P(mul_mod(*x, *y, *p)),
            _ => panic!("scalar/field mismatch"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match (a, self) {
            (Scalar::Q(x), _) => Some(Scalar::Q(x.recip())),
            (Scalar::P(x), Field::Prime(p)) => Some(Scalar::P(inv_mod(*x, *p))),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (a, self) {
            (Scalar::Q(_), Field::Rational) => true,
            (Scalar::P(x), Field::Prime(p)) => x < p,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Zp:{p}"),
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(x) => x.is_zero(),
            Scalar::P(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(x) => x.is_one(),
            Scalar::P(x) => *x == 1,
        }
    }

    /// Integer value when the scalar is a small integer (residues are
    /// reported as their symmetric representative).
    pub fn to_i64(&self, field: &Field) -> Option<i64> {
        match (self, field) {
            (Scalar::Q(x), _) if x.is_integer() => x.numer().to_i64(),
            (Scalar::Q(_), _) => None,
            (Scalar::P(x), Field::Prime(p)) => {
                let v = *x as i64;
                let p = *p as i64;
                Some(if v > p / 2 { v - p } else { v })
            }
            (Scalar::P(x), _) => Some(*x as i64),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(x) => x.is_negative(),
            Scalar::P(_) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(x) => write!(f, "{x}"),
            Scalar::P(x) => write!(f, "{x}"),
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}
