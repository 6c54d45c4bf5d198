use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime characteristic accepted (exclusive).
pub const MAX_CHAR: u32 = 1 << 31;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(max: u64) -> Vec<u64> {
    (2..=max).filter(|&p| is_prime(p)).collect()
}

/// An exact coefficient: a canonical residue in `[0, p)` or an integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u32),
    Int(BigInt),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(v) => *v == 0,
            Scalar::Int(v) => v.is_zero(),
        }
    }

    /// The value as a signed integer (residues are their canonical lift).
    pub fn to_bigint(&self) -> BigInt {
        match self {
            Scalar::Mod(v) => BigInt::from(*v),
            Scalar::Int(v) => v.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Int(v) => write!(f, "{v}"),
        }
    }
}

/// The ring `K[X, Y]` for `n×n` generic matrices. Characteristic 0 means
/// integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub n: u8,
    #[serde(rename = "char")]
    pub characteristic: u32,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, char={})", self.n, self.characteristic)
    }
}

impl Ring {
    pub fn new(n: u8, characteristic: u32) -> Result<Ring> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidRing(format!("matrix size {n} out of range 1..=64")));
        }
        if characteristic != 0 && (characteristic >= MAX_CHAR || !is_prime(characteristic as u64)) {
            return Err(Error::InvalidRing(format!(
                "characteristic {characteristic} must be 0 or a prime below 2^31"
            )));
        }
        Ok(Ring { n, characteristic })
    }

    pub fn is_prime_field(&self) -> bool {
        self.characteristic != 0
    }

    pub fn prime(&self) -> Result<u32> {
        if self.is_prime_field() {
            Ok(self.characteristic)
        } else {
            Err(Error::NotPrimeField(0))
        }
    }

    pub fn with_char(&self, characteristic: u32) -> Result<Ring> {
        Ring::new(self.n, characteristic)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Int(BigInt::from(v)),
            p => Scalar::Mod(v.rem_euclid(p as i64) as u32),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self.characteristic {
            0 => Scalar::Int(v.clone()),
            p => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod(r.to_u32().expect("residue below p"))
            }
        }
    }

    /// Re-expresses a scalar of this ring (or of characteristic 0) here.
    pub fn coerce(&self, s: &Scalar) -> Scalar {
        match (self.characteristic, s) {
            (0, Scalar::Int(_)) => s.clone(),
            (p, Scalar::Mod(v)) if p != 0 => Scalar::Mod(*v % p),
            _ => self.from_bigint(&s.to_bigint()),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                let p = self.characteristic as u64;
                Scalar::Mod(((*x as u64 + *y as u64) % p) as u32)
            }
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            _ => unreachable!("mixed scalar kinds"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Mod(0) => Scalar::Mod(0),
            Scalar::Mod(x) => Scalar::Mod(self.characteristic - *x),
            Scalar::Int(x) => Scalar::Int(-x),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                let p = self.characteristic as u64;
                Scalar::Mod(((*x as u64 * *y as u64) % p) as u32)
            }
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            _ => unreachable!("mixed scalar kinds"),
        }
    }

    /// Multiplicative inverse in `F_p`.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match a {
            Scalar::Mod(0) => Err(Error::Inconsistent("inverse of zero".into())),
            Scalar::Mod(x) => Ok(Scalar::Mod(mod_pow(*x as u64, self.characteristic as u64 - 2, self.characteristic as u64) as u32)),
            Scalar::Int(x) if x.abs().is_one() => Ok(a.clone()),
            Scalar::Int(_) => Err(Error::NotPrimeField(0)),
        }
    }

    /// Parses a decimal coefficient string into this ring.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let v: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?;
        if self.characteristic != 0 && (v.is_negative() || v >= BigInt::from(self.characteristic)) {
            return Err(Error::Parse(format!(
                "coefficient {s} is not a canonical residue mod {}",
                self.characteristic
            )));
        }
        Ok(self.from_bigint(&v))
    }
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_residues() {
        let r = Ring::new(3, 5).unwrap();
        assert_eq!(r.from_i64(-1), Scalar::Mod(4));
        assert_eq!(r.from_i64(12), Scalar::Mod(2));
        assert_eq!(r.from_bigint(&BigInt::from(-12)), Scalar::Mod(3));
        assert_eq!(r.neg(&Scalar::Mod(0)), Scalar::Mod(0));
        assert_eq!(r.inv(&Scalar::Mod(2)).unwrap(), Scalar::Mod(3));
        assert!(r.parse_scalar("5").is_err());
        assert_eq!(r.parse_scalar("4").unwrap(), Scalar::Mod(4));
    }

    #[test]
    fn ring_validation() {
        assert!(Ring::new(0, 2).is_err());
        assert!(Ring::new(3, 4).is_err());
        assert!(Ring::new(3, 1).is_err());
        assert!(Ring::new(3, 2147483647).is_ok());
        assert!(Ring::new(3, 0).is_ok());
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(32003));
        assert_eq!(mod_pow(3, 4, 5), 1);
    }
}
