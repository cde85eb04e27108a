use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring: the integers, the rationals, or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(RingSpec::PrimeField(p))
        } else {
            Err(Error::InvalidParameters(format!("{p} is not prime")))
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    /// Characteristic of the ring (0 for ℤ and ℚ).
    pub fn characteristic(self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => p,
            _ => 0,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::from_i64(self, 0)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_i64(self, 1)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "ZZ" => Ok(RingSpec::Integers),
            "Q" | "QQ" => Ok(RingSpec::Rationals),
            _ => {
                let digits = s
                    .strip_prefix('F')
                    .or_else(|| s.strip_prefix("GF"))
                    .ok_or_else(|| Error::InvalidParameters(format!("unknown ring `{s}`")))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::InvalidParameters(format!("unknown ring `{s}`")))?;
                RingSpec::prime_field(p)
            }
        }
    }
}

impl Serialize for RingSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar, tagged with its ring.
///
/// Values are kept canonical: rationals reduced with positive denominator,
/// residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn from_i64(ring: RingSpec, v: i64) -> Self {
        match ring {
            RingSpec::Integers => Scalar::Int(BigInt::from(v)),
            RingSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            RingSpec::PrimeField(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(ring: RingSpec, v: &BigInt) -> Self {
        match ring {
            RingSpec::Integers => Scalar::Int(v.clone()),
            RingSpec::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            RingSpec::PrimeField(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod {
                    value: r.to_u64().expect("residue fits"),
                    p,
                }
            }
        }
    }

    pub fn ring(&self) -> RingSpec {
        match self {
            Scalar::Int(_) => RingSpec::Integers,
            Scalar::Rat(_) => RingSpec::Rationals,
            Scalar::Mod { p, .. } => RingSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_one(),
            Scalar::Rat(v) => v.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Int(v) => v.abs().is_one(),
            _ => !self.is_zero(),
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + b) % p,
                p: *p,
            },
            _ => panic!("ring mismatch: {} vs {}", self.ring(), o.ring()),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: (p - value) % p,
                p: *p,
            },
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("ring mismatch: {} vs {}", self.ring(), o.ring()),
        }
    }

    pub fn mul_i64(&self, k: i64) -> Scalar {
        self.mul(&Scalar::from_i64(self.ring(), k))
    }

    /// Multiplicative inverse, if it exists in the ring.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Int(a) => a.abs().is_one().then(|| self.clone()),
            Scalar::Rat(a) => Some(Scalar::Rat(a.recip())),
            Scalar::Mod { value, p } => {
                let inv = BigInt::from(*value).modpow(&BigInt::from(p - 2), &BigInt::from(*p));
                Some(Scalar::Mod {
                    value: inv.to_u64().unwrap(),
                    p: *p,
                })
            }
        }
    }

    /// Euclidean size used for pivoting: |a| over ℤ, 0/1 over a field.
    pub(crate) fn euclid_size(&self) -> BigInt {
        match self {
            Scalar::Int(a) => a.abs(),
            _ if self.is_zero() => BigInt::zero(),
            _ => BigInt::one(),
        }
    }

    /// Quotient `q` with `self - q*d` of smaller Euclidean size (exact over fields).
    pub(crate) fn euclid_quotient(&self, d: &Scalar) -> Scalar {
        match (self, d) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a.div_floor(b)),
            _ => self.mul(&d.inverse().expect("nonzero field divisor")),
        }
    }

    /// Does `d` divide `self` in the ring?
    pub(crate) fn divisible_by(&self, d: &Scalar) -> bool {
        match (self, d) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                if b.is_zero() {
                    a.is_zero()
                } else {
                    (a % b).is_zero()
                }
            }
            _ => !d.is_zero() || self.is_zero(),
        }
    }

    /// Integer value when the scalar is (the image of) an integer.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(a) => Some(a.clone()),
            Scalar::Rat(a) => a.is_integer().then(|| a.to_integer()),
            Scalar::Mod { value, .. } => Some(BigInt::from(*value)),
        }
    }

    /// Reduce an integer coefficient modulo `order`; other rings are unchanged.
    pub fn reduce_mod(&self, order: u64) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(a.mod_floor(&BigInt::from(order))),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(a) => write!(f, "{a}"),
            Scalar::Rat(a) => write!(f, "{a}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rings() {
        assert_eq!("Z".parse::<RingSpec>().unwrap(), RingSpec::Integers);
        assert_eq!("F3".parse::<RingSpec>().unwrap(), RingSpec::PrimeField(3));
        assert!("F4".parse::<RingSpec>().is_err());
        assert!("R".parse::<RingSpec>().is_err());
    }

    #[test]
    fn residues_are_canonical() {
        let a = Scalar::from_i64(RingSpec::PrimeField(5), -7);
        assert_eq!(a, Scalar::Mod { value: 3, p: 5 });
        assert_eq!(a.inverse().unwrap().mul(&a), RingSpec::PrimeField(5).one());
    }

    #[test]
    fn rationals_reduce() {
        let q = RingSpec::Rationals;
        let half = Scalar::from_i64(q, 1).mul(&Scalar::from_i64(q, 2).inverse().unwrap());
        let sum = half.add(&half);
        assert!(sum.is_one());
    }

    #[test]
    fn integers_only_invert_units() {
        assert!(Scalar::from_i64(RingSpec::Integers, 2).inverse().is_none());
        assert!(Scalar::from_i64(RingSpec::Integers, -1).inverse().is_some());
    }
}
