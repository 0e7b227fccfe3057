//! Exact rational arithmetic for the probability kernel.
//!
//! Every probability that flows through the library is a [`Scalar`]: a
//! reduced fraction of arbitrary-precision integers. Floating point only
//! appears at the reporting boundary ([`Scalar::to_f64`]) and inside the
//! Monte Carlo oracle, never in the kernel itself.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number. Always stored in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn integer(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den` as an exact fraction. Fails on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        Self::big_ratio(BigInt::from(num), BigInt::from(den))
    }

    pub fn big_ratio(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidScalar("denominator is zero".into()));
        }
        Ok(Scalar(BigRational::new(num, den)))
    }

    /// The exact rational value of a finite float (every finite IEEE double
    /// is a dyadic rational). Decimal strings like `"0.1"` should go through
    /// [`FromStr`] instead when the decimal digits are what must be exact.
    pub fn from_f64_exact(value: f64) -> Result<Self> {
        BigRational::from_float(value)
            .map(Scalar)
            .ok_or_else(|| Error::InvalidScalar(format!("non-finite float {value}")))
    }

    /// Nearest floating approximation, for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `p/q (≈0.6667)` rendering for human-readable output.
    pub fn human(&self) -> String {
        format!("{} (≈{:.4})", self, self.to_f64())
    }

    fn parse_decimal(s: &str) -> Result<Self> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some(parts) => parts,
            None => (s, ""),
        };
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(Error::InvalidScalar(format!("cannot parse `{s}` as a rational")));
        }
        let digits = format!("{int_digits}{frac_part}");
        let num = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(&digits)
                .map_err(|_| Error::InvalidScalar(format!("cannot parse `{s}` as a rational")))?
        };
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Self::big_ratio(num * sign, den)
    }
}

/// Accepts `p/q`, plain integers, exact decimals (`0.25`), and the JSON-pair
/// form `[p,q]`.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let mut parts = inner.splitn(2, ',');
            let num = parts.next().unwrap_or("").trim();
            let den = parts
                .next()
                .ok_or_else(|| Error::InvalidScalar(format!("`{s}` is not a [num,den] pair")))?
                .trim();
            let num = BigInt::from_str(num)
                .map_err(|_| Error::InvalidScalar(format!("bad numerator in `{s}`")))?;
            let den = BigInt::from_str(den)
                .map_err(|_| Error::InvalidScalar(format!("bad denominator in `{s}`")))?;
            return Self::big_ratio(num, den);
        }
        if let Some((num, den)) = s.split_once('/') {
            let num = BigInt::from_str(num.trim())
                .map_err(|_| Error::InvalidScalar(format!("bad numerator in `{s}`")))?;
            let den = BigInt::from_str(den.trim())
                .map_err(|_| Error::InvalidScalar(format!("bad denominator in `{s}`")))?;
            return Self::big_ratio(num, den);
        }
        Self::parse_decimal(s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

// Wire form: a `[numerator, denominator]` pair. Components are JSON integers
// when they fit in i64 and decimal strings otherwise, so arbitrary precision
// survives the round trip.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Int<'a>(&'a BigInt);
        impl Serialize for Int<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                match self.0.to_i64() {
                    Some(v) => serializer.serialize_i64(v),
                    None => serializer.collect_str(self.0),
                }
            }
        }
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&Int(self.numer()))?;
        tup.serialize_element(&Int(self.denom()))?;
        tup.end()
    }
}

struct BigIntDe(BigInt);

impl<'de> Deserialize<'de> for BigIntDe {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = BigIntDe;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal digit string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigIntDe, E> {
                Ok(BigIntDe(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigIntDe, E> {
                Ok(BigIntDe(BigInt::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigIntDe, E> {
                BigInt::from_str(v.trim())
                    .map(BigIntDe)
                    .map_err(|_| E::custom(format!("`{v}` is not an integer")))
            }
        }
        deserializer.deserialize_any(V)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Scalar;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a [numerator, denominator] pair, an integer, or a rational string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::integer(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
                Ok(Scalar(BigRational::from_integer(BigInt::from(v))))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
                Scalar::from_f64_exact(v).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
                Scalar::from_str(v).map_err(E::custom)
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Scalar, A::Error> {
                let num: BigIntDe = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &"a [num,den] pair"))?;
                let den: BigIntDe = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &"a [num,den] pair"))?;
                if seq.next_element::<BigIntDe>()?.is_some() {
                    return Err(de::Error::custom("rational pair has more than two entries"));
                }
                Scalar::big_ratio(num.0, den.0).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_any(V)
    }
}
