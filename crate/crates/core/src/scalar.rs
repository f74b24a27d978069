//! Exact rational scalars.
//!
//! All endpoints and coefficients are arbitrary-precision rationals in lowest
//! terms with a positive denominator. Nothing in this crate rounds a scalar
//! except [`ln_abs`], which exists for log-domain bookkeeping only.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

/// `num / den` as an exact scalar. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or an integer string, with an optional leading sign.
pub fn parse(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    BigRational::from_str(t).map_err(|_| bad())
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Natural log of `|x|` to double precision, for arbitrarily large or small
/// magnitudes. Returns `-inf` for zero.
pub fn ln_abs(x: &Scalar) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value fits f64");
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn pow(x: &Scalar, e: usize) -> Scalar {
    use num_traits::Pow;
    // powers of coprime integers stay coprime
    Scalar::new_raw(Pow::pow(x.numer(), e), Pow::pow(x.denom(), e))
}

pub fn floor_int(x: &Scalar) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_int(x: &Scalar) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

pub fn min(a: &Scalar, b: &Scalar) -> Scalar {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max(a: &Scalar, b: &Scalar) -> Scalar {
    if a >= b { a.clone() } else { b.clone() }
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

/// Total bit length of numerator and denominator.
pub fn bit_size(x: &Scalar) -> u64 {
    x.numer().bits() + x.denom().bits()
}

pub mod serde_str {
    //! Serializes a [`Scalar`](super::Scalar) as its `"p/q"` string.
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &super::Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<super::Scalar, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}
