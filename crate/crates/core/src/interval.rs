use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A closed interval `[lo, hi]` with `lo <= hi`. Points are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Scalar,
    hi: Scalar,
}

impl Interval {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvertedInterval {
                lo: scalar::format(&lo),
                hi: scalar::format(&hi),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: Scalar) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    /// `[-r, r]` for `r >= 0`.
    pub fn symmetric(r: &Scalar) -> Self {
        let r = r.abs();
        Self { lo: -r.clone(), hi: r }
    }

    pub fn unit() -> Self {
        Self {
            lo: Scalar::zero(),
            hi: scalar::int(1),
        }
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn diam(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn shift(&self, t: &Scalar) -> Interval {
        Interval {
            lo: &self.lo + t,
            hi: &self.hi + t,
        }
    }

    pub fn scale(&self, t: &Scalar) -> Interval {
        let a = &self.lo * t;
        let b = &self.hi * t;
        if t.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    /// Exact product set: the hull of the four corner products.
    pub fn mul(&self, other: &Interval) -> Interval {
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return Interval {
                lo: &self.lo * &other.lo,
                hi: &self.hi * &other.hi,
            };
        }
        let corners = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = corners.iter().min().unwrap().clone();
        let hi = corners.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", scalar::format(&self.lo), scalar::format(&self.hi))
    }
}
