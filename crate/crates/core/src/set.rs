//! Normalized compact subsets of the line.
//!
//! A [`CompactSet`] is a nonempty finite union of closed rational intervals,
//! stored sorted, pairwise disjoint and non-touching. Every operation returns
//! a normalized set, so structural equality is set equality.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompactSet {
    parts: Vec<Interval>,
}

impl CompactSet {
    /// Sorts and merges overlapping or touching intervals.
    pub fn normalize(raw: Vec<Interval>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self::normalize_nonempty(raw))
    }

    fn normalize_nonempty(mut raw: Vec<Interval>) -> Self {
        debug_assert!(!raw.is_empty());
        raw.sort_unstable_by(|a, b| a.lo().cmp(b.lo()).then_with(|| b.hi().cmp(a.hi())));
        let mut parts: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match parts.last_mut() {
                Some(last) if iv.lo() <= last.hi() => {
                    if iv.hi() > last.hi() {
                        *last = Interval::new(last.lo().clone(), iv.hi().clone())
                            .expect("merge keeps lo <= hi");
                    }
                }
                _ => parts.push(iv),
            }
        }
        Self { parts }
    }

    pub fn point(x: Scalar) -> Self {
        Self {
            parts: vec![Interval::point(x)],
        }
    }

    pub fn from_interval(iv: Interval) -> Self {
        Self { parts: vec![iv] }
    }

    pub fn from_points<I: IntoIterator<Item = Scalar>>(points: I) -> Result<Self> {
        Self::normalize(points.into_iter().map(Interval::point).collect())
    }

    pub fn unit_interval() -> Self {
        Self::from_interval(Interval::unit())
    }

    pub fn zero() -> Self {
        Self::point(Scalar::zero())
    }

    pub fn one() -> Self {
        Self::point(Scalar::one())
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    /// Number of parts; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn min(&self) -> &Scalar {
        self.parts[0].lo()
    }

    pub fn max(&self) -> &Scalar {
        self.parts[self.parts.len() - 1].hi()
    }

    pub fn diam(&self) -> Scalar {
        self.max() - self.min()
    }

    pub fn is_interval(&self) -> bool {
        self.parts.len() == 1
    }

    /// Longest bounded complementary interval; `min{l >= 0 : A + [0,l] is an interval}`.
    pub fn gap(&self) -> Scalar {
        self.parts
            .windows(2)
            .map(|w| w[1].lo() - w[0].hi())
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn within_unit(&self) -> bool {
        self.min() >= &Scalar::zero() && self.max() <= &Scalar::one()
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.part_containing(x).is_some()
    }

    fn part_containing(&self, x: &Scalar) -> Option<&Interval> {
        let idx = self.parts.partition_point(|p| p.lo() <= x);
        if idx == 0 {
            return None;
        }
        let p = &self.parts[idx - 1];
        (x <= p.hi()).then_some(p)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &CompactSet) -> bool {
        self.parts.iter().all(|a| {
            other
                .part_containing(a.lo())
                .is_some_and(|b| b.contains_interval(a))
        })
    }

    /// Minkowski sum `{a + b}`.
    pub fn sum(&self, other: &CompactSet) -> CompactSet {
        let mut raw = Vec::with_capacity(self.parts.len() * other.parts.len());
        for a in &self.parts {
            for b in &other.parts {
                raw.push(a.add(b));
            }
        }
        Self::normalize_nonempty(raw)
    }

    pub fn sum_interval(&self, iv: &Interval) -> CompactSet {
        Self::normalize_nonempty(self.parts.iter().map(|a| a.add(iv)).collect())
    }

    /// `{t·a}`. Scaling by zero gives `{0}`.
    pub fn scale(&self, t: &Scalar) -> CompactSet {
        if t.is_zero() {
            return Self::zero();
        }
        let mut parts: Vec<Interval> = self.parts.iter().map(|p| p.scale(t)).collect();
        if t < &Scalar::zero() {
            parts.reverse();
        }
        Self { parts }
    }

    pub fn shift(&self, t: &Scalar) -> CompactSet {
        Self {
            parts: self.parts.iter().map(|p| p.shift(t)).collect(),
        }
    }

    /// Minkowski product `{a·b}` via the corner rule on each pair of parts.
    pub fn product(&self, other: &CompactSet) -> CompactSet {
        let mut raw = Vec::with_capacity(self.parts.len() * other.parts.len());
        for a in &self.parts {
            for b in &other.parts {
                raw.push(a.mul(b));
            }
        }
        Self::normalize_nonempty(raw)
    }

    /// Minkowski product of `n` copies; `A^⊗0 = {1}`.
    pub fn power(&self, n: usize) -> CompactSet {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.product(self);
        }
        acc
    }

    /// Exact Hausdorff distance.
    pub fn hausdorff_distance(&self, other: &CompactSet) -> Scalar {
        let ab = self.directed_distance(other);
        let ba = other.directed_distance(self);
        if ab >= ba { ab } else { ba }
    }

    /// `sup_{a ∈ self} dist(a, other)`.
    ///
    /// `dist(·, other)` is piecewise linear and its only interior local maxima
    /// are the midpoints of the bounded gaps of `other`, so the supremum over a
    /// part of `self` is attained at one of its endpoints or at such a midpoint.
    pub fn directed_distance(&self, other: &CompactSet) -> Scalar {
        let mut best = Scalar::zero();
        for p in &self.parts {
            for x in [p.lo(), p.hi()] {
                let d = other.distance_to(x);
                if d > best {
                    best = d;
                }
            }
        }
        for w in other.parts.windows(2) {
            let half = (w[1].lo() - w[0].hi()) / scalar::int(2);
            if half <= best {
                continue;
            }
            let mid = w[0].hi() + &half;
            if self.contains(&mid) {
                best = half;
            }
        }
        best
    }

    /// `inf_{b ∈ self} |x - b|`.
    pub fn distance_to(&self, x: &Scalar) -> Scalar {
        let idx = self.parts.partition_point(|p| p.lo() <= x);
        let mut best: Option<Scalar> = None;
        if idx > 0 {
            let p = &self.parts[idx - 1];
            if x <= p.hi() {
                return Scalar::zero();
            }
            best = Some(x - p.hi());
        }
        if let Some(p) = self.parts.get(idx) {
            let d = p.lo() - x;
            best = Some(match best {
                Some(b) if b <= d => b,
                _ => d,
            });
        }
        best.expect("set is nonempty")
    }

    /// Snaps every endpoint outward to the dyadic grid `2^-g`.
    pub fn coarsen(&self, g: u32) -> CompactSet {
        let den = BigInt::one() << g;
        let grid = Scalar::from_integer(den.clone());
        let raw = self
            .parts
            .iter()
            .map(|p| {
                let lo = Scalar::new(scalar::floor_int(&(p.lo() * &grid)), den.clone());
                let hi = Scalar::new(scalar::ceil_int(&(p.hi() * &grid)), den.clone());
                Interval::new(lo, hi).expect("outward rounding keeps order")
            })
            .collect();
        Self::normalize_nonempty(raw)
    }
}

impl fmt::Display for CompactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if p.is_point() {
                write!(f, "{}", scalar::format(p.lo()))?;
            } else {
                write!(f, "{p}")?;
            }
        }
        write!(f, "}}")
    }
}
