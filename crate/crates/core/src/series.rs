//! Power series with rigorous tail bounds, and substitution of compact sets.
//!
//! `f⟨K⟩ = Σ aᵢ·K^⊗i` is a Hausdorff-metric limit, so what gets computed is a
//! truncation `S = Σ_{i<n} aᵢ·K^⊗i` together with a radius `r >= Σ_{i>=n} |aᵢ|`.
//! For `K ⊆ [0,1]` every omitted term lies in `[-|aᵢ|, |aᵢ|]`, which gives
//! `d_H(S, f⟨K⟩) <= r` and `f⟨K⟩ ⊆ S + [-r, r]`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{self, Scalar};
use crate::set::CompactSet;

/// Default cap on the number of terms a substitution may use.
pub const DEFAULT_TERM_BUDGET: usize = 10_000;

/// `|aᵢ| <= c·rho^i` for every `i >= from`.
#[derive(Clone, Debug, PartialEq)]
pub struct Majorant {
    pub c: Scalar,
    pub rho: Scalar,
    pub from: usize,
}

/// `|a_{i+1}| / |aᵢ| > eps` for every `i >= from`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioFloor {
    pub eps: Scalar,
    pub from: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Polynomial(Vec<Scalar>),
    /// `aᵢ = λ^i`, `|λ| < 1`.
    Geometric(Scalar),
    /// `aᵢ = 1/i!`.
    Exponential,
    /// `aᵢ = λ^(i²)`, `0 < |λ| < 1`.
    Gaussian(Scalar),
    Custom {
        coeffs: Vec<Scalar>,
        majorant: Majorant,
        ratio_floor: Option<RatioFloor>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    family: Family,
    label: String,
}

impl PowerSeries {
    pub fn polynomial(coeffs: Vec<Scalar>) -> Self {
        let label = format!(
            "poly:{}",
            coeffs.iter().map(scalar::format).collect::<Vec<_>>().join(",")
        );
        Self {
            family: Family::Polynomial(coeffs),
            label,
        }
    }

    pub fn geometric(ratio: Scalar) -> Result<Self> {
        if ratio.abs() >= Scalar::one() {
            return Err(Error::InvalidSeries(format!(
                "geometric ratio {} must satisfy |λ| < 1",
                scalar::format(&ratio)
            )));
        }
        Ok(Self {
            label: format!("geom:{}", scalar::format(&ratio)),
            family: Family::Geometric(ratio),
        })
    }

    pub fn exponential() -> Self {
        Self {
            family: Family::Exponential,
            label: "exp".to_string(),
        }
    }

    pub fn gaussian(base: Scalar) -> Result<Self> {
        if base.is_zero() || base.abs() >= Scalar::one() {
            return Err(Error::InvalidSeries(format!(
                "gaussian base {} must satisfy 0 < |λ| < 1",
                scalar::format(&base)
            )));
        }
        Ok(Self {
            label: format!("gauss:{}", scalar::format(&base)),
            family: Family::Gaussian(base),
        })
    }

    /// Coefficients `a_0 .. a_{L-1}` with a majorant covering every `i >= from`.
    /// Listed coefficients at or beyond `from` are checked against the majorant.
    pub fn custom(
        coeffs: Vec<Scalar>,
        majorant: Majorant,
        ratio_floor: Option<RatioFloor>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if majorant.rho.is_negative() || majorant.rho >= Scalar::one() {
            return Err(Error::InvalidSeries(format!(
                "majorant ratio {} must satisfy 0 <= ρ < 1",
                scalar::format(&majorant.rho)
            )));
        }
        if majorant.c.is_negative() {
            return Err(Error::InvalidSeries("majorant constant must be nonnegative".into()));
        }
        if coeffs.len() < majorant.from {
            return Err(Error::InvalidSeries(format!(
                "{} coefficients listed but the majorant only starts at index {}",
                coeffs.len(),
                majorant.from
            )));
        }
        for (i, a) in coeffs.iter().enumerate().skip(majorant.from) {
            if a.abs() > &majorant.c * scalar::pow(&majorant.rho, i) {
                return Err(Error::InvalidSeries(format!(
                    "coefficient a_{i} = {} exceeds its majorant",
                    scalar::format(a)
                )));
            }
        }
        if let Some(rf) = &ratio_floor {
            if !rf.eps.is_positive() {
                return Err(Error::InvalidSeries("ratio floor must be positive".into()));
            }
            for i in rf.from..coeffs.len().saturating_sub(1) {
                if coeffs[i + 1].abs() <= &rf.eps * coeffs[i].abs() {
                    return Err(Error::InvalidSeries(format!(
                        "listed coefficients violate the declared ratio floor at index {i}"
                    )));
                }
            }
        }
        Ok(Self {
            family: Family::Custom {
                coeffs,
                majorant,
                ratio_floor,
            },
            label: label.into(),
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// The series string this value was built from, e.g. `geom:1/2`.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of coefficients that can be produced, `None` when unbounded.
    pub fn available_terms(&self) -> Option<usize> {
        match &self.family {
            Family::Custom { coeffs, .. } => Some(coeffs.len()),
            _ => None,
        }
    }

    pub fn coefficient(&self, i: usize) -> Result<Scalar> {
        Ok(match &self.family {
            Family::Polynomial(c) => c.get(i).cloned().unwrap_or_else(Scalar::zero),
            Family::Geometric(l) => scalar::pow(l, i),
            Family::Exponential => {
                let mut fact = num_bigint::BigInt::one();
                for k in 2..=i {
                    fact *= k;
                }
                Scalar::new(num_bigint::BigInt::one(), fact)
            }
            Family::Gaussian(l) => scalar::pow(l, i * i),
            Family::Custom { coeffs, .. } => coeffs
                .get(i)
                .cloned()
                .ok_or(Error::CoefficientUnavailable { index: i })?,
        })
    }

    /// Whether `aᵢ = 0`, decided without building the coefficient.
    pub fn coefficient_vanishes(&self, i: usize) -> Result<bool> {
        match &self.family {
            Family::Polynomial(c) => Ok(c.get(i).is_none_or(|a| a.is_zero())),
            Family::Geometric(l) => Ok(i > 0 && l.is_zero()),
            Family::Exponential | Family::Gaussian(_) => Ok(false),
            Family::Custom { .. } => self.coefficient(i).map(|a| a.is_zero()),
        }
    }

    /// A proven upper bound on `R_n = Σ_{i>=n} |aᵢ|`, nonincreasing in `n`.
    pub fn tail_bound(&self, n: usize) -> Scalar {
        match &self.family {
            Family::Polynomial(c) => c.iter().skip(n).map(|a| a.abs()).sum(),
            Family::Geometric(l) => {
                let l = l.abs();
                scalar::pow(&l, n) / (Scalar::one() - &l)
            }
            Family::Exponential => {
                if n == 0 {
                    return scalar::int(3);
                }
                // Σ_{i>=n} 1/i! <= (1/n!)·Σ_k (n+1)^-k = (1/n!)·(n+1)/n
                let mut fact = num_bigint::BigInt::one();
                for k in 2..=n {
                    fact *= k;
                }
                Scalar::new(num_bigint::BigInt::from(n + 1), fact * n)
            }
            Family::Gaussian(l) => {
                let l = l.abs();
                let one = Scalar::one();
                if n == 0 {
                    return &one + &l / (&one - &l * &l);
                }
                // i² >= n² + 2n(i-n)
                scalar::pow(&l, n * n) / (&one - scalar::pow(&l, 2 * n))
            }
            Family::Custom {
                coeffs, majorant, ..
            } => {
                let listed: Scalar = coeffs.iter().skip(n).map(|a| a.abs()).sum();
                let m = n.max(coeffs.len());
                listed
                    + &majorant.c * scalar::pow(&majorant.rho, m) / (Scalar::one() - &majorant.rho)
            }
        }
    }

    /// `ln(tail_bound(n))` in double precision; `-inf` when the bound is zero.
    ///
    /// Closed-form families are evaluated symbolically so that `n` can be far
    /// beyond the point where the exact rational is representable.
    pub fn ln_tail_bound(&self, n: usize) -> f64 {
        match &self.family {
            Family::Geometric(l) if n > 64 => {
                let l = l.abs();
                if l.is_zero() {
                    return f64::NEG_INFINITY;
                }
                n as f64 * scalar::ln_abs(&l) - scalar::ln_abs(&(Scalar::one() - &l))
            }
            Family::Exponential if n > 64 => {
                let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
                ((n + 1) as f64 / n as f64).ln() - ln_fact
            }
            Family::Gaussian(l) if n > 16 => {
                let ln_l = scalar::ln_abs(l);
                let nf = n as f64;
                nf * nf * ln_l - (-(2.0 * nf * ln_l).exp()).ln_1p()
            }
            _ => scalar::ln_abs(&self.tail_bound(n)),
        }
    }

    /// `(eps, i_eps)` with `|a_{i+1}|/|aᵢ| > eps` for all `i >= i_eps`, when one is known.
    pub fn ratio_floor(&self) -> Option<RatioFloor> {
        match &self.family {
            Family::Geometric(l) if !l.is_zero() => Some(RatioFloor {
                eps: l.abs(),
                from: 0,
            }),
            Family::Custom { ratio_floor, .. } => ratio_floor.clone(),
            _ => None,
        }
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// A truncation of `f⟨K⟩`: `terms` summands and the tail radius used.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncation {
    pub set: CompactSet,
    pub radius: Scalar,
    pub terms: usize,
}

fn check_domain(k: &CompactSet) -> Result<()> {
    if k.within_unit() {
        Ok(())
    } else {
        Err(Error::DomainViolated)
    }
}

/// The summands `aᵢ·K^⊗i` for `i < n`, zero coefficients giving `{0}`.
pub fn terms(f: &PowerSeries, k: &CompactSet, n: usize) -> Result<Vec<CompactSet>> {
    check_domain(k)?;
    let mut out = Vec::with_capacity(n);
    let mut power = CompactSet::one();
    for i in 0..n {
        if i > 0 {
            power = power.product(k);
        }
        let a = f.coefficient(i)?;
        out.push(if a.is_zero() {
            CompactSet::zero()
        } else {
            power.scale(&a)
        });
    }
    Ok(out)
}

/// `Σ_{i<n} aᵢ·K^⊗i`, exactly.
pub fn partial_sum(f: &PowerSeries, k: &CompactSet, n: usize) -> Result<CompactSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("partial sums need at least one term".into()));
    }
    check_domain(k)?;
    let mut acc = CompactSet::zero();
    let mut power = CompactSet::one();
    for i in 0..n {
        if i > 0 {
            power = power.product(k);
        }
        let a = f.coefficient(i)?;
        if !a.is_zero() {
            acc = acc.sum(&power.scale(&a));
        }
    }
    Ok(acc)
}

/// Adds `pad` and then the summands from last to first.
///
/// The result equals `pad + Σ summands` exactly. Starting from the smallest
/// terms lets the pad absorb their gaps early, which keeps the intermediate
/// part counts small. Returns `None` once an intermediate set exceeds
/// `part_cap` parts.
pub fn padded_sum_reversed(
    summands: &[CompactSet],
    pad: &Interval,
    part_cap: Option<usize>,
) -> Option<CompactSet> {
    let mut acc = CompactSet::from_interval(pad.clone());
    for s in summands.iter().rev() {
        if s.len() == 1 {
            acc = acc.sum_interval(&s.parts()[0]);
        } else {
            acc = acc.sum(s);
        }
        if part_cap.is_some_and(|cap| acc.len() > cap) {
            return None;
        }
    }
    Some(acc)
}

/// Least `n >= 1` with `tail_bound(n) <= tol`, searching up to `budget`.
/// Polynomials always use every coefficient, so their radius is zero.
pub fn terms_for_tolerance(f: &PowerSeries, tol: &Scalar, budget: usize) -> Result<usize> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if let Family::Polynomial(c) = f.family() {
        return Ok(c.len().max(1));
    }
    let limit = f.available_terms().map_or(budget, |l| l.min(budget)).max(1);
    if &f.tail_bound(limit) > tol {
        return Err(Error::ToleranceUnreachable { budget: limit });
    }
    let (mut lo, mut hi) = (1usize, limit);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if &f.tail_bound(mid) <= tol {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// The exact truncation `S` and radius `r` with `d_H(S, f⟨K⟩) <= r <= tol`.
pub fn substitute(f: &PowerSeries, k: &CompactSet, tol: &Scalar, budget: usize) -> Result<Truncation> {
    check_domain(k)?;
    let n = terms_for_tolerance(f, tol, budget)?;
    Ok(Truncation {
        set: partial_sum(f, k, n)?,
        radius: f.tail_bound(n),
        terms: n,
    })
}

/// `Σ_{i<n} aᵢ·K^⊗i + [-R_n, R_n]`, a superset of `f⟨K⟩`.
pub fn enclosure_at(f: &PowerSeries, k: &CompactSet, n: usize) -> Result<Truncation> {
    if n == 0 {
        return Err(Error::InvalidArgument("enclosures need at least one term".into()));
    }
    let summands = terms(f, k, n)?;
    let radius = f.tail_bound(n);
    let set = padded_sum_reversed(&summands, &Interval::symmetric(&radius), None)
        .expect("no part cap");
    Ok(Truncation {
        set,
        radius,
        terms: n,
    })
}

/// Outer enclosure of `f⟨K⟩` at the least truncation whose tail is within `tol`.
pub fn outer_enclosure(f: &PowerSeries, k: &CompactSet, tol: &Scalar, budget: usize) -> Result<Truncation> {
    check_domain(k)?;
    let n = terms_for_tolerance(f, tol, budget)?;
    enclosure_at(f, k, n)
}
