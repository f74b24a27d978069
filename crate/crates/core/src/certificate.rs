//! Gap-chain certificates that an infinite Minkowski sum has nonempty interior.
//!
//! If `gap(A) <= diam(B)` then `gap(A + B) <= gap(B)`. Chaining this along
//! `gap(Aᵢ) <= diam(A_{i+1})` for every `i >= i0` makes `Σ_{i>=i0} Aᵢ` an
//! interval, so `Σ Aᵢ` contains one. For `Aᵢ = aᵢ·{p,q}^⊗i` the gaps and
//! diameters have closed forms, and for series with a ratio floor the chain
//! beyond a finite horizon follows from a monotone lower bound.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{self, Scalar};
use crate::series::{self, PowerSeries};
use crate::set::CompactSet;

/// Default number of chain rows checked before the analytic tail takes over.
pub const DEFAULT_HORIZON: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailJustification {
    FiniteOnly,
    GeometricMonotone,
    RatioBound,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRow {
    pub i: usize,
    #[serde(with = "scalar::serde_str")]
    pub gap: Scalar,
    #[serde(with = "scalar::serde_str")]
    pub diam_next: Scalar,
    pub holds: bool,
}

impl ChainRow {
    fn new(i: usize, gap: Scalar, diam_next: Scalar) -> Self {
        let holds = gap <= diam_next;
        Self {
            i,
            gap,
            diam_next,
            holds,
        }
    }
}

/// `gap(Σ_{j=i0}^{m} Aⱼ) <= gap(A_m)`, verified exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixCheck {
    pub m: usize,
    pub bound: Scalar,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapChainReport {
    pub requested_from: usize,
    /// First index from which every checked row holds.
    pub i0: usize,
    pub checked_upto: Option<usize>,
    pub rows: Vec<ChainRow>,
    pub prefix_checks: Vec<PrefixCheck>,
    pub tail_justification: TailJustification,
}

impl GapChainReport {
    pub fn holds_from_requested(&self) -> bool {
        self.i0 == self.requested_from
    }
}

/// First index `j` such that every row from `j` on holds.
fn chain_start(rows: &[ChainRow], default: usize) -> usize {
    rows.iter()
        .rposition(|r| !r.holds)
        .map_or(default, |k| rows[k].i + 1)
}

/// Checks `gap(Aᵢ) <= diam(A_{i+1})` for `i0 <= i < len - 1`, then verifies the
/// prefix-sum consequence for every index reached by an unbroken chain.
pub fn gap_chain_check(sets: &[CompactSet], i0: usize) -> Result<GapChainReport> {
    if sets.is_empty() {
        return Err(Error::InvalidArgument("gap chain needs at least one set".into()));
    }
    if i0 >= sets.len() {
        return Err(Error::InvalidArgument(format!(
            "start index {i0} out of range for {} sets",
            sets.len()
        )));
    }
    let rows: Vec<ChainRow> = (i0..sets.len() - 1)
        .map(|i| ChainRow::new(i, sets[i].gap(), sets[i + 1].diam()))
        .collect();
    let start = chain_start(&rows, i0);
    let prefix_checks = (start..sets.len())
        .map(|m| {
            let bound = sets[m].gap();
            let pad = Interval::new(Scalar::zero(), bound.clone()).expect("gap >= 0");
            let holds = series::padded_sum_reversed(&sets[start..=m], &pad, Some(1))
                .is_some_and(|s| s.is_interval());
            PrefixCheck { m, bound, holds }
        })
        .collect();
    Ok(GapChainReport {
        requested_from: i0,
        i0: start,
        checked_upto: rows.last().map(|r| r.i),
        rows,
        prefix_checks,
        tail_justification: TailJustification::FiniteOnly,
    })
}

fn check_pair(p: &Scalar, q: &Scalar) -> Result<()> {
    if p.is_positive() && p < q && q <= &Scalar::one() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "need 0 < p < q <= 1, got p = {}, q = {}",
            scalar::format(p),
            scalar::format(q)
        )))
    }
}

/// `(diam Aᵢ, gap Aᵢ)` for `Aᵢ = aᵢ·{p,q}^⊗i`, `i >= 1`:
/// `|aᵢ|·(q^i - p^i)` and `|aᵢ|·(q - p)·q^(i-1)`.
pub fn two_point_terms(f: &PowerSeries, p: &Scalar, q: &Scalar, i: usize) -> Result<(Scalar, Scalar)> {
    check_pair(p, q)?;
    if i == 0 {
        return Err(Error::InvalidArgument("two-point terms start at i = 1".into()));
    }
    let a = f.coefficient(i)?.abs();
    let diam = &a * (scalar::pow(q, i) - scalar::pow(p, i));
    let gap = a * (q - p) * scalar::pow(q, i - 1);
    Ok((diam, gap))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub series: String,
    #[serde(with = "scalar::serde_str")]
    pub p: Scalar,
    #[serde(with = "scalar::serde_str")]
    pub q: Scalar,
    pub i0: usize,
    pub horizon: usize,
    #[serde(with = "scalar::serde_str")]
    pub ratio_floor: Scalar,
    /// `ratio_floor·q²/(q-p)·(1-(p/q)^(horizon+1))`, at least 1.
    #[serde(with = "scalar::serde_str")]
    pub tail_ratio_bound: Scalar,
    pub rows: Vec<ChainRow>,
    pub tail_justification: TailJustification,
}

/// A certificate, or the reason none was established. A missing certificate
/// says nothing about whether the interior is empty.
#[derive(Clone, Debug, PartialEq)]
pub enum CertificateOutcome {
    Certified(Box<Certificate>),
    NotEstablished(String),
}

impl CertificateOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Self::Certified(c) => Some(c),
            Self::NotEstablished(_) => None,
        }
    }
}

/// Certifies `Int f⟨{p,q}⟩ ≠ ∅` when `(q-p)/q² < ε` for a ratio floor `ε` of `f`.
///
/// Rows `0..=horizon` are checked exactly. Beyond the horizon,
/// `diam A_{i+1} / gap Aᵢ >= ε·q²/(q-p)·(1-(p/q)^(i+1))`, which increases
/// with `i`, so its value at the horizon being `>= 1` settles every later row.
pub fn two_point_certificate(
    f: &PowerSeries,
    p: &Scalar,
    q: &Scalar,
    horizon: usize,
) -> Result<CertificateOutcome> {
    check_pair(p, q)?;
    let Some(floor) = f.ratio_floor() else {
        return Ok(CertificateOutcome::NotEstablished(format!(
            "{f} has no ratio floor |a_(i+1)|/|a_i| > ε"
        )));
    };
    let spread = (q - p) / (q * q);
    if spread >= floor.eps {
        return Ok(CertificateOutcome::NotEstablished(format!(
            "(q-p)/q² = {} is not below ε = {}",
            scalar::format(&spread),
            scalar::format(&floor.eps)
        )));
    }
    let horizon = match f.available_terms() {
        Some(len) if len < horizon + 2 => len.saturating_sub(2),
        _ => horizon,
    };
    let first_tail = floor.from.max(1);
    if horizon < first_tail {
        return Ok(CertificateOutcome::NotEstablished(format!(
            "horizon {horizon} is below the ratio-floor index {first_tail}"
        )));
    }
    let mut rows = Vec::with_capacity(horizon + 1);
    let a1 = f.coefficient(1)?.abs();
    rows.push(ChainRow::new(0, Scalar::zero(), a1 * (q - p)));
    for i in 1..=horizon {
        let (_, gap) = two_point_terms(f, p, q, i)?;
        let (diam_next, _) = two_point_terms(f, p, q, i + 1)?;
        rows.push(ChainRow::new(i, gap, diam_next));
    }
    let i0 = chain_start(&rows, 0);
    if i0 > horizon {
        return Ok(CertificateOutcome::NotEstablished(format!(
            "chain fails at the horizon {horizon}; try a larger horizon"
        )));
    }
    let tail_ratio_bound =
        &floor.eps * q * q / (q - p) * (Scalar::one() - scalar::pow(&(p / q), horizon + 1));
    if tail_ratio_bound < Scalar::one() {
        return Ok(CertificateOutcome::NotEstablished(format!(
            "tail ratio bound {} < 1 at horizon {horizon}; try a larger horizon",
            scalar::format(&tail_ratio_bound)
        )));
    }
    let tail_justification = match f.family() {
        series::Family::Geometric(_) => TailJustification::GeometricMonotone,
        _ => TailJustification::RatioBound,
    };
    Ok(CertificateOutcome::Certified(Box::new(Certificate {
        series: f.label().to_string(),
        p: p.clone(),
        q: q.clone(),
        i0,
        horizon,
        ratio_floor: floor.eps,
        tail_ratio_bound,
        rows,
        tail_justification,
    })))
}

/// Finds `0 < p < q <= 1` in `K` with `(q-p)/q² < eps_ratio`.
///
/// Candidates are all pairs of part endpoints in `(0,1]`, plus, for each
/// nondegenerate part meeting `(0,1]`, a pair at its right end pulled close
/// enough together. The lexicographically smallest qualifying pair wins.
pub fn find_close_pair(k: &CompactSet, eps_ratio: &Scalar) -> Option<(Scalar, Scalar)> {
    if !eps_ratio.is_positive() {
        return None;
    }
    let zero = Scalar::zero();
    let one = Scalar::one();
    let qualifies = |p: &Scalar, q: &Scalar| p > &zero && p < q && q <= &one && &((q - p) / (q * q)) < eps_ratio;

    let mut endpoints: Vec<Scalar> = k
        .parts()
        .iter()
        .flat_map(|iv| [iv.lo().clone(), iv.hi().clone()])
        .filter(|x| x > &zero && x <= &one)
        .collect();
    endpoints.dedup();

    let mut best: Option<(Scalar, Scalar)> = None;
    let mut offer = |p: Scalar, q: Scalar| {
        if qualifies(&p, &q) && best.as_ref().is_none_or(|b| (&p, &q) < (&b.0, &b.1)) {
            best = Some((p, q));
        }
    };
    for (a, p) in endpoints.iter().enumerate() {
        for q in &endpoints[a + 1..] {
            offer(p.clone(), q.clone());
        }
    }
    for iv in k.parts() {
        let lo = scalar::max(iv.lo(), &zero);
        let hi = scalar::min(iv.hi(), &one);
        if lo < hi {
            let w = scalar::min(&(&hi - &lo), &(eps_ratio * &hi * &hi)) / scalar::int(2);
            offer(&hi - &w, hi);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub enum GapValue {
    Exact(Scalar),
    /// The gap is at most this value; finer resolution was not attempted.
    AtMost(Scalar),
    /// Intermediate sets exceeded the part cap.
    Unresolved,
}

impl GapValue {
    pub fn upper(&self) -> Option<&Scalar> {
        match self {
            Self::Exact(g) | Self::AtMost(g) => Some(g),
            Self::Unresolved => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceOptions {
    /// Partial sums whose size estimate stays below this are computed exactly.
    pub exact_part_cap: usize,
    /// Abort threshold for padded sums.
    pub part_cap: usize,
    /// Padding used when the last summand has no gap.
    pub resolution: Scalar,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            exact_part_cap: 4096,
            part_cap: 1 << 16,
            resolution: Scalar::new(1.into(), num_bigint::BigInt::from(10u32).pow(12)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub gap: GapValue,
}

/// `gap(S_n)` for `S_n = Σ_{i<n} aᵢ·K^⊗i`, `1 <= n <= n_max`.
///
/// Small partial sums are computed outright. Larger ones are resolved through
/// `S_n + [0, θ]` with `θ = gap(A_{n-1})`: that set is an interval exactly when
/// `gap(S_n) <= θ`, and otherwise its own gap is `gap(S_n) - θ`.
pub fn enclosure_gap_trace(
    f: &PowerSeries,
    k: &CompactSet,
    n_max: usize,
    opts: &TraceOptions,
) -> Result<Vec<TraceRow>> {
    let summands = series::terms(f, k, n_max)?;
    let mut rows = Vec::with_capacity(n_max);
    let mut exact: Option<CompactSet> = Some(CompactSet::zero());
    let mut size_estimate: usize = 1;
    for n in 1..=n_max {
        let last = &summands[n - 1];
        size_estimate = size_estimate.saturating_mul(last.len());
        if size_estimate > opts.exact_part_cap {
            exact = None;
        }
        if let Some(acc) = exact.as_mut() {
            *acc = acc.sum(last);
            rows.push(TraceRow {
                n,
                gap: GapValue::Exact(acc.gap()),
            });
            continue;
        }
        let theta = match last.gap() {
            g if g.is_positive() => g,
            _ => opts.resolution.clone(),
        };
        let pad = Interval::new(Scalar::zero(), theta.clone()).expect("theta > 0");
        let gap = match series::padded_sum_reversed(&summands[..n], &pad, Some(opts.part_cap)) {
            None => GapValue::Unresolved,
            Some(padded) if padded.is_interval() => GapValue::AtMost(theta),
            Some(padded) => GapValue::Exact(theta + padded.gap()),
        };
        rows.push(TraceRow { n, gap });
    }
    Ok(rows)
}
