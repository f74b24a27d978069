//! Grids, grid neighbourhoods and interval covers of Minkowski powers and
//! series images, with log-domain Hausdorff-capacity bounds.
//!
//! For a grid of `M` cell midpoints `(2j+1)/(2M)` and a radius `eps`, every
//! compact `K` within Hausdorff distance `eps` of a nonempty set of midpoints
//! lies in the union of the balls `I_ℓ`. Products of `i` balls then cover
//! `K^⊗i`, and sums of those products cover every truncation of `f⟨K⟩`.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{self, Scalar};
use crate::series::PowerSeries;
use crate::set::CompactSet;

/// Default materialization budget, in intervals.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Truncation level `n`, grid size `M` and neighbourhood radius `eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    n: usize,
    m: usize,
    eps: Scalar,
}

impl GridSpec {
    /// Checks `1 <= M <= n + 1` and `0 < eps < 1/(2M)`.
    pub fn new(n: usize, m: usize, eps: Scalar) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidGrid("n and M must be positive".into()));
        }
        if m > n + 1 {
            return Err(Error::InvalidGrid(format!("M = {m} exceeds n + 1 = {}", n + 1)));
        }
        if !eps.is_positive() || eps >= half_cell(m) {
            return Err(Error::InvalidGrid(format!(
                "eps = {} must lie in (0, 1/(2M))",
                scalar::format(&eps)
            )));
        }
        Ok(Self { n, m, eps })
    }

    /// Grid whose radius is half the largest admissible value for `f`:
    /// `eps = min{R_n/(n·R_0), 1/(2M)} / 2`.
    pub fn for_series(f: &PowerSeries, n: usize, m: usize) -> Result<Self> {
        let cap = eps_cap(f, n, m)?;
        Self::new(n, m, cap / scalar::int(2))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eps(&self) -> &Scalar {
        &self.eps
    }

    /// Verifies `eps < R_n/(n·R_0)` for `f`.
    ///
    /// When `a_1 .. a_{n-1}` all vanish the products never reach the cover, so
    /// only the grid constraint applies.
    pub fn check_series(&self, f: &PowerSeries) -> Result<()> {
        let cap = eps_cap(f, self.n, self.m)?;
        if self.eps >= cap {
            return Err(Error::EpsChoiceViolated(format!(
                "eps = {} is not below {}",
                scalar::format(&self.eps),
                scalar::format(&cap)
            )));
        }
        Ok(())
    }

    /// The closed ball `I_ℓ` around the `ℓ`-th midpoint.
    pub fn ball(&self, l: usize) -> Interval {
        let c = midpoint(l, self.m);
        Interval::new(&c - &self.eps, &c + &self.eps).expect("eps > 0")
    }
}

fn half_cell(m: usize) -> Scalar {
    Scalar::new(1.into(), (2 * m).into())
}

fn midpoint(j: usize, m: usize) -> Scalar {
    Scalar::new((2 * j + 1).into(), (2 * m).into())
}

/// `min{R_n/(n·R_0), 1/(2M)}`, or `1/(2M)` when `a_1 .. a_{n-1}` all vanish.
fn eps_cap(f: &PowerSeries, n: usize, m: usize) -> Result<Scalar> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidGrid("n and M must be positive".into()));
    }
    let mut products_matter = false;
    for i in 1..n {
        if !f.coefficient_vanishes(i)? {
            products_matter = true;
            break;
        }
    }
    if !products_matter {
        return Ok(half_cell(m));
    }
    let rn = f.tail_bound(n);
    if rn.is_zero() {
        return Err(Error::EpsChoiceViolated(format!(
            "R_{n} = 0, so no eps satisfies eps < R_n/(n·R_0)"
        )));
    }
    let r0 = f.tail_bound(0);
    let bound = rn / (r0 * scalar::int(n as i64));
    Ok(scalar::min(&bound, &half_cell(m)))
}

/// `D = {(2j+1)/(2M) : 0 <= j < M}`.
pub fn grid_set(m: usize) -> CompactSet {
    assert!(m >= 1, "grid needs at least one cell");
    CompactSet::from_points((0..m).map(|j| midpoint(j, m))).expect("m >= 1")
}

/// Midpoints of the closed cells `[j/M, (j+1)/M]` that meet `K`.
pub fn nearest_grid_subset(k: &CompactSet, m: usize) -> Result<CompactSet> {
    if m == 0 {
        return Err(Error::InvalidGrid("M must be positive".into()));
    }
    if !k.within_unit() {
        return Err(Error::DomainViolated);
    }
    let mm = scalar::int(m as i64);
    let mut cells = std::collections::BTreeSet::new();
    for p in k.parts() {
        let first = (scalar::ceil_int(&(p.lo() * &mm)) - num_bigint::BigInt::one()).max(num_bigint::BigInt::zero());
        let last = scalar::floor_int(&(p.hi() * &mm)).min(num_bigint::BigInt::from(m - 1));
        let (first, last) = (first.to_usize().unwrap(), last.to_usize().unwrap());
        cells.extend(first..=last);
    }
    CompactSet::from_points(cells.into_iter().map(|j| midpoint(j, m)))
}

/// Whether some nonempty subset of the grid lies within Hausdorff distance
/// `< eps` of `K`.
///
/// The candidate set of all grid points closer than `eps` to `K` is optimal:
/// any admissible subset is contained in it, and enlarging a subset within
/// that range can only lower the distance from `K` to it.
pub fn in_grid_neighbourhood(k: &CompactSet, g: &GridSpec) -> Result<bool> {
    if !k.within_unit() {
        return Err(Error::DomainViolated);
    }
    let near: Vec<Scalar> = (0..g.m)
        .map(|j| midpoint(j, g.m))
        .filter(|d| k.distance_to(d) < g.eps)
        .collect();
    if near.is_empty() {
        return Ok(false);
    }
    let d = CompactSet::from_points(near)?;
    Ok(k.hausdorff_distance(&d) < g.eps)
}

/// A finite system of intervals together with declared bounds on its size
/// and on the diameter of each member. Lazy covers carry the bounds only.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    intervals: Option<Vec<Interval>>,
    count_bound: BigUint,
    diam_bound: Scalar,
}

impl Cover {
    pub fn intervals(&self) -> Option<&[Interval]> {
        self.intervals.as_deref()
    }

    pub fn is_lazy(&self) -> bool {
        self.intervals.is_none()
    }

    pub fn count_bound(&self) -> &BigUint {
        &self.count_bound
    }

    pub fn diam_bound(&self) -> &Scalar {
        &self.diam_bound
    }

    pub fn ln_count_bound(&self) -> f64 {
        scalar::ln_biguint(&self.count_bound)
    }

    /// Union of the materialized intervals.
    pub fn union(&self) -> Option<CompactSet> {
        self.intervals
            .as_ref()
            .map(|ivs| CompactSet::normalize(ivs.clone()).expect("covers are nonempty"))
    }

    /// Exact inclusion of `set` in the union; `None` for a lazy cover.
    pub fn covers(&self, set: &CompactSet) -> Option<bool> {
        self.union().map(|u| set.is_subset(&u))
    }
}

/// `C(i + M - 1, M - 1)`, the number of nondecreasing index sequences.
pub fn multiset_count(i: usize, m: usize) -> BigUint {
    let k = m - 1;
    let mut acc = BigUint::one();
    for t in 1..=k {
        acc = acc * BigUint::from(i + t) / BigUint::from(t);
    }
    acc
}

fn fits(count: &BigUint, budget: u64) -> bool {
    count <= &BigUint::from(budget)
}

/// Cover of `K^⊗i` for every `K` in the grid neighbourhood: the products
/// `I_{ℓ_0}···I_{ℓ_{i-1}}` over nondecreasing `ℓ`, each of diameter `<= 2·i·eps`.
pub fn cover_power(g: &GridSpec, i: usize, budget: u64) -> Cover {
    assert!(i >= 1, "powers start at 1");
    let count_bound = multiset_count(i, g.m);
    let diam_bound = scalar::int(2 * i as i64) * &g.eps;
    let intervals = fits(&count_bound, budget).then(|| {
        let balls: Vec<Interval> = (0..g.m).map(|l| g.ball(l)).collect();
        (0..g.m)
            .combinations_with_replacement(i)
            .map(|idx| {
                idx[1..]
                    .iter()
                    .fold(balls[idx[0]].clone(), |acc, &l| acc.mul(&balls[l]))
            })
            .collect()
    });
    Cover {
        intervals,
        count_bound,
        diam_bound,
    }
}

/// Cover of `f⟨K⟩` for every `K` in the grid neighbourhood: intervals
/// `a_0 + Σ_{i=1}^{n-1} aᵢ·Jᵢ + [-R_n, R_n]` with `Jᵢ` from [`cover_power`],
/// each of diameter `<= 4·R_n`. Indices with `aᵢ = 0` contribute `{0}` and
/// do not multiply the count.
pub fn cover_series(f: &PowerSeries, g: &GridSpec, budget: u64) -> Result<Cover> {
    g.check_series(f)?;
    let n = g.n;
    let rn = f.tail_bound(n);
    let mut active = Vec::new();
    let mut count_bound = BigUint::one();
    for i in 1..n {
        if !f.coefficient_vanishes(i)? {
            count_bound *= multiset_count(i, g.m);
            active.push(i);
        }
    }
    let diam_bound = scalar::int(4) * &rn;
    let intervals = if fits(&count_bound, budget) {
        let base = Interval::symmetric(&rn).shift(&f.coefficient(0)?);
        let mut scaled: Vec<Vec<Interval>> = Vec::with_capacity(active.len());
        for &i in &active {
            let a = f.coefficient(i)?;
            let power = cover_power(g, i, budget);
            let ivs = power.intervals().expect("each factor is within the total budget");
            scaled.push(ivs.iter().map(|j| j.scale(&a)).collect());
        }
        if scaled.is_empty() {
            Some(vec![base])
        } else {
            Some(
                scaled
                    .iter()
                    .map(|v| v.iter())
                    .multi_cartesian_product()
                    .map(|choice| choice.into_iter().fold(base.clone(), |acc, j| acc.add(j)))
                    .collect(),
            )
        }
    } else {
        None
    };
    Ok(Cover {
        intervals,
        count_bound,
        diam_bound,
    })
}

/// `n·M·ln(2n) + s·ln(4·R_n)`, an upper bound on `ln H^s_∞(f⟨K⟩)` for every `K`
/// in the grid neighbourhood. `-inf` when the tail bound vanishes.
pub fn capacity_log_bound(f: &PowerSeries, n: usize, m: usize, s: f64) -> f64 {
    let ln_r = f.ln_tail_bound(n);
    if ln_r == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let nf = n as f64;
    nf * m as f64 * (2.0 * nf).ln() + s * (4f64.ln() + ln_r)
}

/// `capacity_log_bound / (n·ln(2n)) = M + s·ln(4R_n)/(n·ln(2n))`.
pub fn normalized_capacity_bound(f: &PowerSeries, n: usize, m: usize, s: f64) -> f64 {
    let nf = n as f64;
    capacity_log_bound(f, n, m, s) / (nf * (2.0 * nf).ln())
}

/// `M = max(1, min(n+1, ⌊√T⌋))` with `T = -ln(4R_n)/(n·ln(2n))`.
///
/// When `ln R_n/(n ln n) → -∞`, `T → ∞`, so `M → ∞` while `M - s·T → -∞`.
pub fn choose_m(f: &PowerSeries, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let ln_r = f.ln_tail_bound(n);
    if ln_r == f64::NEG_INFINITY {
        return Err(Error::ZeroTail { n });
    }
    let nf = n as f64;
    let t = -(4f64.ln() + ln_r) / (nf * (2.0 * nf).ln());
    let root = if t > 0.0 { t.sqrt().floor() as usize } else { 0 };
    Ok(root.min(n + 1).max(1))
}
