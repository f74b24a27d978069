//! Exact box counting on half-open grid cells and least-squares dimension slopes.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::series::{self, PowerSeries};
use crate::set::CompactSet;

/// Number of cells `[k·δ, (k+1)·δ)` meeting `A`.
pub fn box_count(a: &CompactSet, delta: &Scalar) -> Result<BigUint> {
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("box size must be positive".into()));
    }
    let mut total = BigInt::zero();
    let mut last: Option<BigInt> = None;
    for p in a.parts() {
        let mut first = scalar::floor_int(&(p.lo() / delta));
        let end = scalar::floor_int(&(p.hi() / delta));
        if let Some(prev) = &last {
            if &first <= prev {
                first = prev + 1;
            }
        }
        if first <= end {
            total += &end - &first + 1;
            last = Some(end);
        }
    }
    Ok(total.to_biguint().expect("count is nonnegative"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxRow {
    pub delta: Scalar,
    pub count: BigUint,
    /// Series terms used for the enclosure at this scale.
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimEstimate {
    pub slope: f64,
    pub rows: Vec<BoxRow>,
}

/// Least-squares slope of `ln count` against `ln(1/δ)` for box counts of the
/// outer enclosure of `f⟨K⟩` at tolerance `δ/2`.
pub fn dim_estimate(f: &PowerSeries, k: &CompactSet, scales: &[Scalar], budget: usize) -> Result<DimEstimate> {
    if scales.len() < 2 {
        return Err(Error::InvalidArgument("need at least two scales".into()));
    }
    for d in scales {
        if !d.is_positive() || d >= &Scalar::one() {
            return Err(Error::InvalidArgument(format!(
                "scale {} is outside (0,1)",
                scalar::format(d)
            )));
        }
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("scales must be strictly decreasing".into()));
    }
    let two = scalar::int(2);
    let mut rows = Vec::with_capacity(scales.len());
    for delta in scales {
        let enc = series::outer_enclosure(f, k, &(delta / &two), budget)?;
        rows.push(BoxRow {
            delta: delta.clone(),
            count: box_count(&enc.set, delta)?,
            terms: enc.terms,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (-scalar::ln_abs(&r.delta), scalar::ln_biguint(&r.count)))
        .collect();
    Ok(DimEstimate {
        slope: least_squares_slope(&points),
        rows,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `2^-k` for `k` in `from..=to`.
pub fn dyadic_scales(from: u32, to: u32) -> Vec<Scalar> {
    (from..=to)
        .map(|k| Scalar::new(BigInt::one(), BigInt::one() << k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn box_count_examples() {
        assert_eq!(box_count(&CompactSet::zero(), &ratio(1, 7)).unwrap(), BigUint::one());
        assert_eq!(box_count(&CompactSet::unit_interval(), &ratio(1, 4)).unwrap(), BigUint::from(5u32));
        let a = CompactSet::from_points([int(0), ratio(1, 3), int(1)]).unwrap();
        assert_eq!(box_count(&a, &ratio(1, 2)).unwrap(), BigUint::from(2u32));
        assert!(box_count(&a, &int(0)).is_err());
    }

    #[test]
    fn box_count_merges_shared_cells() {
        let a = CompactSet::from_points([ratio(1, 10), ratio(2, 10), ratio(9, 10)]).unwrap();
        assert_eq!(box_count(&a, &ratio(1, 2)).unwrap(), BigUint::from(2u32));
        let b = CompactSet::from_points([ratio(-3, 4), ratio(-1, 4)]).unwrap();
        assert_eq!(box_count(&b, &ratio(1, 2)).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn identity_on_unit_interval() {
        let f = PowerSeries::polynomial(vec![int(0), int(1)]);
        let est = dim_estimate(&f, &CompactSet::unit_interval(), &dyadic_scales(2, 10), 100).unwrap();
        for (row, k) in est.rows.iter().zip(2..) {
            assert_eq!(row.count, BigUint::from((1u32 << k) + 1));
        }
        assert!((est.slope - 1.0).abs() < 0.05, "{}", est.slope);
    }

    #[test]
    fn point_has_zero_slope() {
        let f = PowerSeries::polynomial(vec![int(0), int(1)]);
        let est = dim_estimate(&f, &CompactSet::point(ratio(1, 2)), &dyadic_scales(1, 6), 100).unwrap();
        assert_eq!(est.slope, 0.0);
    }

    #[test]
    fn rejects_bad_scales() {
        let f = PowerSeries::polynomial(vec![int(1)]);
        let k = CompactSet::one();
        assert!(dim_estimate(&f, &k, &[ratio(1, 4), ratio(1, 2)], 10).is_err());
        assert!(dim_estimate(&f, &k, &[int(1), ratio(1, 2)], 10).is_err());
        assert!(dim_estimate(&f, &k, &[ratio(1, 2)], 10).is_err());
    }
}
