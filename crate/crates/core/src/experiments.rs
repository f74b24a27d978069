//! Desk-scale experiments on both sides of the interior/zero-dimension split:
//! an interval certificate, capacity collapse, and box-counting sanity checks.

use crate::boxcount::{self, DimEstimate};
use crate::certificate::{self, CertificateOutcome, GapValue, TraceOptions, TraceRow};
use crate::cover;
use crate::error::Result;
use crate::scalar::{self, ratio, Scalar};
use crate::series::{self, PowerSeries, Truncation, DEFAULT_TERM_BUDGET};
use crate::set::CompactSet;

fn one_in_a_million() -> Scalar {
    Scalar::new(1.into(), 1_000_000.into())
}

#[derive(Debug)]
pub struct IntervalExperiment {
    pub certificate: CertificateOutcome,
    pub trace: Vec<TraceRow>,
    pub enclosure: Truncation,
}

impl IntervalExperiment {
    pub fn i0(&self) -> Option<usize> {
        self.certificate.certificate().map(|c| c.i0)
    }

    /// Upper bound on `gap(S_n)` from the trace.
    pub fn gap_bound(&self, n: usize) -> Option<&Scalar> {
        self.trace.iter().find(|r| r.n == n).and_then(|r| r.gap.upper())
    }

    pub fn passed(&self) -> bool {
        self.i0() == Some(3)
            && self.gap_bound(30).is_some_and(|g| g < &one_in_a_million())
            && self.enclosure.set.is_interval()
    }
}

/// `geom:1/2` on `{3/5, 4/5}`: certificate, gap trace to `S_30`, and the outer
/// enclosure at tolerance `10^-6`.
pub fn interval_experiment() -> Result<IntervalExperiment> {
    let f = PowerSeries::geometric(ratio(1, 2))?;
    let (p, q) = (ratio(3, 5), ratio(4, 5));
    let k = CompactSet::from_points([p.clone(), q.clone()])?;
    let certificate = certificate::two_point_certificate(&f, &p, &q, certificate::DEFAULT_HORIZON)?;
    let trace = certificate::enclosure_gap_trace(&f, &k, 30, &TraceOptions::default())?;
    let enclosure = series::outer_enclosure(&f, &k, &one_in_a_million(), DEFAULT_TERM_BUDGET)?;
    Ok(IntervalExperiment {
        certificate,
        trace,
        enclosure,
    })
}

/// Weights of the normalized capacity bound reported by default.
pub const CAPACITY_WEIGHTS: [f64; 3] = [0.1, 0.5, 1.0];

/// Largest `n` considered by the capacity experiment.
pub const CAPACITY_N_MAX: usize = 100_000;

#[derive(Clone, Debug)]
pub struct CapacityPoint {
    pub n: usize,
    pub m: usize,
    /// `M + s·ln(4R_n)/(n·ln 2n)` for each weight.
    pub normalized: Vec<f64>,
}

#[derive(Debug)]
pub struct CapacityExperiment {
    pub series: String,
    pub weights: Vec<f64>,
    pub grid: Vec<CapacityPoint>,
    /// First `n` with a normalized bound below -1, per weight.
    pub first_crossing: Vec<Option<usize>>,
}

impl CapacityExperiment {
    /// Whether the bound for weight `w` decreases strictly along the grid
    /// from the first grid point already below -1.
    pub fn decreasing_after_crossing(&self, w: usize) -> bool {
        let values: Vec<f64> = self.grid.iter().map(|p| p.normalized[w]).collect();
        match values.iter().position(|&v| v < -1.0) {
            Some(start) => values[start..].windows(2).all(|p| p[1] < p[0]),
            None => false,
        }
    }

    /// Smallest grid `n` from which the bound for weight `w` decreases
    /// strictly to the end of the grid. Jumps of `M` break monotonicity
    /// before this point.
    pub fn monotone_tail_start(&self, w: usize) -> usize {
        let values: Vec<f64> = self.grid.iter().map(|p| p.normalized[w]).collect();
        let start = values.windows(2).rposition(|p| p[1] >= p[0]).map_or(0, |k| k + 1);
        self.grid[start].n
    }

    /// `s = 0.1` crosses -1 by `n = 5000` and decreases strictly from there;
    /// every weight crosses and ends in a strictly decreasing run covering
    /// at least the last decade of the grid.
    pub fn passed(&self) -> bool {
        let last = self.grid.last().map_or(0, |p| p.n);
        let s01 = self.weights.iter().position(|&s| s == 0.1);
        s01.is_some_and(|w| self.first_crossing[w].is_some_and(|n| n <= 5000) && self.decreasing_after_crossing(w))
            && self.first_crossing.iter().all(|c| c.is_some())
            && (0..self.weights.len()).all(|w| self.monotone_tail_start(w) * 10 <= last)
    }
}

/// About ten points per decade from 2 to `n_max`.
pub fn log_grid(n_max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..)
        .map(|j| (10f64.powf(0.3 + j as f64 / 10.0)).round() as usize)
        .take_while(|&n| n <= n_max)
        .collect();
    out.dedup();
    out
}

/// `aᵢ = 2^(-i²)` with `M = choose_m`: normalized capacity bounds on a log
/// grid and the first `n` where each drops below -1.
pub fn capacity_experiment(weights: &[f64], n_max: usize) -> Result<CapacityExperiment> {
    let f = PowerSeries::gaussian(ratio(1, 2))?;
    let eval = |n: usize| -> Result<CapacityPoint> {
        let m = cover::choose_m(&f, n)?;
        let normalized = weights
            .iter()
            .map(|&s| cover::normalized_capacity_bound(&f, n, m, s))
            .collect();
        Ok(CapacityPoint { n, m, normalized })
    };
    let grid = log_grid(n_max).into_iter().map(eval).collect::<Result<Vec<_>>>()?;
    let mut first_crossing = vec![None; weights.len()];
    for n in 1..=n_max {
        if first_crossing.iter().all(|c| c.is_some()) {
            break;
        }
        let point = eval(n)?;
        for (slot, v) in first_crossing.iter_mut().zip(&point.normalized) {
            if slot.is_none() && *v < -1.0 {
                *slot = Some(n);
            }
        }
    }
    Ok(CapacityExperiment {
        series: f.label().to_string(),
        weights: weights.to_vec(),
        grid,
        first_crossing,
    })
}

/// Tab-separated capacity table: `n`, `M`, then one column per weight.
pub fn capacity_tsv(e: &CapacityExperiment) -> String {
    let mut out = String::from("n\tM");
    for s in &e.weights {
        out.push_str(&format!("\ts={s}"));
    }
    out.push('\n');
    for p in &e.grid {
        out.push_str(&format!("{}\t{}", p.n, p.m));
        for v in &p.normalized {
            out.push_str(&format!("\t{v:.6}"));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug)]
pub struct BoxDimExperiment {
    pub identity_interval: DimEstimate,
    pub identity_point: DimEstimate,
    pub geometric_two_point: DimEstimate,
}

impl BoxDimExperiment {
    pub fn passed(&self) -> bool {
        (self.identity_interval.slope - 1.0).abs() <= 0.05
            && self.identity_point.slope == 0.0
            && (self.geometric_two_point.slope - 1.0).abs() <= 0.1
    }
}

/// Box-counting slopes over `2^-3 .. 2^-12` for three reference images.
pub fn box_dim_experiment() -> Result<BoxDimExperiment> {
    let scales = boxcount::dyadic_scales(3, 12);
    let id = PowerSeries::polynomial(vec![scalar::int(0), scalar::int(1)]);
    let geom = PowerSeries::geometric(ratio(1, 2))?;
    let two = CompactSet::from_points([ratio(3, 5), ratio(4, 5)])?;
    Ok(BoxDimExperiment {
        identity_interval: boxcount::dim_estimate(&id, &CompactSet::unit_interval(), &scales, DEFAULT_TERM_BUDGET)?,
        identity_point: boxcount::dim_estimate(&id, &CompactSet::point(ratio(1, 2)), &scales, DEFAULT_TERM_BUDGET)?,
        geometric_two_point: boxcount::dim_estimate(&geom, &two, &scales, DEFAULT_TERM_BUDGET)?,
    })
}

/// One-line description of a gap-trace value.
pub fn describe_gap(g: &GapValue) -> String {
    match g {
        GapValue::Exact(v) => format!("= {}", scalar::format(v)),
        GapValue::AtMost(v) => format!("<= {:.3e}", scalar::ln_abs(v).exp()),
        GapValue::Unresolved => "unresolved".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_shape() {
        let g = log_grid(100_000);
        assert_eq!(g[0], 2);
        assert_eq!(*g.last().unwrap(), 100_000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn capacity_small_range() {
        let e = capacity_experiment(&[1.0], 2000).unwrap();
        assert!(e.first_crossing[0].is_some());
    }
}
