//! JSON documents for sets, series and results.
//!
//! Rationals are written as `"p/q"` (or `"p"`) strings so documents round-trip
//! exactly. Values too large to print usefully are replaced by their natural
//! logarithm.

use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::certificate::{ChainRow, GapChainReport, GapValue, TraceRow};
use crate::cover::{Cover, GridSpec};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::series::{Majorant, PowerSeries, RatioFloor, Truncation};
use crate::set::CompactSet;

/// Environment variable overriding the cover materialization budget.
pub const BUDGET_ENV: &str = "MINKCALC_BUDGET";

/// Exact values wider than this many bits are written as logarithms only.
pub const MAX_EXACT_BITS: u64 = 4096;

#[derive(Debug, Deserialize, Serialize)]
struct SetDoc {
    intervals: Vec<(String, String)>,
}

fn set_doc(a: &CompactSet) -> SetDoc {
    SetDoc {
        intervals: a
            .parts()
            .iter()
            .map(|iv| (scalar::format(iv.lo()), scalar::format(iv.hi())))
            .collect(),
    }
}

fn set_from_doc(doc: SetDoc) -> Result<CompactSet> {
    let parts = doc
        .intervals
        .iter()
        .map(|(lo, hi)| crate::interval::Interval::new(scalar::parse(lo)?, scalar::parse(hi)?))
        .collect::<Result<Vec<_>>>()?;
    CompactSet::normalize(parts)
}

/// Parses `{"intervals": [["lo","hi"], ...]}`. Other fields are ignored.
pub fn parse_set(json: &str) -> Result<CompactSet> {
    set_from_doc(serde_json::from_str(json)?)
}

pub fn read_set(path: &Path) -> Result<CompactSet> {
    parse_set(&std::fs::read_to_string(path)?)
}

pub fn set_to_json(a: &CompactSet) -> String {
    to_json(&set_doc(a))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[derive(Deserialize)]
struct MajorantDoc {
    #[serde(rename = "C", with = "scalar::serde_str")]
    c: Scalar,
    #[serde(with = "scalar::serde_str")]
    rho: Scalar,
    #[serde(rename = "N", default)]
    n: usize,
}

#[derive(Deserialize)]
struct RatioFloorDoc {
    #[serde(with = "scalar::serde_str")]
    eps: Scalar,
    #[serde(default)]
    from: usize,
}

#[derive(Deserialize)]
struct CustomDoc {
    coeffs: Vec<String>,
    majorant: MajorantDoc,
    ratio_floor: Option<RatioFloorDoc>,
}

/// `poly:a0,a1,...`, `geom:λ`, `exp`, `gauss:λ` or `custom:<path>`.
pub fn parse_series(spec: &str) -> Result<PowerSeries> {
    let (family, arg) = match spec.split_once(':') {
        Some((f, a)) => (f, Some(a)),
        None => (spec, None),
    };
    match (family, arg) {
        ("poly", Some(list)) => {
            let coeffs = list.split(',').map(scalar::parse).collect::<Result<Vec<_>>>()?;
            Ok(PowerSeries::polynomial(coeffs))
        }
        ("geom", Some(l)) => PowerSeries::geometric(scalar::parse(l)?),
        ("gauss", Some(l)) => PowerSeries::gaussian(scalar::parse(l)?),
        ("exp", None) => Ok(PowerSeries::exponential()),
        ("custom", Some(path)) => {
            let doc: CustomDoc = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            let coeffs = doc.coeffs.iter().map(|c| scalar::parse(c)).collect::<Result<Vec<_>>>()?;
            PowerSeries::custom(
                coeffs,
                Majorant {
                    c: doc.majorant.c,
                    rho: doc.majorant.rho,
                    from: doc.majorant.n,
                },
                doc.ratio_floor.map(|r| RatioFloor { eps: r.eps, from: r.from }),
                spec,
            )
        }
        _ => Err(Error::InvalidSeries(format!("unknown series {spec:?}"))),
    }
}

/// Budget from [`BUDGET_ENV`], or `default` when unset.
pub fn budget_from_env(default: u64) -> Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{BUDGET_ENV}={v:?} is not a count"))),
        Err(_) => Ok(default),
    }
}

/// A rational written exactly when small, always with its logarithm.
#[derive(Debug, Serialize)]
pub struct BigValue {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub ln: f64,
}

impl BigValue {
    pub fn scalar(x: &Scalar) -> Self {
        Self {
            exact: (scalar::bit_size(x) <= MAX_EXACT_BITS).then(|| scalar::format(x)),
            ln: scalar::ln_abs(x),
        }
    }

    pub fn count(n: &BigUint) -> Self {
        Self {
            exact: (n.bits() <= MAX_EXACT_BITS).then(|| n.to_string()),
            ln: scalar::ln_biguint(n),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EnclosureDoc {
    pub series: String,
    pub tol: String,
    pub terms: usize,
    pub r: String,
    pub outer: bool,
    intervals: Vec<(String, String)>,
}

impl EnclosureDoc {
    pub fn new(f: &PowerSeries, tol: &Scalar, t: &Truncation, outer: bool) -> Self {
        Self {
            series: f.label().to_string(),
            tol: scalar::format(tol),
            terms: t.terms,
            r: scalar::format(&t.radius),
            outer,
            intervals: set_doc(&t.set).intervals,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CapacityRow {
    pub s: f64,
    pub log_bound: f64,
    pub normalized: f64,
}

#[derive(Debug, Serialize)]
pub struct CoverDoc {
    pub series: String,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub eps: BigValue,
    pub lazy: bool,
    pub count_bound: BigValue,
    pub diam_bound: BigValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<(String, String)>>,
    pub capacity: Vec<CapacityRow>,
}

impl CoverDoc {
    pub fn new(f: &PowerSeries, g: &GridSpec, cover: &Cover, capacity: Vec<CapacityRow>) -> Self {
        Self {
            series: f.label().to_string(),
            n: g.n(),
            m: g.m(),
            eps: BigValue::scalar(g.eps()),
            lazy: cover.is_lazy(),
            count_bound: BigValue::count(cover.count_bound()),
            diam_bound: BigValue::scalar(cover.diam_bound()),
            intervals: cover.intervals().map(|ivs| {
                ivs.iter()
                    .map(|iv| (scalar::format(iv.lo()), scalar::format(iv.hi())))
                    .collect()
            }),
            capacity,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct NoCertificateDoc {
    pub certified: bool,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct GapChainDoc<'a> {
    pub requested_from: usize,
    pub i0: usize,
    pub rows: &'a [ChainRow],
    pub prefix_checks_hold: bool,
}

impl<'a> GapChainDoc<'a> {
    pub fn new(r: &'a GapChainReport) -> Self {
        Self {
            requested_from: r.requested_from,
            i0: r.i0,
            rows: &r.rows,
            prefix_checks_hold: r.prefix_checks.iter().all(|c| c.holds),
        }
    }
}

/// `n`, kind and value of a gap trace as TSV, with a header line.
pub fn trace_tsv(rows: &[TraceRow]) -> String {
    let mut out = String::from("n\tkind\tgap\n");
    for r in rows {
        let (kind, value) = match &r.gap {
            GapValue::Exact(g) => ("exact", scalar::format(g)),
            GapValue::AtMost(g) => ("at-most", scalar::format(g)),
            GapValue::Unresolved => ("unresolved", String::from("-")),
        };
        out.push_str(&format!("{}\t{kind}\t{value}\n", r.n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::scalar::{int, ratio};

    #[test]
    fn parse_set_examples() {
        let a = parse_set(r#"{"intervals":[["0","1"]]}"#).unwrap();
        assert_eq!(a, CompactSet::unit_interval());
        let b = parse_set(r#"{"intervals":[["1/2","1/2"],["0","1/4"]]}"#).unwrap();
        let expected = CompactSet::normalize(vec![
            Interval::new(int(0), ratio(1, 4)).unwrap(),
            Interval::point(ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(b, expected);
        assert!(matches!(parse_set(r#"{"intervals":[]}"#), Err(Error::EmptySet)));
        assert!(parse_set(r#"{"intervals":[["1","0"]]}"#).is_err());
        assert!(parse_set(r#"{"intervals":[["0.5","1"]]}"#).is_err());
        assert!(parse_set(r#"{"intervals":[["0","1"]],"note":"x"}"#).is_ok());
    }

    #[test]
    fn set_round_trip() {
        let a = CompactSet::from_points([ratio(-2, 6), ratio(7, 3)]).unwrap();
        let json = set_to_json(&a);
        assert!(json.contains("\"-1/3\""));
        assert_eq!(parse_set(&json).unwrap(), a);
    }

    #[test]
    fn parse_series_examples() {
        let g = parse_series("geom:1/2").unwrap();
        assert_eq!(g, PowerSeries::geometric(ratio(1, 2)).unwrap());
        let p = parse_series("poly:1,-2,1").unwrap();
        assert_eq!(p.coefficient(1).unwrap(), int(-2));
        assert_eq!(p.label(), "poly:1,-2,1");
        assert!(parse_series("geom:3/2").is_err());
        assert!(parse_series("exp").is_ok());
        assert!(parse_series("gauss:1/2").is_ok());
        assert!(parse_series("sin").is_err());
        assert!(parse_series("exp:1").is_err());
    }

    #[test]
    fn custom_series_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.json");
        std::fs::write(
            &path,
            r#"{"coeffs":["1","1/2","1/4"],"majorant":{"C":"1","rho":"1/2","N":0},"ratio_floor":{"eps":"1/3"}}"#,
        )
        .unwrap();
        let f = parse_series(&format!("custom:{}", path.display())).unwrap();
        assert_eq!(f.coefficient(2).unwrap(), ratio(1, 4));
        assert!(f.ratio_floor().is_some());

        std::fs::write(&path, r#"{"coeffs":["1"],"majorant":{"C":"1","rho":"1","N":0}}"#).unwrap();
        assert!(parse_series(&format!("custom:{}", path.display())).is_err());
    }

    #[test]
    fn big_values_fall_back_to_logs() {
        let tiny = scalar::pow(&ratio(1, 2), 10_000);
        let v = BigValue::scalar(&tiny);
        assert!(v.exact.is_none());
        assert!((v.ln + 10_000.0 * 2f64.ln()).abs() < 1e-6);
        assert_eq!(BigValue::scalar(&ratio(1, 4)).exact.as_deref(), Some("1/4"));
    }
}
