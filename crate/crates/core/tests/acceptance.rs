//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use minkcalc::certificate;
use minkcalc::cover::{self, GridSpec};
use minkcalc::experiments;
use minkcalc::io;
use minkcalc::random::{self, RandomSetParams};
use minkcalc::rng::SplitMix64;
use minkcalc::scalar::{self, int, ratio};
use minkcalc::series::PowerSeries;
use minkcalc::{CompactSet, Interval, Scalar};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rand_rational(rng: &mut SplitMix64, lo: i64, hi: i64, max_den: u64) -> Scalar {
    let den = 1 + rng.below(max_den) as i64;
    let span = ((hi - lo) * den) as u64 + 1;
    ratio(lo * den + rng.below(span) as i64, den)
}

fn rand_unit_interval(rng: &mut SplitMix64) -> Interval {
    let a = rand_rational(rng, 0, 1, 64);
    let b = rand_rational(rng, 0, 1, 64);
    if a <= b {
        Interval::new(a, b).unwrap()
    } else {
        Interval::new(b, a).unwrap()
    }
}

fn rand_union(rng: &mut SplitMix64, max_parts: u64) -> CompactSet {
    let parts = 1 + rng.below(max_parts);
    CompactSet::normalize((0..parts).map(|_| rand_unit_interval(rng)).collect()).unwrap()
}

fn points_of(values: impl IntoIterator<Item = Scalar>) -> CompactSet {
    CompactSet::from_points(values).unwrap()
}

fn criterion_1() -> Check {
    let mut rng = SplitMix64::new(1);
    let mut sets = Vec::new();
    for _ in 0..200 {
        let size = 1 + rng.below(5);
        let pts: BTreeSet<Scalar> = (0..size).map(|_| rand_rational(&mut rng, -1, 1, 64)).collect();
        sets.push(pts);
    }
    for (idx, a) in sets.iter().enumerate() {
        let b = &sets[(idx * 7 + 3) % sets.len()];
        let (ca, cb) = (points_of(a.iter().cloned()), points_of(b.iter().cloned()));
        let sums: BTreeSet<Scalar> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
        let prods: BTreeSet<Scalar> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        ensure(ca.sum(&cb) == points_of(sums), || format!("sum mismatch at set {idx}"))?;
        ensure(ca.product(&cb) == points_of(prods), || format!("product mismatch at set {idx}"))?;
        let mut power: BTreeSet<Scalar> = BTreeSet::from([int(1)]);
        for n in 0..=4 {
            ensure(ca.power(n) == points_of(power.iter().cloned()), || {
                format!("power {n} mismatch at set {idx}")
            })?;
            power = power.iter().flat_map(|x| a.iter().map(move |y| x * y)).collect();
        }
    }
    Ok("200 sets: sums, products and powers n <= 4 match enumeration".into())
}

fn criterion_2() -> Check {
    let mut rng = SplitMix64::new(2);
    for k in 0..1000 {
        let (i, j) = (rand_unit_interval(&mut rng), rand_unit_interval(&mut rng));
        let t = rand_rational(&mut rng, -2, 2, 64);
        let (ci, cj) = (CompactSet::from_interval(i.clone()), CompactSet::from_interval(j.clone()));
        ensure(ci.shift(&t).diam() == i.diam(), || format!("translation diam, pair {k}"))?;
        ensure(ci.scale(&t).diam() == scalar::abs(&t) * i.diam(), || format!("scaling diam, pair {k}"))?;
        ensure(ci.sum(&cj).diam() == i.diam() + j.diam(), || format!("sum diam, pair {k}"))?;
        ensure(ci.product(&cj).diam() <= i.diam() + j.diam(), || format!("product diam, pair {k}"))?;
    }
    let mut accepted = 0;
    let mut drawn = 0;
    while accepted < 1000 {
        drawn += 1;
        let a = rand_union(&mut rng, 6);
        let b = rand_union(&mut rng, 6);
        if a.gap() > b.diam() {
            continue;
        }
        accepted += 1;
        ensure(a.sum(&b).gap() <= b.gap(), || format!("gap bound fails for {a} and {b}"))?;
    }
    for k in 0..500 {
        let a = rand_union(&mut rng, 4);
        let b = rand_union(&mut rng, 4);
        let c = rand_union(&mut rng, 4);
        let ab = a.hausdorff_distance(&b);
        ensure(ab == b.hausdorff_distance(&a), || format!("symmetry, triple {k}"))?;
        ensure(ab <= a.hausdorff_distance(&c) + c.hausdorff_distance(&b), || format!("triangle, triple {k}"))?;
        ensure((ab == int(0)) == (a == b), || format!("identity, triple {k}"))?;
        ensure(a.hausdorff_distance(&a.clone()) == int(0), || format!("self distance, triple {k}"))?;
    }
    Ok(format!("1000 interval pairs, 1000 gap pairs ({drawn} drawn), 500 metric triples"))
}

fn criterion_3() -> Check {
    let mut rng = SplitMix64::new(3);
    let mut t = 0;
    while t < 100 {
        let lambda = rand_rational(&mut rng, -1, 1, 32);
        let p = rand_rational(&mut rng, 0, 1, 32);
        let q = rand_rational(&mut rng, 0, 1, 32);
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        if p == q || p == int(0) || lambda == int(0) || scalar::abs(&lambda) >= int(1) {
            continue;
        }
        t += 1;
        let f = PowerSeries::geometric(lambda.clone()).unwrap();
        let k = points_of([p.clone(), q.clone()]);
        for i in 1..=15 {
            let a = scalar::abs(&scalar::pow(&lambda, i));
            let set = k.power(i).scale(&scalar::pow(&lambda, i));
            let diam = &a * (scalar::pow(&q, i) - scalar::pow(&p, i));
            let gap = &a * (&q - &p) * scalar::pow(&q, i - 1);
            ensure(set.diam() == diam && set.gap() == gap, || format!("triple {t}, i = {i}"))?;
            let (d, g) = certificate::two_point_terms(&f, &p, &q, i).map_err(|e| e.to_string())?;
            ensure(d == diam && g == gap, || format!("library closed form, triple {t}, i = {i}"))?;
        }
    }
    Ok("closed forms agree for i <= 15 on 100 random triples".into())
}

fn criterion_4() -> Check {
    // diam A_{i+1} / gap A_i = 1.6·(1 - (3/4)^(i+1)) for i >= 1; A_0 has no gap.
    let ratio_at = |i: i32| 1.6 * (1.0 - 0.75f64.powi(i + 1));
    let expected_i0 = (1..).find(|&i| ratio_at(i) >= 1.0).unwrap() as usize;
    let e = experiments::interval_experiment().map_err(|e| e.to_string())?;
    let i0 = e.i0().ok_or("no certificate issued")?;
    ensure(i0 == expected_i0 && i0 == 3, || format!("i0 = {i0}, expected {expected_i0}"))?;
    let g = e.gap_bound(30).ok_or("gap of S_30 unresolved")?.clone();
    let million = Scalar::new(1.into(), 1_000_000.into());
    ensure(g < million, || format!("gap(S_30) bound {} not below 1e-6", scalar::format(&g)))?;
    ensure(e.enclosure.set.is_interval(), || format!("enclosure has {} parts", e.enclosure.set.len()))?;
    Ok(format!(
        "i0 = 3, gap(S_30) <= {:.3e}, enclosure at 1e-6 is one interval ({} terms)",
        scalar::ln_abs(&g).exp(),
        e.enclosure.terms
    ))
}

fn criterion_5() -> Check {
    let e = experiments::capacity_experiment(&experiments::CAPACITY_WEIGHTS, experiments::CAPACITY_N_MAX)
        .map_err(|e| e.to_string())?;
    // Independent evaluation of M + s·ln(4R_n)/(n·ln 2n) for a_i = 2^(-i²).
    let normalized = |n: usize, s: f64| {
        let nf = n as f64;
        let ln_r = -nf * nf * 2f64.ln() - (1.0 - 0.25f64.powf(nf)).ln();
        let t = -(4f64.ln() + ln_r) / (nf * (2.0 * nf).ln());
        let m = (t.sqrt().floor() as usize).clamp(1, n + 1) as f64;
        m - s * t
    };
    let crossing = e.first_crossing[0].ok_or("s = 0.1 never crosses -1")?;
    ensure(crossing <= 5000 && crossing == 1241, || format!("s = 0.1 crosses at n = {crossing}"))?;
    ensure(normalized(1241, 0.1) < -1.0 && (1..1241).all(|n| normalized(n, 0.1) >= -1.0), || {
        "independent evaluation disagrees about n = 1241".into()
    })?;
    ensure(e.decreasing_after_crossing(0), || "s = 0.1 not strictly decreasing after crossing".into())?;
    for (w, s) in e.weights.iter().enumerate() {
        ensure(e.first_crossing[w].is_some(), || format!("s = {s} never crosses by 1e5"))?;
    }
    ensure(e.passed(), || "monotone tails do not cover the last decade".into())?;
    let f = PowerSeries::gaussian(ratio(1, 2)).unwrap();
    let n = 2000;
    let m = cover::choose_m(&f, n).map_err(|e| e.to_string())?;
    let g = GridSpec::for_series(&f, n, m).map_err(|e| e.to_string())?;
    let c = cover::cover_series(&f, &g, cover::DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(c.is_lazy(), || "n = 2000 cover was materialized".into())?;
    let nf = n as f64;
    ensure(c.ln_count_bound() <= nf * m as f64 * (2.0 * nf).ln(), || "count bound exceeds (2n)^(nM)".into())?;
    ensure(cover::normalized_capacity_bound(&f, n, m, 0.1) < -1.0, || "n = 2000 bound not below -1".into())?;
    let tails: Vec<String> = (0..e.weights.len())
        .map(|w| format!("s={}: cross {} / monotone from {}", e.weights[w], e.first_crossing[w].unwrap(), e.monotone_tail_start(w)))
        .collect();
    Ok(tails.join("; "))
}

fn multiset_count(i: usize, m: usize) -> usize {
    let mut num = 1usize;
    let mut den = 1usize;
    for t in 1..m {
        num *= i + t;
        den *= t;
    }
    num / den
}

fn criterion_6() -> Check {
    let mut rng = SplitMix64::new(6);
    let mut cases = 0;
    for seed in 0..100u64 {
        let m = 1 + rng.below(3) as usize;
        let eps = ratio(1, 2 * m as i64 + 1 + rng.below(20) as i64);
        let g = GridSpec::new(5, m, eps.clone()).map_err(|e| e.to_string())?;
        let k = random::random_compact(&RandomSetParams::grid_fattened(seed, g.clone())).map_err(|e| e.to_string())?;
        ensure(cover::in_grid_neighbourhood(&k, &g).unwrap(), || format!("seed {seed} not in grid neighbourhood"))?;
        for i in 1..=4 {
            let c = cover::cover_power(&g, i, 1_000_000);
            let ivs = c.intervals().ok_or("cover unexpectedly lazy")?;
            ensure(ivs.len() == multiset_count(i, m), || format!("seed {seed}, i = {i}: {} intervals", ivs.len()))?;
            ensure(c.count_bound() == &BigUint::from(ivs.len()), || "count bound differs".into())?;
            let limit = int(2 * i as i64) * &eps;
            ensure(ivs.iter().all(|iv| iv.diam() <= limit), || format!("seed {seed}, i = {i}: diameter"))?;
            ensure(c.covers(&k.power(i)) == Some(true), || format!("seed {seed}, i = {i}: not covered"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} power covers checked on 100 grid-fattened sets"))
}

fn criterion_7() -> Check {
    let e = experiments::box_dim_experiment().map_err(|e| e.to_string())?;
    for (row, k) in e.identity_interval.rows.iter().zip(3u32..) {
        ensure(row.count == BigUint::from((1u64 << k) + 1), || format!("count at 2^-{k}"))?;
    }
    let (a, b, c) = (
        e.identity_interval.slope,
        e.identity_point.slope,
        e.geometric_two_point.slope,
    );
    ensure((a - 1.0).abs() <= 0.05, || format!("interval slope {a}"))?;
    ensure(b == 0.0, || format!("point slope {b}"))?;
    ensure((c - 1.0).abs() <= 0.1, || format!("geometric slope {c}"))?;
    Ok(format!("slopes {a:.4}, {b}, {c:.4}"))
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_minkcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn criterion_8() -> Check {
    let demo = run_cli(&["demo"]);
    ensure(demo.status.code() == Some(0), || {
        format!("demo exited {:?}: {}", demo.status.code(), String::from_utf8_lossy(&demo.stdout))
    })?;
    let mut rng = SplitMix64::new(8);
    for k in 0..200 {
        let a = rand_union(&mut rng, 6).scale(&rand_rational(&mut rng, -3, 3, 64));
        let back = io::parse_set(&io::set_to_json(&a)).map_err(|e| e.to_string())?;
        ensure(back == a, || format!("round trip {k} changed the set"))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let outputs: Vec<Vec<u8>> = ["a.json", "b.json"]
        .iter()
        .map(|name| {
            let path = dir.path().join(name);
            let p = path.to_str().unwrap();
            let out = run_cli(&["random", "--seed", "42", "--depth", "9", "--out", p]);
            assert!(out.status.success());
            std::fs::read(path).unwrap()
        })
        .collect();
    ensure(outputs[0] == outputs[1], || "seeded outputs differ".into())?;
    let reparsed = io::parse_set(std::str::from_utf8(&outputs[0]).unwrap()).map_err(|e| e.to_string())?;
    let direct = random::random_compact(&RandomSetParams::cantor_like(42, 9, 1, 2)).map_err(|e| e.to_string())?;
    ensure(reparsed == direct, || "CLI random differs from library".into())?;
    Ok("demo exit 0, 200 round trips, byte-identical seeded output".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", criterion_1, 10),
        ("diameter, gap and metric identities", criterion_2, 30),
        ("two-point closed forms", criterion_3, 30),
        ("interval certificate experiment", criterion_4, 60),
        ("capacity collapse experiment", criterion_5, 10),
        ("grid machinery", criterion_6, 60),
        ("box-dimension sanity", criterion_7, 60),
        ("CLI end-to-end", criterion_8, 120),
    ];
    let mut failures = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.1?}, limit {limit}s"))
            }
        });
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS in {elapsed:.2?} - {detail}", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} ({name}): FAIL in {elapsed:.2?} - {why}", k + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} criterion/criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
