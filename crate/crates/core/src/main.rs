use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use minkcalc::certificate::{self, CertificateOutcome};
use minkcalc::cover::{self, GridSpec};
use minkcalc::experiments;
use minkcalc::io::{self, CapacityRow, CoverDoc, EnclosureDoc, NoCertificateDoc};
use minkcalc::random::{self, RandomSetParams};
use minkcalc::scalar::{self, Scalar};
use minkcalc::series::{self, DEFAULT_TERM_BUDGET};
use minkcalc::{boxcount, Error};

#[derive(Parser)]
#[command(name = "minkcalc", version, about = "Exact Minkowski arithmetic and power-series images of compact sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enclosure of f<K> within a Hausdorff tolerance.
    Eval {
        #[arg(long)]
        series: String,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        tol: String,
        /// Emit S_n + [-r, r], which contains f<K>, instead of S_n.
        #[arg(long)]
        outer: bool,
        /// Round endpoints outward to multiples of 2^-G, adding 2^-G to r.
        #[arg(long, value_name = "G")]
        coarsen: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
        max_terms: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Box counts of f<K> at dyadic scales, with the log-log slope.
    Dim {
        #[arg(long)]
        series: String,
        #[arg(long)]
        set: PathBuf,
        /// Exponent range k1..k2 for scales 2^-k.
        #[arg(long)]
        scales: String,
        #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
        max_terms: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Grid cover of f<K> over the grid neighbourhood, with capacity bounds.
    Cover {
        #[arg(long)]
        series: String,
        #[arg(long)]
        n: usize,
        #[arg(long = "M")]
        m: Option<usize>,
        /// Maximum number of intervals to materialize.
        #[arg(long)]
        budget: Option<u64>,
        /// Comma-separated weights s for the capacity table.
        #[arg(long, default_value = "0.1,0.5,1")]
        s: String,
        #[command(flatten)]
        output: Output,
    },
    /// Interval certificate for f<{p,q}>.
    Cert {
        #[arg(long)]
        series: String,
        /// Pick p, q from this set.
        #[arg(long, conflicts_with_all = ["p", "q"])]
        set: Option<PathBuf>,
        #[arg(long, requires = "q")]
        p: Option<String>,
        #[arg(long, requires = "p")]
        q: Option<String>,
        #[arg(long, default_value_t = certificate::DEFAULT_HORIZON)]
        horizon: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Length of the longest bounded gap of a set.
    Gap {
        #[arg(long)]
        set: PathBuf,
    },
    /// Hausdorff distance between two sets.
    Dh {
        a: PathBuf,
        b: PathBuf,
    },
    /// Seeded random compact subset of [0,1].
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Retention probability p/q.
        #[arg(long, default_value = "1/2")]
        keep: String,
        /// Fattened grid subset instead of dyadic subdivision: n,M,eps.
        #[arg(long, value_name = "N,M,EPS")]
        grid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the reference experiments and print a summary.
    Demo {
        /// Directory for TSV tables.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(Error),
    Negative(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ToleranceUnreachable { .. } => Failure::Negative(e.to_string()),
            e => Failure::Input(e),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn emit(output: &Output, text: &str) -> CmdResult {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_scalar(s: &str) -> Result<Scalar, Failure> {
    Ok(scalar::parse(s)?)
}

fn bad_input(msg: String) -> Failure {
    Failure::Input(Error::InvalidArgument(msg))
}

fn cmd_eval(
    series_spec: &str,
    set: &Path,
    tol: &str,
    outer: bool,
    coarsen: Option<u32>,
    max_terms: usize,
    output: &Output,
) -> CmdResult {
    let f = io::parse_series(series_spec)?;
    let k = io::read_set(set)?;
    let tol = parse_scalar(tol)?;
    let mut t = if outer {
        series::outer_enclosure(&f, &k, &tol, max_terms)?
    } else {
        series::substitute(&f, &k, &tol, max_terms)?
    };
    if let Some(g) = coarsen {
        t.set = t.set.coarsen(g);
        t.radius += Scalar::new(1.into(), num_bigint::BigInt::from(1) << g);
    }
    emit(output, &io::to_json(&EnclosureDoc::new(&f, &tol, &t, outer)))
}

fn parse_range(s: &str) -> Result<(u32, u32), Failure> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| bad_input(format!("scales {s:?} must look like k1..k2")))?;
    let a: u32 = a.parse().map_err(|_| bad_input(format!("bad scale exponent {a:?}")))?;
    let b: u32 = b.parse().map_err(|_| bad_input(format!("bad scale exponent {b:?}")))?;
    if a < 1 || b <= a {
        return Err(bad_input(format!("need 1 <= k1 < k2, got {a}..{b}")));
    }
    Ok((a, b))
}

fn cmd_dim(series_spec: &str, set: &Path, scales: &str, max_terms: usize, output: &Output) -> CmdResult {
    let f = io::parse_series(series_spec)?;
    let k = io::read_set(set)?;
    let (a, b) = parse_range(scales)?;
    let est = boxcount::dim_estimate(&f, &k, &boxcount::dyadic_scales(a, b), max_terms)?;
    let mut tsv = String::from("delta\tcount\n");
    for row in &est.rows {
        tsv.push_str(&format!("{}\t{}\n", scalar::format(&row.delta), row.count));
    }
    tsv.push_str(&format!("# slope\t{:.6}\n", est.slope));
    emit(output, &tsv)
}

fn parse_weights(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|w| match w.trim().parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
            _ => Err(bad_input(format!("bad weight {w:?}"))),
        })
        .collect()
}

fn cmd_cover(series_spec: &str, n: usize, m: Option<usize>, budget: Option<u64>, s: &str, output: &Output) -> CmdResult {
    let f = io::parse_series(series_spec)?;
    let weights = parse_weights(s)?;
    let budget = match budget {
        Some(b) => b,
        None => io::budget_from_env(cover::DEFAULT_BUDGET)?,
    };
    let m = match m {
        Some(m) => m,
        None => cover::choose_m(&f, n)?,
    };
    let g = GridSpec::for_series(&f, n, m)?;
    let c = cover::cover_series(&f, &g, budget)?;
    let capacity = weights
        .iter()
        .map(|&s| CapacityRow {
            s,
            log_bound: cover::capacity_log_bound(&f, n, m, s),
            normalized: cover::normalized_capacity_bound(&f, n, m, s),
        })
        .collect();
    emit(output, &io::to_json(&CoverDoc::new(&f, &g, &c, capacity)))
}

fn cmd_cert(
    series_spec: &str,
    set: Option<&Path>,
    p: Option<&str>,
    q: Option<&str>,
    horizon: usize,
    output: &Output,
) -> CmdResult {
    let f = io::parse_series(series_spec)?;
    let pair = match (set, p, q) {
        (Some(path), _, _) => {
            let k = io::read_set(path)?;
            let Some(floor) = f.ratio_floor() else {
                return no_certificate(output, format!("{f} has no ratio floor"));
            };
            match certificate::find_close_pair(&k, &floor.eps) {
                Some(pq) => pq,
                None => {
                    return no_certificate(
                        output,
                        format!("no p < q in the set with (q-p)/q² < {}", scalar::format(&floor.eps)),
                    )
                }
            }
        }
        (None, Some(p), Some(q)) => (parse_scalar(p)?, parse_scalar(q)?),
        _ => return Err(bad_input("give --set or both --p and --q".into())),
    };
    match certificate::two_point_certificate(&f, &pair.0, &pair.1, horizon)? {
        CertificateOutcome::Certified(c) => emit(output, &io::to_json(&c)),
        CertificateOutcome::NotEstablished(reason) => no_certificate(output, reason),
    }
}

fn no_certificate(output: &Output, reason: String) -> CmdResult {
    let doc = NoCertificateDoc {
        certified: false,
        reason: reason.clone(),
    };
    emit(output, &io::to_json(&doc))?;
    Err(Failure::Negative(format!("no certificate: {reason}")))
}

fn cmd_random(seed: u64, depth: u32, keep: &str, grid: Option<&str>, output: &Output) -> CmdResult {
    let params = match grid {
        Some(spec) => {
            let fields: Vec<&str> = spec.split(',').collect();
            let [n, m, eps] = fields[..] else {
                return Err(bad_input(format!("grid {spec:?} must be n,M,eps")));
            };
            let n = n.parse().map_err(|_| bad_input(format!("bad n {n:?}")))?;
            let m = m.parse().map_err(|_| bad_input(format!("bad M {m:?}")))?;
            let mut params = RandomSetParams::grid_fattened(seed, GridSpec::new(n, m, parse_scalar(eps)?)?);
            (params.keep_num, params.keep_den) = parse_probability(keep)?;
            params
        }
        None => {
            let (num, den) = parse_probability(keep)?;
            RandomSetParams::cantor_like(seed, depth, num, den)
        }
    };
    emit(output, &io::set_to_json(&random::random_compact(&params)?))
}

fn parse_probability(s: &str) -> Result<(u64, u64), Failure> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    match (a.parse(), b.parse()) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        _ => Err(bad_input(format!("bad probability {s:?}"))),
    }
}

fn write_table(dir: Option<&Path>, name: &str, text: &str) -> CmdResult {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Input(e.into()))?;
        std::fs::write(dir.join(name), text).map_err(|e| Failure::Input(e.into()))?;
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_demo(out: Option<&Path>) -> CmdResult {
    let interval = experiments::interval_experiment()?;
    println!("[interval certificate] geom:1/2 on {{3/5, 4/5}}");
    match interval.certificate.certificate() {
        Some(c) => println!("  certificate issued, i0 = {} ({:?})", c.i0, c.tail_justification),
        None => println!("  no certificate"),
    }
    if let Some(row) = interval.trace.iter().find(|r| r.n == 30) {
        println!("  gap(S_30) {}", experiments::describe_gap(&row.gap));
    }
    println!(
        "  outer enclosure at tol 1e-6: {} part(s), {} terms",
        interval.enclosure.set.len(),
        interval.enclosure.terms
    );
    println!("  {}", verdict(interval.passed()));
    write_table(out, "gap_trace.tsv", &io::trace_tsv(&interval.trace))?;

    let capacity = experiments::capacity_experiment(&experiments::CAPACITY_WEIGHTS, experiments::CAPACITY_N_MAX)?;
    println!("[capacity collapse] {}", capacity.series);
    for (w, s) in capacity.weights.iter().enumerate() {
        let first = capacity.first_crossing[w].map_or("none".to_string(), |n| n.to_string());
        println!(
            "  s = {s}: first n below -1 is {first}; strictly decreasing on the grid from n = {}",
            capacity.monotone_tail_start(w)
        );
    }
    println!("  {}", verdict(capacity.passed()));
    write_table(out, "capacity.tsv", &experiments::capacity_tsv(&capacity))?;

    let dims = experiments::box_dim_experiment()?;
    println!("[box dimension] scales 2^-3 .. 2^-12");
    println!("  x on [0,1]: slope {:.4}", dims.identity_interval.slope);
    println!("  x on {{1/2}}: slope {:.4}", dims.identity_point.slope);
    println!("  geom:1/2 on {{3/5, 4/5}}: slope {:.4}", dims.geometric_two_point.slope);
    println!("  {}", verdict(dims.passed()));

    let all = interval.passed() && capacity.passed() && dims.passed();
    println!("summary: {}", verdict(all));
    if all {
        Ok(())
    } else {
        Err(Failure::Negative("demo experiments failed".into()))
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Eval {
            series,
            set,
            tol,
            outer,
            coarsen,
            max_terms,
            output,
        } => cmd_eval(&series, &set, &tol, outer, coarsen, max_terms, &output),
        Command::Dim {
            series,
            set,
            scales,
            max_terms,
            output,
        } => cmd_dim(&series, &set, &scales, max_terms, &output),
        Command::Cover {
            series,
            n,
            m,
            budget,
            s,
            output,
        } => cmd_cover(&series, n, m, budget, &s, &output),
        Command::Cert {
            series,
            set,
            p,
            q,
            horizon,
            output,
        } => cmd_cert(&series, set.as_deref(), p.as_deref(), q.as_deref(), horizon, &output),
        Command::Gap { set } => {
            println!("{}", scalar::format(&io::read_set(&set)?.gap()));
            Ok(())
        }
        Command::Dh { a, b } => {
            let d = io::read_set(&a)?.hausdorff_distance(&io::read_set(&b)?);
            println!("{}", scalar::format(&d));
            Ok(())
        }
        Command::Random {
            seed,
            depth,
            keep,
            grid,
            output,
        } => cmd_random(seed, depth, &keep, grid.as_deref(), &output),
        Command::Demo { out } => cmd_demo(out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(msg)) => {
            eprintln!("minkcalc: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("minkcalc: {e}");
            ExitCode::from(2)
        }
    }
}
