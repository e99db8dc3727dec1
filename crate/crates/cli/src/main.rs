//! `maxcut`: evaluate, optimize and cross-check MAX-CUT performance formulas
//! for QAOA and threshold algorithms on high-girth regular graphs.

mod args;
mod cache;
mod output;
mod verify;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use maxcut_core::optimize::{
    optimize_qaoa1, optimize_qaoa2, optimize_threshold, sweep_window, DEFAULT_STARTS,
};
use maxcut_core::qaoa::{f1, f2};
use maxcut_core::threshold::threshold_improvement;
use maxcut_core::{CutStats, Qaoa2Angles, SweepConfig, SweepRecord, TauMode, TauWindow, ThresholdParams};
use rayon::prelude::*;
use serde_json::json;

use args::{parse_angles, parse_degree_range, parse_graph, parse_taus, parse_window, AnglesArg, GraphSpec};
use cache::{cached, Cache, CacheKey, CACHE_ENV};
use output::{write_csv, CompareRow, SweepRow};

#[derive(Parser)]
#[command(name = "maxcut", version, about = "MAX-CUT performance of QAOA and threshold algorithms on regular graphs of girth > 5")]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON-lines result cache (overrides $MAXCUT_CACHE).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one closed form; prints a JSON object.
    Eval(EvalArgs),
    /// Optimize over a degree range; writes CSV.
    Opt(OptArgs),
    /// Run an invariant suite; failures are printed as JSON lines.
    Verify(VerifyArgs),
    /// Scaled performance b of all four algorithms; writes CSV.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalAlgo {
    Qaoa1,
    Qaoa2,
    Threshold,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OptAlgo {
    Qaoa1,
    Qaoa2,
    Threshold,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    OracleQaoa,
    OracleThreshold,
    Mc,
    Reductions,
}

#[derive(Clone, Debug)]
struct Taus(Vec<u32>);

#[derive(Args)]
struct Search {
    /// Multistart count for QAOA2.
    #[arg(long, default_value_t = DEFAULT_STARTS)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict thresholds to tau1 = tau2.
    #[arg(long, conflicts_with = "free_taus")]
    equal_taus: bool,
    /// Search all (tau1, tau2) pairs (default only for D < 50).
    #[arg(long)]
    free_taus: bool,
    /// Threshold window D/2 + k sqrt(D), k in [kmin, kmax], used for D > 60.
    #[arg(long, value_parser = parse_window, value_name = "KMIN:KMAX")]
    window: Option<(f64, f64)>,
}

impl Search {
    fn config(&self) -> Result<SweepConfig> {
        let taus = if self.equal_taus {
            TauMode::Equal
        } else if self.free_taus {
            TauMode::Free
        } else {
            TauMode::Auto
        };
        let window = self.window.map(|(a, b)| TauWindow::new(a, b)).transpose()?;
        if self.starts == 0 {
            return Err(usage("--starts must be at least 1"));
        }
        Ok(SweepConfig { starts: self.starts, seed: self.seed, taus, window, ..SweepConfig::default() })
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(value_enum)]
    algorithm: EvalAlgo,
    #[arg(long)]
    d: u32,
    /// g1,b1,g2,b2 in radians (g,b for qaoa1), or "best".
    #[arg(long, value_parser = parse_angles, allow_hyphen_values = true)]
    angles: Option<AnglesArg>,
    /// t1 or t1,t2.
    #[arg(long, value_parser = |s: &str| parse_taus(s).map(Taus))]
    tau: Option<Taus>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    steps: Option<u8>,
    /// Multistart count when --angles best.
    #[arg(long, default_value_t = DEFAULT_STARTS)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OptArgs {
    #[arg(value_enum)]
    algorithm: OptAlgo,
    #[arg(long, value_parser = parse_degree_range, value_name = "A:B")]
    d_range: RangeInclusive<u32>,
    #[command(flatten)]
    search: Search,
    /// Output CSV (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, value_parser = parse_degree_range, value_name = "A:B")]
    d_range: RangeInclusive<u32>,
    #[command(flatten)]
    search: Search,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// cycle:N, heawood, or file:PATH.
    #[arg(long, value_parser = parse_graph, default_value = "heawood")]
    graph: GraphSpec,
    /// Angle tuples (oracle-qaoa), points per degree (reductions) or
    /// Monte-Carlo trials (mc).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Absolute tolerance; for mc, the allowed number of standard errors.
    #[arg(long)]
    tol: Option<f64>,
    /// Thresholds for mc (default: the free-tau optimum for the graph's D).
    #[arg(long, value_parser = |s: &str| parse_taus(s).map(Taus))]
    tau: Option<Taus>,
}

/// A command-line mistake detected after parsing; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn stats_json(algorithm: &str, s: &CutStats, params: serde_json::Value) -> String {
    json!({
        "algorithm": algorithm,
        "degree": s.degree,
        "cut_fraction": s.cut_fraction,
        "improvement": s.improvement,
        "scaled_b": s.scaled_b,
        "params": params,
    })
    .to_string()
}

fn qaoa2_key(d: u32, starts: usize, seed: u64) -> CacheKey {
    CacheKey::new("qaoa2", d, &json!({"starts": starts, "seed": seed}))
}

fn cmd_eval(a: &EvalArgs, cache: Option<&Cache>) -> Result<()> {
    let line = match a.algorithm {
        EvalAlgo::Qaoa1 => {
            let (g, b) = match &a.angles {
                Some(AnglesArg::Values(v)) => (v[0], v[1]),
                Some(AnglesArg::Best) => {
                    let r = cached(cache, CacheKey::new("qaoa1", a.d, &json!({})), || optimize_qaoa1(a.d))?;
                    let x = r.angles().expect("qaoa result");
                    (x.gamma1, x.beta1)
                }
                None => return Err(usage("eval qaoa1 needs --angles g,b")),
            };
            stats_json("qaoa1", &f1(a.d, g, b)?, json!({"gamma": g, "beta": b}))
        }
        EvalAlgo::Qaoa2 => {
            let angles = match &a.angles {
                Some(AnglesArg::Values(v)) if v.len() == 4 => Qaoa2Angles::new(v[0], v[1], v[2], v[3]),
                Some(AnglesArg::Values(_)) => return Err(usage("eval qaoa2 needs four angles g1,b1,g2,b2")),
                Some(AnglesArg::Best) => {
                    if a.starts == 0 {
                        return Err(usage("--starts must be at least 1"));
                    }
                    let r = cached(cache, qaoa2_key(a.d, a.starts, a.seed), || optimize_qaoa2(a.d, a.starts, a.seed))?;
                    r.angles().expect("qaoa result")
                }
                None => return Err(usage("eval qaoa2 needs --angles g1,b1,g2,b2")),
            };
            let [g1, b1, g2, b2] = angles.to_array();
            stats_json("qaoa2", &f2(a.d, &angles)?, json!({"gamma1": g1, "beta1": b1, "gamma2": g2, "beta2": b2}))
        }
        EvalAlgo::Threshold => {
            let Some(Taus(t)) = &a.tau else {
                return Err(usage("eval threshold needs --tau t1[,t2]"));
            };
            let steps = a.steps.unwrap_or(t.len() as u8);
            let p = match (steps, t.as_slice()) {
                (1, [t1]) => ThresholdParams::one_step(*t1),
                (2, [t1]) => ThresholdParams::two_step(*t1, *t1),
                (2, [t1, t2]) => ThresholdParams::two_step(*t1, *t2),
                _ => return Err(usage("--steps 1 takes a single --tau value")),
            };
            let s = threshold_improvement(a.d, &p)?;
            stats_json("threshold", &s, json!({"steps": p.steps, "taus": p.taus()}))
        }
    };
    println!("{line}");
    Ok(())
}

/// Optimizes the requested algorithms at one degree, consulting the cache.
fn sweep_degree(d: u32, cfg: &SweepConfig, cache: Option<&Cache>) -> Result<SweepRecord> {
    let window = sweep_window(d, cfg);
    let equal = cfg.taus.equal_at(d);
    let q1 = cfg
        .qaoa1
        .then(|| cached(cache, CacheKey::new("qaoa1", d, &json!({})), || optimize_qaoa1(d)))
        .transpose()?;
    let q2 = cfg
        .qaoa2
        .then(|| cached(cache, qaoa2_key(d, cfg.starts, cfg.seed), || optimize_qaoa2(d, cfg.starts, cfg.seed)))
        .transpose()?;
    let t1 = cfg
        .threshold1
        .then(|| {
            let key = CacheKey::new("threshold1", d, &json!({"window": window}));
            cached(cache, key, || optimize_threshold(d, 1, true, &window))
        })
        .transpose()?;
    let t2 = cfg
        .threshold2
        .then(|| {
            let key = CacheKey::new("threshold2", d, &json!({"equal": equal, "window": window}));
            cached(cache, key, || optimize_threshold(d, 2, equal, &window))
        })
        .transpose()?;
    Ok(SweepRecord::from_results(d, q1.as_ref(), q2.as_ref(), t1.as_ref(), t2.as_ref()))
}

fn sweep(range: &RangeInclusive<u32>, cfg: &SweepConfig, cache: Option<&Cache>) -> Result<Vec<SweepRecord>> {
    let degrees: Vec<u32> = range.clone().collect();
    // Collected in input order, so rows come out by ascending D.
    degrees.par_iter().map(|&d| sweep_degree(d, cfg, cache)).collect()
}

fn emit(out: &Option<PathBuf>, write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    match out {
        Some(p) => std::fs::write(p, &buf).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn cmd_opt(a: &OptArgs, cache: Option<&Cache>) -> Result<()> {
    let started = Instant::now();
    let base = a.search.config()?;
    let all = a.algorithm == OptAlgo::All;
    let cfg = SweepConfig {
        qaoa1: all || a.algorithm == OptAlgo::Qaoa1,
        qaoa2: all || a.algorithm == OptAlgo::Qaoa2,
        threshold1: all || a.algorithm == OptAlgo::Threshold,
        threshold2: all || a.algorithm == OptAlgo::Threshold,
        ..base
    };
    let records = sweep(&a.d_range, &cfg, cache)?;
    let rows: Vec<SweepRow> = records.iter().map(SweepRow::from).collect();
    emit(&a.out, |buf| write_csv(buf, &rows))?;
    let flagged: Vec<u32> = records.iter().filter(|r| r.window_violation).map(|r| r.degree).collect();
    eprintln!(
        "opt: {} rows for D = {}..={} in {:.2?}",
        rows.len(),
        a.d_range.start(),
        a.d_range.end(),
        started.elapsed()
    );
    if !flagged.is_empty() {
        eprintln!("warning: threshold optimum beyond the search window at D = {flagged:?}");
    }
    if let Some(c) = cache {
        eprintln!("cache: {} entries in {}", c.len(), c.path().display());
    }
    Ok(())
}

fn cmd_compare(a: &CompareArgs, cache: Option<&Cache>) -> Result<()> {
    let cfg = a.search.config()?;
    let records = sweep(&a.d_range, &cfg, cache)?;
    let rows: Vec<CompareRow> = records.iter().filter_map(CompareRow::from_record).collect();
    emit(&a.out, |buf| write_csv(buf, &rows))?;
    let ahead = rows.iter().filter(|r| r.b_thr2 > r.b_qaoa2).count();
    eprintln!("compare: threshold2 ahead of QAOA2 on {ahead} of {} degrees", rows.len());
    Ok(())
}

/// Returns whether every check passed.
fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let outcome = match a.suite {
        Suite::Reductions => verify::reductions(a.trials.unwrap_or(1000) as usize, a.seed, a.tol.unwrap_or(1e-12))?,
        Suite::OracleQaoa => {
            let g = verify::build_graph(&a.graph)?;
            verify::oracle_qaoa(&g, a.trials.unwrap_or(20) as usize, a.seed, a.tol.unwrap_or(1e-9))?
        }
        Suite::OracleThreshold => {
            let g = verify::build_graph(&a.graph)?;
            verify::oracle_threshold(&g, a.tol.unwrap_or(1e-12))?
        }
        Suite::Mc => {
            let g = verify::build_graph(&a.graph)?;
            let d = verify::girth_gate(&g)?;
            let params = match &a.tau {
                Some(Taus(t)) if t.len() == 1 => ThresholdParams::one_step(t[0]),
                Some(Taus(t)) => ThresholdParams::two_step(t[0], t[1]),
                None => optimize_threshold(d, 2, false, &TauWindow::default_for(d))?
                    .threshold_params()
                    .expect("threshold result"),
            };
            verify::mc(&g, &params, a.trials.unwrap_or(1_000_000), a.seed, a.tol.unwrap_or(4.0))?
        }
    };
    let mut stdout = std::io::stdout().lock();
    for f in &outcome.failures {
        writeln!(stdout, "{}", serde_json::to_string(f)?)?;
    }
    eprintln!("verify: {} checks, {} failed", outcome.checks, outcome.failures.len());
    Ok(outcome.failures.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let cache_path = cli.cache.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let cache = cache_path.as_deref().map(Cache::open).transpose()?;
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, cache.as_ref()).map(|_| true),
        Command::Opt(a) => cmd_opt(a, cache.as_ref()).map(|_| true),
        Command::Compare(a) => cmd_compare(a, cache.as_ref()).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(e) => {
            if let Some(r) = e.downcast_ref::<verify::Refused>() {
                println!("{}", json!({"check": "girth gate", "refused": r.0}));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
