//! Runtime percentiles of `equiv_complete` on random automata.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wautom_core::control::{Budget, CancelToken};
use wautom_core::semiring::SemiringRef;
use wautom_core::wa::{equiv_complete, Status, WaError};

use crate::random::{gen_random, RandomSpec};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub states: Vec<usize>,
    pub transition_probability: f64,
    pub alphabet_size: usize,
    pub runs: usize,
    pub percentiles: Vec<f64>,
    pub timeout: Duration,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PercentileValue {
    pub percentile: f64,
    /// `None` when the order statistic is a timed-out run.
    pub millis: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub states: usize,
    /// Per-run wall time in milliseconds; `None` for a timeout.
    pub runtimes: Vec<Option<f64>>,
    pub percentiles: Vec<PercentileValue>,
    pub timeouts: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub semiring: String,
    pub transition_probability: f64,
    pub runs: usize,
    pub timeout_ms: u128,
    pub rows: Vec<BenchRow>,
    /// Set when an interrupt stopped the benchmark early.
    pub interrupted: bool,
}

/// Value at the `ceil(p/100 · n)`-th order statistic (1-based) of the
/// sorted runtimes; timeouts sort last.
pub fn percentile(runtimes: &[Option<f64>], p: f64) -> Option<f64> {
    if runtimes.is_empty() {
        return None;
    }
    let mut sorted: Vec<f64> = runtimes.iter().map(|r| r.unwrap_or(f64::INFINITY)).collect();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len();
    let rank = ((p / 100.0) * n as f64).ceil() as usize;
    let v = sorted[rank.clamp(1, n) - 1];
    v.is_finite().then_some(v)
}

/// Runs the configurations sequentially. Parsing and generation are not
/// timed, only the call to `equiv_complete`.
pub fn bench(sr: SemiringRef, config: &BenchConfig, interrupt: &CancelToken) -> Result<BenchReport, WaError> {
    let mut seeds = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows = Vec::new();
    let mut interrupted = false;
    'outer: for &n in &config.states {
        let mut runtimes = Vec::with_capacity(config.runs);
        for _ in 0..config.runs {
            let spec = RandomSpec {
                states: n,
                transition_probability: config.transition_probability,
                alphabet_size: config.alphabet_size,
                seed: seeds.next_u64(),
            };
            let aut = gen_random(&spec, sr.clone());
            let cancel = interrupt.clone().with_deadline(Instant::now() + config.timeout);
            let budget = Budget { max_steps: u64::MAX, ..Budget::default() }.with_cancel(cancel);
            let start = Instant::now();
            let report = equiv_complete(&aut, &budget)?;
            let elapsed = start.elapsed();
            if interrupt.is_cancelled() {
                interrupted = true;
                break 'outer;
            }
            runtimes.push(match report.status {
                Status::Completed => Some(elapsed.as_secs_f64() * 1000.0),
                Status::BudgetExhausted => None,
            });
        }
        rows.push(row(n, runtimes, &config.percentiles));
    }
    Ok(BenchReport {
        semiring: sr.name().to_string(),
        transition_probability: config.transition_probability,
        runs: config.runs,
        timeout_ms: config.timeout.as_millis(),
        rows,
        interrupted,
    })
}

fn row(states: usize, runtimes: Vec<Option<f64>>, percentiles: &[f64]) -> BenchRow {
    let percentiles =
        percentiles.iter().map(|&p| PercentileValue { percentile: p, millis: percentile(&runtimes, p) }).collect();
    let timeouts = runtimes.iter().filter(|r| r.is_none()).count();
    BenchRow { states, runtimes, percentiles, timeouts }
}

fn fmt_pct(p: f64) -> String {
    if p.fract() == 0.0 {
        format!("{}%", p as i64)
    } else {
        format!("{p}%")
    }
}

/// One row per state count, one column per percentile.
pub fn render_table(report: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "semiring {}  p_Tr {}  runs {}  timeout {} ms",
        report.semiring, report.transition_probability, report.runs, report.timeout_ms
    );
    let mut header = format!("{:>6}", "|X|");
    if let Some(first) = report.rows.first() {
        for p in &first.percentiles {
            let _ = write!(header, " {:>10}", fmt_pct(p.percentile));
        }
    }
    let _ = write!(header, " {:>9}", "time-outs");
    let _ = writeln!(out, "{header}");
    for row in &report.rows {
        let _ = write!(out, "{:>6}", row.states);
        for p in &row.percentiles {
            let cell = match p.millis {
                Some(ms) => format!("{ms:.3}"),
                None => "time-out".to_string(),
            };
            let _ = write!(out, " {cell:>10}");
        }
        let _ = writeln!(out, " {:>9}", row.timeouts);
    }
    if report.interrupted {
        let _ = writeln!(out, "interrupted");
    }
    out
}
