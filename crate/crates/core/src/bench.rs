//! Timing harness over seeded random instances.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::theorem1_bound;
use crate::error::{Error, Result};
use crate::generate;
use crate::greedy::greedy_solve;
use crate::hypergraph::Hypergraph;
use crate::lambda::RationalLambda;
use crate::lp;

pub const CSV_HEADER: &str = "instance,n,m,Δ,f,λ,greedy_size,τ*,bound,time_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// n up to 1000, m up to 5000, f up to 8.
    Default,
    /// A few seconds' worth, for smoke tests.
    Small,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Suite::Default),
            "small" => Ok(Suite::Small),
            _ => Err(Error::Domain(format!(
                "unknown suite {s:?}; expected default or small"
            ))),
        }
    }
}

impl Suite {
    fn sizes(self) -> &'static [(usize, usize)] {
        match self {
            Suite::Default => &[(100, 500), (200, 1000), (500, 2500), (1000, 5000)],
            Suite::Small => &[(20, 40), (50, 100)],
        }
    }

    fn folds(self) -> &'static [u32] {
        match self {
            Suite::Default => &[1, 2, 4, 8],
            Suite::Small => &[1, 2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub f: u32,
    pub lambda: String,
    pub greedy_size: u64,
    pub tau_star: f64,
    pub bound: f64,
    pub time_ms: f64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.3}",
            self.instance,
            self.n,
            self.m,
            self.delta,
            self.f,
            self.lambda,
            self.greedy_size,
            self.tau_star,
            self.bound,
            self.time_ms
        )
    }

    /// `max{ln Δ, f}·Δ·n·m`.
    pub fn work(&self) -> f64 {
        let ln_delta = (self.delta as f64).ln();
        ln_delta.max(f64::from(self.f)) * self.delta as f64 * self.n as f64 * self.m as f64
    }
}

fn bench_instance(
    name: String,
    h: &Hypergraph,
    folds: &[u32],
    lambda: RationalLambda,
) -> Result<Vec<BenchRow>> {
    let delta = h.max_degree()?;
    let tau_star = lp::tau_star(h)?;
    folds
        .iter()
        .map(|&f| {
            let start = Instant::now();
            let (set, _) = greedy_solve(h, f, lambda)?;
            let time_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(BenchRow {
                instance: name.clone(),
                n: h.vertex_count(),
                m: h.edge_count(),
                delta,
                f,
                lambda: lambda.to_string(),
                greedy_size: set.size(),
                tau_star,
                bound: theorem1_bound(tau_star, delta, f, lambda.to_f64())?,
                time_ms,
            })
        })
        .collect()
}

/// One row per (instance, f, λ), in suite order.
pub fn run_suite(suite: Suite, lambdas: &[RationalLambda], seed: u64) -> Result<Vec<BenchRow>> {
    let jobs: Vec<(usize, usize, RationalLambda)> = suite
        .sizes()
        .iter()
        .flat_map(|&(n, m)| lambdas.iter().map(move |&l| (n, m, l)))
        .collect();
    let rows: Vec<Vec<BenchRow>> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(n, m, lambda))| {
            let instance_seed = seed.wrapping_add(i as u64);
            let h = generate::random(n, m, 1, 8, instance_seed)?;
            bench_instance(
                format!("random-n{n}-m{m}-s{instance_seed}"),
                &h,
                suite.folds(),
                lambda,
            )
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        writeln!(out, "{}", row.to_csv()).expect("writing to a String");
    }
    out
}

/// Least-squares slope of `ln time_ms` against `ln work()`. Rows faster
/// than `min_ms` are dropped as timer noise. `None` with fewer than two
/// usable rows.
pub fn fit_exponent(rows: &[BenchRow], min_ms: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.time_ms >= min_ms && r.work() > 0.0)
        .map(|r| (r.work().ln(), r.time_ms.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
