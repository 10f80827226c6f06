//! Scaling benchmark over the families, with CSV output.

use std::io;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::families::Family;
use crate::linear::{check_linear, LinearOptions};
use crate::report::{Reason, Verdict};

pub const CSV_HEADER: &str = "family,k,links,elimTrials,totalOps,timeNs,verdict";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub family: String,
    pub k: usize,
    pub links: usize,
    #[serde(rename = "elimTrials")]
    pub elim_trials: u64,
    #[serde(rename = "totalOps")]
    pub total_ops: u64,
    /// Fastest of the timed repetitions; informative only.
    #[serde(rename = "timeNs")]
    pub time_ns: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{family} k={k}: rejected ({reason})")]
    Rejected {
        family: Family,
        k: usize,
        reason: Reason,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Builds the family member and checks it `reps` times. Every member is a
/// net, so a rejection is an error. The reference checker is not consulted:
/// its dependency digraph grows quadratically on some families.
pub fn bench_instance(family: Family, k: usize, reps: usize) -> Result<BenchRecord, BenchError> {
    let ps = family.build(k);
    let mut best = u64::MAX;
    let mut report = None;
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        let r = check_linear(&ps, LinearOptions::default());
        best = best.min(t.elapsed().as_nanos() as u64);
        report = Some(r);
    }
    let report = report.expect("at least one repetition");
    if !report.verdict.is_yes() {
        return Err(BenchError::Rejected {
            family,
            k,
            reason: report.reason,
        });
    }
    Ok(BenchRecord {
        family: family.name().to_string(),
        k,
        links: ps.num_links(),
        elim_trials: report.counters.elimination_trials,
        total_ops: report.counters.total_ops(),
        time_ns: best,
        verdict: report.verdict,
    })
}

/// One record per family and size, in the given order.
pub fn run_bench(
    families: &[Family],
    ks: &[usize],
    reps: usize,
) -> Result<Vec<BenchRecord>, BenchError> {
    let mut out = Vec::with_capacity(families.len() * ks.len());
    for &f in families {
        for &k in ks {
            out.push(bench_instance(f, k, reps)?);
        }
    }
    Ok(out)
}

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
