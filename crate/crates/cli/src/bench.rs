//! Benchmark harness for the W_n family: times both algorithms per n and
//! emits one CSV row each.
//!
//! The Smith lane always completes. The submatrix lane runs under a
//! cooperative per-run deadline (checked between submatrices) and the
//! group-enumeration cap; exhausting either budget marks the cell
//! "timeout". Everything except the timing columns is deterministic.

use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use gwmax_core::gmax::{gmax_smith, gmax_submatrix_instrumented, SubmatrixOptions};
use gwmax_core::polynomial::{build_wn, exponent_matrix};
use gwmax_core::qz::DEFAULT_GROUP_CAP;
use gwmax_core::Error;

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    /// Per-run budget for the submatrix lane.
    pub timeout: Duration,
    /// Cap on intermediate group enumerations in the submatrix lane.
    pub group_cap: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            timeout: Duration::from_secs(10),
            group_cap: DEFAULT_GROUP_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LaneOutcome {
    Completed { ms: f64 },
    TimedOut,
}

impl LaneOutcome {
    pub fn completed(&self) -> bool {
        matches!(self, LaneOutcome::Completed { .. })
    }

    fn csv_cell(&self) -> String {
        match self {
            LaneOutcome::Completed { ms } => format!("{ms:.3}"),
            LaneOutcome::TimedOut => "timeout".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub n: u64,
    pub m: usize,
    pub norm_a: u64,
    pub t_submatrix: LaneOutcome,
    pub t_smith_ms: f64,
    pub submatrices_visited: u64,
    pub group_order: BigUint,
    /// Not a CSV column; recorded for assertions on the early-exit claim.
    pub early_exit: bool,
}

pub fn run_bench(ns: &[u64], cfg: &BenchConfig) -> anyhow::Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let poly = build_wn(n).context("building the W_n input")?;
        let a = exponent_matrix(&poly)?;
        let norm_a = a
            .norm()
            .to_u64()
            .expect("the family's largest exponent is 2n");

        let t0 = Instant::now();
        let smith = gmax_smith(&a)?;
        let t_smith_ms = t0.elapsed().as_secs_f64() * 1e3;

        let opts = SubmatrixOptions {
            group_cap: cfg.group_cap,
            deadline: Some(Instant::now() + cfg.timeout),
        };
        let t1 = Instant::now();
        let (res, stats) = gmax_submatrix_instrumented(&a, opts);
        let t_submatrix = match res {
            Ok(r) => {
                if r.order != smith.order {
                    bail!(
                        "algorithms disagree on the group order for n = {n}: {} vs {}",
                        r.order,
                        smith.order
                    );
                }
                LaneOutcome::Completed {
                    ms: t1.elapsed().as_secs_f64() * 1e3,
                }
            }
            Err(Error::Timeout { .. }) | Err(Error::GroupTooLarge { .. }) => LaneOutcome::TimedOut,
            Err(e) => return Err(e.into()),
        };

        rows.push(BenchRow {
            n,
            m: a.rows(),
            norm_a,
            t_submatrix,
            t_smith_ms,
            submatrices_visited: stats.visited,
            group_order: smith.order,
            early_exit: stats.early_exit,
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,m,norm_a,t_submatrix_ms,t_smith_ms,submatrices_visited,group_order\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.3},{},{}\n",
            r.n,
            r.m,
            r.norm_a,
            r.t_submatrix.csv_cell(),
            r.t_smith_ms,
            r.submatrices_visited,
            r.group_order
        ));
    }
    out
}
