//! Command implementations behind the thin clap front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context};
use num_bigint::BigUint;
use num_rational::BigRational;

use gwmax_core::gmax::{
    brute_force_gmax_with_cap, gmax_smith_enumerated, gmax_smith, gmax_submatrix,
    GmaxResult, SubmatrixOptions,
};
use gwmax_core::mat::parse_matrix_text;
use gwmax_core::polynomial::{
    check_admissible, check_admissible_matrix, classify_invertible, enumerate_monomials,
    exponent_matrix, parse, ExponentMatrix, WeightSystem,
};
use gwmax_core::snf::{smith_normal_form, verify};
use gwmax_core::Error;

use crate::report::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algorithm {
    Smith,
    Submatrix,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Smith => "smith",
            Algorithm::Submatrix => "submatrix",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone)]
pub enum ComputeInput {
    Polynomial(String),
    MatrixFile(PathBuf),
}

#[derive(Debug, Clone, Copy)]
pub struct ComputeOpts {
    pub algorithm: Algorithm,
    pub enumerate: bool,
    pub force: bool,
    pub cap_group: u64,
    pub cap_oracle: u64,
    pub timeout: Option<Duration>,
}

/// Attach the flag that raises the exhausted budget.
fn flag_hint(e: Error) -> anyhow::Error {
    let hint = match &e {
        Error::GroupTooLarge { .. } => Some("--cap-group"),
        Error::OracleTooLarge { .. } => Some("--cap-oracle"),
        Error::TooManyMonomials { .. } => Some("--cap-monomials"),
        Error::Timeout { .. } => Some("--timeout"),
        _ => None,
    };
    match hint {
        Some(flag) => anyhow!("{e} (adjust {flag})"),
        None => e.into(),
    }
}

fn load_input(input: &ComputeInput) -> anyhow::Result<(String, ExponentMatrix, Option<gwmax_core::polynomial::Polynomial>)> {
    match input {
        ComputeInput::Polynomial(src) => {
            let p = parse(src)?;
            let a = exponent_matrix(&p)?;
            Ok((p.to_string(), a, Some(p)))
        }
        ComputeInput::MatrixFile(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let m = parse_matrix_text(&text)?;
            let desc = format!("{} ({}x{} matrix)", path.display(), m.rows(), m.cols());
            let a = ExponentMatrix::new(m)?;
            Ok((desc, a, None))
        }
    }
}

pub fn cmd_compute(input: &ComputeInput, opts: &ComputeOpts) -> anyhow::Result<RunReport> {
    let (desc, a, poly) = load_input(input)?;

    let report = match &poly {
        Some(p) => check_admissible(p),
        None => check_admissible_matrix(&a),
    };
    if !report.passes() && !opts.force {
        bail!("input fails admissibility checks (pass --force to compute anyway)\n{report}");
    }

    let t0 = Instant::now();
    let result: GmaxResult = match opts.algorithm {
        Algorithm::Smith => {
            if opts.enumerate {
                gmax_smith_enumerated(&a, opts.cap_group).map_err(flag_hint)?
            } else {
                gmax_smith(&a).map_err(flag_hint)?
            }
        }
        Algorithm::Submatrix => {
            let sub_opts = SubmatrixOptions {
                group_cap: opts.cap_group,
                deadline: opts.timeout.map(|t| Instant::now() + t),
            };
            gmax_submatrix(&a, sub_opts).map_err(flag_hint)?
        }
        Algorithm::Oracle => {
            let group = brute_force_gmax_with_cap(&a, opts.cap_oracle).map_err(flag_hint)?;
            let generators = group.iter().filter(|g| !g.is_identity()).collect();
            let order = BigUint::from(group.order());
            GmaxResult {
                generators,
                invariant_factors: None,
                order,
                elements: Some(group),
                stats: None,
            }
        }
    };
    let timing_ms = t0.elapsed().as_secs_f64() * 1e3;

    Ok(RunReport::from_result(
        desc,
        opts.algorithm.name(),
        &result,
        opts.enumerate,
        timing_ms,
    ))
}

pub fn cmd_snf(path: &Path, verify_witnesses: bool) -> anyhow::Result<String> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let m = parse_matrix_text(&text)?;
    let d = smith_normal_form(&m)?;
    let mut out = String::new();
    out.push_str(&format!("S =\n{}", d.s));
    out.push_str(&format!("P =\n{}", d.p));
    out.push_str(&format!("Q =\n{}", d.q));
    let factors: Vec<String> = d.invariant_factors.iter().map(|f| f.to_string()).collect();
    out.push_str(&format!("invariant factors: ({})", factors.join(", ")));
    if verify_witnesses {
        if verify(&m, &d) {
            out.push_str("\nverification: PASS (S = P*A*Q, |det P| = |det Q| = 1, divisibility chain holds)");
        } else {
            bail!("verification: FAIL -- the decomposition does not check out");
        }
    }
    Ok(out)
}

pub fn cmd_monomials(weight_args: &[String], cap: u64) -> anyhow::Result<String> {
    if weight_args.is_empty() {
        bail!("expected at least one weight, e.g. `gwmax monomials 1/3 1/3`");
    }
    let q: Vec<BigRational> = weight_args
        .iter()
        .map(|s| {
            s.parse::<BigRational>()
                .map_err(|_| anyhow!("bad rational weight {s:?}"))
        })
        .collect::<anyhow::Result<_>>()?;
    let ws = WeightSystem::new(q)?;
    let vectors = enumerate_monomials(&ws, cap).map_err(flag_hint)?;
    let mut out = String::new();
    for v in &vectors {
        let cells: Vec<String> = v.iter().map(u64::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out.push_str(&format!("count: {}", vectors.len()));
    Ok(out)
}

pub fn cmd_classify(source: &str) -> anyhow::Result<String> {
    let p = parse(source)?;
    let a = exponent_matrix(&p)?;
    let d = classify_invertible(&a)?;
    let names = p.variables().to_vec();
    let mut out = String::from("atomic decomposition:\n");
    for b in &d.blocks {
        out.push_str(&format!("  {}\n", b.render(&names)));
    }
    out.push_str(&format!("blocks: {}", d.blocks.len()));
    Ok(out)
}
