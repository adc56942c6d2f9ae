use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand};

use gwmax_cli::bench::{run_bench, to_csv, BenchConfig};
use gwmax_cli::commands::{
    cmd_classify, cmd_compute, cmd_monomials, cmd_snf, Algorithm, ComputeInput, ComputeOpts,
};

/// Compute the maximal diagonal symmetry group of a quasihomogeneous
/// polynomial, exactly.
#[derive(Parser)]
#[command(name = "gwmax", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the symmetry group of a polynomial or exponent matrix.
    Compute {
        /// Polynomial, e.g. "x^3 + y^3 + x^2*y" (or use --matrix)
        polynomial: Option<String>,
        /// Read the exponent matrix from a file ("m n" header, then rows)
        #[arg(long, conflicts_with = "polynomial")]
        matrix: Option<PathBuf>,
        /// Algorithm to run
        #[arg(long, value_enum, default_value_t = Algorithm::Smith)]
        algorithm: Algorithm,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Include the full element enumeration in the report
        #[arg(long)]
        enumerate: bool,
        /// Compute even when admissibility checks fail
        #[arg(long)]
        force: bool,
        /// Cap on group enumeration sizes
        #[arg(long, default_value_t = 1_000_000)]
        cap_group: u64,
        /// Cap on brute-force oracle candidates (d^n)
        #[arg(long, default_value_t = 1_000_000)]
        cap_oracle: u64,
        /// Deadline in seconds for the submatrix algorithm
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Smith normal form of an integer matrix file: prints S, P, Q and the
    /// invariant factors.
    Snf {
        /// Matrix file ("m n" header, then rows)
        matrix: PathBuf,
        /// Independently re-check S = P*A*Q, unimodularity, divisibility
        #[arg(long)]
        verify: bool,
    },
    /// Time both algorithms on the W_n family and emit CSV.
    Bench {
        /// Even n values, each at least 4
        #[arg(default_values_t = [4u64, 6, 8, 10, 12])]
        ns: Vec<u64>,
        /// Per-run budget in seconds for the submatrix lane
        #[arg(long, default_value_t = 10.0)]
        timeout: f64,
        /// Cap on group enumeration sizes (n >= 6 needs more than the
        /// default; the first submatrix group of W_6 alone has 12^6
        /// elements)
        #[arg(long, default_value_t = 1_000_000)]
        cap_group: u64,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List all exponent vectors admissible under a weight system.
    Monomials {
        /// Weights as fractions, e.g. 1/3 1/3
        weights: Vec<String>,
        /// Cap on the number of monomials enumerated
        #[arg(long, default_value_t = 100_000)]
        cap_monomials: u64,
    },
    /// Decompose an invertible polynomial into atomic types.
    Classify {
        /// Polynomial, e.g. "x^2*y + y^2*x"
        polynomial: String,
    },
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Compute {
            polynomial,
            matrix,
            algorithm,
            json,
            enumerate,
            force,
            cap_group,
            cap_oracle,
            timeout,
        } => {
            let input = match (polynomial, matrix) {
                (Some(p), None) => ComputeInput::Polynomial(p),
                (None, Some(m)) => ComputeInput::MatrixFile(m),
                _ => anyhow::bail!("provide a polynomial or --matrix FILE"),
            };
            let opts = ComputeOpts {
                algorithm,
                enumerate,
                force,
                cap_group,
                cap_oracle,
                timeout: timeout.map(Duration::from_secs_f64),
            };
            let report = cmd_compute(&input, &opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{}", report.render_human());
            }
        }
        Cmd::Snf { matrix, verify } => {
            println!("{}", cmd_snf(&matrix, verify)?);
        }
        Cmd::Bench {
            ns,
            timeout,
            cap_group,
            output,
        } => {
            let cfg = BenchConfig {
                timeout: Duration::from_secs_f64(timeout),
                group_cap: cap_group,
            };
            let rows = run_bench(&ns, &cfg)?;
            let csv = to_csv(&rows);
            match output {
                Some(path) => std::fs::write(&path, csv)?,
                None => print!("{csv}"),
            }
        }
        Cmd::Monomials {
            weights,
            cap_monomials,
        } => {
            println!("{}", cmd_monomials(&weights, cap_monomials)?);
        }
        Cmd::Classify { polynomial } => {
            println!("{}", cmd_classify(&polynomial)?);
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
