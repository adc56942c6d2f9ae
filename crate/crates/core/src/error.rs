use num_bigint::BigUint;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension must be at least 1")]
    InvalidDimension,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("group enumeration exceeds cap of {cap} elements{}", detail_suffix(.detail))]
    GroupTooLarge { cap: u64, detail: Option<String> },

    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("polynomial is empty after combining like terms")]
    EmptyPolynomial,

    #[error("variable {var} appears in no monomial with a positive exponent (empty column)")]
    EmptyColumn { var: String },

    #[error("cannot mix named variables (x,y,z,w) with indexed variables (x1, x2, ...)")]
    MixedVariableStyles,

    #[error("not admissible: {monomials} monomials but {variables} variables (need at least as many monomials as variables)")]
    TooFewMonomials { monomials: usize, variables: usize },

    #[error("matrix does not have full column rank (rank {rank} < {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("weights are not unique: exponent matrix has rank {rank} < {cols}")]
    WeightsNotUnique { rank: usize, cols: usize },

    #[error("not quasihomogeneous: the weight system A*q = 1 has no solution")]
    NotQuasihomogeneous,

    #[error("not admissible: weight q[{index}] = {value} is not positive")]
    NonPositiveWeight { index: usize, value: String },

    #[error("monomial enumeration exceeds cap of {cap} (found {found} so far)")]
    TooManyMonomials { cap: u64, found: u64 },

    #[error("exponent matrix is not square ({rows} monomials, {cols} variables); only invertible polynomials decompose into atomic types")]
    NotSquare { rows: usize, cols: usize },

    #[error("monomial pattern admits no atomic decomposition: {0}")]
    NotDecomposable(String),

    #[error("exponent {value} in row {row} is below 2; atomic types require every exponent to be at least 2")]
    ExponentBelowTwo { row: usize, value: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("brute-force oracle needs {needed} candidates, above the cap of {cap}")]
    OracleTooLarge { cap: u64, needed: BigUint },

    #[error("timed out after visiting {visited} submatrices")]
    Timeout { visited: u64 },

    #[error("matrix entries must be nonnegative (found {value} at row {row}, column {col})")]
    NegativeEntry { row: usize, col: usize, value: String },

    #[error("bad matrix file, line {line}: {msg}")]
    MatrixFile { line: usize, msg: String },
}

fn detail_suffix(detail: &Option<String>) -> String {
    match detail {
        Some(d) => format!(" ({d})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
