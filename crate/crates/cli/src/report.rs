//! Run reports: the human and JSON output of the compute command.
//!
//! Fractions cross the wire as strings ("1/3") so nothing is ever rounded;
//! integer fields serialize as JSON numbers while they fit and fall back
//! to decimal strings beyond that.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use gwmax_core::gmax::GmaxResult;
use gwmax_core::qz::{canonicalize, GroupElement, Phase};
use gwmax_core::Result as CoreResult;

/// JSON number when it fits u64, decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigNum {
    Small(u64),
    Big(String),
}

impl From<&BigUint> for BigNum {
    fn from(v: &BigUint) -> Self {
        match u64::try_from(v) {
            Ok(s) => BigNum::Small(s),
            Err(_) => BigNum::Big(v.to_string()),
        }
    }
}

impl BigNum {
    pub fn to_biguint(&self) -> BigUint {
        match self {
            BigNum::Small(v) => BigUint::from(*v),
            BigNum::Big(s) => s.parse().expect("decimal digits"),
        }
    }
}

impl fmt::Display for BigNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BigNum::Small(v) => write!(f, "{v}"),
            BigNum::Big(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub input: String,
    pub algorithm: String,
    pub generators: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factors: Option<Vec<BigNum>>,
    pub order: BigNum,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<String>>>,
    pub timing_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub submatrices_visited: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub early_exit: Option<bool>,
}

/// One string per phase, e.g. ["1/3", "0"].
pub fn element_strings(g: &GroupElement) -> Vec<String> {
    g.phases().iter().map(Phase::to_string).collect()
}

/// Rebuild a group element from its per-coordinate fraction strings.
pub fn parse_element(coords: &[String]) -> CoreResult<GroupElement> {
    let rats: Vec<BigRational> = coords
        .iter()
        .map(|s| s.parse::<Phase>().map(|p| p.as_rational().clone()))
        .collect::<CoreResult<_>>()?;
    canonicalize(&rats)
}

impl RunReport {
    pub fn from_result(
        input: String,
        algorithm: &str,
        r: &GmaxResult,
        include_elements: bool,
        timing_ms: f64,
    ) -> Self {
        RunReport {
            input,
            algorithm: algorithm.to_string(),
            generators: r.generators.iter().map(element_strings).collect(),
            invariant_factors: r
                .invariant_factors
                .as_ref()
                .map(|fs| fs.iter().map(BigNum::from).collect()),
            order: BigNum::from(&r.order),
            elements: if include_elements {
                r.elements
                    .as_ref()
                    .map(|g| g.iter().map(|e| element_strings(&e)).collect())
            } else {
                None
            },
            timing_ms,
            submatrices_visited: r.stats.map(|s| s.visited),
            early_exit: r.stats.map(|s| s.early_exit),
        }
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let tuple = |coords: &Vec<String>| format!("({})", coords.join(", "));
        out.push_str(&format!("input:      {}\n", self.input));
        out.push_str(&format!("algorithm:  {}\n", self.algorithm));
        out.push_str(&format!("order:      {}\n", self.order));
        if let Some(fs) = &self.invariant_factors {
            let list: Vec<String> = fs.iter().map(BigNum::to_string).collect();
            out.push_str(&format!("invariant factors > 1: [{}]\n", list.join(", ")));
        }
        if self.generators.is_empty() {
            out.push_str("generators: (none -- trivial group)\n");
        } else {
            out.push_str("generators: ");
            out.push_str(
                &self
                    .generators
                    .iter()
                    .map(tuple)
                    .collect::<Vec<_>>()
                    .join(", "),
            );
            out.push('\n');
        }
        if let Some(elems) = &self.elements {
            out.push_str(&format!("elements ({}):\n", elems.len()));
            for e in elems {
                out.push_str(&format!("  {}\n", tuple(e)));
            }
        }
        if let Some(v) = self.submatrices_visited {
            let early = if self.early_exit == Some(true) {
                " (early exit)"
            } else {
                ""
            };
            out.push_str(&format!("submatrices visited: {v}{early}\n"));
        }
        out.push_str(&format!("time:       {:.3} ms", self.timing_ms));
        out
    }
}
