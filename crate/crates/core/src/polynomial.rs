//! Polynomial input surface: parsing, exponent matrices, quasihomogeneous
//! weights, admissibility checks, monomial enumeration under a weight
//! system, atomic-type classification of invertible polynomials, and the
//! adversarial benchmark family.

use std::fmt;

use indexmap::IndexMap;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mat::IntMatrix;

/// A single monomial: nonzero coefficient and one nonnegative exponent per
/// variable. At least one exponent is positive (no constant terms).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coefficient: BigRational,
    pub exponents: Vec<u64>,
}

/// A parsed polynomial with like terms already combined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    variables: Vec<String>,
    monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn monomial_count(&self) -> usize {
        self.monomials.len()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut parts = Vec::new();
            if !m.coefficient.is_one() {
                parts.push(m.coefficient.to_string());
            }
            for (v, &e) in self.variables.iter().zip(&m.exponents) {
                match e {
                    0 => {}
                    1 => parts.push(v.clone()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            if parts.is_empty() {
                parts.push(m.coefficient.to_string());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(BigInt),
    Ident(String),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Int(v), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum VarRef {
    Named(u8),    // position in the fixed x,y,z,w alphabet
    Indexed(u64), // x1, x2, ... (or x_1, x_2, ...)
}

fn classify_var(name: &str, pos: usize) -> Result<VarRef> {
    match name {
        "x" => return Ok(VarRef::Named(0)),
        "y" => return Ok(VarRef::Named(1)),
        "z" => return Ok(VarRef::Named(2)),
        "w" => return Ok(VarRef::Named(3)),
        _ => {}
    }
    let digits = name
        .strip_prefix("x_")
        .or_else(|| name.strip_prefix('x'))
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
    if let Some(d) = digits {
        let k: u64 = d.parse().map_err(|_| Error::Parse {
            pos,
            msg: format!("variable index {d:?} out of range"),
        })?;
        if k == 0 {
            return Err(Error::Parse {
                pos,
                msg: "variable indices start at 1".into(),
            });
        }
        return Ok(VarRef::Indexed(k));
    }
    Err(Error::Parse {
        pos,
        msg: format!("unknown variable {name:?} (use x,y,z,w or x1,x2,...)"),
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    cur: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cur).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.cur).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.cur).map(|(t, _)| t.clone());
        if t.is_some() {
            self.cur += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<BigInt> {
        match self.bump() {
            Some(Tok::Int(v)) => Ok(v),
            _ => {
                self.cur = self.cur.saturating_sub(1);
                Err(self.err(format!("expected {what}")))
            }
        }
    }

    // factor := var [^ positive-int]
    fn factor(&mut self) -> Result<(VarRef, u64)> {
        let pos = self.pos();
        let name = match self.bump() {
            Some(Tok::Ident(s)) => s,
            _ => {
                self.cur = self.cur.saturating_sub(1);
                return Err(self.err("expected a variable"));
            }
        };
        let var = classify_var(&name, pos)?;
        let mut exp: u64 = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            if self.peek() == Some(&Tok::Minus) {
                return Err(self.err("negative exponent"));
            }
            let e = self.expect_int("an exponent")?;
            if e.is_zero() {
                return Err(self.err("exponent must be positive"));
            }
            exp = e.to_u64().ok_or_else(|| self.err("exponent too large"))?;
        }
        Ok((var, exp))
    }

    // term := [coefficient *] factor (* factor)*
    fn term(&mut self, sign: i8) -> Result<(BigRational, Vec<(VarRef, u64)>)> {
        let mut coeff = BigRational::one();
        if matches!(self.peek(), Some(Tok::Int(_))) {
            let n = self.expect_int("a coefficient")?;
            let mut c = BigRational::from(n);
            if self.peek() == Some(&Tok::Slash) {
                self.bump();
                let d = self.expect_int("a denominator")?;
                if d.is_zero() {
                    return Err(self.err("zero denominator in coefficient"));
                }
                c /= BigRational::from(d);
            }
            coeff = c;
            if self.bump() != Some(Tok::Star) {
                self.cur = self.cur.saturating_sub(1);
                return Err(self.err("expected '*' between coefficient and variables"));
            }
        }
        if sign < 0 {
            coeff = -coeff;
        }
        let mut factors: Vec<(VarRef, u64)> = Vec::new();
        loop {
            let (var, exp) = self.factor()?;
            match factors.iter_mut().find(|(v, _)| *v == var) {
                Some((_, e)) => *e += exp,
                None => factors.push((var, exp)),
            }
            if self.peek() == Some(&Tok::Star) {
                self.bump();
            } else {
                break;
            }
        }
        Ok((coeff, factors))
    }
}

/// Parse a polynomial from text.
///
/// Grammar: a sum of terms; term = `[coefficient *] factor (* factor)*`;
/// factor = `var [^ positive-int]`. Variables are either the named set
/// x,y,z,w or the indexed set x1,x2,... (equivalently x_1,x_2,...); the two
/// styles cannot be mixed. Like terms are combined and terms that cancel
/// are dropped.
pub fn parse(source: &str) -> Result<Polynomial> {
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        cur: 0,
        end: source.len(),
    };
    if p.peek().is_none() {
        return Err(Error::EmptyPolynomial);
    }

    let mut raw_terms: Vec<(BigRational, Vec<(VarRef, u64)>)> = Vec::new();
    let mut sign: i8 = 1;
    if p.peek() == Some(&Tok::Minus) {
        p.bump();
        sign = -1;
    } else if p.peek() == Some(&Tok::Plus) {
        p.bump();
    }
    loop {
        raw_terms.push(p.term(sign)?);
        match p.bump() {
            None => break,
            Some(Tok::Plus) => sign = 1,
            Some(Tok::Minus) => sign = -1,
            Some(_) => {
                p.cur -= 1;
                return Err(p.err("expected '+', '-', or end of input"));
            }
        }
    }

    // Fix the variable universe: named style keeps first-appearance order,
    // indexed style sorts by index; mixing the styles is rejected.
    let mut named_seen: Vec<u8> = Vec::new();
    let mut indexed_seen: Vec<u64> = Vec::new();
    for (_, factors) in &raw_terms {
        for (v, _) in factors {
            match v {
                VarRef::Named(k) => {
                    if !indexed_seen.is_empty() {
                        return Err(Error::MixedVariableStyles);
                    }
                    if !named_seen.contains(k) {
                        named_seen.push(*k);
                    }
                }
                VarRef::Indexed(k) => {
                    if !named_seen.is_empty() {
                        return Err(Error::MixedVariableStyles);
                    }
                    if !indexed_seen.contains(k) {
                        indexed_seen.push(*k);
                    }
                }
            }
        }
    }
    indexed_seen.sort_unstable();
    let (variables, column): (Vec<String>, Box<dyn Fn(&VarRef) -> usize>) =
        if indexed_seen.is_empty() {
            const NAMES: [&str; 4] = ["x", "y", "z", "w"];
            let order = named_seen.clone();
            (
                named_seen.iter().map(|&k| NAMES[k as usize].to_string()).collect(),
                Box::new(move |v| match v {
                    VarRef::Named(k) => order.iter().position(|n| n == k).expect("seen"),
                    VarRef::Indexed(_) => unreachable!(),
                }),
            )
        } else {
            let order = indexed_seen.clone();
            (
                indexed_seen.iter().map(|k| format!("x{k}")).collect(),
                Box::new(move |v| match v {
                    VarRef::Indexed(k) => order.binary_search(k).expect("seen"),
                    VarRef::Named(_) => unreachable!(),
                }),
            )
        };
    let n = variables.len();

    // Combine like terms, preserving first-appearance order of exponent
    // vectors (rows of the exponent matrix follow parse order).
    let mut combined: IndexMap<Vec<u64>, BigRational> = IndexMap::new();
    for (coeff, factors) in &raw_terms {
        let mut exps = vec![0u64; n];
        for (v, e) in factors {
            exps[column(v)] += e;
        }
        *combined.entry(exps).or_insert_with(BigRational::zero) += coeff;
    }
    let monomials: Vec<Monomial> = combined
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(exponents, coefficient)| Monomial {
            coefficient,
            exponents,
        })
        .collect();
    if monomials.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    for (j, var) in variables.iter().enumerate() {
        if monomials.iter().all(|m| m.exponents[j] == 0) {
            return Err(Error::EmptyColumn { var: var.clone() });
        }
    }
    Ok(Polynomial {
        variables,
        monomials,
    })
}

// ---------------------------------------------------------------------------
// Exponent matrix and weights
// ---------------------------------------------------------------------------

/// The m x n matrix of monomial exponents, validated to have nonnegative
/// entries, at least as many rows as columns, and full column rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    mat: IntMatrix,
}

impl ExponentMatrix {
    pub fn new(mat: IntMatrix) -> Result<Self> {
        let (m, n) = (mat.rows(), mat.cols());
        if m == 0 || n == 0 {
            return Err(Error::InvalidDimension);
        }
        for i in 0..m {
            for j in 0..n {
                if mat[(i, j)].is_negative() {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: mat[(i, j)].to_string(),
                    });
                }
            }
        }
        if m < n {
            return Err(Error::TooFewMonomials {
                monomials: m,
                variables: n,
            });
        }
        let rank = mat.rank();
        if rank < n {
            return Err(Error::WeightsNotUnique { rank, cols: n });
        }
        Ok(ExponentMatrix { mat })
    }

    pub fn rows(&self) -> usize {
        self.mat.rows()
    }

    pub fn cols(&self) -> usize {
        self.mat.cols()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.mat
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        self.mat.row(i)
    }

    /// The norm ||A||: the largest entry.
    pub fn norm(&self) -> BigInt {
        self.mat.max_abs()
    }
}

/// Exponent matrix of a polynomial: row i holds the exponents of monomial
/// i in parse order. Coefficients play no role.
pub fn exponent_matrix(p: &Polynomial) -> Result<ExponentMatrix> {
    let rows: Vec<Vec<BigInt>> = p
        .monomials
        .iter()
        .map(|m| m.exponents.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    ExponentMatrix::new(IntMatrix::from_rows(rows))
}

/// The unique positive rational solution q of A*q = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    q: Vec<BigRational>,
}

impl WeightSystem {
    /// Wrap externally supplied weights, insisting on positivity.
    pub fn new(q: Vec<BigRational>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidDimension);
        }
        for (i, w) in q.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight {
                    index: i,
                    value: w.to_string(),
                });
            }
        }
        Ok(WeightSystem { q })
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.q
    }

    pub fn dimension(&self) -> usize {
        self.q.len()
    }

    /// Indices with q_i > 1/2; admissible conventions keep every weight at
    /// or below 1/2, so these get flagged as warnings.
    pub fn oversized(&self) -> Vec<usize> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.q
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > half)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.q.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

/// Solve A*q = 1 exactly. The matrix has full column rank, so a solution
/// is unique when it exists; inconsistency means the polynomial is not
/// quasihomogeneous.
pub fn weights(a: &ExponentMatrix) -> Result<WeightSystem> {
    let (m, n) = (a.rows(), a.cols());
    // Gaussian elimination over Q on the augmented system [A | 1].
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut r: Vec<BigRational> = a
                .row(i)
                .iter()
                .map(|e| BigRational::from(e.clone()))
                .collect();
            r.push(BigRational::one());
            r
        })
        .collect();
    let mut pivot_row = 0usize;
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..n {
        let Some(p) = (pivot_row..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for j in col..=n {
            let scaled = &rows[pivot_row][j] * &inv;
            rows[pivot_row][j] = scaled;
        }
        for i in 0..m {
            if i != pivot_row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in col..=n {
                    let delta = &f * &rows[pivot_row][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if pivots.len() < n {
        return Err(Error::WeightsNotUnique {
            rank: pivots.len(),
            cols: n,
        });
    }
    for row in rows.iter().skip(pivot_row) {
        if !row[n].is_zero() {
            return Err(Error::NotQuasihomogeneous);
        }
    }
    let mut q = vec![BigRational::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        q[col] = rows[r][n].clone();
    }
    WeightSystem::new(q)
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

/// Per-condition admissibility report. Nondegeneracy (isolated critical
/// point at the origin) is outside this tool's scope and is always
/// reported as not checked.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub monomials: usize,
    pub variables: usize,
    pub enough_monomials: bool,
    pub weights: Result<WeightSystem>,
    /// Rows that are forbidden cross terms x_i*x_j.
    pub cross_term_rows: Vec<usize>,
    /// Weight coordinates above 1/2 (warning, not failure).
    pub weight_warnings: Vec<usize>,
}

impl AdmissibilityReport {
    /// All checked conditions pass (nondegeneracy is never checked).
    pub fn passes(&self) -> bool {
        self.enough_monomials && self.weights.is_ok() && self.cross_term_rows.is_empty()
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(
            f,
            "monomials ({}) >= variables ({}): {}",
            self.monomials,
            self.variables,
            mark(self.enough_monomials)
        )?;
        match &self.weights {
            Ok(q) => writeln!(f, "unique positive weights: pass -- q = {q}")?,
            Err(e) => writeln!(f, "unique positive weights: FAIL -- {e}")?,
        }
        if self.cross_term_rows.is_empty() {
            writeln!(f, "no cross terms x_i*x_j: pass")?;
        } else {
            writeln!(
                f,
                "no cross terms x_i*x_j: FAIL -- monomial rows {:?}",
                self.cross_term_rows
            )?;
        }
        if !self.weight_warnings.is_empty() {
            writeln!(
                f,
                "warning: weights above 1/2 at coordinates {:?}",
                self.weight_warnings
            )?;
        }
        write!(f, "nondegeneracy (isolated critical point): not checked")
    }
}

/// Check every admissibility condition except nondegeneracy.
pub fn check_admissible(p: &Polynomial) -> AdmissibilityReport {
    let m = p.monomial_count();
    let n = p.variable_count();
    let weights_outcome = exponent_matrix(p).and_then(|a| weights(&a));
    let rows: Vec<&[u64]> = p.monomials.iter().map(|mon| mon.exponents.as_slice()).collect();
    build_report(m, n, weights_outcome, &rows)
}

/// Same report for a bare exponent matrix (already validated to have full
/// column rank and enough rows).
pub fn check_admissible_matrix(a: &ExponentMatrix) -> AdmissibilityReport {
    let rows: Vec<Vec<u64>> = (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|e| e.to_u64().unwrap_or(u64::MAX))
                .collect()
        })
        .collect();
    let refs: Vec<&[u64]> = rows.iter().map(Vec::as_slice).collect();
    build_report(a.rows(), a.cols(), weights(a), &refs)
}

fn build_report(
    m: usize,
    n: usize,
    weights_outcome: Result<WeightSystem>,
    rows: &[&[u64]],
) -> AdmissibilityReport {
    let cross_term_rows = rows
        .iter()
        .enumerate()
        .filter(|(_, row)| {
            row.iter().filter(|&&e| e == 1).count() == 2 && row.iter().all(|&e| e == 0 || e == 1)
        })
        .map(|(i, _)| i)
        .collect();
    let weight_warnings = weights_outcome
        .as_ref()
        .map(|q| q.oversized())
        .unwrap_or_default();
    AdmissibilityReport {
        monomials: m,
        variables: n,
        enough_monomials: m >= n,
        weights: weights_outcome,
        cross_term_rows,
        weight_warnings,
    }
}

// ---------------------------------------------------------------------------
// Monomial enumeration
// ---------------------------------------------------------------------------

/// All nonnegative integer exponent vectors a with a . q = 1, in
/// lexicographic order. The search is bounded because each coordinate can
/// reach at most 1/q_i.
pub fn enumerate_monomials(q: &WeightSystem, max_count: u64) -> Result<Vec<Vec<u64>>> {
    let n = q.dimension();
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut stack: Vec<u64> = Vec::with_capacity(n);

    fn rec(
        q: &[BigRational],
        remaining: &BigRational,
        stack: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
        max_count: u64,
    ) -> Result<()> {
        let j = stack.len();
        if j == q.len() {
            if remaining.is_zero() {
                if out.len() as u64 >= max_count {
                    return Err(Error::TooManyMonomials {
                        cap: max_count,
                        found: out.len() as u64,
                    });
                }
                out.push(stack.clone());
            }
            return Ok(());
        }
        let bound = (remaining / &q[j]).floor();
        let bound = bound.to_integer().to_u64().unwrap_or(0);
        for a in 0..=bound {
            stack.push(a);
            let used = &q[j] * BigRational::from(BigInt::from(a));
            rec(q, &(remaining - used), stack, out, max_count)?;
            stack.pop();
        }
        Ok(())
    }

    rec(q.as_slice(), &BigRational::one(), &mut stack, &mut out, max_count)?;
    Ok(out)
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

// ---------------------------------------------------------------------------
// Atomic types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomicKind {
    Fermat,
    Loop,
    Chain,
}

impl fmt::Display for AtomicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicKind::Fermat => write!(f, "Fermat"),
            AtomicKind::Loop => write!(f, "Loop"),
            AtomicKind::Chain => write!(f, "Chain"),
        }
    }
}

/// One atomic block: the variables it covers (in pattern order) and the
/// exponent attached to each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicBlock {
    pub kind: AtomicKind,
    pub variables: Vec<usize>,
    pub exponents: Vec<u64>,
}

impl AtomicBlock {
    /// Render with variable names, e.g. `Loop(x^2*y + y^2*x)`.
    pub fn render(&self, names: &[String]) -> String {
        let name = |v: usize| names.get(v).cloned().unwrap_or_else(|| format!("x{}", v + 1));
        let pow = |v: usize, e: u64| {
            if e == 1 {
                name(v)
            } else {
                format!("{}^{}", name(v), e)
            }
        };
        let k = self.variables.len();
        let body = match self.kind {
            AtomicKind::Fermat => pow(self.variables[0], self.exponents[0]),
            AtomicKind::Loop => (0..k)
                .map(|i| {
                    format!(
                        "{}*{}",
                        pow(self.variables[i], self.exponents[i]),
                        name(self.variables[(i + 1) % k])
                    )
                })
                .collect::<Vec<_>>()
                .join(" + "),
            AtomicKind::Chain => (0..k)
                .map(|i| {
                    if i + 1 < k {
                        format!(
                            "{}*{}",
                            pow(self.variables[i], self.exponents[i]),
                            name(self.variables[i + 1])
                        )
                    } else {
                        pow(self.variables[i], self.exponents[i])
                    }
                })
                .collect::<Vec<_>>()
                .join(" + "),
        };
        format!("{}({})", self.kind, body)
    }

    /// The exponent rows this block contributes.
    pub fn rows(&self, n: usize) -> Vec<Vec<u64>> {
        let k = self.variables.len();
        (0..k)
            .map(|i| {
                let mut row = vec![0u64; n];
                row[self.variables[i]] += self.exponents[i];
                match self.kind {
                    AtomicKind::Fermat => {}
                    AtomicKind::Loop => row[self.variables[(i + 1) % k]] += 1,
                    AtomicKind::Chain => {
                        if i + 1 < k {
                            row[self.variables[i + 1]] += 1;
                        }
                    }
                }
                row
            })
            .collect()
    }
}

/// Partition of the variables into atomic blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicDecomposition {
    pub blocks: Vec<AtomicBlock>,
}

impl AtomicDecomposition {
    /// Rebuild the exponent rows of the decomposed polynomial (row order
    /// by block, then within block); useful for round-trip checks.
    pub fn rows(&self, n: usize) -> Vec<Vec<u64>> {
        self.blocks.iter().flat_map(|b| b.rows(n)).collect()
    }
}

/// Decompose a square invertible exponent matrix into Fermat, Loop, and
/// Chain blocks. Each monomial must be x_j^a (a >= 2) or x_j^a * x_k
/// (a >= 2, k != j); every variable heads exactly one monomial and is the
/// trailing variable of at most one.
pub fn classify_invertible(a: &ExponentMatrix) -> Result<AtomicDecomposition> {
    let (m, n) = (a.rows(), a.cols());
    if m != n {
        return Err(Error::NotSquare { rows: m, cols: n });
    }

    // head var -> (exponent, optional tail var)
    let mut head: Vec<Option<(u64, Option<usize>)>> = vec![None; n];
    for i in 0..m {
        let nz: Vec<(usize, &BigInt)> = a
            .row(i)
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .collect();
        let parsed: Result<(usize, u64, Option<usize>)> = match nz.as_slice() {
            [] => Err(Error::NotDecomposable(format!("monomial row {i} is empty"))),
            [(j, e)] => {
                let e = e.to_u64().ok_or_else(|| {
                    Error::NotDecomposable(format!("exponent overflow in row {i}"))
                })?;
                if e < 2 {
                    return Err(Error::ExponentBelowTwo {
                        row: i,
                        value: e.to_string(),
                    });
                }
                Ok((*j, e, None))
            }
            [(j1, e1), (j2, e2)] => {
                let (e1, e2) = (e1.to_u64(), e2.to_u64());
                let (Some(e1), Some(e2)) = (e1, e2) else {
                    return Err(Error::NotDecomposable(format!(
                        "exponent overflow in row {i}"
                    )));
                };
                if e1 == 1 && e2 == 1 {
                    return Err(Error::ExponentBelowTwo {
                        row: i,
                        value: "1".into(),
                    });
                }
                if e2 == 1 && e1 >= 2 {
                    Ok((*j1, e1, Some(*j2)))
                } else if e1 == 1 && e2 >= 2 {
                    Ok((*j2, e2, Some(*j1)))
                } else {
                    Err(Error::NotDecomposable(format!(
                        "row {i} is x^{e1}*y^{e2}; one exponent must be 1"
                    )))
                }
            }
            _ => Err(Error::NotDecomposable(format!(
                "monomial row {i} touches more than two variables"
            ))),
        };
        let (h, e, t) = parsed?;
        if head[h].is_some() {
            return Err(Error::NotDecomposable(format!(
                "variable {h} heads two monomials"
            )));
        }
        head[h] = Some((e, t));
    }
    if let Some(v) = head.iter().position(Option::is_none) {
        return Err(Error::NotDecomposable(format!(
            "variable {v} heads no monomial"
        )));
    }
    let head: Vec<(u64, Option<usize>)> = head.into_iter().map(Option::unwrap).collect();

    let mut in_deg = vec![0usize; n];
    for &(_, t) in &head {
        if let Some(t) = t {
            in_deg[t] += 1;
            if in_deg[t] > 1 {
                return Err(Error::NotDecomposable(format!(
                    "variable {t} trails two monomials"
                )));
            }
        }
    }

    let mut visited = vec![false; n];
    let mut blocks = Vec::new();
    // Paths start at variables nothing points to; length 1 is a Fermat
    // block, longer is a Chain.
    for start in 0..n {
        if in_deg[start] != 0 {
            continue;
        }
        let mut vars = Vec::new();
        let mut exps = Vec::new();
        let mut v = start;
        loop {
            visited[v] = true;
            vars.push(v);
            exps.push(head[v].0);
            match head[v].1 {
                Some(t) => v = t,
                None => break,
            }
        }
        let kind = if vars.len() == 1 {
            AtomicKind::Fermat
        } else {
            AtomicKind::Chain
        };
        blocks.push(AtomicBlock {
            kind,
            variables: vars,
            exponents: exps,
        });
    }
    // Everything left lies on cycles: Loop blocks, started at their
    // smallest variable for a canonical rotation.
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut vars = Vec::new();
        let mut exps = Vec::new();
        let mut v = start;
        loop {
            if visited[v] {
                // A tail pointing back into an already-consumed block means
                // the pattern is not a disjoint union of atomic pieces.
                return Err(Error::NotDecomposable(format!(
                    "variable {v} is shared between blocks"
                )));
            }
            visited[v] = true;
            vars.push(v);
            exps.push(head[v].0);
            let Some(t) = head[v].1 else {
                return Err(Error::NotDecomposable(format!(
                    "variable {v} ends a broken cycle"
                )));
            };
            if t == start {
                break;
            }
            v = t;
        }
        blocks.push(AtomicBlock {
            kind: AtomicKind::Loop,
            variables: vars,
            exponents: exps,
        });
    }
    blocks.sort_by_key(|b| *b.variables.iter().min().expect("nonempty block"));
    Ok(AtomicDecomposition { blocks })
}

// ---------------------------------------------------------------------------
// Adversarial family
// ---------------------------------------------------------------------------

/// The benchmark family W_n = x1^{2n} + ... + xn^{2n} + x1^n*x2^n + ... +
/// xn^n*x1^n for even n >= 4: polynomially sized input whose submatrix
/// enumeration is exponential.
pub fn build_wn(n: u64) -> Result<Polynomial> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "the W_n family needs even n >= 4, got {n}"
        )));
    }
    let n = n as usize;
    let variables: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut monomials = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut exps = vec![0u64; n];
        exps[i] = 2 * n as u64;
        monomials.push(Monomial {
            coefficient: BigRational::one(),
            exponents: exps,
        });
    }
    for i in 0..n {
        let mut exps = vec![0u64; n];
        exps[i] = n as u64;
        exps[(i + 1) % n] = n as u64;
        monomials.push(Monomial {
            coefficient: BigRational::one(),
            exponents: exps,
        });
    }
    Ok(Polynomial {
        variables,
        monomials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn matrix_of(src: &str) -> ExponentMatrix {
        exponent_matrix(&parse(src).unwrap()).unwrap()
    }

    #[test]
    fn parses_the_cubic_with_mixed_term() {
        let p = parse("x^3 + y^3 + x^2*y").unwrap();
        assert_eq!(p.variables(), ["x", "y"]);
        assert_eq!(p.monomial_count(), 3);
        let a = exponent_matrix(&p).unwrap();
        assert_eq!(
            a.matrix(),
            &IntMatrix::from_i64s(&[&[3, 0], &[0, 3], &[2, 1]])
        );
        assert_eq!(a.norm(), BigInt::from(3));
    }

    #[test]
    fn zero_coefficient_leaves_an_empty_column() {
        assert!(matches!(
            parse("x^3 + 0*y"),
            Err(Error::EmptyColumn { var }) if var == "y"
        ));
    }

    #[test]
    fn parses_indexed_variables_with_coefficients() {
        let p = parse("2*x1^4*x2 + x2^3").unwrap();
        assert_eq!(p.variables(), ["x1", "x2"]);
        assert_eq!(p.monomials()[0].coefficient, rat(2, 1));
        assert_eq!(p.monomials()[0].exponents, vec![4, 1]);
        assert_eq!(p.monomials()[1].coefficient, rat(1, 1));
        assert_eq!(p.monomials()[1].exponents, vec![0, 3]);
        // underscore style is the same variable universe
        assert_eq!(parse("2*x_1^4*x_2 + x_2^3").unwrap(), p);
    }

    #[test]
    fn indexed_variables_sort_by_index() {
        let p = parse("x3^2 + x1^2*x3 + x1*x3").unwrap();
        assert_eq!(p.variables(), ["x1", "x3"]);
    }

    #[test]
    fn like_terms_combine_and_cancel() {
        let p = parse("x^3 + 2*x^3 + y^2").unwrap();
        assert_eq!(p.monomials()[0].coefficient, rat(3, 1));
        assert_eq!(parse("x^3 - x^3"), Err(Error::EmptyPolynomial));
        // a cancelled monomial drops out; survivors keep parse order
        let p = parse("x^2*y - x^2*y + x^3 + y^3").unwrap();
        assert_eq!(p.monomial_count(), 2);
        assert_eq!(p.monomials()[0].exponents, vec![3, 0]);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse("x^3 + + y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("x^-2"), Err(Error::Parse { msg, .. }) if msg.contains("negative")));
        assert!(matches!(parse("x^0"), Err(Error::Parse { msg, .. }) if msg.contains("positive")));
        assert!(matches!(parse("3 + x"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x + a^2"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x + x1^2"), Err(Error::MixedVariableStyles)));
        assert!(matches!(parse("x0^2"), Err(Error::Parse { .. })));
        assert!(matches!(parse("2x"), Err(Error::Parse { .. })));
        assert!(matches!(parse(""), Err(Error::EmptyPolynomial)));
    }

    #[test]
    fn repeated_variable_in_a_term_sums_exponents() {
        let p = parse("x*x^2 + y^3").unwrap();
        assert_eq!(p.monomials()[0].exponents, vec![3, 0]);
    }

    #[test]
    fn exponent_matrix_rejects_thin_or_rank_deficient_input() {
        assert!(matches!(
            exponent_matrix(&parse("x^2*y^2").unwrap()),
            Err(Error::TooFewMonomials { monomials: 1, variables: 2 })
        ));
        assert!(matches!(
            exponent_matrix(&parse("x*y^2 + x^2*y^4").unwrap()),
            Err(Error::WeightsNotUnique { rank: 1, cols: 2 })
        ));
    }

    #[test]
    fn weights_of_worked_examples() {
        assert_eq!(
            weights(&matrix_of("x^3 + y^3 + x^2*y")).unwrap().as_slice(),
            &[rat(1, 3), rat(1, 3)]
        );
        assert_eq!(
            weights(&matrix_of("x^5 + y^5 + z^5")).unwrap().as_slice(),
            &[rat(1, 5), rat(1, 5), rat(1, 5)]
        );
        let w4 = exponent_matrix(&build_wn(4).unwrap()).unwrap();
        assert_eq!(
            weights(&w4).unwrap().as_slice(),
            &[rat(1, 8), rat(1, 8), rat(1, 8), rat(1, 8)]
        );
    }

    #[test]
    fn weights_error_paths() {
        // x + x^2: inconsistent system
        assert_eq!(
            weights(&matrix_of("x + x^2")),
            Err(Error::NotQuasihomogeneous)
        );
        // x + x^3*y forces q2 = -2
        assert!(matches!(
            weights(&matrix_of("x + x^3*y")),
            Err(Error::NonPositiveWeight { index: 1, .. })
        ));
    }

    #[test]
    fn weight_identity_holds_exactly() {
        for src in ["x^3 + y^3 + x^2*y", "x^2 + x*y^2", "x^4 + y^4 + z^2 + x^2*y^2"] {
            let a = matrix_of(src);
            let q = weights(&a).unwrap();
            for i in 0..a.rows() {
                let dot: BigRational = a
                    .row(i)
                    .iter()
                    .zip(q.as_slice())
                    .map(|(e, w)| BigRational::from(e.clone()) * w)
                    .sum();
                assert!(dot.is_one(), "row {i} of {src}");
            }
        }
    }

    #[test]
    fn norm_bound_from_weights() {
        for src in ["x^3 + y^3 + x^2*y", "x^2 + x*y^2", "x^7 + x*y^3"] {
            let a = matrix_of(src);
            let q = weights(&a).unwrap();
            let bound = q
                .as_slice()
                .iter()
                .map(|w| w.recip().floor().to_integer())
                .max()
                .unwrap();
            assert!(a.norm() <= bound, "{src}");
        }
    }

    #[test]
    fn admissibility_report_cases() {
        let good = check_admissible(&parse("x^3 + y^3 + x^2*y").unwrap());
        assert!(good.passes());
        assert!(good.enough_monomials && good.cross_term_rows.is_empty());

        let cross = check_admissible(&parse("x*y").unwrap());
        assert_eq!(cross.cross_term_rows, vec![0]);
        assert!(!cross.passes());

        // weights (1/2, 1/4): all checked conditions pass
        let report = check_admissible(&parse("x^2 + x*y^2").unwrap());
        assert!(report.passes());
        assert_eq!(
            report.weights.as_ref().unwrap().as_slice(),
            &[rat(1, 2), rat(1, 4)]
        );

        // x^3 + x*y: cross-ish row (1,1) is a genuine cross term
        let r = check_admissible(&parse("x^3 + x*y").unwrap());
        assert_eq!(r.cross_term_rows, vec![1]);

        // q = (1, 1/3): positive but q_x > 1/2 draws a warning
        let warn = check_admissible(&parse("x + y^3").unwrap());
        assert!(warn.weights.is_ok());
        assert_eq!(warn.weight_warnings, vec![0]);
        let rendered = warn.to_string();
        assert!(rendered.contains("not checked"));
    }

    #[test]
    fn enumerates_monomials_lexicographically() {
        let q = WeightSystem::new(vec![rat(1, 3), rat(1, 3)]).unwrap();
        let got = enumerate_monomials(&q, 100).unwrap();
        assert_eq!(got, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);

        let single = WeightSystem::new(vec![rat(1, 2)]).unwrap();
        assert_eq!(enumerate_monomials(&single, 10).unwrap(), vec![vec![2]]);

        // no admissible monomials at all
        let odd = WeightSystem::new(vec![rat(2, 3)]).unwrap();
        assert!(enumerate_monomials(&odd, 10).unwrap().is_empty());
    }

    #[test]
    fn enumeration_cap_reports_progress() {
        let q = WeightSystem::new(vec![rat(1, 4), rat(1, 4)]).unwrap();
        assert!(matches!(
            enumerate_monomials(&q, 3),
            Err(Error::TooManyMonomials { cap: 3, found: 3 })
        ));
    }

    #[test]
    fn homogeneous_count_matches_binomial() {
        for a in 2..=5u64 {
            for n in 1..=4usize {
                let q = WeightSystem::new(vec![rat(1, a as i64); n]).unwrap();
                let count = enumerate_monomials(&q, 10_000).unwrap().len();
                assert_eq!(
                    BigUint::from(count),
                    binomial(a + n as u64 - 1, a),
                    "a={a} n={n}"
                );
            }
        }
    }

    #[test]
    fn enumeration_contains_source_rows() {
        let a = matrix_of("x^3 + y^3 + x^2*y");
        let q = weights(&a).unwrap();
        let all = enumerate_monomials(&q, 1000).unwrap();
        for i in 0..a.rows() {
            let row: Vec<u64> = a.row(i).iter().map(|e| e.to_u64().unwrap()).collect();
            assert!(all.contains(&row));
        }
    }

    #[test]
    fn classifies_atomic_patterns() {
        let d = classify_invertible(&matrix_of("x^3 + y^3")).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert!(d.blocks.iter().all(|b| b.kind == AtomicKind::Fermat));
        assert_eq!(d.blocks[0].exponents, vec![3]);

        let d = classify_invertible(&matrix_of("x^2*y + y^2*x")).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].kind, AtomicKind::Loop);
        assert_eq!(d.blocks[0].exponents, vec![2, 2]);

        let d = classify_invertible(&matrix_of("x^3*y + y^2*z + z^2")).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].kind, AtomicKind::Chain);
        assert_eq!(d.blocks[0].variables, vec![0, 1, 2]);
        assert_eq!(d.blocks[0].exponents, vec![3, 2, 2]);
    }

    #[test]
    fn classify_rejects_non_atomic_input() {
        assert!(matches!(
            classify_invertible(&matrix_of("x^3 + y^3 + x^2*y")),
            Err(Error::NotSquare { rows: 3, cols: 2 })
        ));
        // x^2*y^3: neither exponent is 1
        assert!(matches!(
            classify_invertible(&matrix_of("x^2*y^3 + x^3*y")),
            Err(Error::NotDecomposable(_))
        ));
        // three variables in one monomial
        assert!(matches!(
            classify_invertible(&matrix_of("x^2*y*z + y^2 + z^2")),
            Err(Error::NotDecomposable(_))
        ));
    }

    #[test]
    fn classify_round_trips_to_the_same_rows() {
        let srcs = [
            "x^3 + y^3",
            "x^2*y + y^2*x",
            "x^3*y + y^2*z + z^2",
            "x^4 + y^3*z + z^2*y",
            "x1^2*x2 + x2^2*x3 + x3^3 + x4^5",
        ];
        for src in srcs {
            let a = matrix_of(src);
            let d = classify_invertible(&a).unwrap();
            let mut rebuilt = d.rows(a.cols());
            let mut original: Vec<Vec<u64>> = (0..a.rows())
                .map(|i| a.row(i).iter().map(|e| e.to_u64().unwrap()).collect())
                .collect();
            rebuilt.sort();
            original.sort();
            assert_eq!(rebuilt, original, "{src}");
        }
    }

    #[test]
    fn wn_family_shape() {
        let p = build_wn(4).unwrap();
        assert_eq!(p.monomial_count(), 8);
        let a = exponent_matrix(&p).unwrap();
        assert_eq!(a.norm(), BigInt::from(8));
        let mut rows: Vec<Vec<u64>> = (0..a.rows())
            .map(|i| a.row(i).iter().map(|e| e.to_u64().unwrap()).collect())
            .collect();
        rows.sort();
        let mut expected: Vec<Vec<u64>> = vec![
            vec![8, 0, 0, 0],
            vec![0, 8, 0, 0],
            vec![0, 0, 8, 0],
            vec![0, 0, 0, 8],
            vec![4, 4, 0, 0],
            vec![0, 4, 4, 0],
            vec![0, 0, 4, 4],
            vec![4, 0, 0, 4],
        ];
        expected.sort();
        assert_eq!(rows, expected);
        assert!(matches!(build_wn(3), Err(Error::InvalidParameter(_))));
        assert!(matches!(build_wn(2), Err(Error::InvalidParameter(_))));
    }
}
