//! Smith normal form of integer matrices with unimodular witnesses.
//!
//! Classical elimination: repeatedly move a smallest-magnitude nonzero
//! entry into the pivot slot, clear its row and column by Euclidean steps,
//! and repair divisibility violations by folding an offending row into the
//! pivot row. Every elementary operation is mirrored in P and Q so that
//! S = P*A*Q holds exactly at all times.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::IntMatrix;

/// S = P*A*Q with P, Q unimodular and S diagonal with the divisibility
/// chain a1 | a2 | ... | an on positive invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub invariant_factors: Vec<BigUint>,
}

struct Elimination {
    s: IntMatrix,
    p: IntMatrix,
    q: IntMatrix,
}

impl Elimination {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.s.cols() {
            let tmp = self.s[(i, c)].clone();
            self.s[(i, c)] = self.s[(j, c)].clone();
            self.s[(j, c)] = tmp;
        }
        for c in 0..self.p.cols() {
            let tmp = self.p[(i, c)].clone();
            self.p[(i, c)] = self.p[(j, c)].clone();
            self.p[(j, c)] = tmp;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.s.rows() {
            let tmp = self.s[(r, i)].clone();
            self.s[(r, i)] = self.s[(r, j)].clone();
            self.s[(r, j)] = tmp;
        }
        for r in 0..self.q.rows() {
            let tmp = self.q[(r, i)].clone();
            self.q[(r, i)] = self.q[(r, j)].clone();
            self.q[(r, j)] = tmp;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.s.cols() {
            let v = -self.s[(i, c)].clone();
            self.s[(i, c)] = v;
        }
        for c in 0..self.p.cols() {
            let v = -self.p[(i, c)].clone();
            self.p[(i, c)] = v;
        }
    }

    /// row_i -= f * row_k
    fn row_sub(&mut self, i: usize, k: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for c in 0..self.s.cols() {
            let delta = f * &self.s[(k, c)];
            self.s[(i, c)] -= delta;
        }
        for c in 0..self.p.cols() {
            let delta = f * &self.p[(k, c)];
            self.p[(i, c)] -= delta;
        }
    }

    /// col_j -= f * col_k
    fn col_sub(&mut self, j: usize, k: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for r in 0..self.s.rows() {
            let delta = f * &self.s[(r, k)];
            self.s[(r, j)] -= delta;
        }
        for r in 0..self.q.rows() {
            let delta = f * &self.q[(r, k)];
            self.q[(r, j)] -= delta;
        }
    }

    /// row_dst += row_src
    fn row_add(&mut self, dst: usize, src: usize) {
        for c in 0..self.s.cols() {
            let delta = self.s[(src, c)].clone();
            self.s[(dst, c)] += delta;
        }
        for c in 0..self.p.cols() {
            let delta = self.p[(src, c)].clone();
            self.p[(dst, c)] += delta;
        }
    }

    /// Smallest-magnitude nonzero entry of the block starting at (k, k);
    /// ties break to the lowest (row, col). Row-major scan order makes the
    /// first minimum found the tie winner.
    fn smallest_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in k..self.s.rows() {
            for j in k..self.s.cols() {
                let v = &self.s[(i, j)];
                if v.is_zero() {
                    continue;
                }
                let mag = v.abs();
                match &best {
                    Some((m, _, _)) if *m <= mag => {}
                    _ => best = Some((mag, i, j)),
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn row_clear_below(&mut self, k: usize) {
        for i in k + 1..self.s.rows() {
            if !self.s[(i, k)].is_zero() {
                let f = self.s[(i, k)].div_floor(&self.s[(k, k)]);
                self.row_sub(i, k, &f);
            }
        }
    }

    fn col_clear_right(&mut self, k: usize) {
        for j in k + 1..self.s.cols() {
            if !self.s[(k, j)].is_zero() {
                let f = self.s[(k, j)].div_floor(&self.s[(k, k)]);
                self.col_sub(j, k, &f);
            }
        }
    }

    fn cross_cleared(&self, k: usize) -> bool {
        (k + 1..self.s.rows()).all(|i| self.s[(i, k)].is_zero())
            && (k + 1..self.s.cols()).all(|j| self.s[(k, j)].is_zero())
    }

    /// First entry of the inner block not divisible by the pivot.
    fn divisibility_offender(&self, k: usize) -> Option<usize> {
        let pivot = &self.s[(k, k)];
        for i in k + 1..self.s.rows() {
            for j in k + 1..self.s.cols() {
                if !self.s[(i, j)].mod_floor(pivot).is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Smith normal form of an integer matrix of full column rank.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithDecomposition> {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 {
        return Err(Error::InvalidDimension);
    }
    let mut e = Elimination {
        s: a.clone(),
        p: IntMatrix::identity(m),
        q: IntMatrix::identity(n),
    };

    for k in 0..n {
        if k >= m {
            return Err(Error::RankDeficient { rank: k, cols: n });
        }
        loop {
            let Some((pi, pj)) = e.smallest_pivot(k) else {
                // Nothing left in the block: fewer than n nonzero factors.
                return Err(Error::RankDeficient { rank: k, cols: n });
            };
            e.swap_rows(k, pi);
            e.swap_cols(k, pj);
            if e.s[(k, k)].is_negative() {
                e.negate_row(k);
            }
            e.row_clear_below(k);
            e.col_clear_right(k);
            if !e.cross_cleared(k) {
                continue;
            }
            match e.divisibility_offender(k) {
                Some(i) => e.row_add(k, i),
                None => break,
            }
        }
    }

    let invariant_factors: Vec<BigUint> = (0..n)
        .map(|k| e.s[(k, k)].to_biguint().expect("sign-normalized pivot"))
        .collect();
    debug_assert!(e.s == e.p.mul(a).mul(&e.q));
    Ok(SmithDecomposition {
        s: e.s,
        p: e.p,
        q: e.q,
        invariant_factors,
    })
}

/// Independent checker: S = P*A*Q, P and Q unimodular, S diagonal with a
/// positive divisibility chain matching the recorded invariant factors.
pub fn verify(a: &IntMatrix, d: &SmithDecomposition) -> bool {
    let (m, n) = (a.rows(), a.cols());
    if d.s.rows() != m || d.s.cols() != n || d.p.rows() != m || d.p.cols() != m {
        return false;
    }
    if d.q.rows() != n || d.q.cols() != n || d.invariant_factors.len() != n {
        return false;
    }
    if d.s != d.p.mul(a).mul(&d.q) {
        return false;
    }
    if !d.p.det().abs().is_one() || !d.q.det().abs().is_one() {
        return false;
    }
    for i in 0..m {
        for j in 0..n {
            if i != j && !d.s[(i, j)].is_zero() {
                return false;
            }
        }
    }
    let mut prev: Option<&BigUint> = None;
    for (k, f) in d.invariant_factors.iter().enumerate() {
        if f.is_zero() || d.s[(k, k)] != BigInt::from(f.clone()) {
            return false;
        }
        if let Some(p) = prev {
            if !f.mod_floor(p).is_zero() {
                return false;
            }
        }
        prev = Some(f);
    }
    true
}
