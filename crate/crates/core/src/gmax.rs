//! The maximal diagonal symmetry group of an admissible polynomial:
//! the set of phase vectors g with A*g integral for every monomial row.
//!
//! Two algorithms compute it. The submatrix route intersects the groups
//! generated by the inverses of all invertible n-row submatrices, exiting
//! early once the intersection shrinks to the cyclic group generated by
//! the weight vector. The Smith route reads generators straight off the
//! Smith normal form: column i of Q scaled by 1/a_i. A brute-force
//! membership oracle cross-validates both on small inputs.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polynomial::{weights, ExponentMatrix, WeightSystem};
use crate::qz::{
    self, canonicalize, element_order, FiniteSubgroup, GroupElement, DEFAULT_GROUP_CAP,
};
use crate::snf;

/// Default cap on the number of candidates the brute-force oracle may try.
pub const DEFAULT_ORACLE_CAP: u64 = 1_000_000;

/// Outcome of a symmetry-group computation.
#[derive(Debug, Clone)]
pub struct GmaxResult {
    /// Canonical nonzero generators.
    pub generators: Vec<GroupElement>,
    /// Invariant factors above 1, present on the Smith route only. Unit
    /// factors contribute nothing to the group and are not retained.
    pub invariant_factors: Option<Vec<BigUint>>,
    /// Group order.
    pub order: BigUint,
    /// Full enumeration when requested or produced anyway.
    pub elements: Option<FiniteSubgroup>,
    /// Loop instrumentation, present on the submatrix route only.
    pub stats: Option<SubmatrixStats>,
}

/// Instrumentation for the submatrix loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SubmatrixStats {
    /// Row subsets examined (singular ones included).
    pub visited: u64,
    /// Whether the weight-group early exit fired.
    pub early_exit: bool,
}

/// Runtime knobs for the submatrix algorithm.
#[derive(Debug, Clone, Copy)]
pub struct SubmatrixOptions {
    /// Cap on intermediate group enumerations.
    pub group_cap: u64,
    /// Cooperative wall-clock deadline, checked between submatrices.
    pub deadline: Option<Instant>,
}

impl Default for SubmatrixOptions {
    fn default() -> Self {
        SubmatrixOptions {
            group_cap: DEFAULT_GROUP_CAP,
            deadline: None,
        }
    }
}

/// Membership test: true iff every row of A pairs with g to an integer.
pub fn is_member(a: &ExponentMatrix, g: &GroupElement) -> Result<bool> {
    if a.cols() != g.dimension() {
        return Err(Error::DimensionMismatch {
            left: a.cols(),
            right: g.dimension(),
        });
    }
    for i in 0..a.rows() {
        let dot: BigRational = a
            .row(i)
            .iter()
            .zip(g.phases())
            .map(|(e, p)| BigRational::from(e.clone()) * p.as_rational())
            .sum();
        if !dot.is_integer() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order of the cyclic group generated by the weight vector.
pub fn weight_group_order(q: &WeightSystem) -> BigUint {
    let g = canonicalize(q.as_slice()).expect("weight systems are nonempty");
    element_order(&g)
}

/// Lexicographic n-element subsets of {0, ..., m-1}.
pub(crate) struct RowSubsets {
    m: usize,
    n: usize,
    cur: Option<Vec<usize>>,
}

impl RowSubsets {
    pub(crate) fn new(m: usize, n: usize) -> Self {
        let cur = (n <= m).then(|| (0..n).collect());
        RowSubsets { m, n, cur }
    }
}

impl Iterator for RowSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.as_mut()?;
        let out = cur.clone();
        // lexicographic successor
        let mut i = self.n;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if cur[i] < self.m - self.n + i {
                cur[i] += 1;
                for j in i + 1..self.n {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Brute-force oracle. Picks the first invertible n-row submatrix A1 with
/// d = |det A1|; by Cramer's rule the whole group lives in (1/d)Z^n / Z^n,
/// so it enumerates the d^n phase vectors on that lattice and keeps the
/// members. Exact but exponential; guarded by a candidate cap.
pub fn brute_force_gmax(a: &ExponentMatrix) -> Result<FiniteSubgroup> {
    brute_force_gmax_with_cap(a, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_gmax_with_cap(a: &ExponentMatrix, cap: u64) -> Result<FiniteSubgroup> {
    let (m, n) = (a.rows(), a.cols());
    let d = RowSubsets::new(m, n)
        .map(|rows| a.matrix().select_rows(&rows).det())
        .find(|d| !d.is_zero())
        .expect("full column rank guarantees an invertible submatrix")
        .abs();

    let candidates = d.to_biguint().expect("absolute value").pow(n as u32);
    if candidates > BigUint::from(cap) {
        return Err(Error::OracleTooLarge {
            cap,
            needed: candidates,
        });
    }
    let d: u64 = d.to_u64().expect("d^n fits the cap, so d does");

    // Row coefficients reduced mod d; the membership test for c/d needs
    // only sum(a_ij * c_j) = 0 (mod d) per row.
    let coeffs: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            a.row(i)
                .iter()
                .map(|e| e.mod_floor(&BigInt::from(d)).to_u64().expect("reduced"))
                .collect()
        })
        .collect();

    let mut kept: Vec<Box<[u64]>> = Vec::new();
    let mut c = vec![0u64; n];
    'odometer: loop {
        let member = coeffs.iter().all(|row| {
            let sum: u128 = row
                .iter()
                .zip(&c)
                .map(|(&a, &x)| (a as u128 * x as u128) % d as u128)
                .sum();
            sum % d as u128 == 0
        });
        if member {
            kept.push(c.clone().into_boxed_slice());
        }
        // increment
        for j in (0..n).rev() {
            c[j] += 1;
            if c[j] < d {
                continue 'odometer;
            }
            c[j] = 0;
        }
        break;
    }
    Ok(FiniteSubgroup::from_lattice(n, vec![d; n], kept, None))
}

/// Working intersection for the submatrix loop.
///
/// Elements live on the lattice of the initial group. Each element caches
/// one integrality bit per row of A (when the row count allows), so
/// intersecting with a submatrix group reduces to a bitmask test; the
/// filtered sets are identical to intersecting with the enumerated group
/// generated by the inverse columns, because that group is exactly the set
/// of phase vectors the submatrix rows map into Z^n.
struct Workset {
    denoms: Vec<u64>,
    items: Vec<Box<[u64]>>,
    /// Per-item row masks, populated when m <= 64.
    masks: Option<Vec<u64>>,
    /// (a_ij mod L) * (L / D_j) mod L, for the direct row test.
    coeffs: Vec<Vec<u64>>,
    lcm: u64,
}

impl Workset {
    fn new(group: FiniteSubgroup, a: &ExponentMatrix) -> Self {
        let denoms = group.denominators().to_vec();
        let lcm = denoms.iter().fold(1u64, |acc, &d| acc.lcm(&d));
        let m = a.rows();
        let big_l = BigInt::from(lcm);
        let coeffs: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                a.row(i)
                    .iter()
                    .zip(&denoms)
                    .map(|(e, &dj)| {
                        let scale = BigInt::from(lcm / dj);
                        (e * scale).mod_floor(&big_l).to_u64().expect("reduced mod lcm")
                    })
                    .collect()
            })
            .collect();
        let items: Vec<Box<[u64]>> = group.raw_elements().to_vec();
        let masks = (m <= 64).then(|| {
            items
                .iter()
                .map(|e| {
                    let mut mask = 0u64;
                    for (r, row) in coeffs.iter().enumerate() {
                        if Self::row_ok(row, e, lcm) {
                            mask |= 1 << r;
                        }
                    }
                    mask
                })
                .collect()
        });
        Workset {
            denoms,
            items,
            masks,
            coeffs,
            lcm,
        }
    }

    fn row_ok(row: &[u64], e: &[u64], lcm: u64) -> bool {
        let sum: u128 = row
            .iter()
            .zip(e)
            .map(|(&c, &x)| (c as u128 * x as u128) % lcm as u128)
            .sum();
        sum % lcm as u128 == 0
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    /// Keep exactly the elements the given submatrix rows map into Z^n.
    fn intersect_with_rows(&mut self, rows: &[usize]) {
        match &mut self.masks {
            Some(masks) => {
                let need: u64 = rows.iter().fold(0, |acc, &r| acc | (1 << r));
                if self.items.iter().zip(masks.iter()).all(|(_, &m)| m & need == need) {
                    return;
                }
                let mut kept_items = Vec::with_capacity(self.items.len());
                let mut kept_masks = Vec::with_capacity(self.items.len());
                for (item, &mask) in self.items.iter().zip(masks.iter()) {
                    if mask & need == need {
                        kept_items.push(item.clone());
                        kept_masks.push(mask);
                    }
                }
                self.items = kept_items;
                *masks = kept_masks;
            }
            None => {
                let coeffs = &self.coeffs;
                let lcm = self.lcm;
                self.items.retain(|e| {
                    rows.iter().all(|&r| Self::row_ok(&coeffs[r], e, lcm))
                });
            }
        }
    }

    fn into_subgroup(self, dim: usize) -> FiniteSubgroup {
        FiniteSubgroup::from_lattice(dim, self.denoms, self.items, None)
    }
}

/// Submatrix algorithm with its instrumentation, whether or not it
/// completed. The error (timeout or cap) is paired with the loop counters
/// gathered so far.
pub fn gmax_submatrix_instrumented(
    a: &ExponentMatrix,
    opts: SubmatrixOptions,
) -> (Result<GmaxResult>, SubmatrixStats) {
    let mut stats = SubmatrixStats::default();
    let result = run_submatrix(a, opts, &mut stats);
    (result, stats)
}

/// Compute the symmetry group by intersecting submatrix groups.
pub fn gmax_submatrix(a: &ExponentMatrix, opts: SubmatrixOptions) -> Result<GmaxResult> {
    gmax_submatrix_instrumented(a, opts).0
}

fn run_submatrix(
    a: &ExponentMatrix,
    opts: SubmatrixOptions,
    stats: &mut SubmatrixStats,
) -> Result<GmaxResult> {
    let (m, n) = (a.rows(), a.cols());
    // Early-exit threshold: the weight group is the smallest the symmetry
    // group can be. Inputs without a weight system still have a
    // well-defined group; the loop then simply never exits early.
    let target: Option<BigUint> = weights(a).ok().map(|q| weight_group_order(&q));

    let mut work: Option<Workset> = None;
    for subset in RowSubsets::new(m, n) {
        stats.visited += 1;
        let sub = a.matrix().select_rows(&subset);
        if !sub.det().is_zero() {
            match &mut work {
                None => {
                    let cols = sub
                        .inverse_columns()
                        .expect("nonzero determinant");
                    let gens: Vec<GroupElement> = cols
                        .iter()
                        .map(|c| canonicalize(c).expect("n >= 1"))
                        .collect();
                    let group =
                        qz::generate_with_cap(n, &gens, opts.group_cap).map_err(|e| match e {
                            Error::GroupTooLarge { cap, detail } => Error::GroupTooLarge {
                                cap,
                                detail: Some(match detail {
                                    Some(d) => format!("submatrix rows {subset:?}: {d}"),
                                    None => format!("submatrix rows {subset:?}"),
                                }),
                            },
                            other => other,
                        })?;
                    work = Some(Workset::new(group, a));
                }
                Some(w) => w.intersect_with_rows(&subset),
            }
            let h = work.as_ref().expect("just set");
            if let Some(t) = &target {
                if BigUint::from(h.len() as u64) == *t {
                    stats.early_exit = true;
                    break;
                }
            }
        }
        if let Some(deadline) = opts.deadline {
            if Instant::now() >= deadline {
                return Err(Error::Timeout {
                    visited: stats.visited,
                });
            }
        }
    }

    let work = work.expect("full column rank guarantees an invertible submatrix");
    let sub = work.into_subgroup(n);
    #[cfg(debug_assertions)]
    if stats.early_exit {
        // The weight group must sit inside the final intersection.
        let q = weights(a).expect("early exit implies weights exist");
        let qe = canonicalize(q.as_slice()).expect("nonempty");
        let ord = weight_group_order(&q);
        let mut k = BigUint::zero();
        while k < ord {
            debug_assert!(sub.contains(&qe.scale(&k)));
            k += BigUint::one();
        }
    }
    let generators: Vec<GroupElement> = sub.iter().filter(|g| !g.is_identity()).collect();
    let order = BigUint::from(sub.order());
    Ok(GmaxResult {
        generators,
        invariant_factors: None,
        order,
        elements: Some(sub),
        stats: Some(*stats),
    })
}

/// Compute generators via the Smith normal form: scale column i of Q by
/// 1/a_i for every invariant factor above 1, canonicalize, and drop any
/// generator that lands on zero. The group order is the factor product.
pub fn gmax_smith(a: &ExponentMatrix) -> Result<GmaxResult> {
    gmax_smith_with(a, None)
}

/// Smith route with an opt-in full enumeration (capped).
pub fn gmax_smith_enumerated(a: &ExponentMatrix, cap: u64) -> Result<GmaxResult> {
    gmax_smith_with(a, Some(cap))
}

fn gmax_smith_with(a: &ExponentMatrix, enumerate_cap: Option<u64>) -> Result<GmaxResult> {
    let n = a.cols();
    let d = snf::smith_normal_form(a.matrix())?;
    let mut generators = Vec::new();
    for (i, factor) in d.invariant_factors.iter().enumerate() {
        if factor.is_one() {
            continue;
        }
        let denom = BigInt::from(factor.clone());
        let col: Vec<BigRational> = (0..n)
            .map(|r| BigRational::new(d.q[(r, i)].clone(), denom.clone()))
            .collect();
        let g = canonicalize(&col).expect("n >= 1");
        if !g.is_identity() {
            generators.push(g);
        }
    }
    debug_assert!(generators
        .iter()
        .all(|g| is_member(a, g).expect("dimensions agree")));
    let order = d
        .invariant_factors
        .iter()
        .fold(BigUint::one(), |acc, f| acc * f);
    let retained: Vec<BigUint> = d
        .invariant_factors
        .into_iter()
        .filter(|f| !f.is_one())
        .collect();
    let elements = match enumerate_cap {
        Some(cap) => Some(qz::generate_with_cap(n, &generators, cap)?),
        None => None,
    };
    Ok(GmaxResult {
        generators,
        invariant_factors: Some(retained),
        order,
        elements,
        stats: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::IntMatrix;
    use crate::polynomial::{build_wn, exponent_matrix};

    fn exm(rows: &[&[i64]]) -> ExponentMatrix {
        ExponentMatrix::new(IntMatrix::from_i64s(rows)).unwrap()
    }

    fn ge(coords: &[(i64, i64)]) -> GroupElement {
        let rats: Vec<BigRational> = coords
            .iter()
            .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect();
        canonicalize(&rats).unwrap()
    }

    fn worked_example() -> ExponentMatrix {
        exm(&[&[3, 0], &[0, 3], &[2, 1]])
    }

    fn golden_three() -> Vec<GroupElement> {
        vec![ge(&[(0, 1), (0, 1)]), ge(&[(1, 3), (1, 3)]), ge(&[(2, 3), (2, 3)])]
    }

    #[test]
    fn membership_on_the_worked_example() {
        let a = worked_example();
        assert!(is_member(&a, &ge(&[(1, 3), (1, 3)])).unwrap());
        // in the diagonal submatrix group but killed by the row (2,1)
        assert!(!is_member(&a, &ge(&[(1, 3), (0, 1)])).unwrap());
        assert!(is_member(&a, &GroupElement::identity(2)).unwrap());
        assert!(is_member(&a, &GroupElement::identity(3)).is_err());
    }

    #[test]
    fn row_subsets_enumerate_lexicographically() {
        let all: Vec<Vec<usize>> = RowSubsets::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(RowSubsets::new(8, 4).count(), 70);
    }

    #[test]
    fn oracle_on_small_matrices() {
        let g = brute_force_gmax(&worked_example()).unwrap();
        assert_eq!(g.elements(), golden_three());

        let g = brute_force_gmax(&exm(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(g.order(), 4);

        let g = brute_force_gmax(&exm(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.elements(), vec![GroupElement::identity(2)]);
    }

    #[test]
    fn oracle_cap_is_enforced() {
        let err = brute_force_gmax_with_cap(&exm(&[&[7, 0], &[0, 7]]), 10).unwrap_err();
        assert!(matches!(err, Error::OracleTooLarge { cap: 10, .. }));
    }

    #[test]
    fn submatrix_algorithm_reproduces_the_worked_example() {
        let a = worked_example();
        let r = gmax_submatrix(&a, SubmatrixOptions::default()).unwrap();
        assert_eq!(r.elements.unwrap().elements(), golden_three());
        assert_eq!(r.order, BigUint::from(3u32));
        let stats = r.stats.unwrap();
        // the second submatrix already pins the intersection to the weight
        // group, so the third is never visited
        assert_eq!(stats.visited, 2);
        assert!(stats.early_exit);
        assert_eq!(r.generators.len(), 2);
    }

    #[test]
    fn square_invertible_case_needs_one_submatrix() {
        let a = exm(&[&[3, 0], &[0, 3]]);
        let r = gmax_submatrix(&a, SubmatrixOptions::default()).unwrap();
        assert_eq!(r.order, BigUint::from(9u32));
        let stats = r.stats.unwrap();
        assert_eq!(stats.visited, 1);
        assert!(!stats.early_exit);
    }

    #[test]
    fn submatrix_cap_names_the_offender() {
        let a = exm(&[&[7, 0], &[0, 7]]);
        let opts = SubmatrixOptions {
            group_cap: 10,
            deadline: None,
        };
        let (res, stats) = gmax_submatrix_instrumented(&a, opts);
        match res {
            Err(Error::GroupTooLarge { cap: 10, detail: Some(d) }) => {
                assert!(d.contains("[0, 1]"), "{d}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(stats.visited, 1);
    }

    #[test]
    fn smith_route_on_the_worked_example() {
        let a = worked_example();
        let r = gmax_smith(&a).unwrap();
        assert_eq!(r.generators, vec![ge(&[(1, 3), (1, 3)])]);
        assert_eq!(
            r.invariant_factors.as_ref().unwrap(),
            &vec![BigUint::from(3u32)]
        );
        assert_eq!(r.order, BigUint::from(3u32));
        assert!(r.elements.is_none());

        let r = gmax_smith_enumerated(&a, 100).unwrap();
        assert_eq!(r.elements.unwrap().elements(), golden_three());
    }

    #[test]
    fn smith_route_matches_diagonal_generators_up_to_regeneration() {
        let a = exm(&[&[3, 0], &[0, 3]]);
        let r = gmax_smith_enumerated(&a, 100).unwrap();
        assert_eq!(r.order, BigUint::from(9u32));
        let got = r.elements.unwrap();
        let want = qz::generate(2, &[ge(&[(1, 3), (0, 1)]), ge(&[(0, 1), (1, 3)])]).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn smith_oracle_and_submatrix_agree_off_diagonal() {
        let a = exm(&[&[2, 1], &[1, 2]]);
        let oracle = brute_force_gmax(&a).unwrap();
        assert_eq!(oracle.order(), 3);
        assert_eq!(oracle.elements(), golden_three());

        let smith = gmax_smith_enumerated(&a, 100).unwrap();
        assert_eq!(smith.order, BigUint::from(3u32));
        assert_eq!(smith.elements.unwrap(), oracle);

        let sm = gmax_submatrix(&a, SubmatrixOptions::default()).unwrap();
        assert_eq!(sm.elements.unwrap(), oracle);
    }

    #[test]
    fn benchmark_family_routes_agree_without_early_exit() {
        let a = exponent_matrix(&build_wn(4).unwrap()).unwrap();
        let (res, stats) = gmax_submatrix_instrumented(&a, SubmatrixOptions::default());
        let r = res.unwrap();
        assert_eq!(stats.visited, 70);
        assert!(!stats.early_exit);
        // |G| = 2 * 4^4: phases c_i/8 with all c_i of equal parity
        assert_eq!(r.order, BigUint::from(512u32));

        let smith = gmax_smith_enumerated(&a, 10_000).unwrap();
        assert_eq!(smith.order, BigUint::from(512u32));
        assert_eq!(smith.elements.unwrap(), r.elements.unwrap());
    }

    #[test]
    fn inputs_without_weights_still_compute() {
        // rows (1,0) and (2,0) make A*q = 1 inconsistent; the group is trivial
        let a = exm(&[&[1, 0], &[2, 0], &[0, 1]]);
        let r = gmax_submatrix(&a, SubmatrixOptions::default()).unwrap();
        assert_eq!(r.order, BigUint::from(1u32));
        let stats = r.stats.unwrap();
        assert_eq!(stats.visited, 3);
        assert!(!stats.early_exit);
        assert_eq!(brute_force_gmax(&a).unwrap().order(), 1);
    }

    #[test]
    fn weight_group_orders() {
        let q = weights(&worked_example()).unwrap();
        assert_eq!(weight_group_order(&q), BigUint::from(3u32));

        let w4 = exponent_matrix(&build_wn(4).unwrap()).unwrap();
        assert_eq!(weight_group_order(&weights(&w4).unwrap()), BigUint::from(8u32));

        let q = WeightSystem::new(vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(3)),
        ])
        .unwrap();
        assert_eq!(weight_group_order(&q), BigUint::from(6u32));
    }

    #[test]
    fn timeout_fires_between_submatrices() {
        let a = exponent_matrix(&build_wn(4).unwrap()).unwrap();
        let opts = SubmatrixOptions {
            group_cap: DEFAULT_GROUP_CAP,
            deadline: Some(Instant::now()),
        };
        let (res, stats) = gmax_submatrix_instrumented(&a, opts);
        assert!(matches!(res, Err(Error::Timeout { visited: 1 })));
        assert_eq!(stats.visited, 1);
    }
}
