//! Exact arithmetic in the group (Q/Z)^n.
//!
//! Group elements are vectors of canonical phases: reduced rationals in
//! [0, 1). Finite subgroups are held fully enumerated. Internally a
//! subgroup stores its elements as integer numerators over a fixed
//! per-coordinate denominator lattice, which keeps closures with millions
//! of elements compact; the public surface always speaks in reduced
//! rationals.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on the number of elements a closure may enumerate.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

/// One coordinate of a group element: a reduced rational in [0, 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(BigRational);

impl Phase {
    pub fn zero() -> Self {
        Phase(BigRational::zero())
    }

    /// Reduce an arbitrary rational modulo Z into [0, 1).
    pub fn from_rational(r: &BigRational) -> Self {
        Phase(r - r.floor())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, other: &Phase) -> Phase {
        Phase::from_rational(&(&self.0 + &other.0))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Phase> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim().parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad rational {s:?}"),
            })
        };
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("zero denominator in {s:?}"),
                    });
                }
                BigRational::new(parse_int(n)?, den)
            }
            None => BigRational::from(parse_int(s)?),
        };
        Ok(Phase::from_rational(&r))
    }
}

/// Element of (Q/Z)^n held by its canonical phase vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    phases: Vec<Phase>,
}

impl GroupElement {
    pub fn identity(dim: usize) -> Self {
        GroupElement {
            phases: vec![Phase::zero(); dim],
        }
    }

    pub fn dimension(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(Phase::is_zero)
    }

    /// Coordinate-wise addition modulo Z.
    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                left: self.dimension(),
                right: other.dimension(),
            });
        }
        Ok(GroupElement {
            phases: self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// Integer multiple `k * g` modulo Z.
    pub fn scale(&self, k: &BigUint) -> GroupElement {
        let k = BigInt::from(k.clone());
        GroupElement {
            phases: self
                .phases
                .iter()
                .map(|p| Phase::from_rational(&(p.as_rational() * &k)))
                .collect(),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.phases.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Canonical representative of a rational vector in (Q/Z)^n.
pub fn canonicalize(raw: &[BigRational]) -> Result<GroupElement> {
    if raw.is_empty() {
        return Err(Error::InvalidDimension);
    }
    Ok(GroupElement {
        phases: raw.iter().map(Phase::from_rational).collect(),
    })
}

/// Order of a single element: the lcm of its phase denominators.
pub fn element_order(g: &GroupElement) -> BigUint {
    g.phases
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()))
        .to_biguint()
        .expect("denominators are positive")
}

/// Finite subgroup of (Q/Z)^n with its full element enumeration.
///
/// Elements are stored as numerator vectors over a tight per-coordinate
/// denominator lattice and kept sorted, so iteration order is reproducible
/// and equality compares element sets (the recorded generating set is a
/// presentation, not part of the group's identity).
#[derive(Debug, Clone)]
pub struct FiniteSubgroup {
    dim: usize,
    denoms: Vec<u64>,
    elements: Vec<Box<[u64]>>,
    generators: Vec<GroupElement>,
}

impl PartialEq for FiniteSubgroup {
    fn eq(&self, other: &Self) -> bool {
        // lattices are tight, so equal element sets iff equal encodings
        self.dim == other.dim && self.denoms == other.denoms && self.elements == other.elements
    }
}

impl Eq for FiniteSubgroup {}

impl FiniteSubgroup {
    pub fn trivial(dim: usize) -> Self {
        FiniteSubgroup {
            dim,
            denoms: vec![1; dim],
            elements: vec![vec![0; dim].into_boxed_slice()],
            generators: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn iter(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.elements.iter().map(|e| decode(&self.denoms, e))
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.iter().collect()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        if g.dimension() != self.dim {
            return false;
        }
        let mut key = Vec::with_capacity(self.dim);
        for (p, &d) in g.phases().iter().zip(&self.denoms) {
            let dd = BigInt::from(d);
            let (q, r) = dd.div_rem(p.denom());
            if !r.is_zero() {
                return false;
            }
            let num = p.numer() * q;
            key.push(num.to_u64().expect("canonical numerator below denominator"));
        }
        self.elements.binary_search_by(|e| e.as_ref().cmp(key.as_slice())).is_ok()
    }

    pub(crate) fn denominators(&self) -> &[u64] {
        &self.denoms
    }

    pub(crate) fn raw_elements(&self) -> &[Box<[u64]>] {
        &self.elements
    }

    /// Build a subgroup from raw lattice data: tightens the lattice to the
    /// exact per-coordinate projection order, sorts, and (unless explicit
    /// generators are supplied) records the full element list as the
    /// generating set.
    pub(crate) fn from_lattice(
        dim: usize,
        mut denoms: Vec<u64>,
        mut elements: Vec<Box<[u64]>>,
        generators: Option<Vec<GroupElement>>,
    ) -> Self {
        for j in 0..dim {
            let mut g = denoms[j];
            for e in &elements {
                g = g.gcd(&e[j]);
                if g == 1 {
                    break;
                }
            }
            if g > 1 {
                denoms[j] /= g;
                for e in &mut elements {
                    e[j] /= g;
                }
            }
        }
        elements.sort_unstable();
        elements.dedup();
        let mut sub = FiniteSubgroup {
            dim,
            denoms,
            elements,
            generators: Vec::new(),
        };
        sub.generators = generators.unwrap_or_else(|| sub.elements());
        sub
    }
}

fn decode(denoms: &[u64], nums: &[u64]) -> GroupElement {
    GroupElement {
        phases: nums
            .iter()
            .zip(denoms)
            .map(|(&n, &d)| Phase(BigRational::new(BigInt::from(n), BigInt::from(d))))
            .collect(),
    }
}

/// Closure of a generating set under addition mod Z, with the default cap.
pub fn generate(dim: usize, gens: &[GroupElement]) -> Result<FiniteSubgroup> {
    generate_with_cap(dim, gens, DEFAULT_GROUP_CAP)
}

/// Closure of a generating set under addition mod Z.
///
/// Every generator has finite order, so the closure terminates; the cap
/// converts runaway enumerations into an error instead. The enumeration is
/// a breadth-first walk adding one generator at a time.
pub fn generate_with_cap(dim: usize, gens: &[GroupElement], cap: u64) -> Result<FiniteSubgroup> {
    if dim == 0 {
        return Err(Error::InvalidDimension);
    }
    for g in gens {
        if g.dimension() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: g.dimension(),
            });
        }
    }

    // Per-coordinate lattice denominator: lcm of generator denominators.
    // The group's exponent is the lcm of these, which bounds |G| from below,
    // so an oversized lcm fails fast.
    let mut denoms_big = vec![BigInt::one(); dim];
    for g in gens {
        for (j, p) in g.phases().iter().enumerate() {
            denoms_big[j] = denoms_big[j].lcm(p.denom());
        }
    }
    let exponent = denoms_big.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
    if exponent > BigInt::from(cap) {
        return Err(Error::GroupTooLarge {
            cap,
            detail: Some(format!(
                "generator denominators force at least {exponent} elements"
            )),
        });
    }
    let denoms: Vec<u64> = denoms_big
        .iter()
        .map(|d| d.to_u64().expect("lattice denominator bounded by cap"))
        .collect();

    let encoded: Vec<Box<[u64]>> = gens
        .iter()
        .map(|g| {
            g.phases()
                .iter()
                .zip(&denoms_big)
                .map(|(p, d)| {
                    let num = p.numer() * (d / p.denom());
                    num.to_u64().expect("numerator below denominator")
                })
                .collect()
        })
        .collect();

    let mut set: IndexSet<Box<[u64]>> = IndexSet::new();
    set.insert(vec![0; dim].into_boxed_slice());
    let mut scratch = vec![0u64; dim];
    let mut next = 0usize;
    while next < set.len() {
        scratch.copy_from_slice(set.get_index(next).expect("in range"));
        for g in &encoded {
            let sum: Box<[u64]> = scratch
                .iter()
                .zip(g.iter())
                .zip(&denoms)
                .map(|((&a, &b), &d)| ((a as u128 + b as u128) % d as u128) as u64)
                .collect();
            if !set.contains(&sum) {
                if set.len() as u64 >= cap {
                    return Err(Error::GroupTooLarge { cap, detail: None });
                }
                set.insert(sum);
            }
        }
        next += 1;
    }

    let mut elements: Vec<Box<[u64]>> = set.into_iter().collect();
    elements.sort_unstable();
    Ok(FiniteSubgroup {
        dim,
        denoms,
        elements,
        generators: gens.to_vec(),
    })
}

/// Set intersection of two enumerated subgroups; the result is again a
/// subgroup, with the full element list recorded as its generating set.
pub fn intersect(g1: &FiniteSubgroup, g2: &FiniteSubgroup) -> Result<FiniteSubgroup> {
    if g1.dim != g2.dim {
        return Err(Error::DimensionMismatch {
            left: g1.dim,
            right: g2.dim,
        });
    }
    let (small, large) = if g1.elements.len() <= g2.elements.len() {
        (g1, g2)
    } else {
        (g2, g1)
    };
    let dim = small.dim;
    let meet: Vec<u64> = (0..dim).map(|j| small.denoms[j].gcd(&large.denoms[j])).collect();

    let mut kept = Vec::new();
    let mut key = vec![0u64; dim];
    'outer: for e in &small.elements {
        for j in 0..dim {
            // e_j / Dsmall_j must live in the large lattice.
            let scaled = e[j] as u128 * large.denoms[j] as u128;
            if scaled % small.denoms[j] as u128 != 0 {
                continue 'outer;
            }
            key[j] = (scaled / small.denoms[j] as u128) as u64;
        }
        if large
            .elements
            .binary_search_by(|x| x.as_ref().cmp(key.as_slice()))
            .is_ok()
        {
            let over_meet: Box<[u64]> = (0..dim)
                .map(|j| (e[j] as u128 * meet[j] as u128 / small.denoms[j] as u128) as u64)
                .collect();
            kept.push(over_meet);
        }
    }
    Ok(FiniteSubgroup::from_lattice(dim, meet, kept, None))
}

/// Cardinality of an enumerated subgroup.
pub fn order(g: &FiniteSubgroup) -> u64 {
    g.order()
}

/// Breadth-first queue variant used by tests to double-check the closure
/// (kept separate from the production path on purpose).
#[doc(hidden)]
pub fn closure_size_reference(dim: usize, gens: &[GroupElement], cap: usize) -> Option<usize> {
    let mut seen: std::collections::HashSet<GroupElement> = Default::default();
    let mut queue = VecDeque::new();
    let id = GroupElement::identity(dim);
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.add(g).ok()?;
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return None;
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Some(seen.len())
}
