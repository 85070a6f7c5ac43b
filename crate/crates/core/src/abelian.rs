//! Finite Abelian groups `Z_{s_1} ⊕ ... ⊕ Z_{s_d}` in invariant-factor form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zmatrix::{self, IntMatrix};

/// Invariant factors `s_1 | s_2 | ... | s_d` of a finite Abelian group.
///
/// Leading 1s are allowed, so the length of the chain is the ambient rank
/// used for coordinates, not the minimal number of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct InvariantFactors {
    moduli: Vec<u64>,
}

impl InvariantFactors {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::EmptyModuli);
        }
        if let Some(bad) = moduli.iter().find(|&&s| s == 0) {
            return Err(Error::InvalidModulus(bad.to_string()));
        }
        if moduli.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::NotDivisibilityChain(moduli));
        }
        moduli
            .iter()
            .try_fold(1u64, |acc, &s| acc.checked_mul(s))
            .ok_or(Error::OrderOverflow)?;
        Ok(InvariantFactors { moduli })
    }

    /// The cyclic group `Z_n`, padded with leading 1s to the given rank.
    pub fn cyclic(n: u64, rank: usize) -> Result<Self> {
        let mut moduli = vec![1; rank.saturating_sub(1)];
        moduli.push(n);
        Self::new(moduli)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    /// Largest invariant factor, which is the exponent of the group.
    pub fn exponent(&self) -> u64 {
        *self.moduli.last().expect("nonempty")
    }

    pub fn is_cyclic(&self) -> bool {
        self.moduli[..self.rank() - 1].iter().all(|&s| s == 1)
    }

    /// Same group with leading 1s added up to `rank`.
    pub fn padded(&self, rank: usize) -> Self {
        let mut moduli = vec![1; rank.saturating_sub(self.rank())];
        moduli.extend_from_slice(&self.moduli);
        InvariantFactors { moduli }
    }

    /// `tG`: every modulus multiplied by `t`.
    pub fn scaled(&self, t: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidDilation);
        }
        let moduli = self
            .moduli
            .iter()
            .map(|&s| s.checked_mul(t).ok_or(Error::OrderOverflow))
            .collect::<Result<Vec<_>>>()?;
        Self::new(moduli)
    }

    /// Reduces an integer vector into the group.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        self.check_len(coords.len())?;
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &s)| (c as i128).rem_euclid(s as i128) as u64)
                .collect(),
        })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// Mixed-radix strides; the first coordinate is most significant so that
    /// index order agrees with lexicographic order on coordinates.
    pub fn strides(&self) -> Vec<u64> {
        let mut strides = vec![1u64; self.rank()];
        for i in (0..self.rank().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.moduli[i + 1];
        }
        strides
    }

    pub fn index_of(&self, a: &GroupElement) -> u64 {
        a.coords
            .iter()
            .zip(self.strides())
            .map(|(&c, st)| c * st)
            .sum()
    }

    pub fn element_at(&self, index: u64) -> GroupElement {
        let strides = self.strides();
        GroupElement {
            coords: strides
                .iter()
                .zip(&self.moduli)
                .map(|(&st, &s)| (index / st) % s)
                .collect(),
        }
    }

    /// All elements in index (lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_len(a.coords.len())?;
        self.check_len(b.coords.len())?;
        Ok(GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.moduli)
                .map(|((&x, &y), &s)| ((x as u128 + y as u128) % s as u128) as u64)
                .collect(),
        })
    }

    /// `k * a`.
    pub fn scalar_mul(&self, k: u64, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &s)| ((x as u128 * k as u128) % s as u128) as u64)
                .collect(),
        }
    }

    pub fn conforms(&self, a: &GroupElement) -> bool {
        a.coords.len() == self.rank() && a.coords.iter().zip(&self.moduli).all(|(&c, &s)| c < s)
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank(),
                found,
            })
        }
    }
}

impl TryFrom<Vec<u64>> for InvariantFactors {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        InvariantFactors::new(v)
    }
}

impl From<InvariantFactors> for Vec<u64> {
    fn from(g: InvariantFactors) -> Self {
        g.moduli
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join(&self.moduli))
    }
}

/// An element with coordinates normalized into `[0, s_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Coordinates in the symmetric range, e.g. 4 in `Z_16` shows as 4 but
    /// 15 shows as -1. Used for display only.
    pub fn signed(&self, group: &InvariantFactors) -> Vec<i64> {
        self.coords
            .iter()
            .zip(group.moduli())
            .map(|(&c, &s)| {
                if c > s / 2 {
                    c as i64 - s as i64
                } else {
                    c as i64
                }
            })
            .collect()
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.coords.iter().map(|&c| c as i64).collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.coords))
    }
}

pub(crate) fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn add(group: &InvariantFactors, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    group.add(a, b)
}

/// Canonical invariant factors of `Z_{m_1} ⊕ ... ⊕ Z_{m_k}`, same length as
/// the input.
pub fn canonical_invariant_factors(moduli: &[i64]) -> Result<InvariantFactors> {
    if moduli.is_empty() {
        return Err(Error::EmptyModuli);
    }
    if let Some(bad) = moduli.iter().find(|&&m| m <= 0) {
        return Err(Error::InvalidModulus(bad.to_string()));
    }
    let diag = IntMatrix::diagonal(moduli);
    let factors = zmatrix::invariant_factors(&diag)
        .iter()
        .map(zmatrix::big_to_u64)
        .collect::<Result<Vec<_>>>()?;
    InvariantFactors::new(factors)
}

/// Every length-`d` chain `s_1 | ... | s_d` with product `n`.
///
/// Ordered by ascending `s_1`, then recursively by the tail.
pub fn enumerate_groups(n: u64, d: usize) -> Vec<InvariantFactors> {
    chains(n, d)
        .into_iter()
        .map(|moduli| InvariantFactors { moduli })
        .collect()
}

fn chains(n: u64, d: usize) -> Vec<Vec<u64>> {
    if n == 0 || d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    // s_1 = a forces every later factor to be a multiple of a.
    for a in 1u64.. {
        let Some(pow) = a.checked_pow(d as u32) else {
            break;
        };
        if pow > n {
            break;
        }
        if n % pow != 0 {
            continue;
        }
        for tail in chains(n / pow, d - 1) {
            let mut chain = Vec::with_capacity(d);
            chain.push(a);
            chain.extend(tail.into_iter().map(|t| t * a));
            out.push(chain);
        }
    }
    out
}

/// Whether `gens` generate the whole group.
///
/// The columns of `gens` together with `diag(s)` span `Z^d` exactly when
/// every invariant factor of `[gens | diag(s)]` equals 1.
pub fn generates(group: &InvariantFactors, gens: &[GroupElement]) -> Result<bool> {
    let d = group.rank();
    for g in gens {
        group.check_len(g.coords.len())?;
    }
    let mut m = IntMatrix::zeros(d, gens.len() + d);
    for (j, g) in gens.iter().enumerate() {
        for i in 0..d {
            m[(i, j)] = BigInt::from(g.coords[i]);
        }
    }
    for i in 0..d {
        m[(i, gens.len() + i)] = BigInt::from(group.moduli[i]);
    }
    Ok(zmatrix::invariant_factors(&m).iter().all(One::is_one))
}
