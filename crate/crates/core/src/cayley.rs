//! Cayley digraphs on finite Abelian groups and their distances.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::abelian::{self, join, GroupElement, InvariantFactors};
use crate::error::{Error, Result};
use crate::zmatrix::{self, IntMatrix};

/// `Cay(G, T)` with an ordered generating set.
///
/// Each generator is kept as the integer vector it was written with (its
/// lift) as well as its reduction into the group. The two agree in `G`, but
/// only the lift survives dilation: `(1,-1)` in `Z_1 ⊕ Z_3` is the same
/// element as `(0,2)`, yet in `Z_2 ⊕ Z_6` they differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DigraphLiteral", into = "DigraphLiteral")]
pub struct CayleyDigraph {
    group: InvariantFactors,
    lifts: Vec<Vec<i64>>,
    gens: Vec<GroupElement>,
}

/// Wire form: `{"moduli":[3,24],"gens":[[0,1],[-1,3]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphLiteral {
    pub moduli: Vec<u64>,
    pub gens: Vec<Vec<i64>>,
}

impl TryFrom<DigraphLiteral> for CayleyDigraph {
    type Error = Error;

    fn try_from(lit: DigraphLiteral) -> Result<Self> {
        CayleyDigraph::new(InvariantFactors::new(lit.moduli)?, lit.gens)
    }
}

impl From<CayleyDigraph> for DigraphLiteral {
    fn from(g: CayleyDigraph) -> Self {
        DigraphLiteral {
            moduli: g.group.moduli().to_vec(),
            gens: g.lifts,
        }
    }
}

impl CayleyDigraph {
    /// Validates and builds a digraph.
    ///
    /// When the group has smaller rank than the number of generators and the
    /// generators are written at that smaller rank, both are padded on the
    /// left (`Z_16` with `{1,4,5}` becomes `Z_1 ⊕ Z_1 ⊕ Z_16`).
    pub fn new(group: InvariantFactors, lifts: Vec<Vec<i64>>) -> Result<Self> {
        let d = lifts.len();
        if d == 0 {
            return Err(Error::NotGenerating);
        }
        let (group, lifts) = if group.rank() < d && lifts.iter().all(|l| l.len() == group.rank()) {
            let pad = d - group.rank();
            let lifts = lifts
                .into_iter()
                .map(|l| std::iter::repeat(0).take(pad).chain(l).collect())
                .collect();
            (group.padded(d), lifts)
        } else {
            (group, lifts)
        };
        if group.rank() != d {
            return Err(Error::RankMismatch {
                rank: group.rank(),
                degree: d,
            });
        }
        let gens = lifts
            .iter()
            .map(|l| group.element(l))
            .collect::<Result<Vec<_>>>()?;
        if let Some(i) = gens.iter().position(GroupElement::is_zero) {
            return Err(Error::ZeroGenerator(i));
        }
        for i in 0..d {
            for j in i + 1..d {
                if gens[i] == gens[j] {
                    return Err(Error::DuplicateGenerator(i, j));
                }
            }
        }
        if !abelian::generates(&group, &gens)? {
            return Err(Error::NotGenerating);
        }
        Ok(CayleyDigraph { group, lifts, gens })
    }

    /// Convenience constructor from moduli and generator literals.
    pub fn from_parts(moduli: &[u64], gens: &[&[i64]]) -> Result<Self> {
        Self::new(
            InvariantFactors::new(moduli.to_vec())?,
            gens.iter().map(|g| g.to_vec()).collect(),
        )
    }

    /// The digraph `Cay(Z^d / M Z^d, E_d)` presented through the SNF of `M`:
    /// generators are the columns of the unimodular witness `U`.
    pub fn from_tessellation(m: &IntMatrix) -> Result<Self> {
        let (group, lifts) = zmatrix::proper_lifts(m)?;
        Self::new(group, lifts)
    }

    pub fn group(&self) -> &InvariantFactors {
        &self.group
    }

    pub fn gens(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn lifts(&self) -> &[Vec<i64>] {
        &self.lifts
    }

    pub fn degree(&self) -> usize {
        self.gens.len()
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    /// Square matrix whose columns are the generator lifts.
    pub fn lift_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.lifts).expect("validated lifts")
    }

    /// Readable form with trivial factors dropped and generators as signed
    /// group elements, e.g. `Cay(Z_3⊕Z_24,{(0,1),(-1,3)})` or
    /// `Cay(Z_72,{4,11})`.
    pub fn pretty(&self) -> String {
        // trivial factors carry no information
        let keep: Vec<usize> = (0..self.degree())
            .filter(|&i| self.group.moduli()[i] > 1)
            .collect();
        let group = keep
            .iter()
            .map(|&i| format!("Z_{}", self.group.moduli()[i]))
            .collect::<Vec<_>>()
            .join("⊕");
        let gens = self
            .gens
            .iter()
            .map(|t| {
                let signed = t.signed(&self.group);
                let c: Vec<i64> = keep.iter().map(|&i| signed[i]).collect();
                if c.len() == 1 {
                    c[0].to_string()
                } else {
                    format!("({})", join(&c))
                }
            })
            .collect::<Vec<_>>()
            .join(",");
        format!("Cay({group},{{{gens}}})")
    }
}

impl fmt::Display for CayleyDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = DigraphLiteral::from(self.clone());
        write!(
            f,
            "{}",
            serde_json::to_string(&lit).map_err(|_| fmt::Error)?
        )
    }
}

pub(crate) const UNSEEN: u32 = u32::MAX;

/// Reusable BFS state over the dense vertex indexing of one group.
#[derive(Clone, Debug)]
pub(crate) struct Bfs {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    dist: Vec<u32>,
    queue: Vec<u32>,
}

/// One generator prepared for index arithmetic: `(stride, modulus, value)`
/// for each coordinate where the generator is nonzero.
pub(crate) type Step = Vec<(u64, u64, u64)>;

impl Bfs {
    pub(crate) fn new(group: &InvariantFactors) -> Self {
        let n = group.order();
        assert!(n <= u32::MAX as u64, "group too large for dense BFS");
        Bfs {
            moduli: group.moduli().to_vec(),
            strides: group.strides(),
            dist: vec![UNSEEN; n as usize],
            queue: Vec::with_capacity(n as usize),
        }
    }

    pub(crate) fn step(&self, coords: &[u64]) -> Step {
        coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.strides[i], self.moduli[i], c))
            .collect()
    }

    #[inline]
    pub(crate) fn advance(v: u64, step: &Step) -> u64 {
        let mut w = v;
        for &(stride, modulus, g) in step {
            let c = (v / stride) % modulus;
            if c + g >= modulus {
                w = w + g * stride - modulus * stride;
            } else {
                w += g * stride;
            }
        }
        w
    }

    /// BFS from the identity. Returns the eccentricity of the identity when
    /// every vertex is reached within `limit` steps, `None` otherwise.
    pub(crate) fn eccentricity(&mut self, steps: &[Step], limit: u32) -> Option<u32> {
        self.dist.fill(UNSEEN);
        self.queue.clear();
        self.dist[0] = 0;
        self.queue.push(0);
        let mut head = 0;
        let mut ecc = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            let next = self.dist[v as usize] + 1;
            for step in steps {
                let w = Self::advance(v as u64, step) as usize;
                if self.dist[w] == UNSEEN {
                    if next > limit {
                        return None;
                    }
                    self.dist[w] = next;
                    ecc = next;
                    self.queue.push(w as u32);
                }
            }
        }
        (self.queue.len() == self.dist.len()).then_some(ecc)
    }

    pub(crate) fn distances(&self) -> &[u32] {
        &self.dist
    }
}

/// Exact distances from the identity to every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceProfile {
    group: InvariantFactors,
    dist: Vec<u32>,
}

impl DistanceProfile {
    pub fn get(&self, a: &GroupElement) -> u64 {
        self.dist[self.group.index_of(a) as usize] as u64
    }

    /// Distance of the element with the given dense index.
    pub fn at(&self, index: u64) -> u64 {
        self.dist[index as usize] as u64
    }

    pub fn max(&self) -> u64 {
        self.dist.iter().copied().max().unwrap_or(0) as u64
    }

    pub fn group(&self) -> &InvariantFactors {
        &self.group
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.dist
    }
}

pub fn distance_profile(g: &CayleyDigraph) -> DistanceProfile {
    let mut bfs = Bfs::new(&g.group);
    let steps: Vec<Step> = g.gens.iter().map(|t| bfs.step(t.coords())).collect();
    bfs.eccentricity(&steps, u32::MAX)
        .expect("validated generating set reaches every vertex");
    DistanceProfile {
        group: g.group.clone(),
        dist: bfs.distances().to_vec(),
    }
}

/// Diameter `k(Γ)`. By vertex transitivity this is the eccentricity of the
/// identity.
pub fn diameter(g: &CayleyDigraph) -> u64 {
    let mut bfs = Bfs::new(&g.group);
    let steps: Vec<Step> = g.gens.iter().map(|t| bfs.step(t.coords())).collect();
    bfs.eccentricity(&steps, u32::MAX)
        .expect("validated generating set reaches every vertex") as u64
}

/// Solid density `n / (k + d)^d`.
pub fn solid_density(g: &CayleyDigraph) -> BigRational {
    let k = diameter(g);
    density_of(g.order(), k, g.degree() as u32)
}

pub(crate) fn density_of(n: u64, k: u64, d: u32) -> BigRational {
    let denom = num_traits::pow(BigInt::from(k + d as u64), d as usize);
    BigRational::new(BigInt::from(n), denom)
}

/// `mΓ = Cay(mG, T)`: moduli multiplied by `m`, generator lifts unchanged.
///
/// Properness of `T` is the caller's responsibility; see
/// [`dilate_digraph_strict`].
pub fn dilate_digraph(g: &CayleyDigraph, m: u64) -> Result<CayleyDigraph> {
    if m == 0 {
        return Err(Error::InvalidDilation);
    }
    CayleyDigraph::new(g.group.scaled(m)?, g.lifts.clone())
}

/// [`dilate_digraph`] after checking that the generating set is proper.
pub fn dilate_digraph_strict(g: &CayleyDigraph, m: u64) -> Result<CayleyDigraph> {
    if !crate::mdd::is_proper(g) {
        return Err(Error::NotProper);
    }
    dilate_digraph(g, m)
}

/// The extremal families `mΥ_2` and `mΥ_3`.
pub fn upsilon(d: u32, m: u64) -> Result<CayleyDigraph> {
    if m == 0 {
        return Err(Error::InvalidDilation);
    }
    let base = match d {
        2 => CayleyDigraph::from_parts(&[1, 3], &[&[0, 1], &[1, -1]])?,
        3 => CayleyDigraph::from_parts(&[1, 1, 84], &[&[1, 10, -38], &[0, 1, -3], &[0, -2, 7]])?,
        _ => return Err(Error::UnsupportedDegree(d)),
    };
    dilate_digraph(&base, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Minimal word length by enumerating every nonnegative combination
    /// with total length up to `n`.
    pub(crate) fn brute_distances(g: &CayleyDigraph) -> HashMap<GroupElement, u64> {
        let n = g.order();
        let mut best: HashMap<GroupElement, u64> = HashMap::new();
        let mut frontier = vec![g.group().zero()];
        best.insert(g.group().zero(), 0);
        // words of length L are sums of L generators; enumerate level sets
        for len in 1..=n {
            let mut next = Vec::new();
            for x in &frontier {
                for t in g.gens() {
                    next.push(g.group().add(x, t).unwrap());
                }
            }
            next.sort();
            next.dedup();
            for y in &next {
                best.entry(y.clone()).or_insert(len);
            }
            frontier = next;
        }
        best
    }

    #[test]
    fn diameters() {
        let y2 = CayleyDigraph::from_parts(&[3], &[&[2], &[1]]).unwrap();
        assert_eq!(y2.group().moduli(), &[1, 3]);
        assert_eq!(diameter(&y2), 1);

        let g = CayleyDigraph::from_parts(&[16], &[&[1], &[4], &[5]]).unwrap();
        assert_eq!(diameter(&g), 3);

        for n in 2..30 {
            let ring = CayleyDigraph::from_parts(&[n], &[&[1]]).unwrap();
            assert_eq!(diameter(&ring), n - 1);
        }

        let g = CayleyDigraph::from_parts(&[6, 48], &[&[0, 1], &[-1, 3]]).unwrap();
        assert_eq!(diameter(&g), 28);
    }

    #[test]
    fn profiles() {
        let y2 = CayleyDigraph::from_parts(&[3], &[&[2], &[1]]).unwrap();
        let p = distance_profile(&y2);
        let grp = y2.group();
        assert_eq!(p.get(&grp.element(&[0, 1]).unwrap()), 1);
        assert_eq!(p.get(&grp.element(&[0, 2]).unwrap()), 1);
        assert_eq!(p.get(&grp.zero()), 0);

        let g = CayleyDigraph::from_parts(&[7], &[&[1], &[2]]).unwrap();
        let p = distance_profile(&g);
        assert_eq!(p.get(&g.group().element(&[0, 6]).unwrap()), 3);
        assert_eq!(brute_distances(&g)[&g.group().element(&[0, 6]).unwrap()], 3);
    }

    #[test]
    fn profile_matches_brute_force() {
        for n in 2..=50u64 {
            for (a, b) in [(1, 2), (1, 3), (2, 5), (3, 7)] {
                let Ok(g) = CayleyDigraph::from_parts(&[n], &[&[a], &[b]]) else {
                    continue;
                };
                let p = distance_profile(&g);
                let brute = brute_distances(&g);
                for x in g.group().elements() {
                    assert_eq!(p.get(&x), brute[&x], "{} at {x}", g.pretty());
                }
                assert_eq!(diameter(&g), p.max());
            }
        }
    }

    #[test]
    fn densities() {
        use num_traits::One;
        let y2 = upsilon(2, 1).unwrap();
        assert_eq!(solid_density(&y2), BigRational::new(1.into(), 3.into()));
        let y3 = upsilon(3, 1).unwrap();
        assert_eq!(solid_density(&y3), BigRational::new(21.into(), 250.into()));
        let ring = CayleyDigraph::from_parts(&[5], &[&[1]]).unwrap();
        assert_eq!(solid_density(&ring), BigRational::one());
        let z8 = CayleyDigraph::from_parts(&[8], &[&[1], &[3]]).unwrap();
        assert_eq!(
            solid_density(&z8),
            BigRational::new(BigInt::from(8), BigInt::from(25))
        );
    }

    #[test]
    fn dilation() {
        let g2 = CayleyDigraph::from_parts(&[3, 24], &[&[0, 1], &[-1, 3]]).unwrap();
        let d2 = dilate_digraph(&g2, 2).unwrap();
        assert_eq!(
            d2,
            CayleyDigraph::from_parts(&[6, 48], &[&[0, 1], &[-1, 3]]).unwrap()
        );
        assert_eq!(dilate_digraph(&g2, 1).unwrap(), g2);
        assert_eq!(dilate_digraph(&g2, 0), Err(Error::InvalidDilation));

        let b = CayleyDigraph::from_parts(&[1, 1, 16], &[&[0, 0, 1], &[0, 1, -12], &[1, 0, -11]])
            .unwrap();
        let d5 = dilate_digraph_strict(&b, 5).unwrap();
        assert_eq!(d5.group().moduli(), &[5, 5, 80]);
        assert_eq!(diameter(&d5), 27);
    }

    #[test]
    fn strict_dilation_rejects_improper_sets() {
        let g = CayleyDigraph::from_parts(&[3], &[&[1], &[2]]).unwrap();
        assert_eq!(dilate_digraph_strict(&g, 2), Err(Error::NotProper));
    }

    #[test]
    fn upsilon_family() {
        let y2 = upsilon(2, 1).unwrap();
        assert_eq!(y2.group().moduli(), &[1, 3]);
        assert_eq!(y2.gens()[1].coords(), &[0, 2]);
        let y3 = upsilon(3, 1).unwrap();
        assert_eq!(y3.group().moduli(), &[1, 1, 84]);
        assert_eq!(diameter(&y3), 7);
        let y3_2 = upsilon(3, 2).unwrap();
        assert_eq!(y3_2.order(), 672);
        assert_eq!(diameter(&y3_2), 17);
        assert_eq!(upsilon(4, 1), Err(Error::UnsupportedDegree(4)));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            CayleyDigraph::from_parts(&[16], &[&[4]]),
            Err(Error::NotGenerating)
        );
        assert_eq!(
            CayleyDigraph::from_parts(&[16], &[&[0], &[1]]),
            Err(Error::ZeroGenerator(0))
        );
        assert_eq!(
            CayleyDigraph::from_parts(&[16], &[&[1], &[17]]),
            Err(Error::DuplicateGenerator(0, 1))
        );
        assert!(matches!(
            CayleyDigraph::from_parts(&[2, 4], &[&[1, 1]]),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn literal_round_trip() {
        let g = CayleyDigraph::from_parts(&[3, 24], &[&[0, 1], &[-1, 3]]).unwrap();
        let s = g.to_string();
        assert_eq!(s, r#"{"moduli":[3,24],"gens":[[0,1],[-1,3]]}"#);
        let back: CayleyDigraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert_eq!(g.pretty(), "Cay(Z_3⊕Z_24,{(0,1),(-1,3)})");
        let c = CayleyDigraph::from_parts(&[72], &[&[4], &[11]]).unwrap();
        assert_eq!(c.pretty(), "Cay(Z_72,{4,11})");
        let lifted = CayleyDigraph::from_parts(&[1, 72], &[&[-1, 4], &[-3, 11]]).unwrap();
        assert_eq!(lifted.pretty(), "Cay(Z_72,{4,11})");
        let z16 = CayleyDigraph::from_parts(&[1, 1, 16], &[&[0, 0, 1], &[0, 1, -12], &[1, 0, -11]])
            .unwrap();
        assert_eq!(z16.pretty(), "Cay(Z_16,{1,4,5})");
    }
}
