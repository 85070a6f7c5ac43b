//! Minimum distance diagrams.
//!
//! An MDD of `Cay(G, {g_1..g_d})` is a set of `n` lattice points `a ∈ ℕ^d`
//! (each standing for the unit cube `[a, a+1]`) such that
//!
//! 1. `φ(a) = a_1 g_1 + ... + a_d g_d` maps the points onto `G`,
//! 2. the set is closed downwards (`a` present implies every `0 ≤ b ≤ a`),
//! 3. `‖a‖_1` is the minimum norm among all preimages of `φ(a)`, that is,
//!    the digraph distance from the identity to `φ(a)`.
//!
//! The diameter of the diagram is measured at the far corner of each cube,
//! so the solid diameter is `d + max ‖a‖ = k(Γ) + d`.

mod lshape;
mod render;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::abelian::{GroupElement, InvariantFactors};
use crate::cayley::{self, Bfs, CayleyDigraph, Step};
use crate::error::{Error, Result};
use crate::zmatrix::{self, IntMatrix, SnfDecomposition};

pub use lshape::{
    extract_lshape, lshape_solid_diameter, lshape_tessellation_matrix, lshape_validate, LShape,
};
pub use render::{render_layers, render_points_csv, render_svg};

/// A lattice point of `ℕ^d`.
pub type Point = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mdd {
    source: CayleyDigraph,
    points: Vec<Point>,
}

impl Mdd {
    /// Wraps a point set without checking it; see [`verify_mdd`].
    pub fn from_points(source: CayleyDigraph, mut points: Vec<Point>) -> Self {
        points.sort();
        points.dedup();
        Mdd { source, points }
    }

    pub fn source(&self) -> &CayleyDigraph {
        &self.source
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[u64]) -> bool {
        self.points
            .binary_search_by(|q| q.as_slice().cmp(p))
            .is_ok()
    }

    pub fn max_norm(&self) -> u64 {
        self.points.iter().map(|p| norm(p)).max().unwrap_or(0)
    }

    /// Text form: `#` headers carrying the source digraph literal, then one
    /// point per line.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# mdd degree={} order={}\n# digraph {}\n",
            self.source.degree(),
            self.source.order(),
            self.source
        );
        for p in &self.points {
            let line: Vec<String> = p.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Mdd> {
        let mut source = None;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                if let Some(lit) = header.trim().strip_prefix("digraph") {
                    let g: CayleyDigraph = serde_json::from_str(lit.trim())
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
                    source = Some(g);
                }
                continue;
            }
            let p = line
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<std::result::Result<Point, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            points.push(p);
        }
        let source = source.ok_or_else(|| Error::Parse("missing digraph header".into()))?;
        let d = source.degree();
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
        Ok(Mdd::from_points(source, points))
    }
}

pub(crate) fn norm(p: &[u64]) -> u64 {
    p.iter().sum()
}

/// `φ(a) = a_1 g_1 + ... + a_d g_d`.
pub fn phi(g: &CayleyDigraph, a: &[u64]) -> Result<GroupElement> {
    if a.len() != g.degree() {
        return Err(Error::DimensionMismatch {
            expected: g.degree(),
            found: a.len(),
        });
    }
    let group = g.group();
    a.iter()
        .zip(g.gens())
        .try_fold(group.zero(), |acc, (&c, t)| {
            group.add(&acc, &group.scalar_mul(c, t))
        })
}

/// Builds an MDD by lexicographic greedy selection.
///
/// Elements are handled layer by layer in order of distance. In layer `t`
/// every candidate is a successor `b + e_i` of a point chosen in layer
/// `t - 1`; among candidates landing on the same element with the right
/// distance and a complete lower box, the lexicographically least wins.
/// This selects, for every element, its lexicographically least
/// minimum-norm preimage, a set that is downward closed because the
/// lexicographic order is translation invariant. Should the greedy ever
/// leave an element uncovered, the result is recomputed by exhaustive
/// enumeration and verified.
pub fn build_mdd(g: &CayleyDigraph) -> Result<Mdd> {
    let profile = cayley::distance_profile(g);
    if let Some(points) = greedy_points(g, &profile) {
        return Ok(Mdd::from_points(g.clone(), points));
    }
    log::warn!(
        "greedy MDD construction stranded an element of {}; running exhaustive pass",
        g.pretty()
    );
    let h = build_by_enumeration(g);
    if verify_mdd(&h) {
        Ok(h)
    } else {
        Err(Error::ConstructionExhausted)
    }
}

fn steps_for(g: &CayleyDigraph) -> (Bfs, Vec<Step>) {
    let bfs = Bfs::new(g.group());
    let steps = g.gens().iter().map(|t| bfs.step(t.coords())).collect();
    (bfs, steps)
}

fn greedy_points(g: &CayleyDigraph, profile: &cayley::DistanceProfile) -> Option<Vec<Point>> {
    let d = g.degree();
    let n = g.order();
    let (_, steps) = steps_for(g);
    let dist = profile.as_slice();
    let k = profile.max();

    let mut layer_sizes = vec![0usize; k as usize + 1];
    for &x in dist {
        layer_sizes[x as usize] += 1;
    }

    let mut members: HashSet<Point> = HashSet::with_capacity(n as usize);
    let mut layer: Vec<(Point, u64)> = vec![(vec![0; d], 0)];
    members.insert(vec![0; d]);
    let mut all = vec![vec![0; d]];

    for t in 1..=k {
        let mut best: std::collections::HashMap<u64, Point> = std::collections::HashMap::new();
        for (b, bidx) in &layer {
            for (i, step) in steps.iter().enumerate() {
                let target = Bfs::advance(*bidx, step);
                if dist[target as usize] as u64 != t {
                    continue;
                }
                let mut a = b.clone();
                a[i] += 1;
                let lower_box_ready = (0..d).all(|j| {
                    if a[j] == 0 || j == i {
                        return true;
                    }
                    let mut pred = a.clone();
                    pred[j] -= 1;
                    members.contains(&pred)
                });
                if !lower_box_ready {
                    continue;
                }
                best.entry(target)
                    .and_modify(|cur| {
                        if a < *cur {
                            *cur = a.clone();
                        }
                    })
                    .or_insert(a);
            }
        }
        if best.len() != layer_sizes[t as usize] {
            return None;
        }
        let mut next: Vec<(Point, u64)> = best.into_iter().map(|(idx, p)| (p, idx)).collect();
        next.sort();
        for (p, _) in &next {
            members.insert(p.clone());
            all.push(p.clone());
        }
        layer = next;
    }
    Some(all)
}

/// For every element, the lexicographically least preimage of minimum
/// norm, found by walking all compositions of each distance in lex order.
pub(crate) fn build_by_enumeration(g: &CayleyDigraph) -> Mdd {
    let d = g.degree();
    let profile = cayley::distance_profile(g);
    let dist = profile.as_slice();
    let (_, steps) = steps_for(g);
    let k = profile.max();
    let mut chosen: Vec<Option<Point>> = vec![None; g.order() as usize];

    for t in 0..=k {
        let mut comp = vec![0u64; d];
        for_each_composition(t, d, &mut comp, 0, &mut |a| {
            let mut idx = 0;
            for (c, step) in a.iter().zip(&steps) {
                for _ in 0..*c {
                    idx = Bfs::advance(idx, step);
                }
            }
            if dist[idx as usize] as u64 == t && chosen[idx as usize].is_none() {
                chosen[idx as usize] = Some(a.to_vec());
            }
        });
    }
    Mdd::from_points(g.clone(), chosen.into_iter().flatten().collect())
}

/// Visits compositions of `total` into `parts` nonnegative parts in
/// lexicographic order.
fn for_each_composition(
    total: u64,
    parts: usize,
    cur: &mut Vec<u64>,
    pos: usize,
    f: &mut impl FnMut(&[u64]),
) {
    if pos + 1 == parts {
        cur[pos] = total;
        f(cur);
        return;
    }
    for c in 0..=total {
        cur[pos] = c;
        for_each_composition(total - c, parts, cur, pos + 1, f);
    }
}

/// First violated MDD condition, if any, checked against an independent
/// BFS distance profile.
pub fn mdd_violation(h: &Mdd) -> Option<String> {
    let g = &h.source;
    let d = g.degree();
    let group = g.group();
    if let Some(p) = h.points.iter().find(|p| p.len() != d) {
        return Some(format!("point {p:?} has wrong dimension"));
    }
    if h.points.len() as u64 != g.order() {
        return Some(format!(
            "{} points for a group of order {}",
            h.points.len(),
            g.order()
        ));
    }
    let profile = cayley::distance_profile(g);
    let mut hit = vec![false; g.order() as usize];
    for p in &h.points {
        let x = match phi(g, p) {
            Ok(x) => x,
            Err(e) => return Some(e.to_string()),
        };
        let idx = group.index_of(&x) as usize;
        if std::mem::replace(&mut hit[idx], true) {
            return Some(format!("two points map to {x}"));
        }
        if norm(p) != profile.get(&x) {
            return Some(format!(
                "point {p:?} has norm {} but {x} is at distance {}",
                norm(p),
                profile.get(&x)
            ));
        }
        for j in 0..d {
            if p[j] > 0 {
                let mut q = p.clone();
                q[j] -= 1;
                if !h.contains(&q) {
                    return Some(format!("point {p:?} lacks predecessor {q:?}"));
                }
            }
        }
    }
    None
}

/// Whether the point set satisfies all three MDD conditions.
pub fn verify_mdd(h: &Mdd) -> bool {
    mdd_violation(h).is_none()
}

/// `D = d + max ‖a‖`, which equals `k(Γ) + d`.
pub fn solid_diameter(h: &Mdd) -> u64 {
    h.source.degree() as u64 + h.max_norm()
}

/// `mH`: each cube `a` replaced by the `m^d` cubes `m a + α`,
/// `0 ≤ α_i < m`, related to the dilated digraph `mΓ`.
pub fn dilate_mdd(h: &Mdd, m: u64) -> Result<Mdd> {
    if m == 0 {
        return Err(Error::InvalidDilation);
    }
    let source = cayley::dilate_digraph(&h.source, m)?;
    let d = source.degree();
    let offsets = box_points(d, m);
    let mut points = Vec::with_capacity(h.points.len() * offsets.len());
    for p in &h.points {
        for off in &offsets {
            points.push(p.iter().zip(off).map(|(&a, &o)| m * a + o).collect());
        }
    }
    Ok(Mdd::from_points(source, points))
}

fn box_points(d: usize, m: u64) -> Vec<Point> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Point| {
                (0..m).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// A basis (as columns) of the kernel of `x ↦ Σ x_i g_i`, the lattice by
/// which every MDD of `g` tessellates `ℤ^d`.
pub fn tessellation_matrix(g: &CayleyDigraph) -> IntMatrix {
    let d = g.degree();
    let lifts = g.lift_matrix();
    // kernel of [T | S] projected onto the first d coordinates
    let mut a = IntMatrix::zeros(d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            a[(i, j)] = lifts[(i, j)].clone();
        }
        a[(i, d + i)] = BigInt::from(g.group().moduli()[i]);
    }
    let snf = zmatrix::smith_normal_form(&a);
    let mut basis = IntMatrix::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            basis[(i, j)] = snf.v[(i, d + j)].clone();
        }
    }
    basis
}

/// Whether the generating set is proper: the generator lifts are the
/// columns of a unimodular `U` in some Smith decomposition `S = U M V` of a
/// tessellation matrix `M`.
///
/// The kernel lattice of `φ` is `T^{-1} S ℤ^d` whenever the lift matrix `T`
/// is unimodular, which gives the decomposition `S = T (T^{-1} S) I`; and if
/// `S = T M V` then `det T = ±1`. So properness is exactly unimodularity of
/// the lift matrix.
pub fn is_proper(g: &CayleyDigraph) -> bool {
    g.lift_matrix().is_unimodular()
}

/// Properness checked against an explicit tessellation matrix `m`.
///
/// Fails with [`Error::NotTessellation`] unless `m ℤ^d` is the kernel
/// lattice of `φ`. On success returns the witness `S = U M V` with `U` the
/// lift matrix, or `None` when the lifts are not such a `U`.
pub fn proper_witness(g: &CayleyDigraph, m: &IntMatrix) -> Result<Option<SnfDecomposition>> {
    let d = g.degree();
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.rows(),
        });
    }
    let not_tess = || Error::NotTessellation(m.to_string());
    if m.det()?.abs() != BigInt::from(g.order()) {
        return Err(not_tess());
    }
    let u = g.lift_matrix();
    let mut x = u.mul(m)?;
    let moduli = g.group().moduli();
    for i in 0..d {
        let s = BigInt::from(moduli[i]);
        for j in 0..d {
            if !(&x[(i, j)] % &s).is_zero() {
                return Err(not_tess());
            }
            x[(i, j)] = &x[(i, j)] / &s;
        }
    }
    if !x.is_unimodular() {
        return Ok(None);
    }
    let v = x.inverse_unimodular()?;
    Ok(Some(SnfDecomposition {
        s: IntMatrix::diagonal(moduli),
        u,
        v,
    }))
}

/// Properness for degree 2 through the related L-shape: extract the
/// L-shape, form its tessellation matrix and check the lifts against it.
/// Rectangles may tile with a shear, so each candidate shear is tried
/// until one presents the group.
pub fn is_proper_via_lshape(g: &CayleyDigraph) -> Result<bool> {
    if g.degree() != 2 {
        return Err(Error::UnsupportedDegree(g.degree() as u32));
    }
    let l = extract_lshape(&build_mdd(g)?)?;
    for m in lshape::tessellation_candidates(&l) {
        match proper_witness(g, &m) {
            Ok(w) => return Ok(w.is_some()),
            Err(Error::NotTessellation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotTessellation(l.to_string()))
}

/// The group presented by a tessellation matrix, for callers that only
/// need the moduli.
pub fn group_of(m: &IntMatrix) -> Result<InvariantFactors> {
    Ok(zmatrix::proper_lifts(m)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cay(moduli: &[u64], gens: &[&[i64]]) -> CayleyDigraph {
        CayleyDigraph::from_parts(moduli, gens).unwrap()
    }

    #[test]
    fn phi_values() {
        let y2 = cay(&[3], &[&[2], &[1]]);
        assert!(phi(&y2, &[1, 1]).unwrap().is_zero());
        let g = cay(&[16], &[&[1], &[4], &[5]]);
        assert_eq!(phi(&g, &[1, 1, 0]).unwrap().coords(), &[0, 0, 5]);
        assert!(phi(&g, &[0, 0, 0]).unwrap().is_zero());
        assert!(phi(&g, &[1, 1]).is_err());
    }

    #[test]
    fn upsilon2_diagram() {
        let h = build_mdd(&cay(&[3], &[&[2], &[1]])).unwrap();
        assert_eq!(h.points(), &[vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert!(verify_mdd(&h));
        assert_eq!(solid_diameter(&h), 3);
    }

    #[test]
    fn z7_diagram_is_the_expected_l_shape() {
        let g = cay(&[7], &[&[1], &[2]]);
        let h = build_mdd(&g).unwrap();
        let want = LShape::new(2, 4, 1, 1).unwrap().cells();
        assert_eq!(h.points(), want.as_slice());
    }

    #[test]
    fn z16_diagram() {
        // {1,4,5} written with the lifts that make the set proper
        let g = cay(&[1, 1, 16], &[&[0, 0, 1], &[0, 1, -12], &[1, 0, -11]]);
        let h = build_mdd(&g).unwrap();
        assert_eq!(h.len(), 16);
        assert_eq!(h.max_norm(), 3);
        assert_eq!(solid_diameter(&h), 6);
        assert!(verify_mdd(&h));
        let h2 = dilate_mdd(&h, 2).unwrap();
        assert_eq!(h2.len(), 128);
        assert_eq!(solid_diameter(&h2), 12);
        assert!(verify_mdd(&h2));
    }

    #[test]
    fn verification_rejects_bad_sets() {
        let y2 = cay(&[3], &[&[2], &[1]]);
        let bad = Mdd::from_points(y2.clone(), vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        assert!(!verify_mdd(&bad));

        let z3 = cay(&[3], &[&[1], &[2]]);
        let bad = Mdd::from_points(z3, vec![vec![0, 0], vec![2, 0], vec![1, 0]]);
        assert!(!verify_mdd(&bad));

        let short = Mdd::from_points(y2, vec![vec![0, 0], vec![1, 0]]);
        assert!(!verify_mdd(&short));
    }

    #[test]
    fn dilation_of_upsilon2() {
        let h = build_mdd(&crate::cayley::upsilon(2, 1).unwrap()).unwrap();
        assert_eq!(dilate_mdd(&h, 1).unwrap(), h);
        let h2 = dilate_mdd(&h, 2).unwrap();
        assert_eq!(
            h2.points(),
            LShape::new(4, 4, 2, 2).unwrap().cells().as_slice()
        );
        assert!(verify_mdd(&h2));
        assert_eq!(dilate_mdd(&h, 0), Err(Error::InvalidDilation));
    }

    #[test]
    fn greedy_matches_exhaustive_enumeration() {
        for n in 3..=40u64 {
            for gens in [[1i64, 2, 5], [1, 3, 7], [2, 3, 11]] {
                let Ok(g) = CayleyDigraph::from_parts(&[n], &[&[gens[0]], &[gens[1]], &[gens[2]]])
                else {
                    continue;
                };
                let h = build_mdd(&g).unwrap();
                assert_eq!(h, build_by_enumeration(&g), "{}", g.pretty());
                assert!(verify_mdd(&h));
            }
        }
    }

    #[test]
    fn properness() {
        assert!(is_proper(&cay(&[1, 3], &[&[0, 1], &[1, -1]])));
        let b = cay(&[1, 1, 16], &[&[0, 0, 1], &[0, 1, -12], &[1, 0, -11]]);
        assert!(is_proper(&b));
        let m = IntMatrix::from_rows(&[vec![-1, -1, 0], vec![-1, 0, -4], vec![1, -3, 0]]).unwrap();
        let w = proper_witness(&b, &m).unwrap().unwrap();
        assert!(w.verify(&m));
        assert!(!is_proper(&cay(&[3], &[&[1], &[2]])));
        assert!(!is_proper_via_lshape(&cay(&[3], &[&[1], &[2]])).unwrap());
        assert!(is_proper_via_lshape(&cay(&[1, 3], &[&[0, 1], &[1, -1]])).unwrap());
    }

    #[test]
    fn witness_rejects_foreign_matrix() {
        let b = cay(&[1, 1, 16], &[&[0, 0, 1], &[0, 1, -12], &[1, 0, -11]]);
        let wrong = IntMatrix::diagonal(&[1, 1, 16]);
        assert!(matches!(
            proper_witness(&b, &wrong),
            Err(Error::NotTessellation(_))
        ));
    }

    #[test]
    fn kernel_lattice_is_a_tessellation_matrix() {
        for g in [
            cay(&[16], &[&[1], &[4], &[5]]),
            cay(&[3, 24], &[&[0, 1], &[-1, 3]]),
            cay(&[72], &[&[4], &[11]]),
        ] {
            let m = tessellation_matrix(&g);
            assert_eq!(m.det().unwrap().abs(), BigInt::from(g.order()));
            let res = proper_witness(&g, &m).unwrap();
            assert_eq!(res.is_some(), is_proper(&g));
            if let Some(w) = res {
                assert!(w.verify(&m));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let h = build_mdd(&cay(&[16], &[&[1], &[4], &[5]])).unwrap();
        let back = Mdd::parse_text(&h.to_text()).unwrap();
        assert_eq!(back, h);
        assert!(Mdd::parse_text("0 0\n").is_err());
    }
}
