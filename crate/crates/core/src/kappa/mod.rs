//! `κ(d, n)`: the least diameter of a degree-`d` Cayley digraph on an
//! Abelian group of order `n`.
//!
//! The search runs over every group of order `n` and rank at most `d`, and
//! over every `d`-subset of nonzero elements. Work units are
//! `(group, smallest generator)` pairs spread over a rayon pool. Each BFS is
//! cut off as soon as it exceeds the best diameter found so far.
//!
//! The reported witness is the lexicographically least optimal set, ordered
//! by group position and then by the dense indices of the generators. It
//! does not depend on the worker count or the symmetry mode: an optimal set
//! that is least in the whole search is least in its orbit, so it survives
//! orbit reduction.

mod cache;

pub use cache::{KappaCache, KappaRecord, CACHE_ENV};

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{enumerate_groups, GroupElement, InvariantFactors};
use crate::cayley::{Bfs, CayleyDigraph, Step};
use crate::density::{self, Flagged};
use crate::error::{Error, Result};

/// Automorphisms used to skip equivalent generating sets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    None,
    /// `x ↦ u x` for units `u` modulo the exponent.
    #[default]
    Units,
    /// Units combined with permutations of coordinates of equal modulus.
    FullListed,
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Symmetry::None),
            "units" => Ok(Symmetry::Units),
            "full-listed" => Ok(Symmetry::FullListed),
            _ => Err(Error::Parse(format!("unknown symmetry mode {s:?}"))),
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::None => "none",
            Symmetry::Units => "units",
            Symmetry::FullListed => "full-listed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub jobs: usize,
    pub symmetry: Symmetry,
    /// Stop as soon as a set meeting the lower bound `ℓ(d, n)` is certain
    /// to be the final witness.
    pub prune: bool,
    /// Also prune on the conjectural `ℓ'(3, n)`. Off by default: an
    /// unpruned degree-3 run is what would detect `κ < ℓ'`.
    #[serde(default)]
    pub prune_conjectural: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            symmetry: Symmetry::Units,
            prune: true,
            prune_conjectural: false,
        }
    }
}

impl SearchOptions {
    /// Whether the lower bound may cut the search for degree `d`.
    pub fn prunes(&self, d: u32) -> bool {
        self.prune && (d < 3 || self.prune_conjectural)
    }
}

#[derive(Clone, Debug)]
pub struct KappaOutcome {
    pub degree: u32,
    pub order: u64,
    pub kappa: u64,
    pub witness: CayleyDigraph,
    pub bound: Flagged<i64>,
    /// Generating sets whose BFS was run.
    pub examined: u64,
    pub millis: u64,
}

impl KappaOutcome {
    pub fn gap(&self) -> i64 {
        self.kappa as i64 - self.bound.value
    }

    pub fn record(&self, options: &SearchOptions) -> KappaRecord {
        KappaRecord {
            d: self.degree,
            n: self.order,
            kappa: self.kappa,
            witness: self.witness.clone().into(),
            settings: *options,
            millis: self.millis,
        }
    }
}

/// Search key: group position, then generator indices.
type Key = (usize, Vec<u32>);

struct Shared {
    best: AtomicU32,
    witness: Mutex<Option<(u32, Key)>>,
    examined: AtomicU64,
    bound: u32,
    prune: bool,
}

impl Shared {
    fn offer(&self, ecc: u32, key: Key) {
        let mut w = self.witness.lock().expect("poisoned");
        let better = match &*w {
            None => true,
            Some((e, k)) => (ecc, &key) < (*e, k),
        };
        if better {
            *w = Some((ecc, key));
            self.best.fetch_min(ecc, Ordering::SeqCst);
        }
    }

    /// With pruning on, everything lexicographically after a witness that
    /// meets the bound can be skipped.
    fn settled_before(&self, key: &Key) -> bool {
        if !self.prune || self.best.load(Ordering::SeqCst) > self.bound {
            return false;
        }
        match &*self.witness.lock().expect("poisoned") {
            Some((e, k)) => *e <= self.bound && k < key,
            None => false,
        }
    }
}

/// One group prepared for the search.
struct GroupData {
    group: InvariantFactors,
    steps: Vec<Step>,
    /// Index permutations of the automorphisms in use, identity excluded.
    autos: Vec<Vec<u32>>,
}

impl GroupData {
    fn new(group: InvariantFactors, symmetry: Symmetry) -> Self {
        let bfs = Bfs::new(&group);
        let elements: Vec<GroupElement> = group.elements().collect();
        let steps = elements.iter().map(|e| bfs.step(e.coords())).collect();
        let autos = automorphisms(&group, &elements, symmetry);
        GroupData {
            group,
            steps,
            autos,
        }
    }

    /// Whether the sorted index set `set` is least in its orbit.
    fn is_canonical(&self, set: &[u32], scratch: &mut Vec<u32>) -> bool {
        for perm in &self.autos {
            scratch.clear();
            scratch.extend(set.iter().map(|&i| perm[i as usize]));
            scratch.sort_unstable();
            if scratch.as_slice() < set {
                return false;
            }
        }
        true
    }
}

fn automorphisms(
    group: &InvariantFactors,
    elements: &[GroupElement],
    symmetry: Symmetry,
) -> Vec<Vec<u32>> {
    if symmetry == Symmetry::None {
        return Vec::new();
    }
    let e = group.exponent();
    let units: Vec<u64> = (1..=e).filter(|u| u.gcd(&e) == 1).collect();
    let perms = if symmetry == Symmetry::FullListed {
        coordinate_permutations(group.moduli())
    } else {
        vec![(0..group.rank()).collect()]
    };
    let mut out = Vec::new();
    for perm in &perms {
        for &u in &units {
            let identity = u % e == 1 % e && perm.iter().enumerate().all(|(i, &p)| i == p);
            if identity {
                continue;
            }
            let map = elements
                .iter()
                .map(|x| {
                    let scaled = group.scalar_mul(u, x);
                    let c: Vec<u64> = perm.iter().map(|&p| scaled.coords()[p]).collect();
                    let image = group.element(&c.iter().map(|&v| v as i64).collect::<Vec<_>>());
                    group.index_of(&image.expect("same rank")) as u32
                })
                .collect();
            out.push(map);
        }
    }
    out
}

/// Permutations of positions that only exchange equal moduli.
fn coordinate_permutations(moduli: &[u64]) -> Vec<Vec<usize>> {
    let d = moduli.len();
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for pos in 0..d {
        let mut next = Vec::new();
        for p in &out {
            for j in (0..d).filter(|j| !p.contains(j) && moduli[*j] == moduli[pos]) {
                let mut q = p.clone();
                q.push(j);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Next `k`-combination of `lo..n` in lexicographic order.
fn next_combination(c: &mut [u32], n: u32) -> bool {
    let k = c.len() as u32;
    for i in (0..c.len()).rev() {
        if c[i] < n - (k - i as u32) {
            c[i] += 1;
            for j in i + 1..c.len() {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn run_unit(data: &GroupData, gi: usize, first: u32, d: usize, shared: &Shared) {
    let n = data.group.order() as u32;
    if shared.settled_before(&(gi, vec![first])) {
        return;
    }
    let mut bfs = Bfs::new(&data.group);
    let mut set: Vec<u32> = (0..d as u32).map(|i| first + i).collect();
    if set[d - 1] >= n {
        return;
    }
    let mut scratch = Vec::with_capacity(d);
    let mut steps: Vec<Step> = Vec::with_capacity(d);
    loop {
        if data.is_canonical(&set, &mut scratch) {
            steps.clear();
            steps.extend(set.iter().map(|&i| data.steps[i as usize].clone()));
            shared.examined.fetch_add(1, Ordering::Relaxed);
            let limit = shared.best.load(Ordering::SeqCst);
            if let Some(ecc) = bfs.eccentricity(&steps, limit) {
                shared.offer(ecc, (gi, set.clone()));
                if shared.prune && ecc <= shared.bound {
                    return;
                }
            }
        }
        // the first generator is fixed for the unit
        if !next_combination(&mut set[1..], n) {
            return;
        }
        if shared.prune && shared.settled_before(&(gi, set.clone())) {
            return;
        }
    }
}

/// Groups of order `n` and rank at most `d`, padded to rank `d`.
pub fn candidate_groups(d: u32, n: u64) -> Vec<InvariantFactors> {
    enumerate_groups(n, d as usize)
        .into_iter()
        .map(|g| g.padded(d as usize))
        .collect()
}

/// Computes `κ(d, n)` with a deterministic witness.
///
/// Errors when no `d` distinct nonzero elements generate any group of order
/// `n`, and when the result contradicts `ℓ(d, n)` (a refutation for `d = 3`).
pub fn kappa(d: u32, n: u64, options: &SearchOptions) -> Result<KappaOutcome> {
    let bound = density::lower_bound(d, n)?;
    if n > u32::MAX as u64 {
        return Err(Error::Overflow(format!("order {n}")));
    }
    let start = Instant::now();
    let groups: Vec<GroupData> = candidate_groups(d, n)
        .into_iter()
        .map(|g| GroupData::new(g, options.symmetry))
        .collect();
    let shared = Shared {
        best: AtomicU32::new(u32::MAX),
        witness: Mutex::new(None),
        examined: AtomicU64::new(0),
        bound: bound.value.max(0) as u32,
        prune: options.prunes(d),
    };
    let units: Vec<(usize, u32)> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, g)| (1..g.group.order() as u32).map(move |a| (gi, a)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| {
        units
            .par_iter()
            .with_max_len(1)
            .for_each(|&(gi, a)| run_unit(&groups[gi], gi, a, d as usize, &shared));
    });
    let Some((ecc, (gi, set))) = shared.witness.into_inner().expect("poisoned") else {
        return Err(Error::NoGeneratingSet { d, n });
    };
    let group = &groups[gi].group;
    let lifts = set
        .iter()
        .map(|&i| group.element_at(i as u64).to_i64())
        .collect();
    let witness = CayleyDigraph::new(group.clone(), lifts)?;
    let outcome = KappaOutcome {
        degree: d,
        order: n,
        kappa: ecc as u64,
        witness,
        bound,
        examined: shared.examined.into_inner(),
        millis: start.elapsed().as_millis() as u64,
    };
    if outcome.gap() < 0 {
        return Err(density::bound_violation(
            &outcome.witness,
            outcome.kappa,
            outcome.bound.value,
        ));
    }
    log::debug!(
        "kappa({d},{n}) = {} after {} sets in {} ms",
        outcome.kappa,
        outcome.examined,
        outcome.millis
    );
    Ok(outcome)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapRow {
    pub n: u64,
    pub kappa: u64,
    pub bound: i64,
    pub gap: i64,
}

/// `κ(d, n) - ℓ(d, n)` for `lo ≤ n ≤ hi`, skipping orders with no
/// degree-`d` digraph. Values found in `cache` are reused and new ones are
/// appended to it as each order finishes.
pub fn gap_table(
    d: u32,
    lo: u64,
    hi: u64,
    options: &SearchOptions,
    mut cache: Option<&mut KappaCache>,
) -> Result<Vec<GapRow>> {
    let mut rows = Vec::new();
    for n in lo..=hi {
        let bound = density::lower_bound(d, n)?.value;
        let cached = cache.as_ref().and_then(|c| c.get(d, n)).map(|r| r.kappa);
        let k = match cached {
            Some(k) => k,
            None => match kappa(d, n, options) {
                Ok(k) => {
                    if let Some(c) = cache.as_mut() {
                        c.put(k.record(options))?;
                    }
                    k.kappa
                }
                Err(Error::NoGeneratingSet { .. }) => continue,
                Err(e) => return Err(e),
            },
        };
        rows.push(GapRow {
            n,
            kappa: k,
            bound,
            gap: k as i64 - bound,
        });
    }
    Ok(rows)
}
