//! VC and 2VC dimension search.
//!
//! Both searches grow a candidate set one vertex at a time and keep the
//! hyperedges partitioned by their trace on it, so checking an extension
//! only needs one split per class. Subsets of shattered sets are shattered,
//! which makes the candidate filtering and the size bound sound.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Hypergraph;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Largest vertex count accepted by the exhaustive searches.
pub const EXHAUSTIVE_VERTEX_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShatterMode {
    /// Every subset is a trace.
    Full,
    /// Every 2-subset is a trace.
    Pairs,
}

trait Growth: Sized {
    fn extend(&self, edges: &[VertexSet], v: usize) -> Option<Self>;
    fn members(&self) -> &[usize];
}

/// Edge classes keyed by trace; shattered iff all `2^|X|` traces occur.
struct FullState {
    members: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Growth for FullState {
    fn extend(&self, edges: &[VertexSet], v: usize) -> Option<Self> {
        let mut classes = Vec::with_capacity(self.classes.len() * 2);
        for class in &self.classes {
            let (with, without): (Vec<usize>, Vec<usize>) =
                class.iter().partition(|&&e| edges[e].contains(v));
            if with.is_empty() || without.is_empty() {
                return None;
            }
            classes.push(with);
            classes.push(without);
        }
        let mut members = self.members.clone();
        members.push(v);
        Some(FullState { members, classes })
    }

    fn members(&self) -> &[usize] {
        &self.members
    }
}

/// Only traces of size at most two matter; a trace never shrinks as the
/// set grows, so larger ones are dropped. Keys are bitmasks over positions
/// in `members`.
struct PairState {
    members: Vec<usize>,
    classes: BTreeMap<u64, Vec<usize>>,
}

impl Growth for PairState {
    fn extend(&self, edges: &[VertexSet], v: usize) -> Option<Self> {
        let bit = 1u64 << self.members.len();
        let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (&key, class) in &self.classes {
            for &e in class {
                let k = if edges[e].contains(v) { key | bit } else { key };
                if k.count_ones() <= 2 {
                    classes.entry(k).or_default().push(e);
                }
            }
        }
        let k = self.members.len() + 1;
        for i in 0..k {
            for j in i + 1..k {
                if !classes.contains_key(&(1 << i | 1 << j)) {
                    return None;
                }
            }
        }
        let mut members = self.members.clone();
        members.push(v);
        Some(PairState { members, classes })
    }

    fn members(&self) -> &[usize] {
        &self.members
    }
}

/// Content-distinct hyperedges; shattering ignores multiplicity.
fn distinct_edges(h: &Hypergraph) -> Vec<VertexSet> {
    let mut edges = h.edges().to_vec();
    edges.sort();
    edges.dedup();
    edges
}

fn search<S: Growth>(edges: &[VertexSet], state: S, cands: Vec<usize>, best: &mut Vec<usize>) {
    if state.members().len() > best.len() {
        *best = state.members().to_vec();
    }
    for (idx, &v) in cands.iter().enumerate() {
        if state.members().len() + cands.len() - idx <= best.len() {
            return;
        }
        if let Some(next) = state.extend(edges, v) {
            let rest = cands[idx + 1..]
                .iter()
                .copied()
                .filter(|&w| next.extend(edges, w).is_some())
                .collect();
            search(edges, next, rest, best);
        }
    }
}

fn check_cap(h: &Hypergraph) -> Result<()> {
    if h.vertex_count() > EXHAUSTIVE_VERTEX_CAP {
        return Err(Error::CapExceeded {
            what: "vertices for exhaustive shattering search",
            limit: EXHAUSTIVE_VERTEX_CAP,
            actual: h.vertex_count(),
        });
    }
    Ok(())
}

fn initial_full(edges: &[VertexSet]) -> FullState {
    FullState {
        members: Vec::new(),
        classes: vec![(0..edges.len()).collect()],
    }
}

fn initial_pairs(edges: &[VertexSet]) -> PairState {
    PairState {
        members: Vec::new(),
        classes: BTreeMap::from([(0, (0..edges.len()).collect())]),
    }
}

/// A largest shattered set, or `None` when there are no hyperedges (then
/// not even the empty set is shattered).
pub fn largest_shattered_set(h: &Hypergraph, mode: ShatterMode) -> Result<Option<Vec<usize>>> {
    check_cap(h)?;
    let edges = distinct_edges(h);
    let all: Vec<usize> = (0..h.vertex_count()).collect();
    let mut best = Vec::new();
    match mode {
        ShatterMode::Full => {
            if edges.is_empty() {
                return Ok(None);
            }
            search(&edges, initial_full(&edges), all, &mut best);
        }
        ShatterMode::Pairs => search(&edges, initial_pairs(&edges), all, &mut best),
    }
    Ok(Some(best))
}

/// Exact VC-dimension; −1 for a hypergraph without hyperedges.
pub fn vc_dimension(h: &Hypergraph) -> Result<i64> {
    Ok(match largest_shattered_set(h, ShatterMode::Full)? {
        Some(x) => x.len() as i64,
        None => -1,
    })
}

/// Exact 2VC-dimension; singletons are vacuously 2-shattered, so this is at
/// least 1 whenever there is a vertex.
pub fn two_vc_dimension(h: &Hypergraph) -> Result<i64> {
    let x = largest_shattered_set(h, ShatterMode::Pairs)?.unwrap_or_default();
    Ok(x.len() as i64)
}

/// Result of the budgeted search. `value` is a lower bound on the
/// dimension, certified by `witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: i64,
    pub witness: Vec<usize>,
    pub exact: bool,
}

/// Randomized greedy growth of shattered sets, usable at any size.
/// Each of the `trials` runs scans the vertices in a seeded random order and
/// keeps every vertex that preserves shattering.
pub fn shattered_lower_bound(
    h: &Hypergraph,
    mode: ShatterMode,
    trials: usize,
    seed: u64,
) -> Result<LowerBound> {
    let edges = distinct_edges(h);
    if mode == ShatterMode::Full && edges.is_empty() {
        return Ok(LowerBound { value: -1, witness: Vec::new(), exact: true });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..h.vertex_count()).collect();
    let mut best: Vec<usize> = Vec::new();
    for _ in 0..trials.max(1) {
        order.shuffle(&mut rng);
        let grown = match mode {
            ShatterMode::Full => greedy(&edges, initial_full(&edges), &order),
            ShatterMode::Pairs => greedy(&edges, initial_pairs(&edges), &order),
        };
        if grown.len() > best.len() {
            best = grown;
        }
    }
    best.sort_unstable();
    if !h.is_shattered(&best, mode)? {
        return Err(Error::verification("greedy shattered set failed re-verification"));
    }
    Ok(LowerBound { value: best.len() as i64, witness: best, exact: false })
}

fn greedy<S: Growth>(edges: &[VertexSet], mut state: S, order: &[usize]) -> Vec<usize> {
    for &v in order {
        if let Some(next) = state.extend(edges, v) {
            state = next;
        }
    }
    state.members().to_vec()
}
