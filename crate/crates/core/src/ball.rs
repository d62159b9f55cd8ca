//! Ball hypergraphs of graphs and the distance VC-dimension.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ball_from_distances, Graph};
use crate::hypergraph::{shattered_lower_bound, Hypergraph, ShatterMode, EXHAUSTIVE_VERTEX_CAP};

/// Largest graph for which `distance_vc` enumerates every induced subgraph.
pub const EXACT_DISTANCE_VC_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BallLabel {
    pub center: usize,
    pub radius: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallHypergraph {
    hypergraph: Hypergraph,
    labels: Vec<BallLabel>,
    fingerprint: String,
}

impl BallHypergraph {
    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn labels(&self) -> &[BallLabel] {
        &self.labels
    }

    /// Fingerprint of the graph the balls were taken in.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

/// One hyperedge per vertex: its ball of radius `ell`.
pub fn b_ell(g: &Graph, ell: usize) -> BallHypergraph {
    let (edges, labels) = (0..g.vertex_count())
        .map(|x| {
            let d = g.bfs_avoiding(x, None);
            (ball_from_distances(&d, ell), BallLabel { center: x, radius: ell })
        })
        .unzip();
    BallHypergraph {
        hypergraph: Hypergraph::from_sets(g.vertex_count(), edges).expect("balls live in V"),
        labels,
        fingerprint: g.fingerprint(),
    }
}

/// Every distinct ball `B(x, k)` with `0 <= k <= ecc(x)`. The label kept for
/// a repeated ball is its first occurrence in `(center, radius)` order.
pub fn b_all(g: &Graph) -> BallHypergraph {
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for x in 0..g.vertex_count() {
        let d = g.bfs_avoiding(x, None);
        let ecc = d.iter().flatten().copied().max().unwrap_or(0);
        for k in 0..=ecc {
            let ball = ball_from_distances(&d, k);
            if seen.insert(ball.clone()) {
                edges.push(ball);
                labels.push(BallLabel { center: x, radius: k });
            }
        }
    }
    BallHypergraph {
        hypergraph: Hypergraph::from_sets(g.vertex_count(), edges).expect("balls live in V"),
        labels,
        fingerprint: g.fingerprint(),
    }
}

/// The ball incidence matrix `M[u][c] = d(u, c) <= ell` is symmetric, i.e.
/// the B_ell-hypergraph is isomorphic to its dual.
pub fn self_duality_check(g: &Graph, ell: usize) -> bool {
    let h = b_ell(g, ell);
    let m = h.hypergraph().incidence_matrix();
    let dual = h.hypergraph().dual().incidence_matrix();
    m == dual && (0..m.len()).all(|u| (0..m.len()).all(|c| m[u][c] == m[c][u]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceVc {
    pub mode: ShatterMode,
    /// VC (or 2VC) dimension of the B-hypergraph of `subgraph`; exact when
    /// `exact`, otherwise a certified lower bound.
    pub value: i64,
    pub exact: bool,
    /// Vertices (original ids) inducing the witnessing subgraph.
    pub subgraph: Vec<usize>,
    /// The shattered set, original ids.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct DistanceVcOptions {
    /// Force the stochastic search even on small graphs.
    pub budgeted: bool,
    /// Number of subgraph evaluations in the stochastic search.
    pub budget: usize,
    pub seed: u64,
    /// Vertex sets to start the search from, besides the components.
    pub hints: Vec<Vec<usize>>,
}

/// Best shattered set of the B-hypergraph of `g[s]`, in original ids.
/// Exact up to the exhaustive cap, a greedy lower bound above it.
fn evaluate(g: &Graph, s: &[usize], mode: ShatterMode, seed: u64) -> Result<(Vec<usize>, bool)> {
    let (sub, map) = g.induced_subgraph(s)?;
    let h = b_all(&sub);
    let (set, exact) = if sub.vertex_count() <= EXHAUSTIVE_VERTEX_CAP {
        let best = crate::hypergraph::largest_shattered_set(h.hypergraph(), mode)?;
        (best.unwrap_or_default(), true)
    } else {
        let lb = shattered_lower_bound(h.hypergraph(), mode, 8, seed)?;
        (lb.witness, false)
    };
    Ok((set.into_iter().map(|v| map[v]).collect(), exact))
}

fn connected_mask(g: &Graph, mask: u32) -> bool {
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u32 << start;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if mask >> w & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen == mask
}

fn empty_value(mode: ShatterMode) -> i64 {
    match mode {
        ShatterMode::Full => -1,
        ShatterMode::Pairs => 0,
    }
}

/// Maximum over induced subgraphs of the (2)VC-dimension of their
/// B-hypergraph. A disconnected graph's balls never cross components, so
/// only connected subgraphs are enumerated.
pub fn distance_vc(g: &Graph, mode: ShatterMode, opts: &DistanceVcOptions) -> Result<DistanceVc> {
    let n = g.vertex_count();
    let result = if n <= EXACT_DISTANCE_VC_CAP && !opts.budgeted {
        exact_distance_vc(g, mode)?
    } else {
        budgeted_distance_vc(g, mode, opts)?
    };
    if n > 0 && !verify_distance_witness(g, &result.subgraph, &result.witness, mode)? {
        return Err(Error::verification("distance VC witness failed re-verification"));
    }
    Ok(result)
}

fn exact_distance_vc(g: &Graph, mode: ShatterMode) -> Result<DistanceVc> {
    let n = g.vertex_count();
    let evaluated: Vec<(u32, Vec<usize>)> = (1u32..1 << n)
        .into_par_iter()
        .filter(|&m| connected_mask(g, m))
        .map(|m| {
            let s: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
            evaluate(g, &s, mode, 0).map(|(w, _)| (m, w))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(u32, Vec<usize>)> = None;
    for (m, w) in evaluated {
        if best.as_ref().is_none_or(|(_, b)| w.len() > b.len()) {
            best = Some((m, w));
        }
    }
    Ok(match best {
        Some((m, w)) => DistanceVc {
            mode,
            value: w.len() as i64,
            exact: true,
            subgraph: (0..n).filter(|&v| m >> v & 1 == 1).collect(),
            witness: w,
        },
        None => DistanceVc { mode, value: empty_value(mode), exact: true, subgraph: vec![], witness: vec![] },
    })
}

fn budgeted_distance_vc(g: &Graph, mode: ShatterMode, opts: &DistanceVcOptions) -> Result<DistanceVc> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts: Vec<Vec<usize>> = opts.hints.clone();
    starts.extend(g.connected_components());
    let mut best = DistanceVc {
        mode,
        value: empty_value(mode),
        exact: false,
        subgraph: vec![],
        witness: vec![],
    };
    let mut evaluations = 0usize;
    for start in starts {
        let mut current = start;
        current.sort_unstable();
        current.dedup();
        if current.is_empty() {
            continue;
        }
        let (w, _) = evaluate(g, &current, mode, opts.seed)?;
        evaluations += 1;
        let mut value = w.len();
        if w.len() as i64 > best.value {
            best = DistanceVc { mode, value: w.len() as i64, exact: false, subgraph: current.clone(), witness: w };
        }
        // Delete-vertex hill climbing, accepting sideways moves.
        while evaluations < opts.budget.max(1) && current.len() > 1 {
            let mut order = current.clone();
            order.shuffle(&mut rng);
            let mut moved = false;
            for v in order {
                if evaluations >= opts.budget.max(1) {
                    break;
                }
                let next: Vec<usize> = current.iter().copied().filter(|&u| u != v).collect();
                let (w, _) = evaluate(g, &next, mode, opts.seed)?;
                evaluations += 1;
                if w.len() >= value {
                    value = w.len();
                    current = next;
                    if w.len() as i64 > best.value {
                        best = DistanceVc { mode, value: w.len() as i64, exact: false, subgraph: current.clone(), witness: w };
                    }
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
    }
    Ok(best)
}

/// Checks that `witness` is shattered by the B-hypergraph of `g[subgraph]`.
pub fn verify_distance_witness(g: &Graph, subgraph: &[usize], witness: &[usize], mode: ShatterMode) -> Result<bool> {
    if subgraph.is_empty() {
        return Ok(witness.is_empty());
    }
    let (sub, map) = g.induced_subgraph(subgraph)?;
    let mut local = Vec::new();
    for &w in witness {
        match map.iter().position(|&v| v == w) {
            Some(i) => local.push(i),
            None => return Ok(false),
        }
    }
    let h = b_all(&sub);
    h.hypergraph().is_shattered(&local, mode)
}
