//! Hitting sets, packings and the (p,q)-property.
//!
//! The exact solvers work on `u64` masks, which caps the vertex count at 64.

use serde::Serialize;

use super::Hypergraph;
use crate::error::{Error, Result};

pub const EXACT_VERTEX_CAP: usize = 64;
pub const EXACT_EDGE_CAP: usize = 512;
const PQ_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Exact,
    Greedy,
}

fn masks(h: &Hypergraph) -> Result<Vec<u64>> {
    if h.vertex_count() > EXACT_VERTEX_CAP {
        return Err(Error::CapExceeded {
            what: "vertices for exact solver",
            limit: EXACT_VERTEX_CAP,
            actual: h.vertex_count(),
        });
    }
    if h.edge_count() > EXACT_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "hyperedges for exact solver",
            limit: EXACT_EDGE_CAP,
            actual: h.edge_count(),
        });
    }
    Ok(h.edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |m, v| m | 1 << v))
        .collect())
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

/// Keeps only inclusion-minimal edges, deduplicated.
fn minimal_edges(mut edges: Vec<u64>) -> Vec<u64> {
    edges.sort_unstable_by_key(|e| (e.count_ones(), *e));
    edges.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for e in edges {
        if !kept.iter().any(|&k| k & e == k) {
            kept.push(e);
        }
    }
    kept
}

/// Max-coverage heuristic: repeatedly take the vertex hitting the most
/// unhit edges, smallest id on ties.
pub fn greedy_hitting_set(h: &Hypergraph) -> Result<Vec<usize>> {
    if h.edges().iter().any(|e| e.is_empty()) {
        return Err(Error::Infeasible("an empty hyperedge cannot be hit".into()));
    }
    let mut unhit: Vec<usize> = (0..h.edge_count()).collect();
    let mut chosen = Vec::new();
    while !unhit.is_empty() {
        let mut count = vec![0usize; h.vertex_count()];
        for &i in &unhit {
            for v in h.edge(i).iter() {
                count[v] += 1;
            }
        }
        let best = (0..h.vertex_count())
            .max_by_key(|&v| (count[v], std::cmp::Reverse(v)))
            .expect("nonempty edges imply a vertex");
        chosen.push(best);
        unhit.retain(|&i| !h.edge(i).contains(best));
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Minimum hitting set (exact) or a feasible one (greedy). The returned
/// vertex list is sorted.
pub fn transversality(h: &Hypergraph, mode: SolveMode) -> Result<Vec<usize>> {
    if mode == SolveMode::Greedy {
        return greedy_hitting_set(h);
    }
    let edges = masks(h)?;
    if edges.contains(&0) {
        return Err(Error::Infeasible("an empty hyperedge cannot be hit".into()));
    }
    let edges = minimal_edges(edges);
    let greedy = greedy_hitting_set(h)?;
    let mut best = (greedy.len(), greedy.iter().fold(0u64, |m, &v| m | 1 << v));
    let all = edges.iter().fold(0u64, |m, e| m | e);
    hit(&edges, all, 0, &mut best);
    Ok(bits(best.1).collect())
}

fn hit(remaining: &[u64], allowed: u64, chosen: u64, best: &mut (usize, u64)) {
    let mut remaining = remaining.to_vec();
    let mut chosen = chosen;
    // Edges with one allowed vertex force that vertex.
    loop {
        if remaining.iter().any(|&e| e & allowed == 0) {
            return;
        }
        let Some(&forced) = remaining.iter().find(|&&e| (e & allowed).count_ones() == 1) else {
            break;
        };
        chosen |= forced & allowed;
        remaining.retain(|&e| e & chosen == 0);
    }
    let size = chosen.count_ones() as usize;
    if remaining.is_empty() {
        if size < best.0 {
            *best = (size, chosen);
        }
        return;
    }
    // Disjoint remaining edges each need their own vertex.
    let mut used = 0u64;
    let mut lower = 0;
    for &e in &remaining {
        if e & allowed & used == 0 {
            used |= e & allowed;
            lower += 1;
        }
    }
    if size + lower >= best.0 {
        return;
    }
    let mut degree = [0u32; 64];
    for &e in &remaining {
        for v in bits(e & allowed) {
            degree[v] += 1;
        }
    }
    let v = (0..64)
        .max_by_key(|&v| (degree[v], std::cmp::Reverse(v)))
        .expect("64 candidates");
    let bit = 1u64 << v;
    let without: Vec<u64> = remaining.iter().copied().filter(|&e| e & bit == 0).collect();
    hit(&without, allowed & !bit, chosen | bit, best);
    hit(&remaining, allowed & !bit, chosen, best);
}

/// Maximum (exact) or maximal (greedy) set of pairwise disjoint hyperedge
/// indices, sorted. Empty hyperedges are disjoint from everything and are
/// always included.
pub fn packing_number(h: &Hypergraph, mode: SolveMode) -> Result<Vec<usize>> {
    let empties: Vec<usize> = (0..h.edge_count()).filter(|&i| h.edge(i).is_empty()).collect();
    let mut picked = match mode {
        SolveMode::Greedy => greedy_packing(h),
        SolveMode::Exact => exact_packing(h)?,
    };
    picked.extend(empties);
    picked.sort_unstable();
    Ok(picked)
}

fn greedy_packing(h: &Hypergraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..h.edge_count()).filter(|&i| !h.edge(i).is_empty()).collect();
    order.sort_by_key(|&i| (h.edge(i).len(), i));
    let mut picked: Vec<usize> = Vec::new();
    for i in order {
        if picked.iter().all(|&j| h.edge(i).is_disjoint(h.edge(j))) {
            picked.push(i);
        }
    }
    picked
}

fn exact_packing(h: &Hypergraph) -> Result<Vec<usize>> {
    let raw = masks(h)?;
    // A superset edge can always be swapped for its subset, so only minimal
    // edges matter; keep the smallest index per content.
    let mut candidates: Vec<(u64, usize)> = Vec::new();
    for (i, &e) in raw.iter().enumerate() {
        if e != 0 && !candidates.iter().any(|&(c, _)| c == e) {
            candidates.push((e, i));
        }
    }
    let minimal: Vec<(u64, usize)> = candidates
        .iter()
        .copied()
        .filter(|&(e, _)| !candidates.iter().any(|&(f, _)| f != e && f & e == f))
        .collect();
    let greedy: Vec<usize> = greedy_packing(h);
    let mut best = greedy.clone();
    let mut current = Vec::new();
    pack(&minimal, &mut current, &mut best);
    Ok(best)
}

fn pack(remaining: &[(u64, usize)], current: &mut Vec<usize>, best: &mut Vec<usize>) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    if remaining.is_empty() {
        return;
    }
    let union = remaining.iter().fold(0u64, |m, &(e, _)| m | e);
    let min_size = remaining.iter().map(|&(e, _)| e.count_ones()).min().unwrap_or(1);
    let upper = remaining.len().min((union.count_ones() / min_size) as usize);
    if current.len() + upper <= best.len() {
        return;
    }
    // Branch on the vertex in the fewest remaining edges: either one of
    // those edges is picked, or none of them.
    let mut degree = [0u32; 64];
    for &(e, _) in remaining {
        for v in bits(e) {
            degree[v] += 1;
        }
    }
    let v = bits(union).min_by_key(|&v| (degree[v], v)).expect("nonempty union");
    let bit = 1u64 << v;
    for &(e, i) in remaining.iter().filter(|&&(e, _)| e & bit != 0) {
        let rest: Vec<(u64, usize)> = remaining.iter().copied().filter(|&(f, _)| f & e == 0).collect();
        current.push(i);
        pack(&rest, current, best);
        current.pop();
    }
    let rest: Vec<(u64, usize)> = remaining.iter().copied().filter(|&(f, _)| f & bit == 0).collect();
    pack(&rest, current, best);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PqOutcome {
    Holds,
    /// `p` edge indices no `q` of which share a vertex.
    Counterexample { edges: Vec<usize> },
}

/// Decides whether among every `p` hyperedges some `q` share a vertex.
pub fn pq_property(h: &Hypergraph, p: usize, q: usize) -> Result<PqOutcome> {
    if q == 0 || p < q {
        return Err(Error::precondition(format!("(p,q)=({p},{q}) needs p >= q >= 1")));
    }
    if h.edge_count() < p {
        return Ok(PqOutcome::Holds);
    }
    if h.edge_count() > EXACT_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "hyperedges for (p,q) search",
            limit: EXACT_EDGE_CAP,
            actual: h.edge_count(),
        });
    }
    let mut load = vec![0usize; h.vertex_count()];
    let mut chosen = Vec::new();
    let mut nodes = 0u64;
    if sparse_family(h, p, q - 1, 0, &mut load, &mut chosen, &mut nodes)? {
        for v in 0..h.vertex_count() {
            let count = chosen.iter().filter(|&&i| h.edge(i).contains(v)).count();
            if count >= q {
                return Err(Error::verification("(p,q) counterexample has a q-fold vertex"));
            }
        }
        return Ok(PqOutcome::Counterexample { edges: chosen });
    }
    Ok(PqOutcome::Holds)
}

/// Looks for `p` edges with every vertex load at most `cap`.
fn sparse_family(
    h: &Hypergraph,
    p: usize,
    cap: usize,
    start: usize,
    load: &mut [usize],
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
) -> Result<bool> {
    if chosen.len() == p {
        return Ok(true);
    }
    *nodes += 1;
    if *nodes > PQ_NODE_BUDGET {
        return Err(Error::CapExceeded {
            what: "search nodes for (p,q) property",
            limit: PQ_NODE_BUDGET as usize,
            actual: *nodes as usize,
        });
    }
    for i in start..h.edge_count() {
        if h.edge_count() - i < p - chosen.len() {
            break;
        }
        if h.edge(i).iter().any(|v| load[v] >= cap) {
            continue;
        }
        for v in h.edge(i).iter() {
            load[v] += 1;
        }
        chosen.push(i);
        if sparse_family(h, p, cap, i + 1, load, chosen, nodes)? {
            return Ok(true);
        }
        chosen.pop();
        for v in h.edge(i).iter() {
            load[v] -= 1;
        }
    }
    Ok(false)
}
