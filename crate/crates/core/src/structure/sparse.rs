//! Sparse and localized center sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph};

/// Largest `d` for which `2^(d+2)` is computed; anything bigger can never
/// fit a graph we could hold in memory.
const MAX_DIMENSION: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparsityReport {
    pub sparse: bool,
    /// Largest number of balls sharing one vertex.
    pub max_load: usize,
    /// A vertex carrying `max_load` balls, if any ball exists.
    pub heaviest: Option<usize>,
}

/// Per-vertex count of the radius-`ell` balls centered in `centers` that
/// contain it.
pub fn ball_loads(g: &Graph, ell: usize, centers: &[usize]) -> Result<Vec<usize>> {
    let mut load = vec![0; g.vertex_count()];
    for &c in centers {
        for (v, d) in g.bfs_distances(c)?.into_iter().enumerate() {
            if d.is_some_and(|d| d <= ell) {
                load[v] += 1;
            }
        }
    }
    Ok(load)
}

/// `centers` is `q`-sparse when no vertex lies in more than `q` of their
/// radius-`ell` balls. Repeated centers count once per occurrence.
pub fn sparsity_check(g: &Graph, ell: usize, centers: &[usize], q: usize) -> Result<SparsityReport> {
    let load = ball_loads(g, ell, centers)?;
    let heaviest = (0..load.len()).filter(|&v| load[v] > 0).max_by_key(|&v| (load[v], usize::MAX - v));
    let max_load = heaviest.map_or(0, |v| load[v]);
    Ok(SparsityReport {
        sparse: max_load <= q,
        max_load,
        heaviest,
    })
}

/// Distance window `[ell + 1, 2 ell - 2^(d+2) - 3]` of a `d`-localized set.
/// An empty window is an error rather than a vacuous "no".
pub fn localized_window(ell: usize, d: u32) -> Result<(usize, usize)> {
    if d > MAX_DIMENSION {
        return Err(Error::precondition(format!("dimension parameter {d} is too large")));
    }
    let upper = (2 * ell as u128).checked_sub((1u128 << (d + 2)) + 3);
    match upper {
        Some(u) if u > ell as u128 => Ok((ell + 1, u as usize)),
        _ => Err(Error::precondition(format!(
            "localized window is empty for ell = {ell}, d = {d} (needs ell >= {})",
            (1u64 << (d + 2)) + 4
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizedReport {
    pub localized: bool,
    pub window: (usize, usize),
    /// First offending pair with its distance (`None` = disconnected).
    pub violation: Option<(usize, usize, Distance)>,
}

fn distance_rows(g: &Graph, xs: &[usize]) -> Result<Vec<Vec<Distance>>> {
    xs.iter().map(|&x| g.bfs_distances(x)).collect()
}

/// Pairwise distances of `centers` all inside the window.
pub fn localized_check(g: &Graph, ell: usize, d: u32, centers: &[usize]) -> Result<LocalizedReport> {
    let window = localized_window(ell, d)?;
    let rows = distance_rows(g, centers)?;
    let in_window = |dist: Distance| dist.is_some_and(|x| x >= window.0 && x <= window.1);
    let mut violation = None;
    'outer: for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let dist = rows[i][centers[j]];
            if !in_window(dist) {
                violation = Some((centers[i], centers[j], dist));
                break 'outer;
            }
        }
    }
    Ok(LocalizedReport {
        localized: violation.is_none(),
        window,
        violation,
    })
}

/// Pair version: `A ∪ B` pairwise at distance at least `ell + 1`, and every
/// cross pair within the upper end of the window. Pairs inside `A` or inside
/// `B` may be arbitrarily far apart.
pub fn pair_localized_check(g: &Graph, ell: usize, d: u32, a_set: &[usize], b_set: &[usize]) -> Result<LocalizedReport> {
    let window = localized_window(ell, d)?;
    let all: Vec<usize> = a_set.iter().chain(b_set).copied().collect();
    let rows = distance_rows(g, &all)?;
    let na = a_set.len();
    let mut violation = None;
    'outer: for i in 0..all.len() {
        for j in i + 1..all.len() {
            let dist = rows[i][all[j]];
            let far_enough = dist.is_none_or(|x| x >= window.0);
            let cross = i < na && j >= na;
            let close_enough = !cross || dist.is_some_and(|x| x <= window.1);
            if !far_enough || !close_enough {
                violation = Some((all[i], all[j], dist));
                break 'outer;
            }
        }
    }
    Ok(LocalizedReport {
        localized: violation.is_none(),
        window,
        violation,
    })
}
