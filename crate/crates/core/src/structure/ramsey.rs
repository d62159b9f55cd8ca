//! Edge-colored complete graphs and monochromatic clique search.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Cliques are searched with `u64` candidate masks.
pub const RAMSEY_VERTEX_CAP: usize = 64;

/// Complete graph on `0..n` with one color per unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeColoring {
    n: usize,
    colors: u32,
    color: Vec<u32>,
}

impl EdgeColoring {
    /// Every edge starts with color 0.
    pub fn new(n: usize, colors: u32) -> Result<Self> {
        if colors == 0 {
            return Err(Error::precondition("a coloring needs at least one color"));
        }
        Ok(EdgeColoring {
            n,
            colors,
            color: vec![0; n * n.saturating_sub(1) / 2],
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> u32 {
        self.colors
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        assert!(i != j && i < self.n && j < self.n, "no edge {i}-{j} in K_{}", self.n);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        // Row-major upper triangle.
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.color[self.slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: u32) -> Result<()> {
        if c >= self.colors {
            return Err(Error::precondition(format!("color {c} out of range ({} colors)", self.colors)));
        }
        let s = self.slot(i, j);
        self.color[s] = c;
        Ok(())
    }

    pub fn is_monochromatic(&self, vertices: &[usize]) -> Option<u32> {
        let mut seen = None;
        for (k, &i) in vertices.iter().enumerate() {
            for &j in &vertices[k + 1..] {
                let c = self.get(i, j);
                if *seen.get_or_insert(c) != c {
                    return None;
                }
            }
        }
        seen.or(Some(0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RamseyOutcome {
    Clique { color: u32, vertices: Vec<usize> },
    /// No color class contains a clique of the target size.
    Exhausted,
}

/// First clique found of size `target`, colors tried in increasing order.
pub fn ramsey_extract(coloring: &EdgeColoring, target: usize) -> Result<RamseyOutcome> {
    if target < 2 {
        return Err(Error::precondition("target clique size must be at least 2"));
    }
    let n = coloring.n;
    if n > RAMSEY_VERTEX_CAP {
        return Err(Error::CapExceeded {
            what: "ramsey_extract vertices",
            limit: RAMSEY_VERTEX_CAP,
            actual: n,
        });
    }
    for c in 0..coloring.colors {
        let adj: Vec<u64> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && coloring.get(i, j) == c)
                    .fold(0u64, |m, j| m | 1 << j)
            })
            .collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut clique = Vec::new();
        if extend(&adj, all, target, &mut clique) {
            debug_assert_eq!(coloring.is_monochromatic(&clique), Some(c));
            return Ok(RamseyOutcome::Clique { color: c, vertices: clique });
        }
    }
    Ok(RamseyOutcome::Exhausted)
}

fn extend(adj: &[u64], mut cand: u64, target: usize, clique: &mut Vec<usize>) -> bool {
    if clique.len() == target {
        return true;
    }
    while cand != 0 {
        if clique.len() + (cand.count_ones() as usize) < target {
            return false;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        clique.push(v);
        if extend(adj, cand & adj[v], target, clique) {
            return true;
        }
        clique.pop();
    }
    false
}

/// `D + 4` colors with `D = 2^(d+2) + 2`. Distances at most `ell` get `D+1`
/// first, so short pairs are never mistaken for `2 ell - c`; then `c` when
/// the distance is `2 ell - c` with `0 <= c <= D`; `D+2` beyond `2 ell` or
/// disconnected; `D+3` for whatever is left.
pub fn distance_coloring(g: &Graph, x: &[usize], ell: usize, d: u32) -> Result<EdgeColoring> {
    if d > 20 {
        return Err(Error::precondition(format!("dimension parameter {d} is too large")));
    }
    let mut sorted = x.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::precondition("coloring centers must be pairwise distinct"));
    }
    let big_d = (1u32 << (d + 2)) + 2;
    let mut out = EdgeColoring::new(x.len(), big_d + 4)?;
    for (i, &xi) in x.iter().enumerate() {
        let dist = g.bfs_distances(xi)?;
        for (j, &xj) in x.iter().enumerate().skip(i + 1) {
            g.check_vertex(xj)?;
            out.set(i, j, distance_color(dist[xj], ell, big_d))?;
        }
    }
    Ok(out)
}

pub(crate) fn distance_color(dist: Option<usize>, ell: usize, big_d: u32) -> u32 {
    match dist {
        Some(t) if t <= ell => big_d + 1,
        Some(t) if t > 2 * ell => big_d + 2,
        None => big_d + 2,
        Some(t) if 2 * ell - t <= big_d as usize => (2 * ell - t) as u32,
        Some(_) => big_d + 3,
    }
}
