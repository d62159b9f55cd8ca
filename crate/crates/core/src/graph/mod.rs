//! Simple undirected graphs and their BFS metric.
//!
//! Vertices are `0..n`. Edges are kept in canonical order, sorted by
//! `(min endpoint, max endpoint)`, and every neighbor list is sorted. A
//! [`Graph`] is immutable once built.

mod cross;
pub(crate) mod io;
mod lexpath;

use std::collections::VecDeque;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub use cross::{find_crosses, Cross, CrossKind};
pub use io::{parse_graph, write_graph};
pub use lexpath::{lex_min_path_tree, EdgeOrder, LexPathTree, Path};

/// Hop distance; `None` is the explicit "unreachable" sentinel.
pub type Distance = Option<usize>;

const MAX_VERTICES: usize = 100_000;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting self-loops, parallel edges and ids `>= n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        debug_assert!(n <= MAX_VERTICES);
        let mut canon = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: canon,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order, each as `(min, max)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of `{u, v}` in the canonical edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        }
    }

    /// Hop distances from `source`.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Distance>> {
        self.check_vertex(source)?;
        Ok(self.bfs_avoiding(source, None))
    }

    /// BFS that treats the vertices of `removed` as deleted. A deleted source
    /// reaches nothing, itself included.
    pub fn distances_avoiding(&self, source: usize, removed: &VertexSet) -> Result<Vec<Distance>> {
        self.check_vertex(source)?;
        Ok(self.bfs_avoiding(source, Some(removed)))
    }

    pub(crate) fn bfs_avoiding(&self, source: usize, removed: Option<&VertexSet>) -> Vec<Distance> {
        let gone = |v: usize| removed.is_some_and(|r| r.contains(v));
        let mut dist = vec![None; self.n];
        if gone(source) {
            return dist;
        }
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices are reached");
            for &w in &self.adj[u] {
                if dist[w].is_none() && !gone(w) {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Full distance matrix by one BFS per vertex.
    pub fn all_pairs_distances(&self) -> Vec<Vec<Distance>> {
        (0..self.n).map(|s| self.bfs_avoiding(s, None)).collect()
    }

    /// `{v : d(x, v) <= k}`.
    pub fn ball(&self, x: usize, k: usize) -> Result<VertexSet> {
        let dist = self.bfs_distances(x)?;
        Ok(ball_from_distances(&dist, k))
    }

    /// Largest finite distance from `x`.
    pub fn eccentricity(&self, x: usize) -> Result<usize> {
        let dist = self.bfs_distances(x)?;
        Ok(dist.iter().flatten().copied().max().unwrap_or(0))
    }

    /// Subgraph induced by `s`, relabelled to `0..|s|` in increasing order of
    /// original id. The returned vector maps new ids to original ids.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut keep: Vec<usize> = s.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            self.check_vertex(v)?;
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
            .map(|&(u, v)| (new_id[u], new_id[v]));
        let g = Graph::from_edges(keep.len(), edges)?;
        Ok((g, keep))
    }

    /// Same vertex ids, but only the edges with both endpoints in `keep`.
    pub fn restrict_edges(&self, keep: &VertexSet) -> Graph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| keep.contains(u) && keep.contains(v));
        Graph::from_edges(self.n, edges).expect("subset of a valid edge set")
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Stable short identifier: the first 16 hex digits of the SHA-256 of the
    /// canonical text encoding.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(write_graph(self).as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

pub fn ball_from_distances(dist: &[Distance], k: usize) -> VertexSet {
    VertexSet::from_iter_in(
        dist.len(),
        dist.iter()
            .enumerate()
            .filter(|(_, d)| d.is_some_and(|d| d <= k))
            .map(|(v, _)| v),
    )
}
