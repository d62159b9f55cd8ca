//! Edge orders, paths, and lexicographically minimum shortest paths.
//!
//! Paths are compared from their last edge backwards: a path with no edges
//! is smallest, two paths ending with the same edge compare as their
//! prefixes, otherwise the last edges decide. For a fixed target `z` the
//! minimum path from every source is stored as a successor map, which works
//! because every suffix of a minimum path is itself the minimum path.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Distance, Graph};
use crate::error::{Error, Result};

/// Strict total order on the edges of one graph, stored as a rank per
/// canonical edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrder {
    rank: Vec<usize>,
}

impl EdgeOrder {
    /// Lexicographic order on `(min endpoint, max endpoint)`.
    pub fn canonical(g: &Graph) -> Self {
        EdgeOrder {
            rank: (0..g.edge_count()).collect(),
        }
    }

    /// `ranks[i]` is the rank of the `i`-th canonical edge. Must be a
    /// permutation of `0..m`.
    pub fn from_ranks(g: &Graph, ranks: Vec<usize>) -> Result<Self> {
        let m = g.edge_count();
        if ranks.len() != m {
            return Err(Error::precondition(format!(
                "edge order has {} ranks for {m} edges",
                ranks.len()
            )));
        }
        let mut seen = vec![false; m];
        for &r in &ranks {
            if r >= m || std::mem::replace(&mut seen[r], true) {
                return Err(Error::precondition("edge ranks are not a permutation"));
            }
        }
        Ok(EdgeOrder { rank: ranks })
    }

    pub fn random<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Self {
        let mut rank: Vec<usize> = (0..g.edge_count()).collect();
        rank.shuffle(rng);
        EdgeOrder { rank }
    }

    /// Rank of edge `{u, v}`. Panics if it is not an edge of `g`.
    pub fn rank(&self, g: &Graph, u: usize, v: usize) -> usize {
        let idx = g
            .edge_index(u, v)
            .unwrap_or_else(|| panic!("{u}-{v} is not an edge"));
        self.rank[idx]
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.rank.len() == g.edge_count() {
            Ok(())
        } else {
            Err(Error::precondition("edge order belongs to a different graph"))
        }
    }
}

/// A simple path given by its vertex sequence. Its length is the number of
/// edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    /// Validates adjacency of consecutive vertices and distinctness.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::precondition("a path needs at least one vertex"));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        for w in vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::precondition(format!("{}-{} is not an edge", w[0], w[1])));
            }
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::precondition("path repeats a vertex"));
        }
        Ok(Path { vertices })
    }

    pub(crate) fn new_unchecked(vertices: Vec<usize>) -> Self {
        Path { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("paths are nonempty")
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.edges().any(|(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    pub fn reversed(&self) -> Path {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Path { vertices }
    }

    pub fn is_simple(&self) -> bool {
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}

/// Minimum-length, lexicographically minimum paths from every vertex to a
/// fixed target.
#[derive(Debug, Clone)]
pub struct LexPathTree {
    target: usize,
    dist: Vec<Distance>,
    succ: Vec<Option<usize>>,
}

impl LexPathTree {
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn distance(&self, u: usize) -> Distance {
        self.dist[u]
    }

    pub fn distances(&self) -> &[Distance] {
        &self.dist
    }

    /// Next vertex after `u` on the minimum path to the target.
    pub fn successor(&self, u: usize) -> Option<usize> {
        self.succ[u]
    }

    /// The minimum path from `u` to the target, or `None` if unreachable.
    pub fn path_from(&self, u: usize) -> Option<Path> {
        self.dist[u]?;
        let mut vertices = vec![u];
        let mut cur = u;
        while let Some(next) = self.succ[cur] {
            vertices.push(next);
            cur = next;
        }
        Some(Path::new_unchecked(vertices))
    }
}

/// Layered rank propagation from `z`: within each BFS layer the paths are
/// ranked by (rank of the successor's path, rank of the connecting edge),
/// which is exactly the backwards lexicographic comparison.
pub fn lex_min_path_tree(g: &Graph, z: usize, ord: &EdgeOrder) -> Result<LexPathTree> {
    g.check_vertex(z)?;
    ord.check(g)?;
    let n = g.vertex_count();
    let dist = g.bfs_avoiding(z, None);
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = *d {
            if layers.len() <= d {
                layers.resize(d + 1, Vec::new());
            }
            layers[d].push(v);
        }
    }

    let mut succ = vec![None; n];
    let mut rank = vec![usize::MAX; n];
    rank[z] = 0;
    for k in 1..layers.len() {
        let mut keyed: Vec<((usize, usize), usize)> = layers[k]
            .iter()
            .map(|&u| {
                let w = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&w| dist[w] == Some(k - 1))
                    .min_by_key(|&w| rank[w])
                    .expect("BFS layer vertices have a parent");
                succ[u] = Some(w);
                ((rank[w], ord.rank(g, u, w)), u)
            })
            .collect();
        keyed.sort_unstable();
        for (r, &(_, u)) in keyed.iter().enumerate() {
            rank[u] = r;
        }
    }

    Ok(LexPathTree {
        target: z,
        dist,
        succ,
    })
}
