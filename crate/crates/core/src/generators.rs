//! Seeded graph families, the long-path clique construction, cographs with
//! certified decompositions and the pairs hypergraph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::rank::{width, TernaryTree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphFamily {
    Grid { rows: usize, cols: usize },
    Path { n: usize },
    Cycle { n: usize },
    Clique { n: usize },
    CompleteBipartite { left: usize, right: usize },
    Gnp { n: usize, p: f64 },
}

impl std::fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphFamily::Grid { rows, cols } => write!(f, "grid({rows}x{cols})"),
            GraphFamily::Path { n } => write!(f, "path({n})"),
            GraphFamily::Cycle { n } => write!(f, "cycle({n})"),
            GraphFamily::Clique { n } => write!(f, "clique({n})"),
            GraphFamily::CompleteBipartite { left, right } => write!(f, "complete_bipartite({left},{right})"),
            GraphFamily::Gnp { n, p } => write!(f, "gnp({n},{p})"),
        }
    }
}

/// Builds a member of a family. Only `Gnp` uses the seed.
pub fn family(kind: &GraphFamily, seed: u64) -> Result<Graph> {
    let invalid = |msg: &str| Err(Error::precondition(format!("{kind}: {msg}")));
    match *kind {
        GraphFamily::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return invalid("grid sides must be positive");
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            Graph::from_edges(rows * cols, edges)
        }
        GraphFamily::Path { n } => {
            if n == 0 {
                return invalid("a path needs a vertex");
            }
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        GraphFamily::Cycle { n } => {
            if n < 3 {
                return invalid("a cycle needs at least 3 vertices");
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        GraphFamily::Clique { n } => {
            if n == 0 {
                return invalid("a clique needs a vertex");
            }
            Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        GraphFamily::CompleteBipartite { left, right } => {
            if left + right == 0 {
                return invalid("empty graph");
            }
            Graph::from_edges(left + right, (0..left).flat_map(|i| (left..left + right).map(move |j| (i, j))))
        }
        GraphFamily::Gnp { n, p } => {
            if n == 0 || !(0.0..=1.0).contains(&p) {
                return invalid("need n >= 1 and 0 <= p <= 1");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
    }
}

/// One long path `x_i, y_1, ..., y_{2l-1}, x_j` of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongPath {
    pub i: usize,
    pub j: usize,
    /// Ids of `y_1 .. y_{2l-1}` in order from `x_i`.
    pub internal: Vec<usize>,
}

impl LongPath {
    /// `y_l`, the vertex halfway between the two clique ends.
    pub fn midpoint(&self) -> usize {
        self.internal[self.internal.len() / 2]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnlGraph {
    #[serde(skip)]
    pub graph: Graph,
    pub n: usize,
    pub ell: usize,
    pub clique: Vec<usize>,
    pub long_paths: Vec<LongPath>,
}

impl GnlGraph {
    pub fn long_path(&self, i: usize, j: usize) -> Option<&LongPath> {
        let (i, j) = (i.min(j), i.max(j));
        self.long_paths.iter().find(|p| p.i == i && p.j == j)
    }

    /// Label sidecar: clique ids and the long-path index map.
    pub fn labels_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("labels serialize")
    }
}

/// A clique on `0..n` plus, for every pair `i < j`, an induced path with
/// `2l - 1` internal vertices from `x_i` to `x_j`. Internal vertices are
/// numbered after the clique in `(i, j, k)` order.
pub fn gnl(n: usize, ell: usize) -> Result<GnlGraph> {
    if n < 2 || ell < 1 {
        return Err(Error::precondition(format!("gnl needs n >= 2 and l >= 1, got ({n}, {ell})")));
    }
    let mut edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut next = n;
    let mut long_paths = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let internal: Vec<usize> = (next..next + 2 * ell - 1).collect();
            next += 2 * ell - 1;
            let mut prev = i;
            for &y in &internal {
                edges.push((prev, y));
                prev = y;
            }
            edges.push((prev, j));
            long_paths.push(LongPath { i, j, internal });
        }
    }
    Ok(GnlGraph {
        graph: Graph::from_edges(next, edges)?,
        n,
        ell,
        clique: (0..n).collect(),
        long_paths,
    })
}

/// Union/join recipe of a cograph; leaves become vertices in depth-first
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cotree {
    Vertex,
    Union(Vec<Cotree>),
    Join(Vec<Cotree>),
}

impl Cotree {
    pub fn leaf_count(&self) -> usize {
        match self {
            Cotree::Vertex => 1,
            Cotree::Union(c) | Cotree::Join(c) => c.iter().map(Cotree::leaf_count).sum(),
        }
    }
}

struct TreeBuilder {
    edges: Vec<(usize, usize)>,
    leaves: Vec<(usize, usize)>,
    graph_edges: Vec<(usize, usize)>,
    nodes: usize,
    vertices: usize,
}

impl TreeBuilder {
    /// Returns the subtree root node and the graph vertices below it.
    fn build(&mut self, t: &Cotree) -> Result<(usize, Vec<usize>)> {
        let children = match t {
            Cotree::Vertex => {
                let (node, v) = (self.nodes, self.vertices);
                self.nodes += 1;
                self.vertices += 1;
                self.leaves.push((node, v));
                return Ok((node, vec![v]));
            }
            Cotree::Union(c) | Cotree::Join(c) => c,
        };
        if children.is_empty() {
            return Err(Error::precondition("cotree node without children"));
        }
        let mut built = Vec::new();
        for c in children {
            built.push(self.build(c)?);
        }
        if let Cotree::Join(_) = t {
            for a in 0..built.len() {
                for b in a + 1..built.len() {
                    for &u in &built[a].1 {
                        for &v in &built[b].1 {
                            self.graph_edges.push((u, v));
                        }
                    }
                }
            }
        }
        // Caterpillar: fold the children into a chain of binary nodes.
        let mut iter = built.into_iter();
        let (mut root, mut below) = iter.next().expect("nonempty");
        for (child, vs) in iter {
            let node = self.nodes;
            self.nodes += 1;
            self.edges.push((node, root));
            self.edges.push((node, child));
            root = node;
            below.extend(vs);
        }
        Ok((root, below))
    }
}

/// Builds the cograph of a recipe together with a ternary tree read off the
/// cotree, and checks that the tree has width at most 1.
pub fn cograph_with_tree(recipe: &Cotree) -> Result<(Graph, TernaryTree)> {
    let mut b = TreeBuilder { edges: Vec::new(), leaves: Vec::new(), graph_edges: Vec::new(), nodes: 0, vertices: 0 };
    let (root, _) = b.build(recipe)?;
    let g = Graph::from_edges(b.vertices, b.graph_edges)?;

    // The top binary node has degree 2; splice it out.
    let mut edges = b.edges;
    let mut nodes = b.nodes;
    let mut leaves = b.leaves;
    if nodes > 1 {
        let kids: Vec<usize> = edges.iter().filter(|e| e.0 == root).map(|e| e.1).collect();
        edges.retain(|e| e.0 != root);
        edges.push((kids[0], kids[1]));
        // The root is the last node created; ids stay dense once it is gone.
        debug_assert_eq!(root, nodes - 1);
        nodes -= 1;
    }
    leaves.sort_unstable();
    let t = TernaryTree::new(nodes, &edges, &leaves)?;
    let w = width(&g, &t)?;
    if w > 1 {
        return Err(Error::verification(format!("cotree decomposition has width {w}")));
    }
    Ok((g, t))
}

/// Random recipe with `n` leaves: each internal node splits its leaves into
/// 2 to 4 parts and is a union or a join with equal probability.
pub fn random_cotree(n: usize, seed: u64) -> Result<Cotree> {
    if n == 0 {
        return Err(Error::precondition("a cotree needs a leaf"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(grow_cotree(n, &mut rng))
}

fn grow_cotree(n: usize, rng: &mut ChaCha8Rng) -> Cotree {
    if n == 1 {
        return Cotree::Vertex;
    }
    let parts = rng.gen_range(2..=n.min(4));
    // Random composition of n into `parts` positive pieces.
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, n - 1, parts - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut prev = 0;
    let children = cuts
        .into_iter()
        .map(|c| {
            let size = c - prev;
            prev = c;
            grow_cotree(size, rng)
        })
        .collect();
    if rng.gen_bool(0.5) {
        Cotree::Union(children)
    } else {
        Cotree::Join(children)
    }
}

/// The edges of `K_n` as a hypergraph of 2-sets.
pub fn pairs_hypergraph(n: usize) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::precondition("pairs hypergraph needs n >= 2"));
    }
    Hypergraph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::b_ell;
    use crate::hypergraph::ShatterMode;

    #[test]
    fn family_sizes() {
        let g = family(&GraphFamily::Grid { rows: 3, cols: 3 }, 0).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        assert_eq!(family(&GraphFamily::Clique { n: 5 }, 0).unwrap().edge_count(), 10);
        assert_eq!(family(&GraphFamily::Cycle { n: 6 }, 0).unwrap().edge_count(), 6);
        assert_eq!(family(&GraphFamily::Path { n: 6 }, 0).unwrap().edge_count(), 5);
        assert_eq!(family(&GraphFamily::CompleteBipartite { left: 2, right: 3 }, 0).unwrap().edge_count(), 6);
        assert!(family(&GraphFamily::Cycle { n: 2 }, 0).is_err());
        assert!(family(&GraphFamily::Gnp { n: 3, p: 1.5 }, 0).is_err());
    }

    #[test]
    fn gnp_is_deterministic() {
        let kind = GraphFamily::Gnp { n: 10, p: 0.3 };
        assert_eq!(family(&kind, 7).unwrap(), family(&kind, 7).unwrap());
        assert_ne!(family(&kind, 7).unwrap(), family(&kind, 8).unwrap());
    }

    #[test]
    fn gnl_structure() {
        let g = gnl(4, 2).unwrap();
        assert_eq!(g.graph.vertex_count(), 22);
        assert_eq!(g.long_paths.len(), 6);
        assert!(g.long_paths.iter().all(|p| p.internal.len() == 3));
        for (n, ell) in [(2, 1), (3, 2), (5, 3)] {
            let h = gnl(n, ell).unwrap();
            let pairs = n * (n - 1) / 2;
            assert_eq!(h.graph.vertex_count(), n + (2 * ell - 1) * pairs);
            assert_eq!(h.graph.edge_count(), pairs + 2 * ell * pairs);
            for p in &h.long_paths {
                // Each long path is induced: internal vertices have degree 2.
                for &y in &p.internal {
                    assert_eq!(h.graph.degree(y), 2);
                }
                let d = h.graph.bfs_distances(p.midpoint()).unwrap();
                assert_eq!(d[p.i], Some(ell));
                assert_eq!(d[p.j], Some(ell));
            }
        }
        // gnl(2,1): x0 x1 joined directly and through y.
        let t = gnl(2, 1).unwrap();
        assert_eq!(t.graph.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert!(gnl(1, 1).is_err() && gnl(3, 0).is_err());
    }

    #[test]
    fn gnl_midpoint_balls() {
        for (n, ell) in [(4, 2), (5, 1), (4, 3)] {
            let g = gnl(n, ell).unwrap();
            for p in &g.long_paths {
                let ball = g.graph.ball(p.midpoint(), ell).unwrap();
                let hit: Vec<usize> = g.clique.iter().copied().filter(|&x| ball.contains(x)).collect();
                assert_eq!(hit, vec![p.i, p.j]);
            }
        }
    }

    #[test]
    fn gnl_no_three_on_a_long_path() {
        // Three vertices of one long path plus a clique vertex off it never
        // get fully shattered by the radius-l balls.
        let g = gnl(4, 2).unwrap();
        let h = b_ell(&g.graph, 2);
        let p = &g.long_paths[0];
        let on_path: Vec<usize> = std::iter::once(p.i).chain(p.internal.iter().copied()).chain([p.j]).collect();
        let outside = (0..4).find(|&x| x != p.i && x != p.j).unwrap();
        for a in 0..on_path.len() {
            for b in a + 1..on_path.len() {
                for c in b + 1..on_path.len() {
                    let x = [on_path[a], on_path[b], on_path[c], outside];
                    assert!(!h.hypergraph().is_shattered(&x, ShatterMode::Full).unwrap());
                }
            }
        }
    }

    #[test]
    fn cograph_recipes() {
        let k2 = Cotree::Join(vec![Cotree::Vertex, Cotree::Vertex]);
        let (g, t) = cograph_with_tree(&k2).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(t.node_count(), 2);

        let r = Cotree::Join(vec![Cotree::Union(vec![Cotree::Vertex, Cotree::Vertex]), Cotree::Vertex]);
        let (g, _) = cograph_with_tree(&r).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 2)]);

        let (g, t) = cograph_with_tree(&Cotree::Vertex).unwrap();
        assert_eq!((g.vertex_count(), t.node_count()), (1, 1));
        assert!(cograph_with_tree(&Cotree::Union(vec![])).is_err());

        for seed in 0..50 {
            let recipe = random_cotree(1 + seed as usize % 17, seed).unwrap();
            let (g, t) = cograph_with_tree(&recipe).unwrap();
            assert_eq!(g.vertex_count(), recipe.leaf_count());
            assert!(width(&g, &t).unwrap() <= 1);
        }
    }

    #[test]
    fn pairs_hypergraph_shape() {
        let h = pairs_hypergraph(2).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edge(0).to_vec(), vec![0, 1]);
        assert_eq!(pairs_hypergraph(6).unwrap().edge_count(), 15);
        assert!(pairs_hypergraph(1).is_err());
    }
}
