//! Ternary trees whose leaves are the graph vertices.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{cutrank, Bipartition};
use crate::error::{Error, Result};
use crate::graph::io::{content_lines, numbers};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryTree {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    node_of_vertex: Vec<usize>,
    vertex_of_node: Vec<Option<usize>>,
}

impl TernaryTree {
    /// `leaves` pairs each leaf node with the graph vertex it represents.
    pub fn new(num_nodes: usize, edges: &[(usize, usize)], leaves: &[(usize, usize)]) -> Result<Self> {
        let bad = |msg: String| Error::precondition(format!("malformed ternary tree: {msg}"));
        if num_nodes == 0 {
            return Err(bad("no nodes".into()));
        }
        if edges.len() != num_nodes - 1 {
            return Err(bad(format!("{} nodes need {} edges, got {}", num_nodes, num_nodes - 1, edges.len())));
        }
        let mut adj = vec![Vec::new(); num_nodes];
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= num_nodes || v >= num_nodes || u == v {
                return Err(bad(format!("invalid edge {u}-{v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("duplicate edge".into()));
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        // n-1 edges plus connectivity makes it a tree.
        let mut seen = vec![false; num_nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !std::mem::replace(&mut seen[w], true) {
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(bad("not connected".into()));
        }
        if let Some(u) = (0..num_nodes).find(|&u| !matches!(adj[u].len(), 0 | 1 | 3)) {
            return Err(bad(format!("node {u} has degree {}", adj[u].len())));
        }
        let leaf_count = (0..num_nodes).filter(|&u| adj[u].len() <= 1).count();
        let mut vertex_of_node = vec![None; num_nodes];
        let mut node_of_vertex = vec![usize::MAX; leaf_count];
        for &(leaf, vertex) in leaves {
            if leaf >= num_nodes || adj[leaf].len() > 1 {
                return Err(bad(format!("node {leaf} is not a leaf")));
            }
            if vertex >= leaf_count {
                return Err(bad(format!("vertex {vertex} out of range for {leaf_count} leaves")));
            }
            if vertex_of_node[leaf].is_some() || node_of_vertex[vertex] != usize::MAX {
                return Err(bad(format!("leaf {leaf} or vertex {vertex} mapped twice")));
            }
            vertex_of_node[leaf] = Some(vertex);
            node_of_vertex[vertex] = leaf;
        }
        if leaves.len() != leaf_count {
            return Err(bad(format!("{} of {leaf_count} leaves mapped", leaves.len())));
        }
        Ok(TernaryTree { adj, edges: canon, node_of_vertex, vertex_of_node })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of leaves, which is the vertex count of the represented graph.
    pub fn leaf_count(&self) -> usize {
        self.node_of_vertex.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.adj[node].len() <= 1
    }

    pub fn vertex_of(&self, node: usize) -> Option<usize> {
        self.vertex_of_node[node]
    }

    pub fn leaf_of(&self, vertex: usize) -> usize {
        self.node_of_vertex[vertex]
    }

    /// Nodes on `v`'s side once the edge `uv` is removed.
    pub fn side_nodes(&self, u: usize, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut stack = vec![(v, u)];
        while let Some((x, parent)) = stack.pop() {
            for &w in &self.adj[x] {
                if w != parent {
                    out.push(w);
                    stack.push((w, x));
                }
            }
        }
        out
    }

    /// Graph vertices on `v`'s side once the edge `uv` is removed.
    pub fn side_vertices(&self, u: usize, v: usize) -> Vec<usize> {
        let mut vs: Vec<usize> =
            self.side_nodes(u, v).into_iter().filter_map(|x| self.vertex_of_node[x]).collect();
        vs.sort_unstable();
        vs
    }
}

/// Largest cutrank over the tree edges, i.e. the width of this particular
/// decomposition.
pub fn width(g: &Graph, t: &TernaryTree) -> Result<usize> {
    if t.leaf_count() != g.vertex_count() {
        return Err(Error::precondition(format!(
            "tree has {} leaves, graph has {} vertices",
            t.leaf_count(),
            g.vertex_count()
        )));
    }
    let mut best = 0;
    for &(u, v) in t.edges() {
        let part = Bipartition::new(g.vertex_count(), &t.side_vertices(u, v))?;
        best = best.max(cutrank(g, &part)?);
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedEdge {
    pub edge: (usize, usize),
    /// Labeled leaves on the side of `edge.0` and of `edge.1`.
    pub labeled: (usize, usize),
}

/// Finds a tree edge with at least a third of the labeled leaves on each
/// side. Edges are oriented toward their heavier side; a sink of that
/// orientation has every component of `T - sink` at most half full, so the
/// fullest of its (at most three) components has at least a third.
pub fn balanced_edge(t: &TernaryTree, labeled: &[usize]) -> Result<BalancedEdge> {
    let mut is_labeled = vec![false; t.node_count()];
    for &x in labeled {
        if x >= t.node_count() || !t.is_leaf(x) {
            return Err(Error::precondition(format!("labeled node {x} is not a leaf")));
        }
        is_labeled[x] = true;
    }
    let alpha = is_labeled.iter().filter(|&&b| b).count();
    if alpha <= 2 {
        return Err(Error::precondition(format!("need more than 2 labeled leaves, got {alpha}")));
    }
    let count = |u: usize, v: usize| t.side_nodes(u, v).into_iter().filter(|&x| is_labeled[x]).count();

    let mut node = 0;
    'walk: loop {
        for &w in t.neighbors(node) {
            // The edge points away from `node` when `w`'s side is strictly heavier.
            if 2 * count(node, w) > alpha {
                node = w;
                continue 'walk;
            }
        }
        break;
    }
    let (w, heavy) = t
        .neighbors(node)
        .iter()
        .map(|&w| (w, count(node, w)))
        .max_by_key(|&(w, c)| (c, std::cmp::Reverse(w)))
        .ok_or_else(|| Error::precondition("tree has a single node"))?;
    let result = BalancedEdge { edge: (node, w), labeled: (alpha - heavy, heavy) };
    let need = alpha.div_ceil(3);
    if result.labeled.0 < need || result.labeled.1 < need {
        return Err(Error::verification(format!("unbalanced edge {:?}", result)));
    }
    Ok(result)
}

/// Random ternary tree with `n` leaves mapped to a random vertex order.
/// Leaves are added by subdividing a random edge.
pub fn random_ternary_tree(n: usize, rng: &mut impl Rng) -> Result<TernaryTree> {
    if n == 0 {
        return Err(Error::precondition("a ternary tree needs at least one leaf"));
    }
    let mut edges = Vec::new();
    let mut leaves = vec![0];
    let mut nodes = 1;
    if n >= 2 {
        edges.push((0, 1));
        leaves.push(1);
        nodes = 2;
    }
    while leaves.len() < n {
        let k = rng.gen_range(0..edges.len());
        let (u, v) = edges[k];
        let (mid, leaf) = (nodes, nodes + 1);
        nodes += 2;
        edges[k] = (u, mid);
        edges.push((mid, v));
        edges.push((mid, leaf));
        leaves.push(leaf);
    }
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.shuffle(rng);
    let map: Vec<(usize, usize)> = leaves.into_iter().zip(vertices).collect();
    TernaryTree::new(nodes, &edges, &map)
}

/// Parses `t <num_nodes>`, then `b <u> <v>` tree edges and `l <leaf> <vertex>`
/// leaf assignments.
pub fn parse_tree(text: &str) -> Result<TernaryTree> {
    let mut nodes = None;
    let mut edges = Vec::new();
    let mut leaves = Vec::new();
    for (line_no, fields) in content_lines(text) {
        match fields[0] {
            "t" if nodes.is_none() => nodes = Some(numbers(line_no, &fields[1..], 1)?[0]),
            "t" => return Err(Error::parse(line_no, "duplicate header")),
            "b" | "l" if nodes.is_none() => {
                return Err(Error::parse(line_no, "record before `t` header"))
            }
            "b" => {
                let n = numbers(line_no, &fields[1..], 2)?;
                edges.push((n[0], n[1]));
            }
            "l" => {
                let n = numbers(line_no, &fields[1..], 2)?;
                leaves.push((n[0], n[1]));
            }
            other => return Err(Error::parse(line_no, format!("unknown record `{other}`"))),
        }
    }
    let nodes = nodes.ok_or_else(|| Error::parse(0, "missing `t <num_nodes>` header"))?;
    TernaryTree::new(nodes, &edges, &leaves)
}

pub fn write_tree(t: &TernaryTree) -> String {
    let mut out = format!("t {}\n", t.node_count());
    for &(u, v) in t.edges() {
        writeln!(out, "b {u} {v}").expect("writing to a String");
    }
    for node in 0..t.node_count() {
        if let Some(v) = t.vertex_of(node) {
            writeln!(out, "l {node} {v}").expect("writing to a String");
        }
    }
    out
}
