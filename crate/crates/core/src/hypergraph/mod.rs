//! Finite hypergraphs with indexed hyperedges.
//!
//! Hyperedges keep their index even when two of them have the same
//! content; ball hypergraphs rely on this (the index is the center).
//! Shattering only looks at content, so traces deduplicate.

mod shatter;
mod solvers;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::io::{content_lines, numbers};
use crate::vertex_set::VertexSet;

pub use shatter::{
    largest_shattered_set, shattered_lower_bound, two_vc_dimension, vc_dimension, LowerBound, ShatterMode,
    EXHAUSTIVE_VERTEX_CAP,
};
pub use solvers::{
    greedy_hitting_set, packing_number, pq_property, transversality, PqOutcome, SolveMode,
    EXACT_EDGE_CAP, EXACT_VERTEX_CAP,
};

#[derive(Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<VertexSet>,
}

impl std::fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

/// The distinct intersections `{e ∩ X : e ∈ F}` of a ground set `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceFamily {
    pub ground: Vec<usize>,
    pub members: BTreeSet<Vec<usize>>,
}

impl TraceFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, subset: &[usize]) -> bool {
        let mut s = subset.to_vec();
        s.sort_unstable();
        self.members.contains(&s)
    }
}

impl Hypergraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut sets = Vec::new();
        for e in edges {
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            sets.push(VertexSet::from_iter_in(n, e));
        }
        Ok(Hypergraph { n, edges: sets })
    }

    pub fn from_sets(n: usize, edges: Vec<VertexSet>) -> Result<Self> {
        if let Some(e) = edges.iter().find(|e| e.universe() != n) {
            return Err(Error::precondition(format!(
                "hyperedge over a universe of {} vertices, expected {n}",
                e.universe()
            )));
        }
        Ok(Hypergraph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &VertexSet {
        &self.edges[i]
    }

    pub(crate) fn ground_set(&self, x: &[usize]) -> Result<Vec<usize>> {
        let mut ground = x.to_vec();
        ground.sort_unstable();
        ground.dedup();
        if let Some(&v) = ground.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidVertex { vertex: v, n: self.n });
        }
        Ok(ground)
    }

    pub fn trace(&self, x: &[usize]) -> Result<TraceFamily> {
        let ground = self.ground_set(x)?;
        let members = self
            .edges
            .iter()
            .map(|e| ground.iter().copied().filter(|&v| e.contains(v)).collect())
            .collect();
        Ok(TraceFamily { ground, members })
    }

    pub fn is_shattered(&self, x: &[usize], mode: ShatterMode) -> Result<bool> {
        let tr = self.trace(x)?;
        let k = tr.ground.len();
        Ok(match mode {
            ShatterMode::Full => k < usize::BITS as usize && tr.len() == 1usize << k,
            ShatterMode::Pairs => (0..k).all(|i| {
                (i + 1..k).all(|j| tr.members.contains(&vec![tr.ground[i], tr.ground[j]]))
            }),
        })
    }

    /// Vertices of the dual are the edge indices; vertex `v` becomes the dual
    /// edge `{i : v ∈ e_i}`.
    pub fn dual(&self) -> Hypergraph {
        let m = self.edges.len();
        let edges = (0..self.n)
            .map(|v| {
                VertexSet::from_iter_in(m, (0..m).filter(|&i| self.edges[i].contains(v)))
            })
            .collect();
        Hypergraph { n: m, edges }
    }

    /// `incidence[i][v]` is true iff `v ∈ e_i`.
    pub fn incidence_matrix(&self) -> Vec<Vec<bool>> {
        self.edges
            .iter()
            .map(|e| (0..self.n).map(|v| e.contains(v)).collect())
            .collect()
    }
}

/// Parses `h <n> <k>` followed by `k` lines `s <v1> <v2> ...`.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (line_no, fields) in content_lines(text) {
        match fields[0] {
            "h" if header.is_none() => {
                let nums = numbers(line_no, &fields[1..], 2)?;
                header = Some((nums[0], nums[1]));
            }
            "h" => return Err(Error::parse(line_no, "duplicate header")),
            "s" if header.is_some() => {
                let nums = numbers(line_no, &fields[1..], fields.len() - 1)?;
                edges.push(nums);
            }
            "s" => return Err(Error::parse(line_no, "hyperedge before `h` header")),
            other => return Err(Error::parse(line_no, format!("unknown record `{other}`"))),
        }
    }
    let (n, k) = header.ok_or_else(|| Error::parse(0, "missing `h <n> <k>` header"))?;
    if edges.len() != k {
        return Err(Error::parse(
            0,
            format!("header announces {k} hyperedges, found {}", edges.len()),
        ));
    }
    Hypergraph::new(n, edges)
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("h {} {}\n", h.vertex_count(), h.edge_count());
    for e in h.edges() {
        out.push('s');
        for v in e.iter() {
            write!(out, " {v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}
