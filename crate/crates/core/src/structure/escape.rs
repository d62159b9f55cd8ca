//! Escapes from root sections and the per-`b` escape digraphs.
//!
//! An escape from `a` is an edge `uv` of the restricted graph with
//! `u ∈ RS(a)`, `v ∉ RS(a)`, lying on no `P_ab'`. For an independent pair
//! the end `v` sits on some `P_a'b` with `a' ≠ a`, where `b` is the unique
//! target whose path from `a` passes through `u`; anything else means the
//! pair was not independent after all and is reported as an error.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::pairs::{independence_violation, PairContext};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeArc {
    pub from: usize,
    pub to: usize,
    pub b: usize,
    pub u: usize,
    pub v: usize,
    /// `u` is neither a critical nor a pre-critical vertex.
    pub deep: bool,
}

/// Escape digraph of one `b` on vertex set `A`, with every witnessing edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeDigraph {
    pub b: usize,
    pub arcs: Vec<EscapeArc>,
    pub acyclic: bool,
    /// The deep arcs form a transitive tournament on `A`.
    pub deep_transitive_tournament: bool,
}

impl EscapeDigraph {
    /// Distinct `(from, to)` pairs, optionally deep ones only.
    pub fn arc_pairs(&self, deep_only: bool) -> BTreeSet<(usize, usize)> {
        self.arcs.iter().filter(|e| e.deep || !deep_only).map(|e| (e.from, e.to)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeAnalysis {
    pub per_b: Vec<EscapeDigraph>,
    /// Every full escape digraph is acyclic.
    pub acyclic: bool,
    /// Every deep escape digraph is a transitive tournament.
    pub escape_property: bool,
    /// For each `a`, the path edges leaving `RS(a)` form an induced matching.
    pub induced_matching: bool,
}

/// Topological order of `0..k` under `arcs`, smallest index first among
/// ties; `None` when there is a cycle.
pub(crate) fn topological_order(k: usize, arcs: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; k];
    for &(_, t) in arcs {
        indeg[t] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..k).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &(_, t) in arcs.range((i, 0)..(i + 1, 0)) {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.insert(t);
            }
        }
    }
    (order.len() == k).then_some(order)
}

pub fn escape_analysis(g: &Graph, ctx: &PairContext) -> Result<EscapeAnalysis> {
    if let Some(v) = independence_violation(g, ctx) {
        return Err(Error::precondition(format!(
            "escape analysis needs an independent pair; B({}, {}) meets {:?}",
            v.center,
            ctx.ell(),
            v.trace
        )));
    }
    let h = ctx.restricted_graph();
    let (na, nb) = (ctx.a_set().len(), ctx.b_set().len());
    let critical = ctx.critical_vertices();
    let on_path = |i: usize, j: usize, x: usize| ctx.pair(i, j).path.contains(x);

    let mut per_b_arcs: Vec<Vec<EscapeArc>> = vec![Vec::new(); nb];
    let mut induced_matching = true;
    for i in 0..na {
        let rs = ctx.root_section_a(i);
        let a = ctx.a_set()[i];
        let mut leaving: BTreeSet<(usize, usize)> = BTreeSet::new();
        for u in rs.iter() {
            for &v in h.neighbors(u) {
                if rs.contains(v) {
                    continue;
                }
                if (0..nb).any(|j| ctx.pair(i, j).path.contains_edge(u, v)) {
                    leaving.insert((u, v));
                    continue;
                }
                let bu: Vec<usize> = (0..nb).filter(|&j| on_path(i, j, u)).collect();
                let ends: Vec<(usize, usize)> = (0..na)
                    .filter(|&i2| i2 != i)
                    .flat_map(|i2| (0..nb).map(move |j2| (i2, j2)))
                    .filter(|&(i2, j2)| on_path(i2, j2, v))
                    .collect();
                let bv: BTreeSet<usize> = ends.iter().map(|&(_, j2)| j2).collect();
                if bu.len() != 1 || bv.len() != 1 || !bv.contains(&bu[0]) {
                    return Err(Error::verification(format!(
                        "escape {u}-{v} from {a} cannot be attributed to a single target"
                    )));
                }
                let origins: Vec<usize> = (0..na)
                    .filter(|&i2| h.neighbors(v).iter().any(|&w| ctx.root_section_a(i2).contains(w)))
                    .collect();
                if origins != [i] || (0..na).any(|i2| ctx.root_section_a(i2).contains(v)) {
                    return Err(Error::verification(format!(
                        "escape end {v} has origin root sections {origins:?}"
                    )));
                }
                let j = bu[0];
                let targets: BTreeSet<usize> = ends.iter().map(|&(i2, _)| i2).collect();
                for i2 in targets {
                    per_b_arcs[j].push(EscapeArc {
                        from: a,
                        to: ctx.a_set()[i2],
                        b: ctx.b_set()[j],
                        u,
                        v,
                        deep: !critical.contains(u),
                    });
                }
            }
        }
        induced_matching &= is_induced_matching(h, &leaving);
    }

    let index: BTreeMap<usize, usize> = ctx.a_set().iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let per_b: Vec<EscapeDigraph> = per_b_arcs
        .into_iter()
        .enumerate()
        .map(|(j, mut arcs)| {
            arcs.sort_by_key(|e| (e.from, e.to, e.u, e.v));
            let as_idx = |deep_only: bool| -> BTreeSet<(usize, usize)> {
                arcs.iter()
                    .filter(|e| e.deep || !deep_only)
                    .map(|e| (index[&e.from], index[&e.to]))
                    .collect()
            };
            let full = as_idx(false);
            let deep = as_idx(true);
            let tournament = (0..na).all(|x| (x + 1..na).all(|y| deep.contains(&(x, y)) != deep.contains(&(y, x))));
            EscapeDigraph {
                b: ctx.b_set()[j],
                acyclic: topological_order(na, &full).is_some(),
                deep_transitive_tournament: tournament && topological_order(na, &deep).is_some(),
                arcs,
            }
        })
        .collect();
    Ok(EscapeAnalysis {
        acyclic: per_b.iter().all(|d| d.acyclic),
        escape_property: per_b.iter().all(|d| d.deep_transitive_tournament),
        induced_matching,
        per_b,
    })
}

fn is_induced_matching(h: &Graph, edges: &BTreeSet<(usize, usize)>) -> bool {
    let list: Vec<&(usize, usize)> = edges.iter().collect();
    for (k, &&(a1, b1)) in list.iter().enumerate() {
        for &&(a2, b2) in &list[k + 1..] {
            if [a1, b1].iter().any(|x| *x == a2 || *x == b2) {
                return false;
            }
            if [a1, b1].iter().any(|&x| h.has_edge(x, a2) || h.has_edge(x, b2)) {
                return false;
            }
        }
    }
    true
}
