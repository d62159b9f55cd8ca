//! Disconnecting families and the shattering certificates they yield.
//!
//! A family `(S_ab)` is `ell`-disconnecting for `(A, B)` when, for every
//! subcollection `C` and every pair, `d(a, b) > ell` in `G ∖ ⋃C` exactly
//! when `S_ab ∈ C`. Deleting vertices never shortens a distance, so it is
//! enough to check the two extreme collections per pair: `{S_ab}` alone
//! must separate, and every other member together must not. Any `C`
//! containing `S_ab` deletes a superset of `S_ab`; any `C` avoiding it
//! deletes a subset of the union of the others.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSet {
    pub a: usize,
    pub b: usize,
    pub set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisconnectingFamily {
    pub radius: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub sets: Vec<PairSet>,
}

impl DisconnectingFamily {
    /// One set per pair, sets disjoint from `A ∪ B`, all ids below `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let members: BTreeSet<usize> = self.a.iter().chain(&self.b).copied().collect();
        if members.len() != self.a.len() + self.b.len() {
            return Err(Error::precondition("A and B must be disjoint sets of distinct vertices"));
        }
        if let Some(&v) = members.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidVertex { vertex: v, n });
        }
        let mut seen = BTreeSet::new();
        for s in &self.sets {
            if !self.a.contains(&s.a) || !self.b.contains(&s.b) {
                return Err(Error::precondition(format!("set for ({}, {}) is not indexed by A × B", s.a, s.b)));
            }
            if !seen.insert((s.a, s.b)) {
                return Err(Error::precondition(format!("two sets for pair ({}, {})", s.a, s.b)));
            }
            for &v in &s.set {
                if v >= n {
                    return Err(Error::InvalidVertex { vertex: v, n });
                }
                if members.contains(&v) {
                    return Err(Error::precondition(format!("set for ({}, {}) contains member {v}", s.a, s.b)));
                }
            }
        }
        if seen.len() != self.a.len() * self.b.len() {
            return Err(Error::precondition("family must hold exactly one set per pair"));
        }
        Ok(())
    }

    pub fn set_for(&self, a: usize, b: usize) -> Option<&[usize]> {
        self.sets.iter().find(|s| s.a == a && s.b == b).map(|s| s.set.as_slice())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DisconnectCheck {
    /// `d(a, b) <= radius` even after deleting `S_ab`.
    Separation,
    /// `d(a, b) > radius` after deleting every other set.
    Persistence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisconnectViolation {
    pub a: usize,
    pub b: usize,
    pub check: DisconnectCheck,
}

fn within(g: &Graph, a: usize, b: usize, radius: usize, removed: &VertexSet) -> bool {
    g.bfs_avoiding(a, Some(removed))[b].is_some_and(|d| d <= radius)
}

/// `None` when the family is disconnecting; otherwise the first failing
/// pair (in set order) and which of the two checks failed.
pub fn verify_disconnecting(g: &Graph, fam: &DisconnectingFamily) -> Result<Option<DisconnectViolation>> {
    let n = g.vertex_count();
    fam.validate(n)?;
    let sets: Vec<VertexSet> = fam
        .sets
        .iter()
        .map(|s| VertexSet::from_iter_in(n, s.set.iter().copied()))
        .collect();
    for (k, s) in fam.sets.iter().enumerate() {
        if within(g, s.a, s.b, fam.radius, &sets[k]) {
            return Ok(Some(DisconnectViolation {
                a: s.a,
                b: s.b,
                check: DisconnectCheck::Separation,
            }));
        }
        let mut others = VertexSet::empty(n);
        for (k2, t) in sets.iter().enumerate() {
            if k2 != k {
                others.union_with(t);
            }
        }
        if !within(g, s.a, s.b, fam.radius, &others) {
            return Ok(Some(DisconnectViolation {
                a: s.a,
                b: s.b,
                check: DisconnectCheck::Persistence,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEquation {
    pub b: usize,
    /// `A_b`, the subset of `A` assigned to `b`.
    pub assigned: Vec<usize>,
    /// `B(b, radius) ∩ A` in the graph with `deleted` removed.
    pub trace: Vec<usize>,
}

/// Deletion certificate showing `A` shattered by radius-`radius` balls.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShatterCertificate {
    pub radius: usize,
    pub a: Vec<usize>,
    pub deleted: Vec<usize>,
    /// Vertices of the induced subgraph in which `A` is shattered.
    pub subgraph: Vec<usize>,
    pub equations: Vec<TraceEquation>,
}

/// Sorted `B` is matched to the subsets of sorted `A` by bitmask: the
/// `k`-th `b` gets `{a_i : bit i of k}`. The deleted set is the union of
/// `S_ab` over `a ∈ A_b`, and every equation `B(b, ell) ∩ A = A ∖ A_b` is
/// re-checked by BFS.
pub fn shatter_certificate(g: &Graph, fam: &DisconnectingFamily) -> Result<ShatterCertificate> {
    let n = g.vertex_count();
    fam.validate(n)?;
    let k = fam.a.len();
    if k >= usize::BITS as usize - 1 || fam.b.len() != 1usize << k {
        return Err(Error::precondition(format!(
            "need |B| = 2^|A|, got |A| = {k}, |B| = {}",
            fam.b.len()
        )));
    }
    let mut a = fam.a.clone();
    let mut b = fam.b.clone();
    a.sort_unstable();
    b.sort_unstable();

    let assigned: BTreeMap<usize, Vec<usize>> = b
        .iter()
        .enumerate()
        .map(|(mask, &bv)| (bv, (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| a[i]).collect()))
        .collect();
    let mut deleted = VertexSet::empty(n);
    for (&bv, sub) in &assigned {
        for &av in sub {
            for &v in fam.set_for(av, bv).expect("validated") {
                deleted.insert(v);
            }
        }
    }
    let a_set = VertexSet::from_iter_in(n, a.iter().copied());
    let mut equations = Vec::with_capacity(b.len());
    for (&bv, sub) in &assigned {
        let dist = g.bfs_avoiding(bv, Some(&deleted));
        let trace: Vec<usize> = a_set.iter().filter(|&x| dist[x].is_some_and(|t| t <= fam.radius)).collect();
        let expect: Vec<usize> = a.iter().copied().filter(|x| !sub.contains(x)).collect();
        if trace != expect {
            return Err(Error::verification(format!(
                "b = {bv}: trace {trace:?} differs from A ∖ A_b = {expect:?}"
            )));
        }
        equations.push(TraceEquation {
            b: bv,
            assigned: sub.clone(),
            trace,
        });
    }
    let subgraph = (0..n).filter(|&v| !deleted.contains(v)).collect();
    Ok(ShatterCertificate {
        radius: fam.radius,
        a,
        deleted: deleted.to_vec(),
        subgraph,
        equations,
    })
}

/// Gadget realizing a certificate: `A`, `B` with `|B| = 2^|A|` and, for each
/// pair, a private path `a - s_ab - b` of length 2 (so `radius` = 2).
/// Returns the graph and its family; used by tests and examples.
pub fn middle_vertex_gadget(k: usize) -> Result<(Graph, DisconnectingFamily)> {
    if k > 6 {
        return Err(Error::CapExceeded {
            what: "gadget dimension",
            limit: 6,
            actual: k,
        });
    }
    let nb = 1usize << k;
    let a: Vec<usize> = (0..k).collect();
    let b: Vec<usize> = (k..k + nb).collect();
    let mut next = k + nb;
    let mut edges = Vec::new();
    let mut sets = Vec::new();
    for &av in &a {
        for &bv in &b {
            edges.push((av, next));
            edges.push((next, bv));
            sets.push(PairSet {
                a: av,
                b: bv,
                set: vec![next],
            });
            next += 1;
        }
    }
    let g = Graph::from_edges(next, edges)?;
    Ok((g, DisconnectingFamily { radius: 2, a, b, sets }))
}
