//! Crosses between two minimum paths sharing a target.
//!
//! With `P1 = P_{x1 z}` and `P2 = P_{x2 z}`, two distinct edges `v1u2` and
//! `u1v2` form a cross when `u1` is at or before `v1` on `P1` and `u2` is at
//! or before `v2` on `P2`. Crosses are classified as
//!
//! * `A`: real cross, `u1 != v1` and `u2 != v2`;
//! * `D`: one side collapses (`ui == vi`) and the minimum path of `vi`
//!   starts with the edge `vi vj`;
//! * `C`: one side collapses and `uj vj` is an edge;
//! * `B`: one side collapses and neither of the above.
//!
//! Pairs where both edges already lie on one of the two paths are skipped:
//! they describe two paths merging (for instance both edges entering the same
//! vertex), not a crossing, and the exclusion argument does not cover them.
//! With that convention only `C` and `D` can occur on minimum paths.

use serde::Serialize;

use super::{lex_min_path_tree, EdgeOrder, Graph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CrossKind {
    A,
    B,
    C,
    D,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cross {
    pub x1: usize,
    pub x2: usize,
    pub z: usize,
    pub u1: usize,
    pub v1: usize,
    pub u2: usize,
    pub v2: usize,
    pub kind: CrossKind,
}

pub fn find_crosses(g: &Graph, x1: usize, x2: usize, z: usize, ord: &EdgeOrder) -> Result<Vec<Cross>> {
    for v in [x1, x2, z] {
        g.check_vertex(v)?;
    }
    if x1 == x2 {
        return Err(Error::precondition("cross endpoints must differ"));
    }
    let tree = lex_min_path_tree(g, z, ord)?;
    let unreachable = |x| Error::precondition(format!("{x} cannot reach {z}"));
    let p1 = tree.path_from(x1).ok_or_else(|| unreachable(x1))?;
    let p2 = tree.path_from(x2).ok_or_else(|| unreachable(x2))?;
    let (p1, p2) = (p1.vertices(), p2.vertices());

    // Every graph edge joining a vertex of P1 (index i) to one of P2 (index j).
    let mut links = Vec::new();
    for (i, &a) in p1.iter().enumerate() {
        for (j, &b) in p2.iter().enumerate() {
            if g.has_edge(a, b) {
                links.push((i, j));
            }
        }
    }

    let edge = |i: usize, j: usize| {
        let (a, b) = (p1[i], p2[j]);
        (a.min(b), a.max(b))
    };
    let on_paths = |(a, b): (usize, usize)| {
        let on = |p: &[usize]| p.windows(2).any(|w| (w[0].min(w[1]), w[0].max(w[1])) == (a, b));
        on(p1) || on(p2)
    };
    let mut crosses = Vec::new();
    for &(iv1, ju2) in &links {
        for &(iu1, jv2) in &links {
            let (e1, e2) = (edge(iv1, ju2), edge(iu1, jv2));
            if iu1 > iv1 || ju2 > jv2 || e1 == e2 || (on_paths(e1) && on_paths(e2)) {
                continue;
            }
            let (u1, v1, u2, v2) = (p1[iu1], p1[iv1], p2[ju2], p2[jv2]);
            let kind = if u1 != v1 && u2 != v2 {
                CrossKind::A
            } else {
                // (collapsed vertex, other side's u, other side's v)
                let (vi, uj, vj) = if u2 == v2 { (v2, u1, v1) } else { (v1, u2, v2) };
                if tree.successor(vi) == Some(vj) {
                    CrossKind::D
                } else if g.has_edge(uj, vj) {
                    CrossKind::C
                } else {
                    CrossKind::B
                }
            };
            crosses.push(Cross {
                x1,
                x2,
                z,
                u1,
                v1,
                u2,
                v2,
                kind,
            });
        }
    }
    Ok(crosses)
}
