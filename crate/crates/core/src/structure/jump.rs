//! Jump paths: minimum paths rerouted at their incoming vertex onto an
//! earlier jump path.
//!
//! For a fixed `b`, `A` is ordered by a topological order of the full escape
//! digraph (ties by index). The incoming vertex of `P_ab` is its first
//! vertex that ends an escape into `a` for `b`; the first-in escape used is
//! the one whose origin comes earliest in the order, then smallest `u`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::disconnect::{verify_disconnecting, DisconnectViolation, DisconnectingFamily, PairSet};
use super::escape::{topological_order, EscapeAnalysis};
use super::pairs::PairContext;
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::VertexSet;

/// Simple paths enumerated per audit before giving up on an instance.
pub const JUMP_PATH_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JumpPath {
    pub a: usize,
    pub b: usize,
    pub path: Path,
    /// `(u, v)` with `v` the incoming vertex; `None` for minimum paths.
    pub rerouting: Option<(usize, usize)>,
    /// From just after `c_ab` up to the incoming vertex (or `b`).
    pub free_section: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JumpPaths {
    pub b: usize,
    /// `A` in the order inherited from `b`.
    pub order: Vec<usize>,
    /// In the same order.
    pub paths: Vec<JumpPath>,
}

impl JumpPaths {
    pub fn path_of(&self, a: usize) -> Option<&JumpPath> {
        self.paths.iter().find(|p| p.a == a)
    }
}

/// Jump paths for one `b`; requires the deep escape digraph of `b` to be a
/// transitive tournament.
pub fn jump_paths(ctx: &PairContext, escapes: &EscapeAnalysis, b: usize) -> Result<JumpPaths> {
    let j = ctx
        .b_index(b)
        .ok_or_else(|| Error::precondition(format!("{b} is not in B")))?;
    let digraph = escapes
        .per_b
        .iter()
        .find(|d| d.b == b)
        .ok_or_else(|| Error::precondition("escape analysis does not belong to this pair"))?;
    if !digraph.deep_transitive_tournament {
        return Err(Error::precondition(format!("escape property fails for b = {b}")));
    }
    let na = ctx.a_set().len();
    let idx = |a: usize| ctx.a_index(a).expect("arcs stay inside A");
    let full: BTreeSet<(usize, usize)> = digraph.arcs.iter().map(|e| (idx(e.from), idx(e.to))).collect();
    let order = topological_order(na, &full).ok_or_else(|| Error::verification("escape digraph has a cycle"))?;
    let rank: Vec<usize> = {
        let mut r = vec![0; na];
        for (pos, &i) in order.iter().enumerate() {
            r[i] = pos;
        }
        r
    };
    let k = ctx.ell() - 3;

    let mut built: BTreeMap<usize, JumpPath> = BTreeMap::new();
    for &i in &order {
        let a = ctx.a_set()[i];
        let p = &ctx.pair(i, j).path;
        let incoming = digraph
            .arcs
            .iter()
            .filter(|e| e.to == a)
            .filter_map(|e| p.position(e.v).map(|pos| (pos, rank[idx(e.from)], e.u, e)))
            .min_by_key(|&(pos, r, u, _)| (pos, r, u));
        let jp = match incoming {
            None => JumpPath {
                a,
                b,
                path: p.clone(),
                rerouting: None,
                free_section: p.vertices()[k + 1..].to_vec(),
            },
            Some((pos, _, u, e)) => {
                let earlier = &built[&idx(e.from)];
                let at = earlier.path.position(u).ok_or_else(|| {
                    Error::verification(format!("first-in escape start {u} is not on the jump path of {}", e.from))
                })?;
                let mut vs = p.vertices()[..=pos].to_vec();
                vs.extend_from_slice(&earlier.path.vertices()[at..]);
                let path = Path::new(ctx.restricted_graph(), vs)?;
                if !path.is_simple() {
                    return Err(Error::verification(format!("jump path of ({a}, {b}) is not simple")));
                }
                JumpPath {
                    a,
                    b,
                    path,
                    rerouting: Some((u, e.v)),
                    free_section: p.vertices()[(k + 1).min(pos + 1)..=pos].to_vec(),
                }
            }
        };
        built.insert(i, jp);
    }
    let paths = order.iter().map(|i| built.remove(i).expect("built above")).collect();
    Ok(JumpPaths {
        b,
        order: order.iter().map(|&i| ctx.a_set()[i]).collect(),
        paths,
    })
}

/// Exhaustive look at all short `a → b` paths in the jump restriction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathAudit {
    pub length_bound: usize,
    pub paths_checked: usize,
    /// The enumeration cap was hit; nothing is claimed for this instance.
    pub skipped: bool,
    /// A short path avoiding `c_ab`.
    pub misses_critical: Option<Vec<usize>>,
    /// A short path avoiding `JPP(a, b) ∖ {a, b}`.
    pub misses_private_part: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JumpSystem {
    pub per_b: Vec<JumpPaths>,
    /// `2 ell - 3`.
    pub length_bound: usize,
    pub max_length: usize,
    /// Vertices on exactly one jump path, grouped by that path's pair.
    pub private_parts: Vec<PairSet>,
    /// An edge joining two different free sections, if any.
    pub free_section_edge: Option<(usize, usize)>,
    pub audit: PathAudit,
    /// Result of checking the private parts (minus `A ∪ B`) as a
    /// `(2 ell - 3)`-disconnecting family in the jump restriction.
    pub disconnecting_violation: Option<DisconnectViolation>,
}

/// Jump paths for every `b` plus the checks stated for pairs with the
/// escape property.
pub fn jump_system(ctx: &PairContext, escapes: &EscapeAnalysis) -> Result<JumpSystem> {
    let n = ctx.restricted_vertices().universe();
    let per_b: Vec<JumpPaths> = ctx.b_set().iter().map(|&b| jump_paths(ctx, escapes, b)).collect::<Result<_>>()?;
    let all: Vec<&JumpPath> = per_b.iter().flat_map(|jp| jp.paths.iter()).collect();
    let length_bound = 2 * ctx.ell() - 3;
    let max_length = all.iter().map(|p| p.path.len()).max().unwrap_or(0);

    let mut count = vec![0usize; n];
    let mut jump_vertices = VertexSet::empty(n);
    for p in &all {
        for &v in p.path.vertices() {
            count[v] += 1;
            jump_vertices.insert(v);
        }
    }
    let private_parts: Vec<PairSet> = all
        .iter()
        .map(|p| PairSet {
            a: p.a,
            b: p.b,
            set: {
                let mut s: Vec<usize> = p.path.vertices().iter().copied().filter(|&v| count[v] == 1).collect();
                s.sort_unstable();
                s
            },
        })
        .collect();

    let sections: Vec<BTreeSet<usize>> = all.iter().map(|p| p.free_section.iter().copied().collect()).collect();
    let h = ctx.restricted_graph();
    let mut free_section_edge = None;
    'edges: for &(x, y) in h.edges() {
        for (s1, fs1) in sections.iter().enumerate() {
            for (s2, fs2) in sections.iter().enumerate() {
                if s1 != s2 && fs1.contains(&x) && fs2.contains(&y) && !(fs1.contains(&y) || fs2.contains(&x)) {
                    free_section_edge = Some((x, y));
                    break 'edges;
                }
            }
        }
    }

    let jg = ctx.restricted_graph().restrict_edges(&jump_vertices);
    let members: BTreeSet<usize> = ctx.a_set().iter().chain(ctx.b_set()).copied().collect();
    let audit = audit_short_paths(ctx, &jg, &private_parts, &members, length_bound);
    let family = DisconnectingFamily {
        radius: length_bound,
        a: ctx.a_set().to_vec(),
        b: ctx.b_set().to_vec(),
        sets: private_parts
            .iter()
            .map(|s| PairSet {
                a: s.a,
                b: s.b,
                set: s.set.iter().copied().filter(|v| !members.contains(v)).collect(),
            })
            .collect(),
    };
    let disconnecting_violation = verify_disconnecting(&jg, &family)?;
    Ok(JumpSystem {
        per_b,
        length_bound,
        max_length,
        private_parts,
        free_section_edge,
        audit,
        disconnecting_violation,
    })
}

fn audit_short_paths(
    ctx: &PairContext,
    jg: &Graph,
    private_parts: &[PairSet],
    members: &BTreeSet<usize>,
    bound: usize,
) -> PathAudit {
    let mut checked = 0;
    let mut misses_critical = None;
    let mut misses_private_part = None;
    let mut skipped = false;
    'pairs: for (i, &a) in ctx.a_set().iter().enumerate() {
        for (j, &b) in ctx.b_set().iter().enumerate() {
            let c = ctx.pair(i, j).critical_ab;
            let jpp: BTreeSet<usize> = private_parts
                .iter()
                .find(|s| s.a == a && s.b == b)
                .map(|s| s.set.iter().copied().filter(|v| !members.contains(v)).collect())
                .unwrap_or_default();
            let to_b = jg.bfs_avoiding(b, None);
            let mut stack = vec![a];
            let mut on = vec![false; jg.vertex_count()];
            on[a] = true;
            let mut visit = |p: &[usize]| {
                if misses_critical.is_none() && !p.contains(&c) {
                    misses_critical = Some(p.to_vec());
                }
                if misses_private_part.is_none() && !p.iter().any(|v| jpp.contains(v)) {
                    misses_private_part = Some(p.to_vec());
                }
            };
            if !enumerate(jg, &to_b, b, bound, &mut stack, &mut on, &mut checked, &mut visit) {
                skipped = true;
                break 'pairs;
            }
        }
    }
    PathAudit {
        length_bound: bound,
        paths_checked: checked,
        skipped,
        misses_critical,
        misses_private_part,
    }
}

/// Depth-first enumeration of simple paths to `b` with at most `bound`
/// edges; returns `false` once the global cap is hit.
#[allow(clippy::too_many_arguments)]
fn enumerate(
    g: &Graph,
    to_b: &[Option<usize>],
    b: usize,
    bound: usize,
    stack: &mut Vec<usize>,
    on: &mut [bool],
    count: &mut usize,
    visit: &mut impl FnMut(&[usize]),
) -> bool {
    let u = *stack.last().expect("nonempty");
    if u == b {
        *count += 1;
        visit(stack);
        return *count < JUMP_PATH_ENUMERATION_CAP;
    }
    let used = stack.len() - 1;
    for &w in g.neighbors(u) {
        if on[w] || !to_b[w].is_some_and(|d| used + 1 + d <= bound) {
            continue;
        }
        on[w] = true;
        stack.push(w);
        let keep_going = enumerate(g, to_b, b, bound, stack, on, count, visit);
        stack.pop();
        on[w] = false;
        if !keep_going {
            return false;
        }
    }
    true
}
