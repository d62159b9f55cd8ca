//! Localized pairs, critical vertices, root sections and independence.

use serde::Serialize;

use super::interference::{proper_submatrix, InterferenceMatrix, SearchMode, SubmatrixSearch};
use super::sparse::{pair_localized_check, sparsity_check};
use crate::error::{Error, Result};
use crate::graph::{lex_min_path_tree, EdgeOrder, Graph, Path};
use crate::VertexSet;

/// The minimum `ab`-path with its marked vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairPath {
    pub a: usize,
    pub b: usize,
    pub path: Path,
    /// At distance `ell - 3` from `a`.
    pub critical_ab: usize,
    /// At distance `ell - 4` from `a`.
    pub pre_critical_ab: usize,
    /// At distance `ell - 3` from `b`.
    pub critical_ba: usize,
}

/// Everything the escape and jump-path analyses need about a pair `(A, B)`.
/// Paths are lexicographically minimum in the original graph; the
/// restricted graph keeps the original vertex ids and only the edges inside
/// the union of the paths.
#[derive(Debug, Clone)]
pub struct PairContext {
    ell: usize,
    d: u32,
    a_set: Vec<usize>,
    b_set: Vec<usize>,
    paths: Vec<Vec<PairPath>>,
    restricted: VertexSet,
    restricted_graph: Graph,
    rs_a: Vec<VertexSet>,
    rs_b: Vec<VertexSet>,
}

fn check_pair_sets(g: &Graph, a_set: &[usize], b_set: &[usize]) -> Result<()> {
    if a_set.is_empty() || b_set.is_empty() {
        return Err(Error::precondition("both sides of the pair must be nonempty"));
    }
    let mut all: Vec<usize> = a_set.iter().chain(b_set).copied().collect();
    for &v in &all {
        g.check_vertex(v)?;
    }
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::precondition("pair sides must be disjoint sets of distinct vertices"));
    }
    Ok(())
}

/// Requires `ell >= 4` and `ell < d(a, b) <= 2 ell - 7` for every pair.
pub fn build_pair_context(g: &Graph, a_set: &[usize], b_set: &[usize], ell: usize, d: u32, ord: &EdgeOrder) -> Result<PairContext> {
    check_pair_sets(g, a_set, b_set)?;
    if ell < 4 {
        return Err(Error::precondition(format!("pair context needs ell >= 4, got {ell}")));
    }
    let n = g.vertex_count();
    let k = ell - 3;
    let mut paths = vec![Vec::with_capacity(b_set.len()); a_set.len()];
    let mut restricted = VertexSet::empty(n);
    let mut rs_a = vec![VertexSet::empty(n); a_set.len()];
    let mut rs_b = vec![VertexSet::empty(n); b_set.len()];
    for (j, &b) in b_set.iter().enumerate() {
        let tree = lex_min_path_tree(g, b, ord)?;
        for (i, &a) in a_set.iter().enumerate() {
            let len = tree.distance(a);
            match len {
                Some(t) if t > ell && t + 7 <= 2 * ell => {}
                _ => {
                    return Err(Error::precondition(format!(
                        "pair ({a}, {b}) has distance {len:?}, outside ({ell}, {}]",
                        2 * ell - 7
                    )))
                }
            }
            let path = tree.path_from(a).expect("reachable");
            let vs = path.vertices();
            let len = path.len();
            for &v in vs {
                restricted.insert(v);
            }
            for &v in &vs[..=k] {
                rs_a[i].insert(v);
            }
            for &v in &vs[len - k..] {
                rs_b[j].insert(v);
            }
            paths[i].push(PairPath {
                a,
                b,
                critical_ab: vs[k],
                pre_critical_ab: vs[k - 1],
                critical_ba: vs[len - k],
                path,
            });
        }
    }
    let restricted_graph = g.restrict_edges(&restricted);
    Ok(PairContext {
        ell,
        d,
        a_set: a_set.to_vec(),
        b_set: b_set.to_vec(),
        paths,
        restricted,
        restricted_graph,
        rs_a,
        rs_b,
    })
}

impl PairContext {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    pub fn a_set(&self) -> &[usize] {
        &self.a_set
    }

    pub fn b_set(&self) -> &[usize] {
        &self.b_set
    }

    /// Path data for row index `i` and column index `j`.
    pub fn pair(&self, i: usize, j: usize) -> &PairPath {
        &self.paths[i][j]
    }

    pub fn pairs(&self) -> impl Iterator<Item = &PairPath> {
        self.paths.iter().flatten()
    }

    pub fn restricted_vertices(&self) -> &VertexSet {
        &self.restricted
    }

    pub fn restricted_graph(&self) -> &Graph {
        &self.restricted_graph
    }

    pub fn root_section_a(&self, i: usize) -> &VertexSet {
        &self.rs_a[i]
    }

    pub fn root_section_b(&self, j: usize) -> &VertexSet {
        &self.rs_b[j]
    }

    pub fn a_index(&self, a: usize) -> Option<usize> {
        self.a_set.iter().position(|&x| x == a)
    }

    pub fn b_index(&self, b: usize) -> Option<usize> {
        self.b_set.iter().position(|&x| x == b)
    }

    /// Every vertex that is a critical or pre-critical vertex `c_ab`, `c⁻_ab`.
    pub fn critical_vertices(&self) -> VertexSet {
        let mut s = VertexSet::empty(self.restricted.universe());
        for p in self.pairs() {
            s.insert(p.critical_ab);
            s.insert(p.pre_critical_ab);
        }
        s
    }

    fn members(&self) -> VertexSet {
        VertexSet::from_iter_in(self.restricted.universe(), self.a_set.iter().chain(&self.b_set).copied())
    }
}

/// A critical vertex whose radius-`ell` ball sees more of `A ∪ B` than its
/// own pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceViolation {
    pub a: usize,
    pub b: usize,
    pub center: usize,
    pub trace: Vec<usize>,
}

fn ball_trace(g: &Graph, u: usize, ell: usize, members: &VertexSet) -> Vec<usize> {
    let dist = g.bfs_avoiding(u, None);
    members.iter().filter(|&v| dist[v].is_some_and(|t| t <= ell)).collect()
}

/// First pair whose critical balls `B(c_ab, ell)` or `B(c_ba, ell)` meet
/// `A ∪ B` outside `{a, b}`, measured in `g`.
pub fn independence_violation(g: &Graph, ctx: &PairContext) -> Option<IndependenceViolation> {
    let members = ctx.members();
    for p in ctx.pairs() {
        for center in [p.critical_ab, p.critical_ba] {
            let trace = ball_trace(g, center, ctx.ell, &members);
            let mut own = vec![p.a, p.b];
            own.sort_unstable();
            if trace != own {
                return Some(IndependenceViolation {
                    a: p.a,
                    b: p.b,
                    center,
                    trace,
                });
            }
        }
    }
    None
}

pub fn is_independent(g: &Graph, ctx: &PairContext) -> bool {
    independence_violation(g, ctx).is_none()
}

/// `m(a, b) = (I(c_ab) ∪ I(c_ba)) ∖ {a, b}` with `I(u) = B(u, ell) ∩ (A ∪ B)`.
pub fn critical_interference_matrix(g: &Graph, ctx: &PairContext) -> Result<InterferenceMatrix> {
    let members = ctx.members();
    let entries = ctx
        .paths
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| {
                    let mut e = ball_trace(g, p.critical_ab, ctx.ell, &members);
                    e.extend(ball_trace(g, p.critical_ba, ctx.ell, &members));
                    e.retain(|&y| y != p.a && y != p.b);
                    e
                })
                .collect()
        })
        .collect();
    InterferenceMatrix::new(ctx.a_set.clone(), ctx.b_set.clone(), entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependentSubpair {
    pub a_set: Vec<usize>,
    pub b_set: Vec<usize>,
}

/// Independent subpair of size `p` of a `q`-sparse, `d`-localized pair, or
/// `None` when the exact proper-submatrix search proves there is none.
/// Sparsity `q` is kept separate from the localization parameter `d`.
#[allow(clippy::too_many_arguments)]
pub fn independent_subpair(
    g: &Graph,
    a_set: &[usize],
    b_set: &[usize],
    ell: usize,
    q: usize,
    d: u32,
    p: usize,
    ord: &EdgeOrder,
) -> Result<Option<IndependentSubpair>> {
    check_pair_sets(g, a_set, b_set)?;
    let loc = pair_localized_check(g, ell, d, a_set, b_set)?;
    if let Some((x, y, dist)) = loc.violation {
        return Err(Error::precondition(format!(
            "pair is not {d}-localized: d({x}, {y}) = {dist:?} outside [{}, {}]",
            loc.window.0, loc.window.1
        )));
    }
    let all: Vec<usize> = a_set.iter().chain(b_set).copied().collect();
    let sp = sparsity_check(g, ell, &all, q)?;
    if !sp.sparse {
        return Err(Error::precondition(format!(
            "pair is not {q}-sparse: vertex {:?} lies in {} balls",
            sp.heaviest, sp.max_load
        )));
    }
    let ctx = build_pair_context(g, a_set, b_set, ell, d, ord)?;
    let m = critical_interference_matrix(g, &ctx)?;
    match proper_submatrix(&m, p, SearchMode::Exact)? {
        SubmatrixSearch::Found { rows, cols } => {
            let sub = build_pair_context(g, &rows, &cols, ell, d, ord)?;
            if let Some(v) = independence_violation(g, &sub) {
                return Err(Error::verification(format!("extracted subpair is not independent: {v:?}")));
            }
            Ok(Some(IndependentSubpair { a_set: rows, b_set: cols }))
        }
        SubmatrixSearch::NotFound => Ok(None),
        SubmatrixSearch::Inconclusive { .. } => unreachable!("exact mode is conclusive"),
    }
}

/// Measured consequences of independence. Distances are taken in the
/// original graph, which only makes them smaller than in the restriction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairAudit {
    /// `min d(RS(a), RS(a'))` over `a ≠ a'`; `None` if fewer than two or
    /// never connected.
    pub rs_a_distance: Option<usize>,
    pub rs_b_distance: Option<usize>,
    /// `min d(P_ab, P_a'b')` over `a ≠ a'` and `b ≠ b'`.
    pub disjoint_paths_distance: Option<usize>,
    /// `c_ab` and `c⁻_ab` lie in `RS(b)` for every pair.
    pub critical_in_rs_b: bool,
    /// `c_ab ≠ c_ab'` and `c⁻_ab ≠ c⁻_ab'` whenever `b ≠ b'`.
    pub critical_distinct: bool,
    /// `c_ba` comes strictly before `c_ab` on every path.
    pub critical_order: bool,
    /// Every restricted vertex lies in some root section.
    pub covered: bool,
}

impl PairAudit {
    /// All the properties an independent pair is guaranteed to have.
    pub fn holds(&self) -> bool {
        let far = |d: Option<usize>| d.is_none_or(|d| d >= 4);
        far(self.rs_a_distance)
            && far(self.rs_b_distance)
            && far(self.disjoint_paths_distance)
            && self.critical_in_rs_b
            && self.critical_distinct
            && self.critical_order
            && self.covered
    }
}

fn set_distance(g: &Graph, from: &VertexSet, to: &VertexSet) -> Option<usize> {
    let n = g.vertex_count();
    let mut dist = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for v in from.iter() {
        dist[v] = Some(0);
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        let du: usize = dist[u].expect("queued");
        if to.contains(u) {
            return Some(du);
        }
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    None
}

fn min_pairwise(g: &Graph, sets: &[VertexSet]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if let Some(d) = set_distance(g, &sets[i], &sets[j]) {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
    }
    best
}

pub fn audit_pair_context(g: &Graph, ctx: &PairContext) -> PairAudit {
    let n = g.vertex_count();
    let path_sets: Vec<Vec<VertexSet>> = ctx
        .paths
        .iter()
        .map(|row| row.iter().map(|p| VertexSet::from_iter_in(n, p.path.vertices().iter().copied())).collect())
        .collect();
    let mut disjoint: Option<usize> = None;
    let (na, nb) = (ctx.a_set.len(), ctx.b_set.len());
    for i in 0..na {
        for j in 0..nb {
            for i2 in i + 1..na {
                for j2 in (0..nb).filter(|&j2| j2 != j) {
                    if let Some(d) = set_distance(g, &path_sets[i][j], &path_sets[i2][j2]) {
                        disjoint = Some(disjoint.map_or(d, |b| b.min(d)));
                    }
                }
            }
        }
    }

    let critical_in_rs_b = ctx
        .paths
        .iter()
        .all(|row| row.iter().enumerate().all(|(j, p)| ctx.rs_b[j].contains(p.critical_ab) && ctx.rs_b[j].contains(p.pre_critical_ab)));
    let critical_distinct = ctx.paths.iter().all(|row| {
        let mut c: Vec<usize> = row.iter().map(|p| p.critical_ab).collect();
        let mut pre: Vec<usize> = row.iter().map(|p| p.pre_critical_ab).collect();
        c.sort_unstable();
        pre.sort_unstable();
        c.windows(2).all(|w| w[0] != w[1]) && pre.windows(2).all(|w| w[0] != w[1])
    });
    let critical_order = ctx.pairs().all(|p| p.path.position(p.critical_ba) < p.path.position(p.critical_ab));
    let mut rs_all = VertexSet::empty(n);
    for s in ctx.rs_a.iter().chain(&ctx.rs_b) {
        rs_all.union_with(s);
    }
    PairAudit {
        rs_a_distance: min_pairwise(g, &ctx.rs_a),
        rs_b_distance: min_pairwise(g, &ctx.rs_b),
        disjoint_paths_distance: disjoint,
        critical_in_rs_b,
        critical_distinct,
        critical_order,
        covered: ctx.restricted.is_subset(&rs_all),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, GraphFamily};

    fn path_graph(n: usize) -> Graph {
        family(&GraphFamily::Path { n }, 0).unwrap()
    }

    #[test]
    fn single_path_root_sections_are_positional() {
        let g = path_graph(12);
        let ell = 9;
        let ctx = build_pair_context(&g, &[0], &[11], ell, 0, &EdgeOrder::canonical(&g)).unwrap();
        let p = ctx.pair(0, 0);
        assert_eq!(p.path.vertices(), (0..12).collect::<Vec<_>>().as_slice());
        assert_eq!((p.critical_ab, p.pre_critical_ab, p.critical_ba), (6, 5, 5));
        assert_eq!(ctx.root_section_a(0).to_vec(), (0..=6).collect::<Vec<_>>());
        assert_eq!(ctx.root_section_b(0).to_vec(), (5..=11).collect::<Vec<_>>());
        // d = 11 > 2 ell - 7 = 9 is rejected.
        assert!(build_pair_context(&g, &[0], &[11], 8, 0, &EdgeOrder::canonical(&g)).is_err());
    }

    #[test]
    fn preconditions_name_the_pair() {
        let g = path_graph(12);
        let err = build_pair_context(&g, &[0], &[3], 6, 0, &EdgeOrder::canonical(&g)).unwrap_err();
        assert!(err.to_string().contains("(0, 3)"));
        assert!(build_pair_context(&g, &[0], &[0], 6, 0, &EdgeOrder::canonical(&g)).is_err());
        assert!(build_pair_context(&g, &[0], &[2], 3, 0, &EdgeOrder::canonical(&g)).is_err());
    }

    /// Hub 0 with `legs` legs of length `len`; returns the leg ends.
    fn spider(legs: usize, len: usize) -> (Graph, Vec<usize>) {
        let mut edges = Vec::new();
        let mut ends = Vec::new();
        let mut next = 1;
        for _ in 0..legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            ends.push(prev);
        }
        (Graph::from_edges(next, edges).unwrap(), ends)
    }

    #[test]
    fn spider_pair_is_not_independent() {
        // Every path goes through the hub, so critical balls see everything.
        let (g, ends) = spider(4, 5);
        let ctx = build_pair_context(&g, &ends[..2], &ends[2..], 9, 0, &EdgeOrder::canonical(&g)).unwrap();
        assert!(!is_independent(&g, &ctx));
        let m = critical_interference_matrix(&g, &ctx).unwrap();
        assert!(!m.is_proper());
        assert_eq!(
            independent_subpair(&g, &ends[..2], &ends[2..], 9, 4, 0, 1, &EdgeOrder::canonical(&g)).unwrap(),
            Some(IndependentSubpair { a_set: vec![ends[0]], b_set: vec![ends[2]] })
        );
    }

    #[test]
    fn disjoint_paths_form_an_independent_pair() {
        let len = 9;
        let mut edges = Vec::new();
        let mut ends = Vec::new();
        for k in 0..2 {
            let base = k * (len + 1);
            for t in 0..len {
                edges.push((base + t, base + t + 1));
            }
            ends.push((base, base + len));
        }
        let g = Graph::from_edges(2 * (len + 1), edges).unwrap();
        // Only one pair per side: A = {a_0}, B = {b_0}.
        let ctx = build_pair_context(&g, &[ends[0].0], &[ends[0].1], 8, 0, &EdgeOrder::canonical(&g)).unwrap();
        assert!(is_independent(&g, &ctx));
        let audit = audit_pair_context(&g, &ctx);
        assert!(audit.holds(), "{audit:?}");
    }
}
