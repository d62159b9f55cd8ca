//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the output.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use distvc::ball::{b_all, b_ell};
use distvc::generators::{cograph_with_tree, family, gnl, pairs_hypergraph, random_cotree, GraphFamily};
use distvc::graph::{find_crosses, write_graph, CrossKind, EdgeOrder, Graph};
use distvc::harness::{check_instance, dsw_bound, CheckOptions, Status};
use distvc::hypergraph::{
    largest_shattered_set, packing_number, transversality, two_vc_dimension, vc_dimension, Hypergraph,
    ShatterMode, SolveMode,
};
use distvc::minor::{extract_clique_minor, find_pair_witnesses, verify_minor_model};
use distvc::rank::{balanced_edge, cutrank, neighborhood_partition, random_ternary_tree, width, Bipartition};
use distvc::structure::{
    audit_pair_context, build_pair_context, escape_analysis, independent_subpair, is_independent, localized_window,
    middle_vertex_gadget, pair_localized_check, proper_submatrix, random_interference_matrix, shatter_certificate,
    sparsity_check, verify_disconnecting, DisconnectingFamily, PairSet, SearchMode, SubmatrixSearch,
};
use distvc::VertexSet;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Criterion {
    id: u32,
    name: &'static str,
    /// Wall-clock budget, checked on top of the criterion itself.
    budget: Duration,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "closed-form bound at (4, 1)", budget: Duration::from_millis(50), run: bound_value },
    Criterion { id: 2, name: "pairs hypergraph dimensions", budget: Duration::from_secs(1), run: pairs_dimensions },
    Criterion { id: 3, name: "long-path clique construction", budget: Duration::from_secs(5), run: long_path_clique },
    Criterion { id: 4, name: "clique minor pipeline and grids", budget: Duration::from_secs(300), run: minor_pipeline },
    Criterion { id: 5, name: "packing/covering bound battery", budget: Duration::from_secs(600), run: packing_covering },
    Criterion { id: 6, name: "proper submatrices of interference matrices", budget: Duration::from_secs(30), run: proper_submatrices },
    Criterion { id: 7, name: "ball containment along geodesics", budget: Duration::from_secs(30), run: ball_containment },
    Criterion { id: 8, name: "crosses of minimum paths", budget: Duration::from_secs(60), run: crosses },
    Criterion { id: 9, name: "escape digraphs of independent pairs", budget: Duration::from_secs(300), run: escapes },
    Criterion { id: 10, name: "disconnecting families and certificates", budget: Duration::from_secs(120), run: disconnecting },
    Criterion { id: 11, name: "rank decompositions", budget: Duration::from_secs(120), run: rank_suite },
    Criterion { id: 12, name: "exact solvers against brute force", budget: Duration::from_secs(120), run: oracle_equivalence },
    Criterion { id: 13, name: "byte-identical CLI reruns", budget: Duration::from_secs(300), run: determinism },
];

fn main() {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.budget => Err(format!("took {elapsed:.2?}, budget {:?}", c.budget)),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("{tag} [{:>2}] {} ({elapsed:.2?}): {detail}", c.id, c.name);
        failed += usize::from(outcome.is_err());
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn bound_value() -> Outcome {
    let v = dsw_bound(4, 1).map_err(|e| e.to_string())?.to_string();
    ensure!(v == "35200", "got {v}");
    Ok("35200".into())
}

fn pairs_dimensions() -> Outcome {
    let h = pairs_hypergraph(5).map_err(|e| e.to_string())?;
    let (two, vc) = (two_vc_dimension(&h).unwrap(), vc_dimension(&h).unwrap());
    ensure!((two, vc) == (5, 2), "2VC = {two}, VC = {vc}");
    Ok("2VC = 5, VC = 2".into())
}

fn long_path_clique() -> Outcome {
    let built = gnl(4, 2).map_err(|e| e.to_string())?;
    let g = &built.graph;
    ensure!(g.vertex_count() == 22, "{} vertices", g.vertex_count());
    let x = &built.clique;
    for i in 0..4 {
        for j in i + 1..4 {
            let y2 = built.long_path(i, j).unwrap().internal[1];
            let ball = g.ball(y2, 2).unwrap();
            let hit: Vec<usize> = x.iter().copied().filter(|&v| ball.contains(v)).collect();
            ensure!(hit == [x[i], x[j]], "ball around the middle of ({i}, {j}) meets {hit:?}");
        }
    }
    let h = b_ell(g, 2);
    ensure!(h.hypergraph().is_shattered(x, ShatterMode::Pairs).unwrap(), "clique is not 2-shattered");
    let two = two_vc_dimension(h.hypergraph()).unwrap();
    ensure!(two >= 4, "exact 2VC = {two}");
    Ok(format!("22 vertices, exact 2VC of radius-2 balls = {two}"))
}

fn minor_pipeline() -> Outcome {
    let built = gnl(4, 2).unwrap();
    let g = &built.graph;
    let search = find_pair_witnesses(g, &built.clique, &EdgeOrder::canonical(g)).map_err(|e| e.to_string())?;
    ensure!(search.complete() && search.witnesses.len() == 6, "failures {:?}", search.failures);
    let model = extract_clique_minor(g, &search).map_err(|e| e.to_string())?;
    ensure!(model.pattern_size == 4, "pattern size {}", model.pattern_size);
    if let Some(v) = verify_minor_model(g, &model) {
        return Err(format!("model rejected: {v:?}"));
    }
    let mut grids = Vec::new();
    for rows in 2..=4 {
        for cols in rows..=4 {
            let grid = family(&GraphFamily::Grid { rows, cols }, 0).unwrap();
            let best = largest_shattered_set(b_all(&grid).hypergraph(), ShatterMode::Pairs)
                .unwrap()
                .unwrap_or_default();
            ensure!(best.len() < 5, "{rows}x{cols} grid has a 2-shattered set {best:?}");
            grids.push(format!("{rows}x{cols}:{}", best.len()));
        }
    }
    Ok(format!("K4 model verified; largest 2-shattered sets {}", grids.join(" ")))
}

fn packing_covering() -> Outcome {
    let mut cases: Vec<(GraphFamily, u64, Option<u64>)> = Vec::new();
    for rows in 1..=4 {
        for cols in rows..=4 {
            cases.push((GraphFamily::Grid { rows, cols }, 0, Some(4)));
        }
    }
    for n in 1..=20 {
        cases.push((GraphFamily::Path { n }, 0, Some(2)));
        if n >= 3 {
            cases.push((GraphFamily::Cycle { n }, 0, Some(2)));
        }
    }
    for n in (4..=18).step_by(2) {
        for p in [0.2, 0.4] {
            for seed in 0..4 {
                cases.push((GraphFamily::Gnp { n, p }, seed, None));
            }
        }
    }
    let mut checked = 0;
    for (kind, seed, dprime) in &cases {
        let g = family(kind, *seed).unwrap();
        for ell in 1..=3 {
            let opts = CheckOptions { dprime: *dprime, timings: false, seed: 0 };
            let r = check_instance(&g, ell, &opts).map_err(|e| format!("{kind} l={ell}: {e}"))?;
            ensure!(r.status == Status::Ok, "{kind} seed {seed} l={ell}: {:?} {:?}", r.status, r.message);
            let (nu, tau) = (r.nu.unwrap(), r.tau.unwrap());
            ensure!(tau >= nu, "{kind} l={ell}: tau {tau} < nu {nu}");
            ensure!(r.dprime_satisfied != Some(false), "{kind} l={ell}: tau {tau} above the bound");
            checked += 1;
        }
    }
    Ok(format!("{checked} instances, zero violations"))
}

fn proper_submatrices() -> Outcome {
    for (size, k) in [(9, 1), (17, 2)] {
        for seed in 0..50 {
            let m = random_interference_matrix(size, k, seed);
            match proper_submatrix(&m, 2, SearchMode::Exact).map_err(|e| e.to_string())? {
                SubmatrixSearch::Found { rows, cols } => {
                    // Labels, checked directly against the entries.
                    let kept: BTreeSet<usize> = rows.iter().chain(&cols).copied().collect();
                    let proper = rows.iter().all(|ra| {
                        let i = m.rows().iter().position(|x| x == ra).unwrap();
                        cols.iter().all(|cb| {
                            let j = m.cols().iter().position(|x| x == cb).unwrap();
                            m.entry(i, j).iter().all(|y| !kept.contains(y))
                        })
                    });
                    ensure!(proper && rows.len() == 2 && cols.len() == 2, "seed {seed}: bad submatrix");
                }
                other => return Err(format!("size {size} seed {seed}: {other:?}")),
            }
        }
    }
    Ok("100 matrices, all with a proper 2x2 submatrix".into())
}

fn ball_containment() -> Outcome {
    let mut r = rng(7);
    for t in 0..1000 {
        let n = r.gen_range(2..=20);
        let g = family(&GraphFamily::Gnp { n, p: r.gen_range(0.1..0.5) }, r.gen()).unwrap();
        let x = r.gen_range(0..n);
        let dx = g.bfs_distances(x).unwrap();
        let reach: Vec<usize> = (0..n).filter(|&v| dx[v].is_some()).collect();
        let y = *reach.choose(&mut r).unwrap();
        let dy = g.bfs_distances(y).unwrap();
        let dxy = dx[y].unwrap();
        let between: Vec<usize> =
            (0..n).filter(|&z| matches!((dx[z], dy[z]), (Some(a), Some(b)) if a + b == dxy)).collect();
        let z = *between.choose(&mut r).unwrap();
        let inner = g.ball(z, dx[z].unwrap()).unwrap();
        let outer = g.ball(y, dxy).unwrap();
        ensure!(inner.is_subset(&outer), "triple {t}: x={x} y={y} z={z}");
    }
    Ok("1000 triples".into())
}

fn crosses() -> Outcome {
    let mut r = rng(11);
    let (mut instances, mut found) = (0, 0);
    while instances < 500 {
        let n = r.gen_range(4..=16);
        let g = family(&GraphFamily::Gnp { n, p: r.gen_range(0.15..0.6) }, r.gen()).unwrap();
        let z = r.gen_range(0..n);
        let dz = g.bfs_distances(z).unwrap();
        let reach: Vec<usize> = (0..n).filter(|&v| v != z && dz[v].is_some()).collect();
        if reach.len() < 2 {
            continue;
        }
        let pick: Vec<usize> = reach.choose_multiple(&mut r, 2).copied().collect();
        let ord = EdgeOrder::random(&g, &mut r);
        let cs = find_crosses(&g, pick[0], pick[1], z, &ord).map_err(|e| e.to_string())?;
        if let Some(c) = cs.iter().find(|c| matches!(c.kind, CrossKind::A | CrossKind::B)) {
            return Err(format!("instance {instances}: {c:?}"));
        }
        found += cs.len();
        instances += 1;
    }
    Ok(format!("500 instances, {found} crosses, all of kind c or d"))
}

/// Small graphs with long geodesics: random trees and subdivided random
/// graphs.
fn long_graph(r: &mut ChaCha8Rng) -> Graph {
    if r.gen_bool(0.5) {
        let n = r.gen_range(25..=60);
        let edges: Vec<(usize, usize)> = (1..n).map(|v: usize| (r.gen_range(v.saturating_sub(6)..v), v)).collect();
        return Graph::from_edges(n, edges).unwrap();
    }
    let base_n = r.gen_range(4..=8);
    let base = family(&GraphFamily::Gnp { n: base_n, p: r.gen_range(0.3..0.6) }, r.gen()).unwrap();
    subdivide(base_n, base.edges(), |r| r.gen_range(2..=7), r)
}

/// Replaces each edge by a path of `len(r)` edges.
fn subdivide(n: usize, base: &[(usize, usize)], len: impl Fn(&mut ChaCha8Rng) -> usize, r: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    let mut next = n;
    for &(u, v) in base {
        let mut prev = u;
        for _ in 0..len(r) - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, v));
    }
    Graph::from_edges(next, edges).unwrap()
}

/// `K_{s,t}` with every edge subdivided to a length inside the window.
/// When the window is wide enough, one `b` gets two legs differing by at
/// least 3 and a chord from deep inside the shorter leg to the far part of
/// the longer one (the shape of an escape); sometimes a random chord is
/// added as well. `A` and `B` are the two sides.
fn bipartite_legs(ell: usize, d: u32, r: &mut ChaCha8Rng) -> (Graph, Vec<usize>, Vec<usize>) {
    let (lo, hi) = localized_window(ell, d).unwrap();
    let (s, t) = (r.gen_range(2..=3), r.gen_range(2..=3));
    let mut lens: Vec<Vec<usize>> = (0..s).map(|_| (0..t).map(|_| r.gen_range(lo..=hi)).collect()).collect();
    let escape = (hi - lo >= 3).then(|| {
        let j = r.gen_range(0..t);
        let a1 = r.gen_range(0..s);
        let a2 = (a1 + r.gen_range(1..s)) % s;
        lens[a1][j] = r.gen_range(lo..=hi - 3);
        lens[a2][j] = r.gen_range(lens[a1][j] + 3..=hi);
        (a1, a2, j)
    });
    let mut edges = Vec::new();
    let mut next = s + t;
    // legs[a][j][p]: vertex at distance p from a along the leg to s + j.
    let mut legs = vec![Vec::new(); s];
    for (a, row) in legs.iter_mut().enumerate() {
        for (j, &len) in lens[a].iter().enumerate() {
            let mut leg = vec![a];
            for _ in 0..len - 1 {
                edges.push((*leg.last().unwrap(), next));
                leg.push(next);
                next += 1;
            }
            edges.push((*leg.last().unwrap(), s + j));
            leg.push(s + j);
            row.push(leg);
        }
    }
    if let Some((a1, a2, j)) = escape {
        // The end sits one past the mirror of the start, so the detour never
        // beats the leg from a2 and at best ties the leg from a1.
        let (l1, l2) = (lens[a1][j], lens[a2][j]);
        let u = ell - r.gen_range(3..=4);
        edges.push((legs[a1][j][u], legs[a2][j][u + l2 - l1 + 1]));
    }
    if r.gen_bool(0.2) {
        let (u, v) = (r.gen_range(s + t..next), r.gen_range(s + t..next));
        if u != v && !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
            edges.push((u, v));
        }
    }
    (Graph::from_edges(next, edges).unwrap(), (0..s).collect(), (s..s + t).collect())
}

/// Greedy `(A, B)` inside the localization window, up to three per side.
fn localized_sets(g: &Graph, ell: usize, d: u32, r: &mut ChaCha8Rng) -> Option<(Vec<usize>, Vec<usize>)> {
    let (lo, hi) = localized_window(ell, d).ok()?;
    let dist = g.all_pairs_distances();
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(r);
    let far = |s: &[usize], v: usize| s.iter().all(|&u| dist[u][v].is_none_or(|t| t > ell));
    let cross = |s: &[usize], v: usize| s.iter().all(|&u| dist[u][v].is_some_and(|t| (lo..=hi).contains(&t)));
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for v in order {
        let to_a = a.len() < 3 && far(&a, v) && cross(&b, v);
        let to_b = b.len() < 3 && far(&b, v) && cross(&a, v);
        // Grow the smaller side first so one side does not fill up unchecked.
        match (to_a, to_b) {
            (true, true) if a.len() <= b.len() => a.push(v),
            (_, true) => b.push(v),
            (true, false) => a.push(v),
            (false, false) => {}
        }
    }
    (!a.is_empty() && !b.is_empty()).then_some((a, b))
}

fn escapes() -> Outcome {
    let mut r = rng(23);
    let (mut pairs, mut multi, mut arcs, mut deep, mut localized) = (0, 0, 0, 0, 0);
    for inst in 0..400 {
        let d = r.gen_range(0..=1u32);
        let ell = if d == 0 { r.gen_range(9..=20) } else { r.gen_range(13..=20) };
        let (g, a, b) = if inst % 2 == 0 {
            let (g, a, b) = bipartite_legs(ell, d, &mut r);
            if !pair_localized_check(&g, ell, d, &a, &b).unwrap().localized {
                continue;
            }
            (g, a, b)
        } else {
            let g = long_graph(&mut r);
            let Some((a, b)) = localized_sets(&g, ell, d, &mut r) else { continue };
            (g, a, b)
        };
        localized += 1;
        let all: Vec<usize> = a.iter().chain(&b).copied().collect();
        let q = sparsity_check(&g, ell, &all, usize::MAX).unwrap().max_load;
        let ord = EdgeOrder::canonical(&g);
        // The whole pair when it is already independent, else the largest
        // square independent subpair.
        let whole = build_pair_context(&g, &a, &b, ell, d, &ord).map_err(|e| e.to_string())?;
        let ctx = if is_independent(&g, &whole) {
            whole
        } else {
            let found = (1..=a.len().min(b.len())).rev().find_map(|p| {
                independent_subpair(&g, &a, &b, ell, q, d, p, &ord).map_err(|e| e.to_string()).transpose()
            });
            let Some(sub) = found.transpose()? else { continue };
            build_pair_context(&g, &sub.a_set, &sub.b_set, ell, d, &ord).map_err(|e| e.to_string())?
        };
        let esc = escape_analysis(&g, &ctx).map_err(|e| format!("instance {inst}: {e}"))?;
        ensure!(esc.acyclic, "instance {inst}: escape digraph has a cycle");
        let audit = audit_pair_context(&g, &ctx);
        ensure!(
            audit.rs_a_distance.is_none_or(|t| t >= 4),
            "instance {inst}: root sections at distance {:?}",
            audit.rs_a_distance
        );
        ensure!(audit.holds(), "instance {inst}: {audit:?}");
        pairs += 1;
        multi += usize::from(ctx.a_set().len() > 1);
        for arc in esc.per_b.iter().flat_map(|e| &e.arcs) {
            arcs += 1;
            deep += usize::from(arc.deep);
        }
    }
    ensure!(
        pairs >= 50 && multi >= 5 && arcs >= 20,
        "battery too thin: {localized} localized, {pairs} pairs, {multi} with |A| > 1, {arcs} arcs"
    );
    Ok(format!("{pairs} independent pairs ({multi} with |A| > 1), {arcs} escape arcs ({deep} deep)"))
}

/// `d(a, b) > radius` after deleting each union of family members exactly
/// when the pair's own set is among them.
fn disconnecting_oracle(g: &Graph, fam: &DisconnectingFamily) -> bool {
    let k = fam.sets.len();
    (0u32..1 << k).all(|mask| {
        let mut deleted = VertexSet::empty(g.vertex_count());
        for (i, s) in fam.sets.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.set.iter().for_each(|&v| deleted.insert(v));
            }
        }
        fam.sets.iter().enumerate().all(|(i, s)| {
            let dist = g.distances_avoiding(s.a, &deleted).unwrap()[s.b];
            dist.is_none_or(|t| t > fam.radius) == (mask >> i & 1 == 1)
        })
    })
}

fn random_family(r: &mut ChaCha8Rng) -> (Graph, DisconnectingFamily) {
    let na = r.gen_range(1..=2);
    let nb = r.gen_range(1..=10 / na);
    let a: Vec<usize> = (0..na).collect();
    let b: Vec<usize> = (na..na + nb).collect();
    let mut edges = Vec::new();
    let mut next = na + nb;
    let mut legs = Vec::new();
    for &x in &a {
        for &y in &b {
            let len = r.gen_range(2..=5);
            let mut leg = Vec::new();
            let mut prev = x;
            for _ in 0..len - 1 {
                edges.push((prev, next));
                leg.push(next);
                prev = next;
                next += 1;
            }
            edges.push((prev, y));
            legs.push((x, y, leg));
        }
    }
    let inner: Vec<usize> = (na + nb..next).collect();
    for _ in 0..r.gen_range(0..=3) {
        let (u, v) = (*inner.choose(r).unwrap(), *inner.choose(r).unwrap());
        if u != v && !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
            edges.push((u, v));
        }
    }
    let g = Graph::from_edges(next, edges).unwrap();
    let sets = legs
        .into_iter()
        .map(|(x, y, leg)| {
            let mut set = if r.gen_bool(0.7) {
                vec![leg[leg.len() / 2]]
            } else {
                let k = r.gen_range(1..=2);
                inner.choose_multiple(r, k).copied().collect()
            };
            set.sort_unstable();
            PairSet { a: x, b: y, set }
        })
        .collect();
    let fam = DisconnectingFamily { radius: r.gen_range(2..=5), a, b, sets };
    (g, fam)
}

fn disconnecting() -> Outcome {
    let mut r = rng(31);
    let mut positive = 0;
    for t in 0..100 {
        let (g, fam) = random_family(&mut r);
        let verdict = verify_disconnecting(&g, &fam).map_err(|e| e.to_string())?.is_none();
        ensure!(verdict == disconnecting_oracle(&g, &fam), "family {t}: verifier says {verdict}");
        positive += usize::from(verdict);
    }
    ensure!((5..=95).contains(&positive), "only {positive} of 100 families disconnecting");
    let mut equations = 0;
    for k in 1..=3 {
        let (g, fam) = middle_vertex_gadget(k).unwrap();
        let cert = shatter_certificate(&g, &fam).map_err(|e| e.to_string())?;
        let deleted = VertexSet::from_iter_in(g.vertex_count(), cert.deleted.iter().copied());
        let mut traces = BTreeSet::new();
        for eq in &cert.equations {
            let dist = g.distances_avoiding(eq.b, &deleted).unwrap();
            let seen: Vec<usize> = cert.a.iter().copied().filter(|&v| dist[v].is_some_and(|t| t <= cert.radius)).collect();
            let expected: Vec<usize> = cert.a.iter().copied().filter(|v| !eq.assigned.contains(v)).collect();
            ensure!(seen == eq.trace && seen == expected, "k = {k}, b = {}: trace {seen:?}", eq.b);
            traces.insert(seen);
            equations += 1;
        }
        ensure!(traces.len() == 1 << k, "k = {k}: {} distinct traces", traces.len());
    }
    Ok(format!("100 families ({positive} disconnecting) agree with the oracle; {equations} trace equations re-verified"))
}

fn rank_suite() -> Outcome {
    let mut r = rng(41);
    for t in 0..100 {
        let n = r.gen_range(2..=16);
        let g = family(&GraphFamily::Gnp { n, p: r.gen_range(0.1..0.7) }, r.gen()).unwrap();
        let left: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
        let right: Vec<usize> = (0..n).filter(|v| !left.contains(v)).collect();
        let np = neighborhood_partition(&g, &left, &right).map_err(|e| e.to_string())?;
        ensure!(np.blocks_homogeneous(&g), "cut {t}: mixed block");
        let cr = cutrank(&g, &Bipartition::new(n, &left).unwrap()).unwrap();
        ensure!(np.rank() == cr, "cut {t}: rank {} vs cutrank {cr}", np.rank());
    }
    for t in 0..100 {
        let n = r.gen_range(3..=30);
        let tree = random_ternary_tree(n, &mut r).unwrap();
        let leaves: Vec<usize> = (0..tree.node_count()).filter(|&x| tree.is_leaf(x)).collect();
        let alpha = r.gen_range(3..=leaves.len());
        let labeled: Vec<usize> = leaves.choose_multiple(&mut r, alpha).copied().collect();
        let be = balanced_edge(&tree, &labeled).map_err(|e| format!("tree {t}: {e}"))?;
        let side: BTreeSet<usize> = tree.side_nodes(be.edge.1, be.edge.0).into_iter().collect();
        let here = labeled.iter().filter(|x| side.contains(x)).count();
        let there = alpha - here;
        ensure!(3 * here >= alpha && 3 * there >= alpha, "tree {t}: split {here}/{there} of {alpha}");
    }
    let mut max_two_vc = 0;
    for seed in 0..60 {
        let n = 1 + (seed as usize % 20);
        let (g, tree) = cograph_with_tree(&random_cotree(n, seed).unwrap()).unwrap();
        let w = width(&g, &tree).unwrap();
        ensure!(w <= 1, "cograph {seed}: width {w}");
        for ell in 0..=3 {
            let two = two_vc_dimension(b_ell(&g, ell).hypergraph()).unwrap();
            ensure!(two <= 14, "cograph {seed}, l = {ell}: 2VC {two}");
            max_two_vc = max_two_vc.max(two);
        }
    }
    Ok(format!("100 cuts, 100 trees, 60 cographs (largest per-radius 2VC {max_two_vc})"))
}

fn brute_vc(h: &Hypergraph, pairs_only: bool) -> i64 {
    let n = h.vertex_count();
    let edges: Vec<u32> = h.edges().iter().map(|e| e.iter().fold(0, |m, v| m | 1 << v)).collect();
    if !pairs_only && edges.is_empty() {
        return -1;
    }
    let traces = |x: u32| -> BTreeSet<u32> { edges.iter().map(|e| e & x).collect() };
    (0u32..1 << n)
        .filter(|&x| {
            let tr = traces(x);
            if pairs_only {
                (0..n).all(|i| (i + 1..n).all(|j| x >> i & x >> j & 1 == 0 || tr.contains(&(1 << i | 1 << j))))
            } else {
                tr.len() == 1 << x.count_ones()
            }
        })
        .map(|x| x.count_ones() as i64)
        .max()
        .unwrap_or(0)
}

fn brute_tau(h: &Hypergraph) -> usize {
    let edges: Vec<u32> = h.edges().iter().map(|e| e.iter().fold(0, |m, v| m | 1 << v)).collect();
    (0u32..1 << h.vertex_count())
        .filter(|s| edges.iter().all(|e| e & s != 0))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap()
}

fn brute_nu(h: &Hypergraph) -> usize {
    let edges: Vec<u32> = h.edges().iter().map(|e| e.iter().fold(0, |m, v| m | 1 << v)).collect();
    (0u32..1 << edges.len())
        .filter(|&pick| {
            let mut used = 0;
            (0..edges.len()).filter(|i| pick >> i & 1 == 1).all(|i| {
                let ok = edges[i] & used == 0;
                used |= edges[i];
                ok
            })
        })
        .map(|p| p.count_ones() as usize)
        .max()
        .unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(53);
    for t in 0..200 {
        let n = r.gen_range(1..=8);
        let k = r.gen_range(0..=12);
        let edges: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut e: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.4)).collect();
                if e.is_empty() {
                    e.push(r.gen_range(0..n));
                }
                e
            })
            .collect();
        let h = Hypergraph::new(n, edges).unwrap();
        let got = (
            vc_dimension(&h).unwrap(),
            two_vc_dimension(&h).unwrap(),
            transversality(&h, SolveMode::Exact).unwrap().len(),
            packing_number(&h, SolveMode::Exact).unwrap().len(),
        );
        let want = (brute_vc(&h, false), brute_vc(&h, true), brute_tau(&h), brute_nu(&h));
        ensure!(got == want, "case {t}: solvers {got:?}, oracle {want:?}");
    }
    Ok("200 hypergraphs, vc/2vc/tau/nu all equal".into())
}

struct Cli {
    bin: PathBuf,
    dir: PathBuf,
}

impl Cli {
    /// Exit status and stdout.
    fn run(&self, args: &[&str]) -> (Option<i32>, Vec<u8>) {
        let out = Command::new(&self.bin).args(args).current_dir(&self.dir).output().expect("spawn distvc");
        (out.status.code(), out.stdout)
    }

    fn write(&self, name: &str, text: &str) -> String {
        std::fs::write(self.dir.join(name), text).unwrap();
        name.to_string()
    }

    fn read(&self, name: &str) -> Vec<u8> {
        std::fs::read(self.dir.join(name)).unwrap_or_default()
    }
}

fn determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-cli");
    std::fs::create_dir_all(&dir).unwrap();
    let cli = Cli { bin: PathBuf::from(env!("CARGO_BIN_EXE_distvc")), dir };

    let grid = cli.write("grid.txt", &write_graph(&family(&GraphFamily::Grid { rows: 3, cols: 3 }, 0).unwrap()));
    let gnl_graph = cli.write("gnl.txt", &write_graph(&gnl(4, 2).unwrap().graph));
    let gnp = cli.write("gnp.txt", &write_graph(&family(&GraphFamily::Gnp { n: 14, p: 0.3 }, 5).unwrap()));
    let pairs = cli.write("pairs.txt", &distvc::hypergraph::write_hypergraph(&pairs_hypergraph(5).unwrap()));
    let (gadget, fam) = middle_vertex_gadget(2).unwrap();
    let gadget_graph = cli.write("gadget.txt", &write_graph(&gadget));
    let fam_file = cli.write("family.json", &fam.to_json());
    let mut legs: Vec<(usize, usize)> = (0..15).map(|t| (t, t + 1)).collect();
    legs.push((0, 16));
    legs.extend((16..36).map(|t| (t, t + 1)));
    legs.push((6, 20));
    let esc = cli.write("escape.txt", &write_graph(&Graph::from_edges(37, legs).unwrap()));
    let config = cli.write(
        "config.json",
        r#"{"entries":[
            {"family":{"kind":"grid","rows":3,"cols":3},"radii":[1,2],"dprime":4},
            {"family":{"kind":"gnp","n":12,"p":0.3},"radii":[1],"seeds":[1,2,3]},
            {"family":{"kind":"path","n":80},"radii":[1]}
        ]}"#,
    );
    // The cograph's tree is produced by `gen` itself on the first run.
    cli.run(&["gen", "cograph", "--n", "10", "--seed", "4", "--out", "cograph.txt", "--tree", "cotree.txt"]);

    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "gnp", "--n", "20", "--p", "0.2", "--seed", "9"],
        vec!["gen", "grid", "--rows", "4", "--cols", "5"],
        vec!["gen", "gnl", "--n", "4", "--ell", "2", "--labels", "labels.json"],
        vec!["gen", "cograph", "--n", "10", "--seed", "4", "--tree", "cotree2.txt"],
        vec!["gen", "ball", "--graph", &grid, "--radius", "1"],
        vec!["gen", "pairs", "--n", "5"],
        vec!["vc", &pairs, "--mode", "vc"],
        vec!["vc", &pairs, "--mode", "2vc"],
        vec!["vc", &grid, "--mode", "distance"],
        vec!["vc", &gnp, "--mode", "distance", "--pairs", "--budgeted", "--budget", "30", "--seed", "3"],
        vec!["domset", &gnp, "--radius", "1", "--exact"],
        vec!["domset", &gnp, "--radius", "2", "--greedy"],
        vec!["pack", &gnp, "--radius", "1"],
        vec!["bound-check", &grid, "--radius", "1", "--dprime", "4"],
        vec!["extract-minor", &gnl_graph, "--set", "0,1,2,3"],
        vec!["rank-verify", "cograph.txt", "--tree", "cotree.txt"],
        vec!["disconnect-verify", &gadget_graph, "--family", &fam_file],
        vec!["escape-audit", &esc, "--a", "15,36", "--b", "0", "--radius", "14", "--d", "0"],
        vec!["experiment", "--config", &config],
    ];
    let side_files = ["labels.json", "cotree2.txt"];
    for args in &commands {
        let first = cli.run(args);
        let first_side: Vec<Vec<u8>> = side_files.iter().map(|f| cli.read(f)).collect();
        let second = cli.run(args);
        let second_side: Vec<Vec<u8>> = side_files.iter().map(|f| cli.read(f)).collect();
        ensure!(first.0 == Some(0), "`{}` exited with {:?}", args.join(" "), first.0);
        ensure!(!first.1.is_empty(), "`{}` printed nothing", args.join(" "));
        ensure!(first == second && first_side == second_side, "`{}` differs between runs", args.join(" "));
    }
    Ok(format!("{} commands, two runs each", commands.len()))
}

