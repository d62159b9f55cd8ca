//! Clique minors from 2-shattered sets, and minor-model verification.
//!
//! For every pair `x_i, x_j` of a set 2-shattered by balls there is a ball
//! `B(c, r)` meeting the set in exactly `{x_i, x_j}`. With `r` minimal, the
//! concatenation of shortest paths `x_i -> c -> x_j` is a simple path, and
//! splitting each such path by which end is closer yields disjoint
//! connected branch sets.
//!
//! Along a central path `d(v, x_i) - d(v, x_j)` never decreases (it grows by
//! 0, 1 or 2 per step), so each side is a prefix or a suffix; the vertices
//! where it is zero go to the lower index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{lex_min_path_tree, Distance, EdgeOrder, Graph, Path};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    /// Indices into the input set.
    pub i: usize,
    pub j: usize,
    pub center: usize,
    pub radius: usize,
    pub path: Path,
    /// True when the canonical concatenation repeated a vertex and a loop
    /// had to be cut out.
    pub rerouted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSearch {
    pub set: Vec<usize>,
    pub witnesses: Vec<PairWitness>,
    /// Index pairs with no ball meeting the set in exactly that pair.
    pub failures: Vec<(usize, usize)>,
}

impl WitnessSearch {
    pub fn complete(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_set(g: &Graph, x: &[usize]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::precondition("need at least two vertices"));
    }
    for (k, &v) in x.iter().enumerate() {
        g.check_vertex(v)?;
        if x[..k].contains(&v) {
            return Err(Error::precondition(format!("vertex {v} repeated")));
        }
    }
    Ok(())
}

/// Removes closed loops so that no vertex repeats.
fn excise_loops(walk: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(walk.len());
    for &v in walk {
        if let Some(p) = out.iter().position(|&u| u == v) {
            out.truncate(p);
        }
        out.push(v);
    }
    out
}

/// For each pair, the minimal-radius ball (smallest center on ties) whose
/// trace on `x` is that pair, with its central path built from canonical
/// lex-min paths.
pub fn find_pair_witnesses(g: &Graph, x: &[usize], ord: &EdgeOrder) -> Result<WitnessSearch> {
    check_set(g, x)?;
    let dist: Vec<Vec<Distance>> = x.iter().map(|&v| g.bfs_distances(v)).collect::<Result<_>>()?;
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let mut best: Option<(usize, usize)> = None;
            for c in 0..g.vertex_count() {
                let (Some(di), Some(dj)) = (dist[i][c], dist[j][c]) else { continue };
                let r = di.max(dj);
                let clean = (0..x.len())
                    .filter(|&k| k != i && k != j)
                    .all(|k| dist[k][c].is_none_or(|dk| dk > r));
                if clean && best.is_none_or(|(br, _)| r < br) {
                    best = Some((r, c));
                }
            }
            let Some((radius, center)) = best else {
                failures.push((i, j));
                continue;
            };
            let tree = lex_min_path_tree(g, center, ord)?;
            let first = tree.path_from(x[i]).expect("reachable from the center");
            let second = tree.path_from(x[j]).expect("reachable from the center").reversed();
            let mut walk = first.vertices().to_vec();
            walk.extend_from_slice(&second.vertices()[1..]);
            let simple = excise_loops(&walk);
            let rerouted = simple.len() != walk.len();
            witnesses.push(PairWitness { i, j, center, radius, path: Path::new(g, simple)?, rerouted });
        }
    }
    Ok(WitnessSearch { set: x.to_vec(), witnesses, failures })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub pattern_size: usize,
    /// Pattern edges; `None` means the complete graph on `pattern_size`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_edges: Option<Vec<(usize, usize)>>,
    pub branch_sets: Vec<Vec<usize>>,
}

impl MinorModel {
    pub fn pattern(&self) -> Vec<(usize, usize)> {
        match &self.pattern_edges {
            Some(e) => e.clone(),
            None => (0..self.pattern_size)
                .flat_map(|i| (i + 1..self.pattern_size).map(move |j| (i, j)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum MinorViolation {
    BranchCount { expected: usize, found: usize },
    InvalidVertex { vertex: usize },
    PatternEdge { edge: (usize, usize) },
    EmptyBranch { branch: usize },
    Disjointness { vertex: usize, first: usize, second: usize },
    Connectivity { branch: usize },
    MissingEdge { edge: (usize, usize) },
}

/// Checks, in order: shape, disjointness, connectivity of each branch set,
/// and one graph edge per pattern edge. Returns the first failure.
pub fn verify_minor_model(g: &Graph, m: &MinorModel) -> Option<MinorViolation> {
    let k = m.branch_sets.len();
    if k != m.pattern_size {
        return Some(MinorViolation::BranchCount { expected: m.pattern_size, found: k });
    }
    let pattern = m.pattern();
    if let Some(&edge) = pattern.iter().find(|&&(a, b)| a >= k || b >= k || a == b) {
        return Some(MinorViolation::PatternEdge { edge });
    }
    let mut owner: Vec<Option<usize>> = vec![None; g.vertex_count()];
    for (b, set) in m.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return Some(MinorViolation::EmptyBranch { branch: b });
        }
        for &v in set {
            if v >= g.vertex_count() {
                return Some(MinorViolation::InvalidVertex { vertex: v });
            }
            match owner[v] {
                Some(first) => return Some(MinorViolation::Disjointness { vertex: v, first, second: b }),
                None => owner[v] = Some(b),
            }
        }
    }
    for (b, set) in m.branch_sets.iter().enumerate() {
        let mut seen = vec![set[0]];
        let mut stack = vec![set[0]];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if owner[w] == Some(b) && !seen.contains(&w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        if seen.len() != set.len() {
            return Some(MinorViolation::Connectivity { branch: b });
        }
    }
    for &(a, b) in &pattern {
        let joined = m.branch_sets[a]
            .iter()
            .any(|&u| g.neighbors(u).iter().any(|&w| owner[w] == Some(b)));
        if !joined {
            return Some(MinorViolation::MissingEdge { edge: (a, b) });
        }
    }
    None
}

/// Builds the `K_|x|` model from a complete witness search and verifies it.
pub fn extract_clique_minor(g: &Graph, search: &WitnessSearch) -> Result<MinorModel> {
    let x = &search.set;
    check_set(g, x)?;
    if !search.complete() || search.witnesses.len() != x.len() * (x.len() - 1) / 2 {
        return Err(Error::precondition("witnesses missing for some pairs"));
    }
    let dist: Vec<Vec<Distance>> = x.iter().map(|&v| g.bfs_distances(v)).collect::<Result<_>>()?;
    let mut owner: Vec<Option<usize>> = vec![None; g.vertex_count()];
    for w in &search.witnesses {
        for &v in w.path.vertices() {
            let (di, dj) = (dist[w.i][v], dist[w.j][v]);
            let side = if dj < di { w.j } else { w.i };
            match owner[v] {
                Some(o) if o != side => {
                    return Err(Error::verification(format!(
                        "vertex {v} claimed by branch sets {o} and {side}"
                    )))
                }
                _ => owner[v] = Some(side),
            }
        }
    }
    let mut branch_sets = vec![Vec::new(); x.len()];
    for (v, o) in owner.iter().enumerate() {
        if let Some(b) = o {
            branch_sets[*b].push(v);
        }
    }
    let model = MinorModel { pattern_size: x.len(), pattern_edges: None, branch_sets };
    if let Some(violation) = verify_minor_model(g, &model) {
        return Err(Error::verification(format!("extracted model is invalid: {violation:?}")));
    }
    Ok(model)
}

/// Vertices lying on two central paths must lie on paths `P_ij`, `P_il`
/// sharing an end `x_i`, strictly closer to `x_i` than to the other ends.
/// Returns the offending vertices.
pub fn shared_vertex_violations(g: &Graph, search: &WitnessSearch) -> Result<Vec<usize>> {
    let dist: Vec<Vec<Distance>> = search.set.iter().map(|&v| g.bfs_distances(v)).collect::<Result<_>>()?;
    let mut bad = Vec::new();
    for v in 0..g.vertex_count() {
        let on: Vec<&PairWitness> = search.witnesses.iter().filter(|w| w.path.contains(v)).collect();
        if on.len() < 2 {
            continue;
        }
        let common = [on[0].i, on[0].j].into_iter().find(|&e| on.iter().all(|w| w.i == e || w.j == e));
        let ok = common.is_some_and(|e| {
            on.iter().all(|w| {
                let other = if w.i == e { w.j } else { w.i };
                dist[e][v] < dist[other][v]
            })
        });
        if !ok {
            bad.push(v);
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::b_all;
    use crate::generators::{family, gnl, GraphFamily};
    use crate::hypergraph::ShatterMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn adjacent_pair_in_a_path() {
        let g = family(&GraphFamily::Path { n: 3 }, 0).unwrap();
        let s = find_pair_witnesses(&g, &[0, 1], &EdgeOrder::canonical(&g)).unwrap();
        assert!(s.complete());
        assert!(s.witnesses[0].radius <= 1);
        let m = extract_clique_minor(&g, &s).unwrap();
        assert_eq!(m.branch_sets.len(), 2);
        assert!(s.witnesses[0].path.vertices().iter().all(|v| m.branch_sets.iter().any(|b| b.contains(v))));
    }

    #[test]
    fn gnl_gives_k4() {
        let gg = gnl(4, 2).unwrap();
        let s = find_pair_witnesses(&gg.graph, &gg.clique, &EdgeOrder::canonical(&gg.graph)).unwrap();
        assert!(s.complete());
        assert_eq!(s.witnesses.len(), 6);
        for w in &s.witnesses {
            let p = gg.long_path(w.i, w.j).unwrap();
            assert_eq!((w.center, w.radius), (p.midpoint(), 2));
            assert!(!w.rerouted);
        }
        assert!(shared_vertex_violations(&gg.graph, &s).unwrap().is_empty());
        let m = extract_clique_minor(&gg.graph, &s).unwrap();
        assert_eq!(verify_minor_model(&gg.graph, &m), None);
    }

    #[test]
    fn clique_triple_is_not_pair_shattered() {
        let g = family(&GraphFamily::Clique { n: 3 }, 0).unwrap();
        let s = find_pair_witnesses(&g, &[0, 1, 2], &EdgeOrder::canonical(&g)).unwrap();
        assert_eq!(s.failures.len(), 3);
        assert!(extract_clique_minor(&g, &s).is_err());
    }

    #[test]
    fn grid_triples_give_k3() {
        let g = family(&GraphFamily::Grid { rows: 3, cols: 3 }, 0).unwrap();
        let h = b_all(&g);
        let mut found = 0;
        for a in 0..9 {
            for b in a + 1..9 {
                for c in b + 1..9 {
                    if !h.hypergraph().is_shattered(&[a, b, c], ShatterMode::Pairs).unwrap() {
                        continue;
                    }
                    let s = find_pair_witnesses(&g, &[a, b, c], &EdgeOrder::canonical(&g)).unwrap();
                    assert!(s.complete());
                    let m = extract_clique_minor(&g, &s).unwrap();
                    assert_eq!(verify_minor_model(&g, &m), None);
                    found += 1;
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn verifier_reports_each_condition() {
        let k3 = family(&GraphFamily::Clique { n: 3 }, 0).unwrap();
        let ok = MinorModel { pattern_size: 3, pattern_edges: None, branch_sets: vec![vec![0], vec![1], vec![2]] };
        assert_eq!(verify_minor_model(&k3, &ok), None);
        let overlap = MinorModel { branch_sets: vec![vec![0, 1], vec![1], vec![2]], ..ok.clone() };
        assert!(matches!(verify_minor_model(&k3, &overlap), Some(MinorViolation::Disjointness { vertex: 1, .. })));
        let p4 = family(&GraphFamily::Path { n: 4 }, 0).unwrap();
        let split = MinorModel { pattern_size: 2, pattern_edges: None, branch_sets: vec![vec![0, 2], vec![1]] };
        assert_eq!(verify_minor_model(&p4, &split), Some(MinorViolation::Connectivity { branch: 0 }));
        let far = MinorModel { pattern_size: 2, pattern_edges: None, branch_sets: vec![vec![0], vec![3]] };
        assert_eq!(verify_minor_model(&p4, &far), Some(MinorViolation::MissingEdge { edge: (0, 1) }));
        let short = MinorModel { pattern_size: 3, pattern_edges: None, branch_sets: vec![vec![0]] };
        assert!(matches!(verify_minor_model(&p4, &short), Some(MinorViolation::BranchCount { .. })));
    }

    /// Condition-by-condition re-check, written independently of the verifier.
    fn naive_valid(g: &Graph, sets: &[Vec<usize>], pattern: &[(usize, usize)]) -> bool {
        for a in 0..sets.len() {
            if sets[a].is_empty() {
                return false;
            }
            for b in a + 1..sets.len() {
                if sets[a].iter().any(|v| sets[b].contains(v)) {
                    return false;
                }
            }
            let (sub, _) = g.induced_subgraph(&sets[a]).unwrap();
            if !sub.is_connected() {
                return false;
            }
        }
        pattern.iter().all(|&(a, b)| {
            g.edges().iter().any(|&(u, v)| {
                (sets[a].contains(&u) && sets[b].contains(&v)) || (sets[a].contains(&v) && sets[b].contains(&u))
            })
        })
    }

    #[test]
    fn verifier_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..200 {
            let g = family(&GraphFamily::Gnp { n: 9, p: 0.35 }, seed).unwrap();
            let k = rng.gen_range(1..5);
            let mut sets = vec![Vec::new(); k];
            for v in 0..9 {
                let slot = rng.gen_range(0..k + 2);
                if slot < k {
                    sets[slot].push(v);
                }
            }
            if rng.gen_bool(0.2) {
                let v = rng.gen_range(0..9);
                sets[0].push(v);
                sets[0].sort_unstable();
                sets[0].dedup();
                if k > 1 && !sets[1].contains(&v) {
                    sets[1].push(v);
                }
            }
            let m = MinorModel { pattern_size: k, pattern_edges: None, branch_sets: sets.clone() };
            assert_eq!(verify_minor_model(&g, &m).is_none(), naive_valid(&g, &sets, &m.pattern()), "seed {seed}");
        }
    }

    #[test]
    fn loop_excision() {
        assert_eq!(excise_loops(&[0, 1, 2, 1, 3]), vec![0, 1, 3]);
        assert_eq!(excise_loops(&[0, 1, 2]), vec![0, 1, 2]);
    }

    #[test]
    fn model_json() {
        let m = MinorModel { pattern_size: 2, pattern_edges: None, branch_sets: vec![vec![0], vec![1, 2]] };
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"pattern_size":2,"branch_sets":[[0],[1,2]]}"#);
        assert_eq!(serde_json::from_str::<MinorModel>(&text).unwrap(), m);
    }
}
