//! Midvertex families for sets of pairwise equidistant vertices.

use serde::Serialize;

use super::disconnect::{verify_disconnecting, DisconnectingFamily, PairSet};
use super::interference::{proper_submatrix, InterferenceMatrix, SearchMode, SubmatrixSearch};
use super::sparse::ball_loads;
use crate::error::{Error, Result};
use crate::graph::{lex_min_path_tree, EdgeOrder, Graph, Path};
use crate::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquidistantFamily {
    /// Vertices of the restriction `⋃ P_ab` over the extracted pair; the
    /// family is disconnecting in the subgraph they induce.
    pub restriction: Vec<usize>,
    pub family: DisconnectingFamily,
}

/// `x` must be pairwise at distance exactly `r >= 2`, and no vertex may lie
/// in `q` of the radius-`⌈r/2⌉` balls around `x`. The first half of sorted
/// `x` (one vertex dropped if `|x|` is odd) becomes `A`, the rest `B`. The
/// largest proper submatrix found by exact search picks `(A', B')`.
pub fn equidistant_disconnecting(g: &Graph, x: &[usize], r: usize, q: usize, ord: &EdgeOrder) -> Result<EquidistantFamily> {
    if r < 2 {
        return Err(Error::precondition("midvertices avoid the endpoints only for r >= 2"));
    }
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs.len() != x.len() || xs.len() < 2 {
        return Err(Error::precondition("need at least two distinct vertices"));
    }
    for &v in &xs {
        g.check_vertex(v)?;
    }
    let dist: Vec<Vec<Option<usize>>> = xs.iter().map(|&v| g.bfs_avoiding(v, None)).collect();
    for (i, &u) in xs.iter().enumerate() {
        if let Some(&v) = xs[i + 1..].iter().find(|&&v| dist[i][v] != Some(r)) {
            return Err(Error::precondition(format!("d({u}, {v}) = {:?}, expected {r}", dist[i][v])));
        }
    }
    let half = r.div_ceil(2);
    let heaviest = ball_loads(g, half, &xs)?.into_iter().max().unwrap_or(0);
    if heaviest >= q {
        return Err(Error::precondition(format!(
            "a vertex lies in {heaviest} balls of radius {half}, need fewer than {q}"
        )));
    }

    let m = xs.len() / 2;
    let (a_set, b_set) = (xs[..m].to_vec(), xs[m..2 * m].to_vec());
    let paths = lex_paths(g, &a_set, &b_set, ord)?;
    let restricted = union_of(g.vertex_count(), paths.iter().flatten());
    let h = g.restrict_edges(&restricted);

    let entries = paths
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, p)| {
                    a_set
                        .iter()
                        .chain(&b_set)
                        .copied()
                        .filter(|&y| y != a_set[i] && y != b_set[j])
                        .filter(|&y| {
                            let dy = h.bfs_avoiding(y, None);
                            p.vertices().iter().any(|&v| dy[v].is_some_and(|t| t <= half))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let matrix = InterferenceMatrix::new(a_set.clone(), b_set.clone(), entries)?;
    let (rows, cols) = largest_proper(&matrix)?;

    let sub_paths = lex_paths(g, &rows, &cols, ord)?;
    let restriction = union_of(g.vertex_count(), sub_paths.iter().flatten());
    let sub = g.restrict_edges(&restriction);
    let (lo, hi) = (r / 2, r.div_ceil(2));
    let sets = sub_paths
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            let (rows, cols) = (&rows, &cols);
            row.iter().enumerate().map(move |(j, p)| {
                let mut set = vec![p.vertices()[lo], p.vertices()[hi]];
                set.dedup();
                set.sort_unstable();
                PairSet {
                    a: rows[i],
                    b: cols[j],
                    set,
                }
            })
        })
        .collect();
    let family = DisconnectingFamily {
        radius: r,
        a: rows,
        b: cols,
        sets,
    };
    if let Some(v) = verify_disconnecting(&sub, &family)? {
        return Err(Error::verification(format!("midvertex family fails: {v:?}")));
    }
    Ok(EquidistantFamily {
        restriction: restriction.to_vec(),
        family,
    })
}

fn lex_paths(g: &Graph, a_set: &[usize], b_set: &[usize], ord: &EdgeOrder) -> Result<Vec<Vec<Path>>> {
    let trees = b_set.iter().map(|&b| lex_min_path_tree(g, b, ord)).collect::<Result<Vec<_>>>()?;
    a_set
        .iter()
        .map(|&a| {
            trees
                .iter()
                .map(|t| t.path_from(a).ok_or_else(|| Error::precondition(format!("{a} cannot reach {}", t.target()))))
                .collect()
        })
        .collect()
}

fn union_of<'a>(n: usize, paths: impl Iterator<Item = &'a Path>) -> VertexSet {
    let mut s = VertexSet::empty(n);
    for p in paths {
        for &v in p.vertices() {
            s.insert(v);
        }
    }
    s
}

fn largest_proper(m: &InterferenceMatrix) -> Result<(Vec<usize>, Vec<usize>)> {
    for n in (1..=m.size()).rev() {
        if let SubmatrixSearch::Found { rows, cols } = proper_submatrix(m, n, SearchMode::Exact)? {
            return Ok((rows, cols));
        }
    }
    unreachable!("a single entry is always proper once restricted to its own labels")
}
