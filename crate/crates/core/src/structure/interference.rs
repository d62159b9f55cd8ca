//! Interference matrices and proper submatrix extraction.
//!
//! A submatrix on rows `A'` and columns `B'` is proper when no selected
//! entry meets `A' ∪ B'`. Equivalently, no bad triple `(a, b, y)` with
//! `y ∈ m(a, b)` has all three members selected, which is how the exact
//! search sees it.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Search nodes before the exact search gives up with a cap error.
pub const EXACT_SUBMATRIX_NODE_BUDGET: u64 = 50_000_000;
/// Seed used by the randomized search.
pub const SUBMATRIX_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterferenceMatrix {
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// `entries[i][j]` is `m(rows[i], cols[j])`, sorted.
    entries: Vec<Vec<Vec<usize>>>,
}

impl InterferenceMatrix {
    /// Labels must be distinct and `rows ∩ cols = ∅`; each entry must lie in
    /// `(A ∪ B) ∖ {a, b}`.
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, entries: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let labels: BTreeSet<usize> = rows.iter().chain(&cols).copied().collect();
        if labels.len() != rows.len() + cols.len() {
            return Err(Error::precondition("row and column labels must be distinct and disjoint"));
        }
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::precondition("entry table does not match the labels"));
        }
        let mut clean = entries;
        for (i, row) in clean.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                e.sort_unstable();
                e.dedup();
                if let Some(&y) = e.iter().find(|&&y| !labels.contains(&y) || y == rows[i] || y == cols[j]) {
                    return Err(Error::precondition(format!(
                        "entry ({}, {}) contains illegal label {y}",
                        rows[i], cols[j]
                    )));
                }
            }
        }
        Ok(InterferenceMatrix {
            rows,
            cols,
            entries: clean,
        })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &[usize] {
        &self.entries[i][j]
    }

    /// `min(|A|, |B|)`.
    pub fn size(&self) -> usize {
        self.rows.len().min(self.cols.len())
    }

    /// Smallest `k` for which this is a `k`-interference matrix.
    pub fn interference(&self) -> usize {
        self.entries.iter().flatten().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_proper(&self) -> bool {
        self.interference() == 0
    }

    /// Submatrix on row indices `ri` and column indices `ci`, entries
    /// intersected with the kept labels.
    pub fn submatrix(&self, ri: &[usize], ci: &[usize]) -> InterferenceMatrix {
        let rows: Vec<usize> = ri.iter().map(|&i| self.rows[i]).collect();
        let cols: Vec<usize> = ci.iter().map(|&j| self.cols[j]).collect();
        let kept: BTreeSet<usize> = rows.iter().chain(&cols).copied().collect();
        let entries = ri
            .iter()
            .map(|&i| {
                ci.iter()
                    .map(|&j| self.entries[i][j].iter().copied().filter(|y| kept.contains(y)).collect())
                    .collect()
            })
            .collect();
        InterferenceMatrix { rows, cols, entries }
    }

    /// Position of a label in the combined index space: rows first.
    fn index_of(&self, label: usize) -> usize {
        self.rows
            .iter()
            .position(|&r| r == label)
            .or_else(|| self.cols.iter().position(|&c| c == label).map(|j| self.rows.len() + j))
            .expect("entries only hold row and column labels")
    }
}

/// Square `size × size` matrix with rows `0..size` and columns
/// `size..2 size`; each entry holds exactly `min(k, 2 size - 2)` labels drawn
/// uniformly.
pub fn random_interference_matrix(size: usize, k: usize, seed: u64) -> InterferenceMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<usize> = (0..size).collect();
    let cols: Vec<usize> = (size..2 * size).collect();
    let entries = rows
        .iter()
        .map(|&a| {
            cols.iter()
                .map(|&b| {
                    let pool: Vec<usize> = (0..2 * size).filter(|&y| y != a && y != b).collect();
                    let take = k.min(pool.len());
                    sample(&mut rng, pool.len(), take).into_iter().map(|i| pool[i]).collect()
                })
                .collect()
        })
        .collect();
    InterferenceMatrix::new(rows, cols, entries).expect("generated entries are legal")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exact,
    /// Uniform sampling of `n`-subsets, as in the counting argument.
    Randomized { tries: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SubmatrixSearch {
    /// Row and column labels of a proper submatrix.
    Found { rows: Vec<usize>, cols: Vec<usize> },
    /// Exact search proved there is none.
    NotFound,
    /// Sampling ran out of tries; says nothing about existence.
    Inconclusive { tries: u64 },
}

/// Proper `n × n` submatrix search.
pub fn proper_submatrix(m: &InterferenceMatrix, n: usize, mode: SearchMode) -> Result<SubmatrixSearch> {
    if n == 0 {
        return Err(Error::precondition("submatrix size must be at least 1"));
    }
    if n > m.rows.len() || n > m.cols.len() {
        return Ok(SubmatrixSearch::NotFound);
    }
    let found = match mode {
        SearchMode::Exact => exact_search(m, n)?,
        SearchMode::Randomized { tries } => {
            let hit = randomized_search(m, n, tries);
            if hit.is_none() {
                return Ok(SubmatrixSearch::Inconclusive { tries });
            }
            hit
        }
    };
    Ok(match found {
        Some((ri, ci)) => {
            let sub = m.submatrix(&ri, &ci);
            if !sub.is_proper() {
                return Err(Error::verification("extracted submatrix is not proper"));
            }
            SubmatrixSearch::Found {
                rows: sub.rows,
                cols: sub.cols,
            }
        }
        None => SubmatrixSearch::NotFound,
    })
}

/// Upper bound from the counting argument on the fraction of `n`-subset
/// pairs that contain a bad triple.
pub fn bad_pair_fraction_bound(size: usize, k: usize, n: usize) -> f64 {
    if size <= 1 || n <= 1 {
        return 0.0;
    }
    let m = size as f64;
    let nf = n as f64;
    // C(m-2, n-2) C(m-1, n-1) / C(m, n)^2 = n^2 (n-1) / (m^2 (m-1)).
    k as f64 * m * m * nf * nf * (nf - 1.0) / (m * m * (m - 1.0))
}

/// Samples needed for a miss probability below `1e-9` when the counting
/// bound applies, `None` when it does not.
pub fn union_bound_tries(size: usize, k: usize, n: usize) -> Option<u64> {
    let f = bad_pair_fraction_bound(size, k, n);
    if f >= 1.0 {
        None
    } else if f <= 0.0 {
        Some(1)
    } else {
        Some(((1e-9f64).ln() / f.ln()).ceil() as u64)
    }
}

fn randomized_search(m: &InterferenceMatrix, n: usize, tries: u64) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUBMATRIX_SEED);
    for _ in 0..tries {
        let mut ri = sample(&mut rng, m.rows.len(), n).into_vec();
        let mut ci = sample(&mut rng, m.cols.len(), n).into_vec();
        ri.sort_unstable();
        ci.sort_unstable();
        if m.submatrix(&ri, &ci).is_proper() {
            return Some((ri, ci));
        }
    }
    None
}

struct Exact<'a> {
    m: &'a InterferenceMatrix,
    n: usize,
    /// For every combined index, the pairs it must not be selected with.
    conflicts: Vec<Vec<(usize, usize)>>,
    chosen: Vec<bool>,
    nodes: u64,
}

fn exact_search(m: &InterferenceMatrix, n: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let na = m.rows.len();
    let total = na + m.cols.len();
    let mut conflicts = vec![Vec::new(); total];
    for i in 0..na {
        for j in 0..m.cols.len() {
            let b = na + j;
            for &y in &m.entries[i][j] {
                let yi = m.index_of(y);
                conflicts[i].push((b, yi));
                conflicts[b].push((i, yi));
                conflicts[yi].push((i, b));
            }
        }
    }
    let mut s = Exact {
        m,
        n,
        conflicts,
        chosen: vec![false; total],
        nodes: 0,
    };
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    if s.go(0, &mut rows, &mut cols)? {
        Ok(Some((rows, cols.into_iter().map(|b| b - na).collect())))
    } else {
        Ok(None)
    }
}

impl Exact<'_> {
    fn ok_to_add(&self, v: usize) -> bool {
        self.conflicts[v].iter().all(|&(x, y)| !(self.chosen[x] && self.chosen[y]))
    }

    /// Decides index `v` (rows first, then columns).
    fn go(&mut self, v: usize, rows: &mut Vec<usize>, cols: &mut Vec<usize>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > EXACT_SUBMATRIX_NODE_BUDGET {
            return Err(Error::CapExceeded {
                what: "proper_submatrix search nodes",
                limit: EXACT_SUBMATRIX_NODE_BUDGET as usize,
                actual: self.nodes as usize,
            });
        }
        let na = self.m.rows.len();
        if rows.len() == self.n && cols.len() == self.n {
            return Ok(true);
        }
        if v == self.chosen.len() {
            return Ok(false);
        }
        let (taken, left) = if v < na {
            (rows.len(), na - v)
        } else {
            if rows.len() < self.n {
                return Ok(false);
            }
            (cols.len(), self.chosen.len() - v)
        };
        if taken + left < self.n {
            return Ok(false);
        }
        if taken < self.n && self.ok_to_add(v) {
            self.chosen[v] = true;
            if v < na { rows.push(v) } else { cols.push(v) }
            if self.go(v + 1, rows, cols)? {
                return Ok(true);
            }
            if v < na { rows.pop() } else { cols.pop() };
            self.chosen[v] = false;
        }
        // Skipping past the last possible row jumps straight to the columns.
        let next = if v < na && rows.len() == self.n { na } else { v + 1 };
        self.go(next, rows, cols)
    }
}
