//! Cutrank over GF(2) and checks on supplied rank decompositions.

mod tree;

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use tree::{
    balanced_edge, parse_tree, random_ternary_tree, width, write_tree, BalancedEdge, TernaryTree,
};

/// Row-major bit matrix over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<FixedBitSet>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix { cols, rows: vec![FixedBitSet::with_capacity(cols); rows] }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].contains(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Indices of the first rows (in order) that are linearly independent of
    /// the rows before them. Their count is the rank.
    pub fn row_basis(&self) -> Vec<usize> {
        // Reduced rows keyed by pivot column.
        let mut pivots: Vec<(usize, FixedBitSet)> = Vec::new();
        let mut basis = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut row = row.clone();
            for (p, reduced) in &pivots {
                if row.contains(*p) {
                    row.symmetric_difference_with(reduced);
                }
            }
            if let Some(p) = row.ones().next() {
                for (_, reduced) in pivots.iter_mut() {
                    if reduced.contains(p) {
                        reduced.symmetric_difference_with(&row);
                    }
                }
                pivots.push((p, row));
                basis.push(r);
            }
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.row_basis().len()
    }
}

/// A split of `0..n` into two disjoint sides that together cover it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, left: &[usize]) -> Result<Self> {
        let mut side = vec![false; n];
        for &v in left {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            if side[v] {
                return Err(Error::precondition(format!("vertex {v} listed twice")));
            }
            side[v] = true;
        }
        Ok(Bipartition {
            left: (0..n).filter(|&v| side[v]).collect(),
            right: (0..n).filter(|&v| !side[v]).collect(),
        })
    }

    fn check(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &v in self.left.iter().chain(&self.right) {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::precondition(format!("vertex {v} on both sides")));
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::precondition("bipartition does not cover every vertex"));
        }
        Ok(())
    }
}

/// Rows indexed by `x`, columns by `y`, entry 1 iff adjacent.
pub fn cross_matrix(g: &Graph, x: &[usize], y: &[usize]) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(x.len(), y.len());
    for (r, &u) in x.iter().enumerate() {
        for (c, &v) in y.iter().enumerate() {
            if g.has_edge(u, v) {
                m.set(r, c, true);
            }
        }
    }
    m
}

pub fn cutrank(g: &Graph, part: &Bipartition) -> Result<usize> {
    part.check(g.vertex_count())?;
    Ok(cross_matrix(g, &part.left, &part.right).rank())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborhoodPartition {
    /// Vertices of `x` whose rows form the basis.
    pub basis: Vec<usize>,
    pub x_classes: Vec<Vec<usize>>,
    pub y_classes: Vec<Vec<usize>>,
}

impl NeighborhoodPartition {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// True iff every block between an x-class and a y-class is complete or
    /// empty.
    pub fn blocks_homogeneous(&self, g: &Graph) -> bool {
        self.x_classes.iter().all(|xs| {
            self.y_classes.iter().all(|ys| {
                let first = g.has_edge(xs[0], ys[0]);
                xs.iter().all(|&u| ys.iter().all(|&v| g.has_edge(u, v) == first))
            })
        })
    }
}

/// Splits `x` by GF(2) coordinates over a row basis of the cross matrix
/// (which amounts to equal rows, as the basis is independent) and `y` by
/// adjacency to the basis vertices. Vertices of `x` and `y` are sorted first
/// so the basis is the first independent rows in id order.
pub fn neighborhood_partition(g: &Graph, x: &[usize], y: &[usize]) -> Result<NeighborhoodPartition> {
    let sorted = |s: &[usize]| -> Result<Vec<usize>> {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        for &v in &s {
            g.check_vertex(v)?;
        }
        Ok(s)
    };
    let (x, y) = (sorted(x)?, sorted(y)?);
    if x.iter().any(|v| y.binary_search(v).is_ok()) {
        return Err(Error::precondition("the two sides of a cut must be disjoint"));
    }
    let m = cross_matrix(g, &x, &y);
    let basis: Vec<usize> = m.row_basis().into_iter().map(|r| x[r]).collect();

    let mut x_groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for &u in &x {
        let row: Vec<usize> = y.iter().copied().filter(|&v| g.has_edge(u, v)).collect();
        x_groups.entry(row).or_default().push(u);
    }
    let mut y_groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for &v in &y {
        let pattern = basis.iter().map(|&b| g.has_edge(b, v)).collect();
        y_groups.entry(pattern).or_default().push(v);
    }
    let mut x_classes: Vec<Vec<usize>> = x_groups.into_values().collect();
    let mut y_classes: Vec<Vec<usize>> = y_groups.into_values().collect();
    x_classes.sort();
    y_classes.sort();
    Ok(NeighborhoodPartition { basis, x_classes, y_classes })
}
