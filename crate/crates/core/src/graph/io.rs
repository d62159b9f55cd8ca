//! Plain-text graph format.
//!
//! ```text
//! # comment
//! p <n> <m>
//! e <u> <v>
//! ```
//!
//! Ids are 0-based; blank lines and `#` comments are ignored. The writer
//! emits edges in canonical order.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub(crate) fn numbers(line_no: usize, fields: &[&str], expected: usize) -> Result<Vec<usize>> {
    if fields.len() != expected {
        return Err(Error::parse(
            line_no,
            format!("expected {expected} numbers, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("invalid number `{f}`")))
        })
        .collect()
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (line_no, fields) in content_lines(text) {
        match fields[0] {
            "p" if header.is_none() => {
                let nums = numbers(line_no, &fields[1..], 2)?;
                header = Some((nums[0], nums[1]));
            }
            "p" => return Err(Error::parse(line_no, "duplicate header")),
            "e" if header.is_some() => {
                let nums = numbers(line_no, &fields[1..], 2)?;
                edges.push((nums[0], nums[1]));
            }
            "e" => return Err(Error::parse(line_no, "edge before `p` header")),
            other => return Err(Error::parse(line_no, format!("unknown record `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing `p <n> <m>` header"))?;
    if edges.len() != m {
        return Err(Error::parse(
            0,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "e {u} {v}").expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_with_comments_and_blank_lines() {
        let g = parse_graph("# triangle\n\np 3 3\ne 0 1\n  e 2 1\n# tail\ne 0 2\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(write_graph(&g), "p 3 3\ne 0 1\ne 0 2\ne 1 2\n");
    }

    #[test]
    fn reports_errors_with_lines() {
        assert!(matches!(parse_graph("e 0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("p 2 1\ne 0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("p 2 2\ne 0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("p 2 1\ne 0 2\n"), Err(Error::InvalidVertex { .. })));
        assert!(matches!(parse_graph("q 1\n"), Err(Error::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(n in 1usize..12, raw in prop::collection::vec((0usize..12, 0usize..12), 0..30)) {
            let mut edges: Vec<(usize, usize)> = raw
                .into_iter()
                .map(|(u, v)| (u % n, v % n))
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            let g = Graph::from_edges(n, edges).unwrap();
            prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        }
    }
}
