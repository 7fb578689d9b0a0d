//! The labeled multidigraph of a characteristic matrix: vertices `w_1..w_k`,
//! and for every entry `a^j_{i,l}` an edge `w_i → w_j` labeled by it. The
//! diagonal blocks give the `n_i` loops at `w_i`.

use std::fmt::Write;

use crate::error::Result;
use crate::model::{DimensionVector, VectorMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Column within the target block.
    pub column: usize,
    pub label: bool,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDigraph {
    dims: DimensionVector,
    edges: Vec<Edge>,
}

impl LabeledDigraph {
    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn vertex_count(&self) -> usize {
        self.dims.k()
    }

    /// Edges sorted by source, target, column.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of label-1 edges leaving `v`, loops included.
    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.from == v && e.label).count()
    }

    /// Recovers the matrix from the edge labels.
    pub fn to_matrix(&self) -> VectorMatrix {
        let mut a = VectorMatrix::from_fn(self.dims.clone(), |_, _, _| false);
        for e in &self.edges {
            a.set(e.from, e.to, e.column, e.label);
        }
        a
    }
}

pub fn build_digraph(a: &VectorMatrix) -> Result<LabeledDigraph> {
    a.require_normalized()?;
    let dims = a.dims().clone();
    let mut edges = Vec::with_capacity(a.k() * a.n());
    for from in 0..a.k() {
        for to in 0..a.k() {
            for column in 0..dims.block_size(to) {
                edges.push(Edge {
                    from,
                    to,
                    column,
                    label: a.get(from, to, column),
                });
            }
        }
    }
    Ok(LabeledDigraph { dims, edges })
}

/// Orientable iff every vertex has odd out-degree.
pub fn orientable_via_digraph(g: &LabeledDigraph) -> bool {
    (0..g.vertex_count()).all(|v| g.out_degree(v) % 2 == 1)
}

/// DOT text; label-0 edges are kept and drawn dotted.
pub fn to_dot(g: &LabeledDigraph) -> String {
    let mut out = String::from("digraph D {\n");
    for v in 0..g.vertex_count() {
        writeln!(out, "  w{};", v + 1).expect("writing to a String");
    }
    for e in &g.edges {
        let style = if e.label { "" } else { ", style=dotted" };
        writeln!(
            out,
            "  w{} -> w{} [label=\"{}\", column={}{}];",
            e.from + 1,
            e.to + 1,
            u8::from(e.label),
            e.column + 1,
            style
        )
        .expect("writing to a String");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use regex::Regex;

    fn mat(d: &[usize], rows: &[&[u8]]) -> VectorMatrix {
        let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        VectorMatrix::new(DimensionVector::new(d.to_vec()).unwrap(), &rows).unwrap()
    }

    fn ex1(a: u8) -> VectorMatrix {
        mat(&[2, 1], &[&[1, 1, a], &[0, 0, 1]])
    }

    /// Parses the subset of DOT produced by `to_dot`, rejecting anything else.
    fn parse_dot(text: &str) -> Option<(usize, Vec<(usize, usize, usize, bool, bool)>)> {
        let node = Regex::new(r"^w(\d+);$").unwrap();
        let edge = Regex::new(
            r#"^w(\d+) -> w(\d+) \[label="([01])", column=(\d+)(, style=dotted)?\];$"#,
        )
        .unwrap();
        let mut lines = text.lines().map(str::trim);
        if lines.next()? != "digraph D {" {
            return None;
        }
        let mut nodes = 0;
        let mut edges = Vec::new();
        for line in lines {
            if line == "}" {
                return Some((nodes, edges));
            }
            if let Some(c) = node.captures(line) {
                nodes = nodes.max(c[1].parse().ok()?);
            } else if let Some(c) = edge.captures(line) {
                edges.push((
                    c[1].parse().ok()?,
                    c[2].parse().ok()?,
                    c[4].parse().ok()?,
                    &c[3] == "1",
                    c.get(5).is_some(),
                ));
            } else {
                return None;
            }
        }
        None
    }

    #[test]
    fn build_examples() {
        let g = build_digraph(&ex1(1)).unwrap();
        let loops = |v| g.edges().iter().filter(|e| e.from == v && e.is_loop()).count();
        assert_eq!((loops(0), loops(1)), (2, 1));
        let cross: Vec<(usize, usize, bool)> = g
            .edges()
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| (e.from, e.to, e.label))
            .collect();
        assert_eq!(cross, vec![(0, 1, true), (1, 0, false), (1, 0, false)]);

        let torus = build_digraph(&mat(&[1, 1], &[&[1, 0], &[0, 1]])).unwrap();
        assert!(torus.edges().iter().all(|e| e.label == e.is_loop()));

        let g = build_digraph(&mat(&[2, 2], &[&[1, 1, 1, 0], &[0, 0, 1, 1]])).unwrap();
        let labels: Vec<bool> = g
            .edges()
            .iter()
            .filter(|e| e.from == 0 && e.to == 1)
            .map(|e| e.label)
            .collect();
        assert_eq!(labels, vec![true, false]);
    }

    #[test]
    fn orientability_examples() {
        let g = build_digraph(&ex1(1)).unwrap();
        assert_eq!((g.out_degree(0), g.out_degree(1)), (3, 1));
        assert!(orientable_via_digraph(&g));
        let g = build_digraph(&ex1(0)).unwrap();
        assert_eq!(g.out_degree(0), 2);
        assert!(!orientable_via_digraph(&g));
        assert!(orientable_via_digraph(
            &build_digraph(&mat(&[1, 1], &[&[1, 0], &[0, 1]])).unwrap()
        ));
    }

    #[test]
    fn dot_examples() {
        let dot = to_dot(&build_digraph(&mat(&[1], &[&[1]])).unwrap());
        let (nodes, edges) = parse_dot(&dot).unwrap();
        assert_eq!((nodes, edges), (1, vec![(1, 1, 1, true, false)]));

        let dot = to_dot(&build_digraph(&ex1(1)).unwrap());
        let (nodes, edges) = parse_dot(&dot).unwrap();
        assert_eq!(nodes, 2);
        let solid = edges.iter().filter(|e| !e.4).count();
        let dotted: Vec<_> = edges.iter().filter(|e| e.4).collect();
        assert_eq!(solid, 4);
        assert_eq!(dotted.len(), 2);
        assert!(dotted.iter().all(|e| (e.0, e.1, e.3) == (2, 1, false)));
        assert!(parse_dot("graph D {\n}\n").is_none());
    }

    #[test]
    fn dot_round_trip_recovers_matrix() {
        for a in [ex1(0), ex1(1), mat(&[2, 2], &[&[1, 1, 0, 1], &[0, 0, 1, 1]])] {
            let g = build_digraph(&a).unwrap();
            let (_, edges) = parse_dot(&to_dot(&g)).unwrap();
            let back = VectorMatrix::from_fn(a.dims().clone(), |r, b, c| {
                edges
                    .iter()
                    .any(|e| (e.0, e.1, e.2) == (r + 1, b + 1, c + 1) && e.3)
            });
            assert_eq!(back, a);
            assert_eq!(g.to_matrix(), a);
        }
    }
}
