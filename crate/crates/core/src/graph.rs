// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Simple undirected graphs in the two input models.
//!
//! Vertices are labelled `1..=n` throughout; label 0 is never a vertex.
//! [`Graph`] is the adjacency-matrix model (constant-time pair queries),
//! [`AdjacencyArray`] is the adjacency-array model (per-vertex neighbour
//! arrays with free degrees).

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            bits: vec![0; words * (n + 1)],
            adj: vec![Vec::new(); n + 1],
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`. Self-loops, out-of-range labels and duplicates are errors.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v || self.has_edge(u, v) {
            return Err(Error::InvalidEdge(u, v));
        }
        self.set_bit(u, v);
        self.set_bit(v, u);
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        self.m += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.has_edge(u, v) {
            return Err(Error::InvalidEdge(u, v));
        }
        self.clear_bit(u, v);
        self.clear_bit(v, u);
        self.adj[u].retain(|&x| x != v);
        self.adj[v].retain(|&x| x != u);
        self.m -= 1;
        Ok(())
    }

    fn set_bit(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    fn clear_bit(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Adjacency-matrix entry `A_uv`. Out-of-range labels read as 0.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return false;
        }
        self.bits[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    /// Neighbours of `u` in increasing label order.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Component id (1-based, in order of smallest member) for every vertex;
    /// index 0 is unused.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![0usize; self.n + 1];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for root in 1..=self.n {
            if comp[root] != 0 {
                continue;
            }
            next += 1;
            comp[root] = next;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if comp[v] == 0 {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().iter().skip(1).all(|&c| c == 1)
    }

    /// Vertices reachable from `root`, sorted.
    pub fn component_of(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n + 1];
        let mut out = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            i += 1;
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    out.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Induced subgraph on `keep` (sorted labels), relabelled `1..=keep.len()`
    /// in order. Returns the subgraph and the map new label -> old label.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![0usize; self.n + 1];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i + 1;
        }
        let mut g = Graph::new(keep.len());
        for &u in keep {
            for &v in &self.adj[u] {
                if u < v && index[v] != 0 {
                    g.add_edge(index[u], index[v]).expect("induced edge");
                }
            }
        }
        let mut back = vec![0];
        back.extend_from_slice(keep);
        (g, back)
    }

    /// Plain-text edge list: an `n m` header followed by one `u v` per line.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `n m` header".into(),
        })?;
        let nums = parse_numbers(hline, header)?;
        if nums.len() != 2 {
            return Err(Error::Parse {
                line: hline,
                message: format!("header needs 2 fields, found {}", nums.len()),
            });
        }
        let (n, m) = (nums[0], nums[1]);
        let mut g = Graph::new(n);
        let mut seen = 0;
        for (line, body) in lines {
            let nums = parse_numbers(line, body)?;
            if nums.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("edge needs 2 fields, found {}", nums.len()),
                });
            }
            g.add_edge(nums[0], nums[1]).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header declares {m} edges, found {seen}"),
            });
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// DOT rendering. `label` supplies the display label of each vertex.
    pub fn to_dot(&self, name: &str, label: impl Fn(usize) -> String) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in 1..=self.n {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", label(v));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }

    /// Parses the DOT subset written by [`Graph::to_dot`]. Returns the graph
    /// and the vertex labels (index 0 unused).
    pub fn parse_dot(text: &str) -> Result<(Graph, Vec<String>)> {
        let mut labels: Vec<(usize, String)> = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim().trim_end_matches(';').trim();
            let lineno = i + 1;
            if line.is_empty() || line.starts_with("graph") || line == "}" {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            if let Some((a, b)) = line.split_once("--") {
                let u = a.trim().parse().map_err(|_| perr(format!("bad node `{a}`")))?;
                let v = b.trim().parse().map_err(|_| perr(format!("bad node `{b}`")))?;
                edges.push((u, v));
            } else if let Some((id, rest)) = line.split_once('[') {
                let id: usize = id
                    .trim()
                    .parse()
                    .map_err(|_| perr(format!("bad node `{id}`")))?;
                let label = rest
                    .split_once("label=\"")
                    .and_then(|(_, r)| r.split_once('"'))
                    .map(|(l, _)| l.to_string())
                    .ok_or_else(|| perr("missing label".into()))?;
                labels.push((id, label));
            } else {
                return Err(perr(format!("unrecognised statement `{line}`")));
            }
        }
        let n = labels.iter().map(|(v, _)| *v).max().unwrap_or(0);
        let mut names = vec![String::new(); n + 1];
        for (v, l) in labels {
            names[v] = l;
        }
        Ok((Graph::from_edges(n, &edges)?, names))
    }
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<usize>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("expected a non-negative integer, found `{tok}`"),
            })
        })
        .collect()
}

/// Edge count of an adjacency array plus the sparse/dense flag used by the
/// early reject (`m >= n` forces a cycle).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCount {
    pub m: usize,
    pub dense: bool,
}

/// Adjacency-array input: `neighbors[i-1][j-1]` is `f_i(j)`.
///
/// Degrees are free; every read of a neighbour entry is a query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyArray {
    pub degrees: Vec<usize>,
    pub neighbors: Vec<Vec<usize>>,
}

impl AdjacencyArray {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// `f_u(j)` with 1-based `u` and `j`.
    pub fn neighbor(&self, u: usize, j: usize) -> Result<usize> {
        let row = self
            .neighbors
            .get(u.wrapping_sub(1))
            .ok_or(Error::VertexOutOfRange {
                vertex: u,
                n: self.n(),
            })?;
        row.get(j.wrapping_sub(1)).copied().ok_or(Error::SlotOutOfRange {
            slot: j,
            degree: row.len(),
        })
    }

    pub fn degree(&self, u: usize) -> usize {
        self.degrees[u - 1]
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// `m = (sum of degrees) / 2`, read from the degrees alone.
    pub fn edge_count(&self) -> Result<EdgeCount> {
        let total: usize = self.degrees.iter().sum();
        if total % 2 != 0 {
            return Err(Error::Malformed(format!("odd degree sum {total}")));
        }
        let m = total / 2;
        Ok(EdgeCount {
            m,
            dense: m >= self.n(),
        })
    }

    /// Checks array lengths, injectivity, label range and symmetry.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.neighbors.len() != n {
            return Err(Error::Malformed(format!(
                "{} degrees but {} neighbour arrays",
                n,
                self.neighbors.len()
            )));
        }
        let mut seen = vec![0usize; n + 1];
        for (i, row) in self.neighbors.iter().enumerate() {
            let u = i + 1;
            if row.len() != self.degrees[i] {
                return Err(Error::Malformed(format!(
                    "vertex {u}: degree {} but {} neighbours",
                    self.degrees[i],
                    row.len()
                )));
            }
            for &v in row {
                if v == 0 || v > n {
                    return Err(Error::Malformed(format!("vertex {u}: neighbour {v} out of range")));
                }
                if v == u {
                    return Err(Error::Malformed(format!("vertex {u}: self-loop")));
                }
                if seen[v] == u {
                    return Err(Error::Malformed(format!("vertex {u}: repeated neighbour {v}")));
                }
                seen[v] = u;
            }
        }
        for (i, row) in self.neighbors.iter().enumerate() {
            let u = i + 1;
            for &v in row {
                if !self.neighbors[v - 1].contains(&u) {
                    return Err(Error::Malformed(format!("edge {u}-{v} is not symmetric")));
                }
            }
        }
        self.edge_count().map(|_| ())
    }

    /// Neighbour arrays in increasing label order.
    pub fn from_graph(g: &Graph) -> Self {
        let neighbors: Vec<Vec<usize>> = g.vertices().map(|u| g.neighbors(u).to_vec()).collect();
        AdjacencyArray {
            degrees: neighbors.iter().map(Vec::len).collect(),
            neighbors,
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        self.validate()?;
        let mut g = Graph::new(self.n());
        for (i, row) in self.neighbors.iter().enumerate() {
            for &v in row {
                if i + 1 < v {
                    g.add_edge(i + 1, v)?;
                }
            }
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let arr: AdjacencyArray = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        arr.validate()?;
        Ok(arr)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("adjacency array serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(2, 2), Err(Error::InvalidEdge(2, 2)));
        g.add_edge(1, 2).unwrap();
        assert_eq!(g.add_edge(2, 1), Err(Error::InvalidEdge(2, 1)));
        assert!(matches!(g.add_edge(1, 4), Err(Error::VertexOutOfRange { .. })));
        assert!(g.has_edge(1, 2) && g.has_edge(2, 1));
    }

    #[test]
    fn edge_list_round_trip_and_diagnostics() {
        let g = Graph::parse_edge_list("# a path\n4 3\n1 2\n2 3\n\n3 4\n").unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);

        let err = Graph::parse_edge_list("3 2\n1 2\n2 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Graph::parse_edge_list("3 2\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(Graph::parse_edge_list("").is_err());
    }

    #[test]
    fn edge_counts() {
        let arr = AdjacencyArray {
            degrees: vec![1, 1],
            neighbors: vec![vec![2], vec![1]],
        };
        assert_eq!(arr.edge_count().unwrap(), EdgeCount { m: 1, dense: false });

        let star = Graph::from_edges(6, &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]).unwrap();
        let arr = AdjacencyArray::from_graph(&star);
        assert_eq!(arr.degrees, vec![5, 1, 1, 1, 1, 1]);
        assert_eq!(arr.edge_count().unwrap(), EdgeCount { m: 5, dense: false });

        let tri = Graph::from_edges(4, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let arr = AdjacencyArray::from_graph(&tri);
        assert_eq!(arr.degrees, vec![2, 2, 2, 0]);
        assert_eq!(arr.edge_count().unwrap(), EdgeCount { m: 3, dense: false });

        let odd = AdjacencyArray {
            degrees: vec![1, 0],
            neighbors: vec![vec![2], vec![]],
        };
        assert!(matches!(odd.edge_count(), Err(Error::Malformed(_))));
    }

    #[test]
    fn array_validation() {
        let asym = AdjacencyArray {
            degrees: vec![1, 1, 0],
            neighbors: vec![vec![2], vec![3], vec![]],
        };
        assert!(asym.validate().is_err());
        let repeated = AdjacencyArray {
            degrees: vec![2, 1],
            neighbors: vec![vec![2, 2], vec![1]],
        };
        assert!(repeated.validate().is_err());
        let json = r#"{"degrees":[1,1],"neighbors":[[2],[1]]}"#;
        let arr = AdjacencyArray::from_json(json).unwrap();
        assert_eq!(arr.neighbor(1, 1).unwrap(), 2);
        assert!(matches!(arr.neighbor(1, 2), Err(Error::SlotOutOfRange { .. })));
    }

    #[test]
    fn dot_round_trip() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let dot = g.to_dot("G", |v| format!("v{v}"));
        let (back, labels) = Graph::parse_dot(&dot).unwrap();
        assert_eq!(back, g);
        assert_eq!(labels[3], "v3");
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(5, &[(1, 2), (4, 5)]).unwrap();
        assert_eq!(g.components(), vec![0, 1, 1, 2, 3, 3]);
        assert!(!g.is_connected());
        assert_eq!(g.component_of(5), vec![4, 5]);
        let (sub, back) = g.induced(&[2, 4, 5]);
        assert_eq!(sub.m(), 1);
        assert!(sub.has_edge(2, 3));
        assert_eq!(back, vec![0, 2, 4, 5]);
    }
}
