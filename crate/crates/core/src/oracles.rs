// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical brute-force ground truth.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ancillary::{AncillarySpec, Base};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph [`simple_cycles`] will enumerate.
pub const CYCLE_ENUM_CAP: usize = 10;

/// A cycle in stored traversal order, with its clockwise/anticlockwise edge
/// counts under the canonical low-to-high orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub vertices: Vec<usize>,
    pub p: usize,
    pub q: usize,
    pub d: i64,
}

impl CycleWitness {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        check_cycle(g, &vertices)?;
        let (p, q) = count_directions(&vertices, |a, b| a < b);
        Ok(CycleWitness {
            vertices,
            p,
            q,
            d: p as i64 - q as i64,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Consecutive pairs, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let c = self.vertices.len();
        (0..c).map(move |i| (self.vertices[i], self.vertices[(i + 1) % c]))
    }
}

fn check_cycle(g: &Graph, w: &[usize]) -> Result<()> {
    if w.len() < 3 {
        return Err(Error::InvalidWitness(format!("cycle of length {}", w.len())));
    }
    let mut seen = vec![false; g.n() + 1];
    for &v in w {
        g.check_vertex(v).map_err(|e| Error::InvalidWitness(e.to_string()))?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidWitness(format!("vertex {v} repeated")));
        }
    }
    for i in 0..w.len() {
        let (a, b) = (w[i], w[(i + 1) % w.len()]);
        if !g.has_edge(a, b) {
            return Err(Error::InvalidWitness(format!("{a}-{b} is not an edge")));
        }
    }
    Ok(())
}

fn count_directions(w: &[usize], forward: impl Fn(usize, usize) -> bool) -> (usize, usize) {
    let c = w.len();
    let p = (0..c).filter(|&i| forward(w[i], w[(i + 1) % c])).count();
    (p, c - p)
}

/// Some cycle of `g` found by depth-first search, lowest label first.
pub fn has_cycle(g: &Graph) -> Option<CycleWitness> {
    let n = g.n();
    let mut parent = vec![0usize; n + 1];
    let mut depth = vec![usize::MAX; n + 1];
    for root in g.vertices() {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let nbrs = g.neighbors(u);
            if *next == nbrs.len() {
                stack.pop();
                continue;
            }
            let v = nbrs[*next];
            *next += 1;
            if v == parent[u] {
                continue;
            }
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                parent[v] = u;
                stack.push((v, 0));
            } else if depth[v] < depth[u] {
                let mut cycle = vec![u];
                let mut x = u;
                while x != v {
                    x = parent[x];
                    cycle.push(x);
                }
                cycle.reverse();
                return Some(CycleWitness::new(g, cycle).expect("dfs cycle"));
            }
        }
    }
    None
}

/// Breadth-first 2-colouring (`colors[v]` in {0, 1}, index 0 unused), or an
/// odd cycle.
pub fn is_bipartite(g: &Graph) -> std::result::Result<Vec<u8>, CycleWitness> {
    let n = g.n();
    let mut color = vec![u8::MAX; n + 1];
    let mut parent = vec![0usize; n + 1];
    let mut depth = vec![0usize; n + 1];
    for root in g.vertices() {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    let (mut a, mut b) = (u, v);
                    let (mut left, mut right) = (vec![a], vec![b]);
                    while depth[a] > depth[b] {
                        a = parent[a];
                        left.push(a);
                    }
                    while depth[b] > depth[a] {
                        b = parent[b];
                        right.push(b);
                    }
                    while a != b {
                        a = parent[a];
                        b = parent[b];
                        left.push(a);
                        right.push(b);
                    }
                    right.pop();
                    left.reverse();
                    left.extend(right);
                    return Err(CycleWitness::new(g, left).expect("odd cycle"));
                }
            }
        }
    }
    color[0] = 0;
    Ok(color)
}

/// Shortest-path length from `s` to `t`, if connected.
pub fn st_connected(g: &Graph, s: usize, t: usize) -> Option<usize> {
    shortest_path(g, s, t).map(|p| p.len() - 1)
}

/// A shortest `s`-`t` path as a vertex sequence.
pub fn shortest_path(g: &Graph, s: usize, t: usize) -> Option<Vec<usize>> {
    let mut prev = vec![0usize; g.n() + 1];
    let mut seen = vec![false; g.n() + 1];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            let mut path = vec![t];
            let mut x = t;
            while x != s {
                x = prev[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Every simple cycle once, starting at its smallest vertex and with the
/// second vertex smaller than the last.
pub fn simple_cycles(g: &Graph) -> Result<Vec<Vec<usize>>> {
    if g.n() > CYCLE_ENUM_CAP {
        return Err(Error::SizeCap {
            what: "cycle enumeration vertices",
            actual: g.n(),
            limit: CYCLE_ENUM_CAP,
        });
    }
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; g.n() + 1];
    for start in g.vertices() {
        path.push(start);
        on_path[start] = true;
        extend_cycles(g, start, &mut path, &mut on_path, &mut out);
        on_path[start] = false;
        path.pop();
    }
    Ok(out)
}

fn extend_cycles(g: &Graph, start: usize, path: &mut Vec<usize>, on_path: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let u = *path.last().unwrap();
    for &v in g.neighbors(u) {
        if v == start && path.len() >= 3 && path[1] < u {
            out.push(path.clone());
        } else if v > start && !on_path[v] {
            on_path[v] = true;
            path.push(v);
            extend_cycles(g, start, path, on_path, out);
            path.pop();
            on_path[v] = false;
        }
    }
}

fn base_graph(spec: &AncillarySpec<'_>) -> Result<Graph> {
    match spec.base {
        Base::Matrix(g) => Ok(g.clone()),
        Base::Array(a) => a.to_graph(),
    }
}

/// `(p - q) mod s` for the cycle traversed in stored order under the spec's
/// orientation.
pub fn cycle_imbalance(spec: &AncillarySpec<'_>, w: &[usize]) -> Result<usize> {
    let g = base_graph(spec)?;
    check_cycle(&g, w)?;
    imbalance_unchecked(spec, w)
}

fn imbalance_unchecked(spec: &AncillarySpec<'_>, w: &[usize]) -> Result<usize> {
    let c = w.len();
    let mut p = 0i64;
    for i in 0..c {
        let (a, b) = (w[i], w[(i + 1) % c]);
        p += i64::from(spec.orient_edge(a, b)?.0 == a);
    }
    let q = c as i64 - p;
    Ok((p - q).rem_euclid(spec.s_mod as i64) as usize)
}

/// Whether some cycle in `k`'s component has nonzero imbalance.
pub fn lemma1_predicate(spec: &AncillarySpec<'_>) -> Result<bool> {
    let g = base_graph(spec)?;
    let cycles = simple_cycles(&g)?;
    lemma1_with_cycles(spec, &g.components(), &cycles)
}

/// [`lemma1_predicate`] against a precomputed cycle list and component map.
pub fn lemma1_with_cycles(spec: &AncillarySpec<'_>, components: &[usize], cycles: &[Vec<usize>]) -> Result<bool> {
    let home = components[spec.k];
    for c in cycles {
        if components[c[0]] == home && imbalance_unchecked(spec, c)? != 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All connected labelled graphs on `n` vertices (`n <= 6`).
pub fn connected_catalog(n: usize) -> Result<Vec<Graph>> {
    if n > 6 {
        return Err(Error::SizeCap {
            what: "catalog vertices",
            actual: n,
            limit: 6,
        });
    }
    let pairs = all_pairs(n);
    Ok((0u64..1 << pairs.len())
        .filter_map(|mask| {
            let g = from_mask(n, &pairs, mask);
            g.is_connected().then_some(g)
        })
        .collect())
}

/// `count` connected labelled graphs on `n` vertices, each drawn by
/// rejection from uniform edge subsets.
pub fn sample_connected(n: usize, count: usize, seed: u64) -> Vec<Graph> {
    let pairs = all_pairs(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mask: u64 = rng.random::<u64>() & ((1u64 << pairs.len()) - 1);
        let g = from_mask(n, &pairs, mask);
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Uniform random labelled graph on `n` vertices with edge probability `p`.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for (u, v) in all_pairs(n) {
        if rng.random_bool(p) {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect()
}

fn from_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    let mut g = Graph::new(n);
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if mask >> i & 1 == 1 {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}
