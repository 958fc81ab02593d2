// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! The lifted graph H and its bipartite double H'.
//!
//! H has vertices `{S, T} ∪ V × Z_s`. Every base edge oriented `u -> v`
//! lifts to the `s` edges `(u_b, v_{b+1})`, and the special edges are
//! `(S, k_0)` and `(T, k_1)`. H is never materialised on the algorithm path:
//! [`AncillarySpec::edge_query`] and [`AncillarySpec::neighbor`] answer
//! queries with at most one base query each.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::coloring::VertexColoring;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyArray, Graph};

/// Largest base graph [`AncillarySpec::build_explicit`] accepts.
pub const EXPLICIT_CAP: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HVertex {
    S,
    T,
    Lifted { v: usize, b: usize },
}

impl HVertex {
    pub fn lifted(v: usize, b: usize) -> Self {
        HVertex::Lifted { v, b }
    }

    /// One-word encoding `v * s + b`, with `S = 0` and `T = 1`.
    pub fn encode(self, s_mod: usize) -> usize {
        match self {
            HVertex::S => 0,
            HVertex::T => 1,
            HVertex::Lifted { v, b } => v * s_mod + b,
        }
    }

    pub fn decode(word: usize, s_mod: usize) -> Self {
        match word {
            0 => HVertex::S,
            1 => HVertex::T,
            w => HVertex::Lifted {
                v: w / s_mod,
                b: w % s_mod,
            },
        }
    }

    /// Display label: `S`, `T` or `v_b`.
    pub fn name(self) -> String {
        match self {
            HVertex::S => "S".into(),
            HVertex::T => "T".into(),
            HVertex::Lifted { v, b } => format!("{v}_{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Base<'a> {
    Matrix(&'a Graph),
    Array(&'a AdjacencyArray),
}

impl Base<'_> {
    pub fn n(&self) -> usize {
        match self {
            Base::Matrix(g) => g.n(),
            Base::Array(a) => a.n(),
        }
    }

    fn degree(&self, u: usize) -> usize {
        match self {
            Base::Matrix(g) => g.degree(u),
            Base::Array(a) => a.degree(u),
        }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        match self {
            Base::Matrix(g) => g.edges().collect(),
            Base::Array(a) => a
                .neighbors
                .iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().filter(move |&&v| v > i + 1).map(move |&v| (i + 1, v)))
                .collect(),
        }
    }
}

/// Implicit description of H.
#[derive(Debug)]
pub struct AncillarySpec<'a> {
    pub base: Base<'a>,
    pub s_mod: usize,
    pub k: usize,
    pub coloring: Option<VertexColoring>,
    queries: AtomicU64,
}

impl Clone for AncillarySpec<'_> {
    fn clone(&self) -> Self {
        AncillarySpec {
            base: self.base,
            s_mod: self.s_mod,
            k: self.k,
            coloring: self.coloring,
            queries: AtomicU64::new(self.queries()),
        }
    }
}

impl<'a> AncillarySpec<'a> {
    pub fn new(base: Base<'a>, s_mod: usize, k: usize, coloring: Option<VertexColoring>) -> Result<Self> {
        if s_mod != 2 && s_mod != 3 {
            return Err(Error::InvalidParameter(format!("modulus {s_mod} not in {{2, 3}}")));
        }
        if coloring.is_some() && s_mod != 3 {
            return Err(Error::InvalidParameter("colouring only applies with modulus 3".into()));
        }
        if k == 0 || k > base.n() {
            return Err(Error::VertexOutOfRange { vertex: k, n: base.n() });
        }
        Ok(AncillarySpec {
            base,
            s_mod,
            k,
            coloring,
            queries: AtomicU64::new(0),
        })
    }

    pub fn matrix(g: &'a Graph, s_mod: usize, k: usize, coloring: Option<VertexColoring>) -> Result<Self> {
        Self::new(Base::Matrix(g), s_mod, k, coloring)
    }

    pub fn array(a: &'a AdjacencyArray, s_mod: usize, k: usize, coloring: Option<VertexColoring>) -> Result<Self> {
        Self::new(Base::Array(a), s_mod, k, coloring)
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Base-model queries issued so far.
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    fn charge(&self) {
        self.queries.fetch_add(1, Ordering::Relaxed);
    }

    fn check(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n() {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Direction of `{u, v}` as `(from, to)`.
    ///
    /// Canonically low label to high label; with a colouring, an edge with
    /// exactly one endpoint at `k` is reversed when the other endpoint has
    /// colour 1.
    pub fn orient_edge(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        if u == v {
            return Err(Error::InvalidEdge(u, v));
        }
        self.check(u)?;
        self.check(v)?;
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let flip = match self.coloring {
            Some(h) if lo == self.k => h.color(hi),
            Some(h) if hi == self.k => h.color(lo),
            _ => false,
        };
        Ok(if flip { (hi, lo) } else { (lo, hi) })
    }

    /// Residue shift when stepping from `u` to its neighbour `v`.
    fn shift(&self, u: usize, v: usize) -> Result<usize> {
        let (from, _) = self.orient_edge(u, v)?;
        Ok(if from == u { 1 } else { self.s_mod - 1 })
    }

    fn check_h(&self, x: HVertex) -> Result<()> {
        match x {
            HVertex::Lifted { v, b } => {
                self.check(v)?;
                if b >= self.s_mod {
                    return Err(Error::InvalidParameter(format!("residue {b} >= {}", self.s_mod)));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Adjacency in H (matrix model). At most one base query.
    pub fn edge_query(&self, x: HVertex, y: HVertex) -> Result<bool> {
        let Base::Matrix(g) = self.base else {
            return Err(Error::Precondition("edge queries need the matrix model".into()));
        };
        self.check_h(x)?;
        self.check_h(y)?;
        let k = self.k;
        Ok(match (x, y) {
            (HVertex::S, HVertex::Lifted { v, b }) | (HVertex::Lifted { v, b }, HVertex::S) => v == k && b == 0,
            (HVertex::T, HVertex::Lifted { v, b }) | (HVertex::Lifted { v, b }, HVertex::T) => v == k && b == 1,
            (HVertex::Lifted { v: u, b }, HVertex::Lifted { v, b: b2 }) => {
                if u == v {
                    return Ok(false);
                }
                self.charge();
                g.has_edge(u, v) && (b + self.shift(u, v)?) % self.s_mod == b2
            }
            _ => false,
        })
    }

    /// Degree of `x` in H; degrees are free in both models.
    pub fn degree(&self, x: HVertex) -> usize {
        match x {
            HVertex::S | HVertex::T => 1,
            HVertex::Lifted { v, b } => self.base.degree(v) + usize::from(v == self.k && b < 2),
        }
    }

    /// `j`-th neighbour of `x` in H (array model, 1-based slots). A regular
    /// slot costs exactly one base query; the special slots cost none.
    pub fn neighbor(&self, x: HVertex, j: usize) -> Result<HVertex> {
        let Base::Array(arr) = self.base else {
            return Err(Error::Precondition("neighbour queries need the array model".into()));
        };
        self.check_h(x)?;
        let degree = self.degree(x);
        if j == 0 || j > degree {
            return Err(Error::SlotOutOfRange { slot: j, degree });
        }
        Ok(match x {
            HVertex::S => HVertex::lifted(self.k, 0),
            HVertex::T => HVertex::lifted(self.k, 1),
            HVertex::Lifted { v: u, b } => {
                if j > arr.degree(u) {
                    if b == 0 {
                        HVertex::S
                    } else {
                        HVertex::T
                    }
                } else {
                    self.charge();
                    let v = arr.neighbor(u, j)?;
                    HVertex::lifted(v, (b + self.shift(u, v)?) % self.s_mod)
                }
            }
        })
    }

    pub fn h_vertex_count(&self) -> usize {
        self.s_mod * self.n() + 2
    }

    /// Label of `x` in [`AncillarySpec::build_explicit`]: `S = 1`, `T = 2`,
    /// `v_b = 3 + (v - 1) s + b`.
    pub fn explicit_label(&self, x: HVertex) -> usize {
        match x {
            HVertex::S => 1,
            HVertex::T => 2,
            HVertex::Lifted { v, b } => 3 + (v - 1) * self.s_mod + b,
        }
    }

    pub fn vertex_at(&self, label: usize) -> HVertex {
        match label {
            1 => HVertex::S,
            2 => HVertex::T,
            l => HVertex::lifted((l - 3) / self.s_mod + 1, (l - 3) % self.s_mod),
        }
    }

    pub fn h_vertices(&self) -> impl Iterator<Item = HVertex> + '_ {
        (1..=self.h_vertex_count()).map(|l| self.vertex_at(l))
    }

    /// Materialises H. Test oracle only.
    pub fn build_explicit(&self) -> Result<Graph> {
        let n = self.n();
        if n > EXPLICIT_CAP {
            return Err(Error::SizeCap {
                what: "base vertices",
                actual: n,
                limit: EXPLICIT_CAP,
            });
        }
        let mut h = Graph::new(self.h_vertex_count());
        h.add_edge(1, self.explicit_label(HVertex::lifted(self.k, 0)))?;
        h.add_edge(2, self.explicit_label(HVertex::lifted(self.k, 1)))?;
        for (u, v) in self.base.edges() {
            let (from, to) = self.orient_edge(u, v)?;
            for b in 0..self.s_mod {
                let x = self.explicit_label(HVertex::lifted(from, b));
                let y = self.explicit_label(HVertex::lifted(to, (b + 1) % self.s_mod));
                h.add_edge(x, y)?;
            }
        }
        Ok(h)
    }
}

/// Bipartite double of `h`: vertex `(u, side)` gets label `2(u - 1) + side + 1`
/// and every edge `{u, v}` yields `{(u,0),(v,1)}` and `{(v,0),(u,1)}`.
/// Returns `(H', s', t')` with `s' = (s, 0)` and `t' = (t, 1)`.
pub fn bipartite_double(h: &Graph, s: usize, t: usize) -> (Graph, usize, usize) {
    let mut d = Graph::new(2 * h.n());
    for (u, v) in h.edges() {
        d.add_edge(double_label(u, 0), double_label(v, 1)).expect("doubled edge");
        d.add_edge(double_label(v, 0), double_label(u, 1)).expect("doubled edge");
    }
    (d, double_label(s, 0), double_label(t, 1))
}

pub fn double_label(u: usize, side: usize) -> usize {
    2 * (u - 1) + side + 1
}

/// Inverse of [`double_label`]: `(u, side)`.
pub fn undouble_label(label: usize) -> (usize, usize) {
    ((label - 1) / 2 + 1, (label - 1) % 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    fn l(v: usize, b: usize) -> HVertex {
        HVertex::lifted(v, b)
    }

    #[test]
    fn orientation_examples() {
        let g = Graph::from_edges(7, &[(2, 5), (3, 7)]).unwrap();
        let spec = AncillarySpec::matrix(&g, 3, 1, None).unwrap();
        assert_eq!(spec.orient_edge(2, 5).unwrap(), (2, 5));
        assert_eq!(spec.orient_edge(7, 3).unwrap(), (3, 7));
        assert_eq!(spec.orient_edge(4, 4), Err(Error::InvalidEdge(4, 4)));

        let h = VertexColoring::family(7)
            .find(|h| h.color(2))
            .unwrap();
        let spec = AncillarySpec::matrix(&g, 3, 5, Some(h)).unwrap();
        assert_eq!(spec.orient_edge(2, 5).unwrap(), (5, 2));
        // Edges away from k never consult the colouring.
        assert_eq!(spec.orient_edge(3, 7).unwrap(), (3, 7));
    }

    #[test]
    fn special_edges_and_residues() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let spec = AncillarySpec::matrix(&g, 3, 1, None).unwrap();
        assert!(spec.edge_query(HVertex::S, l(1, 0)).unwrap());
        assert!(!spec.edge_query(HVertex::S, l(1, 1)).unwrap());
        assert!(spec.edge_query(l(1, 1), HVertex::T).unwrap());
        assert!(spec.edge_query(l(1, 0), l(2, 1)).unwrap());
        assert!(!spec.edge_query(l(1, 0), l(2, 0)).unwrap());
        assert!(!spec.edge_query(HVertex::S, HVertex::T).unwrap());
        let h = spec.build_explicit().unwrap();
        assert_eq!(h.n(), 14);
    }

    #[test]
    fn single_edge_lift() {
        let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
        let spec = AncillarySpec::matrix(&g, 3, 1, None).unwrap();
        let h = spec.build_explicit().unwrap();
        let lab = |x| spec.explicit_label(x);
        let mut want: Vec<(usize, usize)> = [
            (l(1, 0), l(2, 1)),
            (l(1, 1), l(2, 2)),
            (l(1, 2), l(2, 0)),
            (HVertex::S, l(1, 0)),
            (HVertex::T, l(1, 1)),
        ]
        .iter()
        .map(|&(x, y)| {
            let (a, b) = (lab(x), lab(y));
            (a.min(b), a.max(b))
        })
        .collect();
        want.sort();
        assert_eq!(h.edges().collect::<Vec<_>>(), want);
    }

    #[test]
    fn array_neighbors() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let arr = AdjacencyArray::from_graph(&g);
        let spec = AncillarySpec::array(&arr, 3, 1, None).unwrap();
        // Slot 1 of vertex 2 is neighbour 1.
        assert_eq!(spec.neighbor(l(2, 0), 1).unwrap(), l(1, 2));
        assert_eq!(spec.queries(), 1);
        assert_eq!(spec.neighbor(l(1, 0), 2).unwrap(), HVertex::S);
        assert_eq!(spec.neighbor(l(1, 1), 2).unwrap(), HVertex::T);
        assert_eq!(spec.neighbor(HVertex::S, 1).unwrap(), l(1, 0));
        assert!(matches!(spec.neighbor(l(1, 2), 2), Err(Error::SlotOutOfRange { .. })));
        assert!(spec.edge_query(HVertex::S, l(1, 0)).is_err());
    }

    #[test]
    fn encoding_round_trips() {
        for s in [2, 3] {
            for x in [HVertex::S, HVertex::T, l(1, 0), l(4, s - 1), l(9, 1)] {
                assert_eq!(HVertex::decode(x.encode(s), s), x);
            }
        }
    }

    #[test]
    fn doubling() {
        let edge = Graph::from_edges(2, &[(1, 2)]).unwrap();
        let (d, s, t) = bipartite_double(&edge, 1, 2);
        assert_eq!((d.n(), d.m(), s, t), (4, 2, 1, 4));

        let tri = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let (d, _, _) = bipartite_double(&tri, 1, 2);
        assert_eq!((d.n(), d.m()), (6, 6));
        assert!(d.is_connected());
        assert!(d.vertices().all(|v| d.degree(v) == 2));
        assert!(oracles::is_bipartite(&d).is_ok());
    }
}
