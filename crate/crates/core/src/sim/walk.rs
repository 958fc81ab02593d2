// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! The s-t connectivity quantum walk on a bipartite graph.
//!
//! The walk lives on `span{|e_s>} ⊕ span{|e> : e in E}`, one basis vector
//! per edge. Each edge has exactly one endpoint on side A and one on side B,
//! so `R_A = ⊕_{u in A} D_u` and `R_B = ⊕_{u in B} D_u` act blockwise.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ancillary::{AncillarySpec, HVertex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, RMat, RVec};
use crate::sim::amplify;
use crate::sim::qpe::{zero_amplitude, ZERO_PHASE};

/// Default constants for the walk.
pub const DEFAULT_WALK_WEIGHT: f64 = 3.0;
pub const DEFAULT_C_W: f64 = 8.0;
pub const DENSE_CROSS_CHECK_CAP: usize = 400;

#[derive(Clone, Debug)]
pub struct WalkSpace {
    pub graph: Graph,
    pub s: usize,
    /// Marked vertex, if it exists in this space.
    pub t: Option<usize>,
    /// Walk weight `C`.
    pub weight: f64,
    /// Length guess `d`.
    pub d: usize,
    /// Vertex count used in the step count; at least the graph's size.
    pub n_total: usize,
    edges: Vec<(usize, usize)>,
    edge_index: BTreeMap<(usize, usize), usize>,
    side: Vec<u8>,
}

impl WalkSpace {
    pub fn new(graph: Graph, s: usize, t: Option<usize>, weight: f64, d: usize, n_total: usize) -> Result<Self> {
        graph.check_vertex(s)?;
        if let Some(t) = t {
            graph.check_vertex(t)?;
            if t == s {
                return Err(Error::InvalidParameter("s and t coincide".into()));
            }
        }
        if !(weight > 0.0) {
            return Err(Error::InvalidParameter(format!("walk weight {weight} must be positive")));
        }
        let side = crate::oracles::is_bipartite(&graph)
            .map_err(|_| Error::Precondition("walk graph must be bipartite".into()))?;
        // Put s on side A.
        let comp = graph.components();
        let side: Vec<u8> = (0..=graph.n())
            .map(|v| {
                if v > 0 && comp[v] == comp[s] {
                    side[v] ^ side[s]
                } else if v > 0 {
                    side[v]
                } else {
                    0
                }
            })
            .collect();
        let edges: Vec<(usize, usize)> = graph.edges().collect();
        let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i + 1)).collect();
        Ok(WalkSpace {
            n_total: n_total.max(graph.n()),
            graph,
            s,
            t,
            weight,
            d,
            edges,
            edge_index,
            side,
        })
    }

    /// `|E| + 1`.
    pub fn dim(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn side(&self, v: usize) -> u8 {
        self.side[v]
    }

    /// Basis index of edge `{u, v}`; index 0 is `|e_s>`.
    pub fn edge_slot(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        std::iter::once("s|e_s".to_string())
            .chain(self.edges.iter().map(|(u, v)| format!("{u}|{v}")))
            .collect()
    }

    /// Basis slots touched by `D_v`, the dangling slot last for `s`.
    pub fn local_slots(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .graph
            .neighbors(v)
            .iter()
            .map(|&u| self.edge_slot(u, v).expect("edge present"))
            .collect();
        if v == self.s {
            out.push(0);
        }
        out
    }

    /// `zeta_v` on its local slots, or `None` when `D_v = I`.
    pub fn zeta(&self, v: usize) -> Option<Vec<(usize, f64)>> {
        if Some(v) == self.t {
            return None;
        }
        let slots = self.local_slots(v);
        let deg = self.graph.degree(v);
        if v == self.s {
            let cd = self.weight * self.d as f64;
            let norm = (1.0 + deg as f64 * cd).sqrt();
            return Some(
                slots
                    .into_iter()
                    .map(|j| (j, if j == 0 { 1.0 / norm } else { cd.sqrt() / norm }))
                    .collect(),
            );
        }
        if deg == 0 {
            return None;
        }
        let a = 1.0 / (deg as f64).sqrt();
        Some(slots.into_iter().map(|j| (j, a)).collect())
    }

    /// Step count `ceil(c_w sqrt(d n))`.
    pub fn steps(&self, c_w: f64) -> usize {
        (c_w * ((self.d * self.n_total) as f64).sqrt()).ceil() as usize
    }

    fn reflect_side(&self, side: u8, x: &mut [f64]) {
        for v in self.graph.vertices() {
            if self.side[v] != side {
                continue;
            }
            if let Some(z) = self.zeta(v) {
                let dot: f64 = z.iter().map(|&(j, a)| a * x[j]).sum();
                for &(j, a) in &z {
                    x[j] -= 2.0 * a * dot;
                }
            }
        }
    }

    /// One application of `R_A R_B`.
    pub fn step(&self, x: &mut [f64]) {
        self.reflect_side(1, x);
        self.reflect_side(0, x);
    }

    /// Unit flow from `s` to `t` along `path` plus `|e_s>`: a 1-eigenvector.
    pub fn flow_vector(&self, path: &[usize]) -> Result<RVec> {
        let t = self.t.ok_or_else(|| Error::Precondition("no marked vertex".into()))?;
        if path.first() != Some(&self.s) || path.last() != Some(&t) {
            return Err(Error::InvalidWitness("flow path must run from s to t".into()));
        }
        let mut f = RVec::zeros(self.dim());
        f[0] = 1.0;
        let w = 1.0 / (self.weight * self.d as f64).sqrt();
        for (i, pair) in path.windows(2).enumerate() {
            let j = self
                .edge_slot(pair[0], pair[1])
                .ok_or_else(|| Error::InvalidWitness(format!("{}-{} missing", pair[0], pair[1])))?;
            f[j] = if i % 2 == 0 { -w } else { w };
        }
        Ok(f)
    }
}

/// `D_v` as a dense operator on the walk space.
pub fn walk_diffusion(v: usize, w: &WalkSpace) -> Result<RMat> {
    w.graph.check_vertex(v)?;
    let dim = w.dim();
    let mut d = RMat::identity(dim, dim);
    if let Some(z) = w.zeta(v) {
        for &(i, a) in &z {
            for &(j, b) in &z {
                d[(i, j)] -= 2.0 * a * b;
            }
        }
    }
    Ok(d)
}

/// `U S_0 U^{-1}` for a real Householder `U` with `U|first> = |zeta>`.
fn householder_diffusion(dim: usize, z: &[(usize, f64)]) -> RMat {
    let first = z[0].0;
    let mut zeta = RVec::zeros(dim);
    for &(j, a) in z {
        zeta[j] = a;
    }
    let mut e = RVec::zeros(dim);
    e[first] = 1.0;
    let wv = &e - &zeta;
    let u = if wv.norm() < 1e-14 {
        RMat::identity(dim, dim)
    } else {
        RMat::identity(dim, dim) - (&wv * wv.transpose()) * (2.0 / wv.norm_squared())
    };
    let mut s0 = RMat::identity(dim, dim);
    s0[(first, first)] = -1.0;
    &u * s0 * u.transpose()
}

/// Dense `R_A`, `R_B` and the query charge per `R_A R_B`.
#[derive(Clone, Debug)]
pub struct WalkReflections {
    pub ra: RMat,
    pub rb: RMat,
    pub queries: usize,
    /// `max |R - R_direct|` over both reflections.
    pub route_gap: f64,
}

pub fn build_ra_rb_walk(w: &WalkSpace, d_m: usize) -> Result<WalkReflections> {
    let dim = w.dim();
    if dim > DENSE_CROSS_CHECK_CAP {
        return Err(Error::SizeCap {
            what: "dense walk space",
            actual: dim,
            limit: DENSE_CROSS_CHECK_CAP,
        });
    }
    let mut ra = RMat::identity(dim, dim);
    let mut rb = RMat::identity(dim, dim);
    let mut ra_direct = RMat::identity(dim, dim);
    let mut rb_direct = RMat::identity(dim, dim);
    for v in w.graph.vertices() {
        let Some(z) = w.zeta(v) else { continue };
        let via = householder_diffusion(dim, &z);
        let direct = walk_diffusion(v, w)?;
        if w.side(v) == 0 {
            ra = via * ra;
            ra_direct = direct * ra_direct;
        } else {
            rb = via * rb;
            rb_direct = direct * rb_direct;
        }
    }
    let gap = linalg::max_abs(&(&ra - &ra_direct)).max(linalg::max_abs(&(&rb - &rb_direct)));
    Ok(WalkReflections {
        ra,
        rb,
        queries: amplify::walk_query_cost(d_m)?,
        route_gap: gap,
    })
}

/// Outcome of the detection statistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkOutcome {
    /// Exact probability of a zero-phase reading.
    pub probability: f64,
    /// Fraction of `trials` simulated readings that were zero-phase.
    pub estimate: f64,
    pub trials: usize,
    /// Applications of `R_A R_B` per reading.
    pub steps: usize,
    /// Verdict: an s-t path of length at most `d` is present.
    pub path: bool,
}

/// Probability that phase estimation on `R_A R_B` with a `T`-point register,
/// started in `|e_s>`, reads phase zero: `||T^{-1} sum_{k<T} U^k |e_s>||^2`.
pub fn zero_phase_probability(w: &WalkSpace, steps: usize) -> f64 {
    if steps == 0 {
        return 1.0;
    }
    let mut x = vec![0.0; w.dim()];
    x[0] = 1.0;
    let mut acc = x.clone();
    for _ in 1..steps {
        w.step(&mut x);
        for (a, b) in acc.iter_mut().zip(&x) {
            *a += b;
        }
    }
    acc.iter().map(|a| a * a).sum::<f64>() / (steps * steps) as f64
}

/// The same probability from the eigendecomposition of the dense walk.
pub fn zero_phase_probability_dense(w: &WalkSpace, steps: usize) -> Result<f64> {
    let refl = build_ra_rb_walk(w, 1)?;
    let u = linalg::to_complex(&(&refl.ra * &refl.rb));
    let (phases, vecs) = linalg::unitary_eigen(&u);
    let mut p = 0.0;
    for (j, &th) in phases.iter().enumerate() {
        let weight = vecs[(0, j)].norm_sqr();
        let f = if th.abs() < ZERO_PHASE {
            1.0
        } else {
            zero_amplitude(th, steps).norm_sqr()
        };
        p += weight * f;
    }
    Ok(p)
}

/// Runs the detection statistic with `trials` simulated readings.
pub fn walk_detect(w: &WalkSpace, c_w: f64, trials: usize, seed: u64) -> Result<WalkOutcome> {
    let m = w.edges.len();
    if m > w.n_total {
        return Err(Error::DenseRegime {
            edges: m,
            vertices: w.n_total,
        });
    }
    if w.d == 0 {
        return Ok(WalkOutcome {
            probability: 0.0,
            estimate: 0.0,
            trials,
            steps: 0,
            path: false,
        });
    }
    let steps = w.steps(c_w);
    let probability = zero_phase_probability(w, steps).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..trials).filter(|_| rng.random_bool(probability)).count();
    let estimate = if trials == 0 { probability } else { hits as f64 / trials as f64 };
    Ok(WalkOutcome {
        probability,
        estimate,
        trials,
        steps,
        path: estimate > 0.5,
    })
}

/// Component of `s' = (S, 0)` in the bipartite double of H, explored through
/// neighbour queries, with the parity bridge `(T,0) - (T,1)` added so that
/// `t' = (T, 1)` is reachable whenever T is.
#[derive(Clone, Debug)]
pub struct DoubledComponent {
    pub graph: Graph,
    pub s: usize,
    pub t: Option<usize>,
    /// `(H vertex, side)` for each local label (index `label - 1`).
    pub vertices: Vec<(HVertex, u8)>,
    /// `|V(H')| = 2 |V(H)|`.
    pub n_total: usize,
    pub max_degree: usize,
}

pub fn doubled_component(spec: &AncillarySpec<'_>) -> Result<DoubledComponent> {
    let start = (HVertex::S, 0u8);
    let mut seen: BTreeMap<(HVertex, u8), ()> = BTreeMap::new();
    let mut adj: Vec<((HVertex, u8), (HVertex, u8))> = Vec::new();
    let mut queue = VecDeque::from([start]);
    seen.insert(start, ());
    while let Some((x, side)) = queue.pop_front() {
        let mut nbrs = Vec::new();
        for j in 1..=spec.degree(x) {
            nbrs.push((spec.neighbor(x, j)?, 1 - side));
        }
        if x == HVertex::T {
            nbrs.push((HVertex::T, 1 - side));
        }
        for y in nbrs {
            if (x, side) < y {
                adj.push(((x, side), y));
            }
            if seen.insert(y, ()).is_none() {
                queue.push_back(y);
            }
        }
    }
    let vertices: Vec<(HVertex, u8)> = seen.keys().copied().collect();
    let label: BTreeMap<(HVertex, u8), usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    let mut graph = Graph::new(vertices.len());
    for (a, b) in adj {
        let (x, y) = (label[&a], label[&b]);
        if !graph.has_edge(x, y) {
            graph.add_edge(x, y)?;
        }
    }
    let max_degree = graph.vertices().map(|v| graph.degree(v)).max().unwrap_or(0);
    Ok(DoubledComponent {
        s: label[&start],
        t: label.get(&(HVertex::T, 1)).copied(),
        n_total: 2 * spec.h_vertex_count(),
        graph,
        vertices,
        max_degree,
    })
}
