// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! The span-program unitary `U = (2 Lambda - I)(2 Pi_x - I)` and its
//! acceptance probability.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, c, CMat, RMat, RVec};
use crate::span::STProgram;

/// Route agreement tolerance for the two constructions of `Lambda`.
pub const ROUTE_TOL: f64 = 1e-8;

/// Largest `n` for which the big-space route is attempted.
pub const BIG_ROUTE_CAP: usize = 8;

#[derive(Clone, Debug)]
pub struct SpanUnitary {
    pub u: RMat,
    pub lambda: RMat,
    pub pi_x: RMat,
    /// `max |Lambda_direct - Lambda_via_B|`, when the second route ran.
    pub route_gap: Option<f64>,
}

/// Projector onto `ker M~`.
pub fn lambda_direct(p: &STProgram) -> RMat {
    let k = linalg::null_space_r(&p.build_m_tilde(), 1e-9);
    &k * k.transpose()
}

/// `Lambda = B^T P_{-1}(R_B R_A) B`, reading the kernel of `M'` off the
/// `-1` eigenspace of the product of the two big-space reflections.
pub fn lambda_via_factorization(p: &STProgram) -> Result<RMat> {
    let (a, b) = p.factorize()?;
    let big = a.nrows();
    let id = RMat::identity(big, big);
    let ra = (&a * a.transpose()).scale(2.0) - &id;
    let rb = (&b * b.transpose()).scale(2.0) - &id;
    let w = rb * ra;
    let minus = linalg::null_space_r(&(w + &id), 1e-9);
    let proj = &minus * minus.transpose();
    Ok(b.transpose() * proj * b)
}

/// Diagonal projector onto slot 0 and the slots of edges present in `g`.
pub fn pi_x(p: &STProgram, g: &Graph) -> Result<RMat> {
    let bits = p.input_bits(g)?;
    let mut d = RVec::zeros(p.num_slots());
    d[0] = 1.0;
    for (j, &b) in bits.iter().enumerate() {
        if b {
            d[j + 2] = 1.0;
        }
    }
    Ok(RMat::from_diagonal(&d))
}

/// Builds `U`, cross-checking the two `Lambda` routes when `n` is small.
pub fn build_u(p: &STProgram, g: &Graph) -> Result<SpanUnitary> {
    let pi = pi_x(p, g)?;
    let lambda = lambda_direct(p);
    let route_gap = if p.n >= 3 && p.n <= BIG_ROUTE_CAP {
        let other = lambda_via_factorization(p)?;
        let gap = linalg::max_abs(&(&other - &lambda));
        if gap > ROUTE_TOL {
            return Err(Error::Consistency(format!("Lambda routes disagree by {gap:.2e}")));
        }
        Some(gap)
    } else {
        None
    };
    let dim = p.num_slots();
    let id = RMat::identity(dim, dim);
    let u = (lambda.scale(2.0) - &id) * (pi.scale(2.0) - &id);
    Ok(SpanUnitary {
        u,
        lambda,
        pi_x: pi,
        route_gap,
    })
}

/// `||P_Theta |0>||^2` for a real orthogonal `U`, from the eigenspaces of
/// its symmetric part: `|theta| <= Theta` iff `cos(theta) >= cos(Theta)`.
pub fn acceptance_probability(u: &RMat, theta: f64) -> f64 {
    let sym = (u + u.transpose()).scale(0.5);
    let (vals, vecs) = linalg::sym_eigen(&sym);
    let cut = theta.min(std::f64::consts::PI).cos() - 1e-12;
    vals.iter()
        .enumerate()
        .filter(|(_, &l)| l >= cut)
        .map(|(j, _)| vecs[(0, j)] * vecs[(0, j)])
        .sum()
}

/// Result of the reduced acceptance computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedAcceptance {
    pub probability: f64,
    /// Size of the Gram matrix actually diagonalised.
    pub dim: usize,
}

/// `||P_Theta |0>||^2` without building `U`.
///
/// With `C` the available columns of `M~` (slot 0 plus the edges), the
/// principal angles between `ker M~` and the range of `Pi_x` satisfy
/// `sin^2 = eig(C^T C / n)`, because `M~ M~^T = n I - J` and the columns of
/// `C` sum to zero. The phase of each block is twice its angle. Only edges in
/// the components of `s` and `t` can couple to slot 0.
pub fn acceptance_reduced(
    n: usize,
    s: usize,
    t: usize,
    alpha: f64,
    edges: &[(usize, usize)],
    theta: f64,
) -> Result<ReducedAcceptance> {
    if alpha < 1.0 {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} < 1")));
    }
    let mut adj = vec![Vec::new(); n + 1];
    for &(x, y) in edges {
        if (x.min(y), x.max(y)) == (s.min(t), s.max(t)) {
            return Err(Error::Precondition("s and t are directly connected".into()));
        }
        adj[x].push(y);
        adj[y].push(x);
    }
    let mut keep = vec![false; n + 1];
    let mut queue = VecDeque::from([s, t]);
    keep[s] = true;
    keep[t] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !keep[v] {
                keep[v] = true;
                queue.push_back(v);
            }
        }
    }
    let cols: Vec<(usize, usize)> = edges.iter().cloned().filter(|&(x, _)| keep[x]).collect();
    let k = cols.len() + 1;
    // Gram matrix of the columns |t>-|s> / alpha and |y>-|x>.
    let entry = |a: (usize, usize), b: (usize, usize)| -> f64 {
        let sign = |v: usize, e: (usize, usize)| -> f64 {
            let (lo, hi) = (e.0.min(e.1), e.0.max(e.1));
            if v == hi {
                1.0
            } else if v == lo {
                -1.0
            } else {
                0.0
            }
        };
        let mut acc = 0.0;
        for v in [a.0, a.1] {
            acc += sign(v, a) * sign(v, b);
        }
        acc
    };
    let target = (s.min(t), s.max(t));
    let tsign = if t > s { 1.0 } else { -1.0 };
    let mut gram = RMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let ei = if i == 0 { target } else { cols[i - 1] };
            let ej = if j == 0 { target } else { cols[j - 1] };
            let mut v = entry(ei, ej);
            if i == 0 {
                v *= tsign / alpha;
            }
            if j == 0 {
                v *= tsign / alpha;
            }
            gram[(i, j)] = v / n as f64;
        }
    }
    let (vals, vecs) = linalg::sym_eigen(&gram);
    let mut prob = 0.0;
    for (j, &l) in vals.iter().enumerate() {
        let phase = 2.0 * l.clamp(0.0, 1.0).sqrt().asin();
        if phase <= theta {
            prob += vecs[(0, j)] * vecs[(0, j)];
        }
    }
    Ok(ReducedAcceptance { probability: prob, dim: k })
}

/// `v = alpha M~^T w'` for a vertex-indexed negative witness.
pub fn negative_vector(p: &STProgram, w_neg: &[f64]) -> RVec {
    let w = RVec::from_column_slice(w_neg);
    p.build_m_tilde().transpose() * w * p.alpha
}

/// Unitary DFT on `k` points, `F[j][l] = e^{2 pi i j l / k} / sqrt(k)`.
pub fn dft(k: usize) -> CMat {
    let norm = 1.0 / (k as f64).sqrt();
    CMat::from_fn(k, k, |j, l| {
        num_complex::Complex64::from_polar(norm, std::f64::consts::TAU * (j * l) as f64 / k as f64)
    })
}

/// Local reflection at `x in {s, t}` built as `W L W^†` with `W = K F`:
/// `F` spreads `|st>` uniformly over the slots touching `x`, `K` rotates
/// `|st>` into `(1/alpha)|st> + sqrt(1 - 1/alpha^2)|s̄t>`, and
/// `L = 2|st><st| - I`. Returns the operator on the slot space together with
/// its deviation from `2|a_x><a_x| - I`.
pub fn local_reflection(p: &STProgram, x: usize) -> Result<(CMat, f64)> {
    if x != p.s && x != p.t {
        return Err(Error::InvalidParameter(format!("{x} is neither s nor t")));
    }
    if p.n < 3 {
        return Err(Error::InvalidParameter("local reflections need n >= 3".into()));
    }
    let dim = p.num_slots();
    let mut local = vec![0usize];
    for (j, &(a, b)) in p.pairs().iter().enumerate() {
        if a == x || b == x {
            local.push(j + 2);
        }
    }
    let f_small = dft(local.len());
    let mut f = CMat::identity(dim, dim);
    for (r, &gr) in local.iter().enumerate() {
        for (col, &gc) in local.iter().enumerate() {
            f[(gr, gc)] = f_small[(r, col)];
        }
    }
    let ca = 1.0 / p.alpha;
    let sa = (1.0 - ca * ca).sqrt();
    let mut k = CMat::identity(dim, dim);
    k[(0, 0)] = c(ca);
    k[(1, 0)] = c(sa);
    k[(0, 1)] = c(-sa);
    k[(1, 1)] = c(ca);
    let mut l = -CMat::identity(dim, dim);
    l[(0, 0)] = c(1.0);
    let w = k * f;
    let op = &w * l * w.adjoint();
    let a = linalg::to_complex(&RMat::from_column_slice(dim, 1, p.a_vector(x).as_slice()));
    let want = (&a * a.adjoint()).scale(2.0) - CMat::identity(dim, dim);
    let dev = linalg::max_abs_c(&(&op - want));
    Ok((op, dev))
}

/// `R_B` on the big space as a negated swap: for each slot `j` with pair
/// `{x, y}`, `(|x,j>, |y,j>) -> (-|y,j>, -|x,j>)`, and `-1` on every other
/// vertex of that slot. Returns the operator and its deviation from
/// `2 B B^T - I`.
pub fn negated_swap_rb(p: &STProgram) -> Result<(RMat, f64)> {
    let (_, b) = p.factorize()?;
    let slots = p.num_slots();
    let big = p.n * slots;
    let mut r = -RMat::identity(big, big);
    for j in 0..slots {
        let (x, y) = match j {
            0 | 1 => (p.s, p.t),
            j => p.pairs()[j - 2],
        };
        let (ix, iy) = (p.big_index(x, j), p.big_index(y, j));
        r[(ix, ix)] = 0.0;
        r[(iy, iy)] = 0.0;
        r[(ix, iy)] = -1.0;
        r[(iy, ix)] = -1.0;
    }
    let want = (&b * b.transpose()).scale(2.0) - RMat::identity(big, big);
    let dev = linalg::max_abs(&(&r - want));
    Ok((r, dev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn routes_agree_and_positive_eigenvector() {
        let g = path(3);
        let p = STProgram::new(3, 1, 3, 2.0).unwrap();
        let su = build_u(&p, &g).unwrap();
        assert!(su.route_gap.unwrap() < 1e-10);
        // |u> = alpha|0> - w is fixed by U.
        let pair = p.positive_witness_from_path(&g, &[1, 2, 3]).unwrap();
        let mut uvec = -RVec::from_vec(pair.positive.unwrap());
        uvec[0] += p.alpha;
        assert!((&su.u * &uvec - &uvec).norm() < 1e-10);
        assert!(linalg::orthonormality_defect_r(&su.u) < 1e-10);

        let empty = Graph::new(4);
        let p = STProgram::new(4, 1, 4, 1.5).unwrap();
        let su = build_u(&p, &empty).unwrap();
        assert!(linalg::orthonormality_defect_r(&su.u) < 1e-10);
    }

    #[test]
    fn reduced_matches_dense() {
        for (edges, n) in [
            (vec![(1, 2), (2, 3), (3, 5)], 5),
            (vec![(1, 2), (3, 5)], 5),
            (vec![(1, 3), (2, 4), (3, 4)], 5),
            (vec![], 4),
            (vec![(1, 2), (2, 3), (1, 3), (4, 6)], 6),
        ] {
            let g = Graph::from_edges(n, &edges).unwrap();
            let p = STProgram::new(n, 1, n, 2.5).unwrap();
            let su = build_u(&p, &g).unwrap();
            for theta in [0.05, 0.3, 1.0, 2.0] {
                let dense = acceptance_probability(&su.u, theta);
                let red = acceptance_reduced(n, 1, n, 2.5, &edges, theta).unwrap();
                assert!((dense - red.probability).abs() < 1e-9, "{edges:?} {theta}: {dense} vs {red:?}");
            }
        }
    }

    #[test]
    fn acceptance_bounds() {
        let g = path(5);
        let p = STProgram::new(5, 1, 5, 2.0 * 2.0).unwrap();
        let su = build_u(&p, &g).unwrap();
        let acc = acceptance_probability(&su.u, 1e-3);
        let w1 = 4.0;
        assert!(acc >= p.alpha * p.alpha / (p.alpha * p.alpha + w1) - 1e-9);

        let mut cut = g.clone();
        cut.remove_edge(2, 3).unwrap();
        let neg = p.negative_witness_from_components(&cut).unwrap();
        let v = negative_vector(&p, neg.negative.as_ref().unwrap());
        assert!(v.norm_squared() <= 1.0 + p.alpha * p.alpha * neg.w0.unwrap() + 1e-9);
        let su = build_u(&p, &cut).unwrap();
        let theta = 1.0 / (10.0 * (neg.w0.unwrap() * w1).sqrt());
        let acc = acceptance_probability(&su.u, theta);
        assert!(acc <= (theta * v.norm() / 2.0).powi(2) + 1e-9);
        assert!(oracles::st_connected(&cut, 1, 5).is_none());
        // Theta -> 0 on a negative instance.
        assert!(acceptance_probability(&su.u, 1e-9) < 1e-12);
    }

    #[test]
    fn local_reflections() {
        for alpha in [1.0, 2.0, 3.5] {
            let p = STProgram::new(4, 1, 4, alpha).unwrap();
            for x in [1, 4] {
                let (op, dev) = local_reflection(&p, x).unwrap();
                assert!(dev < 1e-10, "alpha={alpha} x={x} dev={dev}");
                assert!(linalg::reflection_defect(&op) < 1e-10);
            }
        }
        let p = STProgram::new(4, 1, 4, 2.0).unwrap();
        assert!(local_reflection(&p, 2).is_err());
    }

    #[test]
    fn negated_swap() {
        let p = STProgram::new(4, 2, 3, 2.0).unwrap();
        let (r, dev) = negated_swap_rb(&p).unwrap();
        assert!(dev < 1e-12);
        let big = r.nrows();
        assert!(linalg::max_abs(&(&r * &r - RMat::identity(big, big))) < 1e-12);
    }
}
