// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact amplitude amplification from `|psi_v> = d^{-1/2} sum_i |i>|f_v(i)>`
//! to `|Phi_v> = |+_v>|phi_v>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AdjacencyArray;
use crate::linalg::{c, CVec};
use crate::sim::StateVector;

/// Schedule for exact amplification at initial success probability `1/d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AaSchedule {
    pub d: usize,
    /// Full `R_psi R_+` iterations.
    pub full: usize,
    /// Phases `(phi, varphi)` of the final generalised iterate, if one is needed.
    pub final_phases: Option<(f64, f64)>,
}

impl AaSchedule {
    pub fn iterations(&self) -> usize {
        self.full + usize::from(self.final_phases.is_some())
    }

    /// Oracle queries to produce `|Phi_v>`: one to prepare `|psi_v>`, two per
    /// iterate for the reflection about it.
    pub fn queries(&self) -> usize {
        1 + 2 * self.iterations()
    }
}

/// Two-dimensional picture: `|psi> = sin(theta)|G> + cos(theta)|B>`.
fn apply_generalized(state: [Complex64; 2], theta: f64, phi: f64, varphi: f64) -> [Complex64; 2] {
    let (sn, cs) = theta.sin_cos();
    // S_+(phi): phase on the good component.
    let v = [state[0] * Complex64::from_polar(1.0, phi), state[1]];
    // S_psi(varphi) = I - (1 - e^{i varphi}) |psi><psi|.
    let overlap = v[0] * sn + v[1] * cs;
    let k = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, varphi)) * overlap;
    [-(v[0] - k * sn), -(v[1] - k * cs)]
}

fn bad_amplitude(alpha: f64, theta: f64, phi: f64, varphi: f64) -> Complex64 {
    let st = [c(alpha.sin()), c(alpha.cos())];
    apply_generalized(st, theta, phi, varphi)[1]
}

/// Finds `(phi, varphi)` sending `sin(alpha)|G> + cos(alpha)|B>` onto `|G>`.
fn solve_final_phases(alpha: f64, theta: f64) -> Result<(f64, f64)> {
    let f = |p: f64, q: f64| bad_amplitude(alpha, theta, p, q);
    let grid = 96;
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..grid {
        for j in 0..grid {
            let p = std::f64::consts::TAU * i as f64 / grid as f64;
            let q = std::f64::consts::TAU * j as f64 / grid as f64;
            let r = f(p, q).norm_sqr();
            if r < best.2 {
                best = (p, q, r);
            }
        }
    }
    let (mut p, mut q) = (best.0, best.1);
    for _ in 0..100 {
        let r = f(p, q);
        if r.norm() < 1e-15 {
            break;
        }
        let h = 1e-7;
        let dp = (f(p + h, q) - f(p - h, q)) / (2.0 * h);
        let dq = (f(p, q + h) - f(p, q - h)) / (2.0 * h);
        let (a, b, cc, d) = (dp.re, dq.re, dp.im, dq.im);
        let det = a * d - b * cc;
        if det.abs() < 1e-14 {
            break;
        }
        p -= (d * r.re - b * r.im) / det;
        q -= (-cc * r.re + a * r.im) / det;
    }
    if f(p, q).norm() > 1e-10 {
        return Err(Error::Consistency(format!(
            "no exact final rotation found (alpha={alpha}, theta={theta})"
        )));
    }
    Ok((p.rem_euclid(std::f64::consts::TAU), q.rem_euclid(std::f64::consts::TAU)))
}

/// `floor(pi/(4 theta) - 1/2)` full iterations, then one generalised iterate
/// unless the state already sits on `|G>`.
pub fn exact_aa_schedule(d: usize) -> Result<AaSchedule> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let theta = (1.0 / (d as f64).sqrt()).asin();
    let full = (std::f64::consts::PI / (4.0 * theta) - 0.5 + 1e-9).floor().max(0.0) as usize;
    let alpha = (2 * full + 1) as f64 * theta;
    let final_phases = if alpha.cos().abs() < 1e-12 {
        None
    } else {
        Some(solve_final_phases(alpha, theta)?)
    };
    Ok(AaSchedule { d, full, final_phases })
}

/// Result of simulating the schedule on the index and neighbour registers.
#[derive(Clone, Debug)]
pub struct PreparedPhi {
    pub state: StateVector,
    pub fidelity: f64,
    pub schedule: AaSchedule,
}

/// Runs exact amplitude amplification for vertex `v` of `arr` on the space
/// `C^{d_v} ⊗ C^n` and reports the fidelity with `|+_v>|phi_v>`.
pub fn aa_prepare_phi(v: usize, arr: &AdjacencyArray) -> Result<PreparedPhi> {
    let n = arr.n();
    if v == 0 || v > n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let d = arr.degree(v);
    if d == 0 {
        return Err(Error::Precondition(format!("vertex {v} has no neighbours")));
    }
    let nbrs: Vec<usize> = (1..=d).map(|j| arr.neighbor(v, j)).collect::<Result<_>>()?;
    let idx = |i: usize, u: usize| i * n + (u - 1);
    let dim = d * n;
    let amp = c(1.0 / (d as f64).sqrt());
    let mut psi = CVec::zeros(dim);
    for (i, &u) in nbrs.iter().enumerate() {
        psi[idx(i, u)] = amp;
    }
    let mut target = CVec::zeros(dim);
    for i in 0..d {
        for &u in &nbrs {
            target[idx(i, u)] += c(1.0 / d as f64);
        }
    }
    // S_+(phi): multiply the |+> component of the index register by e^{i phi}.
    let s_plus = |x: &CVec, phi: f64| -> CVec {
        let mut proj = CVec::zeros(n);
        for i in 0..d {
            for u in 0..n {
                proj[u] += x[i * n + u];
            }
        }
        let k = (Complex64::from_polar(1.0, phi) - c(1.0)) / d as f64;
        let mut out = x.clone();
        for i in 0..d {
            for u in 0..n {
                out[i * n + u] += k * proj[u];
            }
        }
        out
    };
    let s_psi = |x: &CVec, phi: f64| -> CVec {
        let k = (Complex64::from_polar(1.0, phi) - c(1.0)) * psi.dotc(x);
        x + &psi * k
    };
    let schedule = exact_aa_schedule(d)?;
    let pi = std::f64::consts::PI;
    let mut state = psi.clone();
    for _ in 0..schedule.full {
        state = -s_psi(&s_plus(&state, pi), pi);
    }
    if let Some((p, q)) = schedule.final_phases {
        state = -s_psi(&s_plus(&state, p), q);
    }
    let fidelity = target.dotc(&state).norm_sqr();
    let basis = (0..d)
        .flat_map(|i| (1..=n).map(move |u| format!("{i}|{u}")))
        .collect();
    let norm = state.norm();
    let state = StateVector::new(basis, state / c(norm))?;
    Ok(PreparedPhi {
        state,
        fidelity,
        schedule,
    })
}

/// Queries charged for one `R_A R_B` when every vertex waits for the
/// largest degree `d_m`: two reflections, each `U S_0 U^{-1}`.
pub fn walk_query_cost(d_m: usize) -> Result<usize> {
    Ok(2 * 2 * exact_aa_schedule(d_m.max(1))?.queries())
}

/// Constant in `walk_query_cost(d_m) <= WALK_COST_CONSTANT * sqrt(d_m)`.
pub const WALK_COST_CONSTANT: f64 = 12.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn star(d: usize) -> AdjacencyArray {
        let edges: Vec<_> = (2..=d + 1).map(|u| (1, u)).collect();
        AdjacencyArray::from_graph(&Graph::from_edges(d + 1, &edges).unwrap())
    }

    #[test]
    fn closed_form_counts() {
        assert_eq!(exact_aa_schedule(1).unwrap().iterations(), 0);
        let s4 = exact_aa_schedule(4).unwrap();
        assert_eq!(s4.iterations(), 1);
        assert!(s4.final_phases.is_none());
        assert_eq!(exact_aa_schedule(64).unwrap().iterations(), 6);
        assert!(exact_aa_schedule(0).is_err());
    }

    #[test]
    fn two_dimensional_solution_is_exact() {
        for d in 1..=64 {
            let s = exact_aa_schedule(d).unwrap();
            let theta = (1.0 / (d as f64).sqrt()).asin();
            let mut st = [c(theta.sin()), c(theta.cos())];
            for _ in 0..s.full {
                st = apply_generalized(st, theta, std::f64::consts::PI, std::f64::consts::PI);
            }
            if let Some((p, q)) = s.final_phases {
                st = apply_generalized(st, theta, p, q);
            }
            assert!(st[1].norm() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn prepares_phi_on_stars() {
        for d in [1, 2, 3, 4, 7, 16] {
            let arr = star(d);
            let out = aa_prepare_phi(1, &arr).unwrap();
            assert!(out.fidelity >= 1.0 - 1e-9, "d={d}: {}", out.fidelity);
        }
        let out = aa_prepare_phi(2, &star(3)).unwrap();
        assert_eq!(out.schedule.iterations(), 0);
    }

    #[test]
    fn walk_cost_bound() {
        for d in 1..=64 {
            let q = walk_query_cost(d).unwrap() as f64;
            assert!(q <= WALK_COST_CONSTANT * (d as f64).sqrt(), "d={d}: {q}");
        }
    }
}
