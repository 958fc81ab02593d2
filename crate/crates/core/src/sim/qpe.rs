// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Phase estimation and reflection through phase estimation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::sim::DenseOperator;

/// `dim * 2^t` may not exceed this.
pub const QPE_CAP: usize = 1 << 20;

/// Phases closer to zero than this count as zero.
pub const ZERO_PHASE: f64 = 1e-9;

/// Outcome distribution of phase estimation with `t` ancillas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QpeDistribution {
    pub ancillas: u32,
    /// `probabilities[y]` for register value `y`, phase `2 pi y / 2^t`.
    pub probabilities: Vec<f64>,
}

impl QpeDistribution {
    pub fn register_size(&self) -> usize {
        self.probabilities.len()
    }

    /// Phase in `(-pi, pi]` that register value `y` stands for.
    pub fn phase_of(&self, y: usize) -> f64 {
        let m = self.register_size() as f64;
        let p = std::f64::consts::TAU * y as f64 / m;
        if p > std::f64::consts::PI {
            p - std::f64::consts::TAU
        } else {
            p
        }
    }

    /// Mass on outcomes whose phase lies within `delta` of `phase`.
    pub fn mass_near(&self, phase: f64, delta: f64) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(y, _)| circular_distance(self.phase_of(*y), phase) <= delta + 1e-12)
            .map(|(_, p)| p)
            .sum()
    }
}

pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

/// `(1/M) sum_{l<M} e^{i l theta}`.
pub fn zero_amplitude(theta: f64, m: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..m {
        acc += Complex64::from_polar(1.0, l as f64 * theta);
    }
    acc / m as f64
}

fn check_cap(dim: usize, t: u32) -> Result<usize> {
    let m = 1usize.checked_shl(t).unwrap_or(usize::MAX);
    let size = dim.saturating_mul(m);
    if t >= 40 || size > QPE_CAP {
        return Err(Error::SizeCap {
            what: "phase estimation register",
            actual: size,
            limit: QPE_CAP,
        });
    }
    Ok(m)
}

/// Exact outcome distribution, from the eigendecomposition of `u`:
/// `P(y) = sum_v |<v|psi>|^2 |a_0(theta_v - 2 pi y / M)|^2`.
pub fn phase_estimation(u: &CMat, psi: &CVec, t: u32) -> Result<QpeDistribution> {
    let m = check_cap(u.nrows(), t)?;
    if psi.len() != u.nrows() {
        return Err(Error::DimensionMismatch {
            expected: u.nrows(),
            actual: psi.len(),
        });
    }
    let (phases, vecs) = linalg::unitary_eigen(u);
    let weights: Vec<f64> = (0..phases.len()).map(|j| vecs.column(j).dotc(psi).norm_sqr()).collect();
    let probabilities = (0..m)
        .map(|y| {
            let shift = std::f64::consts::TAU * y as f64 / m as f64;
            phases
                .iter()
                .zip(&weights)
                .map(|(&th, &w)| w * zero_amplitude(th - shift, m).norm_sqr())
                .sum()
        })
        .collect();
    Ok(QpeDistribution { ancillas: t, probabilities })
}

/// The same distribution by statevector simulation of the circuit: uniform
/// register, controlled powers of `u`, inverse Fourier transform.
pub fn phase_estimation_statevector(u: &CMat, psi: &CVec, t: u32) -> Result<QpeDistribution> {
    let m = check_cap(u.nrows(), t)?;
    let mut powers = Vec::with_capacity(m);
    let mut cur = psi.clone();
    for _ in 0..m {
        powers.push(cur.clone());
        cur = u * cur;
    }
    let probabilities = (0..m)
        .map(|y| {
            let mut acc = CVec::zeros(u.nrows());
            for (l, v) in powers.iter().enumerate() {
                let ph = -std::f64::consts::TAU * (l * y % m) as f64 / m as f64;
                acc += v * Complex64::from_polar(1.0, ph);
            }
            (acc.norm_squared()) / (m * m) as f64
        })
        .collect();
    Ok(QpeDistribution { ancillas: t, probabilities })
}

/// Reflection about the 1-eigenvector of `u` built from `k` rounds of phase
/// estimation with `s` ancillas each, projected back onto the all-zero
/// ancilla state.
#[derive(Clone, Debug)]
pub struct ApproxReflection {
    pub operator: DenseOperator,
    pub ancillas_per_round: u32,
    pub rounds: u32,
    pub fixed_vector: CVec,
    /// Smallest nonzero eigenphase magnitude.
    pub gap: f64,
}

impl ApproxReflection {
    /// `||(R + I)|phi>|0>||` on the full ancilla space, for `phi`.
    pub fn residual(&self, phi: &CVec, u: &CMat) -> f64 {
        let (phases, vecs) = linalg::unitary_eigen(u);
        let m = 1usize << self.ancillas_per_round;
        let mut acc = 0.0;
        for (j, &th) in phases.iter().enumerate() {
            if th.abs() < ZERO_PHASE {
                // R fixes the 1-eigenvector, so (R + I) doubles it.
                acc += 4.0 * vecs.column(j).dotc(phi).norm_sqr();
                continue;
            }
            let a0 = zero_amplitude(th, m).norm_sqr();
            acc += 4.0 * vecs.column(j).dotc(phi).norm_sqr() * a0.powi(self.rounds as i32);
        }
        acc.sqrt()
    }
}

/// Builds the reflection for `k >= 1` rounds.
pub fn approx_reflection(u: &CMat, k: u32) -> Result<ApproxReflection> {
    if k == 0 {
        return Err(Error::InvalidParameter("need k >= 1".into()));
    }
    let (phases, vecs) = linalg::unitary_eigen(u);
    let zero: Vec<usize> = (0..phases.len()).filter(|&j| phases[j].abs() < ZERO_PHASE).collect();
    if zero.len() != 1 {
        return Err(Error::Precondition(format!(
            "expected a unique 1-eigenvector, found {}",
            zero.len()
        )));
    }
    let gap = phases
        .iter()
        .filter(|p| p.abs() >= ZERO_PHASE)
        .map(|p| p.abs())
        .fold(std::f64::consts::PI, f64::min);
    let s = ((1.0 / gap).log2().ceil().max(0.0) as u32) + 3;
    let m = 1usize << s;
    let dim = u.nrows();
    let mut r = CMat::zeros(dim, dim);
    for (j, &th) in phases.iter().enumerate() {
        let coeff = if j == zero[0] {
            1.0
        } else {
            -1.0 + 2.0 * zero_amplitude(th, m).norm_sqr().powi(k as i32)
        };
        let v = vecs.column(j);
        r += (v * v.adjoint()) * Complex64::new(coeff, 0.0);
    }
    Ok(ApproxReflection {
        operator: DenseOperator::unlabelled(r),
        ancillas_per_round: s,
        rounds: k,
        fixed_vector: vecs.column(zero[0]).into_owned(),
        gap,
    })
}
