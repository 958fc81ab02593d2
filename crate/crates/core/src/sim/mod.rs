// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact dense simulation of the algorithms' unitaries.

pub mod amplify;
pub mod qpe;
pub mod spanu;
pub mod walk;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};

/// Tolerance for unitarity and reflection checks.
pub const OP_TOL: f64 = 1e-10;

/// Normalised amplitudes over a labelled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub basis: Vec<String>,
    pub amps: CVec,
}

impl StateVector {
    pub fn new(basis: Vec<String>, amps: CVec) -> Result<Self> {
        if basis.len() != amps.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                actual: amps.len(),
            });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("state norm {norm} is not 1")));
        }
        Ok(StateVector { basis, amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn overlap(&self, other: &CVec) -> f64 {
        self.amps.dotc(other).norm_sqr()
    }
}

/// Square complex matrix over a labelled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub basis: Vec<String>,
    pub mat: CMat,
}

impl DenseOperator {
    pub fn new(basis: Vec<String>, mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                actual: mat.nrows(),
            });
        }
        Ok(DenseOperator { basis, mat })
    }

    /// Basis labelled `0..dim`.
    pub fn unlabelled(mat: CMat) -> Self {
        let basis = (0..mat.nrows()).map(|i| i.to_string()).collect();
        DenseOperator { basis, mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_unitary(&self) -> bool {
        linalg::unitarity_defect(&self.mat) < OP_TOL
    }

    pub fn is_reflection(&self) -> bool {
        linalg::reflection_defect(&self.mat) < OP_TOL
    }

    /// Plain-text dump: a `dim N` line, the basis labels, then one row per
    /// line as whitespace-separated `re,im` pairs.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\nbasis {}\n", self.dim(), self.basis.join(" "));
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| {
                    let z = self.mat[(r, c)];
                    format!("{:.17e},{:.17e}", z.re, z.im)
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// `2 M M^† - I` for orthonormal columns `M`.
pub fn reflect_about_columns(m: &CMat) -> Result<CMat> {
    let defect = linalg::orthonormality_defect(m);
    if defect > OP_TOL {
        return Err(Error::Precondition(format!("columns not orthonormal (defect {defect:.2e})")));
    }
    let dim = m.nrows();
    Ok(linalg::projector(m).scale(2.0) - CMat::identity(dim, dim))
}

/// Outcome of checking the three eigenspace clauses for `U = R_B R_A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralLemmaReport {
    pub dim: usize,
    pub plus_one_dim: usize,
    pub minus_one_dim: usize,
    pub rotating_pairs: usize,
    /// `max ||U x - x||` over the predicted +1 space.
    pub plus_residual: f64,
    /// `max ||U x + x||` over `B(ker A^†B)` and `A(ker B^†A)`.
    pub minus_residual: f64,
    /// Largest distance between predicted and computed eigenvalues.
    pub phase_residual: f64,
    pub ok: bool,
    pub failure: Option<String>,
}

/// Verifies Szegedy's spectral lemma for `U = R_B R_A`.
pub fn spectral_lemma_check(a: &CMat, b: &CMat) -> Result<SpectralLemmaReport> {
    let tol = 1e-8;
    let dim = a.nrows();
    if b.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: b.nrows(),
        });
    }
    let ra = reflect_about_columns(a)?;
    let rb = reflect_about_columns(b)?;
    let u = &rb * &ra;
    let ab = a.adjoint() * b;
    let cls = 1e-9;

    // Principal vectors: singular pairs of A^†B.
    let (sv, left) = if ab.nrows() > 0 && ab.ncols() > 0 {
        let (sv, left, _) = linalg::svd(&ab);
        (sv, left)
    } else {
        (Vec::new(), CMat::zeros(a.ncols(), 0))
    };
    let ones: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > 1.0 - cls).collect();
    let mids: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > cls && sv[i] <= 1.0 - cls).collect();
    let rank = ones.len() + mids.len();

    let mut plus: Vec<CVec> = ones.iter().map(|&i| a * left.column(i)).collect();
    let both = {
        let mut cat = CMat::zeros(dim, a.ncols() + b.ncols());
        cat.view_mut((0, 0), (dim, a.ncols())).copy_from(a);
        cat.view_mut((0, a.ncols()), (dim, b.ncols())).copy_from(b);
        cat
    };
    let perp = linalg::null_space(&both.adjoint(), cls);
    plus.extend(perp.column_iter().map(|c| c.into_owned()));

    let mut minus: Vec<CVec> = Vec::new();
    let ker_ab = linalg::null_space(&ab, cls);
    minus.extend(ker_ab.column_iter().map(|v| b * v));
    let ker_ba = linalg::null_space(&ab.adjoint(), cls);
    minus.extend(ker_ba.column_iter().map(|v| a * v));

    let plus_residual = plus.iter().map(|x| (&u * x - x).norm()).fold(0.0, f64::max);
    let minus_residual = minus.iter().map(|x| (&u * x + x).norm()).fold(0.0, f64::max);

    let plus_one_dim = ones.len() + perp.ncols();
    let minus_one_dim = (b.ncols() - rank) + (a.ncols() - rank);
    let mut failure = None;
    if plus_one_dim + minus_one_dim + 2 * mids.len() != dim {
        failure = Some(format!(
            "eigenspace dimensions {plus_one_dim} + {minus_one_dim} + 2*{} != {dim}",
            mids.len()
        ));
    }

    let mut expected: Vec<num_complex::Complex64> = Vec::with_capacity(dim);
    expected.extend(std::iter::repeat_n(linalg::c(1.0), plus_one_dim));
    expected.extend(std::iter::repeat_n(linalg::c(-1.0), minus_one_dim));
    for &i in &mids {
        let theta = sv[i].min(1.0).acos();
        expected.push(num_complex::Complex64::from_polar(1.0, 2.0 * theta));
        expected.push(num_complex::Complex64::from_polar(1.0, -2.0 * theta));
    }
    let (phases, _) = linalg::unitary_eigen(&u);
    let mut computed: Vec<num_complex::Complex64> =
        phases.iter().map(|&p| num_complex::Complex64::from_polar(1.0, p)).collect();
    let mut phase_residual: f64 = 0.0;
    if expected.len() == computed.len() {
        for e in &expected {
            let (idx, dist) = computed
                .iter()
                .enumerate()
                .map(|(i, z)| (i, (z - e).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            phase_residual = phase_residual.max(dist);
            computed.swap_remove(idx);
        }
    } else {
        phase_residual = f64::INFINITY;
    }

    if failure.is_none() {
        if plus_residual > tol {
            failure = Some(format!("+1 clause residual {plus_residual:.2e}"));
        } else if minus_residual > tol {
            failure = Some(format!("-1 clause residual {minus_residual:.2e}"));
        } else if phase_residual > tol {
            failure = Some(format!("phase clause residual {phase_residual:.2e}"));
        }
    }
    Ok(SpectralLemmaReport {
        dim,
        plus_one_dim,
        minus_one_dim,
        rotating_pairs: mids.len(),
        plus_residual,
        minus_residual,
        phase_residual,
        ok: failure.is_none(),
        failure,
    })
}

/// Projector onto eigenvectors of unitary `u` with phase `|theta| <= cap`.
pub fn phase_projector(u: &CMat, cap: f64) -> CMat {
    let (phases, vecs) = linalg::unitary_eigen(u);
    let dim = u.nrows();
    let mut p = CMat::zeros(dim, dim);
    for (j, &ph) in phases.iter().enumerate() {
        if ph.abs() <= cap {
            let v = vecs.column(j);
            p += &v * v.adjoint();
        }
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Effective spectral gap lemma: for `Pi_A w = 0`,
/// `||P_Theta Pi_B w|| <= (Theta/2) ||w||` where `P_Theta` is taken for
/// `U = R_B R_A`.
pub fn effective_gap_check(a: &CMat, b: &CMat, w: &CVec, theta: f64) -> Result<GapCheck> {
    let pa_w = a * (a.adjoint() * w);
    if pa_w.norm() > 1e-9 * w.norm().max(1.0) {
        return Err(Error::Precondition("w is not in the kernel of Pi_A".into()));
    }
    let u = reflect_about_columns(b)? * reflect_about_columns(a)?;
    let p = phase_projector(&u, theta);
    let lhs = (p * (b * (b.adjoint() * w))).norm();
    let rhs = theta / 2.0 * w.norm();
    Ok(GapCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, random_isometry, random_unit_vector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(dim: usize, i: usize) -> CVec {
        let mut v = CVec::zeros(dim);
        v[i] = c(1.0);
        v
    }

    #[test]
    fn reflection_examples() {
        let r = reflect_about_columns(&CMat::identity(3, 3)).unwrap();
        assert!(linalg::max_abs_c(&(r - CMat::identity(3, 3))) < 1e-15);
        let col = CMat::from_columns(&[e(3, 0)]);
        let r = reflect_about_columns(&col).unwrap();
        let want = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(-1.0), c(-1.0)]));
        assert!(linalg::max_abs_c(&(r - want)) < 1e-15);
        let bad = CMat::from_columns(&[e(3, 0).scale(2.0)]);
        assert!(reflect_about_columns(&bad).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = random_isometry(7, 3, &mut rng);
        let op = DenseOperator::unlabelled(reflect_about_columns(&q).unwrap());
        assert!(op.is_reflection() && op.is_unitary());
        assert!(op.to_text().starts_with("dim 7\n"));
    }

    #[test]
    fn spectral_lemma_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_isometry(6, 3, &mut rng);
        let same = spectral_lemma_check(&a, &a).unwrap();
        assert!(same.ok, "{same:?}");
        assert_eq!(same.plus_one_dim, 6);

        let a = CMat::from_columns(&[e(4, 0), e(4, 1)]);
        let b = CMat::from_columns(&[e(4, 2)]);
        let rep = spectral_lemma_check(&a, &b).unwrap();
        assert!(rep.ok, "{rep:?}");
        assert_eq!(rep.minus_one_dim, 3);
    }

    #[test]
    fn spectral_lemma_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let dim = rng.random_range(2..=8);
            let ka = rng.random_range(1..=dim);
            let kb = rng.random_range(1..=dim);
            let a = random_isometry(dim, ka, &mut rng);
            let b = random_isometry(dim, kb, &mut rng);
            let rep = spectral_lemma_check(&a, &b).unwrap();
            assert!(rep.ok, "{rep:?}");
        }
    }

    #[test]
    fn effective_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_isometry(8, 3, &mut rng);
        let b = random_isometry(8, 4, &mut rng);
        let w0 = random_unit_vector(8, &mut rng);
        let w = &w0 - &a * (a.adjoint() * &w0);
        for theta in [0.01, 0.3, 1.0, std::f64::consts::PI] {
            assert!(effective_gap_check(&a, &b, &w, theta).unwrap().holds);
        }
        // w orthogonal to C(B): left side vanishes.
        let bperp = &w - &b * (b.adjoint() * &w);
        if (&a.adjoint() * &bperp).norm() < 1e-12 {
            assert!(effective_gap_check(&a, &b, &bperp, 0.5).unwrap().lhs < 1e-12);
        }
        assert!(effective_gap_check(&a, &b, &w0, 0.5).is_err());
    }
}
