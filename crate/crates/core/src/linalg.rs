// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense linear-algebra helpers over `nalgebra`.

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(c)
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().map(|z| z.abs()).fold(0.0, f64::max)
}

/// `max |M^† M - I|`.
pub fn orthonormality_defect(m: &CMat) -> f64 {
    let g = m.adjoint() * m;
    max_abs_c(&(g - CMat::identity(m.ncols(), m.ncols())))
}

pub fn orthonormality_defect_r(m: &RMat) -> f64 {
    let g = m.transpose() * m;
    max_abs(&(g - RMat::identity(m.ncols(), m.ncols())))
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    orthonormality_defect(u)
}

/// `max |R - R^†|` and `max |R^2 - I|`.
pub fn reflection_defect(r: &CMat) -> f64 {
    let herm = max_abs_c(&(r - r.adjoint()));
    let sq = max_abs_c(&(r * r - CMat::identity(r.nrows(), r.ncols())));
    herm.max(sq)
}

/// Hermitian eigendecomposition with eigenvalues ascending.
pub fn herm_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(m.nrows(), m.ncols(), |r, col| eig.eigenvectors[(r, order[col])]);
    (vals, vecs)
}

/// Real symmetric eigendecomposition with eigenvalues ascending.
pub fn sym_eigen(m: &RMat) -> (Vec<f64>, RMat) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = RMat::from_fn(m.nrows(), m.ncols(), |r, col| eig.eigenvectors[(r, order[col])]);
    (vals, vecs)
}

/// Eigendecomposition of a unitary: phases in `(-pi, pi]` and a unitary
/// matrix of eigenvectors.
///
/// The Hermitian part `(U + U^†)/2` fixes `cos(theta)`; inside each of its
/// eigenspaces the anti-Hermitian part `(U - U^†)/2i` separates `+theta`
/// from `-theta`.
pub fn unitary_eigen(u: &CMat) -> (Vec<f64>, CMat) {
    let n = u.nrows();
    let h1 = (u + u.adjoint()).scale(0.5);
    let h2 = (u - u.adjoint()) * Complex64::new(0.0, -0.5);
    let (cos, v) = herm_eigen(&h1);
    let mut phases = Vec::with_capacity(n);
    let mut vecs = CMat::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cos[end] - cos[end - 1] < 1e-7 {
            end += 1;
        }
        let block = v.columns(start, end - start).into_owned();
        let inner = block.adjoint() * &h2 * &block;
        let inner = (&inner + inner.adjoint()).scale(0.5);
        let (_, w) = herm_eigen(&inner);
        let rotated = &block * w;
        for j in 0..end - start {
            let col = rotated.column(j);
            // Rayleigh quotient for the final phase.
            let z = (col.adjoint() * u * col)[(0, 0)];
            phases.push(z.arg());
            vecs.set_column(start + j, &col);
        }
        start = end;
    }
    (phases, vecs)
}

/// Thin SVD through the Hermitian dilation `[[0, M], [M^†, 0]]`, whose
/// eigenpairs are `(+-sigma, (u; +-v)/sqrt 2)`. Returns the `min(r, c)`
/// singular values in descending order with matching columns of `U` and
/// `V`; columns belonging to singular values at round-off level are not
/// meaningful.
pub fn svd<T>(m: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let (r, cols) = m.shape();
    let k = r.min(cols);
    if k == 0 {
        return (Vec::new(), DMatrix::zeros(r, 0), DMatrix::zeros(cols, 0));
    }
    let mut h = DMatrix::<T>::zeros(r + cols, r + cols);
    h.view_mut((0, r), (r, cols)).copy_from(m);
    h.view_mut((r, 0), (cols, r)).copy_from(&m.adjoint());
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..r + cols).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let root2 = T::from_real(std::f64::consts::SQRT_2);
    let sv = order[..k].iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let u = DMatrix::from_fn(r, k, |row, j| eig.eigenvectors[(row, order[j])].clone() * root2.clone());
    let v = DMatrix::from_fn(cols, k, |row, j| eig.eigenvectors[(r + row, order[j])].clone() * root2.clone());
    (sv, u, v)
}

/// Orthonormal basis of the complement of the span of orthonormal columns `q`.
fn complement<T>(q: &DMatrix<T>, n: usize) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let proj = DMatrix::<T>::identity(n, n) - q * q.adjoint();
    let eig = SymmetricEigen::new(proj);
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    DMatrix::from_fn(n, keep.len(), |row, j| eig.eigenvectors[(row, keep[j])].clone())
}

fn kept<T>(m: &DMatrix<T>, rel_tol: f64) -> (DMatrix<T>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let (sv, u, v) = svd(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..sv.len()).filter(|&i| smax > 0.0 && sv[i] > rel_tol * smax).collect();
    (u.select_columns(&keep), v.select_columns(&keep))
}

/// Orthonormal basis of the column span, dropping singular values below
/// `rel_tol` times the largest.
pub fn column_basis(m: &CMat, rel_tol: f64) -> CMat {
    kept(m, rel_tol).0
}

/// Orthonormal basis of the null space of `m`.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let v = kept(m, rel_tol).1;
    complement(&v, m.ncols())
}

pub fn null_space_r(m: &RMat, rel_tol: f64) -> RMat {
    let v = kept(m, rel_tol).1;
    complement(&v, m.ncols())
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    svd(m).0
}

pub fn singular_values_r(m: &RMat) -> Vec<f64> {
    svd(m).0
}

/// Projector `Q Q^†` onto the span of orthonormal columns `Q`.
pub fn projector(q: &CMat) -> CMat {
    q * q.adjoint()
}

/// Haar-ish random isometry `dim x k` from Gaussian columns.
pub fn random_isometry<R: rand::Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, k, |_, _| Complex64::new(gauss(rng), gauss(rng)));
    g.qr().q()
}

pub fn gauss<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(rand_distr::StandardNormal)
}

pub fn random_unit_vector<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(dim, |_, _| Complex64::new(gauss(rng), gauss(rng)));
    let norm = v.norm();
    v.unscale(norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_eigen_recovers_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = random_isometry(6, 6, &mut rng);
        let want = [0.0, 0.0, 1.0, -1.0, 2.5, std::f64::consts::PI];
        let d = CMat::from_diagonal(&CVec::from_iterator(6, want.iter().map(|&t| Complex64::from_polar(1.0, t))));
        let u = &q * d * q.adjoint();
        let (mut phases, vecs) = unitary_eigen(&u);
        assert!(unitarity_defect(&vecs) < 1e-10);
        let recon = &vecs
            * CMat::from_diagonal(&CVec::from_iterator(6, phases.iter().map(|&t| Complex64::from_polar(1.0, t))))
            * vecs.adjoint();
        assert!(max_abs_c(&(recon - &u)) < 1e-10);
        phases.iter_mut().for_each(|p| {
            if *p < -3.0 {
                *p += std::f64::consts::TAU
            }
        });
        phases.sort_by(f64::total_cmp);
        let mut want = want.to_vec();
        want.sort_by(f64::total_cmp);
        for (a, b) in phases.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "{phases:?}");
        }
    }

    #[test]
    fn null_space_and_column_basis() {
        let m = RMat::from_row_slice(2, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let k = null_space_r(&m, 1e-9);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&m * &k)) < 1e-12);
        let b = column_basis(&to_complex(&m), 1e-9);
        assert_eq!(b.ncols(), 1);
        assert_eq!(singular_values_r(&m).len(), 2);
    }

    proptest::proptest! {
        #[test]
        fn svd_reconstructs_rank_deficient(
            r in 1usize..9, c in 1usize..9, rank in 0usize..9,
            entries in proptest::collection::vec(-1i32..=1, 2 * 64),
        ) {
            let rank = rank.min(r.min(c));
            let a = RMat::from_fn(r, rank, |i, j| entries[i * 8 + j] as f64);
            let b = RMat::from_fn(rank, c, |i, j| entries[64 + i * 8 + j] as f64);
            let m = &a * &b;
            let (sv, u, v) = svd(&m);
            let smax = sv.first().copied().unwrap_or(0.0);
            let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > 1e-9 * smax.max(1.0)).collect();
            let (u, v) = (u.select_columns(&keep), v.select_columns(&keep));
            let d = RMat::from_diagonal(&RVec::from_iterator(keep.len(), keep.iter().map(|&i| sv[i])));
            proptest::prop_assert!(max_abs(&(&u * d * v.transpose() - &m)) < 1e-10);
            proptest::prop_assert!(orthonormality_defect_r(&u) < 1e-10);
            proptest::prop_assert!(orthonormality_defect_r(&v) < 1e-10);
            let k = null_space_r(&m, 1e-9);
            proptest::prop_assert_eq!(k.ncols() + keep.len(), c);
            proptest::prop_assert!(max_abs(&(&m * &k)) < 1e-10);
        }
    }
}
