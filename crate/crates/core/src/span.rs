// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Span programs and the s-t connectivity program.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, RMat, RVec};
use crate::oracles;

/// Relative singular-value threshold for rank and membership tests.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Availability {
    Always,
    Never,
    /// Available when input bit `bit` equals `value`.
    When { bit: usize, value: bool },
}

impl Availability {
    pub fn holds(self, x: &[bool]) -> Result<bool> {
        match self {
            Availability::Always => Ok(true),
            Availability::Never => Ok(false),
            Availability::When { bit, value } => x
                .get(bit)
                .map(|&b| b == value)
                .ok_or(Error::DimensionMismatch {
                    expected: bit + 1,
                    actual: x.len(),
                }),
        }
    }
}

/// Target vector and indexed input vectors with availability rules.
#[derive(Clone, Debug)]
pub struct SpanProgramInstance {
    pub dim: usize,
    pub target: RVec,
    pub inputs: Vec<(RVec, Availability)>,
}

impl SpanProgramInstance {
    pub fn new(target: RVec, inputs: Vec<(RVec, Availability)>) -> Result<Self> {
        let dim = target.len();
        for (v, _) in &inputs {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: v.len(),
                });
            }
        }
        Ok(SpanProgramInstance { dim, target, inputs })
    }

    pub fn available(&self, x: &[bool]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, (_, rule)) in self.inputs.iter().enumerate() {
            if rule.holds(x)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn columns(&self, idx: &[usize]) -> RMat {
        RMat::from_fn(self.dim, idx.len(), |r, c| self.inputs[idx[c]].0[r])
    }

    /// Accepts iff the target lies in the span of the available vectors.
    pub fn evaluate(&self, x: &[bool]) -> Result<bool> {
        Ok(self.min_norm_witness(x)?.is_some())
    }

    /// Least-norm coefficients (indexed like `inputs`, zero on unavailable
    /// slots) reproducing the target, if it is reachable.
    pub fn min_norm_witness(&self, x: &[bool]) -> Result<Option<RVec>> {
        let idx = self.available(x)?;
        let scale = self.target.norm().max(1.0);
        if idx.is_empty() {
            return Ok((self.target.norm() <= RANK_TOL * scale).then(|| RVec::zeros(self.inputs.len())));
        }
        let m = self.columns(&idx);
        let (sv, u, v) = linalg::svd(&m);
        let eps = RANK_TOL * sv.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        let mut proj = u.transpose() * &self.target;
        for (i, &x) in sv.iter().enumerate() {
            proj[i] = if x > eps { proj[i] / x } else { 0.0 };
        }
        let w = v * proj;
        let residual = (&m * &w - &self.target).norm();
        if residual > 1e-7 * scale {
            return Ok(None);
        }
        let mut full = RVec::zeros(self.inputs.len());
        for (c, &i) in idx.iter().enumerate() {
            full[i] = w[c];
        }
        Ok(Some(full))
    }
}

/// Positive and negative witnesses with their sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    /// Coefficients over the program's input slots.
    pub positive: Option<Vec<f64>>,
    /// Vertex-indexed vector (index `v - 1`).
    pub negative: Option<Vec<f64>>,
    pub w1: Option<f64>,
    pub w0: Option<f64>,
}

/// The s-t connectivity program on `n` vertices with scaling `alpha`.
///
/// Input slots are laid out as: slot 0 is `|st>` (the scaled target
/// `(t - s)/alpha`), slot 1 is `|s̄t>` (the never-available
/// `sqrt(1 - 1/alpha^2)(t - s)`), and slots `2..` are the pairs `{x < y}`
/// other than `{s, t}` in lexicographic order, carrying `|y> - |x>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct STProgram {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub alpha: f64,
    pairs: Vec<(usize, usize)>,
}

impl STProgram {
    pub fn new(n: usize, s: usize, t: usize, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
        }
        for v in [s, t] {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        if s == t {
            return Err(Error::InvalidParameter("s and t coincide".into()));
        }
        if !(alpha >= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} < 1")));
        }
        let (lo, hi) = (s.min(t), s.max(t));
        let pairs = (1..=n)
            .flat_map(|x| (x + 1..=n).map(move |y| (x, y)))
            .filter(|&p| p != (lo, hi))
            .collect();
        Ok(STProgram { n, s, t, alpha, pairs })
    }

    /// `C(n, 2) + 1`.
    pub fn num_slots(&self) -> usize {
        self.pairs.len() + 2
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Slot of pair `{x, y}`; `None` for `{s, t}` or invalid pairs.
    pub fn slot_of(&self, x: usize, y: usize) -> Option<usize> {
        let (lo, hi) = (x.min(y), x.max(y));
        if lo == 0 || hi > self.n || lo == hi || (lo, hi) == (self.s.min(self.t), self.s.max(self.t)) {
            return None;
        }
        // Index of (lo, hi) in the full lexicographic pair list.
        let before = (lo - 1) * self.n - (lo - 1) * lo / 2;
        let mut idx = before + (hi - lo - 1);
        if (self.s.min(self.t), self.s.max(self.t)) < (lo, hi) {
            idx -= 1;
        }
        Some(idx + 2)
    }

    /// `|t> - |s>`.
    pub fn tau(&self) -> RVec {
        let mut v = RVec::zeros(self.n);
        v[self.t - 1] = 1.0;
        v[self.s - 1] = -1.0;
        v
    }

    fn check_input(&self, g: &Graph) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: g.n(),
            });
        }
        if g.has_edge(self.s, self.t) {
            return Err(Error::Precondition("s and t are directly connected".into()));
        }
        Ok(())
    }

    /// Input bits, one per pair slot (bit `j` is slot `j + 2`).
    pub fn input_bits(&self, g: &Graph) -> Result<Vec<bool>> {
        self.check_input(g)?;
        Ok(self.pairs.iter().map(|&(x, y)| g.has_edge(x, y)).collect())
    }

    /// As a generic span program with target `|t> - |s>`. Input slots are
    /// indexed like [`STProgram::num_slots`]; slot 0 is unused (never
    /// available) and slot 1 holds the never-available vector when requested.
    pub fn instance(&self, with_never_available: bool) -> SpanProgramInstance {
        let tau = self.tau();
        let never = tau.scale((1.0 - 1.0 / (self.alpha * self.alpha)).sqrt());
        let mut inputs = vec![
            (RVec::zeros(self.n), Availability::Never),
            (
                if with_never_available { never } else { RVec::zeros(self.n) },
                Availability::Never,
            ),
        ];
        for (j, &(x, y)) in self.pairs.iter().enumerate() {
            let mut v = RVec::zeros(self.n);
            v[y - 1] = 1.0;
            v[x - 1] = -1.0;
            inputs.push((v, Availability::When { bit: j, value: true }));
        }
        SpanProgramInstance::new(tau, inputs).expect("consistent dimensions")
    }

    pub fn evaluate(&self, g: &Graph) -> Result<bool> {
        self.instance(true).evaluate(&self.input_bits(g)?)
    }

    /// Unit-weight witness along `path` (`s` first, `t` last).
    pub fn positive_witness_from_path(&self, g: &Graph, path: &[usize]) -> Result<WitnessPair> {
        self.check_input(g)?;
        if path.first() != Some(&self.s) || path.last() != Some(&self.t) {
            return Err(Error::InvalidWitness("path must run from s to t".into()));
        }
        let mut w = vec![0.0; self.num_slots()];
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if !g.has_edge(a, b) {
                return Err(Error::InvalidWitness(format!("{a}-{b} is not an available edge")));
            }
            let slot = self.slot_of(a, b).ok_or_else(|| Error::InvalidWitness(format!("{a}-{b}")))?;
            if w[slot] != 0.0 {
                return Err(Error::InvalidWitness(format!("edge {a}-{b} used twice")));
            }
            w[slot] = if a < b { 1.0 } else { -1.0 };
        }
        let w1 = w.iter().map(|x| x * x).sum();
        Ok(WitnessPair {
            positive: Some(w),
            negative: None,
            w1: Some(w1),
            w0: None,
        })
    }

    /// Least-norm positive witness and its size, if `s` and `t` connect.
    pub fn min_norm_positive(&self, g: &Graph, with_never_available: bool) -> Result<Option<(Vec<f64>, f64)>> {
        let w = self.instance(with_never_available).min_norm_witness(&self.input_bits(g)?)?;
        Ok(w.map(|w| {
            let size = w.norm_squared();
            (w.iter().cloned().collect(), size)
        }))
    }

    /// Indicator of `t`'s component. `W0` counts every pair `{x, y}`
    /// (including `{s, t}`) crossing the cut.
    pub fn negative_witness_from_components(&self, g: &Graph) -> Result<WitnessPair> {
        self.check_input(g)?;
        let comp = g.components();
        if comp[self.s] == comp[self.t] {
            return Err(Error::Precondition("s and t are connected".into()));
        }
        let w: Vec<f64> = (1..=self.n).map(|v| f64::from(u8::from(comp[v] == comp[self.t]))).collect();
        let tau_overlap = w[self.t - 1] - w[self.s - 1];
        if (tau_overlap - 1.0).abs() > 1e-12 {
            return Err(Error::Consistency("negative witness misses the target".into()));
        }
        for (x, y) in g.edges() {
            if w[y - 1] != w[x - 1] {
                return Err(Error::Consistency(format!("available edge {x}-{y} crosses the cut")));
            }
        }
        let mut w0 = 0.0;
        for x in 1..=self.n {
            for y in x + 1..=self.n {
                let d = w[y - 1] - w[x - 1];
                w0 += d * d;
            }
        }
        Ok(WitnessPair {
            positive: None,
            negative: Some(w),
            w1: None,
            w0: Some(w0),
        })
    }

    /// Whichever witness exists for `g`.
    pub fn witness(&self, g: &Graph) -> Result<WitnessPair> {
        match oracles::shortest_path(g, self.s, self.t) {
            Some(path) => self.positive_witness_from_path(g, &path),
            None => self.negative_witness_from_components(g),
        }
    }

    /// `M~`: `n x (C(n,2) + 1)`.
    pub fn build_m_tilde(&self) -> RMat {
        let mut m = RMat::zeros(self.n, self.num_slots());
        let a = 1.0 / self.alpha;
        let b = (1.0 - a * a).sqrt();
        m[(self.t - 1, 0)] = a;
        m[(self.s - 1, 0)] = -a;
        m[(self.t - 1, 1)] = b;
        m[(self.s - 1, 1)] = -b;
        for (j, &(x, y)) in self.pairs.iter().enumerate() {
            m[(y - 1, j + 2)] = 1.0;
            m[(x - 1, j + 2)] = -1.0;
        }
        m
    }

    /// `M' = M~ / sqrt(2(n-1))`.
    pub fn m_prime(&self) -> RMat {
        self.build_m_tilde().unscale((2.0 * (self.n as f64 - 1.0)).sqrt())
    }

    /// Row `v`, slot `j` of the big space `C^n ⊗ C^(slots)`.
    pub fn big_index(&self, v: usize, slot: usize) -> usize {
        (v - 1) * self.num_slots() + slot
    }

    /// The vector `|a_x>` over slots.
    pub fn a_vector(&self, x: usize) -> RVec {
        let mut a = RVec::zeros(self.num_slots());
        let w = 1.0 / (self.n as f64 - 1.0).sqrt();
        for (j, &(p, q)) in self.pairs.iter().enumerate() {
            if p == x || q == x {
                a[j + 2] = w;
            }
        }
        if x == self.s || x == self.t {
            a[0] = w / self.alpha;
            a[1] = w * (1.0 - 1.0 / (self.alpha * self.alpha)).sqrt();
        }
        a
    }

    /// The vector `|b_j>` over vertices.
    pub fn b_vector(&self, slot: usize) -> RVec {
        let (x, y) = match slot {
            0 | 1 => (self.s, self.t),
            j => self.pairs[j - 2],
        };
        let mut b = RVec::zeros(self.n);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        b[y - 1] = r;
        b[x - 1] = -r;
        b
    }

    /// Isometries `A = sum_u (|u> ⊗ |a_u>)<u|` and
    /// `B = sum_j (|b_j> ⊗ |j>)<j|` with `A^T B = M'`.
    pub fn factorize(&self) -> Result<(RMat, RMat)> {
        if self.n < 3 {
            return Err(Error::InvalidParameter("factorisation needs n >= 3".into()));
        }
        let slots = self.num_slots();
        let big = self.n * slots;
        let mut a = RMat::zeros(big, self.n);
        for u in 1..=self.n {
            let au = self.a_vector(u);
            for j in 0..slots {
                a[(self.big_index(u, j), u - 1)] = au[j];
            }
        }
        let mut b = RMat::zeros(big, slots);
        for j in 0..slots {
            let bj = self.b_vector(j);
            for u in 1..=self.n {
                b[(self.big_index(u, j), j)] = bj[u - 1];
            }
        }
        Ok((a, b))
    }

    /// Spectrum of `Delta = M' M'^T`.
    pub fn delta_spectrum(&self) -> Result<DeltaSpectrum> {
        if self.n < 3 {
            return Err(Error::InvalidParameter("spectrum needs n >= 3".into()));
        }
        let mp = self.m_prime();
        let delta = &mp * mp.transpose();
        let (eigenvalues, _) = linalg::sym_eigen(&delta);
        let sv = linalg::singular_values_r(&mp);
        let smax = sv.first().cloned().unwrap_or(0.0);
        let smallest_nonzero_singular = sv
            .iter()
            .cloned()
            .filter(|&s| s > RANK_TOL * smax)
            .fold(f64::INFINITY, f64::min);
        let n = self.n;
        let max_diag_dev = (0..n).map(|i| (delta[(i, i)] - 0.5).abs()).fold(0.0, f64::max);
        let off = -1.0 / (2.0 * (n as f64 - 1.0));
        let mut max_off_dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    max_off_dev = max_off_dev.max((delta[(i, j)] - off).abs());
                }
            }
        }
        let (a, b) = self.factorize()?;
        let residual = linalg::max_abs(&(a.transpose() * &b - &mp));
        Ok(DeltaSpectrum {
            n,
            alpha: self.alpha,
            eigenvalues,
            expected_nonzero: n as f64 / (2.0 * (n as f64 - 1.0)),
            smallest_nonzero_singular,
            max_diag_dev,
            max_off_diag_dev: max_off_dev,
            factorization_residual: residual,
        })
    }
}

/// Structured spectrum report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaSpectrum {
    pub n: usize,
    pub alpha: f64,
    pub eigenvalues: Vec<f64>,
    pub expected_nonzero: f64,
    pub smallest_nonzero_singular: f64,
    pub max_diag_dev: f64,
    pub max_off_diag_dev: f64,
    pub factorization_residual: f64,
}

impl DeltaSpectrum {
    /// Eigenvalues grouped within `tol`, as `(value, multiplicity)`.
    pub fn grouped(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &e in &self.eigenvalues {
            match out.last_mut() {
                Some((v, k)) if (e - *v).abs() <= tol => *k += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    }

    /// Gap between 0 and the nonzero eigenvalue.
    pub fn gap(&self) -> f64 {
        self.eigenvalues.iter().cloned().filter(|&e| e > 1e-9).fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn slot_layout() {
        let p = STProgram::new(5, 2, 4, 2.0).unwrap();
        assert_eq!(p.num_slots(), 11);
        for (j, &(x, y)) in p.pairs().iter().enumerate() {
            assert_eq!(p.slot_of(x, y), Some(j + 2));
            assert_eq!(p.slot_of(y, x), Some(j + 2));
        }
        assert_eq!(p.slot_of(2, 4), None);
        assert_eq!(p.slot_of(3, 3), None);
        assert!(STProgram::new(4, 1, 4, 0.5).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let p = STProgram::new(3, 1, 3, 2.0).unwrap();
        let path = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert!(p.evaluate(&path).unwrap());
        assert!(!p.evaluate(&Graph::new(3)).unwrap());
        let direct = Graph::from_edges(3, &[(1, 3)]).unwrap();
        assert!(p.evaluate(&direct).is_err());
    }

    #[test]
    fn m_tilde_columns() {
        let p = STProgram::new(3, 1, 3, 2.0).unwrap();
        let m = p.build_m_tilde();
        assert_eq!(m.ncols(), 4);
        assert!((m.column(0).norm() - 2f64.sqrt() / 2.0).abs() < 1e-15);
        let joint = m.column(0).norm_squared() + m.column(1).norm_squared();
        assert!((joint - 2.0).abs() < 1e-14);
        // M~ M~^T is the Laplacian of the complete graph.
        let lap = &m * m.transpose();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 } else { -1.0 };
                assert!((lap[(i, j)] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn witness_sizes() {
        let p = STProgram::new(2, 1, 2, 2.0).unwrap();
        let neg = p.negative_witness_from_components(&Graph::new(2)).unwrap();
        assert_eq!(neg.w0, Some(1.0));

        let p = STProgram::new(4, 1, 4, 2.0).unwrap();
        let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let pos = p.positive_witness_from_path(&g, &[1, 2, 3, 4]).unwrap();
        assert_eq!(pos.w1, Some(3.0));
        assert!(p.negative_witness_from_components(&g).is_err());
        assert!(p.positive_witness_from_path(&g, &[1, 3, 4]).is_err());

        // Two triangles, s in one and t in the other: 9 crossing pairs.
        let p = STProgram::new(6, 1, 6, 2.0).unwrap();
        let g = Graph::from_edges(6, &[(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        let neg = p.negative_witness_from_components(&g).unwrap();
        assert_eq!(neg.w0, Some(9.0));
    }

    #[test]
    fn a_and_b_are_unit() {
        let p = STProgram::new(5, 2, 5, 3.0).unwrap();
        for x in 1..=5 {
            assert!((p.a_vector(x).norm() - 1.0).abs() < 1e-14);
        }
        for j in 0..p.num_slots() {
            assert!((p.b_vector(j).norm() - 1.0).abs() < 1e-14);
        }
        let (a, b) = p.factorize().unwrap();
        assert!(linalg::max_abs(&(a.transpose() * &b - p.m_prime())) < 1e-12);
        assert!(linalg::orthonormality_defect_r(&a) < 1e-12);
        assert!(linalg::orthonormality_defect_r(&b) < 1e-12);
    }

    #[test]
    fn delta_examples() {
        let spec = STProgram::new(4, 1, 4, 2.0).unwrap().delta_spectrum().unwrap();
        let groups = spec.grouped(1e-9);
        assert_eq!(groups.len(), 2);
        assert!(groups[0].0.abs() < 1e-12 && groups[0].1 == 1);
        assert!((groups[1].0 - 2.0 / 3.0).abs() < 1e-12 && groups[1].1 == 3);
        let spec = STProgram::new(3, 1, 3, 2.0).unwrap().delta_spectrum().unwrap();
        assert!((spec.gap() - 0.75).abs() < 1e-12);
        assert!(spec.max_diag_dev < 1e-12 && spec.max_off_diag_dev < 1e-12);
    }

    fn graph_strategy(n: usize) -> impl Strategy<Value = Graph> {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut i = 0;
            for x in 1..=n {
                for y in x + 1..=n {
                    if bits[i] && (x, y) != (1, n) {
                        g.add_edge(x, y).unwrap();
                    }
                    i += 1;
                }
            }
            g
        })
    }

    proptest! {
        #[test]
        fn witness_duality(g in graph_strategy(6)) {
            let p = STProgram::new(6, 1, 6, 2.5).unwrap();
            let accepts = p.evaluate(&g).unwrap();
            let dist = oracles::st_connected(&g, 1, 6);
            prop_assert_eq!(accepts, dist.is_some());
            let w = p.witness(&g).unwrap();
            prop_assert!(w.positive.is_some() != w.negative.is_some());
            if let Some(d) = dist {
                let (_, w1) = p.min_norm_positive(&g, true).unwrap().unwrap();
                prop_assert!(w1 <= d as f64 + 1e-9);
                let (_, w1_plain) = p.min_norm_positive(&g, false).unwrap().unwrap();
                prop_assert!((w1 - w1_plain).abs() < 1e-9);
            } else {
                prop_assert!(w.w0.unwrap() <= 15.0);
            }
        }
    }
}
