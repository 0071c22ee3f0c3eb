//! Dense row-major matrix arithmetic, norms, and factorizations.
//!
//! Everything here is deterministic: fixed summation order, no internal
//! parallelism, no hidden randomness (the power-iteration fallback vector
//! comes from a fixed seed). Shape mismatches are programmer errors and
//! panic; numerical failures (non-convergence, rank deficiency) are
//! reported through [`LinalgError`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

/// Default relative tolerance for [`Matrix::spectral_norm`].
pub const SPECTRAL_TOL: f64 = 1e-9;
/// Default iteration cap for [`Matrix::spectral_norm`].
pub const SPECTRAL_MAX_ITER: usize = 10_000;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("power iteration did not converge after {iterations} iterations (best estimate {best})")]
    NonConvergence { best: f64, iterations: usize },
    #[error("matrix is rank-deficient at column {column}")]
    RankDeficient { column: usize },
}

/// Dense real matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Build from row-major data. Panics if the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "matrix data length {} does not match {}x{}",
            data.len(),
            rows,
            cols
        );
        Matrix { rows, cols, data }
    }

    /// Build from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows in matrix literal");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Standard product. Accumulation over the inner index runs in
    /// ascending order for every output entry, so results are
    /// bit-reproducible across runs.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Matrix-vector product y = M v.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    /// sqrt of the sum of squared entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest singular value via power iteration on MᵀM, at the default
    /// tolerance. Panics only on internal contract violations; the
    /// non-convergence error is propagated.
    pub fn spectral_norm(&self) -> Result<f64, LinalgError> {
        self.spectral_norm_with(SPECTRAL_TOL, SPECTRAL_MAX_ITER)
    }

    /// Power iteration on MᵀM starting from the all-ones vector, falling
    /// back to a fixed-seed random vector when the all-ones start is
    /// orthogonal to the top singular space. Returns 0 for empty or
    /// all-zero matrices.
    pub fn spectral_norm_with(&self, tol: f64, max_iter: usize) -> Result<f64, LinalgError> {
        assert!(tol > 0.0, "spectral_norm tolerance must be positive");
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        if self.data.iter().all(|&v| v == 0.0) {
            return Ok(0.0);
        }
        let ones = vec![1.0; self.cols];
        match self.power_iterate(&ones, tol, max_iter) {
            PowerResult::Converged(s) => Ok(s),
            PowerResult::Degenerate => {
                // All-ones start lies in the null space; restart from a
                // deterministic random direction.
                let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_cafe);
                let v: Vec<f64> = (0..self.cols).map(|_| rng.gen::<f64>() - 0.5).collect();
                match self.power_iterate(&v, tol, max_iter) {
                    PowerResult::Converged(s) => Ok(s),
                    PowerResult::Degenerate => Ok(0.0),
                    PowerResult::Exhausted(best) => {
                        Err(LinalgError::NonConvergence { best, iterations: max_iter })
                    }
                }
            }
            PowerResult::Exhausted(best) => {
                Err(LinalgError::NonConvergence { best, iterations: max_iter })
            }
        }
    }

    fn power_iterate(&self, start: &[f64], tol: f64, max_iter: usize) -> PowerResult {
        let mut v = start.to_vec();
        let norm = vec_norm(&v);
        if norm == 0.0 {
            return PowerResult::Degenerate;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        let mut sigma_prev = -1.0;
        for _ in 0..max_iter {
            let mv = self.matvec(&v);
            let sigma = vec_norm(&mv); // ‖Mv‖ with ‖v‖=1
            if sigma <= f64::MIN_POSITIVE.sqrt() {
                return PowerResult::Degenerate;
            }
            if (sigma - sigma_prev).abs() <= tol * sigma.max(1e-300) {
                return PowerResult::Converged(sigma);
            }
            sigma_prev = sigma;
            // v <- MᵀMv, renormalized
            let mut w = vec![0.0; self.cols];
            for i in 0..self.rows {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let m = mv[i];
                if m == 0.0 {
                    continue;
                }
                for (wj, &r) in w.iter_mut().zip(row) {
                    *wj += r * m;
                }
            }
            let wn = vec_norm(&w);
            if wn == 0.0 {
                return PowerResult::Degenerate;
            }
            for x in w.iter_mut() {
                *x /= wn;
            }
            v = w;
        }
        PowerResult::Exhausted(sigma_prev.max(0.0))
    }

    /// Thin QR factor by Householder reflections, columns sign-fixed so
    /// that R has a nonnegative diagonal (maps orthogonal inputs to
    /// themselves). Requires rows ≥ cols.
    pub fn orthogonalize(&self) -> Result<Matrix, LinalgError> {
        assert!(
            self.rows >= self.cols,
            "orthogonalize requires rows >= cols, got {}x{}",
            self.rows,
            self.cols
        );
        let m = self.rows;
        let n = self.cols;
        let mut r = self.clone();
        // Householder vectors, stored per column.
        let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut x = vec![0.0; m - k];
            for i in k..m {
                x[i - k] = r.get(i, k);
            }
            let xnorm = vec_norm(&x);
            if xnorm <= 1e-14 * (self.frobenius_norm().max(1.0)) {
                return Err(LinalgError::RankDeficient { column: k });
            }
            let alpha = if x[0] >= 0.0 { -xnorm } else { xnorm };
            let mut v = x;
            v[0] -= alpha;
            let vnorm = vec_norm(&v);
            if vnorm > 0.0 {
                for x in v.iter_mut() {
                    *x /= vnorm;
                }
                // Apply H = I - 2vvᵀ to the trailing block of R.
                for j in k..n {
                    let mut dot = 0.0;
                    for i in k..m {
                        dot += v[i - k] * r.get(i, j);
                    }
                    for i in k..m {
                        let val = r.get(i, j) - 2.0 * v[i - k] * dot;
                        r.set(i, j, val);
                    }
                }
            }
            let diag = r.get(k, k);
            if diag.abs() <= 1e-12 * xnorm.max(1.0) {
                return Err(LinalgError::RankDeficient { column: k });
            }
            reflectors.push(v);
        }
        // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I.
        let mut q = Matrix::zeros(m, n);
        for j in 0..n {
            q.set(j, j, 1.0);
        }
        for k in (0..n).rev() {
            let v = &reflectors[k];
            for j in 0..n {
                let mut dot = 0.0;
                for i in k..m {
                    dot += v[i - k] * q.get(i, j);
                }
                for i in k..m {
                    let val = q.get(i, j) - 2.0 * v[i - k] * dot;
                    q.set(i, j, val);
                }
            }
        }
        // Sign fix: flip columns where R's diagonal came out negative.
        for k in 0..n {
            if r.get(k, k) < 0.0 {
                for i in 0..m {
                    let val = -q.get(i, k);
                    q.set(i, k, val);
                }
            }
        }
        Ok(q)
    }

    /// k repeated applications of the matrix to a vector; k = 0 returns
    /// the vector unchanged.
    pub fn power_apply(&self, k: usize, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, self.cols, "power_apply requires a square matrix");
        assert_eq!(self.cols, v.len(), "power_apply dimension mismatch");
        let mut out = v.to_vec();
        for _ in 0..k {
            out = self.matvec(&out);
        }
        out
    }
}

enum PowerResult {
    Converged(f64),
    Degenerate,
    Exhausted(f64),
}

/// Euclidean norm of a slice.
pub fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Dot product of two slices.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_rows(&[vec![a, b], vec![c, d]])
    }

    #[test]
    fn matmul_identity() {
        let m = mat2(1.0, 2.0, 3.0, 4.0);
        assert_eq!(Matrix::identity(2).matmul(&m), m);
        assert_eq!(m.matmul(&Matrix::identity(2)), m);
    }

    #[test]
    fn matmul_hand_case() {
        let a = mat2(1.0, 2.0, 3.0, 4.0);
        let b = Matrix::from_rows(&[vec![1.0], vec![1.0]]);
        let c = a.matmul(&b);
        assert_eq!(c.data(), &[3.0, 7.0]);
    }

    #[test]
    fn matmul_zero_annihilates() {
        let m = mat2(1.0, 2.0, 3.0, 4.0);
        let z = Matrix::zeros(2, 2);
        assert_eq!(z.matmul(&m), Matrix::zeros(2, 2));
    }

    #[test]
    #[should_panic(expected = "matmul dimension mismatch")]
    fn matmul_shape_panics() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        let _ = a.matmul(&b);
    }

    #[test]
    fn spectral_norm_diagonal() {
        let m = mat2(3.0, 0.0, 0.0, 1.0);
        assert!((m.spectral_norm().unwrap() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn spectral_norm_zero() {
        assert_eq!(Matrix::zeros(2, 2).spectral_norm().unwrap(), 0.0);
    }

    #[test]
    fn spectral_norm_swap() {
        // eigenvalues ±1, singular values both 1
        let m = mat2(0.0, 1.0, 1.0, 0.0);
        assert!((m.spectral_norm().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spectral_norm_needs_fallback() {
        // Ones vector lies in the null space: M [1,1]ᵀ = 0 but M ≠ 0.
        let m = mat2(1.0, -1.0, 1.0, -1.0);
        let s = m.spectral_norm().unwrap();
        assert!((s - 2.0).abs() < 1e-8, "got {s}");
    }

    #[test]
    fn frobenius_345() {
        let m = Matrix::from_rows(&[vec![3.0, 4.0]]);
        assert_eq!(m.frobenius_norm(), 5.0);
        assert_eq!(Matrix::zeros(3, 3).frobenius_norm(), 0.0);
        assert!((Matrix::identity(3).frobenius_norm() - 3.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn orthogonalize_identity_fixed_point() {
        let q = Matrix::identity(3).orthogonalize().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((q.get(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonalize_diagonal() {
        let m = mat2(2.0, 0.0, 0.0, 3.0);
        let q = m.orthogonalize().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((q.get(i, j).abs() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonalize_rank_deficient_errors() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]);
        assert!(matches!(m.orthogonalize(), Err(LinalgError::RankDeficient { .. })));
    }

    #[test]
    fn orthogonalize_tall_random() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let data: Vec<f64> = (0..8).map(|_| rng.gen::<f64>() - 0.5).collect();
        let m = Matrix::from_vec(4, 2, data);
        let q = m.orthogonalize().unwrap();
        let qtq = q.transpose().matmul(&q);
        let diff = qtq.sub(&Matrix::identity(2));
        assert!(diff.frobenius_norm() < 1e-10);
    }

    #[test]
    fn power_apply_cases() {
        let swap = mat2(0.0, 1.0, 1.0, 0.0);
        assert_eq!(swap.power_apply(0, &[1.0, 2.0]), vec![1.0, 2.0]);
        assert_eq!(Matrix::identity(2).power_apply(5, &[1.0, 2.0]), vec![1.0, 2.0]);
        assert_eq!(swap.power_apply(2, &[1.0, 2.0]), vec![1.0, 2.0]);
    }

    fn random_matrix(rng: &mut ChaCha20Rng, rows: usize, cols: usize) -> Matrix {
        let data = (0..rows * cols).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        Matrix::from_vec(rows, cols, data)
    }

    #[test]
    fn spectral_le_frobenius_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 6, 4);
            let s = m.spectral_norm().unwrap();
            assert!(s <= m.frobenius_norm() + 1e-9);
        }
    }

    #[test]
    fn spectral_submultiplicative_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 10, 10);
            let b = random_matrix(&mut rng, 10, 10);
            let sab = a.matmul(&b).spectral_norm().unwrap();
            let sa = a.spectral_norm().unwrap();
            let sb = b.spectral_norm().unwrap();
            assert!(sab <= sa * sb + 1e-8, "sub-multiplicativity violated: {sab} > {sa}*{sb}");
        }
    }

    #[test]
    fn operations_are_bit_deterministic() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 7, 5);
        let b = random_matrix(&mut rng, 5, 3);
        let c1 = a.matmul(&b);
        let c2 = a.matmul(&b);
        assert_eq!(c1.data(), c2.data());
        assert_eq!(a.spectral_norm().unwrap().to_bits(), a.spectral_norm().unwrap().to_bits());
    }

    proptest! {
        #[test]
        fn transpose_involution(rows in 1usize..6, cols in 1usize..6, seed in 0u64..1000) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            prop_assert_eq!(m.transpose().transpose(), m);
        }

        #[test]
        fn orthogonalize_property(seed in 0u64..200) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 5, 3);
            if let Ok(q) = m.orthogonalize() {
                let qtq = q.transpose().matmul(&q);
                let diff = qtq.sub(&Matrix::identity(3));
                prop_assert!(diff.frobenius_norm() < 1e-10);
            }
        }
    }
}
