//! Small dense linear algebra: symmetric eigenproblems by cyclic Jacobi,
//! Cholesky factors and the whitened generalized eigenproblem `det(H - λE) = 0`.

use std::ops::{Index, IndexMut};

use crate::scalar::Real;
use crate::{Error, Result};

/// Jacobi sweep limit.
pub const MAX_SWEEPS: usize = 100;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} columns, vector of {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `self · selfᵀ`.
    pub fn gram(&self) -> SymMatrix<T> {
        SymMatrix::from_fn(self.rows, |i, j| dot(self.row(i), self.row(j)))
    }

    /// `selfᵀ · self`.
    pub fn cross(&self) -> SymMatrix<T> {
        let mut out = SymMatrix::zeros(self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                for j in 0..=i {
                    out.data[i * self.cols + j] += row[i] * row[j];
                }
            }
        }
        out.mirror_lower();
        out
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Symmetric matrix with full storage; constructors guarantee symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![T::one(); dim])
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.data[i * d.len() + i] = x;
        }
        m
    }

    /// Entries are taken from `f(i, j)` with `i >= j` and mirrored.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m.mirror_lower();
        m
    }

    /// Fails unless `rows` is square and symmetric to within `1e-12`
    /// relative to the largest entry.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        Self::try_from_matrix(&m)
    }

    pub fn try_from_matrix(m: &Matrix<T>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not square",
                m.rows(),
                m.cols()
            )));
        }
        if m.rows() == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let scale = m.as_slice().iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) * scale;
        let n = m.rows();
        for i in 0..n {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > tol {
                    return Err(Error::DimensionMismatch(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)]) * T::lit(0.5)))
    }

    /// `a·a^T` for a single vector.
    pub fn outer(a: &[T]) -> Self {
        Self::from_fn(a.len(), |i, j| a[i] * a[j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix {
            rows: self.dim,
            cols: self.dim,
            data: self.data.clone(),
        }
    }

    pub fn add(&self, other: &SymMatrix<T>) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymMatrix<T>) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, k: T) -> Self {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * k).collect(),
        }
    }

    fn zip(&self, other: &SymMatrix<T>, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("dims {} and {}", self.dim, other.dim)));
        }
        Ok(SymMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// `Tᵀ · self · T`.
    pub fn congruence(&self, t: &Matrix<T>) -> Result<Self> {
        let m = t.transpose().matmul(&self.to_matrix())?.matmul(t)?;
        Ok(Self::from_fn(m.rows(), |i, j| (m[(i, j)] + m[(j, i)]) * T::lit(0.5)))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    fn mirror_lower(&mut self) {
        let n = self.dim;
        for i in 0..n {
            for j in 0..i {
                self.data[j * n + i] = self.data[i * n + j];
            }
        }
    }
}

impl<T> Index<(usize, usize)> for SymMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Eigen-decomposition with eigenvalues in descending order and the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> Eigen<T> {
    pub fn vector(&self, k: usize) -> Vec<T> {
        self.vectors.column(k)
    }
}

/// Cyclic Jacobi eigen-decomposition.
pub fn sym_eigen<T: Real>(a: &SymMatrix<T>) -> Result<Eigen<T>> {
    let n = a.dim;
    let mut m = a.to_matrix();
    let mut v = Matrix::identity(n);
    let norm = a.frobenius();
    if !norm.is_finite() {
        return Err(Error::domain("sym_eigen", "matrix has non-finite entries"));
    }
    let target = T::epsilon() * norm;
    let mut converged = n <= 1 || norm == T::zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = if theta.is_infinite() {
                    T::one() / (T::lit(2.0) * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::convergence(
            "sym_eigen",
            format!("no convergence in {MAX_SWEEPS} sweeps"),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    Ok(Eigen {
        values: order.iter().map(|&i| m[(i, i)]).collect(),
        vectors: Matrix::from_fn(n, n, |r, c| v[(r, order[c])]),
    })
}

/// Lower-triangular `L` with `L Lᵀ = A`.
pub fn cholesky<T: Real>(a: &SymMatrix<T>) -> Result<Matrix<T>> {
    let n = a.dim;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > T::zero()) {
            return Err(Error::NotPositiveDefinite {
                index: j,
                pivot: d.as_f64(),
            });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves `L x = b` for lower-triangular `L`.
pub fn solve_lower<T: Real>(l: &Matrix<T>, b: &[T]) -> Vec<T> {
    let n = l.rows();
    let mut x = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// `L⁻¹ H L⁻ᵀ` for a lower-triangular factor `L`.
pub fn whiten<T: Real>(h: &SymMatrix<T>, l: &Matrix<T>) -> Result<SymMatrix<T>> {
    let n = h.dim;
    if l.rows() != n || l.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "H is {n}x{n}, factor is {}x{}",
            l.rows(),
            l.cols()
        )));
    }
    // Y = L⁻¹ H column by column, then W = L⁻¹ Yᵀ.
    let mut y = Matrix::zeros(n, n);
    for j in 0..n {
        let col = solve_lower(l, &h.to_matrix().column(j));
        for i in 0..n {
            y[(i, j)] = col[i];
        }
    }
    let mut w = Matrix::zeros(n, n);
    for j in 0..n {
        let col = solve_lower(l, y.row(j));
        for i in 0..n {
            w[(i, j)] = col[i];
        }
    }
    Ok(SymMatrix::from_fn(n, |i, j| (w[(i, j)] + w[(j, i)]) * T::lit(0.5)))
}

/// All roots of `det(H - λE) = 0`, descending.
pub fn generalized_eigenvalues<T: Real>(h: &SymMatrix<T>, e: &SymMatrix<T>) -> Result<Vec<T>> {
    if h.dim != e.dim {
        return Err(Error::DimensionMismatch(format!(
            "H is {0}x{0}, E is {1}x{1}",
            h.dim, e.dim
        )));
    }
    let l = cholesky(e)?;
    Ok(sym_eigen(&whiten(h, &l)?)?.values)
}

/// Largest root of `det(H - λE) = 0`, i.e. the largest eigenvalue of `E⁻¹H`.
pub fn largest_generalized_eig<T: Real>(h: &SymMatrix<T>, e: &SymMatrix<T>) -> Result<T> {
    Ok(generalized_eigenvalues(h, e)?[0])
}

/// Symmetric inverse square root `A^{-1/2}` of a positive definite matrix.
pub fn inv_sqrt<T: Real>(a: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    let eig = sym_eigen(a)?;
    let floor = T::epsilon() * eig.values[0].abs() * T::lit(a.dim as f64);
    for (i, &v) in eig.values.iter().enumerate() {
        if !(v > floor) {
            return Err(Error::NotPositiveDefinite {
                index: i,
                pivot: v.as_f64(),
            });
        }
    }
    let n = a.dim;
    let inv_root: Vec<T> = eig.values.iter().map(|&v| T::one() / v.sqrt()).collect();
    Ok(SymMatrix::from_fn(n, |i, j| {
        (0..n).fold(T::zero(), |acc, k| {
            acc + eig.vectors[(i, k)] * inv_root[k] * eig.vectors[(j, k)]
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, rng: &mut ChaCha8Rng) -> SymMatrix<f64> {
        SymMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_pd(n: usize, rng: &mut ChaCha8Rng) -> SymMatrix<f64> {
        let x = Matrix::from_fn(n + 3, n, |_, _| rng.random_range(-1.0..1.0));
        x.cross().add(&SymMatrix::identity(n).scale(0.1)).unwrap()
    }

    fn reconstruct(e: &Eigen<f64>) -> Matrix<f64> {
        let n = e.values.len();
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| e.vectors[(i, k)] * e.values[k] * e.vectors[(j, k)])
                .sum()
        })
    }

    fn max_abs_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn trivial_spectra() {
        let e = sym_eigen(&SymMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        let mut d = vec![0.0; 4];
        d[0] = 7.5;
        let e = sym_eigen(&SymMatrix::diagonal(&d)).unwrap();
        assert_eq!(e.values, vec![7.5, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 5, 12] {
            let a = random_sym(n, &mut rng);
            let e = sym_eigen(&a).unwrap();
            assert!(max_abs_diff(&reconstruct(&e), &a.to_matrix()) < 1e-9);
            let vtv = e.vectors.transpose().matmul(&e.vectors).unwrap();
            assert!(max_abs_diff(&vtv, &Matrix::identity(n)) < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            for k in 0..n {
                let v = e.vector(k);
                let av = a.to_matrix().mul_vec(&v).unwrap();
                let resid: f64 = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - e.values[k] * y).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(resid <= 1e-10 * a.frobenius());
            }
        }
    }

    #[test]
    fn single_precision_works() {
        let a: SymMatrix<f32> = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eigen(&a).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-6);
        assert!((e.values[1] - 1.0).abs() < 1e-6);
        let l = cholesky(&a).unwrap();
        assert!((l[(1, 1)] - 1.5f32.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn cholesky_examples() {
        let l = cholesky(&SymMatrix::<f64>::identity(4)).unwrap();
        assert_eq!(l, Matrix::identity(4));
        let l = cholesky(&SymMatrix::diagonal(&[4.0])).unwrap();
        assert_eq!(l[(0, 0)], 2.0);
        let rho = 0.3;
        let s = SymMatrix::from_fn(6, |i, j| if i == j { 1.0 } else { rho });
        let l = cholesky(&s).unwrap();
        let llt = l.matmul(&l.transpose()).unwrap();
        assert!(max_abs_diff(&llt, &s.to_matrix()) <= 1e-10 * s.frobenius());
        for i in 0..6 {
            for j in (i + 1)..6 {
                assert_eq!(l[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&a), Err(Error::NotPositiveDefinite { index: 1, .. })));
        assert!(matches!(
            largest_generalized_eig(&SymMatrix::identity(2), &a),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn generalized_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = random_pd(4, &mut rng);
        assert!((largest_generalized_eig(&e, &e).unwrap() - 1.0).abs() < 1e-12);
        let got: f64 = largest_generalized_eig(&SymMatrix::diagonal(&[3.0]), &SymMatrix::diagonal(&[4.0])).unwrap();
        assert!((got - 0.75).abs() < 1e-15);
        assert!(SymMatrix::<f64>::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).is_err());
    }

    /// det(H − λE) by Gaussian elimination with partial pivoting.
    fn det_pencil(h: &SymMatrix<f64>, e: &SymMatrix<f64>, lambda: f64) -> f64 {
        let n = h.dim();
        let mut m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| h[(i, j)] - lambda * e[(i, j)]).collect())
            .collect();
        let mut det = 1.0;
        for c in 0..n {
            let p = (c..n)
                .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap())
                .unwrap();
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let piv = m[c][c];
            det *= piv;
            for r in (c + 1)..n {
                let f = m[r][c] / piv;
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
        det
    }

    #[test]
    fn matches_determinant_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let h = random_pd(4, &mut rng);
        let e = random_pd(4, &mut rng);
        let got = largest_generalized_eig(&h, &e).unwrap();
        // Scan down from a bound above every root for the first sign change,
        // then bisect.
        let mut hi = h.trace() / 0.01 + 1.0;
        let step = hi / 20_000.0;
        let s_hi = det_pencil(&h, &e, hi).signum();
        let mut lo = hi - step;
        while det_pencil(&h, &e, lo).signum() == s_hi {
            hi = lo;
            lo -= step;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if det_pencil(&h, &e, mid).signum() == s_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((got - 0.5 * (lo + hi)).abs() < 1e-8, "{got} vs {}", 0.5 * (lo + hi));
    }

    #[test]
    fn inverse_square_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_pd(5, &mut rng);
        let r = inv_sqrt(&a).unwrap();
        let prod = r
            .to_matrix()
            .matmul(&a.to_matrix())
            .unwrap()
            .matmul(&r.to_matrix())
            .unwrap();
        assert!(max_abs_diff(&prod, &Matrix::identity(5)) < 1e-10);
    }

    proptest! {
        #[test]
        fn congruence_invariance(seed in 0u64..10_000, n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_pd(n, &mut rng);
            let e = random_pd(n, &mut rng);
            let t = Matrix::from_fn(n, n, |i, j| if i == j { 2.0 } else { 0.0 } + rng.random_range(-0.5..0.5));
            let base = largest_generalized_eig(&h, &e).unwrap();
            let moved = largest_generalized_eig(&h.congruence(&t).unwrap(), &e.congruence(&t).unwrap()).unwrap();
            prop_assert!((moved - base).abs() <= 1e-9 * base);
        }

        #[test]
        fn eigenvalues_sorted_and_orthonormal(seed in 0u64..10_000, n in 1usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_sym(n, &mut rng);
            let e = sym_eigen(&a).unwrap();
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let vtv = e.vectors.transpose().matmul(&e.vectors).unwrap();
            prop_assert!(max_abs_diff(&vtv, &Matrix::identity(n)) <= 1e-10);
        }
    }
}
