//! Small dense linear algebra: row-major real matrices, one-sided Jacobi SVD,
//! symmetric Jacobi eigensolver and complex LU inversion.

use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::scalar::{Real, C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(LinalgError::DimensionMismatch(format!("row {i} has {} entries, expected {n_cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: n_rows, cols: n_cols, data })
    }

    /// Converts from `f64` rows, for literals in tests and configs.
    pub fn from_f64_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let converted: Vec<Vec<T>> = rows.iter().map(|r| r.as_ref().iter().map(|x| T::lit(*x)).collect()).collect();
        Self::from_rows(&converted)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
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
        out
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.rows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.cols);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| *a * *b).sum();
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| *a * s).collect() }
    }

    pub fn frobenius_norm(&self) -> T {
        crate::scalar::norm2(&self.data)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> Result<T, LinalgError> {
        let svd = svd(self)?;
        Ok(svd.sigma.iter().fold(T::zero(), |m, s| m.max(*s)))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin singular value decomposition `A = U diag(sigma) V^T` of a matrix
/// with at least as many rows as columns.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub sigma: Vec<T>,
    pub v: Matrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn sigma_max(&self) -> T {
        self.sigma.iter().fold(T::zero(), |m, s| m.max(*s))
    }

    pub fn sigma_min(&self) -> T {
        self.sigma.iter().fold(T::infinity(), |m, s| m.min(*s))
    }

    /// Indices of singular values at or below `rel * sigma_max`.
    pub fn null_indices(&self, rel: T) -> Vec<usize> {
        let cut = rel * self.sigma_max();
        (0..self.sigma.len()).filter(|&j| self.sigma[j] <= cut).collect()
    }
}

/// One-sided (Hestenes) Jacobi SVD. Accurate for small singular values,
/// which is what rank decisions on pseudo-gradient matrices need.
pub fn svd<T: Real>(a: &Matrix<T>) -> Result<Svd<T>, LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(LinalgError::DimensionMismatch(format!("svd needs rows >= cols, got {m}x{n}")));
    }
    let mut u = a.clone();
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();
    let max_sweeps = 80;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = T::zero();
                for i in 0..m {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    alpha += up * up;
                    beta += uq * uq;
                    gamma += up * uq;
                }
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                for i in 0..m {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = cs * up - sn * uq;
                    u[(i, q)] = sn * up + cs * uq;
                }
                for i in 0..n {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = cs * vp - sn * vq;
                    v[(i, q)] = sn * vp + cs * vq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence("one-sided Jacobi SVD"));
    }
    let mut sigma = vec![T::zero(); n];
    for j in 0..n {
        let col = u.column(j);
        let s = crate::scalar::norm2(&col);
        sigma[j] = s;
        if s > T::zero() {
            for i in 0..m {
                u[(i, j)] /= s;
            }
        }
    }
    Ok(Svd { u, sigma, v })
}

/// Eigenpairs of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the orthogonal matrix whose columns are eigenvectors.
pub fn symmetric_eigen<T: Real>(a: &Matrix<T>) -> Result<(Vec<T>, Matrix<T>), LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch("symmetric_eigen needs a square matrix".into()));
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.rows();
    let mut m = a.clone();
    // symmetrize so that rounding asymmetry does not leak into rotations
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)]) / T::lit(2.0);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let mut v = Matrix::identity(n);
    let scale = m.frobenius_norm();
    let tiny = T::epsilon() * T::epsilon() * scale * scale;
    let mut converged = n <= 1 || scale == T::zero();
    for _ in 0..100 {
        if converged {
            break;
        }
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off <= tiny {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= T::min_positive_value() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (T::lit(2.0) * apq);
                let t = if theta.is_finite() {
                    let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
                    sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
                } else {
                    T::zero()
                };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = cs * mkp - sn * mkq;
                    m[(k, q)] = sn * mkp + cs * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = cs * mpk - sn * mqk;
                    m[(q, k)] = sn * mpk + cs * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = cs * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence("symmetric Jacobi eigensolver"));
    }
    Ok(((0..n).map(|i| m[(i, i)]).collect(), v))
}

/// Complex square matrix stored as rows.
pub type CMatrix<T> = Vec<Vec<C<T>>>;

/// Inverse of a complex square matrix by LU with partial pivoting.
/// Returns `None` when a pivot vanishes relative to the matrix scale.
pub fn complex_inverse<T: Real>(a: &CMatrix<T>) -> Option<CMatrix<T>> {
    let n = a.len();
    let scale = a.iter().flatten().fold(T::zero(), |m, z| m.max(z.norm()));
    if scale == T::zero() || !scale.is_finite() {
        return None;
    }
    let mut lu: CMatrix<T> = a.clone();
    let mut inv: CMatrix<T> =
        (0..n).map(|i| (0..n).map(|j| if i == j { C::new(T::one(), T::zero()) } else { C::new(T::zero(), T::zero()) }).collect()).collect();
    let floor = T::epsilon() * scale * T::from_usize_lossy(n).max(T::one()) * T::lit(1e-4);
    for col in 0..n {
        let piv =
            (col..n).max_by(|&i, &j| lu[i][col].norm().partial_cmp(&lu[j][col].norm()).unwrap_or(std::cmp::Ordering::Equal)).unwrap_or(col);
        if lu[piv][col].norm() <= floor {
            return None;
        }
        lu.swap(col, piv);
        inv.swap(col, piv);
        let d = lu[col][col];
        for j in 0..n {
            lu[col][j] = lu[col][j] / d;
            inv[col][j] = inv[col][j] / d;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = lu[i][col];
            if f.norm() == T::zero() {
                continue;
            }
            for j in 0..n {
                let a = lu[col][j];
                let b = inv[col][j];
                lu[i][j] = lu[i][j] - f * a;
                inv[i][j] = inv[i][j] - f * b;
            }
        }
    }
    Some(inv)
}

pub fn complex_matmul<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![C::new(T::zero(), T::zero()); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            let aik = a[i][k];
            for j in 0..m {
                out[i][j] = out[i][j] + aik * bk[j];
            }
        }
    }
    out
}

/// Spectral-norm condition number of a complex square matrix, computed from
/// the singular values of its real `2n x 2n` embedding `[[Re, -Im], [Im, Re]]`.
pub fn complex_condition_number<T: Real>(a: &CMatrix<T>) -> Result<T, LinalgError> {
    let n = a.len();
    let mut emb = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a[i][j];
            emb[(i, j)] = z.re;
            emb[(i, j + n)] = -z.im;
            emb[(i + n, j)] = z.im;
            emb[(i + n, j + n)] = z.re;
        }
    }
    let s = svd(&emb)?;
    let (hi, lo) = (s.sigma_max(), s.sigma_min());
    if lo == T::zero() {
        Ok(T::infinity())
    } else {
        Ok(hi / lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_recovers_rank_one_null_space() {
        let g = Matrix::<f64>::from_f64_rows(&[[0.25, 0.25], [0.25, 0.25]]).unwrap();
        let s = svd(&g).unwrap();
        let null = s.null_indices(1e-10);
        assert_eq!(null.len(), 1);
        let v = s.v.column(null[0]);
        assert!((v[0] + v[1]).abs() < 1e-14);
        assert!((s.sigma_max() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn svd_reconstructs() {
        let a = Matrix::<f64>::from_f64_rows(&[[1.0, 2.0, 0.5], [-1.0, 0.3, 4.0], [2.0, 2.0, 2.0]]).unwrap();
        let s = svd(&a).unwrap();
        let mut rec = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                rec[(i, j)] = (0..3).map(|k| s.u[(i, k)] * s.sigma[k] * s.v[(j, k)]).sum();
            }
        }
        assert!(rec.sub(&a).max_abs() < 1e-13);
    }

    #[test]
    fn jacobi_eigen_of_symmetric() {
        let a = Matrix::<f64>::from_f64_rows(&[[0.4, 0.2], [0.2, 0.8]]).unwrap();
        let (mut vals, _) = symmetric_eigen(&a).unwrap();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let disc = (1.2f64 * 1.2 - 4.0 * 0.28).sqrt();
        assert!((vals[0] - (1.2 - disc) / 2.0).abs() < 1e-15);
        assert!((vals[1] - (1.2 + disc) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn complex_inverse_roundtrip_and_singular() {
        let a: CMatrix<f64> = vec![vec![C::new(1.0, 1.0), C::new(2.0, 0.0)], vec![C::new(0.0, -1.0), C::new(3.0, 0.5)]];
        let inv = complex_inverse(&a).unwrap();
        let id = complex_matmul(&a, &inv);
        for i in 0..2 {
            for j in 0..2 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id[i][j] - C::new(e, 0.0)).norm() < 1e-14);
            }
        }
        let sing: CMatrix<f64> = vec![vec![C::new(1.0, 0.0), C::new(2.0, 0.0)], vec![C::new(2.0, 0.0), C::new(4.0, 0.0)]];
        assert!(complex_inverse(&sing).is_none());
    }

    #[test]
    fn condition_of_unitary_is_one() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a: CMatrix<f64> = vec![vec![C::new(h, 0.0), C::new(h, 0.0)], vec![C::new(0.0, h), C::new(0.0, -h)]];
        assert!((complex_condition_number(&a).unwrap() - 1.0).abs() < 1e-12);
    }
}
