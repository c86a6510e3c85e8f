//! Eigendecomposition of real square matrices and the spectral stability
//! verdict for accelerated (NAGD) and first-order gradient play.
//!
//! NAGD dynamics `q'' + (3/t) q' + G q = 0` are stable exactly when every
//! eigenvalue of `G` is real and non-negative (with `G` diagonalizable for the
//! convergence direction), while first-order play `x' = -G x` only needs
//! `Re(lambda) > 0`. [`classify_matrix`] reports both.

mod eigen;

use thiserror::Error;

use crate::linalg::{self, CMatrix, LinalgError, Matrix};
use crate::scalar::{c, cnorm2, Real, C};

/// Largest eigenvector-matrix condition number still treated as diagonalizable.
pub const DIAGONALIZABLE_KAPPA_MAX: f64 = 1e8;
/// Largest biorthogonality residual still treated as diagonalizable.
pub const DIAGONALIZABLE_BIORTHO_MAX: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("eigensolver did not converge within {0} QR iterations")]
    EigensolverNoConvergence(usize),
    #[error("ill-conditioned or invalid input: {0}")]
    IllConditioned(String),
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
}

impl From<LinalgError> for SpectralError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NoConvergence(_) => SpectralError::EigensolverNoConvergence(0),
            other => SpectralError::IllConditioned(other.to_string()),
        }
    }
}

/// Eigen-structure of a real square matrix.
///
/// `right_vectors[j]` is `v_j` with `G v_j = lambda_j v_j`, normalized to unit
/// length. `left_vectors[i]` is `w_i` with `w_i^* G = lambda_i w_i^*`; the
/// conjugate transposes `w_i^*` are the rows of `P^{-1}`, so `w_i^* v_j = delta_ij`.
/// `left_vectors` is empty when the eigenvector matrix is numerically singular.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<C<T>>,
    pub right_vectors: Vec<Vec<C<T>>>,
    pub left_vectors: Vec<Vec<C<T>>>,
    pub is_symmetric: bool,
    pub is_normal: bool,
    pub is_diagonalizable: bool,
    pub kappa_p: T,
    /// Max `|w_i^* v_j - delta_ij|`; infinite when `P` could not be inverted.
    pub biorthogonality_residual: T,
    /// Classification tolerance the spectrum was computed with.
    pub tol: T,
}

impl<T: Real> Spectrum<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `||P diag(lambda) P^{-1} - G|| / ||G||` (Frobenius), or infinity without `P^{-1}`.
    pub fn reconstruction_residual(&self, g: &Matrix<T>) -> T {
        if self.left_vectors.is_empty() {
            return T::infinity();
        }
        let n = self.dim();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                let mut s = c(T::zero(), T::zero());
                for k in 0..n {
                    s = s + self.right_vectors[k][i] * self.eigenvalues[k] * self.left_vectors[k][j].conj();
                }
                let d = (s - c(g[(i, j)], T::zero())).norm();
                acc += d * d;
            }
        }
        let gn = g.frobenius_norm();
        if gn == T::zero() {
            acc.sqrt()
        } else {
            acc.sqrt() / gn
        }
    }
}

/// Qualitative location of an eigenvalue in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenTag {
    PositiveReal,
    Zero,
    NegativeReal,
    StrictlyComplex,
}

impl EigenTag {
    pub fn name(self) -> &'static str {
        match self {
            EigenTag::PositiveReal => "PositiveReal",
            EigenTag::Zero => "Zero",
            EigenTag::NegativeReal => "NegativeReal",
            EigenTag::StrictlyComplex => "StrictlyComplex",
        }
    }

    pub fn is_unstable(self) -> bool {
        matches!(self, EigenTag::NegativeReal | EigenTag::StrictlyComplex)
    }
}

/// An eigenvalue with its class and predicted modal rate.
///
/// `rate` is the algebraic decay exponent `-3/2` for `PositiveReal`, `0` for
/// `Zero`, and the exponential growth rate for the two unstable classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenClass<T> {
    pub tag: EigenTag,
    pub lambda: C<T>,
    pub rate: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NagdVerdict {
    StableConvergent,
    StableToNullSpace,
    UnstableNegativeReal,
    UnstableComplex,
    IndeterminateJordan,
}

impl NagdVerdict {
    pub fn is_stable(self) -> bool {
        matches!(self, NagdVerdict::StableConvergent | NagdVerdict::StableToNullSpace)
    }

    pub fn is_unstable(self) -> bool {
        matches!(self, NagdVerdict::UnstableNegativeReal | NagdVerdict::UnstableComplex)
    }

    pub fn name(self) -> &'static str {
        match self {
            NagdVerdict::StableConvergent => "StableConvergent",
            NagdVerdict::StableToNullSpace => "StableToNullSpace",
            NagdVerdict::UnstableNegativeReal => "UnstableNegativeReal",
            NagdVerdict::UnstableComplex => "UnstableComplex",
            NagdVerdict::IndeterminateJordan => "IndeterminateJordan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FirstOrderVerdict {
    ExponentiallyStable,
    MarginallyStable,
    Unstable,
}

impl FirstOrderVerdict {
    pub fn name(self) -> &'static str {
        match self {
            FirstOrderVerdict::ExponentiallyStable => "ExponentiallyStable",
            FirstOrderVerdict::MarginallyStable => "MarginallyStable",
            FirstOrderVerdict::Unstable => "Unstable",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilityVerdict<T> {
    pub per_eigenvalue: Vec<EigenClass<T>>,
    pub nagd_verdict: NagdVerdict,
    pub first_order_verdict: FirstOrderVerdict,
    /// Largest exponential growth rate among unstable eigenvalues, 0 when none.
    pub dominant_growth_rate: T,
    /// `C(t0) = max(t0/2, lambda_min^{-1/2})`; only for stable verdicts.
    pub bound_constant_c: Option<T>,
    pub kappa_p: T,
    /// `min Re(lambda)`: the first-order decay rate when positive.
    pub first_order_rate: T,
}

/// Default classification tolerance `1e-9 * max(1, ||G||_F)`.
pub fn default_tolerance<T: Real>(g: &Matrix<T>) -> T {
    T::lit(1e-9) * T::one().max(g.frobenius_norm())
}

/// Eigendecomposition with the default tolerance.
pub fn eigendecompose_default<T: Real>(m: &Matrix<T>) -> Result<Spectrum<T>, SpectralError> {
    eigendecompose(m, default_tolerance(m))
}

/// Eigenvalues, unit right eigenvectors, biorthogonal left eigenvectors and
/// structural flags of a real square matrix.
///
/// Symmetric input goes through the Jacobi solver (orthonormal eigenbasis);
/// everything else through Hessenberg reduction and shifted QR with an
/// iteration cap of `100 n`. Eigenvalues are sorted by real part, then
/// imaginary part, so conjugate pairs are adjacent.
pub fn eigendecompose<T: Real>(m: &Matrix<T>, tol: T) -> Result<Spectrum<T>, SpectralError> {
    if !m.is_square() || m.rows() == 0 {
        return Err(SpectralError::IllConditioned(format!("expected a non-empty square matrix, got {}x{}", m.rows(), m.cols())));
    }
    if !m.is_finite() {
        return Err(SpectralError::IllConditioned("matrix has non-finite entries".into()));
    }
    if !(tol > T::zero()) {
        return Err(SpectralError::IllConditioned("tolerance must be positive".into()));
    }
    let n = m.rows();
    let mt = m.transpose();
    let is_symmetric = m.sub(&mt).frobenius_norm() <= tol;
    let is_normal = m.matmul(&mt).sub(&mt.matmul(m)).frobenius_norm() <= tol;

    let mut pairs: Vec<(C<T>, Vec<C<T>>)> = Vec::with_capacity(n);
    if is_symmetric {
        let (vals, vecs) = linalg::symmetric_eigen(m)?;
        for (j, lam) in vals.iter().enumerate() {
            let v: Vec<C<T>> = vecs.column(j).into_iter().map(|x| c(x, T::zero())).collect();
            pairs.push((c(*lam, T::zero()), v));
        }
    } else {
        let cap = 100 * n;
        let raw = eigen::nonsymmetric_eigen(m, cap).map_err(|_| SpectralError::EigensolverNoConvergence(cap))?;
        let mut j = 0;
        while j < n {
            if raw.im[j] == T::zero() {
                let v = raw.vectors.column(j).into_iter().map(|x| c(x, T::zero())).collect();
                pairs.push((c(raw.re[j], T::zero()), v));
                j += 1;
            } else {
                let vr = raw.vectors.column(j);
                let vi = raw.vectors.column(j + 1);
                let v: Vec<C<T>> = vr.iter().zip(&vi).map(|(a, b)| c(*a, *b)).collect();
                let vbar: Vec<C<T>> = v.iter().map(|z| z.conj()).collect();
                pairs.push((c(raw.re[j], raw.im[j]), v));
                pairs.push((c(raw.re[j], -raw.im[j]), vbar));
                j += 2;
            }
        }
    }

    for (_, v) in &mut pairs {
        normalize_vector(v);
    }
    pairs.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap_or(std::cmp::Ordering::Equal));

    let eigenvalues: Vec<C<T>> = pairs.iter().map(|p| p.0).collect();
    let right_vectors: Vec<Vec<C<T>>> = pairs.into_iter().map(|p| p.1).collect();

    // P has the right vectors as columns
    let p: CMatrix<T> = (0..n).map(|i| (0..n).map(|j| right_vectors[j][i]).collect()).collect();
    let kappa_p = linalg::complex_condition_number(&p)?;
    let (left_vectors, biorthogonality_residual) = match linalg::complex_inverse(&p) {
        Some(w) => {
            let prod = linalg::complex_matmul(&w, &p);
            let mut res = T::zero();
            for (i, row) in prod.iter().enumerate() {
                for (j, z) in row.iter().enumerate() {
                    let target = if i == j { T::one() } else { T::zero() };
                    res = res.max((*z - c(target, T::zero())).norm());
                }
            }
            let left: Vec<Vec<C<T>>> = w.into_iter().map(|row| row.into_iter().map(|z| z.conj()).collect()).collect();
            (left, res)
        }
        None => (Vec::new(), T::infinity()),
    };
    let is_diagonalizable = kappa_p <= T::lit(DIAGONALIZABLE_KAPPA_MAX) && biorthogonality_residual <= T::lit(DIAGONALIZABLE_BIORTHO_MAX);

    Ok(Spectrum {
        eigenvalues,
        right_vectors,
        left_vectors,
        is_symmetric,
        is_normal,
        is_diagonalizable,
        kappa_p,
        biorthogonality_residual,
        tol,
    })
}

/// Unit 2-norm with the largest-magnitude component made real and positive.
fn normalize_vector<T: Real>(v: &mut [C<T>]) {
    let nrm = cnorm2(v);
    if nrm == T::zero() {
        return;
    }
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or_else(|| c(T::one(), T::zero()));
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z = *z * phase / nrm;
    }
}

/// Tag of `lambda` under tolerance `tol`; values inside the tolerance band of
/// a boundary snap to that boundary class.
pub fn eigen_tag<T: Real>(lambda: C<T>, tol: T) -> EigenTag {
    if lambda.re.abs() <= tol && lambda.im.abs() <= tol {
        EigenTag::Zero
    } else if lambda.im.abs() > tol {
        EigenTag::StrictlyComplex
    } else if lambda.re > tol {
        EigenTag::PositiveReal
    } else {
        EigenTag::NegativeReal
    }
}

pub fn classify_eigenvalue<T: Real>(lambda: C<T>, tol: T) -> EigenClass<T> {
    let tag = eigen_tag(lambda, tol);
    EigenClass { tag, lambda, rate: rate_for_tag(tag, lambda) }
}

/// `|Im sqrt(lambda)|` for the principal root, computed without cancellation.
pub fn imag_sqrt_abs<T: Real>(lambda: C<T>) -> T {
    let (a, b) = (lambda.re, lambda.im);
    let modulus = a.hypot(b);
    let half = T::lit(0.5);
    if a >= T::zero() {
        let alpha = ((modulus + a) * half).sqrt();
        if alpha == T::zero() {
            T::zero()
        } else {
            b.abs() / (T::lit(2.0) * alpha)
        }
    } else {
        ((modulus - a) * half).sqrt()
    }
}

fn rate_for_tag<T: Real>(tag: EigenTag, lambda: C<T>) -> T {
    match tag {
        EigenTag::PositiveReal => T::lit(-1.5),
        EigenTag::Zero => T::zero(),
        EigenTag::NegativeReal => (-lambda.re).max(T::zero()).sqrt(),
        EigenTag::StrictlyComplex => imag_sqrt_abs(lambda),
    }
}

/// Predicted modal rate of `lambda` with exact (zero-width) class boundaries.
pub fn predicted_rate<T: Real>(lambda: C<T>) -> T {
    let tag = if lambda.im != T::zero() {
        EigenTag::StrictlyComplex
    } else if lambda.re > T::zero() {
        EigenTag::PositiveReal
    } else if lambda.re < T::zero() {
        EigenTag::NegativeReal
    } else {
        EigenTag::Zero
    };
    rate_for_tag(tag, lambda)
}

/// NAGD and first-order verdicts from a spectrum.
pub fn classify_matrix<T: Real>(s: &Spectrum<T>, t0: T) -> StabilityVerdict<T> {
    let tol = s.tol;
    let per_eigenvalue: Vec<EigenClass<T>> = s.eigenvalues.iter().map(|l| classify_eigenvalue(*l, tol)).collect();

    let mut dominant = T::zero();
    let mut dominant_tag = None;
    for ec in per_eigenvalue.iter().filter(|e| e.tag.is_unstable()) {
        let better = match dominant_tag {
            None => true,
            Some(_) => ec.rate > dominant || (ec.rate == dominant && ec.tag == EigenTag::StrictlyComplex),
        };
        if better {
            dominant = ec.rate;
            dominant_tag = Some(ec.tag);
        }
    }
    let has_zero = per_eigenvalue.iter().any(|e| e.tag == EigenTag::Zero);
    let nagd_verdict = match dominant_tag {
        Some(EigenTag::StrictlyComplex) => NagdVerdict::UnstableComplex,
        Some(_) => NagdVerdict::UnstableNegativeReal,
        None if !s.is_diagonalizable => NagdVerdict::IndeterminateJordan,
        None if has_zero => NagdVerdict::StableToNullSpace,
        None => NagdVerdict::StableConvergent,
    };

    let first_order_verdict = if s.eigenvalues.iter().all(|l| l.re > tol) {
        FirstOrderVerdict::ExponentiallyStable
    } else if s.eigenvalues.iter().all(|l| l.re >= -tol) {
        FirstOrderVerdict::MarginallyStable
    } else {
        FirstOrderVerdict::Unstable
    };
    let first_order_rate = s.eigenvalues.iter().fold(T::infinity(), |m, l| m.min(l.re));

    let bound_constant_c = nagd_verdict.is_stable().then(|| bound_constant(&per_eigenvalue, t0));

    StabilityVerdict {
        per_eigenvalue,
        nagd_verdict,
        first_order_verdict,
        dominant_growth_rate: dominant,
        bound_constant_c,
        kappa_p: s.kappa_p,
        first_order_rate,
    }
}

fn bound_constant<T: Real>(classes: &[EigenClass<T>], t0: T) -> T {
    let half_t0 = t0 / T::lit(2.0);
    let lambda_min = classes.iter().filter(|e| e.tag == EigenTag::PositiveReal).fold(T::infinity(), |m, e| m.min(e.lambda.re));
    if lambda_min.is_finite() {
        half_t0.max(T::one() / lambda_min.sqrt())
    } else {
        half_t0
    }
}

/// Uniform bound `kappa(P) (||q0|| + C ||v0||)` on `sup_t ||q(t)||` for
/// diagonalizable `G` with spectrum in the closed right real half-line.
pub fn boundedness_bound<T: Real>(s: &Spectrum<T>, t0: T, q0_norm: T, v0_norm: T) -> Result<T, SpectralError> {
    if !s.is_diagonalizable {
        return Err(SpectralError::NotApplicable("matrix is not diagonalizable"));
    }
    let verdict = classify_matrix(s, t0);
    let cst = verdict.bound_constant_c.ok_or(SpectralError::NotApplicable("verdict is not stable"))?;
    Ok(s.kappa_p * (q0_norm + cst * v0_norm))
}
