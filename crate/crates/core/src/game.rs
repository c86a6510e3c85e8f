//! Quadratic games `J_i(x) = x^T Q_i x + d_i^T x` with scalar actions and
//! their affine pseudo-gradient `F(x) = G x + b`.

use thiserror::Error;

use crate::linalg::{svd, LinalgError, Matrix};
use crate::scalar::{norm2, Real};

/// Symmetry tolerance for player cost matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative singular value cutoff of the minimum-norm solve.
const PINV_RCOND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("no equilibrium: b is not in the range of G (residual {residual:.3e})")]
    NoEquilibrium { residual: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticGame<T> {
    q: Vec<Matrix<T>>,
    d: Vec<Vec<T>>,
}

impl<T: Real> QuadraticGame<T> {
    pub fn new(q: Vec<Matrix<T>>, d: Vec<Vec<T>>) -> Result<Self, GameError> {
        let n = q.len();
        if n == 0 {
            return Err(GameError::InvalidGame("at least one player is required".into()));
        }
        if d.len() != n {
            return Err(GameError::InvalidGame(format!("{n} cost matrices but {} linear terms", d.len())));
        }
        for (i, (qi, di)) in q.iter().zip(&d).enumerate() {
            if qi.rows() != n || qi.cols() != n {
                return Err(GameError::InvalidGame(format!("Q_{} is {}x{}, expected {n}x{n}", i + 1, qi.rows(), qi.cols())));
            }
            if di.len() != n {
                return Err(GameError::InvalidGame(format!("d_{} has length {}, expected {n}", i + 1, di.len())));
            }
            if !qi.is_finite() || di.iter().any(|x| !x.is_finite()) {
                return Err(GameError::InvalidGame(format!("player {} has non-finite cost data", i + 1)));
            }
            let asym = qi.sub(&qi.transpose()).max_abs();
            if asym > T::lit(SYMMETRY_TOL) {
                return Err(GameError::InvalidGame(format!("Q_{} is not symmetric (max asymmetry {asym:e})", i + 1)));
            }
        }
        Ok(Self { q, d })
    }

    pub fn n_players(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[Matrix<T>] {
        &self.q
    }

    pub fn d(&self) -> &[Vec<T>] {
        &self.d
    }

    /// Cost of player `i` at joint action `x`.
    pub fn cost(&self, i: usize, x: &[T]) -> T {
        let qx = self.q[i].matvec(x);
        crate::scalar::dot(x, &qx) + crate::scalar::dot(&self.d[i], x)
    }

    /// `G_ij = 2 (Q_i)_ij`, `b_i = (d_i)_i`.
    pub fn pseudo_gradient(&self) -> PseudoGradientSystem<T> {
        let n = self.n_players();
        let mut g = Matrix::zeros(n, n);
        let mut b = vec![T::zero(); n];
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = T::lit(2.0) * self.q[i][(i, j)];
            }
            b[i] = self.d[i][i];
        }
        PseudoGradientSystem { g, b, equilibrium: None }
    }
}

pub fn pseudo_gradient<T: Real>(game: &QuadraticGame<T>) -> PseudoGradientSystem<T> {
    game.pseudo_gradient()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoGradientSystem<T> {
    pub g: Matrix<T>,
    pub b: Vec<T>,
    pub equilibrium: Option<Vec<T>>,
}

impl<T: Real> PseudoGradientSystem<T> {
    pub fn from_matrix(g: Matrix<T>, b: Vec<T>) -> Result<Self, GameError> {
        if !g.is_square() || g.rows() != b.len() {
            return Err(GameError::InvalidGame(format!("G is {}x{} but b has length {}", g.rows(), g.cols(), b.len())));
        }
        if g.rows() == 0 {
            return Err(GameError::InvalidGame("empty system".into()));
        }
        if !g.is_finite() || b.iter().any(|x| !x.is_finite()) {
            return Err(GameError::InvalidGame("non-finite entries".into()));
        }
        Ok(Self { g, b, equilibrium: None })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// `F(x) = G x + b`.
    pub fn evaluate(&self, x: &[T]) -> Vec<T> {
        let mut y = self.g.matvec(x);
        for (yi, bi) in y.iter_mut().zip(&self.b) {
            *yi += *bi;
        }
        y
    }

    /// Potential-game test: `G` symmetric to `tol`.
    pub fn is_potential(&self, tol: T) -> bool {
        self.g.sub(&self.g.transpose()).max_abs() <= tol
    }

    /// Minimum-norm `x*` with `G x* + b = 0`; stored on success.
    pub fn solve_equilibrium(&mut self) -> Result<Vec<T>, GameError> {
        let x = min_norm_solve(&self.g, &self.b)?;
        self.equilibrium = Some(x.clone());
        Ok(x)
    }

    /// Homogeneous data `(G, q0 - x*, v0)`; solves for `x*` if not yet known.
    pub fn translate_to_homogeneous(&mut self, q0: &[T], v0: &[T]) -> Result<(Matrix<T>, Vec<T>, Vec<T>), GameError> {
        if q0.len() != self.dim() || v0.len() != self.dim() {
            return Err(GameError::InvalidGame("initial data dimension mismatch".into()));
        }
        let x = match &self.equilibrium {
            Some(x) => x.clone(),
            None => self.solve_equilibrium()?,
        };
        let shifted = q0.iter().zip(&x).map(|(a, b)| *a - *b).collect();
        Ok((self.g.clone(), shifted, v0.to_vec()))
    }
}

fn min_norm_solve<T: Real>(g: &Matrix<T>, b: &[T]) -> Result<Vec<T>, GameError> {
    let n = b.len();
    let s = svd(g)?;
    let cut = T::lit(PINV_RCOND) * s.sigma_max();
    // x = -V diag(1/sigma) U^T b
    let mut coeff = vec![T::zero(); n];
    for k in 0..n {
        if s.sigma[k] > cut && s.sigma[k] > T::zero() {
            let mut ub = T::zero();
            for i in 0..n {
                ub += s.u[(i, k)] * b[i];
            }
            coeff[k] = -ub / s.sigma[k];
        }
    }
    let x = s.v.matvec(&coeff);
    let mut r = g.matvec(&x);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri += *bi;
    }
    let residual = norm2(&r);
    if residual > T::lit(1e-8) * T::one().max(norm2(b)) {
        return Err(GameError::NoEquilibrium { residual: residual.as_f64() });
    }
    Ok(x)
}
