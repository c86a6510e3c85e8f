use super::AnalysisError;
use crate::dynamics::TrajectoryRecord;
use crate::linalg::{svd, Matrix};
use crate::scalar::{Real, C};

/// Relative singular value threshold for the null space of `G`.
pub const NULLSPACE_RCOND: f64 = 1e-10;

/// `y = w* q` and `y' = w* v` sample by sample.
pub fn modal_project<T: Real>(traj: &TrajectoryRecord<T>, w: &[C<T>]) -> Result<(Vec<C<T>>, Vec<C<T>>), AnalysisError> {
    if w.len() != traj.dim() {
        return Err(AnalysisError::DimensionMismatch(format!("w has length {}, trajectory dimension {}", w.len(), traj.dim())));
    }
    let apply = |x: &[T]| w.iter().zip(x).fold(C::new(T::zero(), T::zero()), |acc, (wi, xi)| acc + wi.conj() * *xi);
    Ok((traj.q.iter().map(|q| apply(q)).collect(), traj.v.iter().map(|v| apply(v)).collect()))
}

/// Limit of a null-space coordinate: `y1(t0) + (t0/2) y2(t0)`.
pub fn nullspace_limit<T: Real>(t0: T, y1_0: T, y2_0: T) -> T {
    y1_0 + t0 / T::lit(2.0) * y2_0
}

/// Orthonormal basis of `N(G)` (columns), by singular values at or below
/// `1e-10 * sigma_max`.
pub fn nullspace_basis<T: Real>(g: &Matrix<T>) -> Result<Vec<Vec<T>>, AnalysisError> {
    let s = svd(g)?;
    Ok(s.null_indices(T::lit(NULLSPACE_RCOND)).into_iter().map(|j| s.v.column(j)).collect())
}

/// Euclidean distance of each `q(t)` to `N(G)`.
pub fn distance_to_nullspace<T: Real>(traj: &TrajectoryRecord<T>, g: &Matrix<T>) -> Result<Vec<T>, AnalysisError> {
    if g.rows() != traj.dim() || !g.is_square() {
        return Err(AnalysisError::DimensionMismatch("G does not match the trajectory".into()));
    }
    let basis = nullspace_basis(g)?;
    if basis.is_empty() {
        return Err(AnalysisError::TrivialNullspace);
    }
    Ok(traj
        .q
        .iter()
        .map(|q| {
            let mut r = q.clone();
            for b in &basis {
                let c = crate::scalar::dot(b, q);
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * *bi;
                }
            }
            crate::scalar::norm2(&r)
        })
        .collect())
}
