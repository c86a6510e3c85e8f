//! Bessel-family special functions and the closed-form solution of the
//! scalar modal equation `y'' + (3/t) y' + lambda y = 0`.

mod bessel;
mod dd;
mod modal;

use thiserror::Error;

pub use bessel::{bessel_i0, bessel_i1, bessel_j0, bessel_j1, bessel_k0, bessel_k1, bessel_y0, bessel_y1, EXPONENT_CAP, SERIES_RADIUS};
pub use modal::{eval_modal, make_modal_solution, modal_tolerance, ModalBranch, ModalEval, ModalSolution};

#[doc(hidden)]
pub mod internals {
    //! Regime-specific evaluators, exposed for cross-checking the two
    //! evaluation regimes against each other.
    use crate::scalar::{Real, C};

    /// `(J0, J1, Y0, Y1)` from the ascending series.
    pub fn jy_series<T: Real>(z: C<T>) -> [C<T>; 4] {
        let v = super::bessel::jy_series(z);
        [v.j0, v.j1, v.y0, v.y1]
    }

    /// `(J0, J1, Y0, Y1)` from the Hankel expansion.
    pub fn jy_asymptotic<T: Real>(z: C<T>) -> [C<T>; 4] {
        let v = super::bessel::jy_asymptotic(z);
        [v.j0, v.j1, v.y0, v.y1]
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("exponent exceeds the overflow cap")]
    OverflowSaturation,
    #[error("modal basis is numerically singular at t0")]
    SingularBasis,
}
