//! Nesterov-accelerated gradient (NAGD) dynamics for Nash equilibrium seeking
//! in N-player quadratic games.
//!
//! The crate covers the whole analysis chain: building the pseudo-gradient
//! `F(x) = G x + b` of a quadratic game ([`game`]), classifying the stability
//! of `x'' + (3/t) x' + G x = 0` from the spectrum of `G` ([`spectral`]),
//! closed-form Bessel solutions of the scalar modal equation ([`special`]),
//! fixed-step RK4 integration ([`dynamics`]) and trajectory diagnostics
//! such as rate fits and Lyapunov/Chetaev functions ([`analysis`]).
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::assign_op_pattern, clippy::needless_range_loop, clippy::type_complexity)]

pub mod analysis;
pub mod dynamics;
pub mod game;
pub mod linalg;
pub mod scalar;
pub mod special;
pub mod spectral;

pub use scalar::{Real, C};

pub type Matrix64 = linalg::Matrix<f64>;
pub type Matrix32 = linalg::Matrix<f32>;
pub type Complex64 = C<f64>;
pub type Spectrum64 = spectral::Spectrum<f64>;
pub type StabilityVerdict64 = spectral::StabilityVerdict<f64>;
pub type ModalSolution64 = special::ModalSolution<f64>;
pub type QuadraticGame64 = game::QuadraticGame<f64>;
pub type PseudoGradientSystem64 = game::PseudoGradientSystem<f64>;
pub type IntegratorConfig64 = dynamics::IntegratorConfig<f64>;
pub type TrajectoryRecord64 = dynamics::TrajectoryRecord<f64>;
pub type ModalTrajectory64 = dynamics::ModalTrajectory<f64>;
pub type RateFit64 = analysis::RateFit<f64>;
