//! Approximate distribution, moments and detection power of Roy's
//! largest-root statistic under rank-one (concentrated) alternatives.
//!
//! The five classical settings are covered: signal detection and MANOVA with
//! known covariance (cases 1 and 2), the same with an estimated covariance
//! (cases 3 and 4), and canonical correlation analysis (case 5). Each
//! scenario maps to a small combination of central and noncentral
//! chi-square / F laws ([`royapprox::ApproxLaw`]) which is evaluated by
//! one- or two-dimensional adaptive quadrature.
//!
//! A seeded Monte Carlo oracle ([`montecarlo`]) draws the exact Wishart
//! matrices, so every approximation can be checked against simulation with
//! bit-reproducible results regardless of thread count.
//!
//! Linear algebra is generic over the scalar type (see [`scalar::Real`]);
//! the distribution code carries double-precision accuracy contracts and is
//! written for `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
mod error;
pub mod linalg;
pub mod montecarlo;
pub mod power;
pub mod quadrature;
pub mod royapprox;
pub mod scalar;
pub mod specialfns;

pub use error::{Error, Result};

pub use distributions::{ChiSq, FChiParams, FDist};
pub use montecarlo::SimConfig;
pub use power::{PowerResult, PowerSpec};
pub use royapprox::{ApproxLaw, Case, Scenario};

/// Double-precision symmetric matrix, the type used throughout the
/// simulation and scenario builders.
pub type SymMatrixF64 = linalg::SymMatrix<f64>;
/// Single-precision symmetric matrix.
pub type SymMatrixF32 = linalg::SymMatrix<f32>;
/// Double-precision dense matrix.
pub type MatrixF64 = linalg::Matrix<f64>;
/// Single-precision dense matrix.
pub type MatrixF32 = linalg::Matrix<f32>;
