//! Simulation and verification toolkit for matrix-valued stochastic flows
//! whose coefficients act spectrally on the state.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cauchy;
pub mod empirical;
pub mod error;
pub mod flow;
pub mod limits;
pub mod linalg;
pub mod poly;
pub mod quad;
pub mod scalar;
pub mod sympoly;

pub use error::{Error, Result};
pub use scalar::{Beta, Entry, Real};

/// `f64` instantiations of the generic types.
pub type FlowSpec64 = flow::FlowSpec<f64>;
pub type EigenPath64 = flow::EigenPath<f64>;
pub type SpectralFunction64 = linalg::SpectralFunction<f64>;
pub type EmpiricalMeasure64 = empirical::EmpiricalMeasure<f64>;
pub type EmpiricalMeasureProcess64 = empirical::EmpiricalMeasureProcess<f64>;
pub type LimitLaw64 = limits::LimitLaw<f64>;
pub type LawParts64 = limits::LawParts<f64>;
pub type MomentSequence64 = limits::MomentSequence<f64>;
pub type FreeDiffusion64 = cauchy::FreeDiffusion<f64>;
pub type Poly64 = poly::Poly<f64>;
