//! Numerical toolkit for Toeplitz products T_f T_ḡ on the Bergman space of
//! the unit disk: disk geometry, quadrature, Berezin transforms, truncated
//! Toeplitz matrices and the Schur-test apparatus.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`). Scenario
//! pipelines run in `f64`; the aliases below name the common instances.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod berezin;
pub mod error;
pub mod geometry;
pub mod operator;
pub mod pipeline;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod schur;
pub mod selftest;
pub mod symbols;
pub mod toeplitz;

pub use berezin::{
    berezin_mod_squared, berezin_transform, sarason_sup, RadiusSchedule, SarasonReport,
};
pub use error::{Error, Result};
pub use geometry::{
    bergman_kernel, bergman_metric, hyperbolic_disk, mobius, DiskPoint, HyperbolicDisk,
};
pub use operator::TruncatedOperator;
pub use pipeline::{
    run_boundedness, run_compactness, run_corollary_mode, DiagnosticReport, Mode, RunOutput,
};
pub use quadrature::QuadratureRule;
pub use scalar::Real;
pub use scenario::Scenario;
pub use schur::{SchurParameters, SchurRatioReport};
pub use symbols::{Symbol, SymbolPair, SymbolSpec};

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type DiskPoint64 = DiskPoint<f64>;
pub type HyperbolicDisk64 = HyperbolicDisk<f64>;
pub type QuadratureRule64 = QuadratureRule<f64>;
pub type Symbol64 = Symbol<f64>;
pub type SymbolPair64 = SymbolPair<f64>;
pub type RadiusSchedule64 = RadiusSchedule<f64>;
pub type SarasonReport64 = SarasonReport<f64>;
pub type TruncatedOperator64 = TruncatedOperator<f64>;
pub type SchurParameters64 = SchurParameters<f64>;
pub type SchurRatioReport64 = SchurRatioReport<f64>;

pub type DiskPoint32 = DiskPoint<f32>;
pub type QuadratureRule32 = QuadratureRule<f32>;
pub type Symbol32 = Symbol<f32>;
pub type TruncatedOperator32 = TruncatedOperator<f32>;
