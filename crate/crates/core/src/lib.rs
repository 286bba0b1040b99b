//! Duplex (UL vs DL) antenna-pattern divergence analysis on regular spherical grids.
//!
//! The crate is `no_std` and only needs `alloc`. All trigonometry goes through
//! [`libm`], so results are bit-identical between hosted and embedded builds.
//!
//! Module map:
//!
//! - [`sphgrid`]: regular (θ, φ) grids, quadrature area weights with pole caps, region masks
//! - [`pattern`]: dual-polarized pattern data model, EIS inversion, resampling, normalization
//! - [`footprint`]: circular quasi-Laplacian cluster footprint density on the sphere
//! - [`scalar_metrics`]: IPB, ΔIP, ΔFB, XPD, tilt and tilt difference
//! - [`polarimetry`]: polarization ellipse state, PLF and the eccentricity-vs-tilt bound fit
//! - [`correlation`]: footprint-weighted pattern correlation, sphere maps, quadruple rule
//! - [`diversity`]: emulated selection / maximum ratio combining
//! - [`stats`]: region aggregates and empirical CDFs over a handset population
//! - [`synth`]: analytic and seeded synthetic patterns

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;

pub mod correlation;
pub mod diversity;
pub mod footprint;
pub mod pattern;
pub mod polarimetry;
pub mod scalar_metrics;
pub mod sphgrid;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use correlation::{CorrelationMap, CorrelationMode, QuadrupleFit};
pub use footprint::{FootprintDensity, FootprintShape, FootprintSpec};
pub use pattern::{Link, Pattern, PatternKind, PowerConvention};
pub use scalar_metrics::{MetricField, Polarization, Unit};
pub use sphgrid::{AreaWeights, Region, SphericalGrid};
