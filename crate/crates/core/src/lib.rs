//! Statevector simulation of quantum phase estimation applied to a two-leg
//! spin-orbit path, and recovery of the path's non-Abelian phase from the
//! simulated readouts.
//!
//! Modules, bottom-up:
//! - [`state`], [`kernel`], [`sampling`]: dense statevector, gate kernels
//!   (sequential and rayon-parallel), seeded measurement.
//! - [`gates`]: closed-form 2×2 unitaries.
//! - [`iqft`]: inverse QFT circuit and a dense reference matrix.
//! - [`qpe`]: circuit assembly, bin prediction, decoding.
//! - [`generator`]: closed-form model of the spin-orbit path.
//! - [`extraction`], [`sweep`]: inversion of the readouts into `θ`.

pub mod batch;
pub mod error;
pub mod extraction;
pub mod gates;
pub mod generator;
pub mod iqft;
pub mod kernel;
pub mod qpe;
pub mod sampling;
pub mod state;
pub mod sweep;

pub use error::{Error, Result, Warning};
pub use extraction::{
    full_pipeline, full_pipeline_with, Branch, ExtractionOptions, ExtractionResult,
};
pub use gates::{Axis, GateMatrix2, RotationSpec};
pub use generator::{AmplitudePair, ComplexPair, PathParams, PhysicalParams};
pub use kernel::Exec;
pub use num_complex::Complex64;
pub use qpe::{decode, expected_bins, format_binary, run_qpe, DecodeOptions, QpeConfig};
pub use sampling::{Histogram, Mode};
pub use state::StateVector;
