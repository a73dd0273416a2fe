//! Metric-aware deconvolution kernels for Gaussian bosonic states.
//!
//! A noisy Gaussian channel `(X, Y)` maps a prior covariance `A` to
//! `B = XᵀAX + Y` and first moments `F ↦ XᵀF`. The kernels in [`adjoint`]
//! are the transposes of that channel with respect to an information
//! metric evaluated at the prior, and [`recon`] turns them into maps that
//! act on measured first moments. [`field`] carries the translation-invariant
//! scalar-field model used by the CLI.
//!
//! Phase-space vectors use mode-major ordering `(q₁, p₁, q₂, p₂, …)`, and the
//! symplectic form has per-mode blocks `[[0, 1], [-1, 0]]`. Every matrix in
//! this crate follows that convention; conversion happens only at I/O
//! boundaries.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![forbid(unsafe_code)]

pub mod adjoint;
pub mod error;
pub mod field;
pub mod gaussian;
pub mod imtime;
pub mod random;
pub mod recon;
pub mod symplectic;
pub mod validation;

pub use adjoint::{
    adjointness_residual, petz_covariance_recovery, transpose_kernel, transpose_kernel_bures,
    transpose_kernel_sqrt, KernelOptions, MetricKind, ReconstructionKernel,
};
pub use error::{Error, Result};
pub use field::{FieldData, FieldModel, KernelSpectrum, ModeMultipliers, ModeStatus, SpectrumRow};
pub use gaussian::{
    apply_channel, validate_channel, validate_state, ChannelCondition, GaussianChannel,
    GaussianState, ValidityReport,
};
pub use imtime::ImaginaryTimePropagator;
pub use recon::{moment_reconstruction_matrix, reconstruct_moments, ReconstructionMethod};
pub use symplectic::{standard_symplectic_form, williamson, SymplecticForm, Williamson};
pub use validation::ValidationReport;

/// Complex scalar used on the complexified phase space.
pub type C64 = num_complex::Complex64;
/// Real phase-space matrix (covariances, channels, kernels).
pub type PhaseMatrix = nalgebra::DMatrix<f64>;
/// Complex phase-space matrix (propagators, `A + i/2 Δ`).
pub type ComplexPhaseMatrix = nalgebra::DMatrix<C64>;
/// Real phase-space vector (first moments).
pub type PhaseVector = nalgebra::DVector<f64>;
/// Complex probe vector on the complexified phase space.
pub type ComplexPhaseVector = nalgebra::DVector<C64>;
