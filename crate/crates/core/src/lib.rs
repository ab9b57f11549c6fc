//! Density-matrix simulation of stabilizer-based bit-flip error detection on
//! the three-qubit repetition code.
//!
//! The register is `[D_t, D_m, D_b, A_t, A_b]`: three data qubits holding the
//! logical qubit and two ancillas that measure the parities `Z_t Z_m` and
//! `Z_m Z_b`. Everything is exact: measurements are enumerated branch by
//! branch, incoherent errors are enumerated pattern by pattern, and all
//! figures of merit are evaluated on the conditioned density matrices.
//!
//! Modules:
//! - [`qstate`]: complex linear algebra (states, operators, channels).
//! - [`circuit`]: gate library, timed circuits, exact branch executor, shot
//!   sampling.
//! - [`noise`]: coherent and incoherent bit flips, readout confusion and
//!   postselection, decoherence.
//! - [`repcode`]: logical states, encoders, the stabilizer round, syndrome
//!   tables, the decoder and the error-detection pipelines.
//! - [`metrics`]: assignment fidelity, witnesses, Mermin value, three-qubit
//!   and logical fidelities, error-combination tables.
//!
//! The numeric core is generic over [`Real`] (`f64` or `f32`); the aliases
//! below fix it to `f64`, with `…32` variants for single precision.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
mod error;
pub mod metrics;
pub mod noise;
pub mod qstate;
pub mod repcode;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, Tolerances, C};

pub type CMatrix = qstate::CMatrix<f64>;
pub type PureState = qstate::PureState<f64>;
pub type DensityMatrix = qstate::DensityMatrix<f64>;
pub type OperatorMatrix = qstate::OperatorMatrix<f64>;
pub type KrausChannel = qstate::KrausChannel<f64>;
pub type Circuit = circuit::Circuit<f64>;
pub type Branch = circuit::Branch<f64>;
pub type NoiseConfig = noise::NoiseConfig<f64>;

pub type PureState32 = qstate::PureState<f32>;
pub type DensityMatrix32 = qstate::DensityMatrix<f32>;
pub type OperatorMatrix32 = qstate::OperatorMatrix<f32>;
pub type Circuit32 = circuit::Circuit<f32>;
pub type NoiseConfig32 = noise::NoiseConfig<f32>;
