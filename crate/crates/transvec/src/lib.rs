//! Synthesis, verification, and error-rate estimation of Trotter circuits on
//! stabilizer codes.
//!
//! The toolchain compiles a logical Pauli rotation `exp(-i θ/2 P)` on an
//! arbitrary stabilizer code into a physical one-rotation circuit (basis
//! changes, a CNOT fan-in, one Z rotation, mirrored), built around the
//! symplectic-transvection picture of Pauli conjugation. Around that core:
//!
//! - [`f2`]: bit-packed GF(2) vectors/matrices, the binary symplectic form,
//!   transvections, row reduction and membership solving.
//! - [`pauli`]: phased Pauli operators with exact `i^kappa` tracking and the
//!   shared string grammar.
//! - [`code`]: stabilizer codes (validation, lifting of logical operators,
//!   syndromes, logical effect), a built-in [[8,3,3]] code, CSS construction
//!   from check matrices, and a lifted-product builder.
//! - [`circuit`]: the gate IR, circuit synthesis from a Pauli, weight
//!   reduction over stabilizer cosets, Trotterization, and serialization.
//! - [`propagate`]: exact symbolic conjugation of Paulis through circuits
//!   (coefficients in {1, cos θ, sin θ} times i^m), closed-form rotation
//!   conjugation, and the verification reports.
//! - [`oracle`]: dense-matrix certification for small n.
//! - [`decoder`]: syndrome lookup tables and min-sum BP with an OSD-0
//!   fallback.
//! - [`noise`]: Pauli-frame Monte Carlo under circuit-level depolarizing
//!   noise with deterministic per-shot RNG streams.

pub mod circuit;
pub mod code;
pub mod decoder;
pub mod error;
pub mod f2;
pub mod noise;
pub mod oracle;
pub mod pauli;
pub mod propagate;

pub use error::{Error, Result};
