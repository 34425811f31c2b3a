//! Dense statevector simulator and circuit IR.
//!
//! The crate provides the gate alphabet ([`Gate`]), an ordered-gate circuit
//! representation ([`Circuit`]), the statevector engine ([`State`]) and the
//! Fourier/phase-estimation builders every higher-level routine composes.
//!
//! Conventions are pinned in [`gate`]: qubit 0 is the least significant bit
//! of basis-state indices, `RZ` is the symmetric rotation and `Phase` the
//! absolute diagonal phase.

pub mod circuit;
pub mod error;
pub mod gate;
pub mod matrix;
pub mod qft;
pub mod state;

pub use circuit::Circuit;
pub use error::SimError;
pub use gate::{Gate, GateKind, QubitId};
pub use matrix::{CMatrix, DenseUnitary, MAX_DENSE_QUBITS};
pub use qft::{iqft, qft, qpe, qpe_with_register};
pub use state::{bitstring, Histogram, State};
