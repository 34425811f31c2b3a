//! Quantum subroutine builders: the fixed-point adder and penalty layer, the
//! amplitude-difference gadget, the linear-system solver, real-amplitude
//! estimation, the `|cos|` diagonal, and their composition into the per-line
//! transmission-cost operator.

pub mod adder;
pub mod cosphase;
pub mod diag;
pub mod getdiff;
pub mod hhl;
pub mod layout;
pub mod penalty;
pub mod prep;
pub mod qadc;
pub mod utrans;

pub use adder::{weighted_adder, AdderWeights};
pub use cosphase::{cos_phase_circuit, cos_phase_table, CosPhaseTable};
pub use diag::{diagonal_csv, extract_diagonal, phase_distance, DiagonalProbe};
pub use getdiff::{diff_gates, get_diff};
pub use hhl::{hhl_circuit, pad_to_power_of_two, HHLConfig};
pub use layout::{AncillaWidths, Layout};
pub use penalty::penalty_layer;
pub use prep::{encode_real_vector, prep_power_state, PrepRegisters};
pub use qadc::{g_eigencheck, householder_prep, outcome_distribution, qadc_circuit, GEigenReport, QADCConfig};
pub use utrans::{phase_error_budget, u_trans, AmplitudeScale, TransOperator};
