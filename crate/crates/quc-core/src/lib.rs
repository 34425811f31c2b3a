//! Unit-commitment optimization with a quantum cost layer.
//!
//! The crate splits into the classical model — grid, flow solve, objective,
//! exhaustive oracle, dispatch initializer — and the quantum side: the
//! subroutine builders in [`qsubs`] and the full variational driver in
//! [`qaoa`]. Every quantum builder has a classical oracle next to it at desk
//! scale; the test suites compare the two exhaustively.

pub mod error;
pub mod grid;
pub mod qaoa;
pub mod qsubs;
pub mod uc;

pub use error::ModelError;
