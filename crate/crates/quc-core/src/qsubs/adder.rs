//! Fixed-point weighted adder in the Fourier basis.
//!
//! Each control qubit `i` conditionally adds a classical weight `a_i` to an
//! `m`-bit fixed-point register (value `x/2^m`, MSB = bit `m-1`). The add is
//! a phase: after a QFT on the target, control `i` applies phase
//! `2π·a_i·2^j` to target bit `j`; the inverse QFT reads the sum back out.
//! In the Fourier domain the accumulated phases equal `2π·Σ u_i a_i · y`
//! exactly for arbitrary real weights; the basis readout is exact when every
//! weight is an `m`-bit dyadic.

use crate::error::ModelError;
use qsim::{qft, Circuit, Gate};

/// Classical weights for the adder, each in (-1, 1). Positive weights must
/// sum below 1 so the register cannot wrap.
#[derive(Debug, Clone)]
pub struct AdderWeights {
    weights: Vec<f64>,
    width: usize,
}

impl AdderWeights {
    pub fn new(weights: Vec<f64>, width: usize) -> Result<Self, ModelError> {
        assert!(width >= 1);
        for &w in &weights {
            if !(w.is_finite() && w > -1.0 && w < 1.0) {
                return Err(ModelError::WeightOutOfRange(w));
            }
        }
        let positive: f64 = weights.iter().filter(|w| **w > 0.0).sum();
        if positive >= 1.0 {
            return Err(ModelError::WeightOverflow(positive));
        }
        Ok(AdderWeights { weights, width })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// Build the adder over a full register of `qubit_count` qubits: QFT on
/// `target`, the controlled phase ladder, inverse QFT. The caller supplies
/// the target register initialized to |0...0⟩.
pub fn weighted_adder(
    qubit_count: usize,
    weights: &AdderWeights,
    controls: &[usize],
    target: &[usize],
) -> Result<Circuit, ModelError> {
    assert_eq!(
        weights.weights().len(),
        controls.len(),
        "one weight per control"
    );
    assert_eq!(weights.width(), target.len(), "target register width");

    let mut c = Circuit::new(qubit_count);
    c.extend_mapped(&qft(target.len()), target)?;
    for (&ctrl, &a) in controls.iter().zip(weights.weights()) {
        for (j, &tq) in target.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * a * (1u64 << j) as f64;
            c.push(Gate::cphase(ctrl, tq, angle))?;
        }
    }
    c.extend_mapped(&qsim::iqft(target.len()), target)?;
    Ok(c)
}
