//! Quantum Fourier transform and phase estimation builders.
//!
//! `qft(n)` realizes the textbook DFT matrix `F[j,k] = ω^{jk}/√N` with
//! `ω = e^{2πi/N}` under the qubit-0-is-LSB index convention: the rotation
//! ladder produces the bit-reversed transform and a final swap layer restores
//! plain ordering, so the circuit matrix equals the DFT exactly.

use crate::circuit::Circuit;
use crate::error::SimError;
use crate::gate::{Gate, GateKind};
use std::f64::consts::PI;

/// Discrete Fourier transform on `width` qubits.
pub fn qft(width: usize) -> Circuit {
    assert!(width >= 1, "qft needs at least one qubit");
    let mut c = Circuit::new(width);
    for i in (0..width).rev() {
        c.push(Gate::h(i)).expect("valid");
        for j in (0..i).rev() {
            // controlled phase 2π / 2^{i-j+1}
            c.push(Gate::cphase(j, i, PI / (1usize << (i - j)) as f64))
                .expect("valid");
        }
    }
    for i in 0..width / 2 {
        c.push(Gate::swap(i, width - 1 - i)).expect("valid");
    }
    c
}

/// Inverse Fourier transform: `inverse(qft(width))`.
pub fn iqft(width: usize) -> Circuit {
    qft(width).inverse()
}

/// Phase estimation with explicit register placement.
///
/// `unitary` and `eigenstate_prep` are circuits over the full width of the
/// returned circuit; `phase_register[k]` holds bit `k` of the estimate. The
/// protocol is: eigenstate prep, Hadamards on the phase register, controlled
/// `U^{2^k}` powers, inverse QFT on the phase register. For an eigenvalue
/// `e^{2πiφ}` with `φ` a multiple of `2^{-width}`, the register reads
/// `φ·2^{width}` with probability 1.
pub fn qpe_with_register(
    unitary: &Circuit,
    eigenstate_prep: &Circuit,
    phase_register: &[usize],
) -> Result<Circuit, SimError> {
    let mut width = unitary.qubit_count.max(eigenstate_prep.qubit_count);
    for &q in phase_register {
        width = width.max(q + 1);
    }
    let mut c = Circuit::new(width);
    let identity: Vec<usize> = (0..width).collect();
    c.extend_mapped(eigenstate_prep, &identity)?;
    for &q in phase_register {
        c.push(Gate::h(q))?;
    }
    for (k, &q) in phase_register.iter().enumerate() {
        append_controlled_power(&mut c, unitary, k, q)?;
    }
    let inv = iqft(phase_register.len());
    c.extend_mapped(&inv, phase_register)?;
    Ok(c)
}

/// Phase estimation over the default layout: system on `[0, s)`, phase
/// register on `[s, s + phase_width)`.
pub fn qpe(
    unitary: &Circuit,
    eigenstate_prep: &Circuit,
    phase_width: usize,
) -> Result<Circuit, SimError> {
    assert!(phase_width >= 1, "phase register needs at least one qubit");
    let s = unitary.qubit_count;
    if eigenstate_prep.qubit_count > s {
        return Err(SimError::RegisterMismatch {
            expected: s,
            got: eigenstate_prep.qubit_count,
        });
    }
    let mut prep = eigenstate_prep.clone();
    prep.qubit_count = s;
    let phase: Vec<usize> = (s..s + phase_width).collect();
    qpe_with_register(unitary, &prep, &phase)
}

/// `controlled-U^{2^k}` on `control`. A circuit consisting of a single
/// uncontrolled dense gate is powered by matrix squaring; anything else is
/// repeated `2^k` times with the control attached to every gate.
fn append_controlled_power(
    c: &mut Circuit,
    unitary: &Circuit,
    k: usize,
    control: usize,
) -> Result<(), SimError> {
    if unitary.ops.len() == 1 && unitary.ops[0].controls.is_empty() {
        if let GateKind::DenseUnitary(u) = &unitary.ops[0].kind {
            let powered = u.pow2(k);
            let mut g = unitary.ops[0].clone();
            g.kind = GateKind::DenseUnitary(powered);
            c.push(g.controlled(control, true))?;
            return Ok(());
        }
    }
    let embedded = unitary.controlled_embed(&[(control, true)])?;
    for _ in 0..(1usize << k) {
        c.extend(&embedded)?;
    }
    Ok(())
}
