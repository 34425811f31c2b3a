//! Amplitude-difference gadget: maps the amplitudes at two chosen basis
//! states so that index 0 ends up holding `(a_i - a_j)/√2`.
//!
//! Protocol: X gates move index `i` to 0 (tracking where `j` lands as
//! `j ⊕ i`), a CX cascade from the most significant set bit of the moved `j`
//! collapses it to a single set bit `k`, then H and X on `k` place the
//! difference at index 0 and the sum at index `2^k`.

use crate::error::ModelError;
use qsim::{Circuit, Gate};

/// Gates of the gadget alone, over `n` qubits.
pub fn diff_gates(n: usize, i: usize, j: usize) -> Result<Circuit, ModelError> {
    let dim = 1usize << n;
    if i == j {
        return Err(ModelError::EqualIndices);
    }
    for idx in [i, j] {
        if idx >= dim {
            return Err(ModelError::IndexOutOfRange { index: idx, dim });
        }
    }

    let mut c = Circuit::new(n);
    for bit in 0..n {
        if i >> bit & 1 == 1 {
            c.push(Gate::x(bit))?;
        }
    }
    let moved_j = j ^ i;
    let k = (usize::BITS - 1 - moved_j.leading_zeros()) as usize;
    for bit in 0..k {
        if moved_j >> bit & 1 == 1 {
            c.push(Gate::cx(k, bit))?;
        }
    }
    c.push(Gate::h(k))?;
    c.push(Gate::x(k))?;
    Ok(c)
}

/// Append the gadget to a state-preparation circuit: the final statevector's
/// 0-entry equals `(a_i - a_j)/√2` where `a` are the input circuit's final
/// amplitudes.
pub fn get_diff(circuit: &Circuit, i: usize, j: usize) -> Result<Circuit, ModelError> {
    let mut out = circuit.clone();
    let gadget = diff_gates(circuit.qubit_count, i, j)?;
    out.extend(&gadget)?;
    Ok(out)
}
