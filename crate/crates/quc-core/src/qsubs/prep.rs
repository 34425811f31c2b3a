//! Amplitude encoding of nodal power injections, conditioned on the
//! commitment bits.
//!
//! The vector register is loaded with the all-generators-on injection vector
//! (generator powers positive, load demands negative, normalized by the
//! all-on norm `r`), via an exact multiplexed-RY tree plus sign flips. A
//! cascade of multi-controlled X gates then raises the off-generator flag
//! `C` on every vector component whose generator is off in the commitment
//! register, so the flag-|0⟩ branch carries exactly the active injections.
//! `r` is deliberately u-independent: a u-dependent norm could not be folded
//! into the downstream phase calibration.

use crate::error::ModelError;
use crate::uc::UCInstance;
use qsim::{Circuit, Gate};

/// Register positions the preparation acts on.
#[derive(Debug, Clone)]
pub struct PrepRegisters {
    /// Commitment qubits of the relevant timestep, one per generator.
    pub commit: Vec<usize>,
    /// Vector register, `⌈log₂ m⌉` qubits for `m` grid nodes.
    pub vector: Vec<usize>,
    /// Spare normalization ancilla; allocated for layout parity, kept idle
    /// because the rotation tree encodes exact amplitudes.
    pub norm_ancilla: usize,
    /// Off-generator flag.
    pub off_flag: usize,
}

/// All-on injection vector in matrix order, padded to `2^vector_len`, plus
/// its norm `r`.
pub fn all_on_injections(instance: &UCInstance, powers: &[f64], t: usize, dim: usize) -> (Vec<f64>, f64) {
    let mut v = vec![0.0; dim];
    let inj = instance.injections(powers, t);
    v[..inj.len()].copy_from_slice(&inj);
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (v, r)
}

/// Exact state preparation of a real unit vector on the given qubits:
/// a binary tree of multi-controlled RY rotations for the magnitudes, then
/// a basis-state phase flip per negative entry.
pub fn encode_real_vector(
    circuit: &mut Circuit,
    qubits: &[usize],
    vector: &[f64],
) -> Result<(), ModelError> {
    let q = qubits.len();
    let dim = 1usize << q;
    assert_eq!(vector.len(), dim, "vector must fill the register");

    // norms of subtrees: level d groups indices by their low d bits fixed
    // from the MSB side; rotate bit q-1-d conditioned on the prefix
    for level in 0..q {
        let bit = q - 1 - level;
        for prefix in 0..(1usize << level) {
            // prefix occupies bits q-1 .. q-level
            let base = prefix << (bit + 1);
            let half = 1usize << bit;
            let norm_sqr = |from: usize, len: usize| -> f64 {
                vector[from..from + len].iter().map(|x| x * x).sum()
            };
            let w0 = norm_sqr(base, half);
            let w1 = norm_sqr(base + half, half);
            if w0 + w1 < 1e-300 {
                continue;
            }
            let angle = 2.0 * w1.sqrt().atan2(w0.sqrt());
            if angle.abs() < 1e-15 {
                continue;
            }
            let controls: Vec<(usize, bool)> = (0..level)
                .map(|d| {
                    let cbit = q - 1 - d;
                    (qubits[cbit], prefix >> (level - 1 - d) & 1 == 1)
                })
                .collect();
            circuit.push(Gate::ry(qubits[bit], angle).with_controls(&controls))?;
        }
    }

    for (index, &value) in vector.iter().enumerate() {
        if value < 0.0 {
            basis_phase_flip(circuit, qubits, index)?;
        }
    }
    Ok(())
}

/// Multiply the amplitude of one basis state of the sub-register by -1.
fn basis_phase_flip(circuit: &mut Circuit, qubits: &[usize], index: usize) -> Result<(), ModelError> {
    let q = qubits.len();
    if index == 0 {
        // conjugate by X so the phase lands on the all-zero pattern
        circuit.push(Gate::x(qubits[0]))?;
        let controls: Vec<(usize, bool)> = (1..q).map(|b| (qubits[b], false)).collect();
        circuit.push(
            Gate::phase(qubits[0], std::f64::consts::PI).with_controls(&controls),
        )?;
        circuit.push(Gate::x(qubits[0]))?;
        return Ok(());
    }
    let top = (usize::BITS - 1 - index.leading_zeros()) as usize;
    let controls: Vec<(usize, bool)> = (0..q)
        .filter(|&b| b != top)
        .map(|b| (qubits[b], index >> b & 1 == 1))
        .collect();
    circuit.push(Gate::phase(qubits[top], std::f64::consts::PI).with_controls(&controls))?;
    Ok(())
}

/// Build the preparation over a register of `qubit_count` qubits. Returns
/// the circuit and the all-on norm `r`.
pub fn prep_power_state(
    instance: &UCInstance,
    powers: &[f64],
    t: usize,
    regs: &PrepRegisters,
    qubit_count: usize,
) -> Result<(Circuit, f64), ModelError> {
    let nodes = instance.grid.nodes.len();
    let needed = nodes.next_power_of_two().trailing_zeros() as usize;
    if regs.vector.len() != needed.max(1) {
        return Err(ModelError::RegisterWidth {
            expected: needed.max(1),
            got: regs.vector.len(),
        });
    }
    if regs.commit.len() != instance.generator_count() {
        return Err(ModelError::RegisterWidth {
            expected: instance.generator_count(),
            got: regs.commit.len(),
        });
    }

    let dim = 1usize << regs.vector.len();
    let (all_on, r) = all_on_injections(instance, powers, t, dim);
    if r < 1e-12 {
        return Err(ModelError::DegenerateInjections);
    }
    let unit: Vec<f64> = all_on.iter().map(|x| x / r).collect();

    let mut c = Circuit::new(qubit_count);
    encode_real_vector(&mut c, &regs.vector, &unit)?;

    // flag components of generators that are off: MCX on the off-flag,
    // controlled on the commitment bit being 0 and the vector register
    // pointing at that generator's matrix position
    for g in 0..instance.generator_count() {
        let position = instance.bmatrix().position_of(instance.generator_node(g));
        let mut controls: Vec<(usize, bool)> = vec![(regs.commit[g], false)];
        controls.extend(
            regs.vector
                .iter()
                .enumerate()
                .map(|(b, &q)| (q, position >> b & 1 == 1)),
        );
        c.push(Gate::x(regs.off_flag).with_controls(&controls))?;
    }
    Ok((c, r))
}
