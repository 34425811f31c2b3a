//! Diagonal phase `e^{i·γ'·|cos(2π·m̃/2^width)|}` over a fixed-point register.
//!
//! The target diagonal is decomposed into per-bit-subset angles by an exact
//! Möbius (inclusion-exclusion) transform, so the reconstruction
//! `f(m̃) = Σ_{S ⊆ bits(m̃)} b_S` is an identity rather than a truncated
//! series, and the absolute value is folded into the diagonal directly. The
//! circuit shape is the usual one: an RZ-family phase per subset, realized
//! as multi-controlled Phase gates. The empty-subset angle is a global phase
//! applied with an X-conjugated Phase pair so the diagonal values are
//! absolute, not relative.

use crate::error::ModelError;
use qsim::{Circuit, Gate};

/// Per-subset phase coefficients for one diagonal.
#[derive(Debug, Clone)]
pub struct CosPhaseTable {
    pub gamma_prime: f64,
    pub width: usize,
    /// `coefficients[mask]` is the angle attached to the bit subset `mask`.
    pub coefficients: Vec<f64>,
}

impl CosPhaseTable {
    /// Reconstruct the diagonal phase at basis state `m`.
    pub fn reconstruct(&self, m: usize) -> f64 {
        let mut acc = 0.0;
        // iterate over submasks of m
        let mut sub = m;
        loop {
            acc += self.coefficients[sub];
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & m;
        }
        acc
    }

    /// The target value the table encodes at `m`.
    pub fn target(&self, m: usize) -> f64 {
        let angle = 2.0 * std::f64::consts::PI * m as f64 / (1u64 << self.width) as f64;
        self.gamma_prime * angle.cos().abs()
    }
}

/// Exact subset coefficients for `f(m̃) = γ'·|cos(2π·m̃/2^width)|` via the
/// in-place Möbius transform over the subset lattice.
pub fn cos_phase_table(gamma_prime: f64, width: usize) -> CosPhaseTable {
    assert!(width >= 2, "need at least the two quadrant bits");
    let size = 1usize << width;
    let mut coefficients: Vec<f64> = (0..size)
        .map(|m| {
            let angle = 2.0 * std::f64::consts::PI * m as f64 / size as f64;
            gamma_prime * angle.cos().abs()
        })
        .collect();
    for bit in 0..width {
        let step = 1usize << bit;
        for mask in 0..size {
            if mask & step != 0 {
                coefficients[mask] -= coefficients[mask ^ step];
            }
        }
    }
    CosPhaseTable {
        gamma_prime,
        width,
        coefficients,
    }
}

/// Diagonal circuit realizing the table on `target` within a register of
/// `qubit_count` qubits: `U|m̃⟩ = e^{i·f(m̃)}|m̃⟩`.
pub fn cos_phase_circuit(
    table: &CosPhaseTable,
    target: &[usize],
    qubit_count: usize,
) -> Result<Circuit, ModelError> {
    if target.len() != table.width {
        return Err(ModelError::TableWidth {
            expected: table.width,
            got: target.len(),
        });
    }
    let mut c = Circuit::new(qubit_count);

    let constant = table.coefficients[0];
    if constant.abs() > 0.0 {
        // global phase: Phase on both branches of an arbitrary qubit
        let q = target[0];
        c.push(Gate::phase(q, constant))?;
        c.push(Gate::x(q))?;
        c.push(Gate::phase(q, constant))?;
        c.push(Gate::x(q))?;
    }

    for mask in 1..table.coefficients.len() {
        let angle = table.coefficients[mask];
        if angle.abs() < 1e-15 {
            continue;
        }
        let top = (usize::BITS - 1 - mask.leading_zeros()) as usize;
        let controls: Vec<(usize, bool)> = (0..table.width)
            .filter(|&b| b != top && mask >> b & 1 == 1)
            .map(|b| (target[b], true))
            .collect();
        c.push(Gate::phase(target[top], angle).with_controls(&controls))?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use qsim::State;

    #[test]
    fn width_two_table_values() {
        // f over m ∈ {0,1,2,3} is {1,0,1,0}: b_∅=1, b_{0}=-1, b_{1}=0, b_{01}=0
        let table = cos_phase_table(1.0, 2);
        assert!((table.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((table.coefficients[1] + 1.0).abs() < 1e-12);
        assert!(table.coefficients[2].abs() < 1e-12);
        assert!(table.coefficients[3].abs() < 1e-12);
    }

    #[test]
    fn zero_gamma_gives_zero_table_and_identity_circuit() {
        let table = cos_phase_table(0.0, 4);
        assert!(table.coefficients.iter().all(|b| b.abs() < 1e-15));
        let c = cos_phase_circuit(&table, &[0, 1, 2, 3], 4).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn reconstruction_is_exact_for_widths_two_to_eight() {
        for width in 2..=8 {
            let table = cos_phase_table(0.83, width);
            for m in 0..(1usize << width) {
                assert!(
                    (table.reconstruct(m) - table.target(m)).abs() < 1e-9,
                    "width {width}, m {m}"
                );
            }
        }
    }

    #[test]
    fn circuit_diagonal_matches_width_two_example() {
        let table = cos_phase_table(1.0, 2);
        let c = cos_phase_circuit(&table, &[0, 1], 2).unwrap();
        let expect = [1.0, 0.0, 1.0, 0.0];
        for m in 0..4usize {
            let mut s = State::basis(2, m);
            s.run(&c).unwrap();
            let want = Complex64::from_polar(1.0, expect[m]);
            assert!((s.amplitude(m) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn circuit_diagonal_matches_target_width_four() {
        let table = cos_phase_table(0.7, 4);
        let c = cos_phase_circuit(&table, &[0, 1, 2, 3], 4).unwrap();
        for m in 0..16usize {
            let mut s = State::basis(4, m);
            s.run(&c).unwrap();
            let want = Complex64::from_polar(1.0, table.target(m));
            assert!((s.amplitude(m) - want).norm() < 1e-9, "m={m}");
        }
    }

    #[test]
    fn circuit_respects_offset_register() {
        // table register embedded at qubits 1..3 of a 4-qubit circuit
        let table = cos_phase_table(0.4, 2);
        let c = cos_phase_circuit(&table, &[1, 2], 4).unwrap();
        for m in 0..4usize {
            let idx = m << 1;
            let mut s = State::basis(4, idx);
            s.run(&c).unwrap();
            let want = Complex64::from_polar(1.0, table.target(m));
            assert!((s.amplitude(idx) - want).norm() < 1e-9);
        }
    }
}
