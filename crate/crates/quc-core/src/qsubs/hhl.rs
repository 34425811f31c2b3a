//! Linear-system solver circuit: phase estimation on an exact Hamiltonian
//! evolution, eigenvalue-controlled ancilla rotation, uncompute.
//!
//! Local register layout: system on `[0, s)` (dimension `2^s` after padding),
//! phase register on `[s, s + k)`, rotation ancilla at `s + k`. On the
//! ancilla-|1⟩ branch the system register is proportional to
//! `matrix⁻¹ · input`, up to the phase-register rounding governed by `k`.

use crate::error::ModelError;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use qsim::{qpe, CMatrix, Circuit, DenseUnitary, Gate, GateKind};

#[derive(Debug, Clone)]
pub struct HHLConfig {
    /// Real symmetric matrix, padded to a power-of-two dimension with
    /// identity rows/columns.
    pub matrix: DMatrix<f64>,
    /// Hamiltonian evolution time; eigenphases `λt/2π` must stay in (0, 1).
    pub evolution_time: f64,
    pub phase_width: usize,
    /// Rotation constant, at most the smallest eigenvalue.
    pub rotation_constant: f64,
}

impl HHLConfig {
    /// Pin the evolution time to `0.9·2π / λ_bound` with `λ_bound` from the
    /// Gershgorin circle bound, and the rotation constant to the true
    /// smallest eigenvalue (computed classically).
    pub fn for_matrix(matrix: DMatrix<f64>, phase_width: usize) -> Result<Self, ModelError> {
        check_symmetric(&matrix)?;
        let n = matrix.nrows();
        let mut bound = 0.0f64;
        for i in 0..n {
            let radius: f64 = (0..n).filter(|&j| j != i).map(|j| matrix[(i, j)].abs()).sum();
            bound = bound.max(matrix[(i, i)] + radius);
        }
        let evolution_time = 0.9 * 2.0 * std::f64::consts::PI / bound;
        let min_eigenvalue = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let cfg = HHLConfig {
            matrix,
            evolution_time,
            phase_width,
            rotation_constant: min_eigenvalue,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn system_qubits(&self) -> usize {
        self.matrix.nrows().trailing_zeros() as usize
    }

    pub fn total_qubits(&self) -> usize {
        self.system_qubits() + self.phase_width + 1
    }

    pub fn ancilla(&self) -> usize {
        self.system_qubits() + self.phase_width
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        check_symmetric(&self.matrix)?;
        assert!(self.matrix.nrows().is_power_of_two(), "pad the matrix first");
        let eigen = SymmetricEigen::new(self.matrix.clone());
        let mut min = f64::INFINITY;
        for &lambda in eigen.eigenvalues.iter() {
            min = min.min(lambda);
            let phase = lambda * self.evolution_time / (2.0 * std::f64::consts::PI);
            if !(phase > 0.0 && phase < 1.0) {
                return Err(ModelError::EigenvalueOutsideWindow {
                    value: lambda,
                    phase,
                });
            }
        }
        // the rotation arcsin(C/λ) needs C at or below the spectrum floor
        if self.rotation_constant > min + 1e-12 {
            return Err(ModelError::RotationConstantTooLarge {
                constant: self.rotation_constant,
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    /// Exact `e^{i·matrix·t}` through the eigendecomposition.
    pub fn evolution_unitary(&self) -> DenseUnitary {
        let eigen = SymmetricEigen::new(self.matrix.clone());
        let n = self.matrix.nrows();
        let q = &eigen.eigenvectors;
        let mut m = CMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let phase =
                        Complex64::from_polar(1.0, eigen.eigenvalues[k] * self.evolution_time);
                    acc += Complex64::new(q[(r, k)], 0.0) * phase * q[(c, k)];
                }
                m[(r, c)] = acc;
            }
        }
        DenseUnitary::new(m).expect("eigendecomposition of a symmetric matrix is unitary")
    }
}

fn check_symmetric(matrix: &DMatrix<f64>) -> Result<(), ModelError> {
    let mut deviation = 0.0f64;
    for i in 0..matrix.nrows() {
        for j in 0..i {
            deviation = deviation.max((matrix[(i, j)] - matrix[(j, i)]).abs());
        }
    }
    if deviation > 1e-9 {
        return Err(ModelError::NotSymmetric(deviation));
    }
    Ok(())
}

/// Pad a real symmetric matrix to the next power of two with identity
/// rows/columns; padded coordinates stay unpopulated when the input vector
/// is zero there.
pub fn pad_to_power_of_two(matrix: &DMatrix<f64>) -> DMatrix<f64> {
    let n = matrix.nrows();
    let padded = n.next_power_of_two();
    if padded == n {
        return matrix.clone();
    }
    let mut out = DMatrix::<f64>::identity(padded, padded);
    out.view_mut((0, 0), (n, n)).copy_from(matrix);
    out
}

/// Build the solver circuit. The caller prepares the input vector on the
/// system register beforehand.
pub fn hhl_circuit(cfg: &HHLConfig) -> Result<Circuit, ModelError> {
    cfg.validate()?;
    let s = cfg.system_qubits();
    let k = cfg.phase_width;
    let ancilla = cfg.ancilla();

    let mut evolution = Circuit::new(s);
    evolution.push(Gate::dense(
        (0..s).collect(),
        cfg.evolution_unitary(),
    )?)?;

    let estimate = qpe(&evolution, &Circuit::new(s), k)?;

    let mut c = Circuit::new(cfg.total_qubits());
    c.extend_mapped(&estimate, &(0..s + k).collect::<Vec<_>>())?;

    // one multi-controlled rotation per phase-register value
    for value in 1u64..(1 << k) {
        let lambda = decoded_eigenvalue(cfg, value);
        let ratio = (cfg.rotation_constant / lambda).min(1.0);
        let angle = 2.0 * ratio.asin();
        let controls: Vec<(usize, bool)> = (0..k)
            .map(|bit| (s + bit, value >> bit & 1 == 1))
            .collect();
        c.push(
            Gate::new(GateKind::CRY(angle), vec![ancilla.into()]).with_controls(&controls),
        )?;
    }

    c.extend_mapped(&estimate.inverse(), &(0..s + k).collect::<Vec<_>>())?;
    Ok(c)
}

/// Eigenvalue encoded by a phase-register value: `λ = value/2^k · 2π/t`.
pub fn decoded_eigenvalue(cfg: &HHLConfig, value: u64) -> f64 {
    value as f64 / (1u64 << cfg.phase_width) as f64 * 2.0 * std::f64::consts::PI
        / cfg.evolution_time
}

/// Success-branch statevector: amplitudes with the rotation ancilla |1⟩ and
/// the phase register back at zero, one entry per system basis state.
pub fn success_branch(state: &qsim::State, cfg: &HHLConfig) -> Vec<Complex64> {
    let s = cfg.system_qubits();
    let anc_bit = 1usize << cfg.ancilla();
    (0..(1usize << s))
        .map(|i| state.amplitude(i | anc_bit))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsim::State;

    fn cosine_similarity(a: &[Complex64], b: &[f64]) -> f64 {
        let dot: Complex64 = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| x * Complex64::new(*y, 0.0))
            .sum();
        let na: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
        dot.norm() / (na * nb)
    }

    #[test]
    fn eigenstate_of_diagonal_matrix_passes_through() {
        // diag(1, 2) with t = 2π/4: eigenphases 1/4 and 1/2 are exact dyadics
        let matrix = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let cfg = HHLConfig {
            matrix,
            evolution_time: std::f64::consts::PI / 2.0,
            phase_width: 3,
            rotation_constant: 1.0,
        };
        let circuit = hhl_circuit(&cfg).unwrap();
        let mut s = State::zero(cfg.total_qubits());
        s.run(&circuit).unwrap();
        let branch = success_branch(&s, &cfg);
        // input |0⟩ is the λ=1 eigenstate and C/λ = 1: full success amplitude
        assert!((branch[0].norm() - 1.0).abs() < 1e-9);
        assert!(branch[1].norm() < 1e-9);
    }

    #[test]
    fn symmetric_two_by_two_eigenvector_input() {
        // [[1, 0.5], [0.5, 1]]: input (|0⟩+|1⟩)/√2 is the λ = 1.5 eigenvector
        let matrix = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let cfg = HHLConfig {
            matrix,
            evolution_time: std::f64::consts::PI / 2.0, // phases 1/8 and 3/8
            phase_width: 3,
            rotation_constant: 0.5,
        };
        let circuit = hhl_circuit(&cfg).unwrap();
        let mut full = Circuit::new(cfg.total_qubits());
        full.push(Gate::h(0)).unwrap();
        full.extend(&circuit).unwrap();
        let mut s = State::zero(cfg.total_qubits());
        s.run(&full).unwrap();
        let branch = success_branch(&s, &cfg);
        assert!(
            (branch[0] - branch[1]).norm() < 1e-9,
            "success branch should stay proportional to [1, 1]"
        );
        // C/λ = 0.5/1.5 = 1/3 of the input mass ends up on the ancilla
        let expect = 1.0 / 3.0 / 2.0f64.sqrt();
        assert!((branch[0].norm() - expect).abs() < 1e-9);
    }

    #[test]
    fn dyadic_aligned_solve_matches_classical_inverse() {
        // both eigenphases dyadic -> the solver is exact, compare directions
        let matrix = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let cfg = HHLConfig {
            matrix: matrix.clone(),
            evolution_time: std::f64::consts::PI / 2.0,
            phase_width: 3,
            rotation_constant: 0.5,
        };
        let circuit = hhl_circuit(&cfg).unwrap();
        let mut s = State::zero(cfg.total_qubits());
        s.run(&circuit).unwrap(); // input |0⟩ = (1, 0)
        let branch = success_branch(&s, &cfg);
        let classical = matrix
            .clone()
            .lu()
            .solve(&nalgebra::DVector::from_column_slice(&[1.0, 0.0]))
            .unwrap();
        let sim = cosine_similarity(&branch, classical.as_slice());
        assert!(sim > 1.0 - 1e-9, "cosine similarity {sim}");
    }

    #[test]
    fn window_violation_is_rejected() {
        let matrix = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let cfg = HHLConfig {
            matrix,
            evolution_time: std::f64::consts::PI, // λ=2 -> phase 1.0, outside
            phase_width: 3,
            rotation_constant: 1.0,
        };
        assert!(matches!(
            hhl_circuit(&cfg),
            Err(ModelError::EigenvalueOutsideWindow { .. })
        ));
    }

    #[test]
    fn padding_keeps_unused_coordinates_empty() {
        let matrix = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let padded = pad_to_power_of_two(&matrix);
        assert_eq!(padded.nrows(), 4);
        assert_eq!(padded[(3, 3)], 1.0);
        assert_eq!(padded[(3, 0)], 0.0);

        let cfg = HHLConfig::for_matrix(padded, 6).unwrap();
        let circuit = hhl_circuit(&cfg).unwrap();
        let mut full = Circuit::new(cfg.total_qubits());
        full.push(Gate::h(0)).unwrap(); // mass on coordinates 0 and 1 only
        full.extend(&circuit).unwrap();
        let mut s = State::zero(cfg.total_qubits());
        s.run(&full).unwrap();
        let branch = success_branch(&s, &cfg);
        assert!(branch[3].norm() < 1e-9, "padded coordinate stays empty");
    }
}
