//! Diagonal extraction for oracle comparison.
//!
//! A cost-layer circuit touches the commitment register only through phases
//! and control wires, so it is block-diagonal over the commitment basis.
//! One run on the uniform commitment superposition (ancillas |0⟩) therefore
//! recovers the whole diagonal: the amplitude surviving at `(u, 0)` is
//! `diag(u)/√M`, and the branch mass stranded in nonzero ancilla states is
//! the leakage.

use crate::error::ModelError;
use num_complex::Complex64;
use qsim::{Circuit, Gate, State};

#[derive(Debug, Clone)]
pub struct DiagonalProbe {
    /// Realized diagonal entry per commitment basis state.
    pub entries: Vec<Complex64>,
    /// `1 - |entry|²` per basis state: amplitude stranded outside the
    /// ancilla-zero subspace.
    pub leakage: Vec<f64>,
}

impl DiagonalProbe {
    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().copied().fold(0.0, f64::max)
    }

    pub fn phases(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.arg()).collect()
    }
}

/// Probe the diagonal of `circuit` over the first `main_width` qubits with
/// all other qubits |0⟩. Capped at 10 commitment qubits. The circuit must be
/// net block-diagonal over the commitment basis (every cost-layer builder
/// here is); block-diagonality is verified from the run itself, since it
/// forces each commitment branch to keep exactly its 1/M share of the mass.
pub fn extract_diagonal(circuit: &Circuit, main_width: usize) -> Result<DiagonalProbe, ModelError> {
    if main_width > 10 {
        return Err(ModelError::OracleTooWide(main_width));
    }

    let branches = 1usize << main_width;
    let mut prep = Circuit::new(circuit.qubit_count);
    for q in 0..main_width {
        prep.push(Gate::h(q))?;
    }
    let mut state = State::zero(circuit.qubit_count);
    state.run(&prep)?;
    state.run(circuit)?;

    let register: Vec<qsim::QubitId> = (0..main_width).map(qsim::QubitId).collect();
    let masses = state.marginal(&register)?;
    let share = 1.0 / branches as f64;
    for (u, &mass) in masses.iter().enumerate() {
        if (mass - share).abs() > 1e-9 {
            return Err(ModelError::NotBlockDiagonal {
                branch: u,
                mass: mass * branches as f64,
            });
        }
    }

    let scale = (branches as f64).sqrt();
    let mut entries = Vec::with_capacity(branches);
    let mut leakage = Vec::with_capacity(branches);
    for u in 0..branches {
        let amp = state.amplitude(u) * scale;
        entries.push(amp);
        leakage.push((1.0 - amp.norm_sqr()).max(0.0));
    }
    Ok(DiagonalProbe { entries, leakage })
}

/// Emit a probe next to reference phases as CSV (header row included).
pub fn diagonal_csv(probe: &DiagonalProbe, reference: &[f64]) -> String {
    let mut out = String::from("state,realized_phase,reference_phase,abs_error,leakage\n");
    for (u, entry) in probe.entries.iter().enumerate() {
        let realized = entry.arg();
        let reference = reference.get(u).copied().unwrap_or(0.0);
        let error = phase_distance(realized, reference);
        out.push_str(&format!(
            "{u},{realized},{reference},{error},{leak}\n",
            leak = probe.leakage[u]
        ));
    }
    out
}

/// Distance between two phases on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let d = (a - b).rem_euclid(tau);
    d.min(tau - d)
}
