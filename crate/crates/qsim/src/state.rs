//! Dense statevector and the gate-application kernels.
//!
//! Gates are applied in place with stride iteration over the amplitude array.
//! Diagonal kinds get a multiply-only sweep; everything else goes through a
//! gather/apply/scatter over the target subspace, restricted to indices whose
//! control bits match. A `State` is single-writer: callers must not apply two
//! gates to one state concurrently. Distinct states may evolve on distinct
//! threads.

use crate::circuit::Circuit;
use crate::error::SimError;
use crate::gate::{Gate, GateKind, QubitId};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Measurement histogram: register value (qubit `register[p]` is bit `p`)
/// mapped to shot count. BTreeMap keeps emission order deterministic.
pub type Histogram = BTreeMap<u64, u32>;

/// Normalized complex amplitude vector over `2^qubit_count` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    qubit_count: usize,
    amps: Vec<Complex64>,
}

impl State {
    /// |0...0⟩ on `qubit_count` qubits.
    pub fn zero(qubit_count: usize) -> Self {
        Self::basis(qubit_count, 0)
    }

    /// Computational basis state |index⟩.
    pub fn basis(qubit_count: usize, index: usize) -> Self {
        assert!(index < (1usize << qubit_count), "basis index out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubit_count];
        amps[index] = Complex64::new(1.0, 0.0);
        State { qubit_count, amps }
    }

    /// Wrap an amplitude vector of length 2^n; must be normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let n = amps.len().trailing_zeros() as usize;
        if 1usize << n != amps.len() {
            return Err(SimError::BadMatrixDim {
                dim: amps.len(),
                max: 64,
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::NonUnitary {
                dim: amps.len(),
                deviation: (norm - 1.0).abs(),
            });
        }
        Ok(State {
            qubit_count: n,
            amps,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply one gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        gate.validate(self.qubit_count)?;
        match &gate.kind {
            GateKind::Z => {
                self.apply_diag1(gate.targets[0].0, -Complex64::ONE, &gate.controls)
            }
            GateKind::RZ(t) | GateKind::CRZ(t) => {
                let d0 = Complex64::from_polar(1.0, -t / 2.0);
                let d1 = Complex64::from_polar(1.0, t / 2.0);
                self.apply_diag1_full(gate.targets[0].0, d0, d1, &gate.controls)
            }
            GateKind::Phase(t) => self.apply_diag1(
                gate.targets[0].0,
                Complex64::from_polar(1.0, *t),
                &gate.controls,
            ),
            GateKind::X | GateKind::H | GateKind::RX(_) | GateKind::RY(_) | GateKind::CRX(_)
            | GateKind::CRY(_) => {
                let m = gate.base_matrix();
                self.apply_single(
                    gate.targets[0].0,
                    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]],
                    &gate.controls,
                )
            }
            GateKind::Swap | GateKind::DenseUnitary(_) => {
                let targets: Vec<usize> = gate.targets.iter().map(|q| q.0).collect();
                let m = gate.base_matrix();
                self.apply_dense(&targets, &m, &gate.controls)
            }
        }
        Ok(())
    }

    /// Sequential fold of `apply` over the circuit's gates.
    pub fn run(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.qubit_count != self.qubit_count {
            return Err(SimError::RegisterMismatch {
                expected: circuit.qubit_count,
                got: self.qubit_count,
            });
        }
        for gate in &circuit.ops {
            self.apply(gate)?;
        }
        Ok(())
    }

    /// Diagonal single-qubit sweep where only the |1⟩ entry picks up a factor.
    fn apply_diag1(&mut self, target: usize, d1: Complex64, controls: &[(QubitId, bool)]) {
        let tbit = 1usize << target;
        let walker = Subspace::new(self.qubit_count, &[target], controls);
        walker.for_each(tbit, |idx| {
            self.amps[idx] *= d1;
        });
    }

    /// Diagonal single-qubit sweep with factors on both branches.
    fn apply_diag1_full(
        &mut self,
        target: usize,
        d0: Complex64,
        d1: Complex64,
        controls: &[(QubitId, bool)],
    ) {
        let tbit = 1usize << target;
        let walker = Subspace::new(self.qubit_count, &[target], controls);
        walker.for_each(0, |idx| {
            self.amps[idx] *= d0;
        });
        walker.for_each(tbit, |idx| {
            self.amps[idx] *= d1;
        });
    }

    /// General 2x2 kernel over amplitude pairs differing in the target bit.
    fn apply_single(&mut self, target: usize, m: [Complex64; 4], controls: &[(QubitId, bool)]) {
        let tbit = 1usize << target;
        let walker = Subspace::new(self.qubit_count, &[target], controls);
        walker.for_each(0, |i0| {
            let i1 = i0 | tbit;
            let a = self.amps[i0];
            let b = self.amps[i1];
            self.amps[i0] = m[0] * a + m[1] * b;
            self.amps[i1] = m[2] * a + m[3] * b;
        });
    }

    /// Gather/apply/scatter for a k-qubit dense matrix. Sub-index bit `p`
    /// corresponds to `targets[p]`.
    fn apply_dense(
        &mut self,
        targets: &[usize],
        m: &crate::matrix::CMatrix,
        controls: &[(QubitId, bool)],
    ) {
        let k = targets.len();
        let dim = 1usize << k;

        // Index of each sub-basis pattern inside the full register.
        let mut offsets = vec![0usize; dim];
        for (s, off) in offsets.iter_mut().enumerate() {
            let mut bits = 0usize;
            for (p, &t) in targets.iter().enumerate() {
                if s >> p & 1 == 1 {
                    bits |= 1 << t;
                }
            }
            *off = bits;
        }

        let walker = Subspace::new(self.qubit_count, targets, controls);
        let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
        walker.for_each(0, |idx0| {
            for (s, off) in offsets.iter().enumerate() {
                scratch[s] = self.amps[idx0 | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for s in 0..dim {
                    acc += m[(r, s)] * scratch[s];
                }
                self.amps[idx0 | off] = acc;
            }
        });
    }

    /// Marginal probabilities of a sub-register: bit `p` of the outcome is
    /// qubit `register[p]`.
    pub fn marginal(&self, register: &[QubitId]) -> Result<Vec<f64>, SimError> {
        let r = register.len();
        if r > 24 {
            return Err(SimError::RegisterTooWide(r));
        }
        for q in register {
            if q.0 >= self.qubit_count {
                return Err(SimError::QubitOutOfRange {
                    index: q.0,
                    qubit_count: self.qubit_count,
                });
            }
        }
        let mut probs = vec![0.0f64; 1 << r];
        for (idx, amp) in self.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut key = 0usize;
            for (pos, q) in register.iter().enumerate() {
                if idx >> q.0 & 1 == 1 {
                    key |= 1 << pos;
                }
            }
            probs[key] += p;
        }
        Ok(probs)
    }

    /// Draw `shots` samples from the exact marginal distribution of the
    /// register. Deterministic for a fixed seed.
    pub fn sample(
        &self,
        register: &[QubitId],
        shots: u32,
        seed: u64,
    ) -> Result<Histogram, SimError> {
        let probs = self.marginal(register)?;
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        let total = acc.max(f64::MIN_POSITIVE);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = Histogram::new();
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let k = cumulative.partition_point(|&c| c < u).min(probs.len() - 1);
            *hist.entry(k as u64).or_insert(0) += 1;
        }
        Ok(hist)
    }
}

/// Insert a zero bit at `position`, shifting higher bits up.
#[inline]
fn insert_zero_bit(value: usize, position: usize) -> usize {
    let low = value & ((1usize << position) - 1);
    ((value >> position) << (position + 1)) | low
}

/// Enumerator of the indices whose target bits are zero and whose control
/// bits match their polarities. Only the free bits are iterated, so gates
/// with many controls sweep an exponentially smaller subspace.
struct Subspace {
    fixed_positions: Vec<usize>, // sorted targets and controls
    control_value: usize,
    free_count: usize,
}

impl Subspace {
    fn new(qubit_count: usize, targets: &[usize], controls: &[(QubitId, bool)]) -> Self {
        let mut fixed_positions: Vec<usize> = targets
            .iter()
            .copied()
            .chain(controls.iter().map(|(q, _)| q.0))
            .collect();
        fixed_positions.sort_unstable();
        let mut control_value = 0usize;
        for &(q, polarity) in controls {
            if polarity {
                control_value |= 1 << q.0;
            }
        }
        Subspace {
            free_count: qubit_count - fixed_positions.len(),
            fixed_positions,
            control_value,
        }
    }

    /// Visit every matching index with the given target bits OR-ed in.
    #[inline]
    fn for_each(&self, target_bits: usize, mut f: impl FnMut(usize)) {
        let value = self.control_value | target_bits;
        for base in 0..(1usize << self.free_count) {
            let mut idx = base;
            for &p in &self.fixed_positions {
                idx = insert_zero_bit(idx, p);
            }
            f(idx | value);
        }
    }
}

/// Render a register value as a bitstring, most significant bit first.
pub fn bitstring(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|b| if value >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn h_on_zero_gives_plus() {
        let mut s = State::zero(1);
        s.apply(&Gate::h(0)).unwrap();
        assert!((s.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn x_flips_least_significant_qubit() {
        // qubit 0 is the least significant bit: X on qubit 0 of |00⟩ -> index 1.
        let mut s = State::zero(2);
        s.apply(&Gate::x(0)).unwrap();
        assert!((s.probability(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(2);
        let mut s = State::basis(2, 3);
        s.run(&c).unwrap();
        assert!((s.probability(3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn double_hadamard_is_identity() {
        let mut c = Circuit::new(1);
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::h(0)).unwrap();
        let mut s = State::zero(1);
        s.run(&c).unwrap();
        assert!((s.probability(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crz_phase_convention_on_11() {
        // CRZ(pi) with control q1, target q0 on |11⟩ multiplies by e^{i pi/2}.
        let mut s = State::basis(2, 3);
        s.apply(&Gate::crz(1, 0, std::f64::consts::PI)).unwrap();
        let expect = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2);
        assert!((s.amplitude(3) - expect).norm() < 1e-12);
    }

    #[test]
    fn control_polarity_zero_fires_on_zero() {
        let mut s = State::zero(2);
        s.apply(&Gate::x(0).controlled(1, false)).unwrap();
        assert!((s.probability(1) - 1.0).abs() < 1e-12);
        let mut s = State::basis(2, 2);
        s.apply(&Gate::x(0).controlled(1, false)).unwrap();
        assert!((s.probability(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_sample_is_deterministic() {
        let s = State::basis(2, 1);
        let h = s.sample(&[QubitId(0), QubitId(1)], 100, 7).unwrap();
        assert_eq!(h.get(&1), Some(&100));
    }

    #[test]
    fn plus_state_sampling_is_balanced() {
        let mut s = State::zero(1);
        s.apply(&Gate::h(0)).unwrap();
        let shots = 100_000u32;
        let h = s.sample(&[QubitId(0)], shots, 42).unwrap();
        let ones = *h.get(&1).unwrap() as f64;
        // three sigma of a fair binomial
        let sigma = (shots as f64 * 0.25).sqrt();
        assert!((ones - shots as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn sample_same_seed_same_histogram() {
        let mut s = State::zero(3);
        for q in 0..3 {
            s.apply(&Gate::h(q)).unwrap();
        }
        let a = s.sample(&[QubitId(0), QubitId(2)], 1000, 5).unwrap();
        let b = s.sample(&[QubitId(0), QubitId(2)], 1000, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn swap_exchanges_bits() {
        let mut s = State::basis(2, 1);
        s.apply(&Gate::swap(0, 1)).unwrap();
        assert!((s.probability(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distinct_states_evolve_on_distinct_threads() {
        let mut circuit = Circuit::new(3);
        for q in 0..3 {
            circuit.push(Gate::h(q)).unwrap();
            circuit.push(Gate::rz(q, 0.1 + q as f64)).unwrap();
        }
        let circuit = std::sync::Arc::new(circuit);
        let handles: Vec<_> = (0..4usize)
            .map(|idx| {
                let circuit = std::sync::Arc::clone(&circuit);
                std::thread::spawn(move || {
                    let mut s = State::basis(3, idx);
                    s.run(&circuit).unwrap();
                    s.amplitudes().to_vec()
                })
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        // same evolution computed sequentially must agree
        for (idx, parallel) in results.iter().enumerate() {
            let mut s = State::basis(3, idx);
            s.run(&circuit).unwrap();
            for (a, b) in parallel.iter().zip(s.amplitudes()) {
                assert!((a - b).norm() < 1e-15);
            }
        }
    }
}
