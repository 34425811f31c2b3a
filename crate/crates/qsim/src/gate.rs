//! Gate records: the alphabet every circuit builder emits.
//!
//! Conventions (pinned, tests depend on them):
//! - qubit 0 is the least significant bit of a basis-state index;
//! - `RZ(θ) = diag(e^{-iθ/2}, e^{+iθ/2})`;
//! - `Phase(θ) = diag(1, e^{iθ})`, so diagonal cost layers carry absolute
//!   phases with no global-phase bookkeeping;
//! - `RX`/`RY` are the usual Bloch rotations `e^{-iθX/2}`, `e^{-iθY/2}`.

use crate::error::SimError;
use crate::matrix::{CMatrix, DenseUnitary};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Index of a qubit within a circuit's register layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QubitId(pub usize);

impl From<usize> for QubitId {
    fn from(index: usize) -> Self {
        QubitId(index)
    }
}

impl std::fmt::Display for QubitId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Gate kinds. The controlled-rotation kinds carry the same base matrix as
/// their plain counterparts; the control wires live in [`Gate::controls`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    Z,
    RX(f64),
    RY(f64),
    RZ(f64),
    CRX(f64),
    CRY(f64),
    CRZ(f64),
    Phase(f64),
    Swap,
    DenseUnitary(DenseUnitary),
}

impl GateKind {
    /// Number of target qubits the kind acts on.
    pub fn target_count(&self) -> usize {
        match self {
            GateKind::Swap => 2,
            GateKind::DenseUnitary(u) => u.qubits(),
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            GateKind::RX(t)
            | GateKind::RY(t)
            | GateKind::RZ(t)
            | GateKind::CRX(t)
            | GateKind::CRY(t)
            | GateKind::CRZ(t)
            | GateKind::Phase(t) => Some(*t),
            _ => None,
        }
    }
}

/// One gate record: a kind, its target qubits, and control wires with
/// polarities (`true` fires on |1⟩, `false` on |0⟩).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<QubitId>,
    pub controls: Vec<(QubitId, bool)>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<QubitId>) -> Self {
        Gate {
            kind,
            targets,
            controls: Vec::new(),
        }
    }

    pub fn x(q: usize) -> Self {
        Gate::new(GateKind::X, vec![q.into()])
    }

    pub fn h(q: usize) -> Self {
        Gate::new(GateKind::H, vec![q.into()])
    }

    pub fn z(q: usize) -> Self {
        Gate::new(GateKind::Z, vec![q.into()])
    }

    pub fn rx(q: usize, theta: f64) -> Self {
        Gate::new(GateKind::RX(theta), vec![q.into()])
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Gate::new(GateKind::RY(theta), vec![q.into()])
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Gate::new(GateKind::RZ(theta), vec![q.into()])
    }

    pub fn phase(q: usize, theta: f64) -> Self {
        Gate::new(GateKind::Phase(theta), vec![q.into()])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, vec![a.into(), b.into()])
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::x(target).controlled(control, true)
    }

    pub fn crx(control: usize, target: usize, theta: f64) -> Self {
        Gate::new(GateKind::CRX(theta), vec![target.into()]).controlled(control, true)
    }

    pub fn cry(control: usize, target: usize, theta: f64) -> Self {
        Gate::new(GateKind::CRY(theta), vec![target.into()]).controlled(control, true)
    }

    pub fn crz(control: usize, target: usize, theta: f64) -> Self {
        Gate::new(GateKind::CRZ(theta), vec![target.into()]).controlled(control, true)
    }

    pub fn cphase(control: usize, target: usize, theta: f64) -> Self {
        Gate::phase(target, theta).controlled(control, true)
    }

    pub fn dense(targets: Vec<usize>, unitary: DenseUnitary) -> Result<Self, SimError> {
        if unitary.qubits() != targets.len() {
            return Err(SimError::MatrixTargetMismatch {
                expected: unitary.qubits(),
                got: targets.len(),
            });
        }
        Ok(Gate::new(
            GateKind::DenseUnitary(unitary),
            targets.into_iter().map(QubitId).collect(),
        ))
    }

    /// Add one control wire.
    pub fn controlled(mut self, control: usize, polarity: bool) -> Self {
        self.controls.push((QubitId(control), polarity));
        self
    }

    /// Add several control wires.
    pub fn with_controls(mut self, controls: &[(usize, bool)]) -> Self {
        self.controls
            .extend(controls.iter().map(|&(q, p)| (QubitId(q), p)));
        self
    }

    /// Inverse gate: angles negate, dense payloads take the dagger,
    /// self-inverse kinds pass through. Controls are unchanged.
    pub fn inverse(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::X => GateKind::X,
            GateKind::H => GateKind::H,
            GateKind::Z => GateKind::Z,
            GateKind::Swap => GateKind::Swap,
            GateKind::RX(t) => GateKind::RX(-t),
            GateKind::RY(t) => GateKind::RY(-t),
            GateKind::RZ(t) => GateKind::RZ(-t),
            GateKind::CRX(t) => GateKind::CRX(-t),
            GateKind::CRY(t) => GateKind::CRY(-t),
            GateKind::CRZ(t) => GateKind::CRZ(-t),
            GateKind::Phase(t) => GateKind::Phase(-t),
            GateKind::DenseUnitary(u) => GateKind::DenseUnitary(u.dagger()),
        };
        Gate {
            kind,
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    /// The gate's unitary on its target subspace (controls not included).
    /// Sub-index bit `p` corresponds to `targets[p]`.
    pub fn base_matrix(&self) -> CMatrix {
        let i = Complex64::i();
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match &self.kind {
            GateKind::X => CMatrix::from_rows(&[&[zero, one], &[one, zero]]),
            GateKind::H => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                CMatrix::from_rows(&[&[h, h], &[h, -h]])
            }
            GateKind::Z => CMatrix::from_rows(&[&[one, zero], &[zero, -one]]),
            GateKind::RX(t) | GateKind::CRX(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                CMatrix::from_rows(&[
                    &[Complex64::new(c, 0.0), -i * s],
                    &[-i * s, Complex64::new(c, 0.0)],
                ])
            }
            GateKind::RY(t) | GateKind::CRY(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                CMatrix::from_rows(&[
                    &[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    &[Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ])
            }
            GateKind::RZ(t) | GateKind::CRZ(t) => CMatrix::from_rows(&[
                &[Complex64::from_polar(1.0, -t / 2.0), zero],
                &[zero, Complex64::from_polar(1.0, t / 2.0)],
            ]),
            GateKind::Phase(t) => CMatrix::from_rows(&[
                &[one, zero],
                &[zero, Complex64::from_polar(1.0, *t)],
            ]),
            GateKind::Swap => CMatrix::from_rows(&[
                &[one, zero, zero, zero],
                &[zero, zero, one, zero],
                &[zero, one, zero, zero],
                &[zero, zero, zero, one],
            ]),
            GateKind::DenseUnitary(u) => u.matrix().clone(),
        }
    }

    /// Structural validation against a register of `qubit_count` qubits.
    pub fn validate(&self, qubit_count: usize) -> Result<(), SimError> {
        if let Some(t) = self.kind.angle() {
            if !t.is_finite() {
                return Err(SimError::NonFiniteAngle(t));
            }
        }
        if self.targets.len() != self.kind.target_count() {
            return Err(SimError::MatrixTargetMismatch {
                expected: self.kind.target_count(),
                got: self.targets.len(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for q in self.qubits() {
            if q >= qubit_count {
                return Err(SimError::QubitOutOfRange {
                    index: q,
                    qubit_count,
                });
            }
            if !seen.insert(q) {
                return Err(SimError::DuplicateQubit(q));
            }
        }
        for &(c, _) in &self.controls {
            if self.targets.contains(&c) {
                return Err(SimError::ControlTargetOverlap(c.0));
            }
        }
        Ok(())
    }

    /// All qubit indices the gate touches (targets then controls).
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .map(|q| q.0)
            .chain(self.controls.iter().map(|(q, _)| q.0))
    }
}
