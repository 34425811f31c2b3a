//! Circuit IR: an ordered gate list over a fixed register width.

use crate::error::SimError;
use crate::gate::{Gate, QubitId};
use serde::{Deserialize, Serialize};

/// Ordered list of gates over `qubit_count` qubits. Immutable once built and
/// freely shareable; all mutation happens before simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub qubit_count: usize,
    pub ops: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Circuit {
            qubit_count,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), SimError> {
        gate.validate(self.qubit_count)?;
        self.ops.push(gate);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Reversed gate list with each gate inverted; undoes this circuit.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            qubit_count: self.qubit_count,
            ops: self.ops.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Append another circuit on the same register layout.
    pub fn extend(&mut self, other: &Circuit) -> Result<(), SimError> {
        for gate in &other.ops {
            self.push(gate.clone())?;
        }
        Ok(())
    }

    /// Append another circuit, rewiring its qubit `i` to `map[i]`.
    pub fn extend_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<(), SimError> {
        if map.len() < other.qubit_count {
            return Err(SimError::BadQubitMap {
                expected: other.qubit_count,
                got: map.len(),
            });
        }
        for gate in &other.ops {
            let mut g = gate.clone();
            for t in &mut g.targets {
                *t = QubitId(map[t.0]);
            }
            for (c, _) in &mut g.controls {
                *c = QubitId(map[c.0]);
            }
            self.push(g)?;
        }
        Ok(())
    }

    /// Every gate acquires the extra control wires. On basis states matching
    /// the controls the embedded circuit acts as the original; otherwise it is
    /// the identity. Control qubits must not appear inside the circuit.
    pub fn controlled_embed(&self, controls: &[(usize, bool)]) -> Result<Circuit, SimError> {
        let mut width = self.qubit_count;
        for &(c, _) in controls {
            width = width.max(c + 1);
        }
        let mut out = Circuit::new(width);
        for gate in &self.ops {
            for &(c, _) in controls {
                if gate.qubits().any(|q| q == c) {
                    return Err(SimError::ControlTargetOverlap(c));
                }
            }
            out.push(gate.clone().with_controls(controls))?;
        }
        Ok(out)
    }

    /// Gate-layer depth by greedy scheduling: each gate lands on the earliest
    /// layer where all its wires (targets and controls) are free.
    pub fn depth(&self) -> usize {
        let mut busy_until = vec![0usize; self.qubit_count];
        let mut depth = 0;
        for gate in &self.ops {
            let layer = gate.qubits().map(|q| busy_until[q]).max().unwrap_or(0);
            for q in gate.qubits() {
                busy_until[q] = layer + 1;
            }
            depth = depth.max(layer + 1);
        }
        depth
    }

    /// Debug dump as a JSON list of gate records. Not a stability contract.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization cannot fail")
    }
}
