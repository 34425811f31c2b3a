//! Register allocation for the faithful cost-layer circuits.
//!
//! One commitment qubit per (generator, timestep) followed by a single
//! reusable ancilla bank: vector register, two preparation ancillas, the
//! linear-solver phase register and rotation ancilla, the estimation flag
//! and phase register, then the penalty accumulator. Ancillas are reused
//! across timesteps and lines (sequential policy), so the width is
//! `n·T + ⌈log₂ m⌉ + k_hhl + k_qadc + k_pen + 4`.

use crate::qsubs::prep::PrepRegisters;
use crate::uc::UCInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AncillaWidths {
    pub k_pen: usize,
    pub k_hhl: usize,
    pub k_qadc: usize,
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub generators: usize,
    pub timesteps: usize,
    /// ⌈log₂ m⌉ for m grid nodes.
    pub vector_width: usize,
    pub widths: AncillaWidths,
}

impl Layout {
    pub fn for_instance(instance: &UCInstance, widths: AncillaWidths) -> Layout {
        let nodes = instance.grid.nodes.len();
        Layout {
            generators: instance.generator_count(),
            timesteps: instance.timesteps,
            vector_width: nodes.next_power_of_two().trailing_zeros().max(1) as usize,
            widths,
        }
    }

    pub fn main_width(&self) -> usize {
        self.generators * self.timesteps
    }

    /// Commitment qubit of generator `g` at timestep `t`.
    pub fn main(&self, g: usize, t: usize) -> usize {
        t * self.generators + g
    }

    /// All commitment qubits of one timestep.
    pub fn main_at(&self, t: usize) -> Vec<usize> {
        (0..self.generators).map(|g| self.main(g, t)).collect()
    }

    pub fn vector(&self) -> Vec<usize> {
        let base = self.main_width();
        (base..base + self.vector_width).collect()
    }

    pub fn norm_ancilla(&self) -> usize {
        self.main_width() + self.vector_width
    }

    pub fn off_flag(&self) -> usize {
        self.norm_ancilla() + 1
    }

    pub fn hhl_phase(&self) -> Vec<usize> {
        let base = self.off_flag() + 1;
        (base..base + self.widths.k_hhl).collect()
    }

    pub fn hhl_ancilla(&self) -> usize {
        self.off_flag() + 1 + self.widths.k_hhl
    }

    pub fn qadc_flag(&self) -> usize {
        self.hhl_ancilla() + 1
    }

    pub fn qadc_phase(&self) -> Vec<usize> {
        let base = self.qadc_flag() + 1;
        (base..base + self.widths.k_qadc).collect()
    }

    pub fn penalty_register(&self) -> Vec<usize> {
        let base = self.qadc_flag() + 1 + self.widths.k_qadc;
        (base..base + self.widths.k_pen).collect()
    }

    pub fn width(&self) -> usize {
        self.main_width()
            + self.vector_width
            + self.widths.k_hhl
            + self.widths.k_qadc
            + self.widths.k_pen
            + 4
    }

    pub fn prep_registers(&self, t: usize) -> PrepRegisters {
        PrepRegisters {
            commit: self.main_at(t),
            vector: self.vector(),
            norm_ancilla: self.norm_ancilla(),
            off_flag: self.off_flag(),
        }
    }

    /// The estimation "data register": everything the reflection operator
    /// must cover — vector register, preparation ancillas, solver phase
    /// register and rotation ancilla. Commitment qubits are spectator
    /// controls and stay outside.
    pub fn qadc_data(&self) -> Vec<usize> {
        let mut data = self.vector();
        data.push(self.norm_ancilla());
        data.push(self.off_flag());
        data.extend(self.hhl_phase());
        data.push(self.hhl_ancilla());
        data
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(gens: usize, steps: usize, nodes_log2: usize) -> Layout {
        Layout {
            generators: gens,
            timesteps: steps,
            vector_width: nodes_log2,
            widths: AncillaWidths {
                k_pen: 5,
                k_hhl: 7,
                k_qadc: 6,
            },
        }
    }

    #[test]
    fn width_formula() {
        let l = layout(3, 2, 3);
        assert_eq!(l.width(), 6 + 3 + 7 + 6 + 5 + 4);
    }

    #[test]
    fn doubling_timesteps_only_grows_the_main_register() {
        let a = layout(3, 2, 3);
        let b = layout(3, 4, 3);
        assert_eq!(b.width() - a.width(), 3 * 2);
    }

    #[test]
    fn registers_are_disjoint_and_cover_width() {
        let l = layout(2, 2, 2);
        let mut seen = vec![false; l.width()];
        let mut mark = |qs: Vec<usize>| {
            for q in qs {
                assert!(!seen[q], "qubit {q} double-booked");
                seen[q] = true;
            }
        };
        mark((0..l.main_width()).collect());
        mark(l.vector());
        mark(vec![l.norm_ancilla(), l.off_flag(), l.hhl_ancilla(), l.qadc_flag()]);
        mark(l.hhl_phase());
        mark(l.qadc_phase());
        mark(l.penalty_register());
        assert!(seen.into_iter().all(|s| s));
    }
}
