//! Demand-satisfaction phase layer.
//!
//! The committed powers of one timestep are accumulated into the penalty
//! register with weights `a_i = P_i / (2·demand)`, so the register's most
//! significant bit reads 1 exactly when `Σ u_i·P_i ≥ demand`. A phase
//! `e^{-iγ·penalty}` lands on that satisfied branch, then the adder is
//! uncomputed. Phasing the satisfied branch rather than the violating one
//! differs only by a global phase from charging the classical penalty; the
//! diagonal-oracle backend mirrors this convention exactly.

use crate::error::ModelError;
use crate::qsubs::adder::{weighted_adder, AdderWeights};
use crate::qsubs::layout::Layout;
use crate::uc::UCInstance;
use qsim::{Circuit, Gate};

/// Build the layer for timestep `t` with committed powers `powers[g]`.
pub fn penalty_layer(
    instance: &UCInstance,
    powers: &[f64],
    t: usize,
    gamma: f64,
    layout: &Layout,
) -> Result<Circuit, ModelError> {
    let register = layout.penalty_register();
    let controls = layout.main_at(t);
    let width = layout.width();
    let demand = instance.grid.total_demand(t);

    let mut c = Circuit::new(width);
    if demand <= 0.0 {
        // nothing to satisfy: every branch gets the phase (a global phase)
        let q = register[0];
        let angle = -gamma * instance.penalty;
        c.push(Gate::phase(q, angle))?;
        c.push(Gate::x(q))?;
        c.push(Gate::phase(q, angle))?;
        c.push(Gate::x(q))?;
        return Ok(c);
    }

    let weights = AdderWeights::new(
        powers.iter().map(|p| p / (2.0 * demand)).collect(),
        register.len(),
    )?;
    let adder = weighted_adder(width, &weights, &controls, &register)?;
    c.extend(&adder)?;
    let msb = register[register.len() - 1];
    c.push(Gate::phase(msb, -gamma * instance.penalty))?;
    c.extend(&adder.inverse())?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, Line, Node};
    use crate::qsubs::layout::AncillaWidths;
    use crate::uc::GenCost;
    use num_complex::Complex64;
    use qsim::State;

    fn instance_with_demand(demands: Vec<f64>) -> UCInstance {
        let grid = Grid {
            nodes: vec![
                Node::generator("g1", 100.0, 600.0),
                Node::generator("g2", 100.0, 400.0),
                Node::generator("g3", 50.0, 500.0),
                Node::load("load", demands),
            ],
            lines: vec![
                Line { a: "g1".into(), b: "load".into(), susceptance: 0.5, tariff: 10.0 },
                Line { a: "g2".into(), b: "load".into(), susceptance: 0.5, tariff: 10.0 },
                Line { a: "g3".into(), b: "load".into(), susceptance: 0.5, tariff: 10.0 },
            ],
        };
        let cost = GenCost { a: 0.0, b: 1.0, c: 0.0, fuel_cost: 1.0, on_cost: 0.0, off_cost: 0.0 };
        UCInstance::new(grid, vec![cost.clone(), cost.clone(), cost], 1, 7.0).unwrap()
    }

    /// Diagonal entry of the layer on commitment branch `u` (ancillas zero).
    fn diagonal(circuit: &Circuit, layout: &Layout, u: usize) -> Complex64 {
        let mut s = State::basis(layout.width(), u);
        s.run(circuit).unwrap();
        s.amplitude(u)
    }

    #[test]
    fn exact_threshold_branch_gets_full_phase() {
        // powers [600, 400, 500], demand 1500: only u = 111 reaches the
        // threshold, and it does so exactly (sum of weights = 1/2)
        let instance = instance_with_demand(vec![1500.0]);
        let layout = Layout::for_instance(
            &instance,
            AncillaWidths { k_pen: 5, k_hhl: 1, k_qadc: 1 },
        );
        let gamma = 0.31;
        let c = penalty_layer(&instance, &[600.0, 400.0, 500.0], 0, gamma, &layout).unwrap();

        let phased = Complex64::from_polar(1.0, -gamma * instance.penalty);
        let full = diagonal(&c, &layout, 0b111);
        assert!((full - phased).norm() < 1e-9, "u=111 must carry the phase");

        for u in 0..0b111usize {
            let d = diagonal(&c, &layout, u);
            // unsatisfied branches stay near 1 up to adder rounding leakage
            assert!(
                (d - Complex64::new(1.0, 0.0)).norm() < 0.15,
                "u={u:03b} drifted: {d}"
            );
            assert!(
                (d - phased).norm() > 0.5,
                "u={u:03b} must not receive the full phase"
            );
        }
    }

    #[test]
    fn zero_demand_phases_every_branch() {
        let instance = instance_with_demand(vec![0.0]);
        let layout = Layout::for_instance(
            &instance,
            AncillaWidths { k_pen: 4, k_hhl: 1, k_qadc: 1 },
        );
        let gamma = 0.5;
        let c = penalty_layer(&instance, &[10.0, 10.0, 10.0], 0, gamma, &layout).unwrap();
        let phased = Complex64::from_polar(1.0, -gamma * instance.penalty);
        for u in 0..8usize {
            assert!((diagonal(&c, &layout, u) - phased).norm() < 1e-9);
        }
    }

    #[test]
    fn single_generator_below_demand_no_phase() {
        let grid = Grid {
            nodes: vec![
                Node::generator("g", 1.0, 10.0),
                Node::load("load", vec![16.0]),
            ],
            lines: vec![Line { a: "g".into(), b: "load".into(), susceptance: 0.5, tariff: 1.0 }],
        };
        let cost = GenCost { a: 0.0, b: 1.0, c: 0.0, fuel_cost: 1.0, on_cost: 0.0, off_cost: 0.0 };
        let instance = UCInstance::new(grid, vec![cost], 1, 3.0).unwrap();
        let layout = Layout::for_instance(
            &instance,
            AncillaWidths { k_pen: 4, k_hhl: 1, k_qadc: 1 },
        );
        // P = 8 < 16: weight 1/4, dyadic, readout exact, MSB never set
        let c = penalty_layer(&instance, &[8.0], 0, 0.9, &layout).unwrap();
        for u in 0..2usize {
            let d = diagonal(&c, &layout, u);
            assert!((d - Complex64::new(1.0, 0.0)).norm() < 1e-9, "u={u}");
        }
    }

    #[test]
    fn wraparound_is_rejected() {
        let instance = instance_with_demand(vec![100.0]);
        let layout = Layout::for_instance(
            &instance,
            AncillaWidths { k_pen: 4, k_hhl: 1, k_qadc: 1 },
        );
        // weights sum to (600+400+500)/200 >= 1
        assert!(penalty_layer(&instance, &[600.0, 400.0, 500.0], 0, 0.1, &layout).is_err());
    }
}
