//! Width and depth accounting for the faithful circuit.

use crate::error::ModelError;
use crate::qaoa::ansatz::{cost_layer, mixer_layer, AnsatzConfig, QAOAParams};
use crate::qsubs::layout::Layout;
use crate::uc::{dispatch_init, UCInstance};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct WidthDepthReport {
    pub qubits: usize,
    pub main_register: usize,
    pub vector_register: usize,
    pub k_hhl: usize,
    pub k_qadc: usize,
    pub k_pen: usize,
    pub ancillas: usize,
    /// Greedy gate-layer depth of one cost+mixer layer (not transpiled).
    pub one_layer_depth: usize,
    pub one_layer_gates: usize,
    /// Asymptotic widths/depths under full parallelization, for qualitative
    /// comparison; this build reuses ancillas sequentially instead.
    pub parallel_width_formula: String,
    pub parallel_depth_formula: String,
}

/// Count qubits and the non-transpiled depth of one QAOA layer.
pub fn width_depth_report(
    instance: &UCInstance,
    config: &AnsatzConfig,
) -> Result<WidthDepthReport, ModelError> {
    let layout = Layout::for_instance(instance, config.widths);

    // a representative parameter set: dispatch powers, unit angles
    let initial = dispatch_init(instance)?;
    let mut powers = initial.p.clone();
    for (g, row) in powers.iter_mut().enumerate() {
        let (lo, hi) = instance.bounds(g);
        for (t, v) in row.iter_mut().enumerate() {
            if !initial.u[g][t] {
                *v = 0.5 * (lo + hi);
            }
        }
    }
    let params = QAOAParams {
        gammas: vec![1.0e-6; config.layers.max(1)],
        betas: vec![1.0e-6; config.layers.max(1)],
        powers,
    };

    let cost = cost_layer(instance, &params, params.gammas[0], config, &layout)?;
    let mixer = mixer_layer(params.betas[0], &layout);
    let mut one_layer = cost.clone();
    one_layer.extend_mapped(&mixer, &(0..one_layer.qubit_count).collect::<Vec<_>>())?;

    Ok(WidthDepthReport {
        qubits: layout.width(),
        main_register: layout.main_width(),
        vector_register: layout.vector_width,
        k_hhl: layout.widths.k_hhl,
        k_qadc: layout.widths.k_qadc,
        k_pen: layout.widths.k_pen,
        ancillas: 4,
        one_layer_depth: one_layer.depth(),
        one_layer_gates: one_layer.len(),
        parallel_width_formula: "O(k_pen*T + n*T*(n + log m + k_hhl + k_qadc))".to_string(),
        parallel_depth_formula: "O(2^k_qadc * (n + log m))".to_string(),
    })
}
