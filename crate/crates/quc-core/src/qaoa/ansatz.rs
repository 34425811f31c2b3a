//! Ansatz assembly: alternating cost and mixer layers over the commitment
//! register, with two interchangeable cost-layer backends.
//!
//! The faithful backend builds the full circuit (production/start/stop
//! phases, penalty accumulator, per-line transmission operators). The
//! diagonal-oracle backend substitutes one exact diagonal whose phases are
//! the classical costs; it is the reference semantics the faithful backend
//! is tested against. Both phase the demand-satisfied branch, so their
//! diagonals agree up to the fixed global offset `-γ·penalty·T`.

use crate::error::ModelError;
use crate::qsubs::layout::{AncillaWidths, Layout};
use crate::qsubs::penalty::penalty_layer;
use crate::qsubs::utrans::{phase_error_budget, u_trans};
use crate::uc::{classical_cost, prod_cost, CostBreakdown, Schedule, UCInstance};
use num_complex::Complex64;
use qsim::{Circuit, DenseUnitary, Gate, Histogram, QubitId, State};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Faithful,
    DiagonalOracle,
}

#[derive(Debug, Clone, Copy)]
pub struct AnsatzConfig {
    pub layers: usize,
    pub backend: Backend,
    pub widths: AncillaWidths,
    pub shots: u32,
    pub seed: u64,
    /// Statevector width limit for the faithful backend.
    pub qubit_cap: usize,
}

impl AnsatzConfig {
    pub const DEFAULT_QUBIT_CAP: usize = 26;
}

/// Variational parameters: layer angles plus the continuous powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QAOAParams {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Powers indexed `[generator][timestep]`, kept inside the bounds.
    pub powers: Vec<Vec<f64>>,
}

impl QAOAParams {
    pub fn powers_at(&self, t: usize) -> Vec<f64> {
        self.powers.iter().map(|row| row[t]).collect()
    }
}

/// RX(β) on every commitment qubit.
pub fn mixer_layer(beta: f64, layout: &Layout) -> Circuit {
    let mut c = Circuit::new(layout.main_width());
    for q in 0..layout.main_width() {
        c.push(Gate::rx(q, beta)).expect("valid");
    }
    c
}

/// One cost layer at angle `gamma`.
pub fn cost_layer(
    instance: &UCInstance,
    params: &QAOAParams,
    gamma: f64,
    config: &AnsatzConfig,
    layout: &Layout,
) -> Result<Circuit, ModelError> {
    match config.backend {
        Backend::DiagonalOracle => oracle_cost_layer(instance, params, gamma, layout),
        Backend::Faithful => faithful_cost_layer(instance, params, gamma, layout),
    }
}

fn faithful_cost_layer(
    instance: &UCInstance,
    params: &QAOAParams,
    gamma: f64,
    layout: &Layout,
) -> Result<Circuit, ModelError> {
    let n = instance.generator_count();
    let steps = instance.timesteps;
    let mut c = Circuit::new(layout.width());

    // running costs: a phase per committed generator and timestep
    for t in 0..steps {
        for g in 0..n {
            let f = prod_cost(&instance.gen_costs[g], params.powers[g][t]);
            c.push(Gate::phase(layout.main(g, t), gamma * f))?;
        }
    }

    // start boundary: the pre-horizon state is all-off, so commitment at
    // t = 0 carries the start charge unconditionally on that qubit
    for g in 0..n {
        c.push(Gate::phase(layout.main(g, 0), gamma * instance.gen_costs[g].on_cost))?;
    }

    // start/stop transitions as X-conjugated controlled-phase pairs
    for t in 0..steps.saturating_sub(1) {
        for g in 0..n {
            let here = layout.main(g, t);
            let next = layout.main(g, t + 1);
            let cost = &instance.gen_costs[g];
            c.push(Gate::x(here))?;
            c.push(Gate::cphase(here, next, gamma * cost.on_cost))?;
            c.push(Gate::x(here))?;
            c.push(Gate::x(next))?;
            c.push(Gate::cphase(here, next, gamma * cost.off_cost))?;
            c.push(Gate::x(next))?;
        }
    }

    for t in 0..steps {
        let powers = params.powers_at(t);
        c.extend(&penalty_layer(instance, &powers, t, gamma, layout)?)?;
        for line_index in 0..instance.grid.lines.len() {
            let op = u_trans(instance, &powers, line_index, t, gamma, layout)?;
            c.extend(&op.circuit)?;
        }
    }
    Ok(c)
}

fn oracle_cost_layer(
    instance: &UCInstance,
    params: &QAOAParams,
    gamma: f64,
    layout: &Layout,
) -> Result<Circuit, ModelError> {
    let bits = layout.main_width();
    if bits > 10 {
        return Err(ModelError::OracleTooWide(bits));
    }
    let entries = oracle_diagonal(instance, params, gamma)?;
    let mut c = Circuit::new(bits);
    c.push(Gate::dense(
        (0..bits).collect(),
        DenseUnitary::diagonal(&entries)?,
    )?)?;
    Ok(c)
}

/// Exact diagonal entries `exp(i·(γ·total(u) - γ·penalty·T))`: classical
/// total per branch, shifted so the satisfied branch carries the penalty
/// phase exactly as the faithful layer does.
pub fn oracle_diagonal(
    instance: &UCInstance,
    params: &QAOAParams,
    gamma: f64,
) -> Result<Vec<Complex64>, ModelError> {
    let n = instance.generator_count();
    let steps = instance.timesteps;
    let offset = gamma * instance.penalty * steps as f64;
    (0..(1u64 << (n * steps)))
        .map(|bits| {
            let schedule = Schedule::from_bits(bits, n, steps, params.powers.clone());
            let cost = classical_cost(instance, &schedule)?;
            Ok(Complex64::from_polar(1.0, gamma * cost.total - offset))
        })
        .collect()
}

/// Reference phase (mod 2π) the realized diagonal is compared against.
pub fn expected_diagonal_phase(
    instance: &UCInstance,
    params: &QAOAParams,
    gamma: f64,
    bits: u64,
) -> Result<f64, ModelError> {
    let schedule = Schedule::from_bits(
        bits,
        instance.generator_count(),
        instance.timesteps,
        params.powers.clone(),
    );
    let cost = classical_cost(instance, &schedule)?;
    Ok(gamma * cost.total - gamma * instance.penalty * instance.timesteps as f64)
}

/// Total error budget of the faithful cost layer at angle `gamma`: the sum
/// of the per-line operator budgets over all lines and timesteps.
pub fn cost_layer_error_budget(
    instance: &UCInstance,
    params: &QAOAParams,
    gamma: f64,
    layout: &Layout,
) -> Result<f64, ModelError> {
    let mut budget = 0.0;
    for t in 0..instance.timesteps {
        let powers = params.powers_at(t);
        for line_index in 0..instance.grid.lines.len() {
            let op = u_trans(instance, &powers, line_index, t, gamma, layout)?;
            budget += phase_error_budget(op.gamma_prime, op.hhl_deviation, layout.widths.k_qadc);
        }
    }
    Ok(budget)
}

/// Width of the ansatz register for a backend.
pub fn ansatz_width(config: &AnsatzConfig, layout: &Layout) -> usize {
    match config.backend {
        Backend::Faithful => layout.width(),
        Backend::DiagonalOracle => layout.main_width(),
    }
}

/// Full ansatz: Hadamards on the commitment register, then `layers`
/// alternations of cost and mixer.
pub fn build_ansatz(
    instance: &UCInstance,
    params: &QAOAParams,
    config: &AnsatzConfig,
    layout: &Layout,
) -> Result<Circuit, ModelError> {
    let width = ansatz_width(config, layout);
    if matches!(config.backend, Backend::Faithful) && width > config.qubit_cap {
        return Err(ModelError::QubitBudget {
            width,
            cap: config.qubit_cap,
        });
    }
    let mut c = Circuit::new(width);
    for q in 0..layout.main_width() {
        c.push(Gate::h(q))?;
    }
    let identity: Vec<usize> = (0..width).collect();
    for layer in 0..config.layers {
        let cost = cost_layer(instance, params, params.gammas[layer], config, layout)?;
        c.extend_mapped(&cost, &identity)?;
        let mixer = mixer_layer(params.betas[layer], layout);
        c.extend_mapped(&mixer, &identity)?;
    }
    Ok(c)
}

/// One objective evaluation: sampled expectation plus the best sample seen.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub expected: f64,
    pub histogram: Histogram,
    pub best_bits: u64,
    pub best_cost: CostBreakdown,
}

/// Run the ansatz, sample the commitment register, and average the classical
/// cost over the samples. Deterministic under a fixed seed.
pub fn expected_cost(
    instance: &UCInstance,
    params: &QAOAParams,
    config: &AnsatzConfig,
    layout: &Layout,
) -> Result<EvalResult, ModelError> {
    let circuit = build_ansatz(instance, params, config, layout)?;
    let mut state = State::zero(circuit.qubit_count);
    state.run(&circuit)?;
    let register: Vec<QubitId> = (0..layout.main_width()).map(QubitId).collect();
    let histogram = state.sample(&register, config.shots, config.seed)?;

    let n = instance.generator_count();
    let steps = instance.timesteps;
    let mut total = 0.0;
    let mut count = 0u64;
    let mut best: Option<(u64, CostBreakdown)> = None;
    for (&bits, &shots) in &histogram {
        let schedule = Schedule::from_bits(bits, n, steps, params.powers.clone());
        let cost = classical_cost(instance, &schedule)?;
        total += cost.total * shots as f64;
        count += shots as u64;
        if best.as_ref().is_none_or(|(_, b)| cost.total < b.total) {
            best = Some((bits, cost));
        }
    }
    let (best_bits, best_cost) = best.expect("at least one sample");
    Ok(EvalResult {
        expected: total / count as f64,
        histogram,
        best_bits,
        best_cost,
    })
}

/// Exact expectation from the full statevector probabilities (no sampling);
/// the oracle the sampled estimate converges to.
pub fn exact_expected_cost(
    instance: &UCInstance,
    params: &QAOAParams,
    config: &AnsatzConfig,
    layout: &Layout,
) -> Result<f64, ModelError> {
    let circuit = build_ansatz(instance, params, config, layout)?;
    let mut state = State::zero(circuit.qubit_count);
    state.run(&circuit)?;
    let register: Vec<QubitId> = (0..layout.main_width()).map(QubitId).collect();
    let probs = state.marginal(&register)?;
    let n = instance.generator_count();
    let steps = instance.timesteps;
    let mut total = 0.0;
    for (u, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let schedule = Schedule::from_bits(u as u64, n, steps, params.powers.clone());
        total += p * classical_cost(instance, &schedule)?.total;
    }
    Ok(total)
}
