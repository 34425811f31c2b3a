//! Derivative-free parameter search over (γ, β, P).
//!
//! Plain Nelder-Mead on the concatenated parameter vector with projection of
//! the power block onto its box after every candidate move, seeded restarts
//! when the simplex collapses, and a budget expressed in objective
//! evaluations. The best-ever sampled schedule is tracked across the whole
//! search, together with the powers in force when it was sampled.

use crate::error::ModelError;
use crate::qaoa::ansatz::{expected_cost, AnsatzConfig, QAOAParams};
use crate::qsubs::layout::Layout;
use crate::uc::{dispatch_init, CostBreakdown, UCInstance};
use qsim::bitstring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub eval: usize,
    pub expected: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub best_bitstring: String,
    pub best_bits: u64,
    pub best_schedule_cost: CostBreakdown,
    /// Powers in force when the best schedule was sampled.
    pub best_powers: Vec<Vec<f64>>,
    pub best_expected: f64,
    /// Sampling histogram of the evaluation that produced the best schedule,
    /// as (bitstring, count) rows.
    pub best_histogram: Vec<(String, u32)>,
    pub trace: Vec<TracePoint>,
    pub evaluations: usize,
    pub converged: bool,
    pub circuit_width: usize,
    pub circuit_depth: usize,
}

struct BestSample {
    bits: u64,
    cost: CostBreakdown,
    powers: Vec<Vec<f64>>,
    histogram: qsim::Histogram,
}

struct SearchSpace {
    layers: usize,
    bounds: Vec<(f64, f64)>, // per power coordinate
}

impl SearchSpace {
    fn dim(&self) -> usize {
        2 * self.layers + self.bounds.len()
    }

    fn project(&self, x: &mut [f64]) {
        for (k, &(lo, hi)) in self.bounds.iter().enumerate() {
            let v = &mut x[2 * self.layers + k];
            *v = v.clamp(lo, hi);
        }
    }

    fn params(&self, x: &[f64], gens: usize, steps: usize) -> QAOAParams {
        let gammas = x[..self.layers].to_vec();
        let betas = x[self.layers..2 * self.layers].to_vec();
        let mut powers = vec![vec![0.0; steps]; gens];
        for g in 0..gens {
            for t in 0..steps {
                powers[g][t] = x[2 * self.layers + g * steps + t];
            }
        }
        QAOAParams {
            gammas,
            betas,
            powers,
        }
    }
}

/// Minimize the sampled expected cost within `budget` objective evaluations.
pub fn optimize(
    instance: &UCInstance,
    config: &AnsatzConfig,
    layout: &Layout,
    budget: usize,
) -> Result<RunReport, ModelError> {
    let gens = instance.generator_count();
    let steps = instance.timesteps;
    let layers = config.layers;

    let initial = dispatch_init(instance)?;
    let mut bounds = Vec::with_capacity(gens * steps);
    let mut x0 = vec![0.0; 2 * layers + gens * steps];
    for g in 0..gens {
        let (lo, hi) = instance.bounds(g);
        for t in 0..steps {
            bounds.push((lo, hi));
            // dispatch powers may sit at 0 for uncommitted units; start from
            // the box midpoint in that case
            let p = if initial.u[g][t] {
                initial.p[g][t]
            } else {
                0.5 * (lo + hi)
            };
            x0[2 * layers + g * steps + t] = p.clamp(lo, hi);
        }
    }
    let space = SearchSpace { layers, bounds };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for angle in x0.iter_mut().take(2 * layers) {
        *angle = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    }

    let mut evaluations = 0usize;
    let mut trace = Vec::new();
    let mut best_sample: Option<BestSample> = None;
    let mut best_expected = f64::INFINITY;
    let mut converged = false;

    let objective = |x: &[f64],
                         evaluations: &mut usize,
                         trace: &mut Vec<TracePoint>,
                         best_sample: &mut Option<BestSample>,
                         best_expected: &mut f64|
     -> Result<f64, ModelError> {
        let params = space.params(x, gens, steps);
        let eval = expected_cost(instance, &params, config, layout)?;
        *evaluations += 1;
        trace.push(TracePoint {
            eval: *evaluations,
            expected: eval.expected,
        });
        if eval.expected < *best_expected {
            *best_expected = eval.expected;
        }
        let replace = best_sample
            .as_ref()
            .is_none_or(|b| eval.best_cost.total < b.cost.total);
        if replace {
            *best_sample = Some(BestSample {
                bits: eval.best_bits,
                cost: eval.best_cost,
                powers: params.powers.clone(),
                histogram: eval.histogram.clone(),
            });
        }
        Ok(eval.expected)
    };

    // Nelder-Mead coefficients
    const ALPHA: f64 = 1.0;
    const GAMMA_EXP: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;
    let dim = space.dim();
    let simplex_tol = 1e-6;

    let mut start = x0.clone();
    'restarts: loop {
        // initial simplex around the start point
        let mut simplex: Vec<Vec<f64>> = vec![start.clone()];
        for k in 0..dim {
            let mut v = start.clone();
            let step = if k < 2 * layers {
                0.25
            } else {
                let (lo, hi) = space.bounds[k - 2 * layers];
                0.15 * (hi - lo)
            };
            v[k] += step;
            space.project(&mut v);
            simplex.push(v);
        }
        let mut values = Vec::with_capacity(dim + 1);
        for v in &simplex {
            if evaluations >= budget {
                break 'restarts;
            }
            values.push(objective(v, &mut evaluations, &mut trace, &mut best_sample, &mut best_expected)?);
        }
        if values.len() < simplex.len() {
            break 'restarts;
        }

        while evaluations < budget {
            let mut order: Vec<usize> = (0..simplex.len()).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let best = order[0];
            let worst = order[dim];
            let second_worst = order[dim - 1];

            let spread = (values[worst] - values[best]).abs();
            let scale = values[best].abs().max(1.0);
            if spread / scale < simplex_tol {
                converged = true;
                // restart from the best vertex with fresh angles
                start = simplex[best].clone();
                for angle in start.iter_mut().take(2 * layers) {
                    *angle = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
                }
                continue 'restarts;
            }

            let mut centroid = vec![0.0; dim];
            for &idx in order.iter().take(dim) {
                for (c, v) in centroid.iter_mut().zip(simplex[idx].iter()) {
                    *c += v / dim as f64;
                }
            }

            let blend = |a: &[f64], b: &[f64], w: f64| -> Vec<f64> {
                let mut out: Vec<f64> =
                    a.iter().zip(b.iter()).map(|(x, y)| x + w * (x - y)).collect();
                space.project(&mut out);
                out
            };

            let reflected = blend(&centroid, &simplex[worst], ALPHA);
            let fr = objective(&reflected, &mut evaluations, &mut trace, &mut best_sample, &mut best_expected)?;
            if fr < values[best] {
                if evaluations >= budget {
                    simplex[worst] = reflected;
                    values[worst] = fr;
                    break;
                }
                let expanded = blend(&centroid, &simplex[worst], GAMMA_EXP);
                let fe = objective(&expanded, &mut evaluations, &mut trace, &mut best_sample, &mut best_expected)?;
                if fe < fr {
                    simplex[worst] = expanded;
                    values[worst] = fe;
                } else {
                    simplex[worst] = reflected;
                    values[worst] = fr;
                }
            } else if fr < values[second_worst] {
                simplex[worst] = reflected;
                values[worst] = fr;
            } else {
                if evaluations >= budget {
                    break;
                }
                let contracted = blend(&centroid, &simplex[worst], -RHO);
                let fc = objective(&contracted, &mut evaluations, &mut trace, &mut best_sample, &mut best_expected)?;
                if fc < values[worst] {
                    simplex[worst] = contracted;
                    values[worst] = fc;
                } else {
                    // shrink toward the best vertex
                    let anchor = simplex[best].clone();
                    for idx in 0..simplex.len() {
                        if idx == best {
                            continue;
                        }
                        for (v, a) in simplex[idx].iter_mut().zip(anchor.iter()) {
                            *v = a + SIGMA * (*v - a);
                        }
                        let mut v = simplex[idx].clone();
                        space.project(&mut v);
                        simplex[idx] = v;
                        if evaluations >= budget {
                            break 'restarts;
                        }
                        values[idx] = objective(&simplex[idx], &mut evaluations, &mut trace, &mut best_sample, &mut best_expected)?;
                    }
                }
            }
        }
        if evaluations >= budget {
            break;
        }
    }

    let best = best_sample.expect("budget admits at least one evaluation");

    // width/depth of one realized ansatz for the report
    let params = space.params(&start, gens, steps);
    let probe = crate::qaoa::ansatz::build_ansatz(instance, &params, config, layout)?;

    let main_width = layout.main_width();
    Ok(RunReport {
        best_bitstring: bitstring(best.bits, main_width),
        best_bits: best.bits,
        best_schedule_cost: best.cost,
        best_powers: best.powers,
        best_expected,
        best_histogram: best
            .histogram
            .iter()
            .map(|(&bits, &count)| (bitstring(bits, main_width), count))
            .collect(),
        trace,
        evaluations,
        converged,
        circuit_width: probe.qubit_count,
        circuit_depth: probe.depth(),
    })
}
