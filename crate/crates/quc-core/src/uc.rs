//! Classical unit-commitment objective, the exhaustive oracle, and the
//! priority-list / economic-dispatch initializer.

use crate::error::ModelError;
use crate::grid::{self, BMatrix, Grid, NodeKind};
use serde::{Deserialize, Serialize};

/// Quadratic production-cost coefficients plus start/stop charges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenCost {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub fuel_cost: f64,
    pub on_cost: f64,
    pub off_cost: f64,
}

/// One unit-commitment problem: a grid, per-generator costs, a horizon and
/// the demand-shortfall penalty.
#[derive(Debug, Clone)]
pub struct UCInstance {
    pub grid: Grid,
    /// One entry per generator, in grid input order.
    pub gen_costs: Vec<GenCost>,
    pub timesteps: usize,
    pub penalty: f64,
    bmat: BMatrix,
    gen_nodes: Vec<usize>,
}

impl UCInstance {
    pub fn new(
        grid: Grid,
        gen_costs: Vec<GenCost>,
        timesteps: usize,
        penalty: f64,
    ) -> Result<Self, ModelError> {
        assert!(timesteps >= 1, "need at least one timestep");
        let bmat = grid::build_b_matrix(&grid)?;
        let gen_nodes = grid.generator_indices();
        if gen_costs.len() != gen_nodes.len() {
            return Err(ModelError::CostTableMismatch {
                expected: gen_nodes.len(),
                got: gen_costs.len(),
            });
        }
        for node in &grid.nodes {
            if let NodeKind::Load { demand } = &node.kind {
                if demand.len() < timesteps {
                    return Err(ModelError::BadDemandLength {
                        id: node.id.clone(),
                        expected: timesteps,
                        got: demand.len(),
                    });
                }
            }
        }
        Ok(UCInstance {
            grid,
            gen_costs,
            timesteps,
            penalty,
            bmat,
            gen_nodes,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.gen_nodes.len()
    }

    /// Grid node index of generator `g`.
    pub fn generator_node(&self, g: usize) -> usize {
        self.gen_nodes[g]
    }

    pub fn bounds(&self, g: usize) -> (f64, f64) {
        match self.grid.nodes[self.gen_nodes[g]].kind {
            NodeKind::Generator { p_min, p_max } => (p_min, p_max),
            _ => unreachable!("generator indices point at generators"),
        }
    }

    pub fn bmatrix(&self) -> &BMatrix {
        &self.bmat
    }

    /// Injection vector (per `bmat.order`) for powers `p[g]` at timestep `t`,
    /// with every generator treated as on; masking is `solve_dcpf`'s job.
    pub fn injections(&self, powers: &[f64], t: usize) -> Vec<f64> {
        let mut inj = vec![0.0; self.grid.nodes.len()];
        for (g, &node) in self.gen_nodes.iter().enumerate() {
            inj[self.bmat.position_of(node)] = powers[g];
        }
        for (i, node) in self.grid.nodes.iter().enumerate() {
            if let NodeKind::Load { demand } = &node.kind {
                inj[self.bmat.position_of(i)] = -demand[t];
            }
        }
        inj
    }
}

/// On/off bits and dispatched powers over the horizon, indexed `[gen][t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub u: Vec<Vec<bool>>,
    pub p: Vec<Vec<f64>>,
}

impl Schedule {
    pub fn off(gens: usize, steps: usize) -> Self {
        Schedule {
            u: vec![vec![false; steps]; gens],
            p: vec![vec![0.0; steps]; gens],
        }
    }

    /// Commitment bits packed as an integer, bit `t*n + i` for generator `i`
    /// at timestep `t`. This is also the brute-force tie-break key.
    pub fn bits(&self) -> u64 {
        let gens = self.u.len();
        let mut v = 0u64;
        for (i, row) in self.u.iter().enumerate() {
            for (t, &on) in row.iter().enumerate() {
                if on {
                    v |= 1 << (t * gens + i);
                }
            }
        }
        v
    }

    pub fn from_bits(bits: u64, gens: usize, steps: usize, p: Vec<Vec<f64>>) -> Self {
        let mut u = vec![vec![false; steps]; gens];
        for (i, row) in u.iter_mut().enumerate() {
            for (t, slot) in row.iter_mut().enumerate() {
                *slot = bits >> (t * gens + i) & 1 == 1;
            }
        }
        Schedule { u, p }
    }
}

/// Cost split mirroring the five diagonal terms of the quantum cost layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub prod: f64,
    pub start: f64,
    pub stop: f64,
    pub trans: f64,
    pub penalty: f64,
    pub total: f64,
}

/// Quadratic production cost: `fuel * (A + B·P + C·P²)`.
pub fn prod_cost(gen: &GenCost, p: f64) -> f64 {
    gen.fuel_cost * (gen.a + gen.b * p + gen.c * p * p)
}

/// Evaluate the full classical objective for one schedule.
///
/// Start/stop transitions are counted within the horizon plus the `t = 0`
/// boundary, where the prior state is all-off (committing a unit at `t = 0`
/// incurs its start cost; nothing stops after the horizon ends). The demand
/// constraint is the inequality `Σ u·P ≥ demand`, charged `penalty` per
/// violated timestep.
pub fn classical_cost(
    instance: &UCInstance,
    schedule: &Schedule,
) -> Result<CostBreakdown, ModelError> {
    let n = instance.generator_count();
    let steps = instance.timesteps;
    if schedule.u.len() != n
        || schedule.p.len() != n
        || schedule.u.iter().any(|r| r.len() != steps)
        || schedule.p.iter().any(|r| r.len() != steps)
    {
        return Err(ModelError::ScheduleShape {
            gens: n,
            steps,
            got_gens: schedule.u.len(),
            got_steps: schedule.u.first().map_or(0, |r| r.len()),
        });
    }

    let mut prod = 0.0;
    let mut start = 0.0;
    let mut stop = 0.0;
    for g in 0..n {
        let cost = &instance.gen_costs[g];
        let mut previous = false; // all off before t = 0
        for t in 0..steps {
            let on = schedule.u[g][t];
            if on {
                prod += prod_cost(cost, schedule.p[g][t]);
            }
            if !previous && on {
                start += cost.on_cost;
            }
            if previous && !on {
                stop += cost.off_cost;
            }
            previous = on;
        }
    }

    let mut trans = 0.0;
    let mut penalty = 0.0;
    for t in 0..steps {
        let powers: Vec<f64> = (0..n).map(|g| schedule.p[g][t]).collect();
        let active: Vec<bool> = (0..n).map(|g| schedule.u[g][t]).collect();
        let inj = instance.injections(&powers, t);
        let flow = grid::solve_dcpf(&instance.grid, instance.bmatrix(), &inj, &active)?;
        trans += grid::transmission_cost_total(&flow);

        let generated: f64 = (0..n)
            .filter(|&g| schedule.u[g][t])
            .map(|g| schedule.p[g][t])
            .sum();
        if generated < instance.grid.total_demand(t) {
            penalty += instance.penalty;
        }
    }

    Ok(CostBreakdown {
        prod,
        start,
        stop,
        trans,
        penalty,
        total: prod + start + stop + trans + penalty,
    })
}

/// Brute-force limit on commitment bits.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Exhaustive minimization over all commitment matrices with fixed powers.
/// Ties break toward the smallest packed bit value.
pub fn brute_force(
    instance: &UCInstance,
    powers: &[Vec<f64>],
) -> Result<(Schedule, CostBreakdown), ModelError> {
    let n = instance.generator_count();
    let steps = instance.timesteps;
    let bits = n * steps;
    if bits > BRUTE_FORCE_LIMIT {
        return Err(ModelError::TooLargeForBruteForce {
            bits,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let mut best: Option<(u64, CostBreakdown)> = None;
    for assignment in 0..(1u64 << bits) {
        let schedule = Schedule::from_bits(assignment, n, steps, powers.to_vec());
        let cost = classical_cost(instance, &schedule)?;
        let better = match &best {
            None => true,
            Some((_, b)) => cost.total < b.total,
        };
        if better {
            best = Some((assignment, cost));
        }
    }
    let (assignment, cost) = best.expect("at least one assignment");
    Ok((
        Schedule::from_bits(assignment, n, steps, powers.to_vec()),
        cost,
    ))
}

/// Priority-list commitment with economic dispatch.
///
/// Generators rank by full-load average production cost (`prod_cost(P_max) /
/// P_max`, ascending) and commit greedily until capacity covers demand; the
/// committed set is dispatched to equal marginal cost by bisection on λ with
/// bound clamping, so that `Σ P = demand`.
pub fn dispatch_init(instance: &UCInstance) -> Result<Schedule, ModelError> {
    let n = instance.generator_count();
    let mut schedule = Schedule::off(n, instance.timesteps);

    let mut ranking: Vec<usize> = (0..n).collect();
    let flapc = |g: usize| {
        let (_, p_max) = instance.bounds(g);
        prod_cost(&instance.gen_costs[g], p_max) / p_max
    };
    ranking.sort_by(|&a, &b| flapc(a).total_cmp(&flapc(b)).then(a.cmp(&b)));

    for t in 0..instance.timesteps {
        let demand = instance.grid.total_demand(t);
        if demand <= 0.0 {
            continue;
        }
        let capacity: f64 = (0..n).map(|g| instance.bounds(g).1).sum();
        if capacity < demand {
            return Err(ModelError::InfeasibleDemand {
                timestep: t,
                demand,
                capacity,
            });
        }

        let mut committed = Vec::new();
        let mut committed_capacity = 0.0;
        for &g in &ranking {
            committed.push(g);
            committed_capacity += instance.bounds(g).1;
            if committed_capacity >= demand {
                break;
            }
        }

        let dispatch = equal_lambda_dispatch(instance, &committed, demand, t)?;
        for (&g, &p) in committed.iter().zip(dispatch.iter()) {
            schedule.u[g][t] = true;
            schedule.p[g][t] = p;
        }
    }
    Ok(schedule)
}

/// Equal-marginal-cost dispatch: bisection on λ over `P_i(λ) =
/// clamp((λ/fuel − B) / 2C, P_min, P_max)` until `Σ P` meets the demand to
/// 1e-9 relative tolerance.
fn equal_lambda_dispatch(
    instance: &UCInstance,
    committed: &[usize],
    demand: f64,
    timestep: usize,
) -> Result<Vec<f64>, ModelError> {
    let power_at = |g: usize, lambda: f64| -> f64 {
        let cost = &instance.gen_costs[g];
        let (p_min, p_max) = instance.bounds(g);
        if cost.c.abs() < 1e-300 {
            // linear marginal cost: step between the bounds
            if lambda >= cost.fuel_cost * cost.b {
                p_max
            } else {
                p_min
            }
        } else {
            ((lambda / cost.fuel_cost - cost.b) / (2.0 * cost.c)).clamp(p_min, p_max)
        }
    };
    let total = |lambda: f64| -> f64 { committed.iter().map(|&g| power_at(g, lambda)).sum() };

    let min_total: f64 = committed.iter().map(|&g| instance.bounds(g).0).sum();
    let max_total: f64 = committed.iter().map(|&g| instance.bounds(g).1).sum();
    if min_total > demand + 1e-9 {
        return Err(ModelError::OverCommitted {
            timestep,
            demand,
            minimum: min_total,
        });
    }
    if max_total < demand - 1e-9 {
        return Err(ModelError::InfeasibleDemand {
            timestep,
            demand,
            capacity: max_total,
        });
    }

    let marginal = |g: usize, p: f64| {
        let cost = &instance.gen_costs[g];
        cost.fuel_cost * (cost.b + 2.0 * cost.c * p)
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &g in committed {
        let (p_min, p_max) = instance.bounds(g);
        lo = lo.min(marginal(g, p_min));
        hi = hi.max(marginal(g, p_max));
    }
    lo -= 1.0;
    hi += 1.0;

    let tolerance = 1e-9 * demand.max(1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < demand {
            lo = mid;
        } else {
            hi = mid;
        }
        if (total(hi) - demand).abs() <= tolerance {
            break;
        }
    }
    let lambda = hi;
    let mut dispatch: Vec<f64> = committed.iter().map(|&g| power_at(g, lambda)).collect();

    // distribute the residual over unclamped units to hit the demand exactly
    let residual = demand - dispatch.iter().sum::<f64>();
    if residual.abs() > 0.0 {
        let mut free: Vec<usize> = Vec::new();
        for (k, &g) in committed.iter().enumerate() {
            let (p_min, p_max) = instance.bounds(g);
            if dispatch[k] > p_min + 1e-12 && dispatch[k] < p_max - 1e-12 {
                free.push(k);
            }
        }
        if !free.is_empty() {
            let share = residual / free.len() as f64;
            for k in free {
                dispatch[k] += share;
            }
        }
    }
    Ok(dispatch)
}
