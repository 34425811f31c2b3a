//! Power-grid model, susceptance-matrix construction and the DC power-flow
//! solver used as the classical oracle for every quantum transmission-cost
//! subroutine.
//!
//! The gauge freedom of the voltage angles is removed by a diagonal shift:
//! the highest-degree node (ties broken by matrix order) gets the average
//! line susceptance added to its diagonal. Angles are the raw solution of
//! `Bθ = p` in the model's unit mix (MW injections, per-unit susceptance);
//! no per-unit normalization is applied.

use crate::error::ModelError;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum NodeKind {
    Generator { p_min: f64, p_max: f64 },
    Load { demand: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    #[serde(flatten)]
    pub kind: NodeKind,
}

impl Node {
    pub fn generator(id: &str, p_min: f64, p_max: f64) -> Self {
        Node {
            id: id.to_string(),
            kind: NodeKind::Generator { p_min, p_max },
        }
    }

    pub fn load(id: &str, demand: Vec<f64>) -> Self {
        Node {
            id: id.to_string(),
            kind: NodeKind::Load { demand },
        }
    }

    pub fn is_generator(&self) -> bool {
        matches!(self.kind, NodeKind::Generator { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub a: String,
    pub b: String,
    /// Per-unit line susceptance, strictly positive.
    pub susceptance: f64,
    /// Transmission tariff in $/MWh.
    pub tariff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nodes: Vec<Node>,
    pub lines: Vec<Line>,
}

impl Grid {
    /// Validate structure: known endpoints, no self-loops or duplicate pairs,
    /// positive susceptances, connectivity, at least one generator and load,
    /// sane bounds and demand vectors.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut gens = 0;
        let mut loads = 0;
        for node in &self.nodes {
            match &node.kind {
                NodeKind::Generator { p_min, p_max } => {
                    gens += 1;
                    if !(*p_min > 0.0 && p_min <= p_max) {
                        return Err(ModelError::BadNode(
                            node.id.clone(),
                            format!("need 0 < p_min <= p_max, got ({p_min}, {p_max})"),
                        ));
                    }
                }
                NodeKind::Load { demand } => {
                    loads += 1;
                    if demand.iter().any(|d| *d < 0.0) {
                        return Err(ModelError::BadNode(
                            node.id.clone(),
                            "demands must be non-negative".to_string(),
                        ));
                    }
                }
            }
        }
        if gens == 0 || loads == 0 {
            return Err(ModelError::MissingNodeKind);
        }

        let mut seen = std::collections::BTreeSet::new();
        for line in &self.lines {
            if line.a == line.b {
                return Err(ModelError::SelfLoop(line.a.clone()));
            }
            let ia = self.node_index(&line.a)?;
            let ib = self.node_index(&line.b)?;
            let key = (ia.min(ib), ia.max(ib));
            if !seen.insert(key) {
                return Err(ModelError::DuplicateLine(line.a.clone(), line.b.clone()));
            }
            if line.susceptance <= 0.0 {
                return Err(ModelError::BadSusceptance(line.a.clone(), line.b.clone()));
            }
        }

        if !self.is_connected() {
            return Err(ModelError::DisconnectedGrid);
        }
        Ok(())
    }

    pub fn node_index(&self, id: &str) -> Result<usize, ModelError> {
        self.nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| ModelError::UnknownNode(id.to_string()))
    }

    /// Indices (into `nodes`) of generator nodes, in input order.
    pub fn generator_indices(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_generator())
            .map(|(i, _)| i)
            .collect()
    }

    /// Total demand over all load nodes at timestep `t`.
    pub fn total_demand(&self, t: usize) -> f64 {
        self.nodes
            .iter()
            .filter_map(|n| match &n.kind {
                NodeKind::Load { demand } => demand.get(t).copied(),
                _ => None,
            })
            .sum()
    }

    fn is_connected(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 {
            return false;
        }
        let mut adjacency = vec![Vec::new(); n];
        for line in &self.lines {
            if let (Ok(a), Ok(b)) = (self.node_index(&line.a), self.node_index(&line.b)) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    stack.push(w);
                }
            }
        }
        visited.into_iter().all(|v| v)
    }

    pub fn from_json(text: &str) -> Result<Grid, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Regularized susceptance matrix with the node permutation that produced it.
#[derive(Debug, Clone)]
pub struct BMatrix {
    /// `order[k]` is the index into `grid.nodes` occupying matrix row `k`:
    /// generators sorted by descending `p_max` (input order on ties), then
    /// loads in input order.
    pub order: Vec<usize>,
    pub matrix: DMatrix<f64>,
    pub slack_index: usize,
    pub avg_susceptance: f64,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl BMatrix {
    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// Matrix row occupied by grid node `node_index`.
    pub fn position_of(&self, node_index: usize) -> usize {
        self.order
            .iter()
            .position(|&n| n == node_index)
            .expect("node in order")
    }
}

/// Build the regularized susceptance matrix for a validated grid.
pub fn build_b_matrix(grid: &Grid) -> Result<BMatrix, ModelError> {
    grid.validate()?;
    let n = grid.nodes.len();

    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut gens: Vec<usize> = grid.generator_indices();
    gens.sort_by(|&a, &b| {
        let pa = match grid.nodes[a].kind {
            NodeKind::Generator { p_max, .. } => p_max,
            _ => unreachable!(),
        };
        let pb = match grid.nodes[b].kind {
            NodeKind::Generator { p_max, .. } => p_max,
            _ => unreachable!(),
        };
        pb.total_cmp(&pa).then(a.cmp(&b))
    });
    order.extend(gens);
    order.extend((0..n).filter(|i| !grid.nodes[*i].is_generator()));

    let mut matrix = DMatrix::<f64>::zeros(n, n);
    let mut degree = vec![0usize; n];
    let mut susceptance_sum = 0.0;
    for line in &grid.lines {
        let a = grid.node_index(&line.a)?;
        let b = grid.node_index(&line.b)?;
        let (pa, pb) = (
            order.iter().position(|&x| x == a).unwrap(),
            order.iter().position(|&x| x == b).unwrap(),
        );
        matrix[(pa, pb)] -= line.susceptance;
        matrix[(pb, pa)] -= line.susceptance;
        matrix[(pa, pa)] += line.susceptance;
        matrix[(pb, pb)] += line.susceptance;
        degree[pa] += 1;
        degree[pb] += 1;
        susceptance_sum += line.susceptance;
    }
    let avg_susceptance = susceptance_sum / grid.lines.len() as f64;

    let slack_index = (0..n).max_by_key(|&k| (degree[k], std::cmp::Reverse(k))).unwrap();
    matrix[(slack_index, slack_index)] += avg_susceptance;

    let lu = matrix.clone().lu();
    if lu.determinant().abs() < 1e-12 {
        return Err(ModelError::SingularMatrix);
    }

    Ok(BMatrix {
        order,
        matrix,
        slack_index,
        avg_susceptance,
        lu,
    })
}

/// Voltage angles, line flows and per-line transmission cost for one solve.
#[derive(Debug, Clone, Serialize)]
pub struct FlowSolution {
    /// Angle per matrix position (same ordering as `BMatrix::order`).
    pub theta: Vec<f64>,
    /// Flow per line, in `grid.lines` order, sign from `a` to `b`.
    pub line_flows: Vec<f64>,
    /// `tariff * |flow|` per line.
    pub trans_costs: Vec<f64>,
}

/// Solve `Bθ = p` and read off flows and costs. `injections` is ordered per
/// `bmat.order`; generator entries are zeroed where the active bit is unset.
pub fn solve_dcpf(
    grid: &Grid,
    bmat: &BMatrix,
    injections: &[f64],
    active: &[bool],
) -> Result<FlowSolution, ModelError> {
    let n = bmat.size();
    if injections.len() != n {
        return Err(ModelError::BadInjectionLength {
            expected: n,
            got: injections.len(),
        });
    }
    let gens = grid.generator_indices();
    if active.len() != gens.len() {
        return Err(ModelError::BadActiveMask {
            expected: gens.len(),
            got: active.len(),
        });
    }

    let mut p = nalgebra::DVector::<f64>::from_column_slice(injections);
    for (g, &node) in gens.iter().enumerate() {
        if !active[g] {
            p[bmat.position_of(node)] = 0.0;
        }
    }

    let theta = bmat.lu.solve(&p).ok_or(ModelError::SingularMatrix)?;

    let mut line_flows = Vec::with_capacity(grid.lines.len());
    let mut trans_costs = Vec::with_capacity(grid.lines.len());
    for line in &grid.lines {
        let pa = bmat.position_of(grid.node_index(&line.a)?);
        let pb = bmat.position_of(grid.node_index(&line.b)?);
        let flow = line.susceptance * (theta[pa] - theta[pb]);
        line_flows.push(flow);
        trans_costs.push(line.tariff * flow.abs());
    }

    Ok(FlowSolution {
        theta: theta.iter().copied().collect(),
        line_flows,
        trans_costs,
    })
}

/// Total transmission cost: `Σ tariff * |flow|` over lines.
pub fn transmission_cost_total(flow: &FlowSolution) -> f64 {
    flow.trans_costs.iter().sum()
}
