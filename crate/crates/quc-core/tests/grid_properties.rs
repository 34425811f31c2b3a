//! Structural properties of the susceptance matrix and flow solve over
//! randomly generated connected grids.

use proptest::prelude::*;
use quc_core::grid::{build_b_matrix, solve_dcpf, Grid, Line, Node};

/// Random connected grid: a spanning tree plus optional extra edges.
fn arbitrary_grid() -> impl Strategy<Value = Grid> {
    (2usize..=8, any::<u64>()).prop_map(|(n, seed)| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let gens = rng.gen_range(1..n.max(2));
        let mut nodes = Vec::new();
        for k in 0..n {
            if k < gens {
                let p_min = rng.gen_range(0.5..2.0);
                nodes.push(Node::generator(&format!("g{k}"), p_min, p_min + rng.gen_range(1.0..8.0)));
            } else {
                nodes.push(Node::load(&format!("l{k}"), vec![rng.gen_range(0.0..5.0)]));
            }
        }
        if gens == n {
            nodes.push(Node::load("l_extra", vec![1.0]));
        }
        let ids: Vec<String> = nodes.iter().map(|nd| nd.id.clone()).collect();
        let total = ids.len();
        let mut lines = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for k in 1..total {
            let parent = rng.gen_range(0..k);
            seen.insert((parent, k));
            lines.push(Line {
                a: ids[parent].clone(),
                b: ids[k].clone(),
                susceptance: rng.gen_range(0.1..2.0),
                tariff: rng.gen_range(0.0..20.0),
            });
        }
        for _ in 0..rng.gen_range(0..total) {
            let a = rng.gen_range(0..total);
            let b = rng.gen_range(0..total);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if seen.insert(key) {
                lines.push(Line {
                    a: ids[key.0].clone(),
                    b: ids[key.1].clone(),
                    susceptance: rng.gen_range(0.1..2.0),
                    tariff: rng.gen_range(0.0..20.0),
                });
            }
        }
        Grid { nodes, lines }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn b_matrix_symmetry_and_row_sums(grid in arbitrary_grid()) {
        let bm = build_b_matrix(&grid).unwrap();
        let n = bm.size();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((bm.matrix[(i, j)] - bm.matrix[(j, i)]).abs() < 1e-12);
                if i != j {
                    prop_assert!(bm.matrix[(i, j)] <= 0.0);
                }
            }
        }
        // rows sum to zero except the slack row, which carries the shift
        for i in 0..n {
            let sum: f64 = (0..n).map(|j| bm.matrix[(i, j)]).sum();
            let expect = if i == bm.slack_index { bm.avg_susceptance } else { 0.0 };
            prop_assert!((sum - expect).abs() < 1e-9, "row {} sums to {}", i, sum);
        }
    }

    #[test]
    fn balanced_injections_conserve_flow_at_each_node(grid in arbitrary_grid()) {
        let bm = build_b_matrix(&grid).unwrap();
        let n = bm.size();
        // balanced injection pattern: alternate +1/-1, remainder on the last
        let mut injections = vec![0.0; n];
        for (k, v) in injections.iter_mut().enumerate() {
            *v = if k % 2 == 0 { 1.0 } else { -1.0 };
        }
        let imbalance: f64 = injections.iter().sum();
        injections[n - 1] -= imbalance;

        let gens = grid.generator_indices().len();
        let sol = solve_dcpf(&grid, &bm, &injections, &vec![true; gens]).unwrap();

        // for every node, outgoing line flows sum to its injection
        for (pos, &node_idx) in bm.order.iter().enumerate() {
            let id = &grid.nodes[node_idx].id;
            let mut outflow = 0.0;
            for (l, line) in grid.lines.iter().enumerate() {
                if line.a == *id {
                    outflow += sol.line_flows[l];
                } else if line.b == *id {
                    outflow -= sol.line_flows[l];
                }
            }
            prop_assert!(
                (outflow - injections[pos]).abs() < 1e-6,
                "node {} flow {} vs injection {}", id, outflow, injections[pos]
            );
        }
    }

    #[test]
    fn solve_is_linear_in_injections(grid in arbitrary_grid(), scale in 0.1f64..10.0) {
        let bm = build_b_matrix(&grid).unwrap();
        let n = bm.size();
        let injections: Vec<f64> = (0..n).map(|k| (k as f64) - n as f64 / 2.0).collect();
        let gens = grid.generator_indices().len();
        let base = solve_dcpf(&grid, &bm, &injections, &vec![true; gens]).unwrap();
        let scaled_inj: Vec<f64> = injections.iter().map(|p| p * scale).collect();
        let scaled = solve_dcpf(&grid, &bm, &scaled_inj, &vec![true; gens]).unwrap();
        for (t, st) in base.theta.iter().zip(scaled.theta.iter()) {
            prop_assert!((t * scale - st).abs() < 1e-6 * st.abs().max(1.0));
        }
        for (f, sf) in base.line_flows.iter().zip(scaled.line_flows.iter()) {
            prop_assert!((f * scale - sf).abs() < 1e-6 * sf.abs().max(1.0));
        }
    }
}
