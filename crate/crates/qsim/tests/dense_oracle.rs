//! Oracle equivalence: the stride-iteration engine must agree with direct
//! multiplication by each gate's explicitly constructed full-register matrix.
//! The oracle below builds those matrices from the gate definition by index
//! arithmetic alone and never touches the engine's sweep kernels.

use num_complex::Complex64;
use qsim::{Circuit, Gate, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Full 2^n x 2^n matrix of a single gate, from its base matrix, target
/// wiring and control mask. Definitional construction, independent of the
/// engine.
fn gate_full_matrix(gate: &Gate, qubit_count: usize) -> Vec<Vec<Complex64>> {
    let dim = 1usize << qubit_count;
    let base = gate.base_matrix();
    let k = gate.targets.len();
    let mut cmask = 0usize;
    let mut cval = 0usize;
    for &(q, pol) in &gate.controls {
        cmask |= 1 << q.0;
        if pol {
            cval |= 1 << q.0;
        }
    }
    let tmask: usize = gate.targets.iter().map(|q| 1usize << q.0).sum();

    let mut full = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        if col & cmask != cval {
            full[col][col] = Complex64::new(1.0, 0.0);
            continue;
        }
        let sub_col: usize = (0..k)
            .map(|p| ((col >> gate.targets[p].0) & 1) << p)
            .sum();
        for sub_row in 0..(1 << k) {
            let mut row = col & !tmask;
            for (p, t) in gate.targets.iter().enumerate() {
                if sub_row >> p & 1 == 1 {
                    row |= 1 << t.0;
                }
            }
            full[row][col] = base[(sub_row, sub_col)];
        }
    }
    full
}

fn mat_vec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    let dim = v.len();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (row, out_v) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..dim {
            let e = m[row][col];
            if e.norm_sqr() != 0.0 {
                acc += e * v[col];
            }
        }
        *out_v = acc;
    }
    out
}

fn oracle_run(circuit: &Circuit, initial: &[Complex64]) -> Vec<Complex64> {
    let mut v = initial.to_vec();
    for gate in &circuit.ops {
        let m = gate_full_matrix(gate, circuit.qubit_count);
        v = mat_vec(&m, &v);
    }
    v
}

fn random_circuit(rng: &mut ChaCha8Rng, qubits: usize, gates: usize) -> Circuit {
    let mut c = Circuit::new(qubits);
    for _ in 0..gates {
        let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let t = rng.gen_range(0..qubits);
        // two-qubit kinds need a second wire
        let kinds = if qubits >= 2 { 9 } else { 7 };
        let gate = match rng.gen_range(0..kinds) {
            0 => Gate::x(t),
            1 => Gate::h(t),
            2 => Gate::z(t),
            3 => Gate::rx(t, theta),
            4 => Gate::ry(t, theta),
            5 => Gate::rz(t, theta),
            6 => Gate::phase(t, theta),
            7 => {
                let u = (t + rng.gen_range(1..qubits)) % qubits;
                Gate::swap(t, u)
            }
            _ => {
                let ctrl = (t + rng.gen_range(1..qubits)) % qubits;
                let g = match rng.gen_range(0..4) {
                    0 => Gate::crx(ctrl, t, theta),
                    1 => Gate::cry(ctrl, t, theta),
                    2 => Gate::crz(ctrl, t, theta),
                    _ => Gate::cphase(ctrl, t, theta),
                };
                // occasionally a negative-polarity control on top
                if rng.gen_bool(0.3) {
                    let free: Vec<usize> =
                        (0..qubits).filter(|&q| q != t && q != ctrl).collect();
                    if let Some(&extra) = free.first() {
                        g.controlled(extra, rng.gen_bool(0.5))
                    } else {
                        g
                    }
                } else {
                    g
                }
            }
        };
        c.push(gate).unwrap();
    }
    c
}

fn random_state(rng: &mut ChaCha8Rng, qubits: usize) -> Vec<Complex64> {
    let dim = 1usize << qubits;
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= norm;
    }
    v
}

#[test]
fn random_four_qubit_circuit_matches_dense_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let c = random_circuit(&mut rng, 4, 50);
    let mut s = State::zero(4);
    s.run(&c).unwrap();
    let expect = oracle_run(&c, State::zero(4).amplitudes());
    for (a, b) in s.amplitudes().iter().zip(expect.iter()) {
        assert!((a - b).norm() < 1e-10);
    }
}

#[test]
fn engine_matches_oracle_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..40 {
        let qubits = rng.gen_range(1..=6);
        let gates = rng.gen_range(1..=40);
        let c = random_circuit(&mut rng, qubits, gates);
        let init = random_state(&mut rng, qubits);
        let mut s = State::from_amplitudes(init.clone()).unwrap();
        s.run(&c).unwrap();
        let expect = oracle_run(&c, &init);
        for (idx, (a, b)) in s.amplitudes().iter().zip(expect.iter()).enumerate() {
            assert!(
                (a - b).norm() < 1e-8,
                "trial {trial}: amplitude {idx} differs: {a} vs {b}"
            );
        }
    }
}

#[test]
fn engine_matches_oracle_up_to_ten_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    for &qubits in &[8usize, 10] {
        let c = random_circuit(&mut rng, qubits, 30);
        let init = random_state(&mut rng, qubits);
        let mut s = State::from_amplitudes(init.clone()).unwrap();
        s.run(&c).unwrap();
        let expect = oracle_run(&c, &init);
        for (a, b) in s.amplitudes().iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-8);
        }
    }
}

#[test]
fn norm_preserved_after_every_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = random_circuit(&mut rng, 5, 200);
    let mut s = State::from_amplitudes(random_state(&mut rng, 5)).unwrap();
    for gate in &c.ops {
        s.apply(gate).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn circuit_followed_by_inverse_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..20 {
        let qubits = rng.gen_range(2..=5);
        let c = random_circuit(&mut rng, qubits, 30);
        let init = random_state(&mut rng, qubits);
        let mut s = State::from_amplitudes(init.clone()).unwrap();
        s.run(&c).unwrap();
        s.run(&c.inverse()).unwrap();
        for (a, b) in s.amplitudes().iter().zip(init.iter()) {
            assert!((a - b).norm() < 1e-9);
        }
    }
}

#[test]
fn controlled_embed_blocks_on_zero_control() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let inner = random_circuit(&mut rng, 3, 25);
    let embedded = inner.controlled_embed(&[(3, true)]).unwrap();

    // control |0⟩ (positive polarity): identity on the rest
    let init = random_state(&mut rng, 3);
    let mut full: Vec<Complex64> = init.clone();
    full.extend(vec![Complex64::new(0.0, 0.0); 8]);
    let mut s = State::from_amplitudes(full.clone()).unwrap();
    s.run(&embedded).unwrap();
    for (a, b) in s.amplitudes().iter().zip(full.iter()) {
        assert!((a - b).norm() < 1e-10);
    }

    // control |1⟩: acts as the original circuit on the low register
    let mut full: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); 16];
    full[8..16].copy_from_slice(&init);
    let mut s = State::from_amplitudes(full).unwrap();
    s.run(&embedded).unwrap();
    let expect = oracle_run(&inner, &init);
    for (idx, e) in expect.iter().enumerate() {
        assert!((s.amplitude(8 + idx) - e).norm() < 1e-9);
    }
}

#[test]
fn three_qubit_empirical_distribution_close_to_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let c = random_circuit(&mut rng, 3, 30);
    let mut s = State::zero(3);
    s.run(&c).unwrap();
    let shots = 100_000u32;
    let hist = s
        .sample(&[0.into(), 1.into(), 2.into()], shots, 9)
        .unwrap();
    let mut tv = 0.0;
    for idx in 0..8usize {
        let emp = *hist.get(&(idx as u64)).unwrap_or(&0) as f64 / shots as f64;
        tv += 0.5 * (emp - s.probability(idx)).abs();
    }
    assert!(tv < 0.02, "total variation {tv} too large");
}
