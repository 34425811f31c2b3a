//! Command-line behavior: exit codes, refusals, format switches.

use std::path::PathBuf;
use std::process::Command;

fn quc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quc"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn malformed_grid_exits_with_config_code() {
    let dir = std::env::temp_dir().join("quc_cli_bad_grid");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = quc()
        .args(["dcpf", "--grid", path.to_str().unwrap(), "--injections", "1,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty(), "diagnostic goes to stderr");
}

#[test]
fn wrong_injection_count_is_config_error() {
    let out = quc()
        .args(["dcpf", "--grid", &fixture("appendix_grid.json"), "--injections", "1,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_injections_give_zero_report() {
    let out = quc()
        .args([
            "dcpf",
            "--grid",
            &fixture("appendix_grid.json"),
            "--injections",
            "0,0,0,0,0",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,b,flow_mw,cost"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[2].parse::<f64>().unwrap(), 0.0);
        assert_eq!(fields[3].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn oversized_brute_force_is_refused() {
    // 3 generators x 7 timesteps = 21 commitment bits, over the limit
    let dir = std::env::temp_dir().join("quc_cli_oversize");
    std::fs::create_dir_all(&dir).unwrap();
    let grid = serde_json::json!({
        "nodes": [
            {"id": "g0", "kind": "generator", "p_min": 1.0, "p_max": 10.0},
            {"id": "g1", "kind": "generator", "p_min": 1.0, "p_max": 10.0},
            {"id": "g2", "kind": "generator", "p_min": 1.0, "p_max": 10.0},
            {"id": "load", "kind": "load", "demand": [5.0,5.0,5.0,5.0,5.0,5.0,5.0]}
        ],
        "lines": [
            {"a": "g0", "b": "load", "susceptance": 0.5, "tariff": 1.0},
            {"a": "g1", "b": "load", "susceptance": 0.5, "tariff": 1.0},
            {"a": "g2", "b": "load", "susceptance": 0.5, "tariff": 1.0}
        ]
    });
    std::fs::write(dir.join("grid.json"), grid.to_string()).unwrap();
    let cost = serde_json::json!({"a": 1.0, "b": 1.0, "c": 0.1, "fuel_cost": 1.0, "on_cost": 1.0, "off_cost": 1.0});
    let uc = serde_json::json!({
        "grid": "grid.json",
        "timesteps": 7,
        "penalty": 10.0,
        "gen_costs": {"g0": cost, "g1": cost, "g2": cost}
    });
    let uc_path = dir.join("uc.json");
    std::fs::write(&uc_path, uc.to_string()).unwrap();

    let out = quc()
        .args(["brute", "--uc", uc_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "budget refusal");
}

#[test]
fn faithful_backend_over_cap_is_refused_with_accounting() {
    let out = quc()
        .args([
            "qaoa",
            "--uc",
            &fixture("appendix_uc.json"),
            "--backend",
            "faithful",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("qubits"), "width accounting printed: {err}");
}

#[test]
fn qubit_cap_env_override_is_honored() {
    // raising the cap past the instance width turns the refusal into a
    // budget-limited run; keep it tiny so the test stays fast
    let out = quc()
        .args([
            "qaoa",
            "--uc",
            &fixture("toy_uc_t1.json"),
            "--backend",
            "faithful",
            "--layers",
            "1",
            "--k-hhl",
            "3",
            "--k-qadc",
            "3",
            "--k-pen",
            "2",
            "--budget",
            "3",
            "--shots",
            "16",
        ])
        .env("QUC_QUBIT_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "cap of 10 refuses the 16-qubit circuit");

    let out = quc()
        .args([
            "qaoa",
            "--uc",
            &fixture("toy_uc_t1.json"),
            "--backend",
            "faithful",
            "--layers",
            "1",
            "--k-hhl",
            "3",
            "--k-qadc",
            "3",
            "--k-pen",
            "2",
            "--budget",
            "3",
            "--shots",
            "16",
        ])
        .env("QUC_QUBIT_CAP", "20")
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn unknown_verify_suite_is_config_error() {
    let out = quc().args(["verify", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_costdiag_emits_csv_and_passes() {
    let out = quc()
        .args([
            "verify",
            "costdiag",
            "--uc",
            &fixture("toy_uc_t1.json"),
            "--k-hhl",
            "4",
            "--k-qadc",
            "4",
            "--gamma",
            "0.01",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("state,realized_phase,reference_phase,abs_error,leakage"));
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn layers_zero_qaoa_runs_uniform_sampling() {
    let out = quc()
        .args([
            "qaoa",
            "--uc",
            &fixture("toy_uc_t1.json"),
            "--backend",
            "oracle",
            "--layers",
            "0",
            "--budget",
            "2",
            "--shots",
            "512",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("best_bitstring"));
}

#[test]
fn report_width_matches_layout_formula() {
    let out = quc()
        .args([
            "report-width",
            "--uc",
            &fixture("appendix_uc.json"),
            "--k-hhl",
            "7",
            "--k-qadc",
            "6",
            "--k-pen",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // n·T + ⌈log₂ m⌉ + k_hhl + k_qadc + k_pen + 4 = 6 + 3 + 7 + 6 + 5 + 4
    assert_eq!(value["qubits"], 31);
    assert_eq!(value["main_register"], 6);
    assert_eq!(value["ancillas"], 4);
}

#[test]
fn dcpf_solves_from_schedule_file() {
    let dir = std::env::temp_dir().join("quc_cli_sched");
    std::fs::create_dir_all(&dir).unwrap();
    let schedule = serde_json::json!({
        "u": [[true], [true]],
        "p": [[4.0], [4.0]]
    });
    let path = dir.join("sched.json");
    std::fs::write(&path, schedule.to_string()).unwrap();
    let out = quc()
        .args([
            "dcpf",
            "--grid",
            &fixture("toy_grid.json"),
            "--schedule-file",
            path.to_str().unwrap(),
            "--uc",
            &fixture("toy_uc_t1.json"),
            "--timestep",
            "0",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value["total_transmission_cost"].as_f64().unwrap() > 0.0);
}
