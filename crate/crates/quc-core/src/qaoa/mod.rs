//! Variational driver: ansatz assembly, sampled cost evaluation, the
//! derivative-free parameter search and circuit accounting.

pub mod ansatz;
pub mod optimize;
pub mod report;

pub use ansatz::{
    build_ansatz, cost_layer, cost_layer_error_budget, exact_expected_cost, expected_cost,
    expected_diagonal_phase, mixer_layer, oracle_diagonal, AnsatzConfig, Backend, EvalResult,
    QAOAParams,
};
pub use optimize::{optimize, RunReport, TracePoint};
pub use report::{width_depth_report, WidthDepthReport};
