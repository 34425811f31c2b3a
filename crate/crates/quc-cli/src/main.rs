//! Command-line driver: flow solves, the exhaustive optimizer, the
//! variational search and the subroutine verification suites.

mod output;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{render_json, sig12, Csv};
use quc_core::grid::{solve_dcpf, transmission_cost_total, Grid};
use quc_core::qaoa::{optimize, width_depth_report, AnsatzConfig, Backend};
use quc_core::qsubs::{AncillaWidths, Layout};
use quc_core::uc::{brute_force, dispatch_init, GenCost, Schedule, UCInstance};
use quc_core::ModelError;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "quc", version, about = "Unit-commitment optimization with a quantum cost layer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Faithful,
    Oracle,
}

#[derive(Args)]
struct CommonOut {
    /// Write the rendered output to this path as well as stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the DC power flow for explicit injections or a schedule slice.
    Dcpf {
        /// Grid description (JSON).
        #[arg(long)]
        grid: PathBuf,
        /// Comma-separated injections in grid-file node order (MW).
        #[arg(long, allow_hyphen_values = true)]
        injections: Option<String>,
        /// Schedule file providing commitments and powers.
        #[arg(long)]
        schedule_file: Option<PathBuf>,
        /// Instance file (required with --schedule-file).
        #[arg(long)]
        uc: Option<PathBuf>,
        /// Timestep of the schedule to solve.
        #[arg(long, default_value_t = 0)]
        timestep: usize,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Exhaustive commitment search with fixed powers.
    Brute {
        #[arg(long)]
        uc: PathBuf,
        /// Power matrix JSON `[[per-timestep]...]`; defaults to the
        /// priority-list dispatch.
        #[arg(long)]
        power_file: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Variational search over (γ, β, P).
    Qaoa {
        #[arg(long)]
        uc: PathBuf,
        #[arg(long, value_enum, default_value = "oracle")]
        backend: BackendArg,
        #[arg(long, default_value_t = 1)]
        layers: usize,
        #[arg(long, default_value_t = 256)]
        shots: u32,
        #[arg(long, default_value_t = 7)]
        k_hhl: usize,
        #[arg(long, default_value_t = 6)]
        k_qadc: usize,
        #[arg(long, default_value_t = 5)]
        k_pen: usize,
        /// Objective-evaluation budget.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        /// Histogram of the final best evaluation written as CSV.
        #[arg(long)]
        hist_out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Width/depth accounting of one faithful QAOA layer.
    ReportWidth {
        #[arg(long)]
        uc: PathBuf,
        #[arg(long, default_value_t = 7)]
        k_hhl: usize,
        #[arg(long, default_value_t = 6)]
        k_qadc: usize,
        #[arg(long, default_value_t = 5)]
        k_pen: usize,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Oracle-comparison suites for the quantum subroutines.
    Verify(verify::VerifyArgs),
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Budget(String),
    Verify(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Budget(m) | CliError::Verify(m) => write!(f, "{m}"),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(err: ModelError) -> Self {
        match err {
            ModelError::TooLargeForBruteForce { .. }
            | ModelError::InfeasibleDemand { .. }
            | ModelError::OverCommitted { .. }
            | ModelError::QubitBudget { .. }
            | ModelError::OracleTooWide(_) => CliError::Budget(err.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Config(_) => 2,
        CliError::Budget(_) => 3,
        CliError::Verify(_) => 1,
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Dcpf {
            grid,
            injections,
            schedule_file,
            uc,
            timestep,
            common,
        } => cmd_dcpf(&grid, injections, schedule_file, uc, timestep, &common),
        Command::Brute { uc, power_file, common } => cmd_brute(&uc, power_file, &common),
        Command::Qaoa {
            uc,
            backend,
            layers,
            shots,
            k_hhl,
            k_qadc,
            k_pen,
            budget,
            hist_out,
            common,
        } => cmd_qaoa(
            &uc, backend, layers, shots,
            AncillaWidths { k_pen, k_hhl, k_qadc },
            budget, hist_out, &common,
        ),
        Command::ReportWidth { uc, k_hhl, k_qadc, k_pen, common } => {
            cmd_report_width(&uc, AncillaWidths { k_pen, k_hhl, k_qadc }, &common)
        }
        Command::Verify(args) => verify::run(args),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn load_grid(path: &Path) -> Result<Grid, CliError> {
    let text = read_text(path)?;
    let grid: Grid = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    grid.validate()?;
    Ok(grid)
}

#[derive(serde::Deserialize)]
struct UcFile {
    grid: String,
    timesteps: usize,
    penalty: f64,
    gen_costs: BTreeMap<String, GenCost>,
}

pub fn load_instance(path: &Path) -> Result<UCInstance, CliError> {
    let text = read_text(path)?;
    let file: UcFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let grid_path = path.parent().unwrap_or(Path::new(".")).join(&file.grid);
    let grid = load_grid(&grid_path)?;
    let mut costs = Vec::new();
    for &g in &grid.generator_indices() {
        let id = &grid.nodes[g].id;
        let cost = file.gen_costs.get(id).ok_or_else(|| {
            CliError::Config(format!("gen_costs missing entry for generator '{id}'"))
        })?;
        costs.push(cost.clone());
    }
    Ok(UCInstance::new(grid, costs, file.timesteps, file.penalty)?)
}

fn emit(common: &CommonOut, text: String) -> Result<(), CliError> {
    print!("{text}");
    if let Some(path) = &common.out {
        std::fs::write(path, &text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_dcpf(
    grid_path: &Path,
    injections: Option<String>,
    schedule_file: Option<PathBuf>,
    uc: Option<PathBuf>,
    timestep: usize,
    common: &CommonOut,
) -> Result<(), CliError> {
    let grid = load_grid(grid_path)?;
    let bmat = quc_core::grid::build_b_matrix(&grid)?;
    let gens = grid.generator_indices();

    let (per_order, active) = match (injections, schedule_file) {
        (Some(text), None) => {
            let values: Vec<f64> = text
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Config(format!("bad injection list: {e}")))?;
            if values.len() != grid.nodes.len() {
                return Err(CliError::Config(format!(
                    "expected {} injections, got {}",
                    grid.nodes.len(),
                    values.len()
                )));
            }
            // reorder from grid-file node order to matrix order
            let mut per_order = vec![0.0; values.len()];
            for (node_idx, &v) in values.iter().enumerate() {
                per_order[bmat.position_of(node_idx)] = v;
            }
            (per_order, vec![true; gens.len()])
        }
        (None, Some(sched_path)) => {
            let uc_path = uc.ok_or_else(|| {
                CliError::Config("--schedule-file requires --uc for demands".to_string())
            })?;
            let instance = load_instance(&uc_path)?;
            let text = read_text(&sched_path)?;
            let schedule: Schedule = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", sched_path.display())))?;
            if timestep >= instance.timesteps {
                return Err(CliError::Config(format!(
                    "timestep {timestep} outside horizon of {}",
                    instance.timesteps
                )));
            }
            let powers: Vec<f64> = (0..instance.generator_count())
                .map(|g| schedule.p[g][timestep])
                .collect();
            let active: Vec<bool> = (0..instance.generator_count())
                .map(|g| schedule.u[g][timestep])
                .collect();
            (instance.injections(&powers, timestep), active)
        }
        _ => {
            return Err(CliError::Config(
                "provide exactly one of --injections or --schedule-file".to_string(),
            ))
        }
    };

    let solution = solve_dcpf(&grid, &bmat, &per_order, &active)?;
    let total = transmission_cost_total(&solution);

    match common.format {
        Format::Json => {
            let order: Vec<&str> = bmat.order.iter().map(|&i| grid.nodes[i].id.as_str()).collect();
            let lines: Vec<_> = grid
                .lines
                .iter()
                .zip(solution.line_flows.iter().zip(solution.trans_costs.iter()))
                .map(|(line, (&flow, &cost))| {
                    json!({
                        "a": line.a,
                        "b": line.b,
                        "flow_mw": flow,
                        "cost": cost,
                    })
                })
                .collect();
            let mut value = json!({
                "node_order": order,
                "theta": solution.theta,
                "lines": lines,
                "total_transmission_cost": total,
            });
            emit(common, render_json(&mut value))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["a", "b", "flow_mw", "cost"]);
            for (line, (&flow, &cost)) in grid
                .lines
                .iter()
                .zip(solution.line_flows.iter().zip(solution.trans_costs.iter()))
            {
                csv.row(&[
                    line.a.clone(),
                    line.b.clone(),
                    Csv::number(flow),
                    Csv::number(cost),
                ]);
            }
            emit(common, csv.finish())
        }
    }
}

fn schedule_json(instance: &UCInstance, schedule: &Schedule) -> serde_json::Value {
    let generators: Vec<&str> = (0..instance.generator_count())
        .map(|g| instance.grid.nodes[instance.generator_node(g)].id.as_str())
        .collect();
    json!({
        "generators": generators,
        "u": schedule.u.iter()
            .map(|row| row.iter().map(|&b| u8::from(b)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "p": schedule.p,
    })
}

fn cmd_brute(
    uc_path: &Path,
    power_file: Option<PathBuf>,
    common: &CommonOut,
) -> Result<(), CliError> {
    let instance = load_instance(uc_path)?;
    let powers: Vec<Vec<f64>> = match power_file {
        Some(path) => {
            let text = read_text(&path)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => {
            let schedule = dispatch_init(&instance)?;
            schedule.p
        }
    };
    if powers.len() != instance.generator_count()
        || powers.iter().any(|row| row.len() != instance.timesteps)
    {
        return Err(CliError::Config(format!(
            "power matrix must be {} x {}",
            instance.generator_count(),
            instance.timesteps
        )));
    }

    let (schedule, cost) = brute_force(&instance, &powers)?;
    match common.format {
        Format::Json => {
            let mut value = json!({
                "schedule": schedule_json(&instance, &schedule),
                "cost": cost,
            });
            emit(common, render_json(&mut value))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["component", "value"]);
            for (name, v) in [
                ("prod", cost.prod),
                ("start", cost.start),
                ("stop", cost.stop),
                ("trans", cost.trans),
                ("penalty", cost.penalty),
                ("total", cost.total),
            ] {
                csv.row(&[name.to_string(), Csv::number(v)]);
            }
            emit(common, csv.finish())
        }
    }
}

fn qubit_cap() -> usize {
    std::env::var("QUC_QUBIT_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(AnsatzConfig::DEFAULT_QUBIT_CAP)
}

#[allow(clippy::too_many_arguments)]
fn cmd_qaoa(
    uc_path: &Path,
    backend: BackendArg,
    layers: usize,
    shots: u32,
    widths: AncillaWidths,
    budget: usize,
    hist_out: Option<PathBuf>,
    common: &CommonOut,
) -> Result<(), CliError> {
    let instance = load_instance(uc_path)?;
    let config = AnsatzConfig {
        layers,
        backend: match backend {
            BackendArg::Faithful => Backend::Faithful,
            BackendArg::Oracle => Backend::DiagonalOracle,
        },
        widths,
        shots,
        seed: common.seed,
        qubit_cap: qubit_cap(),
    };
    let layout = Layout::for_instance(&instance, widths);
    if matches!(config.backend, Backend::Faithful) && layout.width() > config.qubit_cap {
        // refusal with the width accounting attached
        let report = width_depth_report(&instance, &config)?;
        let mut value = serde_json::to_value(&report).expect("serializable");
        eprintln!("{}", render_json(&mut value));
        return Err(CliError::Budget(format!(
            "faithful circuit needs {} qubits, cap is {}",
            layout.width(),
            config.qubit_cap
        )));
    }

    let report = optimize(&instance, &config, &layout, budget)?;

    if let Some(path) = hist_out {
        let mut csv = Csv::new(&["bitstring", "count"]);
        for (bits, count) in &report.best_histogram {
            csv.row(&[bits.clone(), count.to_string()]);
        }
        std::fs::write(&path, csv.finish())
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    }

    match common.format {
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("serializable");
            emit(common, render_json(&mut value))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["eval", "expected_cost"]);
            for point in &report.trace {
                csv.row(&[point.eval.to_string(), Csv::number(point.expected)]);
            }
            emit(common, csv.finish())
        }
    }
}

fn cmd_report_width(
    uc_path: &Path,
    widths: AncillaWidths,
    common: &CommonOut,
) -> Result<(), CliError> {
    let instance = load_instance(uc_path)?;
    let config = AnsatzConfig {
        layers: 1,
        backend: Backend::Faithful,
        widths,
        shots: 1,
        seed: common.seed,
        qubit_cap: usize::MAX, // accounting only, no statevector
    };
    let report = width_depth_report(&instance, &config)?;
    match common.format {
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("serializable");
            emit(common, render_json(&mut value))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["quantity", "value"]);
            csv.row(&["qubits".into(), report.qubits.to_string()]);
            csv.row(&["one_layer_depth".into(), report.one_layer_depth.to_string()]);
            csv.row(&["one_layer_gates".into(), report.one_layer_gates.to_string()]);
            emit(common, csv.finish())
        }
    }
}

// shared by the verify module
pub fn print_metric(name: &str, value: f64) {
    println!("{name} = {}", sig12(value));
}
