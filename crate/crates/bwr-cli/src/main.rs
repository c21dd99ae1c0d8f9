//! `bwr`: route flows, run fluid-model simulations and experiment sweeps,
//! check worst-case completion times, and lint input files.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use bwr_core::{
    aggregate, compute_allocation, load_snapshot, load_topology, metrics_for_run,
    repetition_input, resolve_config, route, run_experiment, worst_case_exact,
    worst_case_histogram, CdfTable, ExperimentOutput, Flow, FlowRow, NetworkGraph, NetworkState,
    Path, RouteRequest, RouterKind, ScenarioConfig, SchedulingPolicy, DEFAULT_MAX_CONFLICTS,
};

#[derive(Parser)]
#[command(
    name = "bwr",
    version,
    about = "Flow routing and scheduling toolkit for capacitated networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pick a path for one new flow against a state snapshot.
    Route(RouteArgs),
    /// Run a single (router, policy) simulation from a scenario config.
    Simulate(SimulateArgs),
    /// Run the full scenario sweep and write flows/runs/summary CSVs.
    Experiment(ExperimentArgs),
    /// Exhaustively check a candidate path's worst-case completion time.
    Oracle(OracleArgs),
    /// Lint topology, size-distribution, or scenario config files.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RouteArgs {
    /// State snapshot (JSON: topology or topology_ref, plus routed flows).
    #[arg(long)]
    state: PathBuf,
    /// Router to use.
    #[arg(long, default_value = "bwrh")]
    router: RouterKind,
    /// Policy used to derive the rate view routers may consult.
    #[arg(long, default_value = "max-min-fair")]
    policy: SchedulingPolicy,
    /// Source node name.
    #[arg(long)]
    source: String,
    /// Destination node name.
    #[arg(long)]
    dest: String,
    /// Volume of the new flow.
    #[arg(long)]
    volume: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Router to run; defaults to the config's router when it lists one.
    #[arg(long)]
    router: Option<RouterKind>,
    /// Policy to run; defaults to the config's policy when it lists one.
    #[arg(long)]
    policy: Option<SchedulingPolicy>,
    /// Repetition index to reproduce (selects the capacity/traffic draw).
    #[arg(long, default_value_t = 0)]
    rep: usize,
    /// Overrides the config's base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for flows.csv/runs.csv/summary.csv of this single run.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Scenario config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for flows.csv, runs.csv, and summary.csv.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config's base seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    /// State snapshot (JSON) with the already-routed flows.
    #[arg(long)]
    state: PathBuf,
    /// Candidate path as comma-separated node names; routed when absent.
    #[arg(long)]
    path: Option<String>,
    /// Router choosing the candidate when --path is absent.
    #[arg(long, default_value = "bwrh")]
    router: RouterKind,
    /// Policy deriving the rate view for that router.
    #[arg(long, default_value = "max-min-fair")]
    policy: SchedulingPolicy,
    /// Source node name (required unless --path is given).
    #[arg(long)]
    source: Option<String>,
    /// Destination node name (required unless --path is given).
    #[arg(long)]
    dest: Option<String>,
    /// Volume of the new flow.
    #[arg(long)]
    volume: f64,
    /// Largest number of conflicting flows to enumerate.
    #[arg(long, default_value_t = DEFAULT_MAX_CONFLICTS)]
    max_conflicts: usize,
    /// Also write every permutation's outcome to this CSV file.
    #[arg(long)]
    hist: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).multiple(true))]
struct ValidateArgs {
    /// Topology file to lint.
    #[arg(long, group = "target")]
    topology: Option<PathBuf>,
    /// Size-distribution CDF file to lint.
    #[arg(long, group = "target")]
    cdf: Option<PathBuf>,
    /// Scenario config to lint (also resolves referenced files).
    #[arg(long, group = "target")]
    config: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Route(args) => cmd_route(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

fn node_id(graph: &NetworkGraph, name: &str) -> Result<usize> {
    graph
        .node_id(name)
        .with_context(|| format!("unknown node '{name}'"))
}

fn path_names(graph: &NetworkGraph, path: &Path) -> Vec<String> {
    path.nodes(graph)
        .into_iter()
        .map(|n| graph.node_name(n).to_string())
        .collect()
}

/// Builds the not-yet-admitted flow a one-shot query asks about. Its id is
/// one past the snapshot's largest so it never collides.
fn query_flow(state: &NetworkState, source: &str, dest: &str, volume: f64) -> Result<Flow> {
    let src = node_id(&state.graph, source)?;
    let dst = node_id(&state.graph, dest)?;
    let id = state.flows().iter().map(|f| f.id + 1).max().unwrap_or(0);
    let arrival = state
        .flows()
        .iter()
        .map(|f| f.arrival_time)
        .fold(0.0, f64::max);
    Ok(Flow::new(id, src, dst, arrival, volume)?)
}

fn cmd_route(args: RouteArgs) -> Result<()> {
    let state = load_snapshot(&args.state)?;
    let flow = query_flow(&state, &args.source, &args.dest, args.volume)?;
    let rate_view = compute_allocation(&state, args.policy, flow.arrival_time)?;
    let req = RouteRequest { new_flow: &flow, state: &state, rate_view: Some(&rate_view) };
    let res = route(args.router, &req)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "router": args.router.name(),
            "path": path_names(&state.graph, &res.path),
            "cost": res.cost,
            "paths_examined": res.paths_examined,
            "elapsed_micros": res.elapsed.as_micros() as u64,
        }))?
    );
    Ok(())
}

/// The single router/policy a `simulate` run uses: the flag wins, otherwise
/// a config listing exactly one is unambiguous.
fn pick_one<T: Copy + std::fmt::Display>(flag: Option<T>, configured: &[T], what: &str) -> Result<T> {
    match (flag, configured) {
        (Some(v), _) => Ok(v),
        (None, [only]) => Ok(*only),
        (None, _) => bail!(
            "config lists {} {what}s; pick one with --{what}",
            configured.len()
        ),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let mut config = ScenarioConfig::from_path(&args.config)?;
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    }
    let scenario = resolve_config(&config, args.config.parent())?;
    let router = pick_one(args.router, &scenario.routers, "router")?;
    let policy = pick_one(args.policy, &scenario.policies, "policy")?;
    let input = repetition_input(&scenario, args.rep)?;
    let mut records =
        bwr_core::simulate(&input.graph, input.arrivals.clone(), router, policy)?;
    records.sort_by_key(|r| r.flow_id);
    let run_id = args.rep as u64;
    let metrics = metrics_for_run(
        run_id,
        router,
        policy,
        &scenario.pattern_label,
        &scenario.topology_label,
        input.seed,
        &records,
    );
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "run_id": run_id,
            "router": router.name(),
            "policy": policy.name(),
            "seed": input.seed,
            "flows": records.len(),
            "mean_fct": metrics.mean_fct,
            "p99_fct": metrics.p99_fct,
            "max_fct": metrics.max_fct,
            "mean_router_elapsed_micros": metrics.mean_router_elapsed.as_micros() as u64,
            "max_router_elapsed_micros": metrics.max_router_elapsed.as_micros() as u64,
        }))?
    );
    if let Some(dir) = args.out {
        let flows = records
            .into_iter()
            .map(|record| FlowRow {
                run_id,
                router,
                policy,
                source: input.graph.node_name(record.source).to_string(),
                destination: input.graph.node_name(record.destination).to_string(),
                record,
            })
            .collect();
        let runs = vec![metrics];
        let summary = aggregate(&runs);
        let output =
            ExperimentOutput { flows, runs, summary, record_timing: scenario.record_timing };
        output.write_to_dir(&dir)?;
        eprintln!("wrote flows.csv, runs.csv, summary.csv to {}", dir.display());
    }
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let mut config = ScenarioConfig::from_path(&args.config)?;
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    }
    let scenario = resolve_config(&config, args.config.parent())?;
    let output = run_experiment(&scenario)?;
    output.write_to_dir(&args.out)?;
    println!(
        "wrote {} flow rows, {} runs, {} summary rows to {}",
        output.flows.len(),
        output.runs.len(),
        output.summary.rows.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let state = load_snapshot(&args.state)?;
    let candidate = match &args.path {
        Some(names) => {
            let ids = names
                .split(',')
                .map(|name| node_id(&state.graph, name.trim()))
                .collect::<Result<Vec<_>>>()?;
            state.graph.path_from_nodes(&ids)?
        }
        None => {
            let (Some(source), Some(dest)) = (&args.source, &args.dest) else {
                bail!("give --path, or --source and --dest so --router can pick one");
            };
            let flow = query_flow(&state, source, dest, args.volume)?;
            let rate_view = compute_allocation(&state, args.policy, flow.arrival_time)?;
            let req =
                RouteRequest { new_flow: &flow, state: &state, rate_view: Some(&rate_view) };
            route(args.router, &req)?.path
        }
    };
    let result = worst_case_exact(&state, &candidate, args.volume, args.max_conflicts)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "candidate_path": path_names(&state.graph, &candidate),
            "worst_time": result.worst_time,
            "witness_order": result.witness_order,
            "bwrh_bound": result.bwrh_bound,
            "bwrhf_bound": result.bwrhf_bound,
        }))?
    );
    if let Some(file) = args.hist {
        let rows = worst_case_histogram(&state, &candidate, args.volume, args.max_conflicts)?;
        let mut csv = String::from("priority_order,new_flow_completion_time\n");
        for (order, time) in &rows {
            let order: Vec<String> = order.iter().map(u64::to_string).collect();
            csv.push_str(&format!("{},{}\n", order.join("-"), time));
        }
        std::fs::write(&file, csv)?;
        eprintln!("wrote {} permutations to {}", rows.len(), file.display());
    }
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<()> {
    if let Some(file) = &args.topology {
        let graph = load_topology(file)
            .with_context(|| format!("topology {} is invalid", file.display()))?;
        println!(
            "topology {}: OK ({} nodes, {} directed edges)",
            file.display(),
            graph.node_count(),
            graph.edges().len()
        );
    }
    if let Some(file) = &args.cdf {
        let table = CdfTable::from_csv_path(file)
            .with_context(|| format!("CDF table {} is invalid", file.display()))?;
        println!("cdf {}: OK ({} rows)", file.display(), table.rows().len());
    }
    if let Some(file) = &args.config {
        let config = ScenarioConfig::from_path(file)
            .with_context(|| format!("config {} is invalid", file.display()))?;
        let scenario = resolve_config(&config, file.parent())
            .with_context(|| format!("config {} does not resolve", file.display()))?;
        println!(
            "config {}: OK (topology {}, pattern {}, {} router(s) x {} policy(ies) x {} repetition(s))",
            file.display(),
            scenario.topology_label,
            scenario.pattern_label,
            scenario.routers.len(),
            scenario.policies.len(),
            scenario.repetitions
        );
    }
    Ok(())
}
