//! Scenario configuration, the paired multi-repetition experiment runner,
//! metric aggregation, and CSV persistence.
//!
//! Per repetition the capacity draw and the arrival list are generated once
//! and shared by every (router, policy) cell, so scheme comparisons are
//! paired. All randomness derives from the base seed through a fixed mixing
//! function; adding repetitions never perturbs earlier ones.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::NetworkGraph;
use crate::routing::RouterKind;
use crate::sched::{simulate, FlowRecord, SchedulingPolicy};
use crate::topology::{builtin_topology, load_topology, load_topology_str, randomize_capacities};
use crate::traffic::{
    generate_arrivals, CdfTable, SizeDistribution, TrafficPattern, HEAVY_TAIL_MAX, HEAVY_TAIL_MIN,
};

/// Uniform range that per-repetition edge capacities are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityRange {
    pub low: f64,
    pub high: f64,
}

impl Default for CapacityRange {
    fn default() -> Self {
        Self { low: 0.2, high: 1.0 }
    }
}

fn default_mean() -> f64 {
    50.0
}
fn default_rate() -> f64 {
    1.0
}
fn default_count() -> usize {
    500
}
fn default_tail_min() -> f64 {
    HEAVY_TAIL_MIN
}
fn default_tail_max() -> f64 {
    HEAVY_TAIL_MAX
}
fn default_repetitions() -> usize {
    20
}
fn default_routers() -> Vec<RouterKind> {
    RouterKind::ALL.to_vec()
}
fn default_policies() -> Vec<SchedulingPolicy> {
    vec![SchedulingPolicy::MaxMinFair]
}

/// Traffic pattern as written in a scenario config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PatternSpec {
    LightTailed {
        #[serde(default = "default_mean")]
        mean: f64,
        #[serde(default = "default_rate")]
        arrival_rate: f64,
        #[serde(default = "default_count")]
        flow_count: usize,
    },
    HeavyTailed {
        #[serde(default = "default_mean")]
        mean: f64,
        #[serde(default = "default_tail_min")]
        min: f64,
        #[serde(default = "default_tail_max")]
        max: f64,
        #[serde(default = "default_rate")]
        arrival_rate: f64,
        #[serde(default = "default_count")]
        flow_count: usize,
    },
    /// Tabulated CDF, either inline `rows` or a two-column CSV `file`
    /// (path relative to the config file).
    Empirical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<Vec<(f64, f64)>>,
        #[serde(default = "default_rate")]
        arrival_rate: f64,
        #[serde(default = "default_count")]
        flow_count: usize,
    },
}

impl PatternSpec {
    /// Pattern family name used in output rows.
    pub fn label(&self) -> &'static str {
        match self {
            PatternSpec::LightTailed { .. } => "light-tailed",
            PatternSpec::HeavyTailed { .. } => "heavy-tailed",
            PatternSpec::Empirical { .. } => "empirical",
        }
    }

    /// Builds the concrete pattern, loading any referenced CDF file.
    pub fn resolve(&self, base_dir: Option<&FsPath>) -> Result<TrafficPattern> {
        let pattern = match self {
            PatternSpec::LightTailed { mean, arrival_rate, flow_count } => TrafficPattern {
                sizes: SizeDistribution::LightTailed { mean: *mean },
                arrival_rate: *arrival_rate,
                flow_count: *flow_count,
            },
            PatternSpec::HeavyTailed { mean, min, max, arrival_rate, flow_count } => {
                TrafficPattern {
                    sizes: SizeDistribution::HeavyTailed { mean: *mean, min: *min, max: *max },
                    arrival_rate: *arrival_rate,
                    flow_count: *flow_count,
                }
            }
            PatternSpec::Empirical { file, rows, arrival_rate, flow_count } => {
                let table = match (file, rows) {
                    (Some(path), None) => CdfTable::from_csv_path(join_base(path, base_dir))?,
                    (None, Some(rows)) => CdfTable::new(rows.clone())?,
                    _ => {
                        return Err(Error::InvalidConfig(
                            "empirical pattern needs exactly one of 'file' or 'rows'".into(),
                        ))
                    }
                };
                TrafficPattern {
                    sizes: SizeDistribution::Empirical(table),
                    arrival_rate: *arrival_rate,
                    flow_count: *flow_count,
                }
            }
        };
        pattern.validate()?;
        Ok(pattern)
    }
}

/// A full experiment description as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Built-in topology name or a path to a topology file.
    pub topology: String,
    #[serde(default)]
    pub capacities: CapacityRange,
    pub pattern: PatternSpec,
    #[serde(default = "default_routers")]
    pub routers: Vec<RouterKind>,
    #[serde(default = "default_policies")]
    pub policies: Vec<SchedulingPolicy>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// When false (the default) the CSV timing columns are written as 0 so
    /// re-runs are byte-identical; in-memory metrics always carry timings.
    #[serde(default)]
    pub record_timing: bool,
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(config)
    }

    pub fn from_path(path: impl AsRef<FsPath>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

fn join_base(path: &str, base_dir: Option<&FsPath>) -> PathBuf {
    let p = FsPath::new(path);
    match (p.is_relative(), base_dir) {
        (true, Some(dir)) => dir.join(p),
        _ => p.to_path_buf(),
    }
}

/// A validated config with the topology loaded and the pattern built.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub base_graph: NetworkGraph,
    pub pattern: TrafficPattern,
    pub pattern_label: String,
    pub topology_label: String,
    pub capacities: CapacityRange,
    pub routers: Vec<RouterKind>,
    pub policies: Vec<SchedulingPolicy>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub record_timing: bool,
}

/// Validates `config` and loads its referenced files. Relative paths are
/// interpreted against `base_dir` (normally the config file's directory).
pub fn resolve_config(config: &ScenarioConfig, base_dir: Option<&FsPath>) -> Result<ResolvedScenario> {
    if config.repetitions == 0 {
        return Err(Error::InvalidConfig("repetitions must be at least 1".into()));
    }
    if config.routers.is_empty() {
        return Err(Error::InvalidConfig("need at least one router".into()));
    }
    if config.policies.is_empty() {
        return Err(Error::InvalidConfig("need at least one policy".into()));
    }
    for (i, r) in config.routers.iter().enumerate() {
        if config.routers[..i].contains(r) {
            return Err(Error::InvalidConfig(format!("duplicate router '{r}'")));
        }
    }
    for (i, p) in config.policies.iter().enumerate() {
        if config.policies[..i].contains(p) {
            return Err(Error::InvalidConfig(format!("duplicate policy '{p}'")));
        }
    }
    let base_graph = match builtin_topology(&config.topology) {
        Some(doc) => load_topology_str(doc)?,
        None => load_topology(join_base(&config.topology, base_dir))?,
    };
    // Surfaces bad ranges before the per-repetition draws.
    randomize_capacities(&base_graph, config.capacities.low, config.capacities.high, 0)?;
    Ok(ResolvedScenario {
        base_graph,
        pattern: config.pattern.resolve(base_dir)?,
        pattern_label: config.pattern.label().to_string(),
        topology_label: config.topology.clone(),
        capacities: config.capacities,
        routers: config.routers.clone(),
        policies: config.policies.clone(),
        repetitions: config.repetitions,
        base_seed: config.base_seed,
        record_timing: config.record_timing,
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic seed for an independent stream: repetition seeds depend
/// only on (base, index), and sub-seeds only on the repetition seed.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream))
}

const CAPACITY_STREAM: u64 = 1;
const TRAFFIC_STREAM: u64 = 2;

/// Aggregate outcome of one (repetition, router, policy) cell.
#[derive(Debug, Clone)]
pub struct RunMetrics {
    pub run_id: u64,
    pub router: RouterKind,
    pub policy: SchedulingPolicy,
    pub pattern: String,
    pub topology: String,
    pub seed: u64,
    pub mean_fct: f64,
    pub p99_fct: f64,
    pub max_fct: f64,
    pub mean_router_elapsed: Duration,
    pub max_router_elapsed: Duration,
}

/// One flows.csv row: a completion record plus its run context.
#[derive(Debug, Clone)]
pub struct FlowRow {
    pub run_id: u64,
    pub router: RouterKind,
    pub policy: SchedulingPolicy,
    pub source: String,
    pub destination: String,
    pub record: FlowRecord,
}

/// One summary.csv row: across-repetition statistics for a
/// (router, policy, pattern, topology) group.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub router: String,
    pub policy: String,
    pub pattern: String,
    pub topology: String,
    pub repetitions: usize,
    pub mean_fct_mean: f64,
    pub mean_fct_std: f64,
    pub p99_fct_mean: f64,
    pub p99_fct_std: f64,
    pub max_fct_mean: f64,
    pub max_fct_std: f64,
    /// (mean_fct ratio, p99_fct ratio) of this row's means over each router
    /// in [`SummaryTable::ratio_routers`] order; NaN when that router has no
    /// matching group.
    pub ratios: Vec<(f64, f64)>,
}

/// Summary rows plus the router order the ratio columns refer to.
#[derive(Debug, Clone)]
pub struct SummaryTable {
    pub ratio_routers: Vec<String>,
    pub rows: Vec<SummaryRow>,
}

/// Everything an experiment produces, ready for CSV persistence.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub flows: Vec<FlowRow>,
    pub runs: Vec<RunMetrics>,
    pub summary: SummaryTable,
    pub record_timing: bool,
}

/// The paired inputs one repetition feeds to every (router, policy) cell.
pub struct RepetitionInput {
    pub seed: u64,
    pub graph: NetworkGraph,
    pub arrivals: Vec<crate::model::Flow>,
}

/// Capacity draw and arrival list for repetition `r`: both derive from the
/// repetition seed alone, so every cell of the sweep sees identical inputs.
pub fn repetition_input(scenario: &ResolvedScenario, r: usize) -> Result<RepetitionInput> {
    let seed = derive_seed(scenario.base_seed, r as u64);
    let graph = randomize_capacities(
        &scenario.base_graph,
        scenario.capacities.low,
        scenario.capacities.high,
        derive_seed(seed, CAPACITY_STREAM),
    )?;
    let arrivals =
        generate_arrivals(&scenario.pattern, &graph, derive_seed(seed, TRAFFIC_STREAM))?;
    Ok(RepetitionInput { seed, graph, arrivals })
}

/// Runs the full sweep: repetitions × routers × policies, in parallel over
/// cells, with paired inputs per repetition. Output rows are sorted by run
/// id (repetition-major, then router, then policy) and flow id.
pub fn run_experiment(scenario: &ResolvedScenario) -> Result<ExperimentOutput> {
    let inputs: Vec<RepetitionInput> = (0..scenario.repetitions)
        .map(|r| repetition_input(scenario, r))
        .collect::<Result<_>>()?;
    let router_count = scenario.routers.len() as u64;
    let policy_count = scenario.policies.len() as u64;
    let cells: Vec<(usize, usize, usize)> = (0..scenario.repetitions)
        .flat_map(|r| {
            (0..scenario.routers.len())
                .flat_map(move |ri| (0..scenario.policies.len()).map(move |pi| (r, ri, pi)))
        })
        .collect();
    let mut results: Vec<(u64, usize, usize, usize, Vec<FlowRecord>)> = cells
        .par_iter()
        .map(|&(r, ri, pi)| {
            let input = &inputs[r];
            let records = simulate(
                &input.graph,
                input.arrivals.clone(),
                scenario.routers[ri],
                scenario.policies[pi],
            )?;
            let run_id = (r as u64 * router_count + ri as u64) * policy_count + pi as u64;
            Ok((run_id, r, ri, pi, records))
        })
        .collect::<Result<_>>()?;
    results.sort_by_key(|t| t.0);
    let mut flows = Vec::with_capacity(results.len() * scenario.pattern.flow_count);
    let mut runs = Vec::with_capacity(results.len());
    for (run_id, r, ri, pi, mut records) in results {
        let input = &inputs[r];
        records.sort_by_key(|rec| rec.flow_id);
        runs.push(metrics_for_run(
            run_id,
            scenario.routers[ri],
            scenario.policies[pi],
            &scenario.pattern_label,
            &scenario.topology_label,
            input.seed,
            &records,
        ));
        for record in records {
            flows.push(FlowRow {
                run_id,
                router: scenario.routers[ri],
                policy: scenario.policies[pi],
                source: input.graph.node_name(record.source).to_string(),
                destination: input.graph.node_name(record.destination).to_string(),
                record,
            });
        }
    }
    let summary = aggregate(&runs);
    Ok(ExperimentOutput { flows, runs, summary, record_timing: scenario.record_timing })
}

/// Folds one run's completion records into its summary metrics row.
pub fn metrics_for_run(
    run_id: u64,
    router: RouterKind,
    policy: SchedulingPolicy,
    pattern: &str,
    topology: &str,
    seed: u64,
    records: &[FlowRecord],
) -> RunMetrics {
    assert!(!records.is_empty());
    let mut fcts: Vec<f64> = records.iter().map(|r| r.completion_time).collect();
    fcts.sort_by(f64::total_cmp);
    let total_elapsed: Duration = records.iter().map(|r| r.router_elapsed).sum();
    RunMetrics {
        run_id,
        router,
        policy,
        pattern: pattern.to_string(),
        topology: topology.to_string(),
        seed,
        mean_fct: fcts.iter().sum::<f64>() / fcts.len() as f64,
        p99_fct: nearest_rank(&fcts, 0.99),
        max_fct: *fcts.last().unwrap(),
        mean_router_elapsed: total_elapsed / records.len() as u32,
        max_router_elapsed: records.iter().map(|r| r.router_elapsed).max().unwrap(),
    }
}

/// Nearest-rank percentile of an ascending list: the ceil(q·n)-th smallest
/// value, 1-indexed.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of an empty list");
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// (reference − other) / reference: positive when `other` is smaller, i.e.
/// outperforms `reference`. Exactly 0 when the two are equal.
pub fn relative_difference(reference: f64, other: f64) -> f64 {
    if reference == other {
        0.0
    } else {
        (reference - other) / reference
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Across-repetition statistics per (router, policy, pattern, topology)
/// group, with pairwise ratio columns against every router present.
pub fn aggregate(metrics: &[RunMetrics]) -> SummaryTable {
    let mut groups: BTreeMap<(String, String, String, String), Vec<&RunMetrics>> = BTreeMap::new();
    for m in metrics {
        groups
            .entry((
                m.router.name().to_string(),
                m.policy.name().to_string(),
                m.pattern.clone(),
                m.topology.clone(),
            ))
            .or_default()
            .push(m);
    }
    let mut ratio_routers: Vec<String> =
        groups.keys().map(|(router, ..)| router.clone()).collect();
    ratio_routers.dedup();
    ratio_routers.sort();
    ratio_routers.dedup();
    // First pass: plain statistics per group.
    let mut stats: BTreeMap<&(String, String, String, String), (f64, f64)> = BTreeMap::new();
    let mut rows = Vec::with_capacity(groups.len());
    for (key, runs) in &groups {
        let means: Vec<f64> = runs.iter().map(|m| m.mean_fct).collect();
        let p99s: Vec<f64> = runs.iter().map(|m| m.p99_fct).collect();
        let maxes: Vec<f64> = runs.iter().map(|m| m.max_fct).collect();
        stats.insert(key, (mean(&means), mean(&p99s)));
        rows.push(SummaryRow {
            router: key.0.clone(),
            policy: key.1.clone(),
            pattern: key.2.clone(),
            topology: key.3.clone(),
            repetitions: runs.len(),
            mean_fct_mean: mean(&means),
            mean_fct_std: sample_std(&means),
            p99_fct_mean: mean(&p99s),
            p99_fct_std: sample_std(&p99s),
            max_fct_mean: mean(&maxes),
            max_fct_std: sample_std(&maxes),
            ratios: Vec::new(),
        });
    }
    // Second pass: this group's means over each router's means within the
    // same (policy, pattern, topology).
    for row in &mut rows {
        row.ratios = ratio_routers
            .iter()
            .map(|other| {
                let key = (
                    other.clone(),
                    row.policy.clone(),
                    row.pattern.clone(),
                    row.topology.clone(),
                );
                match stats.get(&key) {
                    Some(&(other_mean, other_p99)) => (
                        row.mean_fct_mean / other_mean,
                        row.p99_fct_mean / other_p99,
                    ),
                    None => (f64::NAN, f64::NAN),
                }
            })
            .collect();
    }
    SummaryTable { ratio_routers, rows }
}

impl ExperimentOutput {
    fn micros(&self, d: Duration) -> u128 {
        if self.record_timing {
            d.as_micros()
        } else {
            0
        }
    }

    pub fn flows_csv(&self) -> String {
        let mut out = String::from(
            "run_id,flow_id,source,destination,total_volume,arrival_time,finish_time,completion_time,hop_count,router,policy,router_elapsed_micros\n",
        );
        for row in &self.flows {
            let r = &row.record;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                row.run_id,
                r.flow_id,
                row.source,
                row.destination,
                r.total_volume,
                r.arrival_time,
                r.finish_time,
                r.completion_time,
                r.hop_count,
                row.router.name(),
                row.policy.name(),
                self.micros(r.router_elapsed),
            )
            .expect("string write");
        }
        out
    }

    pub fn runs_csv(&self) -> String {
        let mut out = String::from(
            "run_id,router,policy,pattern,topology,seed,mean_fct,p99_fct,max_fct,mean_router_elapsed,max_router_elapsed\n",
        );
        for m in &self.runs {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                m.run_id,
                m.router.name(),
                m.policy.name(),
                m.pattern,
                m.topology,
                m.seed,
                m.mean_fct,
                m.p99_fct,
                m.max_fct,
                self.micros(m.mean_router_elapsed),
                self.micros(m.max_router_elapsed),
            )
            .expect("string write");
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from(
            "router,policy,pattern,topology,repetitions,mean_fct_mean,mean_fct_std,p99_fct_mean,p99_fct_std,max_fct_mean,max_fct_std",
        );
        for router in &self.summary.ratio_routers {
            write!(out, ",mean_fct_ratio_vs_{router},p99_fct_ratio_vs_{router}")
                .expect("string write");
        }
        out.push('\n');
        for row in &self.summary.rows {
            write!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                row.router,
                row.policy,
                row.pattern,
                row.topology,
                row.repetitions,
                row.mean_fct_mean,
                row.mean_fct_std,
                row.p99_fct_mean,
                row.p99_fct_std,
                row.max_fct_mean,
                row.max_fct_std,
            )
            .expect("string write");
            for (mean_ratio, p99_ratio) in &row.ratios {
                write!(out, ",{mean_ratio},{p99_ratio}").expect("string write");
            }
            out.push('\n');
        }
        out
    }

    /// Writes flows.csv, runs.csv, and summary.csv into `dir` (created if
    /// missing).
    pub fn write_to_dir(&self, dir: impl AsRef<FsPath>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("flows.csv"), self.flows_csv())?;
        std::fs::write(dir.join("runs.csv"), self.runs_csv())?;
        std::fs::write(dir.join("summary.csv"), self.summary_csv())?;
        Ok(())
    }
}
