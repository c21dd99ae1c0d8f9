//! Flow routing and fluid scheduling toolkit for inter-datacenter networks.
//!
//! The crate models a capacitated directed WAN ([`model`]), selects paths
//! for arriving flows with two best-worst-case heuristics and three
//! baselines ([`routing`]), simulates fluid transmission under FCFS, SRPT,
//! or max-min fair sharing ([`sched`]), verifies routing bounds against an
//! exhaustive worst-case oracle ([`oracle`]), generates reproducible traffic
//! ([`traffic`]), and runs paired multi-repetition experiments with CSV
//! output ([`experiment`]).

pub mod error;
pub mod experiment;
pub mod instance;
pub mod model;
pub mod oracle;
pub mod routing;
pub mod sched;
pub mod snapshot;
pub mod topology;
pub mod traffic;

pub use error::{Error, Result};
pub use experiment::{
    aggregate, derive_seed, metrics_for_run, nearest_rank, relative_difference, repetition_input,
    resolve_config, run_experiment, CapacityRange, ExperimentOutput, FlowRow, PatternSpec,
    RepetitionInput, ResolvedScenario, RunMetrics, ScenarioConfig, SummaryRow, SummaryTable,
};
pub use instance::{random_instance, random_simple_path, Instance, InstanceSpec};
pub use model::{
    DirectedEdge, EdgeId, Flow, FlowId, NetworkGraph, NetworkState, NodeId, Path,
};
pub use oracle::{
    build_dependency_graph, run_priority_sim, run_priority_sim_traced, worst_case_exact,
    worst_case_histogram, DependencyGraph, WorstCaseResult, DEFAULT_MAX_CONFLICTS,
};
pub use routing::{
    bwrh_cost, bwrhf_cost, route, route_bwrh, route_bwrhf, route_inverse_capacity,
    route_min_max_utilization, route_shortest_widest, RouteRequest, RouteResult, RouterKind,
};
pub use sched::{
    allocate_max_min, allocate_priority, compute_allocation, simulate, simulate_traced,
    FlowRecord, RateAllocation, SchedulingPolicy, TraceInterval, COMPLETION_TOLERANCE,
};
pub use snapshot::{load_snapshot, load_snapshot_str, SnapshotDoc, SnapshotFlow};
pub use topology::{
    builtin_topology, load_topology, load_topology_str, randomize_capacities, resolve_topology,
    synthetic_topology, DEFAULT_CAPACITY,
};
pub use traffic::{
    generate_arrivals, sample_bounded_pareto, sample_empirical, BoundedPareto, CdfTable,
    SizeDistribution, TrafficPattern, HEAVY_TAIL_MAX, HEAVY_TAIL_MIN, LIGHT_TAIL_MAX,
};
