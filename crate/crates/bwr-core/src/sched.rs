//! Fluid-model scheduling: priority and max-min fair rate allocation, plus
//! the event-driven flow-level simulator.
//!
//! Rates are piecewise constant between events (arrivals and completions).
//! Router wall time is recorded per flow but never added to simulated time;
//! virtual time and wall time are separate axes.

use std::collections::BTreeMap;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::model::{Flow, FlowId, NetworkGraph, NetworkState, NodeId};
use crate::routing::{self, RouteRequest, RouterKind};

/// A flow counts as complete once its remaining volume is at most this.
pub const COMPLETION_TOLERANCE: f64 = 1e-9;

/// Residual capacity at or below this counts as saturated during
/// progressive filling.
const SATURATION_EPS: f64 = 1e-12;

/// How concurrent flows share edge capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SchedulingPolicy {
    /// Strict priority by arrival time (ties by flow id).
    Fcfs,
    /// Strict priority by remaining volume, recomputed at every event
    /// (ties by flow id).
    Srpt,
    /// Max-min fair sharing via progressive filling.
    MaxMinFair,
}

impl SchedulingPolicy {
    pub const ALL: [SchedulingPolicy; 3] =
        [SchedulingPolicy::Fcfs, SchedulingPolicy::Srpt, SchedulingPolicy::MaxMinFair];

    pub fn name(self) -> &'static str {
        match self {
            SchedulingPolicy::Fcfs => "fcfs",
            SchedulingPolicy::Srpt => "srpt",
            SchedulingPolicy::MaxMinFair => "max-min-fair",
        }
    }
}

impl std::fmt::Display for SchedulingPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SchedulingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchedulingPolicy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPolicy(s.to_string()))
    }
}

impl serde::Serialize for SchedulingPolicy {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for SchedulingPolicy {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Transmission rate of every active flow at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct RateAllocation {
    snapshot_time: f64,
    rates: BTreeMap<FlowId, f64>,
}

impl RateAllocation {
    pub fn from_rates(snapshot_time: f64, rates: impl IntoIterator<Item = (FlowId, f64)>) -> Self {
        Self { snapshot_time, rates: rates.into_iter().collect() }
    }

    pub fn snapshot_time(&self) -> f64 {
        self.snapshot_time
    }

    /// Rate of `id`, zero when the flow is not in the allocation.
    pub fn rate(&self, id: FlowId) -> f64 {
        self.rates.get(&id).copied().unwrap_or(0.0)
    }

    /// (flow id, rate) pairs in ascending flow id order.
    pub fn rates(&self) -> impl Iterator<Item = (FlowId, f64)> + '_ {
        self.rates.iter().map(|(&id, &r)| (id, r))
    }

    /// True when every active flow has an entry and no edge carries more
    /// than its capacity plus `tol`.
    pub fn is_feasible(&self, state: &NetworkState, tol: f64) -> bool {
        if state.flows().iter().any(|f| !self.rates.contains_key(&f.id)) {
            return false;
        }
        let mut load = vec![0.0; state.graph.edges().len()];
        for flow in state.flows() {
            let r = self.rate(flow.id);
            for &e in flow.path().edges() {
                load[e] += r;
            }
        }
        state
            .graph
            .edges()
            .iter()
            .all(|e| load[e.id] <= e.capacity + tol)
    }
}

/// Greedy work-conserving allocation under a strict priority order: each
/// flow in turn receives the smallest residual capacity along its path, and
/// the residuals are reduced accordingly. `order` must contain every active
/// flow exactly once.
pub fn allocate_priority(state: &NetworkState, order: &[FlowId], now: f64) -> Result<RateAllocation> {
    assert_eq!(
        order.len(),
        state.flows().len(),
        "priority order must cover the active flows"
    );
    let by_id: BTreeMap<FlowId, &Flow> = state.flows().iter().map(|f| (f.id, f)).collect();
    let mut residual: Vec<f64> = state.graph.edges().iter().map(|e| e.capacity).collect();
    let mut rates = BTreeMap::new();
    for &id in order {
        let flow = by_id
            .get(&id)
            .unwrap_or_else(|| panic!("flow {id} in the priority order is not active"));
        let path = flow.path.as_ref().ok_or(Error::MissingPath(id))?;
        let rate = path
            .edges()
            .iter()
            .map(|&e| residual[e])
            .fold(f64::INFINITY, f64::min)
            .max(0.0);
        if rate > 0.0 {
            for &e in path.edges() {
                residual[e] = (residual[e] - rate).max(0.0);
            }
        }
        rates.insert(id, rate);
    }
    Ok(RateAllocation { snapshot_time: now, rates })
}

/// Max-min fair allocation by progressive filling: all unfrozen flows rise
/// at the same speed; when an edge saturates, the flows crossing it freeze
/// at their current rate.
pub fn allocate_max_min(state: &NetworkState, now: f64) -> Result<RateAllocation> {
    let flows = state.flows();
    for f in flows {
        if f.path.is_none() {
            return Err(Error::MissingPath(f.id));
        }
    }
    let edge_count = state.graph.edges().len();
    let mut residual: Vec<f64> = state.graph.edges().iter().map(|e| e.capacity).collect();
    let mut rate: Vec<f64> = vec![0.0; flows.len()];
    let mut frozen: Vec<bool> = vec![false; flows.len()];
    loop {
        let mut counts = vec![0usize; edge_count];
        let mut any = false;
        for (i, f) in flows.iter().enumerate() {
            if !frozen[i] {
                any = true;
                for &e in f.path().edges() {
                    counts[e] += 1;
                }
            }
        }
        if !any {
            break;
        }
        let mut delta = f64::INFINITY;
        for e in 0..edge_count {
            if counts[e] > 0 {
                delta = delta.min(residual[e] / counts[e] as f64);
            }
        }
        debug_assert!(delta.is_finite());
        for e in 0..edge_count {
            if counts[e] > 0 {
                residual[e] = (residual[e] - delta * counts[e] as f64).max(0.0);
            }
        }
        let mut froze = false;
        for (i, f) in flows.iter().enumerate() {
            if !frozen[i] {
                rate[i] += delta;
                if f.path().edges().iter().any(|&e| residual[e] <= SATURATION_EPS) {
                    frozen[i] = true;
                    froze = true;
                }
            }
        }
        // The minimizing edge saturates exactly each round, so some flow
        // always freezes; guard against numeric surprises regardless.
        if !froze {
            break;
        }
    }
    let rates = flows.iter().zip(rate).map(|(f, r)| (f.id, r)).collect();
    Ok(RateAllocation { snapshot_time: now, rates })
}

/// Rates in force at `now` under `policy`.
pub fn compute_allocation(
    state: &NetworkState,
    policy: SchedulingPolicy,
    now: f64,
) -> Result<RateAllocation> {
    match policy {
        SchedulingPolicy::Fcfs => {
            let mut order: Vec<&Flow> = state.flows().iter().collect();
            order.sort_by(|a, b| {
                a.arrival_time
                    .total_cmp(&b.arrival_time)
                    .then_with(|| a.id.cmp(&b.id))
            });
            let ids: Vec<FlowId> = order.into_iter().map(|f| f.id).collect();
            allocate_priority(state, &ids, now)
        }
        SchedulingPolicy::Srpt => {
            let mut order: Vec<&Flow> = state.flows().iter().collect();
            order.sort_by(|a, b| {
                a.remaining_volume
                    .total_cmp(&b.remaining_volume)
                    .then_with(|| a.id.cmp(&b.id))
            });
            let ids: Vec<FlowId> = order.into_iter().map(|f| f.id).collect();
            allocate_priority(state, &ids, now)
        }
        SchedulingPolicy::MaxMinFair => allocate_max_min(state, now),
    }
}

/// Completion outcome of one flow.
#[derive(Debug, Clone)]
pub struct FlowRecord {
    pub flow_id: FlowId,
    pub source: NodeId,
    pub destination: NodeId,
    pub total_volume: f64,
    pub arrival_time: f64,
    pub finish_time: f64,
    pub completion_time: f64,
    pub hop_count: usize,
    pub router_elapsed: Duration,
}

/// Constant-rate interval of a simulation, `[start, end)`.
#[derive(Debug, Clone)]
pub struct TraceInterval {
    pub start: f64,
    pub end: f64,
    pub rates: RateAllocation,
}

/// Runs the fluid simulation: flows are routed when they arrive (flows that
/// already carry a path keep it), rates follow `policy` between events, and
/// completions at an instant are handled before arrivals (lower flow ids
/// first within each kind). `arrivals` must be sorted by (arrival_time, id).
pub fn simulate(
    graph: &NetworkGraph,
    arrivals: Vec<Flow>,
    router: RouterKind,
    policy: SchedulingPolicy,
) -> Result<Vec<FlowRecord>> {
    run_simulation(graph, arrivals, router, policy, None)
}

/// [`simulate`] plus the piecewise-constant rate trace.
pub fn simulate_traced(
    graph: &NetworkGraph,
    arrivals: Vec<Flow>,
    router: RouterKind,
    policy: SchedulingPolicy,
) -> Result<(Vec<FlowRecord>, Vec<TraceInterval>)> {
    let mut trace = Vec::new();
    let records = run_simulation(graph, arrivals, router, policy, Some(&mut trace))?;
    Ok((records, trace))
}

fn run_simulation(
    graph: &NetworkGraph,
    arrivals: Vec<Flow>,
    router: RouterKind,
    policy: SchedulingPolicy,
    mut trace: Option<&mut Vec<TraceInterval>>,
) -> Result<Vec<FlowRecord>> {
    for pair in arrivals.windows(2) {
        let earlier = &pair[0];
        let later = &pair[1];
        if later.arrival_time < earlier.arrival_time
            || (later.arrival_time == earlier.arrival_time && later.id <= earlier.id)
        {
            return Err(Error::UnsortedArrivals(later.id));
        }
    }
    let mut state = NetworkState::new(graph.clone());
    let mut routing_meta: BTreeMap<FlowId, (usize, Duration)> = BTreeMap::new();
    let mut records = Vec::with_capacity(arrivals.len());
    let mut alloc = RateAllocation::from_rates(0.0, []);
    let mut now = 0.0;
    let mut next_idx = 0;
    while !state.flows().is_empty() || next_idx < arrivals.len() {
        let next_arrival = arrivals
            .get(next_idx)
            .map(|f| f.arrival_time)
            .unwrap_or(f64::INFINITY);
        let mut next_completion = f64::INFINITY;
        for flow in state.flows() {
            let rate = alloc.rate(flow.id);
            if rate > 0.0 {
                next_completion = next_completion.min(now + flow.remaining_volume / rate);
            }
        }
        let t_next = next_arrival.min(next_completion);
        assert!(
            t_next.is_finite(),
            "event loop stalled: active flows but no positive rate and no pending arrival"
        );
        let dt = t_next - now;
        if dt > 0.0 {
            for flow in state.flows_mut() {
                let rate = alloc.rate(flow.id);
                if rate > 0.0 {
                    flow.remaining_volume = (flow.remaining_volume - rate * dt).max(0.0);
                }
            }
            if let Some(out) = trace.as_deref_mut() {
                out.push(TraceInterval { start: now, end: t_next, rates: alloc.clone() });
            }
        }
        now = t_next;
        // Completions before arrivals, lower flow ids first.
        let mut done: Vec<FlowId> = state
            .flows()
            .iter()
            .filter(|f| f.remaining_volume <= COMPLETION_TOLERANCE)
            .map(|f| f.id)
            .collect();
        done.sort_unstable();
        for id in done {
            let flow = state.remove(id).expect("completed flow is active");
            let (hop_count, router_elapsed) = routing_meta[&flow.id];
            records.push(FlowRecord {
                flow_id: flow.id,
                source: flow.source,
                destination: flow.destination,
                total_volume: flow.total_volume,
                arrival_time: flow.arrival_time,
                finish_time: now,
                completion_time: now - flow.arrival_time,
                hop_count,
                router_elapsed,
            });
        }
        while next_idx < arrivals.len() && arrivals[next_idx].arrival_time == now {
            let flow = arrivals[next_idx].clone();
            next_idx += 1;
            let routed = if flow.path.is_some() {
                routing_meta.insert(flow.id, (flow.path().hop_count(), Duration::ZERO));
                flow
            } else {
                // The router sees the allocation in force before admission.
                let view = compute_allocation(&state, policy, now)?;
                let request = RouteRequest { new_flow: &flow, state: &state, rate_view: Some(&view) };
                let result = routing::route(router, &request)?;
                routing_meta.insert(flow.id, (result.path.hop_count(), result.elapsed));
                flow.with_path(result.path)
            };
            state.admit(routed)?;
        }
        alloc = compute_allocation(&state, policy, now)?;
    }
    Ok(records)
}
