//! Exact worst-case completion time of a candidate path on small instances.
//!
//! The adversary is a static priority order over the flows that conflict with
//! the candidate (share at least one edge with it); the new flow always has
//! the lowest priority. Every permutation is simulated under work-conserving
//! greedy allocation and the maximum completion time of the new flow is
//! reported, together with the analytic upper bounds used by the two
//! best-worst-case routers.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::model::{Flow, FlowId, NetworkGraph, NetworkState, Path};
use crate::routing::{bwrh_cost, bwrhf_cost};
use crate::sched::COMPLETION_TOLERANCE;

/// Factorial enumeration: 8 conflicting flows mean 40,320 simulations.
pub const DEFAULT_MAX_CONFLICTS: usize = 8;

/// Conflict graph over the flows sharing an edge with a candidate path.
/// Vertices in ascending flow id order; edges normalized to `(low, high)`.
/// An independent set of vertices can transmit concurrently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    pub vertices: Vec<FlowId>,
    pub edges: BTreeSet<(FlowId, FlowId)>,
}

impl DependencyGraph {
    /// True when `a` and `b` are distinct vertices with no shared edge.
    pub fn is_independent(&self, a: FlowId, b: FlowId) -> bool {
        a != b && !self.edges.contains(&(a.min(b), a.max(b)))
    }
}

fn paths_intersect(a: &Path, b: &Path) -> bool {
    a.edges().iter().any(|&e| b.contains_edge(e))
}

/// Builds the conflict graph for `candidate`: one vertex per active flow
/// whose path shares at least one edge with it, one edge per vertex pair
/// whose paths share at least one network edge.
pub fn build_dependency_graph(state: &NetworkState, candidate: &Path) -> DependencyGraph {
    debug_assert!(state.graph.validate_path(candidate).is_ok());
    let mut conflicting: Vec<&Flow> = state
        .flows()
        .iter()
        .filter(|f| paths_intersect(f.path(), candidate))
        .collect();
    conflicting.sort_by_key(|f| f.id);
    let mut edges = BTreeSet::new();
    for (i, a) in conflicting.iter().enumerate() {
        for b in &conflicting[i + 1..] {
            if paths_intersect(a.path(), b.path()) {
                edges.insert((a.id, b.id));
            }
        }
    }
    DependencyGraph {
        vertices: conflicting.iter().map(|f| f.id).collect(),
        edges,
    }
}

/// Outcome of the exhaustive worst-case search for one candidate path.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseResult {
    /// Maximum completion time of the new flow over all priority orders.
    pub worst_time: f64,
    /// Lexicographically smallest priority order over the conflicting
    /// flows attaining `worst_time` (the new flow is implicitly last).
    pub witness_order: Vec<FlowId>,
    /// Upper bound from the non-decomposable router cost: all conflicting
    /// flows complete sequentially at their worst shared bottleneck.
    pub bwrh_bound: f64,
    /// Upper bound from the edge-decomposable router cost; never below
    /// `bwrh_bound`.
    pub bwrhf_bound: f64,
}

/// Finish time of every flow when all start at time zero and capacity is
/// assigned greedily in `priority` order (highest first). `flows` pairs a
/// volume with a path; `priority` must be a permutation of the indices.
pub fn run_priority_sim(
    graph: &NetworkGraph,
    flows: &[(f64, Path)],
    priority: &[usize],
) -> Vec<f64> {
    let mut finish = vec![0.0; flows.len()];
    priority_sim_impl(graph, flows, priority, &mut finish, None);
    finish
}

/// [`run_priority_sim`] plus the piecewise-constant per-flow rates: one
/// `(start, end, rates)` entry per constant interval, rates indexed like
/// `flows`.
pub fn run_priority_sim_traced(
    graph: &NetworkGraph,
    flows: &[(f64, Path)],
    priority: &[usize],
) -> (Vec<f64>, Vec<(f64, f64, Vec<f64>)>) {
    let mut finish = vec![0.0; flows.len()];
    let mut trace = Vec::new();
    priority_sim_impl(graph, flows, priority, &mut finish, Some(&mut trace));
    (finish, trace)
}

fn priority_sim_impl(
    graph: &NetworkGraph,
    flows: &[(f64, Path)],
    priority: &[usize],
    finish: &mut [f64],
    mut trace: Option<&mut Vec<(f64, f64, Vec<f64>)>>,
) {
    assert_eq!(priority.len(), flows.len(), "priority must cover all flows");
    let mut remaining: Vec<f64> = flows.iter().map(|&(v, _)| v).collect();
    let mut active: Vec<bool> = vec![true; flows.len()];
    let mut now = 0.0;
    while active.iter().any(|&a| a) {
        let mut residual: Vec<f64> = graph.edges().iter().map(|e| e.capacity).collect();
        let mut rate = vec![0.0; flows.len()];
        for &i in priority {
            if !active[i] {
                continue;
            }
            let r = flows[i]
                .1
                .edges()
                .iter()
                .map(|&e| residual[e])
                .fold(f64::INFINITY, f64::min)
                .max(0.0);
            if r > 0.0 {
                rate[i] = r;
                for &e in flows[i].1.edges() {
                    residual[e] = (residual[e] - r).max(0.0);
                }
            }
        }
        let mut dt = f64::INFINITY;
        for i in 0..flows.len() {
            if active[i] && rate[i] > 0.0 {
                dt = dt.min(remaining[i] / rate[i]);
            }
        }
        // The highest-priority active flow always gets its full bottleneck,
        // so some flow makes progress every round.
        assert!(dt.is_finite(), "greedy priority allocation stalled");
        if let Some(out) = trace.as_deref_mut() {
            out.push((now, now + dt, rate.clone()));
        }
        now += dt;
        for i in 0..flows.len() {
            if active[i] && rate[i] > 0.0 {
                remaining[i] = (remaining[i] - rate[i] * dt).max(0.0);
            }
            if active[i] && remaining[i] <= COMPLETION_TOLERANCE {
                active[i] = false;
                finish[i] = now;
            }
        }
    }
}

fn conflicting_flows<'a>(state: &'a NetworkState, candidate: &Path) -> Vec<&'a Flow> {
    let mut flows: Vec<&Flow> = state
        .flows()
        .iter()
        .filter(|f| paths_intersect(f.path(), candidate))
        .collect();
    flows.sort_by_key(|f| f.id);
    flows
}

/// Runs `visit` with (priority order over conflicting flow ids, completion
/// time of the new flow) for every permutation, in lexicographic order of
/// the id sequences. Returns the number of conflicting flows.
fn enumerate_permutations(
    state: &NetworkState,
    candidate: &Path,
    new_volume: f64,
    max_conflicts: usize,
    mut visit: impl FnMut(&[FlowId], f64),
) -> Result<usize> {
    state.graph.validate_path(candidate)?;
    if !(new_volume.is_finite() && new_volume > 0.0) {
        return Err(Error::InvalidFlow {
            id: 0,
            reason: format!("new volume must be positive and finite, got {new_volume}"),
        });
    }
    let conflicting = conflicting_flows(state, candidate);
    if conflicting.len() > max_conflicts {
        return Err(Error::TooManyConflicts {
            count: conflicting.len(),
            cap: max_conflicts,
        });
    }
    // The new flow sits at index n with the lowest priority in every order.
    let n = conflicting.len();
    let mut sim_flows: Vec<(f64, Path)> = conflicting
        .iter()
        .map(|f| (f.remaining_volume, f.path().clone()))
        .collect();
    sim_flows.push((new_volume, candidate.clone()));
    let mut priority = Vec::with_capacity(n + 1);
    for perm in (0..n).permutations(n) {
        priority.clear();
        priority.extend_from_slice(&perm);
        priority.push(n);
        let finish = run_priority_sim(&state.graph, &sim_flows, &priority);
        let order: Vec<FlowId> = perm.iter().map(|&i| conflicting[i].id).collect();
        visit(&order, finish[n]);
    }
    Ok(n)
}

/// Exhaustive worst case for routing a flow of `new_volume` on `candidate`:
/// simulates every static priority order over the conflicting flows (new
/// flow last) and reports the maximum completion time, the first order
/// attaining it, and both analytic bounds. Refuses instances with more than
/// `max_conflicts` conflicting flows.
pub fn worst_case_exact(
    state: &NetworkState,
    candidate: &Path,
    new_volume: f64,
    max_conflicts: usize,
) -> Result<WorstCaseResult> {
    let mut worst_time = f64::NEG_INFINITY;
    let mut witness_order = Vec::new();
    enumerate_permutations(state, candidate, new_volume, max_conflicts, |order, t| {
        // Strict comparison keeps the lexicographically first witness.
        if t > worst_time {
            worst_time = t;
            witness_order = order.to_vec();
        }
    })?;
    Ok(WorstCaseResult {
        worst_time,
        witness_order,
        bwrh_bound: bwrh_cost(candidate, state, new_volume),
        bwrhf_bound: bwrhf_cost(candidate, state, new_volume),
    })
}

/// Completion time of the new flow under every priority order, in
/// lexicographic order of the orders. One entry per permutation.
pub fn worst_case_histogram(
    state: &NetworkState,
    candidate: &Path,
    new_volume: f64,
    max_conflicts: usize,
) -> Result<Vec<(Vec<FlowId>, f64)>> {
    let mut rows = Vec::new();
    enumerate_permutations(state, candidate, new_volume, max_conflicts, |order, t| {
        rows.push((order.to_vec(), t));
    })?;
    Ok(rows)
}
