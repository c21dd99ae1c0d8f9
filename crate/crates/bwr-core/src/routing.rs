//! Path selection: the two best-worst-case routers (BWRH, BWRHF) and three
//! baselines (inverse-capacity, min-max-utilization, shortest-widest).
//!
//! All routers are deterministic. Ties are broken by (objective, hop count,
//! lexicographic node id sequence), in that order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::model::{Flow, NetworkGraph, NetworkState, NodeId, Path};
use crate::sched::RateAllocation;

/// Identifies one of the five routing schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RouterKind {
    Bwrh,
    Bwrhf,
    InverseCapacity,
    MinMaxUtilization,
    ShortestWidest,
}

impl RouterKind {
    pub const ALL: [RouterKind; 5] = [
        RouterKind::Bwrh,
        RouterKind::Bwrhf,
        RouterKind::InverseCapacity,
        RouterKind::MinMaxUtilization,
        RouterKind::ShortestWidest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RouterKind::Bwrh => "bwrh",
            RouterKind::Bwrhf => "bwrhf",
            RouterKind::InverseCapacity => "inv-cap",
            RouterKind::MinMaxUtilization => "min-max-util",
            RouterKind::ShortestWidest => "shortest-widest",
        }
    }
}

impl std::fmt::Display for RouterKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RouterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RouterKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownRouter(s.to_string()))
    }
}

impl TryFrom<String> for RouterKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl serde::Serialize for RouterKind {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for RouterKind {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inputs for a single routing decision, taken at the arrival instant of
/// `new_flow` (whose path is still unassigned).
pub struct RouteRequest<'a> {
    pub new_flow: &'a Flow,
    pub state: &'a NetworkState,
    /// Rate allocation in force before the new flow is admitted. Required by
    /// the utilization- and width-based baselines, ignored by the others.
    pub rate_view: Option<&'a RateAllocation>,
}

/// Outcome of a routing decision.
#[derive(Debug, Clone)]
pub struct RouteResult {
    pub path: Path,
    /// Router-specific objective value of the chosen path (worst-case cost
    /// estimate for BWRH/BWRHF, path weight for inverse-capacity, maximum
    /// utilization for min-max-utilization, width for shortest-widest).
    pub cost: f64,
    /// Candidate paths evaluated (BWRH) or search states settled (the
    /// shortest-path routers).
    pub paths_examined: usize,
    pub elapsed: Duration,
}

/// Estimated worst-case completion time of a new flow of `new_volume` routed
/// over `path`: every current flow that shares at least one edge with `path`
/// contributes its remaining volume over the smallest shared capacity, plus
/// the new volume over the path bottleneck.
pub fn bwrh_cost(path: &Path, state: &NetworkState, new_volume: f64) -> f64 {
    let graph = &state.graph;
    let mut on_path = vec![false; graph.edges().len()];
    for &e in path.edges() {
        on_path[e] = true;
    }
    let mut cost = 0.0;
    for flow in state.flows() {
        let mut min_shared = f64::INFINITY;
        for &e in flow.path().edges() {
            if on_path[e] {
                min_shared = min_shared.min(graph.edges()[e].capacity);
            }
        }
        if min_shared.is_finite() {
            cost += flow.remaining_volume / min_shared;
        }
    }
    cost + new_volume / path.bottleneck(graph)
}

/// Edge-decomposable relaxation of [`bwrh_cost`]: per edge of `path`, the
/// total remaining volume crossing the edge plus the new volume, over the
/// edge capacity, summed. Always at least `bwrh_cost` for the same path.
pub fn bwrhf_cost(path: &Path, state: &NetworkState, new_volume: f64) -> f64 {
    let graph = &state.graph;
    let mut cost = 0.0;
    for &e in path.edges() {
        let mut load = 0.0;
        for flow in state.flows() {
            if flow.path().contains_edge(e) {
                load += flow.remaining_volume;
            }
        }
        cost += (load + new_volume) / graph.edges()[e].capacity;
    }
    cost
}

/// Remaining volume crossing each edge, accumulated in active-flow order.
fn edge_volume_loads(state: &NetworkState) -> Vec<f64> {
    let mut loads = vec![0.0; state.graph.edges().len()];
    for flow in state.flows() {
        for &e in flow.path().edges() {
            loads[e] += flow.remaining_volume;
        }
    }
    loads
}

/// Allocated rate crossing each edge under `alloc`.
fn edge_rate_loads(state: &NetworkState, alloc: &RateAllocation) -> Vec<f64> {
    let mut loads = vec![0.0; state.graph.edges().len()];
    for flow in state.flows() {
        let rate = alloc.rate(flow.id);
        if rate > 0.0 {
            for &e in flow.path().edges() {
                loads[e] += rate;
            }
        }
    }
    loads
}

/// Routes `req.new_flow` with the selected scheme.
pub fn route(kind: RouterKind, req: &RouteRequest) -> Result<RouteResult> {
    match kind {
        RouterKind::Bwrh => route_bwrh(req),
        RouterKind::Bwrhf => route_bwrhf(req),
        RouterKind::InverseCapacity => route_inverse_capacity(req),
        RouterKind::MinMaxUtilization => route_min_max_utilization(req),
        RouterKind::ShortestWidest => route_shortest_widest(req),
    }
}

/// Best worst-case routing heuristic. Starting from the minimum hop count K,
/// exhaustively scans all simple paths of at most K hops for the smallest
/// [`bwrh_cost`], then keeps raising K by one while that strictly improves
/// the best cost; K never exceeds `node_count - 1`. Returns the best path of
/// the last improving round.
pub fn route_bwrh(req: &RouteRequest) -> Result<RouteResult> {
    let start = Instant::now();
    let state = req.state;
    let flow = req.new_flow;
    let k0 = state.graph.min_hop_count(flow.source, flow.destination)?;
    let k_cap = state.graph.node_count() - 1;
    let mut examined = 0;
    let mut k = k0;
    let mut best = best_bwrh_within(state, flow, k, &mut examined)
        .expect("paths exist at the minimum hop count");
    while k < k_cap {
        let next = best_bwrh_within(state, flow, k + 1, &mut examined)
            .expect("paths exist beyond the minimum hop count");
        if next.1 < best.1 {
            best = next;
            k += 1;
        } else {
            break;
        }
    }
    Ok(RouteResult {
        path: best.0,
        cost: best.1,
        paths_examined: examined,
        elapsed: start.elapsed(),
    })
}

/// Minimum-cost path among all simple paths of at most `max_hops` hops.
/// Enumeration order is lexicographic by node sequence, so on equal cost and
/// equal hop count the first (lexicographically smallest) candidate is kept.
fn best_bwrh_within(
    state: &NetworkState,
    flow: &Flow,
    max_hops: usize,
    examined: &mut usize,
) -> Option<(Path, f64)> {
    let paths = state.graph.enumerate_paths(flow.source, flow.destination, max_hops);
    *examined += paths.len();
    let mut best: Option<(Path, f64)> = None;
    for path in paths {
        let cost = bwrh_cost(&path, state, flow.total_volume);
        let replace = match &best {
            None => true,
            Some((bp, bc)) => match cost.total_cmp(bc) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => path.hop_count() < bp.hop_count(),
            },
        };
        if replace {
            best = Some((path, cost));
        }
    }
    best
}

/// Fast variant: assigns each edge the weight (total remaining volume on the
/// edge + new volume) / capacity and runs a deterministic shortest-path
/// search, which minimizes [`bwrhf_cost`] exactly.
pub fn route_bwrhf(req: &RouteRequest) -> Result<RouteResult> {
    let start = Instant::now();
    let state = req.state;
    let flow = req.new_flow;
    let loads = edge_volume_loads(state);
    let weights: Vec<f64> = state
        .graph
        .edges()
        .iter()
        .map(|e| (loads[e.id] + flow.total_volume) / e.capacity)
        .collect();
    let (path, cost, examined) =
        lexicographic_search(&state.graph, flow.source, flow.destination, &weights, Combine::Add)
            .ok_or_else(|| no_path(state, flow))?;
    Ok(RouteResult { path, cost, paths_examined: examined, elapsed: start.elapsed() })
}

/// Static baseline: minimizes the sum of inverse capacities along the path.
pub fn route_inverse_capacity(req: &RouteRequest) -> Result<RouteResult> {
    let start = Instant::now();
    let state = req.state;
    let flow = req.new_flow;
    let weights: Vec<f64> = state.graph.edges().iter().map(|e| 1.0 / e.capacity).collect();
    let (path, cost, examined) =
        lexicographic_search(&state.graph, flow.source, flow.destination, &weights, Combine::Add)
            .ok_or_else(|| no_path(state, flow))?;
    Ok(RouteResult { path, cost, paths_examined: examined, elapsed: start.elapsed() })
}

/// Load-aware baseline: minimizes the maximum edge utilization along the
/// path (allocated rate / capacity under the current allocation), breaking
/// ties by hop count.
pub fn route_min_max_utilization(req: &RouteRequest) -> Result<RouteResult> {
    let start = Instant::now();
    let state = req.state;
    let flow = req.new_flow;
    let alloc = req.rate_view.ok_or(Error::MissingRateView("min-max-util"))?;
    let rates = edge_rate_loads(state, alloc);
    let keys: Vec<f64> = state
        .graph
        .edges()
        .iter()
        .map(|e| rates[e.id] / e.capacity)
        .collect();
    let (path, cost, examined) =
        lexicographic_search(&state.graph, flow.source, flow.destination, &keys, Combine::Max)
            .ok_or_else(|| no_path(state, flow))?;
    Ok(RouteResult { path, cost, paths_examined: examined, elapsed: start.elapsed() })
}

/// Load-aware baseline: maximizes the smallest available bandwidth
/// (capacity minus allocated rate, floored at zero) along the path, breaking
/// ties by hop count. `cost` holds the achieved width.
pub fn route_shortest_widest(req: &RouteRequest) -> Result<RouteResult> {
    let start = Instant::now();
    let state = req.state;
    let flow = req.new_flow;
    let alloc = req.rate_view.ok_or(Error::MissingRateView("shortest-widest"))?;
    let rates = edge_rate_loads(state, alloc);
    // Maximizing the minimum available bandwidth is minimizing the maximum
    // of the negated availabilities.
    let keys: Vec<f64> = state
        .graph
        .edges()
        .iter()
        .map(|e| -(e.capacity - rates[e.id]).max(0.0))
        .collect();
    let (path, neg_width, examined) =
        lexicographic_search(&state.graph, flow.source, flow.destination, &keys, Combine::Max)
            .ok_or_else(|| no_path(state, flow))?;
    Ok(RouteResult { path, cost: -neg_width, paths_examined: examined, elapsed: start.elapsed() })
}

fn no_path(state: &NetworkState, flow: &Flow) -> Error {
    Error::NoPath {
        from: state.graph.node_name(flow.source).to_string(),
        to: state.graph.node_name(flow.destination).to_string(),
    }
}

#[derive(Clone, Copy)]
enum Combine {
    /// Sum of edge weights (all weights non-negative).
    Add,
    /// Maximum edge weight along the path.
    Max,
}

/// Deterministic minimum of (combined weight, hop count, node id sequence),
/// compared lexicographically. Returns (path, weight, settled label count).
///
/// For `Add` a single label-setting pass is exact: extending two comparable
/// labels by the same edge preserves their order. For `Max` it is not (a
/// higher-bottleneck but shorter prefix may win after extension), so the max
/// objective runs in two phases: find the optimal bottleneck value, then pick
/// the (hops, node sequence)-smallest path in the subgraph of edges within
/// that bottleneck.
fn lexicographic_search(
    graph: &NetworkGraph,
    source: NodeId,
    target: NodeId,
    edge_keys: &[f64],
    combine: Combine,
) -> Option<(Path, f64, usize)> {
    match combine {
        Combine::Add => additive_search(graph, source, target, edge_keys),
        Combine::Max => {
            let (bottleneck, settled) = bottleneck_value(graph, source, target, edge_keys)?;
            let zero_within: Vec<f64> = edge_keys
                .iter()
                .map(|&k| if k <= bottleneck { 0.0 } else { f64::INFINITY })
                .collect();
            let (path, _, settled2) = additive_search(graph, source, target, &zero_within)
                .expect("restricted subgraph keeps the optimal path");
            Some((path, bottleneck, settled + settled2))
        }
    }
}

/// Label-setting search minimizing (weight sum, hops, node sequence).
fn additive_search(
    graph: &NetworkGraph,
    source: NodeId,
    target: NodeId,
    weights: &[f64],
) -> Option<(Path, f64, usize)> {
    #[derive(PartialEq)]
    struct Entry {
        metric: f64,
        hops: usize,
        nodes: Vec<NodeId>,
    }
    impl Eq for Entry {}
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> Ordering {
            self.metric
                .total_cmp(&other.metric)
                .then_with(|| self.hops.cmp(&other.hops))
                .then_with(|| self.nodes.cmp(&other.nodes))
        }
    }
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut best: Vec<Option<(f64, usize, Vec<NodeId>)>> = vec![None; graph.node_count()];
    best[source] = Some((0.0, 0, vec![source]));
    let mut heap = BinaryHeap::new();
    heap.push(std::cmp::Reverse(Entry { metric: 0.0, hops: 0, nodes: vec![source] }));
    let mut settled = 0;
    while let Some(std::cmp::Reverse(entry)) = heap.pop() {
        let v = *entry.nodes.last().unwrap();
        // Skip entries superseded by a better label.
        match &best[v] {
            Some((m, h, n)) if *m == entry.metric && *h == entry.hops && *n == entry.nodes => {}
            _ => continue,
        }
        settled += 1;
        if v == target {
            break;
        }
        for &eid in graph.out_edges(v) {
            let head = graph.edges()[eid].head;
            if entry.nodes.contains(&head) {
                continue; // keep every label a simple path
            }
            let metric = entry.metric + weights[eid];
            let hops = entry.hops + 1;
            let better = match &best[head] {
                None => true,
                Some((bm, bh, bn)) => match metric.total_cmp(bm) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => match hops.cmp(bh) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => {
                            entry.nodes.as_slice() < &bn[..bn.len() - 1]
                        }
                    },
                },
            };
            if better {
                let mut nodes = entry.nodes.clone();
                nodes.push(head);
                best[head] = Some((metric, hops, nodes.clone()));
                heap.push(std::cmp::Reverse(Entry { metric, hops, nodes }));
            }
        }
    }
    let (metric, _, nodes) = best[target].take()?;
    if !metric.is_finite() {
        return None;
    }
    let path = graph.path_from_nodes(&nodes).expect("search emits valid paths");
    Some((path, metric, settled))
}

/// Smallest achievable maximum edge key from `source` to `target`
/// (plain bottleneck shortest path; the metric alone has optimal
/// substructure under max-combining).
fn bottleneck_value(
    graph: &NetworkGraph,
    source: NodeId,
    target: NodeId,
    edge_keys: &[f64],
) -> Option<(f64, usize)> {
    #[derive(PartialEq)]
    struct Entry {
        metric: f64,
        node: NodeId,
    }
    impl Eq for Entry {}
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> Ordering {
            self.metric
                .total_cmp(&other.metric)
                .then_with(|| self.node.cmp(&other.node))
        }
    }
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut best: Vec<f64> = vec![f64::INFINITY; graph.node_count()];
    best[source] = f64::NEG_INFINITY;
    let mut done = vec![false; graph.node_count()];
    let mut heap = BinaryHeap::new();
    heap.push(std::cmp::Reverse(Entry { metric: f64::NEG_INFINITY, node: source }));
    let mut settled = 0;
    while let Some(std::cmp::Reverse(entry)) = heap.pop() {
        if done[entry.node] {
            continue;
        }
        done[entry.node] = true;
        settled += 1;
        if entry.node == target {
            return Some((entry.metric, settled));
        }
        for &eid in graph.out_edges(entry.node) {
            let head = graph.edges()[eid].head;
            let metric = entry.metric.max(edge_keys[eid]);
            if metric < best[head] {
                best[head] = metric;
                heap.push(std::cmp::Reverse(Entry { metric, node: head }));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NetworkState;

    /// Two node-disjoint 2-hop routes from 0 to 3: via 1 with capacities
    /// (1, 1) and via 2 with capacities (2, 2).
    fn two_route_graph() -> NetworkGraph {
        NetworkGraph::numbered(4, &[(0, 1, 1.0), (1, 3, 1.0), (0, 2, 2.0), (2, 3, 2.0)]).unwrap()
    }

    fn request_flow(g: &NetworkGraph, volume: f64) -> Flow {
        let _ = g;
        Flow::new(100, 0, 3, 0.0, volume).unwrap()
    }

    #[test]
    fn costs_on_empty_state_reduce_to_volume_over_bottleneck() {
        let g = two_route_graph();
        let state = NetworkState::new(g);
        let p = state.graph.path_from_nodes(&[0, 1, 3]).unwrap();
        assert_eq!(bwrh_cost(&p, &state, 8.0), 8.0);
        // With one edge the decomposed form coincides; with two equal-capacity
        // edges it is the sum over edges.
        assert_eq!(bwrhf_cost(&p, &state, 8.0), 16.0);
    }

    #[test]
    fn bwrh_prefers_wider_route() {
        let g = two_route_graph();
        let state = NetworkState::new(g);
        let flow = request_flow(&state.graph, 8.0);
        let req = RouteRequest { new_flow: &flow, state: &state, rate_view: None };
        let res = route_bwrh(&req).unwrap();
        assert_eq!(res.path.nodes(&state.graph), vec![0, 2, 3]);
        assert_eq!(res.cost, 4.0); // 8 / min(2, 2)
        assert!(res.paths_examined >= 2);
    }

    #[test]
    fn bwrh_takes_longer_detour_when_it_wins() {
        // Direct route is crowded; a 3-hop empty detour costs less, and the
        // round loop must keep extending K to find it... here min hop already
        // covers both, so instead check the strict-improvement loop stops.
        let g = NetworkGraph::numbered(
            5,
            &[
                (0, 1, 1.0),
                (1, 4, 1.0),
                (0, 2, 0.5),
                (2, 3, 0.5),
                (3, 4, 0.5),
            ],
        )
        .unwrap();
        // Saturate the 2-hop route with a big flow.
        let p_direct = g.path_from_nodes(&[0, 1, 4]).unwrap();
        let busy = Flow::new(0, 0, 4, 0.0, 100.0).unwrap().with_path(p_direct);
        let state = NetworkState::with_flows(g, vec![busy]).unwrap();
        let flow = Flow::new(100, 0, 4, 0.0, 1.0).unwrap();
        let req = RouteRequest { new_flow: &flow, state: &state, rate_view: None };
        let res = route_bwrh(&req).unwrap();
        // Detour: 1/0.5 = 2 beats sharing with the 100-volume flow (101).
        assert_eq!(res.path.nodes(&state.graph), vec![0, 2, 3, 4]);
        assert_eq!(res.cost, 2.0);
    }

    #[test]
    fn bwrhf_matches_inverse_capacity_on_empty_state_shape() {
        let g = two_route_graph();
        let state = NetworkState::new(g);
        let flow = request_flow(&state.graph, 8.0);
        let req = RouteRequest { new_flow: &flow, state: &state, rate_view: None };
        let res = route_bwrhf(&req).unwrap();
        assert_eq!(res.path.nodes(&state.graph), vec![0, 2, 3]);
        assert_eq!(res.cost, 8.0); // (0+8)/2 + (0+8)/2
    }

    #[test]
    fn inverse_capacity_picks_smallest_weight() {
        let g = two_route_graph();
        let state = NetworkState::new(g);
        let flow = request_flow(&state.graph, 8.0);
        let req = RouteRequest { new_flow: &flow, state: &state, rate_view: None };
        let res = route_inverse_capacity(&req).unwrap();
        assert_eq!(res.path.nodes(&state.graph), vec![0, 2, 3]);
        assert_eq!(res.cost, 1.0); // 1/2 + 1/2
    }

    #[test]
    fn min_max_util_avoids_loaded_route_and_requires_rate_view() {
        let g = two_route_graph();
        // A flow occupying half of the capacity-2 route.
        let p = g.path_from_nodes(&[0, 2, 3]).unwrap();
        let busy = Flow::new(0, 0, 3, 0.0, 10.0).unwrap().with_path(p);
        let state = NetworkState::with_flows(g, vec![busy]).unwrap();
        let flow = request_flow(&state.graph, 1.0);
        let no_view = RouteRequest { new_flow: &flow, state: &state, rate_view: None };
        assert!(matches!(
            route_min_max_utilization(&no_view).unwrap_err(),
            Error::MissingRateView(_)
        ));
        let alloc = RateAllocation::from_rates(0.0, [(0, 1.0)]);
        let req = RouteRequest { new_flow: &flow, state: &state, rate_view: Some(&alloc) };
        let res = route_min_max_utilization(&req).unwrap();
        assert_eq!(res.path.nodes(&state.graph), vec![0, 1, 3]);
        assert_eq!(res.cost, 0.0);
    }

    #[test]
    fn shortest_widest_prefers_headroom_then_hops() {
        let g = two_route_graph();
        let state = NetworkState::new(g);
        let flow = request_flow(&state.graph, 1.0);
        let alloc = RateAllocation::from_rates(0.0, []);
        let req = RouteRequest { new_flow: &flow, state: &state, rate_view: Some(&alloc) };
        let res = route_shortest_widest(&req).unwrap();
        assert_eq!(res.path.nodes(&state.graph), vec![0, 2, 3]);
        assert_eq!(res.cost, 2.0);
    }

    #[test]
    fn widest_tie_breaks_on_hop_count() {
        // Width 1 via the 2-hop route and via a 3-hop route: take 2 hops.
        let g = NetworkGraph::numbered(
            5,
            &[(0, 1, 1.0), (1, 4, 1.0), (0, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)],
        )
        .unwrap();
        let state = NetworkState::new(g);
        let flow = Flow::new(100, 0, 4, 0.0, 1.0).unwrap();
        let alloc = RateAllocation::from_rates(0.0, []);
        let req = RouteRequest { new_flow: &flow, state: &state, rate_view: Some(&alloc) };
        let res = route_shortest_widest(&req).unwrap();
        assert_eq!(res.path.nodes(&state.graph), vec![0, 1, 4]);
    }

    #[test]
    fn unreachable_destination_errors_for_all_routers() {
        let g = NetworkGraph::numbered(3, &[(0, 1, 1.0)]).unwrap();
        let state = NetworkState::new(g);
        let flow = Flow::new(0, 0, 2, 0.0, 1.0).unwrap();
        let alloc = RateAllocation::from_rates(0.0, []);
        for kind in RouterKind::ALL {
            let req = RouteRequest { new_flow: &flow, state: &state, rate_view: Some(&alloc) };
            assert!(
                matches!(route(kind, &req).unwrap_err(), Error::NoPath { .. }),
                "router {kind}"
            );
        }
    }

    #[test]
    fn router_names_round_trip() {
        for kind in RouterKind::ALL {
            assert_eq!(kind.name().parse::<RouterKind>().unwrap(), kind);
        }
        assert!("bwr".parse::<RouterKind>().is_err());
    }

    #[test]
    fn routing_is_deterministic() {
        let g = two_route_graph();
        let state = NetworkState::new(g);
        let flow = request_flow(&state.graph, 8.0);
        for kind in [RouterKind::Bwrh, RouterKind::Bwrhf, RouterKind::InverseCapacity] {
            let req = RouteRequest { new_flow: &flow, state: &state, rate_view: None };
            let a = route(kind, &req).unwrap();
            let b = route(kind, &req).unwrap();
            assert_eq!(a.path, b.path);
            assert_eq!(a.cost, b.cost);
        }
    }
}
