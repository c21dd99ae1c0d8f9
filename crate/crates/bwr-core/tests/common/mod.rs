//! Fixtures and independently-written oracles shared by the integration
//! tests. The cost oracles deliberately re-derive the routing objectives with
//! different data structures and iteration orders than the library, so a
//! transcription mistake in one shows up as a mismatch.
#![allow(dead_code)]

use std::collections::BTreeSet;

use bwr_core::{EdgeId, Flow, NetworkGraph, NetworkState, NodeId, Path};

/// Three-hop line `0 -> 1 -> 2 -> 3` with capacities 1, 2, 0.5 and two
/// partially-overlapping background flows (remaining volumes 10 and 5). The
/// returned candidate is the full line; the pending volume is 8. Worked by
/// hand: the shared-bottleneck objective is 10/1 + 5/0.5 + 8/0.5 = 36 and
/// the edge-decomposed objective is 18/1 + 23/2 + 13/0.5 = 55.5.
pub fn contended_line() -> (NetworkState, Path, f64) {
    let graph =
        NetworkGraph::numbered(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5)]).unwrap();
    let p1 = graph.path_from_nodes(&[0, 1, 2]).unwrap();
    let p2 = graph.path_from_nodes(&[1, 2, 3]).unwrap();
    let candidate = graph.path_from_nodes(&[0, 1, 2, 3]).unwrap();
    let state = NetworkState::with_flows(
        graph,
        vec![
            Flow::new(1, 0, 2, 0.0, 10.0).unwrap().with_path(p1),
            Flow::new(2, 1, 3, 0.0, 5.0).unwrap().with_path(p2),
        ],
    )
    .unwrap();
    (state, candidate, 8.0)
}

/// Five-node blocking scenario with unit capacities and unit volumes: the
/// candidate runs 0 -> 1 -> 2 -> 3, three flows sit on its edges, and a
/// fourth takes the detour 1 -> 4 -> 2, conflicting with everyone. Any
/// priority order serializes into three busy time-units before the pending
/// flow starts, so its worst completion time is 4.0 while the
/// shared-bottleneck bound is 5.0.
pub fn detour_blocking() -> (NetworkState, Path, f64) {
    let graph = NetworkGraph::numbered(
        5,
        &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (1, 4, 1.0), (4, 2, 1.0)],
    )
    .unwrap();
    let candidate = graph.path_from_nodes(&[0, 1, 2, 3]).unwrap();
    let routes = [
        (1, vec![0, 1, 2]),
        (2, vec![0, 1]),
        (3, vec![1, 2, 3]),
        (4, vec![0, 1, 4, 2, 3]),
    ];
    let flows = routes
        .into_iter()
        .map(|(id, nodes)| {
            let path = graph.path_from_nodes(&nodes).unwrap();
            Flow::new(id, nodes[0], *nodes.last().unwrap(), 0.0, 1.0)
                .unwrap()
                .with_path(path)
        })
        .collect();
    let state = NetworkState::with_flows(graph, flows).unwrap();
    (state, candidate, 1.0)
}

/// Independent re-derivation of the shared-bottleneck routing objective:
/// every background flow sharing an edge with `path` pays its remaining
/// volume over the smallest shared capacity, plus the pending volume over the
/// path bottleneck.
pub fn min_shared_capacity_cost(path: &Path, state: &NetworkState, new_volume: f64) -> f64 {
    let graph = &state.graph;
    let on_path: BTreeSet<EdgeId> = path.edges().iter().copied().collect();
    let bottleneck = path
        .edges()
        .iter()
        .map(|&e| graph.edges()[e].capacity)
        .fold(f64::INFINITY, f64::min);
    let mut total = new_volume / bottleneck;
    for flow in state.flows() {
        let shared_min = flow
            .path()
            .edges()
            .iter()
            .filter(|e| on_path.contains(e))
            .map(|&e| graph.edges()[e].capacity)
            .fold(f64::INFINITY, f64::min);
        if shared_min < f64::INFINITY {
            total += flow.remaining_volume / shared_min;
        }
    }
    total
}

/// Independent re-derivation of the edge-decomposed routing objective: per
/// path edge, (crossing remaining volume + pending volume) / capacity.
pub fn per_edge_load_cost(path: &Path, state: &NetworkState, new_volume: f64) -> f64 {
    let graph = &state.graph;
    path.edges()
        .iter()
        .map(|&e| {
            let crossing: f64 = state
                .flows()
                .iter()
                .filter(|f| f.path().edges().contains(&e))
                .map(|f| f.remaining_volume)
                .sum();
            (crossing + new_volume) / graph.edges()[e].capacity
        })
        .sum()
}

/// Plain recursive DFS over simple paths, written without the library's
/// reachability pruning.
pub fn dfs_simple_paths(graph: &NetworkGraph, source: NodeId, target: NodeId) -> Vec<Vec<NodeId>> {
    fn visit(
        graph: &NetworkGraph,
        target: NodeId,
        stack: &mut Vec<NodeId>,
        found: &mut Vec<Vec<NodeId>>,
    ) {
        let here = *stack.last().unwrap();
        if here == target {
            found.push(stack.clone());
            return;
        }
        for &e in graph.out_edges(here) {
            let next = graph.edges()[e].head;
            if !stack.contains(&next) {
                stack.push(next);
                visit(graph, target, stack, found);
                stack.pop();
            }
        }
    }
    let mut found = Vec::new();
    visit(graph, target, &mut vec![source], &mut found);
    found
}

/// Asserts `a` and `b` agree to a relative tolerance (absolute near zero).
pub fn assert_close(a: f64, b: f64, tol: f64) {
    let scale = a.abs().max(b.abs()).max(1.0);
    assert!(
        (a - b).abs() <= tol * scale,
        "expected {a} and {b} to agree within {tol} (relative)"
    );
}
