//! Deterministic random problem instances: a populated [`NetworkState`] plus
//! one not-yet-routed flow. Used by property tests, benchmarks, and anything
//! that wants a stream of small solvable routing scenarios.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Flow, NetworkGraph, NetworkState};
use crate::topology::{randomize_capacities, synthetic_topology};

/// Size and capacity ranges an instance is drawn from.
#[derive(Debug, Clone)]
pub struct InstanceSpec {
    /// Node count range, inclusive; at least 2.
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Largest number of already-routed flows (the count is drawn from
    /// 0..=max_flows).
    pub max_flows: usize,
    /// Capacity draw range, ignored when `uniform_capacity` is set.
    pub cap_low: f64,
    pub cap_high: f64,
    /// Gives every edge this exact capacity instead of a random one.
    pub uniform_capacity: Option<f64>,
    /// Flow volumes are drawn from (0, max_volume].
    pub max_volume: f64,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        Self {
            min_nodes: 3,
            max_nodes: 10,
            max_flows: 8,
            cap_low: 0.2,
            cap_high: 1.0,
            uniform_capacity: None,
            max_volume: 20.0,
        }
    }
}

/// One generated scenario: routed background flows plus a pending flow that
/// still needs a path. The pending flow's endpoints are always connected.
#[derive(Debug, Clone)]
pub struct Instance {
    pub state: NetworkState,
    pub new_flow: Flow,
}

/// Draws a random connected instance. Identical (spec, seed) pairs yield
/// identical instances.
pub fn random_instance(spec: &InstanceSpec, seed: u64) -> Instance {
    assert!(spec.min_nodes >= 2 && spec.min_nodes <= spec.max_nodes);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = rng.gen_range(spec.min_nodes..=spec.max_nodes);
    // Spanning tree plus up to `nodes` chords keeps enumeration tractable;
    // small graphs cap out at the number of distinct pairs.
    let links = (nodes - 1 + rng.gen_range(0..=nodes)).min(nodes * (nodes - 1) / 2);
    let graph = synthetic_topology(nodes, links, rng.gen()).expect("valid size");
    let graph = match spec.uniform_capacity {
        Some(c) => {
            let caps = vec![c; graph.edges().len()];
            graph.with_capacities(&caps).expect("matching edge count")
        }
        None => randomize_capacities(&graph, spec.cap_low, spec.cap_high, rng.gen())
            .expect("valid range"),
    };
    let flow_count = rng.gen_range(0..=spec.max_flows);
    let mut state = NetworkState::new(graph);
    for id in 0..flow_count {
        let (source, dest) = distinct_pair(&mut rng, nodes);
        let path = random_simple_path(&state.graph, source, dest, &mut rng);
        let volume = positive_volume(&mut rng, spec.max_volume);
        let flow = Flow::new(id as u64, source, dest, 0.0, volume)
            .expect("valid flow")
            .with_path(path);
        state.admit(flow).expect("generated flow is valid");
    }
    let (source, dest) = distinct_pair(&mut rng, nodes);
    let volume = positive_volume(&mut rng, spec.max_volume);
    let new_flow =
        Flow::new(flow_count as u64, source, dest, 0.0, volume).expect("valid flow");
    Instance { state, new_flow }
}

/// A uniformly random member of the full simple-path set between two
/// connected nodes.
pub fn random_simple_path(
    graph: &NetworkGraph,
    source: usize,
    dest: usize,
    rng: &mut impl Rng,
) -> crate::model::Path {
    let paths = graph.enumerate_paths(source, dest, graph.node_count() - 1);
    assert!(!paths.is_empty(), "generator graphs are connected");
    paths.choose(rng).expect("non-empty").clone()
}

fn distinct_pair(rng: &mut impl Rng, nodes: usize) -> (usize, usize) {
    let source = rng.gen_range(0..nodes);
    let mut dest = rng.gen_range(0..nodes - 1);
    if dest >= source {
        dest += 1;
    }
    (source, dest)
}

fn positive_volume(rng: &mut impl Rng, max_volume: f64) -> f64 {
    rng.gen_range(0.1..=max_volume)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_deterministic_and_valid() {
        let spec = InstanceSpec::default();
        for seed in 0..50 {
            let a = random_instance(&spec, seed);
            let b = random_instance(&spec, seed);
            assert_eq!(a.state.flows().len(), b.state.flows().len());
            for (fa, fb) in a.state.flows().iter().zip(b.state.flows()) {
                assert_eq!(fa.id, fb.id);
                assert_eq!(fa.remaining_volume, fb.remaining_volume);
                assert_eq!(fa.path().edges(), fb.path().edges());
            }
            assert_eq!(a.new_flow.source, b.new_flow.source);
            assert_eq!(a.new_flow.destination, b.new_flow.destination);
            assert_ne!(a.new_flow.source, a.new_flow.destination);
            // Endpoints of the pending flow are connected.
            a.state
                .graph
                .min_hop_count(a.new_flow.source, a.new_flow.destination)
                .expect("connected");
        }
    }

    #[test]
    fn uniform_capacity_overrides_the_range() {
        let spec = InstanceSpec { uniform_capacity: Some(1.0), ..InstanceSpec::default() };
        let inst = random_instance(&spec, 9);
        assert!(inst.state.graph.edges().iter().all(|e| e.capacity == 1.0));
    }
}
