//! Topology documents, capacity randomization, and synthetic topologies.
//!
//! A topology file is a JSON object with `nodes` (string names) and `links`
//! (bidirectional node pairs). Every link becomes two directed edges with
//! independent capacities; a missing capacity defaults to 1.0 and is normally
//! overwritten by [`randomize_capacities`], which is the canonical way to
//! produce experiment capacities.

use std::collections::BTreeMap;
use std::path::Path as FsPath;

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{NetworkGraph, NodeId};

/// Capacity assumed for a link direction the document leaves unspecified.
pub const DEFAULT_CAPACITY: f64 = 1.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyDoc {
    #[serde(default)]
    #[allow(dead_code)]
    name: Option<String>,
    nodes: Vec<String>,
    links: Vec<LinkDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkDoc {
    a: String,
    b: String,
    #[serde(default)]
    cap_ab: Option<f64>,
    #[serde(default)]
    cap_ba: Option<f64>,
}

/// Parses a topology document. Node names are mapped to dense integer ids in
/// sorted-name order; each link contributes one directed edge per direction.
pub fn load_topology_str(doc: &str) -> Result<NetworkGraph> {
    let doc: TopologyDoc =
        serde_json::from_str(doc).map_err(|e| Error::MalformedTopology(e.to_string()))?;
    if doc.nodes.is_empty() {
        return Err(Error::MalformedTopology("no nodes declared".into()));
    }
    let mut names = doc.nodes.clone();
    names.sort();
    names.dedup();
    if names.len() != doc.nodes.len() {
        return Err(Error::MalformedTopology("duplicate node name".into()));
    }
    let index: BTreeMap<&str, NodeId> =
        names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut edges = Vec::with_capacity(doc.links.len() * 2);
    for link in &doc.links {
        let a = *index
            .get(link.a.as_str())
            .ok_or_else(|| Error::UnknownNode(link.a.clone()))?;
        let b = *index
            .get(link.b.as_str())
            .ok_or_else(|| Error::UnknownNode(link.b.clone()))?;
        edges.push((a, b, link.cap_ab.unwrap_or(DEFAULT_CAPACITY)));
        edges.push((b, a, link.cap_ba.unwrap_or(DEFAULT_CAPACITY)));
    }
    NetworkGraph::new(names, &edges)
}

/// Reads and parses a topology file.
pub fn load_topology(path: impl AsRef<FsPath>) -> Result<NetworkGraph> {
    let text = std::fs::read_to_string(path)?;
    load_topology_str(&text)
}

/// Returns a copy of `graph` where every directed edge independently receives
/// a capacity drawn uniformly from `[low, high]`. Deterministic in `seed`.
pub fn randomize_capacities(
    graph: &NetworkGraph,
    low: f64,
    high: f64,
    seed: u64,
) -> Result<NetworkGraph> {
    if !(low.is_finite() && low > 0.0) {
        return Err(Error::BadCapacityRange {
            low,
            high,
            reason: "low bound must be positive".into(),
        });
    }
    if !(high.is_finite() && high >= low) {
        return Err(Error::BadCapacityRange {
            low,
            high,
            reason: "high bound must be at least the low bound".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(low, high);
    // Draw in edge id order so the assignment is reproducible.
    let caps: Vec<f64> = (0..graph.edges().len()).map(|_| dist.sample(&mut rng)).collect();
    graph.with_capacities(&caps)
}

/// Generates a connected random topology of `nodes` nodes and `links`
/// bidirectional links (so `2 * links` directed edges), deterministic in
/// `seed`. Capacities are all [`DEFAULT_CAPACITY`]; randomize afterwards.
pub fn synthetic_topology(nodes: usize, links: usize, seed: u64) -> Result<NetworkGraph> {
    if nodes < 2 {
        return Err(Error::MalformedTopology("need at least two nodes".into()));
    }
    if links < nodes - 1 {
        return Err(Error::MalformedTopology(format!(
            "{links} links cannot connect {nodes} nodes"
        )));
    }
    let max_links = nodes * (nodes - 1) / 2;
    if links > max_links {
        return Err(Error::MalformedTopology(format!(
            "{links} links exceed the {max_links} distinct pairs of {nodes} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::with_capacity(links);
    // Random spanning tree first, then extra chords until the budget is used.
    for v in 1..nodes {
        let u = rng.gen_range(0..v);
        pairs.push((u, v));
    }
    while pairs.len() < links {
        let a = rng.gen_range(0..nodes);
        let b = rng.gen_range(0..nodes);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo == hi || pairs.contains(&(lo, hi)) {
            continue;
        }
        pairs.push((lo, hi));
    }
    let width = (nodes as f64).log10().floor() as usize + 1;
    let names = (0..nodes).map(|i| format!("n{i:0width$}")).collect();
    let mut edges = Vec::with_capacity(links * 2);
    for &(a, b) in &pairs {
        edges.push((a, b, DEFAULT_CAPACITY));
        edges.push((b, a, DEFAULT_CAPACITY));
    }
    NetworkGraph::new(names, &edges)
}

/// Topology documents bundled with the crate, addressable by name in configs
/// and on the command line.
pub fn builtin_topology(name: &str) -> Option<&'static str> {
    match name {
        "tiny" => Some(include_str!("../../../topologies/tiny.json")),
        "gscale" => Some(include_str!("../../../topologies/gscale.json")),
        _ => None,
    }
}

/// Loads a builtin name or, failing that, treats `spec` as a file path.
pub fn resolve_topology(spec: &str) -> Result<NetworkGraph> {
    match builtin_topology(spec) {
        Some(doc) => load_topology_str(doc),
        None => load_topology(spec),
    }
}
