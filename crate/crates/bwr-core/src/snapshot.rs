//! JSON snapshots of a routing state: a topology plus the active flows with
//! their node-name paths. Consumed by the one-shot CLI subcommands.

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Flow, NetworkState};
use crate::topology::{builtin_topology, load_topology, load_topology_str};

/// On-disk snapshot: exactly one of `topology` (inline document) or
/// `topology_ref` (built-in name or file path), plus routed flows.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology_ref: Option<String>,
    #[serde(default)]
    pub flows: Vec<SnapshotFlow>,
}

/// A routed flow: endpoints are implied by the node-name path.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotFlow {
    pub id: u64,
    /// Node names from source to destination, at least two.
    pub path: Vec<String>,
    /// Remaining volume.
    pub volume: f64,
    /// Original volume; defaults to `volume`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_volume: Option<f64>,
    #[serde(default)]
    pub arrival_time: f64,
}

/// Parses a snapshot and builds the state. Relative `topology_ref` paths are
/// joined onto `base_dir`.
pub fn load_snapshot_str(text: &str, base_dir: Option<&FsPath>) -> Result<NetworkState> {
    let doc: SnapshotDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidSnapshot(e.to_string()))?;
    let graph = match (&doc.topology, &doc.topology_ref) {
        (Some(inline), None) => load_topology_str(&inline.to_string())?,
        (None, Some(reference)) => match builtin_topology(reference) {
            Some(text) => load_topology_str(text)?,
            None => {
                let p = FsPath::new(reference);
                let full = match (p.is_relative(), base_dir) {
                    (true, Some(dir)) => dir.join(p),
                    _ => p.to_path_buf(),
                };
                load_topology(full)?
            }
        },
        _ => {
            return Err(Error::InvalidSnapshot(
                "need exactly one of 'topology' or 'topology_ref'".into(),
            ))
        }
    };
    let mut state = NetworkState::new(graph);
    for entry in &doc.flows {
        let nodes: Vec<usize> = entry
            .path
            .iter()
            .map(|name| {
                state
                    .graph
                    .node_id(name)
                    .ok_or_else(|| Error::UnknownNode(name.clone()))
            })
            .collect::<Result<_>>()?;
        let path = state.graph.path_from_nodes(&nodes)?;
        let total = entry.total_volume.unwrap_or(entry.volume);
        let source = path.source(&state.graph);
        let destination = path.destination(&state.graph);
        let mut flow = Flow::new(entry.id, source, destination, entry.arrival_time, total)?;
        flow.remaining_volume = entry.volume;
        state.admit(flow.with_path(path))?;
    }
    Ok(state)
}

/// Reads and parses a snapshot file; relative topology references resolve
/// against the file's directory.
pub fn load_snapshot(path: impl AsRef<FsPath>) -> Result<NetworkState> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    load_snapshot_str(&text, path.parent())
}
