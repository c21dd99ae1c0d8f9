//! Core network model: directed graph, simple paths, flows, and the routing
//! state shared by routers, the scheduler, and the worst-case oracle.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

/// Dense node index assigned at graph construction time.
pub type NodeId = usize;
/// Dense edge index assigned at graph construction time.
pub type EdgeId = usize;
/// Flow identifier, unique within one run.
pub type FlowId = u64;

/// A unidirectional link with a fixed capacity (volume units per time unit).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedEdge {
    pub id: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: f64,
}

/// Simple directed graph: at most one edge per ordered node pair, no
/// self-loops, every capacity strictly positive and finite.
///
/// Node ids are dense `0..node_count()`; the original string names are kept
/// for file I/O and reporting. Outgoing adjacency lists are sorted by head
/// node id so that every traversal in this crate is deterministic.
#[derive(Debug, Clone)]
pub struct NetworkGraph {
    names: Vec<String>,
    edges: Vec<DirectedEdge>,
    out: Vec<Vec<EdgeId>>,
    by_pair: BTreeMap<(NodeId, NodeId), EdgeId>,
}

impl NetworkGraph {
    /// Builds a graph from node names and `(tail, head, capacity)` triples.
    /// Edge ids follow the input order.
    pub fn new(names: Vec<String>, edge_list: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let n = names.len();
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut out: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        let mut by_pair = BTreeMap::new();
        for (id, &(tail, head, capacity)) in edge_list.iter().enumerate() {
            if tail >= n {
                return Err(Error::NodeOutOfRange(tail));
            }
            if head >= n {
                return Err(Error::NodeOutOfRange(head));
            }
            if tail == head {
                return Err(Error::SelfLoop(names[tail].clone()));
            }
            if !(capacity.is_finite() && capacity > 0.0) {
                return Err(Error::BadCapacity {
                    a: names[tail].clone(),
                    b: names[head].clone(),
                    capacity,
                });
            }
            if by_pair.insert((tail, head), id).is_some() {
                return Err(Error::DuplicateEdge {
                    a: names[tail].clone(),
                    b: names[head].clone(),
                });
            }
            out[tail].push(id);
            edges.push(DirectedEdge { id, tail, head, capacity });
        }
        for list in &mut out {
            list.sort_by_key(|&e| edges[e].head);
        }
        Ok(Self { names, edges, out, by_pair })
    }

    /// Convenience constructor with node names `"0"`, `"1"`, ...
    pub fn numbered(node_count: usize, edge_list: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let names = (0..node_count).map(|i| i.to_string()).collect();
        Self::new(names, edge_list)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn node_name(&self, node: NodeId) -> &str {
        &self.names[node]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&DirectedEdge> {
        self.edges.get(id).ok_or(Error::EdgeOutOfRange(id))
    }

    /// Outgoing edge ids of `node`, sorted by head node id.
    pub fn out_edges(&self, node: NodeId) -> &[EdgeId] {
        &self.out[node]
    }

    pub fn edge_between(&self, tail: NodeId, head: NodeId) -> Option<EdgeId> {
        self.by_pair.get(&(tail, head)).copied()
    }

    /// Same topology with every capacity replaced, position by position.
    pub fn with_capacities(&self, capacities: &[f64]) -> Result<Self> {
        if capacities.len() != self.edges.len() {
            return Err(Error::MalformedTopology(format!(
                "expected {} capacities, got {}",
                self.edges.len(),
                capacities.len()
            )));
        }
        let list: Vec<(NodeId, NodeId, f64)> = self
            .edges
            .iter()
            .zip(capacities)
            .map(|(e, &c)| (e.tail, e.head, c))
            .collect();
        Self::new(self.names.clone(), &list)
    }

    /// Checks that `path` is non-empty, uses existing edges, is contiguous,
    /// and visits no node twice.
    pub fn validate_path(&self, path: &Path) -> Result<()> {
        if path.edges.is_empty() {
            return Err(Error::InvalidPath("path has no edges".into()));
        }
        let mut seen = vec![false; self.node_count()];
        let mut prev_head: Option<NodeId> = None;
        for &eid in &path.edges {
            let edge = self.edge(eid)?;
            if let Some(h) = prev_head {
                if edge.tail != h {
                    return Err(Error::InvalidPath(format!(
                        "edge {} starts at '{}' but the previous edge ends at '{}'",
                        eid, self.names[edge.tail], self.names[h]
                    )));
                }
            }
            if seen[edge.tail] {
                return Err(Error::InvalidPath(format!(
                    "node '{}' visited twice",
                    self.names[edge.tail]
                )));
            }
            seen[edge.tail] = true;
            prev_head = Some(edge.head);
        }
        let last = prev_head.expect("non-empty path");
        if seen[last] {
            return Err(Error::InvalidPath(format!(
                "node '{}' visited twice",
                self.names[last]
            )));
        }
        Ok(())
    }

    /// Builds a path from a node id sequence; every consecutive pair must be
    /// connected by an edge.
    pub fn path_from_nodes(&self, nodes: &[NodeId]) -> Result<Path> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPath("need at least two nodes".into()));
        }
        let mut edges = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            if w[0] >= self.node_count() {
                return Err(Error::NodeOutOfRange(w[0]));
            }
            if w[1] >= self.node_count() {
                return Err(Error::NodeOutOfRange(w[1]));
            }
            let eid = self.edge_between(w[0], w[1]).ok_or_else(|| {
                Error::InvalidPath(format!(
                    "no edge from '{}' to '{}'",
                    self.names[w[0]], self.names[w[1]]
                ))
            })?;
            edges.push(eid);
        }
        let path = Path::new(edges);
        self.validate_path(&path)?;
        Ok(path)
    }

    /// Minimum number of hops from `source` to `target` (BFS).
    pub fn min_hop_count(&self, source: NodeId, target: NodeId) -> Result<usize> {
        assert_ne!(source, target, "source and target must differ");
        let mut dist = vec![usize::MAX; self.node_count()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &eid in &self.out[v] {
                let head = self.edges[eid].head;
                if dist[head] == usize::MAX {
                    dist[head] = dist[v] + 1;
                    if head == target {
                        return Ok(dist[head]);
                    }
                    queue.push_back(head);
                }
            }
        }
        Err(Error::NoPath {
            from: self.names[source].clone(),
            to: self.names[target].clone(),
        })
    }

    /// Hop counts from every node to `target` (reverse BFS); `None` when
    /// `target` is unreachable. Used to prune path enumeration.
    fn hops_to(&self, target: NodeId) -> Vec<Option<usize>> {
        let mut rin: Vec<Vec<NodeId>> = vec![Vec::new(); self.node_count()];
        for e in &self.edges {
            rin[e.head].push(e.tail);
        }
        let mut dist = vec![None; self.node_count()];
        dist[target] = Some(0);
        let mut queue = VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            for &u in &rin[v] {
                if dist[u].is_none() {
                    dist[u] = Some(dist[v].unwrap() + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// All simple directed paths from `source` to `target` with at most
    /// `max_hops` edges, in lexicographic order of their node id sequences.
    pub fn enumerate_paths(&self, source: NodeId, target: NodeId, max_hops: usize) -> Vec<Path> {
        assert_ne!(source, target, "source and target must differ");
        assert!(max_hops >= 1, "max_hops must be at least 1");
        let remaining = self.hops_to(target);
        let mut found = Vec::new();
        if remaining[source].is_none() {
            return found;
        }
        let mut visited = vec![false; self.node_count()];
        visited[source] = true;
        let mut stack: Vec<EdgeId> = Vec::new();
        // Depth-first expansion over head-sorted adjacency yields node
        // sequences in lexicographic order.
        self.dfs_paths(source, target, max_hops, &remaining, &mut visited, &mut stack, &mut found);
        found
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_paths(
        &self,
        v: NodeId,
        target: NodeId,
        max_hops: usize,
        remaining: &[Option<usize>],
        visited: &mut Vec<bool>,
        stack: &mut Vec<EdgeId>,
        found: &mut Vec<Path>,
    ) {
        for &eid in &self.out[v] {
            let head = self.edges[eid].head;
            if visited[head] {
                continue;
            }
            let used = stack.len() + 1;
            match remaining[head] {
                Some(rest) if used + rest <= max_hops => {}
                _ => continue,
            }
            stack.push(eid);
            if head == target {
                found.push(Path::new(stack.clone()));
            } else {
                visited[head] = true;
                self.dfs_paths(head, target, max_hops, remaining, visited, stack, found);
                visited[head] = false;
            }
            stack.pop();
        }
    }
}

/// A contiguous, node-simple, non-empty sequence of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    edges: Vec<EdgeId>,
}

impl Path {
    /// Wraps an edge sequence; structural validity against a graph is checked
    /// by [`NetworkGraph::validate_path`].
    pub fn new(edges: Vec<EdgeId>) -> Self {
        assert!(!edges.is_empty(), "a path must have at least one edge");
        Self { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn hop_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, edge: EdgeId) -> bool {
        self.edges.contains(&edge)
    }

    /// Node id sequence, source first.
    pub fn nodes(&self, graph: &NetworkGraph) -> Vec<NodeId> {
        let mut nodes = Vec::with_capacity(self.edges.len() + 1);
        nodes.push(graph.edges()[self.edges[0]].tail);
        for &eid in &self.edges {
            nodes.push(graph.edges()[eid].head);
        }
        nodes
    }

    pub fn source(&self, graph: &NetworkGraph) -> NodeId {
        graph.edges()[self.edges[0]].tail
    }

    pub fn destination(&self, graph: &NetworkGraph) -> NodeId {
        graph.edges()[*self.edges.last().unwrap()].head
    }

    /// Smallest capacity along the path.
    pub fn bottleneck(&self, graph: &NetworkGraph) -> f64 {
        self.edges
            .iter()
            .map(|&e| graph.edges()[e].capacity)
            .fold(f64::INFINITY, f64::min)
    }
}

/// A unicast transfer. `remaining_volume` tracks transmission progress;
/// `path` is populated by a router when the flow is admitted.
#[derive(Debug, Clone)]
pub struct Flow {
    pub id: FlowId,
    pub source: NodeId,
    pub destination: NodeId,
    pub arrival_time: f64,
    pub total_volume: f64,
    pub remaining_volume: f64,
    pub path: Option<Path>,
}

impl Flow {
    pub fn new(
        id: FlowId,
        source: NodeId,
        destination: NodeId,
        arrival_time: f64,
        volume: f64,
    ) -> Result<Self> {
        if source == destination {
            return Err(Error::InvalidFlow {
                id,
                reason: "source equals destination".into(),
            });
        }
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::InvalidFlow {
                id,
                reason: format!("volume must be positive and finite, got {volume}"),
            });
        }
        if !(arrival_time.is_finite() && arrival_time >= 0.0) {
            return Err(Error::InvalidFlow {
                id,
                reason: format!("arrival time must be non-negative, got {arrival_time}"),
            });
        }
        Ok(Self {
            id,
            source,
            destination,
            arrival_time,
            total_volume: volume,
            remaining_volume: volume,
            path: None,
        })
    }

    pub fn with_path(mut self, path: Path) -> Self {
        self.path = Some(path);
        self
    }

    /// Panics if the flow has not been routed yet.
    pub fn path(&self) -> &Path {
        self.path.as_ref().expect("flow has no path assigned")
    }
}

/// A graph plus the currently active (routed, unfinished) flows.
#[derive(Debug, Clone)]
pub struct NetworkState {
    pub graph: NetworkGraph,
    flows: Vec<Flow>,
}

impl NetworkState {
    pub fn new(graph: NetworkGraph) -> Self {
        Self { graph, flows: Vec::new() }
    }

    pub fn with_flows(graph: NetworkGraph, flows: Vec<Flow>) -> Result<Self> {
        let mut state = Self::new(graph);
        for flow in flows {
            state.admit(flow)?;
        }
        Ok(state)
    }

    /// Active flows in admission order.
    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    /// Mutable access for volume bookkeeping in the simulator.
    pub fn flows_mut(&mut self) -> &mut [Flow] {
        &mut self.flows
    }

    /// Adds a routed flow after checking its path and volumes.
    pub fn admit(&mut self, flow: Flow) -> Result<()> {
        let path = flow.path.as_ref().ok_or(Error::MissingPath(flow.id))?;
        self.graph.validate_path(path)?;
        if path.source(&self.graph) != flow.source || path.destination(&self.graph) != flow.destination {
            return Err(Error::InvalidFlow {
                id: flow.id,
                reason: "path endpoints do not match the flow endpoints".into(),
            });
        }
        if !(flow.remaining_volume > 0.0 && flow.remaining_volume <= flow.total_volume) {
            return Err(Error::InvalidFlow {
                id: flow.id,
                reason: format!(
                    "remaining volume {} outside (0, total {}]",
                    flow.remaining_volume, flow.total_volume
                ),
            });
        }
        if self.flows.iter().any(|f| f.id == flow.id) {
            return Err(Error::InvalidFlow {
                id: flow.id,
                reason: "duplicate flow id".into(),
            });
        }
        self.flows.push(flow);
        Ok(())
    }

    pub fn remove(&mut self, id: FlowId) -> Option<Flow> {
        let idx = self.flows.iter().position(|f| f.id == id)?;
        Some(self.flows.remove(idx))
    }

    /// Flows whose path crosses `edge`, in admission order.
    pub fn flows_on_edge(&self, edge: EdgeId) -> Result<Vec<&Flow>> {
        self.graph.edge(edge)?;
        Ok(self
            .flows
            .iter()
            .filter(|f| f.path.as_ref().is_some_and(|p| p.contains_edge(edge)))
            .collect())
    }
}
