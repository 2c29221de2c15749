//! Data model for finite discrete time-varying graphs.
//!
//! A graph holds a node set `V` (indices `0..node_count`), an ordered
//! sequence of labelled time instants `T`, and a set of directed edges
//! between (node, instant) pairs. Everything else in the crate is derived
//! from these three pieces.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

/// Errors raised while building or growing a [`Tvg`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("duplicate time label `{0}`")]
    DuplicateTimeLabel(String),
    #[error("invalid time label `{0}`: labels are non-empty tokens without whitespace or `#`")]
    InvalidTimeLabel(String),
    #[error("node {node} is out of range: the graph has {count} nodes")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("time index {index} is out of range: the graph has {count} instants")]
    TimeOutOfRange { index: usize, count: usize },
    #[error("edge ({0}) is already present")]
    DuplicateEdge(DynamicEdge),
    #[error("edge weight must be finite and non-zero, got {0}")]
    InvalidWeight(f64),
}

/// Index of a node in the node set `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// Index of an instant in the ordered time sequence `T`.
///
/// Comparing two `TimeId`s compares positions in `T`; the index order *is*
/// the temporal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeId(pub usize);

impl From<usize> for NodeId {
    fn from(index: usize) -> Self {
        NodeId(index)
    }
}

impl From<usize> for TimeId {
    fn from(index: usize) -> Self {
        TimeId(index)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for TimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A node pinned to one instant: the unit that matrix rows and columns,
/// reachability queries, and the static digraph all range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalNode {
    pub node: NodeId,
    pub time: TimeId,
}

impl TemporalNode {
    pub fn new(node: impl Into<NodeId>, time: impl Into<TimeId>) -> Self {
        TemporalNode {
            node: node.into(),
            time: time.into(),
        }
    }
}

/// A directed edge from one (node, instant) pair to another.
///
/// The four index components identify the edge; the weight carries no
/// identity. An undirected contact is stored as two edges, one per
/// direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicEdge {
    pub origin_node: NodeId,
    pub origin_time: TimeId,
    pub dest_node: NodeId,
    pub dest_time: TimeId,
    pub weight: f64,
}

impl DynamicEdge {
    /// Edge with the default weight 1.
    pub fn new(
        origin_node: impl Into<NodeId>,
        origin_time: impl Into<TimeId>,
        dest_node: impl Into<NodeId>,
        dest_time: impl Into<TimeId>,
    ) -> Self {
        DynamicEdge {
            origin_node: origin_node.into(),
            origin_time: origin_time.into(),
            dest_node: dest_node.into(),
            dest_time: dest_time.into(),
            weight: 1.0,
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    /// The four index components in order.
    pub fn quadruple(&self) -> (NodeId, TimeId, NodeId, TimeId) {
        (
            self.origin_node,
            self.origin_time,
            self.dest_node,
            self.dest_time,
        )
    }

    /// Kind and temporal orientation of this edge.
    pub fn classify(&self) -> EdgeClass {
        let kind = match (
            self.origin_node == self.dest_node,
            self.origin_time == self.dest_time,
        ) {
            (false, true) => EdgeKind::Spatial,
            (true, false) => EdgeKind::Temporal,
            (false, false) => EdgeKind::Mixed,
            (true, true) => EdgeKind::SelfLoop,
        };
        let orientation = match self.origin_time.cmp(&self.dest_time) {
            Ordering::Less => Orientation::Progressive,
            Ordering::Greater => Orientation::Regressive,
            Ordering::Equal => Orientation::Contemporaneous,
        };
        EdgeClass { kind, orientation }
    }
}

impl fmt::Display for DynamicEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "node {} @ instant {} -> node {} @ instant {}",
            self.origin_node, self.origin_time, self.dest_node, self.dest_time
        )?;
        if self.weight != 1.0 {
            write!(f, " [weight {}]", self.weight)?;
        }
        Ok(())
    }
}

/// One of the four components of an edge quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    OriginNode,
    OriginTime,
    DestNode,
    DestTime,
}

/// Value selected by [`project`]: either a node or a time component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeComponent {
    Node(NodeId),
    Time(TimeId),
}

/// Select one component of an edge quadruple.
pub fn project(edge: &DynamicEdge, axis: Axis) -> EdgeComponent {
    match axis {
        Axis::OriginNode => EdgeComponent::Node(edge.origin_node),
        Axis::OriginTime => EdgeComponent::Time(edge.origin_time),
        Axis::DestNode => EdgeComponent::Node(edge.dest_node),
        Axis::DestTime => EdgeComponent::Time(edge.dest_time),
    }
}

/// Structural kind of an edge, determined by which quadruple components
/// coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// Distinct nodes at the same instant.
    Spatial,
    /// The same node at distinct instants.
    Temporal,
    /// Distinct nodes at distinct instants.
    Mixed,
    /// The same node at the same instant.
    SelfLoop,
}

/// Direction of an edge relative to the order on `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    /// Origin instant before destination instant.
    Progressive,
    /// Origin instant after destination instant (time travel backwards).
    Regressive,
    /// Both endpoints at the same instant.
    Contemporaneous,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EdgeKind::Spatial => "spatial",
            EdgeKind::Temporal => "temporal",
            EdgeKind::Mixed => "mixed",
            EdgeKind::SelfLoop => "self-loop",
        };
        f.write_str(name)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Orientation::Progressive => "progressive",
            Orientation::Regressive => "regressive",
            Orientation::Contemporaneous => "contemporaneous",
        };
        f.write_str(name)
    }
}

/// Kind plus orientation. Spatial and self-loop edges are always
/// contemporaneous; temporal and mixed edges are progressive or regressive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeClass {
    pub kind: EdgeKind,
    pub orientation: Orientation,
}

/// The pair (|V|, |T|). It fixes the shape of every matrix form and is the
/// only context needed to flatten temporal nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Companion {
    pub nodes: usize,
    pub times: usize,
}

impl Companion {
    pub fn new(nodes: usize, times: usize) -> Self {
        Companion { nodes, times }
    }

    /// |V| * |T|, the number of temporal nodes.
    pub fn temporal_node_count(&self) -> usize {
        self.nodes * self.times
    }
}

/// Split of `V` and `T` by whether the edge set touches them.
///
/// `connected_nodes` is the union of origin and destination nodes over all
/// edges, `used_times` the union of origin and destination instants; the
/// other two sets are the complements. A graph is fully recoverable from
/// its edges plus the two complement sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub connected_nodes: BTreeSet<NodeId>,
    pub disconnected_nodes: BTreeSet<NodeId>,
    pub used_times: BTreeSet<TimeId>,
    pub unused_times: BTreeSet<TimeId>,
}

/// A finite discrete time-varying graph.
///
/// Construction fixes `V` and `T`; edges are added afterwards and the graph
/// is immutable once shared (mutation needs `&mut`). Edge insertion order is
/// preserved and is observable in serialization and default matrix column
/// order.
#[derive(Debug, Clone)]
pub struct Tvg {
    node_count: usize,
    time_labels: Vec<String>,
    edges: Vec<DynamicEdge>,
    edge_index: HashSet<(NodeId, TimeId, NodeId, TimeId)>,
}

impl PartialEq for Tvg {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count
            && self.time_labels == other.time_labels
            && self.edges == other.edges
    }
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && !label.contains(char::is_whitespace) && !label.contains('#')
}

impl Tvg {
    /// Empty graph over `node_count` nodes and the given instants, ordered
    /// as listed. Labels must be unique tokens without whitespace or `#`.
    pub fn new(
        node_count: usize,
        time_labels: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, ModelError> {
        let mut labels = Vec::new();
        let mut seen = HashSet::new();
        for label in time_labels {
            let label = label.into();
            if !valid_label(&label) {
                return Err(ModelError::InvalidTimeLabel(label));
            }
            if !seen.insert(label.clone()) {
                return Err(ModelError::DuplicateTimeLabel(label));
            }
            labels.push(label);
        }
        Ok(Tvg {
            node_count,
            time_labels: labels,
            edges: Vec::new(),
            edge_index: HashSet::new(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn time_count(&self) -> usize {
        self.time_labels.len()
    }

    pub fn companion(&self) -> Companion {
        Companion::new(self.node_count, self.time_labels.len())
    }

    /// Labels of `T` in temporal order.
    pub fn time_labels(&self) -> &[String] {
        &self.time_labels
    }

    pub fn time_label(&self, time: TimeId) -> Option<&str> {
        self.time_labels.get(time.0).map(String::as_str)
    }

    /// Instant carrying the given label, if any.
    pub fn time_id(&self, label: &str) -> Option<TimeId> {
        self.time_labels.iter().position(|l| l == label).map(TimeId)
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[DynamicEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Whether an edge with the same four components is present (weights
    /// are ignored).
    pub fn contains_edge(&self, edge: &DynamicEdge) -> bool {
        self.edge_index.contains(&edge.quadruple())
    }

    /// Add one edge. Components must be in range, the weight finite and
    /// non-zero, and the quadruple not already present (the edge set holds
    /// no parallel edges; re-weighting means removing and re-adding).
    pub fn add_edge(&mut self, edge: DynamicEdge) -> Result<(), ModelError> {
        for node in [edge.origin_node, edge.dest_node] {
            if node.0 >= self.node_count {
                return Err(ModelError::NodeOutOfRange {
                    node: node.0,
                    count: self.node_count,
                });
            }
        }
        for time in [edge.origin_time, edge.dest_time] {
            if time.0 >= self.time_labels.len() {
                return Err(ModelError::TimeOutOfRange {
                    index: time.0,
                    count: self.time_labels.len(),
                });
            }
        }
        if !edge.weight.is_finite() || edge.weight == 0.0 {
            return Err(ModelError::InvalidWeight(edge.weight));
        }
        if !self.edge_index.insert(edge.quadruple()) {
            return Err(ModelError::DuplicateEdge(edge));
        }
        self.edges.push(edge);
        Ok(())
    }

    /// All temporal nodes (node, instant), every combination.
    pub fn temporal_nodes(&self) -> impl Iterator<Item = TemporalNode> + '_ {
        (0..self.time_labels.len())
            .flat_map(move |t| (0..self.node_count).map(move |v| TemporalNode::new(v, t)))
    }

    /// Partition `V` and `T` into the parts touched by the edge set and
    /// their complements.
    pub fn partition(&self) -> Partition {
        let mut connected_nodes = BTreeSet::new();
        let mut used_times = BTreeSet::new();
        for edge in &self.edges {
            connected_nodes.insert(edge.origin_node);
            connected_nodes.insert(edge.dest_node);
            used_times.insert(edge.origin_time);
            used_times.insert(edge.dest_time);
        }
        let disconnected_nodes = (0..self.node_count)
            .map(NodeId)
            .filter(|n| !connected_nodes.contains(n))
            .collect();
        let unused_times = (0..self.time_labels.len())
            .map(TimeId)
            .filter(|t| !used_times.contains(t))
            .collect();
        Partition {
            connected_nodes,
            disconnected_nodes,
            used_times,
            unused_times,
        }
    }
}
