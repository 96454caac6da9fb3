//! The streamed-graph instance: backbone, ordered stream, and window size.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Graph, GraphError, VertexId};

/// One edge of the stream. Endpoints are ordered `u < v`; `position` is its
/// 1-based place in the stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StreamEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub position: usize,
}

impl StreamEdge {
    pub fn ends(&self) -> [VertexId; 2] {
        [self.u, self.v]
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("stream edge {0} is a self-loop")]
    StreamSelfLoop(String),
    #[error("stream positions must be strictly increasing and start at 1 or later")]
    BadPositions,
    #[error("the union graph is disconnected")]
    DisconnectedUnion,
    #[error("operation requires omega = 1, got {0}")]
    UnsupportedOmega(usize),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// A violated instance invariant, as reported by [`StreamedInstance::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BackboneNotPlanar,
    StreamEdgeInBackbone { position: usize, u: String, v: String },
    DuplicateStreamEdge { first: usize, second: usize, u: String, v: String },
    OmegaZero,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BackboneNotPlanar => write!(f, "backbone not planar"),
            Violation::StreamEdgeInBackbone { position, u, v } => {
                write!(f, "stream edge in backbone: ({u}, {v}) at position {position}")
            }
            Violation::DuplicateStreamEdge { first, second, u, v } => {
                write!(f, "duplicate stream edge ({u}, {v}) at positions {first} and {second}")
            }
            Violation::OmegaZero => write!(f, "omega must be at least 1"),
        }
    }
}

/// Outcome of validation: empty means the instance is valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Shape of an instance with a connected union graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// The backbone has no edges.
    AllIsolated,
    /// One block plus isolated vertices, and no stream edge joins two
    /// isolated vertices.
    Star,
    /// One block plus isolated vertices, with stream edges between isolated
    /// vertices.
    SingleNontrivial,
    /// Several non-trivial components, or a component with several blocks.
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub category: Category,
    /// Non-trivial connected components of the backbone.
    pub components: usize,
    /// Blocks of the backbone.
    pub blocks: usize,
    /// Stream edges joining two isolated vertices.
    pub isolated_links: usize,
}

/// A streamed graph with backbone: vertices, backbone edges, an ordered stream
/// and the window size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamedInstance {
    backbone: Graph,
    stream: Vec<StreamEdge>,
    omega: usize,
}

impl StreamedInstance {
    /// Builds an instance whose stream positions are `1..=m` in the given order.
    pub fn new<V: AsRef<str>, S: AsRef<str>>(
        vertices: &[V],
        backbone: &[(S, S)],
        stream: &[(S, S)],
        omega: usize,
    ) -> Result<Self, InstanceError> {
        let positioned: Vec<(&str, &str, usize)> = stream
            .iter()
            .enumerate()
            .map(|(i, (a, b))| (a.as_ref(), b.as_ref(), i + 1))
            .collect();
        Self::with_positions(vertices, backbone, &positioned, omega)
    }

    /// Builds an instance whose stream carries explicit, strictly increasing
    /// positions.
    pub fn with_positions<V: AsRef<str>, S: AsRef<str>, T: AsRef<str>>(
        vertices: &[V],
        backbone: &[(S, S)],
        stream: &[(T, T, usize)],
        omega: usize,
    ) -> Result<Self, InstanceError> {
        let graph = Graph::new(
            vertices.iter().map(|s| s.as_ref()),
            backbone.iter().map(|(a, b)| (a.as_ref(), b.as_ref())),
        )?;
        let mut edges = Vec::with_capacity(stream.len());
        let mut last = 0;
        for (a, b, position) in stream {
            let (a, b) = (a.as_ref(), b.as_ref());
            let u = graph.index_of(a).ok_or_else(|| GraphError::UnknownVertex(a.to_owned()))?;
            let v = graph.index_of(b).ok_or_else(|| GraphError::UnknownVertex(b.to_owned()))?;
            if u == v {
                return Err(InstanceError::StreamSelfLoop(format!("({a}, {b})")));
            }
            if *position <= last {
                return Err(InstanceError::BadPositions);
            }
            last = *position;
            edges.push(StreamEdge { u: u.min(v), v: u.max(v), position: *position });
        }
        Ok(StreamedInstance { backbone: graph, stream: edges, omega })
    }

    pub fn backbone(&self) -> &Graph {
        &self.backbone
    }

    /// Stream edges in stream order.
    pub fn stream(&self) -> &[StreamEdge] {
        &self.stream
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    /// The same instance with another window size.
    pub fn with_omega(&self, omega: usize) -> Self {
        StreamedInstance { omega, ..self.clone() }
    }

    pub fn vertex_count(&self) -> usize {
        self.backbone.vertex_count()
    }

    pub fn label(&self, v: VertexId) -> &str {
        self.backbone.label(v)
    }

    pub fn index_of(&self, label: &str) -> Option<VertexId> {
        self.backbone.index_of(label)
    }

    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.backbone.degree(v) == 0
    }

    /// Stream edge with the given position.
    pub fn edge_at(&self, position: usize) -> Option<&StreamEdge> {
        self.stream
            .binary_search_by_key(&position, |e| e.position)
            .ok()
            .map(|i| &self.stream[i])
    }

    /// Whether positions are exactly `1..=m`.
    pub fn has_contiguous_positions(&self) -> bool {
        self.stream.iter().enumerate().all(|(i, e)| e.position == i + 1)
    }

    /// Indices (into [`stream`](Self::stream)) of the edges alive at time `t`:
    /// those with `0 <= t - position < omega`.
    pub fn alive_at(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        let lo = (t + 1).saturating_sub(self.omega);
        self.stream
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.position >= lo && e.position <= t)
            .map(|(i, _)| i)
    }

    pub fn edge_label(&self, e: &StreamEdge) -> (String, String) {
        (self.label(e.u).to_owned(), self.label(e.v).to_owned())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if !graph::planarity_check(&self.backbone) {
            violations.push(Violation::BackboneNotPlanar);
        }
        let mut seen: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        for e in &self.stream {
            let (u, v) = self.edge_label(e);
            if self.backbone.has_edge(e.u, e.v) {
                violations.push(Violation::StreamEdgeInBackbone { position: e.position, u: u.clone(), v: v.clone() });
            }
            if let Some(&first) = seen.get(&(e.u, e.v)) {
                violations.push(Violation::DuplicateStreamEdge { first, second: e.position, u, v });
            } else {
                seen.insert((e.u, e.v), e.position);
            }
        }
        if self.omega == 0 {
            violations.push(Violation::OmegaZero);
        }
        ValidationReport { violations }
    }

    /// The graph `(V, S ∪ E)`.
    pub fn union_graph(&self) -> Graph {
        let mut edges: Vec<(usize, usize)> = self.backbone.edges().to_vec();
        edges.extend(self.stream.iter().map(|e| (e.u, e.v)));
        edges.sort_unstable();
        edges.dedup();
        Graph::from_indexed(self.backbone.labels().to_vec(), &edges).expect("union of simple graphs")
    }

    /// Pairs of stream positions `(p, q)`, `p < q`, that are alive together.
    pub fn conflict_pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (i, a) in self.stream.iter().enumerate() {
            for b in &self.stream[i + 1..] {
                if b.position - a.position >= self.omega {
                    break;
                }
                out.insert((a.position, b.position));
            }
        }
        out
    }

    /// Number of stream edges joining two isolated vertices.
    pub fn isolated_links(&self) -> usize {
        self.stream.iter().filter(|e| self.is_isolated(e.u) && self.is_isolated(e.v)).count()
    }

    /// Classifies an instance with connected union graph.
    pub fn classify(&self) -> Result<Classification, InstanceError> {
        if !self.union_graph().is_connected() {
            return Err(InstanceError::DisconnectedUnion);
        }
        Ok(self.shape())
    }

    /// Classification without the connectivity precondition.
    pub fn shape(&self) -> Classification {
        let tree = graph::blocks(&self.backbone);
        let components = tree.nontrivial_component_count();
        let blocks = tree.block_count();
        let isolated_links = self.isolated_links();
        let category = if blocks == 0 {
            Category::AllIsolated
        } else if components >= 2 || blocks >= 2 {
            Category::Multi
        } else if isolated_links == 0 {
            Category::Star
        } else {
            Category::SingleNontrivial
        };
        Classification { category, components, blocks, isolated_links }
    }

    /// Vertices of the non-trivial backbone components, one list per component.
    pub fn nontrivial_components(&self) -> Vec<Vec<VertexId>> {
        self.backbone.components().into_iter().filter(|c| c.len() > 1).collect()
    }

    /// Splits the instance by connected components of the union graph.
    ///
    /// Stream positions are kept, so every part has a subset of the original
    /// conflicts.
    pub fn union_components(&self) -> Vec<StreamedInstance> {
        let comps = self.union_graph().components();
        if comps.len() <= 1 {
            return vec![self.clone()];
        }
        comps.iter().map(|c| self.restrict(c)).collect()
    }

    /// The sub-instance on `vertices` (backbone and stream edges inside it).
    pub fn restrict(&self, vertices: &[VertexId]) -> StreamedInstance {
        let (backbone, map) = self.backbone.induced(vertices);
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let stream = self
            .stream
            .iter()
            .filter(|e| local[e.u] != usize::MAX && local[e.v] != usize::MAX)
            .map(|e| {
                let (a, b) = (local[e.u], local[e.v]);
                StreamEdge { u: a.min(b), v: a.max(b), position: e.position }
            })
            .collect();
        StreamedInstance { backbone, stream, omega: self.omega }
    }

    /// Merges vertices sharing a class id. Merged labels follow the
    /// contraction rule; loops vanish, parallel backbone edges collapse, and
    /// parallel stream edges keep the earliest position.
    pub(crate) fn contract_classes(&self, class_of: &[usize]) -> StreamedInstance {
        let n = self.vertex_count();
        let mut members: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for v in 0..n {
            members.entry(class_of[v]).or_default().push(v);
        }
        let mut labels = Vec::with_capacity(members.len());
        let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
        for (class, verts) in &members {
            class_index.insert(*class, labels.len());
            labels.push(graph::class_label(verts.iter().map(|&v| self.label(v))));
        }
        let target = |v: VertexId| class_index[&class_of[v]];
        let mut edges: Vec<(usize, usize)> = self
            .backbone
            .edges()
            .iter()
            .map(|&(a, b)| (target(a), target(b)))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let backbone = Graph::from_indexed(labels.clone(), &edges).expect("contracted backbone");
        // from_indexed re-sorts labels; map class index -> final id
        let final_id: Vec<usize> = labels.iter().map(|l| backbone.index_of(l).unwrap()).collect();
        let mut seen = BTreeSet::new();
        let mut stream = Vec::new();
        for e in &self.stream {
            let (a, b) = (final_id[target(e.u)], final_id[target(e.v)]);
            if a == b || backbone.has_edge(a, b) {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if seen.insert(key) {
                stream.push(StreamEdge { u: key.0, v: key.1, position: e.position });
            }
        }
        StreamedInstance { backbone, stream, omega: self.omega }
    }

    /// Splits an `omega = 1` instance with connected union graph into one
    /// instance per non-trivial backbone component; every other component is
    /// contracted to a single vertex.
    pub fn split_connected(&self) -> Result<Vec<StreamedInstance>, InstanceError> {
        if self.omega != 1 {
            return Err(InstanceError::UnsupportedOmega(self.omega));
        }
        if !self.union_graph().is_connected() {
            return Err(InstanceError::DisconnectedUnion);
        }
        let comps = self.nontrivial_components();
        if comps.len() <= 1 {
            return Ok(vec![self.clone()]);
        }
        let n = self.vertex_count();
        let mut comp_of = vec![usize::MAX; n];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        Ok((0..comps.len())
            .map(|keep| {
                let class_of: Vec<usize> = (0..n)
                    .map(|v| match comp_of[v] {
                        c if c != usize::MAX && c != keep => n + c,
                        _ => v,
                    })
                    .collect();
                self.contract_classes(&class_of)
            })
            .collect())
    }

    pub fn to_file(&self) -> InstanceFile {
        let positions = if self.has_contiguous_positions() {
            None
        } else {
            Some(self.stream.iter().map(|e| e.position).collect())
        };
        InstanceFile {
            omega: self.omega,
            vertices: self.backbone.labels().to_vec(),
            backbone_edges: self
                .backbone
                .edges()
                .iter()
                .map(|&(a, b)| [self.label(a).to_owned(), self.label(b).to_owned()])
                .collect(),
            stream: self
                .stream
                .iter()
                .map(|e| [self.label(e.u).to_owned(), self.label(e.v).to_owned()])
                .collect(),
            positions,
        }
    }

    pub fn from_file(file: &InstanceFile) -> Result<Self, InstanceError> {
        let backbone: Vec<(&str, &str)> =
            file.backbone_edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let positions: Vec<usize> = match &file.positions {
            Some(p) if p.len() != file.stream.len() => return Err(InstanceError::BadPositions),
            Some(p) => p.clone(),
            None => (1..=file.stream.len()).collect(),
        };
        let stream: Vec<(&str, &str, usize)> = file
            .stream
            .iter()
            .zip(positions)
            .map(|([a, b], p)| (a.as_str(), b.as_str(), p))
            .collect();
        let vertices: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
        Self::with_positions(&vertices, &backbone, &stream, file.omega)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| InstanceError::Invalid(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// On-disk instance format. Stream order is the stream order of the instance.
///
/// `positions` appears only for sub-instances whose stream positions are not
/// `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub omega: usize,
    pub vertices: Vec<String>,
    pub backbone_edges: Vec<[String; 2]>,
    pub stream: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<usize>>,
}
