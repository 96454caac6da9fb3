//! Simple undirected labeled graphs and the embedding machinery built on them.
//!
//! Vertices are kept sorted by label, so a [`VertexId`] order is the same as the
//! lexicographic label order. Every deterministic rule in the crate (face
//! discovery, rotation enumeration, leaf-block choice) relies on that.

mod blocks;
mod contract;
pub(crate) mod disk;
mod planarity;
mod rotation;

pub use blocks::{blocks, Block, BlockCutTree};
pub(crate) use contract::class_label;
pub use contract::{contract_edge, merged_label};
pub use planarity::planarity_check;
pub use rotation::{
    canonical_faces, enumerate_planar_rotations, is_planar_rotation, rotation_count, FaceSet,
    PlanarRotations, RotationSystem,
};

use std::fmt;

use thiserror::Error;

/// Index of a vertex inside one [`Graph`] (position in the sorted label list).
pub type VertexId = usize;

/// Errors raised while building or editing graphs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),
    #[error("edge ({0}, {1}) not found")]
    EdgeNotFound(String, String),
    #[error("rotation system: {0}")]
    BadRotation(String),
    #[error("enumeration budget exceeded: {needed} rotation systems > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

/// A simple undirected graph over string labels.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
}

impl Graph {
    /// Builds a graph from labeled vertices and labeled edges.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = vertices.into_iter().map(|s| s.as_ref().to_owned()).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateVertex(pair[0].clone()));
            }
        }
        let lookup = |s: &str| {
            sorted
                .binary_search_by(|l| l.as_str().cmp(s))
                .map_err(|_| GraphError::UnknownVertex(s.to_owned()))
        };
        let mut indexed = Vec::new();
        for (a, b) in edges {
            indexed.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_sorted(sorted, indexed)
    }

    /// Builds a graph from arbitrary-order labels and edges given as indices into
    /// `labels`. Labels are re-sorted and edges remapped.
    pub fn from_indexed(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut remap = vec![0; labels.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let sorted: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateVertex(pair[0].clone()));
            }
        }
        let mapped: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (remap[a], remap[b])).collect();
        Self::from_sorted(sorted, mapped)
    }

    fn from_sorted(labels: Vec<String>, raw: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            if a == b {
                return Err(GraphError::SelfLoop(labels[a].clone()));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        for pair in edges.windows(2) {
            if pair[0] == pair[1] {
                let (a, b) = pair[0];
                return Err(GraphError::DuplicateEdge(labels[a].clone(), labels[b].clone()));
            }
        }
        let mut adjacency = vec![Vec::new(); labels.len()];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { labels, adjacency, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<VertexId> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    /// Neighbors of `v`, sorted by id.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    /// Edges as `(smaller, larger)` id pairs, sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// The isolated vertices (degree zero).
    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        (0..self.vertex_count()).filter(|&v| self.degree(v) == 0).collect()
    }

    /// Connected components, each sorted, listed by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The subgraph induced by `vertices`, together with the id map from the
    /// subgraph back into `self`.
    pub fn induced(&self, vertices: &[VertexId]) -> (Graph, Vec<VertexId>) {
        let mut keep: Vec<VertexId> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| local[a] != usize::MAX && local[b] != usize::MAX)
            .map(|&(a, b)| (local[a], local[b]))
            .collect();
        let g = Graph::from_sorted(labels, edges).expect("induced subgraph of a simple graph");
        (g, keep)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|&(a, b)| (self.labels[a].as_str(), self.labels[b].as_str()))
            .collect();
        f.debug_struct("Graph")
            .field("vertices", &self.labels)
            .field("edges", &edges)
            .finish()
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(
            Graph::new(["a", "b"], [("a", "a")]),
            Err(GraphError::SelfLoop("a".into()))
        );
        assert_eq!(
            Graph::new(["a", "b"], [("a", "b"), ("b", "a")]),
            Err(GraphError::DuplicateEdge("a".into(), "b".into()))
        );
        assert_eq!(
            Graph::new(["a", "b"], [("a", "c")]),
            Err(GraphError::UnknownVertex("c".into()))
        );
        assert_eq!(
            Graph::new(["a", "a"], Vec::<(&str, &str)>::new()),
            Err(GraphError::DuplicateVertex("a".into()))
        );
    }

    #[test]
    fn labels_are_sorted_and_indexed() {
        let g = Graph::new(["c", "a", "b"], [("c", "a")]).unwrap();
        assert_eq!(g.labels(), ["a", "b", "c"]);
        assert_eq!(g.index_of("c"), Some(2));
        assert_eq!(g.edges(), &[(0, 2)]);
        assert_eq!(g.isolated_vertices(), vec![1]);
        assert_eq!(g.components(), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = fixtures::complete(4);
        let (sub, map) = g.induced(&[3, 1, 2]);
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(sub.edge_count(), 3);
        assert_eq!(sub.labels(), ["b", "c", "d"]);
    }
}
