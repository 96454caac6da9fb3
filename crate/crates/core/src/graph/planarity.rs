use rustworkx_core::petgraph::graph::{NodeIndex, UnGraph};
use rustworkx_core::planar::is_planar;

use super::Graph;

/// Returns true iff `g` is planar.
pub fn planarity_check(g: &Graph) -> bool {
    planar_edges(g.vertex_count(), g.edges())
}

/// Planarity of a simple graph on `0..n` given by an edge list.
pub(crate) fn planar_edges(n: usize, edges: &[(usize, usize)]) -> bool {
    let m = edges.len();
    // Every non-planar graph contains a subdivision of K5 or K3,3, so it has
    // at least nine edges.
    if m < 9 {
        return true;
    }
    if n >= 3 && m > 3 * n - 6 {
        return false;
    }
    let mut graph = UnGraph::<(), ()>::with_capacity(n, m);
    for _ in 0..n {
        graph.add_node(());
    }
    for &(a, b) in edges {
        graph.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
    }
    is_planar(&graph)
}
