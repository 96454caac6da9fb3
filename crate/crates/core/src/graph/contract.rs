use super::{Graph, GraphError, VertexId};

/// Label of the vertex obtained by merging `a` and `b`: the smaller label,
/// `+`, then the larger one.
pub fn merged_label(a: &str, b: &str) -> String {
    if a <= b {
        format!("{a}+{b}")
    } else {
        format!("{b}+{a}")
    }
}

/// Label of a class of merged vertices: the pairwise rule folded over the
/// members in sorted order.
pub(crate) fn class_label<'a>(members: impl IntoIterator<Item = &'a str>) -> String {
    let mut sorted: Vec<&str> = members.into_iter().collect();
    sorted.sort_unstable();
    let mut iter = sorted.into_iter();
    let first = iter.next().expect("non-empty class").to_owned();
    iter.fold(first, |acc, next| merged_label(&acc, next))
}

/// Contracts edge `(u, v)`: both endpoints are replaced by one merged vertex,
/// parallel edges collapse and the loop from the merge is dropped.
pub fn contract_edge(g: &Graph, u: &str, v: &str) -> Result<Graph, GraphError> {
    let missing = || GraphError::EdgeNotFound(u.to_owned(), v.to_owned());
    let a = g.index_of(u).ok_or_else(missing)?;
    let b = g.index_of(v).ok_or_else(missing)?;
    if !g.has_edge(a, b) {
        return Err(missing());
    }
    let merged = g.vertex_count();
    let target = |x: VertexId| if x == a || x == b { merged } else { x };
    let mut labels: Vec<String> = Vec::with_capacity(g.vertex_count() - 1);
    let mut remap = vec![usize::MAX; g.vertex_count() + 1];
    for x in 0..g.vertex_count() {
        if x != a && x != b {
            remap[x] = labels.len();
            labels.push(g.label(x).to_owned());
        }
    }
    remap[merged] = labels.len();
    labels.push(merged_label(u, v));
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(x, y)| (remap[target(x)], remap[target(y)]))
        .filter(|&(x, y)| x != y)
        .map(|(x, y)| (x.min(y), x.max(y)))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Graph::from_indexed(labels, &edges)
}
