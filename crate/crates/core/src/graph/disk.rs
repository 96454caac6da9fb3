//! Planarity of drawings confined to one face.
//!
//! A face is modelled as a disk whose boundary is the facial walk, one point
//! per walk occurrence. The disk graph is that boundary cycle, an apex joined
//! to every boundary point (pinning their cyclic order), and the content
//! edges. Boundary points without content are smoothed away first.

use super::planarity::planar_edges;

/// An endpoint of a content edge inside a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum DiskNode {
    /// Position of a vertex occurrence along the facial walk.
    Boundary(usize),
    /// A vertex drawn in the interior of the face (any caller-chosen id).
    Inner(usize),
}

/// Returns true iff `content` can be drawn inside the disk without crossings.
pub(crate) fn disk_planar(content: &[(DiskNode, DiskNode)]) -> bool {
    let mut boundary: Vec<usize> = Vec::new();
    let mut inner: Vec<usize> = Vec::new();
    for &(a, b) in content {
        for node in [a, b] {
            match node {
                DiskNode::Boundary(p) => boundary.push(p),
                DiskNode::Inner(q) => inner.push(q),
            }
        }
    }
    boundary.sort_unstable();
    boundary.dedup();
    inner.sort_unstable();
    inner.dedup();

    if inner.is_empty() {
        return chords_nested(content);
    }

    let k = boundary.len();
    let apex = k;
    let index = |node: DiskNode| match node {
        DiskNode::Boundary(p) => boundary.binary_search(&p).unwrap(),
        DiskNode::Inner(q) => k + 1 + inner.binary_search(&q).unwrap(),
    };
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(2 * k + content.len());
    if k >= 3 {
        edges.extend((0..k).map(|i| (i, (i + 1) % k)));
    } else if k == 2 {
        edges.push((0, 1));
    }
    edges.extend((0..k).map(|i| (i, apex)));
    for &(a, b) in content {
        let (x, y) = (index(a), index(b));
        if x != y {
            edges.push((x, y));
        }
    }
    for e in &mut edges {
        *e = (e.0.min(e.1), e.0.max(e.1));
    }
    edges.sort_unstable();
    edges.dedup();
    planar_edges(k + 1 + inner.len(), &edges)
}

/// Chords between boundary points fit iff no two of them interleave.
fn chords_nested(content: &[(DiskNode, DiskNode)]) -> bool {
    let chords: Vec<(usize, usize)> = content
        .iter()
        .filter_map(|&(a, b)| match (a, b) {
            (DiskNode::Boundary(x), DiskNode::Boundary(y)) => Some((x.min(y), x.max(y))),
            _ => None,
        })
        .collect();
    for (i, &(a, b)) in chords.iter().enumerate() {
        for &(c, d) in &chords[i + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return false;
            }
        }
    }
    true
}
