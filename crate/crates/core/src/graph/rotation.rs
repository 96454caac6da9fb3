//! Rotation systems, facial walks, and enumeration of planar rotations.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Graph, GraphError, VertexId};

/// Cyclic (clockwise) neighbor order at every vertex.
///
/// A rotation system is self-contained: it carries its own sorted vertex
/// labels, and the underlying graph is implied by the neighbor lists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RotationSystem {
    labels: Arc<Vec<String>>,
    rotation: Vec<Vec<VertexId>>,
}

impl RotationSystem {
    /// The rotation system with no vertices.
    pub fn empty() -> Self {
        RotationSystem { labels: Arc::new(Vec::new()), rotation: Vec::new() }
    }

    /// Builds a rotation system for `g` from one cyclic order per vertex.
    pub fn for_graph(g: &Graph, orders: Vec<Vec<VertexId>>) -> Result<Self, GraphError> {
        Self::with_labels(Arc::new(g.labels().to_vec()), orders, Some(g))
    }

    fn with_labels(
        labels: Arc<Vec<String>>,
        rotation: Vec<Vec<VertexId>>,
        graph: Option<&Graph>,
    ) -> Result<Self, GraphError> {
        if rotation.len() != labels.len() {
            return Err(GraphError::BadRotation("one cyclic order per vertex required".into()));
        }
        for (v, order) in rotation.iter().enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.contains(&v) {
                return Err(GraphError::BadRotation(format!(
                    "rotation at `{}` repeats a neighbor or lists itself",
                    labels[v]
                )));
            }
            if let Some(g) = graph {
                if sorted != g.neighbors(v) {
                    return Err(GraphError::BadRotation(format!(
                        "rotation at `{}` is not a permutation of its neighbors",
                        labels[v]
                    )));
                }
            }
            for &w in order {
                if w >= labels.len() || !rotation[w].contains(&v) {
                    return Err(GraphError::BadRotation(format!(
                        "rotation is not symmetric at `{}`",
                        labels[v]
                    )));
                }
            }
        }
        Ok(RotationSystem { labels, rotation })
    }

    /// Builds a rotation system from a label-keyed map, as found in certificate
    /// files.
    pub fn from_labeled(map: &BTreeMap<String, Vec<String>>) -> Result<Self, GraphError> {
        let labels: Vec<String> = map.keys().cloned().collect();
        let index = |s: &str| {
            labels
                .binary_search_by(|l| l.as_str().cmp(s))
                .map_err(|_| GraphError::UnknownVertex(s.to_owned()))
        };
        let mut rotation = Vec::with_capacity(labels.len());
        for order in map.values() {
            rotation.push(order.iter().map(|s| index(s)).collect::<Result<Vec<_>, _>>()?);
        }
        Self::with_labels(Arc::new(labels), rotation, None)
    }

    pub fn to_labeled(&self) -> BTreeMap<String, Vec<String>> {
        self.rotation
            .iter()
            .enumerate()
            .map(|(v, order)| {
                (self.labels[v].clone(), order.iter().map(|&w| self.labels[w].clone()).collect())
            })
            .collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The cyclic order at `v`.
    pub fn order(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[v]
    }

    /// The graph whose edges are exactly the rotation's neighbor pairs.
    pub fn underlying_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for (v, order) in self.rotation.iter().enumerate() {
            for &w in order {
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        Graph::from_indexed(self.labels.to_vec(), &edges).expect("rotation systems are simple")
    }

    /// Successor of `u` in the cyclic order at `v`.
    fn successor(&self, v: VertexId, u: VertexId) -> VertexId {
        let order = &self.rotation[v];
        let pos = order.iter().position(|&x| x == u).expect("u adjacent to v");
        order[(pos + 1) % order.len()]
    }
}

/// The facial walks of a rotation system, in canonical discovery order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceSet {
    faces: Vec<Vec<(VertexId, VertexId)>>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// The directed edges of face `id`, in walk order.
    pub fn darts(&self, id: usize) -> &[(VertexId, VertexId)] {
        &self.faces[id]
    }

    /// The vertex occurrences of face `id` (the tail of every dart).
    pub fn walk(&self, id: usize) -> Vec<VertexId> {
        self.faces[id].iter().map(|&(u, _)| u).collect()
    }

    /// Ids of faces whose boundary walk visits `v`.
    pub fn faces_at(&self, v: VertexId) -> Vec<usize> {
        (0..self.len()).filter(|&f| self.faces[f].iter().any(|&(u, _)| u == v)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[(VertexId, VertexId)]> {
        self.faces.iter().map(Vec::as_slice)
    }
}

/// Enumerates facial walks.
///
/// From dart `(u, v)` the walk continues with `(v, w)` where `w` follows `u`
/// in the rotation at `v`. Faces are discovered in lexicographic order of
/// their smallest untraversed dart; the face id is the discovery index.
pub fn canonical_faces(r: &RotationSystem) -> FaceSet {
    let n = r.vertex_count();
    let mut offset = vec![0usize; n + 1];
    for v in 0..n {
        offset[v + 1] = offset[v] + r.rotation[v].len();
    }
    let dart_id = |u: VertexId, v: VertexId| -> usize {
        offset[u] + r.rotation[u].iter().position(|&x| x == v).expect("dart exists")
    };
    let mut used = vec![false; offset[n]];
    let mut faces = Vec::new();
    for u in 0..n {
        let mut out = r.rotation[u].clone();
        out.sort_unstable();
        for v in out {
            if used[dart_id(u, v)] {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (u, v);
            loop {
                let id = dart_id(a, b);
                if used[id] {
                    break;
                }
                used[id] = true;
                face.push((a, b));
                let c = r.successor(b, a);
                a = b;
                b = c;
            }
            faces.push(face);
        }
    }
    FaceSet { faces }
}

/// Euler check: the rotation is planar iff every connected component with
/// edges has exactly `2 - n + m` faces.
pub fn is_planar_rotation(r: &RotationSystem) -> bool {
    let faces = canonical_faces(r);
    let g = r.underlying_graph();
    let expected: i64 = g
        .components()
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let m: usize = c.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
            2 - c.len() as i64 + m as i64
        })
        .sum();
    faces.len() as i64 == expected
}

/// Number of rotation systems of `g`: the product of `(deg(v) - 1)!`.
pub fn rotation_count(g: &Graph) -> u128 {
    let mut total: u128 = 1;
    for v in 0..g.vertex_count() {
        for k in 2..g.degree(v) {
            total = total.saturating_mul(k as u128);
        }
    }
    total
}

/// Lazy enumeration of the planar rotation systems of a graph.
///
/// Each vertex's cyclic order is anchored at its smallest neighbor; the other
/// neighbors run through their permutations in lexicographic order. Vertices
/// are combined odometer-style with vertex 0 most significant.
pub struct PlanarRotations {
    labels: Arc<Vec<String>>,
    current: Vec<Vec<VertexId>>,
    done: bool,
}

/// Starts the enumeration of planar rotations of `g`.
///
/// Fails with [`GraphError::BudgetExceeded`] when the number of rotation
/// systems to scan exceeds `budget`.
pub fn enumerate_planar_rotations(g: &Graph, budget: u64) -> Result<PlanarRotations, GraphError> {
    let needed = rotation_count(g);
    if needed > budget as u128 {
        return Err(GraphError::BudgetExceeded { needed, budget });
    }
    let current = (0..g.vertex_count()).map(|v| g.neighbors(v).to_vec()).collect();
    Ok(PlanarRotations { labels: Arc::new(g.labels().to_vec()), current, done: false })
}

fn next_permutation(xs: &mut [VertexId]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

impl PlanarRotations {
    fn advance(&mut self) {
        for v in (0..self.current.len()).rev() {
            let order = &mut self.current[v];
            if order.len() > 2 && next_permutation(&mut order[1..]) {
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for PlanarRotations {
    type Item = RotationSystem;

    fn next(&mut self) -> Option<RotationSystem> {
        while !self.done {
            let candidate =
                RotationSystem { labels: Arc::clone(&self.labels), rotation: self.current.clone() };
            self.advance();
            if is_planar_rotation(&candidate) {
                return Some(candidate);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    fn sorted_rotation(g: &Graph) -> RotationSystem {
        let orders = (0..g.vertex_count()).map(|v| g.neighbors(v).to_vec()).collect();
        RotationSystem::for_graph(g, orders).unwrap()
    }

    /// All rotation systems, by plain product enumeration.
    fn all_rotations(g: &Graph) -> Vec<RotationSystem> {
        let mut per_vertex: Vec<Vec<Vec<VertexId>>> = Vec::new();
        for v in 0..g.vertex_count() {
            let nbrs = g.neighbors(v).to_vec();
            let mut orders = Vec::new();
            if nbrs.len() <= 2 {
                orders.push(nbrs);
            } else {
                let mut rest = nbrs[1..].to_vec();
                loop {
                    let mut o = vec![nbrs[0]];
                    o.extend(&rest);
                    orders.push(o);
                    if !next_permutation(&mut rest) {
                        break;
                    }
                }
            }
            per_vertex.push(orders);
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_vertex.len()];
        loop {
            let orders = idx.iter().enumerate().map(|(v, &i)| per_vertex[v][i].clone()).collect();
            out.push(RotationSystem::for_graph(g, orders).unwrap());
            let mut v = per_vertex.len();
            loop {
                if v == 0 {
                    return out;
                }
                v -= 1;
                idx[v] += 1;
                if idx[v] < per_vertex[v].len() {
                    break;
                }
                idx[v] = 0;
            }
        }
    }

    #[test]
    fn triangle_and_cycle_faces() {
        let tri = fixtures::cycle(3);
        let faces = canonical_faces(&sorted_rotation(&tri));
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 3));
        let c4 = fixtures::cycle(4);
        let faces = canonical_faces(&sorted_rotation(&c4));
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 4));
        // face 0 starts at the smallest dart (a, b)
        assert_eq!(faces.darts(0)[0], (0, 1));
    }

    #[test]
    fn k4_planar_rotation_has_four_triangles() {
        let k4 = fixtures::complete(4);
        let planar = enumerate_planar_rotations(&k4, 1_000).unwrap().next().unwrap();
        let faces = canonical_faces(&planar);
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn k4_planar_count_matches_brute_filter() {
        let k4 = fixtures::complete(4);
        let all = all_rotations(&k4);
        assert_eq!(all.len(), 16);
        let filtered = all.iter().filter(|r| is_planar_rotation(r)).count();
        let enumerated: Vec<_> = enumerate_planar_rotations(&k4, 1_000).unwrap().collect();
        assert_eq!(enumerated.len(), filtered);
        // the two mirror embeddings
        assert_eq!(filtered, 2);
    }

    #[test]
    fn trivial_graphs_have_one_rotation() {
        assert_eq!(enumerate_planar_rotations(&fixtures::cycle(3), 10).unwrap().count(), 1);
        let path = fixtures::from(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(enumerate_planar_rotations(&path, 10).unwrap().count(), 1);
    }

    #[test]
    fn k5_has_no_planar_rotation() {
        let k5 = fixtures::complete(5);
        assert_eq!(rotation_count(&k5), 7776);
        assert_eq!(enumerate_planar_rotations(&k5, 10_000).unwrap().count(), 0);
    }

    #[test]
    fn budget_guard_trips() {
        let k5 = fixtures::complete(5);
        assert!(matches!(
            enumerate_planar_rotations(&k5, 100),
            Err(GraphError::BudgetExceeded { needed: 7776, budget: 100 })
        ));
    }

    #[test]
    fn planar_plus_nonplanar_covers_all_rotations() {
        let graphs = [
            fixtures::complete(4),
            fixtures::from(
                &["a", "b", "c", "d", "e"],
                &[("a", "b"), ("a", "c"), ("a", "d"), ("a", "e"), ("b", "c"), ("d", "e")],
            ),
            fixtures::from(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c")]),
        ];
        for g in graphs {
            let all = all_rotations(&g);
            let planar: Vec<_> = enumerate_planar_rotations(&g, 1_000_000).unwrap().collect();
            let expected: Vec<_> = all.iter().filter(|r| is_planar_rotation(r)).cloned().collect();
            assert_eq!(planar, expected);
            assert_eq!(all.len() as u128, rotation_count(&g));
        }
    }

    #[test]
    fn dart_sum_is_twice_edge_count() {
        let g = fixtures::complete(5);
        for r in all_rotations(&g).iter().step_by(97) {
            let faces = canonical_faces(r);
            assert_eq!(faces.iter().map(<[_]>::len).sum::<usize>(), 2 * g.edge_count());
        }
    }

    #[test]
    fn labeled_round_trip_and_validation() {
        let k4 = fixtures::complete(4);
        let r = enumerate_planar_rotations(&k4, 100).unwrap().next().unwrap();
        let back = RotationSystem::from_labeled(&r.to_labeled()).unwrap();
        assert_eq!(back, r);
        let mut broken = r.to_labeled();
        broken.get_mut("a").unwrap().pop();
        assert!(RotationSystem::from_labeled(&broken).is_err());
    }
}
