//! Seeded random instances.
//!
//! [`random_instance`] builds a stacked triangulation on `n` vertices, deletes
//! every edge independently with probability 0.3, and draws `m` distinct stream
//! edges uniformly from the remaining vertex pairs, in random order.
//! [`random_tree_instance`] builds a large random tree backbone with extra
//! isolated vertices, for scaling runs. Both are deterministic in their seed.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::{InstanceError, StreamedInstance};

/// Probability that a triangulation edge is dropped from the backbone.
pub const EDGE_DELETION_PROBABILITY: f64 = 0.3;

/// Labels `v0..v{n-1}`, zero-padded to a common width so label order is
/// numeric order.
pub fn vertex_labels(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|k| format!("v{k:0width$}")).collect()
}

/// Random planar backbone on `n` vertices with `m` stream edges.
pub fn random_instance(n: usize, m: usize, omega: usize, seed: u64) -> Result<StreamedInstance, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = vertex_labels(n);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    if n == 2 {
        edges.push((0, 1));
    } else if n >= 3 {
        edges.extend([(0, 1), (1, 2), (0, 2)]);
        let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 2]];
        for v in 3..n {
            let f = rng.gen_range(0..faces.len());
            let [a, b, c] = faces.swap_remove(f);
            edges.extend([(a, v), (b, v), (c, v)]);
            faces.extend([[a, b, v], [b, c, v], [a, c, v]]);
        }
    }
    edges.retain(|_| !rng.gen_bool(EDGE_DELETION_PROBABILITY));
    let present: HashSet<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|p| !present.contains(p)).collect();
    if m > pairs.len() {
        return Err(InstanceError::Invalid(format!(
            "only {} non-backbone pairs available for {m} stream edges",
            pairs.len()
        )));
    }
    let stream: Vec<(&str, &str)> = sample(&mut rng, pairs.len(), m)
        .into_iter()
        .map(|k| (labels[pairs[k].0].as_str(), labels[pairs[k].1].as_str()))
        .collect();
    let backbone: Vec<(&str, &str)> = edges.iter().map(|&(a, b)| (labels[a].as_str(), labels[b].as_str())).collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    StreamedInstance::new(&labels, &backbone, &stream, omega)
}

/// Random tree on `tree` vertices (each vertex joined to a uniformly random
/// earlier one) plus `isolated` isolated vertices, with `m` distinct stream
/// edges. The first stream edges link every isolated vertex to a random
/// earlier vertex, so the union graph is connected; the rest are uniform
/// non-backbone pairs. Requires `m ≥ isolated` and `tree ≥ 1`.
pub fn random_tree_instance(
    tree: usize,
    isolated: usize,
    m: usize,
    omega: usize,
    seed: u64,
) -> Result<StreamedInstance, InstanceError> {
    if tree == 0 || m < isolated {
        return Err(InstanceError::Invalid("need at least one tree vertex and one stream edge per isolated vertex".into()));
    }
    let n = tree + isolated;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = vertex_labels(n);
    let mut taken: HashSet<(usize, usize)> = HashSet::new();
    let mut backbone = Vec::with_capacity(tree);
    for v in 1..tree {
        let p = rng.gen_range(0..v);
        backbone.push((p, v));
        taken.insert((p, v));
    }
    let mut stream = Vec::with_capacity(m);
    for v in tree..n {
        let p = rng.gen_range(0..v);
        stream.push((p, v));
        taken.insert((p, v));
    }
    let max_pairs = n * (n - 1) / 2;
    if m > max_pairs.saturating_sub(backbone.len()) {
        return Err(InstanceError::Invalid(format!("too many stream edges for {n} vertices")));
    }
    while stream.len() < m {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let key = (a.min(b), a.max(b));
        if a != b && taken.insert(key) {
            stream.push(key);
        }
    }
    let backbone: Vec<(&str, &str)> =
        backbone.iter().map(|&(a, b)| (labels[a].as_str(), labels[b].as_str())).collect();
    let stream: Vec<(&str, &str)> = stream.iter().map(|&(a, b)| (labels[a].as_str(), labels[b].as_str())).collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    StreamedInstance::new(&labels, &backbone, &stream, omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_sort_numerically() {
        assert_eq!(vertex_labels(3), ["v0", "v1", "v2"]);
        let l = vertex_labels(11);
        assert_eq!(l[0], "v00");
        assert!(l.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn random_instances_are_valid_and_deterministic() {
        for seed in 0..30 {
            let i = random_instance(6, 4, 2, seed).unwrap();
            assert!(i.validate().is_ok());
            assert_eq!(i.stream().len(), 4);
            assert!(i.backbone().edge_count() <= 3 * 6 - 6);
            assert_eq!(i.to_json(), random_instance(6, 4, 2, seed).unwrap().to_json());
        }
        assert_ne!(random_instance(8, 5, 1, 1).unwrap(), random_instance(8, 5, 1, 2).unwrap());
        assert!(random_instance(3, 10, 1, 0).is_err());
        assert_eq!(random_instance(1, 0, 1, 0).unwrap().vertex_count(), 1);
    }

    #[test]
    fn random_trees() {
        let i = random_tree_instance(50, 10, 40, 1, 3).unwrap();
        assert!(i.validate().is_ok());
        assert_eq!(i.backbone().edge_count(), 49);
        assert_eq!(i.backbone().isolated_vertices().len(), 10);
        assert!(i.union_graph().is_connected());
        assert!(random_tree_instance(5, 3, 2, 1, 0).is_err());
    }
}
