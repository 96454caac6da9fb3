//! Reductions between streamed instances and sunflower SEFE.
//!
//! A sunflower SEFE instance is a common graph plus `k` sets of exclusive
//! edges; graph `Gᵢ` is the common graph plus the `i`-th set. It is positive
//! when one planar embedding of the common graph extends to a planar drawing
//! of every `Gᵢ`.
//!
//! [`star_to_sefe`] turns a star instance into such an instance (one graph per
//! time step plus one binding graph), [`sefe_brute_check`] decides small SEFE
//! instances by search, and [`theorem1_generate`] builds tree-backbone
//! streamed instances from 3-graph SEFE instances on a tree.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::disk::{disk_planar, DiskNode};
use crate::graph::{canonical_faces, enumerate_planar_rotations, Graph, GraphError, RotationSystem, VertexId};
use crate::instance::{Category, InstanceError, StreamedInstance};

/// Errors raised by the reductions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("wrong category: {0}")]
    WrongCategory(String),
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("invalid SEFE JSON: {0}")]
    Json(String),
}

/// Exclusive edges of one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SefeGraph {
    pub exclusive_edges: Vec<[String; 2]>,
}

/// A sunflower SEFE instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SefeInstance {
    pub vertices: Vec<String>,
    pub common_edges: Vec<[String; 2]>,
    pub graphs: Vec<SefeGraph>,
}

fn norm(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

impl SefeInstance {
    /// Number of graphs `k`.
    pub fn k(&self) -> usize {
        self.graphs.len()
    }

    /// The common graph.
    pub fn common_graph(&self) -> Result<Graph, ReduceError> {
        let edges: Vec<(&str, &str)> = self.common_edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let vertices: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        Ok(Graph::new(vertices, edges)?)
    }

    /// Checks labels, and that exclusive edges are simple, avoid the common
    /// graph and belong to a single graph (so every pairwise intersection is
    /// the common graph).
    pub fn validate(&self) -> Result<(), ReduceError> {
        let g = self.common_graph()?;
        let mut owner: BTreeMap<(String, String), usize> = BTreeMap::new();
        for (k, graph) in self.graphs.iter().enumerate() {
            for [a, b] in &graph.exclusive_edges {
                let (Some(x), Some(y)) = (g.index_of(a), g.index_of(b)) else {
                    return Err(ReduceError::ShapeViolation(format!("unknown vertex in ({a}, {b})")));
                };
                if x == y {
                    return Err(ReduceError::ShapeViolation(format!("self-loop ({a}, {b})")));
                }
                if g.has_edge(x, y) {
                    return Err(ReduceError::ShapeViolation(format!("exclusive edge ({a}, {b}) is common")));
                }
                if let Some(j) = owner.insert(norm(a, b), k) {
                    return Err(ReduceError::ShapeViolation(format!(
                        "edge ({a}, {b}) is exclusive to graphs {j} and {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ReduceError> {
        let s: SefeInstance = serde_json::from_str(text).map_err(|e| ReduceError::Json(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }
}

/// Label of the copy of stream edge `position` used at time `t`.
fn copy_label(position: usize, t: usize) -> String {
    format!("d:{position}:{t}")
}

/// Reduces a star instance to a sunflower SEFE instance.
///
/// Each stream edge `e` gets one isolated common vertex per time step at
/// which it is alive. Graph `Gₜ` (one per stream position, in order) routes
/// every edge alive at `t` through its copy for `t`; the last graph joins
/// every edge's first copy to its other copies, which forces all copies into
/// one face.
pub fn star_to_sefe(i: &StreamedInstance) -> Result<SefeInstance, ReduceError> {
    let category = i.shape().category;
    if category != Category::Star {
        return Err(ReduceError::WrongCategory(format!("{category:?} instance is not a star")));
    }
    let stream = i.stream();
    let omega = i.omega();
    let mut vertices: Vec<String> = i.backbone().labels().to_vec();
    let common_edges = i
        .backbone()
        .edges()
        .iter()
        .map(|&(a, b)| [i.label(a).to_owned(), i.label(b).to_owned()])
        .collect();
    let mut per_time: Vec<Vec<[String; 2]>> = vec![Vec::new(); stream.len()];
    let mut binding = Vec::new();
    for (k, e) in stream.iter().enumerate() {
        let (u, v) = i.edge_label(e);
        let first = copy_label(e.position, e.position);
        for (j, later) in stream.iter().enumerate().skip(k) {
            if later.position - e.position >= omega {
                break;
            }
            let d = copy_label(e.position, later.position);
            vertices.push(d.clone());
            per_time[j].push([u.clone(), d.clone()]);
            per_time[j].push([d.clone(), v.clone()]);
            if d != first {
                binding.push([first.clone(), d]);
            }
        }
    }
    if vertices.iter().collect::<BTreeSet<_>>().len() != vertices.len() {
        return Err(ReduceError::ShapeViolation("vertex labels collide with copy labels".into()));
    }
    let mut graphs: Vec<SefeGraph> = per_time.into_iter().map(|x| SefeGraph { exclusive_edges: x }).collect();
    graphs.push(SefeGraph { exclusive_edges: binding });
    Ok(SefeInstance { vertices, common_edges, graphs })
}

/// Decides a small SEFE instance whose common graph has at most one
/// non-trivial component: tries every planar rotation of that component and
/// searches a face for every isolated common vertex and a face (and corners)
/// for every exclusive edge so that each graph's exclusive edges fit planarly
/// into their faces. `budget` bounds rotations and search nodes.
pub fn sefe_brute_check(s: &SefeInstance, budget: u64) -> Result<bool, ReduceError> {
    s.validate()?;
    let g = s.common_graph()?;
    let n = g.vertex_count();
    let core: Vec<VertexId> = (0..n).filter(|&v| g.degree(v) > 0).collect();
    let (h, _) = g.induced(&core);
    if h.components().len() > 1 {
        return Err(ReduceError::ShapeViolation("common graph has several non-trivial components".into()));
    }
    // exclusive edges as variables: edges at the non-trivial component first,
    // so isolated vertices get their faces from constrained choices
    let mut vars: Vec<(usize, VertexId, VertexId)> = Vec::new();
    for (k, graph) in s.graphs.iter().enumerate() {
        for [a, b] in &graph.exclusive_edges {
            vars.push((k, g.index_of(a).unwrap(), g.index_of(b).unwrap()));
        }
    }
    vars.sort_by_key(|&(k, a, b)| (g.degree(a) == 0 && g.degree(b) == 0, k));

    let mut search = SefeSearch {
        isolated: (0..n).map(|v| g.degree(v) == 0).collect(),
        local: {
            let mut l = vec![usize::MAX; n];
            for (k, &v) in core.iter().enumerate() {
                l[v] = k;
            }
            l
        },
        vars,
        graphs: s.graphs.len(),
        budget,
        used: 0,
    };
    if core.is_empty() {
        return search.run(&canonical_faces(&RotationSystem::empty()));
    }
    let rotations = enumerate_planar_rotations(&h, budget).map_err(|e| match e {
        GraphError::BudgetExceeded { budget, .. } => ReduceError::BudgetExceeded { budget },
        other => ReduceError::Graph(other),
    })?;
    for r in rotations {
        if search.run(&canonical_faces(&r))? {
            return Ok(true);
        }
    }
    Ok(false)
}

struct SefeSearch {
    isolated: Vec<bool>,
    local: Vec<usize>,
    vars: Vec<(usize, VertexId, VertexId)>,
    graphs: usize,
    budget: u64,
    used: u64,
}

impl SefeSearch {
    fn run(&mut self, faces: &crate::graph::FaceSet) -> Result<bool, ReduceError> {
        let face_count = faces.len().max(1);
        // occurrences[local vertex][face] = walk positions
        let mut occurrences: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for f in 0..faces.len() {
            for (p, v) in faces.walk(f).into_iter().enumerate() {
                occurrences.entry((v, f)).or_default().push(p);
            }
        }
        let mut iso_face: Vec<Option<usize>> = vec![None; self.isolated.len()];
        let mut content: Vec<Vec<(DiskNode, DiskNode)>> = vec![Vec::new(); self.graphs * face_count];
        self.dfs(0, face_count, &occurrences, &mut iso_face, &mut content)
    }

    fn dfs(
        &mut self,
        k: usize,
        face_count: usize,
        occurrences: &BTreeMap<(usize, usize), Vec<usize>>,
        iso_face: &mut Vec<Option<usize>>,
        content: &mut Vec<Vec<(DiskNode, DiskNode)>>,
    ) -> Result<bool, ReduceError> {
        if k == self.vars.len() {
            return Ok(true);
        }
        let (graph, a, b) = self.vars[k];
        for f in 0..face_count {
            let ends_of = |x: VertexId| -> Option<Vec<DiskNode>> {
                if self.isolated[x] {
                    match iso_face[x] {
                        Some(g) if g != f => None,
                        _ => Some(vec![DiskNode::Inner(x)]),
                    }
                } else {
                    occurrences
                        .get(&(self.local[x], f))
                        .map(|ps| ps.iter().map(|&p| DiskNode::Boundary(p)).collect())
                }
            };
            let (Some(xs), Some(ys)) = (ends_of(a), ends_of(b)) else {
                continue;
            };
            let fixed: Vec<VertexId> =
                [a, b].into_iter().filter(|&x| self.isolated[x] && iso_face[x].is_none()).collect();
            for &x in &fixed {
                iso_face[x] = Some(f);
            }
            for &x in &xs {
                for &y in &ys {
                    self.used += 1;
                    if self.used > self.budget {
                        return Err(ReduceError::BudgetExceeded { budget: self.budget });
                    }
                    let slot = graph * face_count + f;
                    content[slot].push((x, y));
                    let ok = disk_planar(&content[slot]) && self.dfs(k + 1, face_count, occurrences, iso_face, content)?;
                    content[slot].pop();
                    if ok {
                        return Ok(true);
                    }
                }
            }
            for &x in &fixed {
                iso_face[x] = None;
            }
        }
        Ok(false)
    }
}

/// Counts reported by [`theorem1_generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetReport {
    pub tree_vertices: usize,
    pub star_leaves: usize,
    pub sentinels: usize,
    pub pair_edges: usize,
    pub sentinel_edges: usize,
}

impl GadgetReport {
    pub fn vertex_count(&self) -> usize {
        self.tree_vertices + self.star_leaves + self.sentinels
    }
}

/// Builds the tree-backbone streamed instance for a 3-graph SEFE instance
/// whose common graph is a tree and whose exclusive edges form, per graph, a
/// matching on the tree's leaves. The result is `omega`-stream planar iff the
/// SEFE instance is positive.
///
/// For every exclusive edge `e = (u, v)` of `Eᵢ`, `u` and `v` each get
/// `|Eᵢ| − 1` new leaves named `u^j:(u,v)`. For every pair `l < m` of `Eᵢ`
/// (pairs in lexicographic order), the stream gets an edge between fresh
/// leaves of `l` and then one between fresh leaves of `m`. After the pairs of
/// `Eᵢ` comes a sentinel edge between two new leaves `sentinel:<k>` of the
/// smallest internal tree vertex; between consecutive groups `omega − 2`
/// further sentinel edges keep groups from sharing a window.
pub fn theorem1_generate(s: &SefeInstance, omega: usize) -> Result<(StreamedInstance, GadgetReport), ReduceError> {
    s.validate()?;
    if s.k() != 3 {
        return Err(ReduceError::ShapeViolation(format!("k must be 3, got {}", s.k())));
    }
    if omega < 2 {
        return Err(ReduceError::ShapeViolation(format!("omega must be at least 2, got {omega}")));
    }
    let t = s.common_graph()?;
    let n = t.vertex_count();
    if !t.is_connected() || t.edge_count() + 1 != n {
        return Err(ReduceError::ShapeViolation("common graph is not a tree".into()));
    }
    let Some(rho) = (0..n).find(|&v| t.degree(v) >= 2) else {
        return Err(ReduceError::ShapeViolation("tree has no internal vertex".into()));
    };
    let mut groups: Vec<Vec<(String, String)>> = Vec::new();
    for graph in &s.graphs {
        let mut seen = BTreeSet::new();
        let mut edges = Vec::new();
        for [a, b] in &graph.exclusive_edges {
            for x in [a, b] {
                if t.degree(t.index_of(x).unwrap()) != 1 {
                    return Err(ReduceError::ShapeViolation(format!("endpoint `{x}` is not a leaf")));
                }
                if !seen.insert(x.clone()) {
                    return Err(ReduceError::ShapeViolation(format!("exclusive edges share `{x}`")));
                }
            }
            edges.push(norm(a, b));
        }
        edges.sort();
        groups.push(edges);
    }

    let mut vertices: Vec<String> = t.labels().to_vec();
    let mut backbone: Vec<(String, String)> =
        t.edges().iter().map(|&(a, b)| (t.label(a).to_owned(), t.label(b).to_owned())).collect();
    let mut stream: Vec<(String, String)> = Vec::new();
    let rho = t.label(rho).to_owned();
    let mut report =
        GadgetReport { tree_vertices: n, star_leaves: 0, sentinels: 0, pair_edges: 0, sentinel_edges: 0 };
    let leaf = |centre: &str, j: usize, (u, v): &(String, String)| format!("{centre}^{j}:({u},{v})");
    let sentinel_edge = |vertices: &mut Vec<String>,
                             backbone: &mut Vec<(String, String)>,
                             stream: &mut Vec<(String, String)>,
                             report: &mut GadgetReport,
                             k: usize| {
        let (a, b) = (format!("sentinel:{k}"), format!("sentinel:{}", k + 1));
        for x in [&a, &b] {
            vertices.push(x.clone());
            backbone.push((rho.clone(), x.clone()));
        }
        stream.push((a, b));
        report.sentinels += 2;
        report.sentinel_edges += 1;
    };
    let mut extra = 7;
    for (gi, edges) in groups.iter().enumerate() {
        let q = edges.len().saturating_sub(1);
        for e in edges {
            for centre in [&e.0, &e.1] {
                for j in 1..=q {
                    let l = leaf(centre, j, e);
                    vertices.push(l.clone());
                    backbone.push((centre.clone(), l));
                    report.star_leaves += 1;
                }
            }
        }
        let mut used = vec![0usize; edges.len()];
        for l in 0..edges.len() {
            for m in l + 1..edges.len() {
                for x in [l, m] {
                    used[x] += 1;
                    let e = &edges[x];
                    stream.push((leaf(&e.0, used[x], e), leaf(&e.1, used[x], e)));
                    report.pair_edges += 1;
                }
            }
        }
        sentinel_edge(&mut vertices, &mut backbone, &mut stream, &mut report, 2 * gi + 1);
        if gi + 1 < groups.len() {
            for _ in 0..omega - 2 {
                sentinel_edge(&mut vertices, &mut backbone, &mut stream, &mut report, extra);
                extra += 2;
            }
        }
    }
    let distinct: BTreeSet<&String> = vertices.iter().collect();
    if distinct.len() != vertices.len() {
        return Err(ReduceError::ShapeViolation("tree labels collide with generated labels".into()));
    }
    let i = StreamedInstance::new(&vertices, &backbone, &stream, omega)?;
    debug_assert_eq!(i.vertex_count(), report.vertex_count());
    Ok((i, report))
}
