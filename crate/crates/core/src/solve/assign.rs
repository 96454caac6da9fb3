//! Face-and-corner assignment search under a fixed rotation system.

use std::collections::BTreeMap;

use super::SolveError;
use crate::certify::DrawingCertificate;
use crate::graph::disk::{disk_planar, DiskNode};
use crate::graph::{FaceSet, RotationSystem, VertexId};
use crate::instance::StreamedInstance;

/// Counts search nodes against a budget shared by one search.
pub(crate) struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub(crate) fn tick(&mut self) -> Result<(), SolveError> {
        self.used += 1;
        if self.used > self.limit {
            Err(SolveError::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Isolated vertices linked by stream edges must share a face: groups them.
pub(crate) fn isolated_clusters(i: &StreamedInstance) -> Vec<usize> {
    let n = i.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for e in i.stream() {
        if i.is_isolated(e.u) && i.is_isolated(e.v) {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

struct Choice {
    face: usize,
    corners: [Option<usize>; 2],
}

/// Searches a face (and corner) for every stream edge and a face for every
/// isolated vertex so that every window is drawable, given the rotation of
/// the core (the backbone's non-trivial component, `core[k]` being rotation
/// vertex `k`). Edges are decided in stream order; faces in id order.
pub(crate) fn search_assignment(
    i: &StreamedInstance,
    core: &[VertexId],
    rotation: &RotationSystem,
    faces: &FaceSet,
    cluster: &[usize],
    budget: &mut Budget,
) -> Result<Option<DrawingCertificate>, SolveError> {
    let n = i.vertex_count();
    let face_count = faces.len().max(1);
    // occurrences[v] = face -> walk indices, for core vertices
    let mut occurrences: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); n];
    for f in 0..faces.len() {
        for (k, local) in faces.walk(f).into_iter().enumerate() {
            occurrences[core[local]].entry(f).or_default().push(k);
        }
    }
    let all_faces: Vec<usize> = (0..face_count).collect();
    let faces_of = |v: VertexId| -> Vec<usize> {
        if i.is_isolated(v) || faces.is_empty() {
            all_faces.clone()
        } else {
            occurrences[v].keys().copied().collect()
        }
    };
    let intersect = |a: &[usize], b: &[usize]| -> Vec<usize> {
        a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
    };

    // faces allowed for each cluster, from the core neighbours of its members
    let mut cluster_allowed: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in i.stream() {
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            if i.is_isolated(x) && !i.is_isolated(y) {
                let entry = cluster_allowed.entry(cluster[x]).or_insert_with(|| all_faces.clone());
                *entry = intersect(entry, &faces_of(y));
            }
        }
    }
    let stream = i.stream();
    let mut allowed: Vec<Vec<usize>> = Vec::with_capacity(stream.len());
    for e in stream {
        let mut a = intersect(&faces_of(e.u), &faces_of(e.v));
        for x in e.ends() {
            if i.is_isolated(x) {
                if let Some(c) = cluster_allowed.get(&cluster[x]) {
                    a = intersect(&a, c);
                }
            }
        }
        if a.is_empty() {
            return Ok(None);
        }
        allowed.push(a);
    }

    let m = stream.len();
    let omega = i.omega();
    let mut cluster_face: Vec<Option<usize>> = vec![None; n];
    let mut set_by: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut options: Vec<Vec<Choice>> = (0..m).map(|_| Vec::new()).collect();
    let mut next = vec![0usize; m];
    let mut edge_face: Vec<usize> = vec![0; m];
    let mut corners: Vec<[Option<usize>; 2]> = vec![[None, None]; m];

    let build_options = |k: usize, cluster_face: &[Option<usize>]| -> Vec<Choice> {
        let e = &stream[k];
        let mut out = Vec::new();
        for &f in &allowed[k] {
            if e.ends().iter().any(|&x| i.is_isolated(x) && cluster_face[cluster[x]].is_some_and(|g| g != f)) {
                continue;
            }
            let side = |x: VertexId| -> Vec<Option<usize>> {
                if i.is_isolated(x) || faces.is_empty() {
                    vec![None]
                } else {
                    occurrences[x][&f].iter().map(|&p| Some(p)).collect()
                }
            };
            let (a, b) = (side(e.u), side(e.v));
            for &x in &a {
                for &y in &b {
                    out.push(Choice { face: f, corners: [x, y] });
                }
            }
        }
        out
    };

    let window_ok = |k: usize, edge_face: &[usize], corners: &[[Option<usize>; 2]]| -> bool {
        let t = stream[k].position;
        let f = edge_face[k];
        let mut content = Vec::new();
        for j in (0..=k).rev() {
            if t - stream[j].position >= omega {
                break;
            }
            if edge_face[j] != f {
                continue;
            }
            let e = &stream[j];
            let node = |x: VertexId, c: Option<usize>| match c {
                Some(p) => DiskNode::Boundary(p),
                None => DiskNode::Inner(x),
            };
            content.push((node(e.u, corners[j][0]), node(e.v, corners[j][1])));
        }
        disk_planar(&content)
    };

    let mut k = 0usize;
    if m > 0 {
        options[0] = build_options(0, &cluster_face);
    }
    loop {
        if k == m {
            break;
        }
        // undo the previous choice at this level
        for c in set_by[k].drain(..) {
            cluster_face[c] = None;
        }
        if next[k] < options[k].len() {
            budget.tick()?;
            let choice = &options[k][next[k]];
            next[k] += 1;
            edge_face[k] = choice.face;
            corners[k] = choice.corners;
            for x in stream[k].ends() {
                if i.is_isolated(x) && cluster_face[cluster[x]].is_none() {
                    cluster_face[cluster[x]] = Some(choice.face);
                    set_by[k].push(cluster[x]);
                }
            }
            if window_ok(k, &edge_face, &corners) {
                k += 1;
                if k < m {
                    next[k] = 0;
                    options[k] = build_options(k, &cluster_face);
                }
            }
        } else if k == 0 {
            return Ok(None);
        } else {
            k -= 1;
        }
    }

    Ok(Some(DrawingCertificate {
        rotation: rotation.clone(),
        stream_faces: stream.iter().zip(&edge_face).map(|(e, &f)| (e.position, f)).collect(),
        vertex_faces: i
            .backbone()
            .isolated_vertices()
            .into_iter()
            .map(|q| (i.label(q).to_owned(), cluster_face[cluster[q]].unwrap_or(0)))
            .collect(),
    }))
}
