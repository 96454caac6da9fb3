//! Drawing certificates and their independent checker.
//!
//! A certificate fixes a planar rotation system of the backbone's non-trivial
//! component and assigns every stream edge and every isolated vertex to one of
//! its faces. It is accepted when, at every time step, the edges alive in each
//! face can be drawn inside that face without crossings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::disk::{disk_planar, DiskNode};
use crate::graph::{canonical_faces, is_planar_rotation, FaceSet, GraphError, RotationSystem, VertexId};
use crate::instance::StreamedInstance;

/// A rotation system plus a face assignment for stream edges and isolated
/// vertices. Stream edges are keyed by stream position, vertices by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrawingCertificate {
    pub rotation: RotationSystem,
    pub stream_faces: BTreeMap<usize, usize>,
    pub vertex_faces: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("face id {face} out of range for `{key}` ({faces} faces)")]
    FaceIdOutOfRange { key: String, face: usize, faces: usize },
    #[error("instance shape not supported: {0}")]
    UnsupportedShape(String),
    #[error("wrong category: {0}")]
    WrongCategory(String),
}

/// Why a well-formed certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// An assignment entry names a face that the element cannot lie in.
    Incidence { key: String, face: usize, detail: String },
    /// At time step `time`, the stream edges (by position) alive in `face`
    /// cannot be drawn inside it without crossings.
    Crossing { time: usize, face: usize, edges: Vec<usize> },
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Incidence { key, face, detail } => {
                write!(f, "{key} cannot be assigned to face {face}: {detail}")
            }
            RejectReason::Crossing { time, face, edges } => {
                let list: Vec<String> = edges.iter().map(usize::to_string).collect();
                write!(f, "time step {time}: face {face} cannot host stream edges [{}]", list.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckReport {
    Accept,
    Reject(RejectReason),
}

impl CheckReport {
    pub fn is_accept(&self) -> bool {
        matches!(self, CheckReport::Accept)
    }
}

/// Vertices of the backbone's only non-trivial component, or an error if the
/// backbone has several.
pub(crate) fn core_vertices(i: &StreamedInstance) -> Result<Vec<VertexId>, CertifyError> {
    let comps = i.nontrivial_components();
    if comps.len() > 1 {
        return Err(CertifyError::UnsupportedShape(format!(
            "backbone has {} non-trivial components; check each piece separately",
            comps.len()
        )));
    }
    Ok(comps.into_iter().next().unwrap_or_default())
}

/// The accepting certificate of an instance whose backbone has no edges:
/// everything sits in the one face of the empty embedding.
pub fn certificate_of_trivial(i: &StreamedInstance) -> Result<DrawingCertificate, CertifyError> {
    if i.backbone().edge_count() > 0 {
        return Err(CertifyError::WrongCategory("backbone has edges".into()));
    }
    Ok(DrawingCertificate {
        rotation: RotationSystem::empty(),
        stream_faces: i.stream().iter().map(|e| (e.position, 0)).collect(),
        vertex_faces: i.backbone().labels().iter().map(|l| (l.clone(), 0)).collect(),
    })
}

/// Occurrence lists of a face: for every core vertex, the walk indices where
/// it appears.
struct FaceIndex {
    occurrences: Vec<BTreeMap<VertexId, Vec<usize>>>,
}

impl FaceIndex {
    fn new(faces: &FaceSet, core_of: &[usize]) -> Self {
        let occurrences = (0..faces.len())
            .map(|f| {
                let mut map: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
                for (k, v) in faces.walk(f).into_iter().enumerate() {
                    map.entry(core_of[v]).or_default().push(k);
                }
                map
            })
            .collect();
        FaceIndex { occurrences }
    }

    fn on(&self, face: usize, v: VertexId) -> Option<&[usize]> {
        self.occurrences.get(face).and_then(|m| m.get(&v)).map(Vec::as_slice)
    }
}

/// Checks a certificate against an instance.
///
/// Structural problems (rotation does not match the backbone, is not planar,
/// assignment keys missing or unknown, face ids out of range) are errors.
/// Incidence violations and crossings yield [`CheckReport::Reject`]; crossings
/// are reported at the smallest failing time step.
pub fn check_certificate(
    i: &StreamedInstance,
    c: &DrawingCertificate,
) -> Result<CheckReport, CertifyError> {
    let core = core_vertices(i)?;
    let core_labels: Vec<&str> = core.iter().map(|&v| i.label(v)).collect();
    if c.rotation.labels().iter().map(String::as_str).ne(core_labels.iter().copied()) {
        return Err(CertifyError::Malformed(
            "rotation keys must be exactly the vertices of the backbone's non-trivial component".into(),
        ));
    }
    // rotation vertex k is core[k] (both sorted by label)
    let rotation_graph = c.rotation.underlying_graph();
    let (core_graph, _) = i.backbone().induced(&core);
    if rotation_graph.edges() != core_graph.edges() {
        return Err(CertifyError::Malformed("rotation does not describe the backbone edges".into()));
    }
    if !is_planar_rotation(&c.rotation) {
        return Err(CertifyError::Malformed("rotation is not planar".into()));
    }
    let faces = canonical_faces(&c.rotation);
    let face_count = faces.len().max(1);
    let index = FaceIndex::new(&faces, &core);

    let expected_streams: BTreeSet<usize> = i.stream().iter().map(|e| e.position).collect();
    let given_streams: BTreeSet<usize> = c.stream_faces.keys().copied().collect();
    if expected_streams != given_streams {
        return Err(CertifyError::Malformed(describe_mismatch(
            expected_streams.iter().map(|p| format!("stream:{p}")),
            given_streams.iter().map(|p| format!("stream:{p}")),
        )));
    }
    let isolated: Vec<VertexId> = i.backbone().isolated_vertices();
    let expected_vertices: BTreeSet<&str> = isolated.iter().map(|&v| i.label(v)).collect();
    let given_vertices: BTreeSet<&str> = c.vertex_faces.keys().map(String::as_str).collect();
    if expected_vertices != given_vertices {
        return Err(CertifyError::Malformed(describe_mismatch(
            expected_vertices.iter().map(|l| format!("vertex:{l}")),
            given_vertices.iter().map(|l| format!("vertex:{l}")),
        )));
    }
    for (p, &f) in &c.stream_faces {
        if f >= face_count {
            return Err(CertifyError::FaceIdOutOfRange { key: format!("stream:{p}"), face: f, faces: face_count });
        }
    }
    for (l, &f) in &c.vertex_faces {
        if f >= face_count {
            return Err(CertifyError::FaceIdOutOfRange { key: format!("vertex:{l}"), face: f, faces: face_count });
        }
    }

    // incidence
    let mut vertex_face = vec![usize::MAX; i.vertex_count()];
    for &q in &isolated {
        vertex_face[q] = c.vertex_faces[i.label(q)];
    }
    let stream = i.stream();
    let edge_face: Vec<usize> = stream.iter().map(|e| c.stream_faces[&e.position]).collect();
    for (e, &f) in stream.iter().zip(&edge_face) {
        for x in e.ends() {
            let ok = if i.is_isolated(x) {
                vertex_face[x] == f
            } else {
                faces.is_empty() || index.on(f, x).is_some()
            };
            if !ok {
                let detail = if i.is_isolated(x) {
                    format!("its endpoint `{}` is assigned to face {}", i.label(x), vertex_face[x])
                } else {
                    format!("its endpoint `{}` is not on that face", i.label(x))
                };
                return Ok(CheckReport::Reject(RejectReason::Incidence {
                    key: format!("stream:{}", e.position),
                    face: f,
                    detail,
                }));
            }
        }
    }

    // corner choices: one boundary occurrence per core endpoint, fixed for the
    // edge's whole lifetime
    let options: Vec<Vec<[Option<usize>; 2]>> = stream
        .iter()
        .zip(&edge_face)
        .map(|(e, &f)| {
            let side = |x: VertexId| -> Vec<Option<usize>> {
                match index.on(f, x) {
                    Some(occ) if !i.is_isolated(x) => occ.iter().map(|&k| Some(k)).collect(),
                    _ => vec![None],
                }
            };
            let (a, b) = (side(e.u), side(e.v));
            a.iter().flat_map(|&x| b.iter().map(move |&y| [x, y])).collect()
        })
        .collect();

    let m = stream.len();
    let omega = i.omega();
    let mut corners: Vec<[Option<usize>; 2]> = vec![[None, None]; m];
    let window_ok = |k: usize, corners: &[[Option<usize>; 2]]| -> bool {
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
            let node = |x: VertexId, corner: Option<usize>| match corner {
                Some(occ) => DiskNode::Boundary(occ),
                None => DiskNode::Inner(x),
            };
            content.push((node(e.u, corners[j][0]), node(e.v, corners[j][1])));
        }
        disk_planar(&content)
    };

    let mut next = vec![0usize; m];
    let mut k = 0;
    let mut placed = 0;
    while k < m {
        if next[k] < options[k].len() {
            corners[k] = options[k][next[k]];
            next[k] += 1;
            if window_ok(k, &corners) {
                k += 1;
                placed = placed.max(k);
                if k < m {
                    next[k] = 0;
                }
            }
        } else if k == 0 {
            break;
        } else {
            k -= 1;
        }
    }
    if k == m {
        return Ok(CheckReport::Accept);
    }
    let t = stream[placed].position;
    let f = edge_face[placed];
    let edges = i
        .alive_at(t)
        .filter(|&j| edge_face[j] == f)
        .map(|j| stream[j].position)
        .collect();
    Ok(CheckReport::Reject(RejectReason::Crossing { time: t, face: f, edges }))
}

fn describe_mismatch(
    expected: impl Iterator<Item = String>,
    given: impl Iterator<Item = String>,
) -> String {
    let expected: BTreeSet<String> = expected.collect();
    let given: BTreeSet<String> = given.collect();
    let missing: Vec<&String> = expected.difference(&given).collect();
    let extra: Vec<&String> = given.difference(&expected).collect();
    if let Some(key) = missing.first() {
        format!("assignment is missing `{key}`")
    } else {
        format!("assignment has unknown key `{}`", extra[0])
    }
}

/// On-disk certificate format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub rotation: BTreeMap<String, Vec<String>>,
    pub assignment: BTreeMap<String, usize>,
}

impl DrawingCertificate {
    pub fn to_file(&self) -> CertificateFile {
        let mut assignment = BTreeMap::new();
        for (p, f) in &self.stream_faces {
            assignment.insert(format!("stream:{p}"), *f);
        }
        for (l, f) in &self.vertex_faces {
            assignment.insert(format!("vertex:{l}"), *f);
        }
        CertificateFile { rotation: self.rotation.to_labeled(), assignment }
    }

    pub fn from_file(file: &CertificateFile) -> Result<Self, CertifyError> {
        let rotation = RotationSystem::from_labeled(&file.rotation).map_err(|e| match e {
            GraphError::BadRotation(msg) => CertifyError::Malformed(msg),
            other => CertifyError::Malformed(other.to_string()),
        })?;
        let mut stream_faces = BTreeMap::new();
        let mut vertex_faces = BTreeMap::new();
        for (key, &face) in &file.assignment {
            if let Some(p) = key.strip_prefix("stream:") {
                let p: usize = p
                    .parse()
                    .map_err(|_| CertifyError::Malformed(format!("bad stream key `{key}`")))?;
                stream_faces.insert(p, face);
            } else if let Some(l) = key.strip_prefix("vertex:") {
                vertex_faces.insert(l.to_owned(), face);
            } else {
                return Err(CertifyError::Malformed(format!("unknown assignment key `{key}`")));
            }
        }
        Ok(DrawingCertificate { rotation, stream_faces, vertex_faces })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CertifyError> {
        let file: CertificateFile =
            serde_json::from_str(text).map_err(|e| CertifyError::Malformed(e.to_string()))?;
        Self::from_file(&file)
    }
}
