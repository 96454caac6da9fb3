use super::assign::{isolated_clusters, search_assignment, Budget};
use super::{Decision, Limits, Rule, SolveError};
use crate::certify::core_vertices;
use crate::graph::{canonical_faces, enumerate_planar_rotations, RotationSystem};
use crate::instance::{Category, StreamedInstance};

/// Decides a star instance: one 2-connected block plus isolated vertices, no
/// stream edge between two isolated vertices (an edgeless backbone is also
/// accepted). Works for every window size.
///
/// Planar rotations of the block are tried in enumeration order; for each,
/// faces are searched edge by edge in stream order with incremental window
/// checks. The first accepted certificate is returned.
pub fn solve_star(i: &StreamedInstance, limits: Limits) -> Result<Decision, SolveError> {
    let shape = i.shape();
    if !matches!(shape.category, Category::Star | Category::AllIsolated) {
        return Err(SolveError::WrongCategory(format!("{:?} instance is not a star", shape.category)));
    }
    let found = first_certificate(i, limits)?;
    Ok(match found {
        Some(c) => Decision::yes(c, vec![Rule::Star]),
        None => Decision::no(vec![Rule::Star]),
    })
}

/// Tries every planar rotation of the core in enumeration order.
pub(crate) fn first_certificate(
    i: &StreamedInstance,
    limits: Limits,
) -> Result<Option<crate::certify::DrawingCertificate>, SolveError> {
    let core = core_vertices(i)?;
    let cluster = isolated_clusters(i);
    let mut budget = Budget::new(limits.budget);
    if core.is_empty() {
        let r = RotationSystem::empty();
        return search_assignment(i, &core, &r, &canonical_faces(&r), &cluster, &mut budget);
    }
    let (g, _) = i.backbone().induced(&core);
    for r in enumerate_planar_rotations(&g, limits.budget)? {
        let faces = canonical_faces(&r);
        if let Some(c) = search_assignment(i, &core, &r, &faces, &cluster, &mut budget)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::check_certificate;
    use crate::instance::samples;

    #[test]
    fn c6_long_chords() {
        let l = Limits::default();
        assert!(!solve_star(&samples::c6_chords(3), l).unwrap().answer);
        let yes = solve_star(&samples::c6_chords(2), l).unwrap();
        let c = yes.certificate().unwrap();
        assert_eq!(c.stream_faces.values().copied().collect::<Vec<_>>(), vec![0, 1, 0]);
    }

    #[test]
    fn empty_stream_is_yes() {
        for w in 1..4 {
            let i = samples::c4(&[], w);
            let d = solve_star(&i, Limits::default()).unwrap();
            assert!(d.answer);
            assert!(check_certificate(&i, d.certificate().unwrap()).unwrap().is_accept());
        }
    }

    #[test]
    fn k4_hub_with_four_spokes_is_no() {
        let v = ["a", "b", "c", "d", "q"];
        let e = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")];
        let s = [("a", "q"), ("b", "q"), ("c", "q"), ("d", "q")];
        let i = StreamedInstance::new(&v, &e, &s, 1).unwrap();
        assert!(!solve_star(&i, Limits::default()).unwrap().answer);
        let three = StreamedInstance::new(&v, &e, &s[..3], 1).unwrap();
        let d = solve_star(&three, Limits::default()).unwrap();
        assert!(check_certificate(&three, d.certificate().unwrap()).unwrap().is_accept());
    }

    #[test]
    fn rejects_non_star_shapes() {
        let i = StreamedInstance::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")], &[], 1).unwrap();
        assert!(matches!(solve_star(&i, Limits::default()), Err(SolveError::WrongCategory(_))));
    }

    #[test]
    fn edgeless_backbone_checks_alive_planarity() {
        let v = ["a", "b", "c", "d", "e"];
        let mut s = Vec::new();
        for x in 0..5 {
            for y in x + 1..5 {
                s.push((v[x], v[y]));
            }
        }
        let k5 = StreamedInstance::new(&v, &[], &s, 10).unwrap();
        assert!(!solve_star(&k5, Limits::default()).unwrap().answer);
        assert!(solve_star(&k5.with_omega(9), Limits::default()).unwrap().answer);
    }
}
