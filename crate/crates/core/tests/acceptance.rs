//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. Heavy loops are spread over all
//! cores with scoped threads.

use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use streamed_planarity::graph::{blocks, canonical_faces, planarity_check};
use streamed_planarity::{
    brute_oracle, check_certificate, decide, random_instance, random_tree_instance, sefe_brute_check, star_to_sefe,
    theorem1_generate, Category, CheckReport, Decision, DrawingCertificate, Limits, Mode, Rule, SefeGraph,
    SefeInstance, SolveError, StreamedInstance, Witness,
};

type Outcome = Result<String, String>;

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let next = AtomicUsize::new(0);
    let mut results: Vec<(usize, R)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        if k >= items.len() {
                            break out;
                        }
                        out.push((k, f(&items[k])));
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    results.sort_by_key(|(k, _)| *k);
    results.into_iter().map(|(_, r)| r).collect()
}

const LIMITS: Limits = Limits { budget: streamed_planarity::DEFAULT_BUDGET };

fn build(n: usize, backbone: &[(usize, usize)], stream: &[(usize, usize)], omega: usize) -> StreamedInstance {
    let labels: Vec<String> = (0..n).map(|k| ((b'a' + k as u8) as char).to_string()).collect();
    let l = |&(a, b): &(usize, usize)| (labels[a].as_str(), labels[b].as_str());
    let s: Vec<_> = backbone.iter().map(l).collect();
    let e: Vec<_> = stream.iter().map(l).collect();
    StreamedInstance::new(&labels, &s, &e, omega).expect("valid instance")
}

/// Every ordered sequence of at most `max` distinct pairs.
fn sequences(pairs: &[(usize, usize)], max: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for seq in &frontier {
            for p in pairs {
                if !seq.contains(p) {
                    let mut s: Vec<(usize, usize)> = seq.clone();
                    s.push(*p);
                    next.push(s);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn cycle(k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|v| (v.min((v + 1) % k), v.max((v + 1) % k))).collect()
}

/// Backbones of the exhaustive family: (vertex count, edges).
fn exhaustive_family() -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out: Vec<(usize, Vec<(usize, usize)>)> = (3..=6).map(|k| (k, cycle(k))).collect();
    let k4 = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    out.push((4, k4.clone()));
    out.push((5, k4));
    let trees: [(usize, &[(usize, usize)]); 8] = [
        (1, &[]),
        (2, &[(0, 1)]),
        (3, &[(0, 1), (1, 2)]),
        (4, &[(0, 1), (1, 2), (2, 3)]),
        (4, &[(0, 1), (0, 2), (0, 3)]),
        (5, &[(0, 1), (1, 2), (2, 3), (3, 4)]),
        (5, &[(0, 1), (0, 2), (0, 3), (0, 4)]),
        (5, &[(0, 1), (0, 2), (0, 3), (3, 4)]),
    ];
    for (n, edges) in trees {
        for isolated in 0..=2 {
            out.push((n + isolated, edges.to_vec()));
        }
    }
    out
}

fn non_backbone_pairs(n: usize, backbone: &[(usize, usize)]) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|p| !backbone.contains(p)).collect()
}

fn single(d: &Decision) -> Option<&DrawingCertificate> {
    match &d.witness {
        Some(Witness::Single(c)) => Some(c),
        _ => None,
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    mismatches: Vec<String>,
    certificates: usize,
    perturbations: usize,
    perturbation_failures: Vec<String>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.mismatches.extend(other.mismatches);
        self.certificates += other.certificates;
        self.perturbations += other.perturbations;
        self.perturbation_failures.extend(other.perturbation_failures);
        self
    }
}

/// Certificate round-trip: the certificate is accepted, and moving any single
/// assignment entry to a face its element cannot lie in is rejected.
fn round_trip(i: &StreamedInstance, c: &DrawingCertificate, t: &mut Tally) {
    t.certificates += 1;
    match check_certificate(i, c) {
        Ok(CheckReport::Accept) => {}
        other => {
            t.perturbation_failures.push(format!("{}: own certificate not accepted: {other:?}", i.to_json()));
            return;
        }
    }
    let faces = canonical_faces(&c.rotation);
    let labels = c.rotation.labels();
    let on_face = |label: &str, f: usize| faces.walk(f).iter().any(|&v| labels[v] == label);
    let core = |label: &str| labels.iter().any(|l| l == label);
    for (&p, &f) in &c.stream_faces {
        let (u, v) = i.edge_label(i.edge_at(p).unwrap());
        for g in 0..faces.len() {
            let incident = [&u, &v].iter().all(|x| !core(x) || on_face(x, g));
            if g != f && !incident {
                let mut bad = c.clone();
                bad.stream_faces.insert(p, g);
                perturbed(i, &bad, t, &format!("stream:{p} -> {g}"));
            }
        }
    }
    for (x, &f) in &c.vertex_faces {
        let xi = i.index_of(x).unwrap();
        if !i.stream().iter().any(|e| e.touches(xi)) {
            continue;
        }
        for g in (0..faces.len()).filter(|&g| g != f) {
            let mut bad = c.clone();
            bad.vertex_faces.insert(x.clone(), g);
            perturbed(i, &bad, t, &format!("vertex:{x} -> {g}"));
        }
    }
}

fn perturbed(i: &StreamedInstance, bad: &DrawingCertificate, t: &mut Tally, what: &str) {
    t.perturbations += 1;
    if !matches!(check_certificate(i, bad), Ok(CheckReport::Reject(_))) {
        t.perturbation_failures.push(format!("{what} accepted on {}", i.to_json()));
    }
}

fn criterion_1_and_6_corpus() -> (Tally, Duration) {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for (n, backbone) in exhaustive_family() {
        for stream in sequences(&non_backbone_pairs(n, &backbone), 4) {
            for omega in 1..=3 {
                jobs.push((n, backbone.clone(), stream.clone(), omega));
            }
        }
    }
    let tallies = par_map(&jobs, |(n, backbone, stream, omega)| {
        let mut t = Tally::default();
        let i = build(*n, backbone, stream, *omega);
        let d = decide(&i, Mode::Auto, LIMITS);
        let o = brute_oracle(&i, LIMITS);
        match (&d, &o) {
            (Ok(d), Ok(o)) if d.answer == *o => {
                t.checked += 1;
                if let Some(c) = single(d) {
                    round_trip(&i, c, &mut t);
                }
            }
            _ => t.mismatches.push(format!("{} decide={:?} oracle={o:?}", i.to_json(), d.map(|d| d.answer))),
        }
        t
    });
    (tallies.into_iter().fold(Tally::default(), Tally::merge), start.elapsed())
}

fn criterion_1(t: &Tally, elapsed: Duration) -> Outcome {
    let detail = format!("{} instances agree with the oracle in {:.1}s", t.checked, elapsed.as_secs_f64());
    if !t.mismatches.is_empty() {
        return Err(format!("{} mismatches, first: {}", t.mismatches.len(), t.mismatches[0]));
    }
    if elapsed > Duration::from_secs(300) {
        return Err(format!("too slow: {detail}"));
    }
    Ok(detail)
}

/// Random star instance: a 2-connected planar block on 3..=6 vertices, up
/// to two isolated vertices, up to five stream edges with no edge between
/// two isolated vertices.
fn random_star(rng: &mut ChaCha8Rng) -> StreamedInstance {
    loop {
        let k = rng.gen_range(3..=6);
        let mut edges: Vec<(usize, usize)> = cycle(k);
        // random chords of a triangulated polygon keep the block planar
        let mut chords: Vec<(usize, usize)> = (2..k - 1).map(|j| (0, j)).collect();
        if rng.gen_bool(0.5) {
            chords = (1..k - 2).map(|j| (j, k - 1)).collect();
        }
        for c in chords {
            if rng.gen_bool(0.5) {
                edges.push(c);
            }
        }
        let n = k + rng.gen_range(0..=2);
        let pairs: Vec<(usize, usize)> =
            non_backbone_pairs(n, &edges).into_iter().filter(|&(a, b)| a < k || b < k).collect();
        let m = rng.gen_range(2..=5).min(pairs.len());
        let stream: Vec<(usize, usize)> = pairs.choose_multiple(rng, m).copied().collect();
        let i = build(n, &edges, &stream, [1, 2, 3, 3][rng.gen_range(0..4)]);
        if i.shape().category == Category::Star {
            return i;
        }
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let instances: Vec<StreamedInstance> = (0..500).map(|_| random_star(&mut rng)).collect();
    let results = par_map(&instances, |i| {
        let o = brute_oracle(i, LIMITS).map_err(|e| e.to_string())?;
        let s = sefe_brute_check(&star_to_sefe(i).map_err(|e| e.to_string())?, LIMITS.budget)
            .map_err(|e| e.to_string())?;
        if o == s {
            Ok(o)
        } else {
            Err(format!("oracle={o} sefe={s} on {}", i.to_json()))
        }
    });
    let yes = results.iter().filter(|r| matches!(r, Ok(true))).count();
    if let Some(Err(e)) = results.iter().find(|r| r.is_err()) {
        return Err(e.clone());
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        return Err(format!("too slow: {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(format!("500 star instances agree ({yes} yes, {} no) in {:.1}s", 500 - yes, elapsed.as_secs_f64()))
}

fn sefe(n: usize, tree: &[(usize, usize)], graphs: [Vec<(usize, usize)>; 3]) -> SefeInstance {
    let label = |v: usize| format!("t{v}");
    SefeInstance {
        vertices: (0..n).map(label).collect(),
        common_edges: tree.iter().map(|&(a, b)| [label(a), label(b)]).collect(),
        graphs: graphs
            .into_iter()
            .map(|g| SefeGraph { exclusive_edges: g.into_iter().map(|(a, b)| [label(a), label(b)]).collect() })
            .collect(),
    }
}

fn theorem1_family() -> Vec<SefeInstance> {
    let star4 = [(0, 1), (0, 2), (0, 3), (0, 4)];
    // two centres 0 and 1, leaves 2, 3 on 0 and 4, 5 on 1
    let double = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)];
    let mut out = vec![
        sefe(5, &star4, [vec![(1, 2), (3, 4)], vec![(1, 3), (2, 4)], vec![(1, 4), (2, 3)]]),
        sefe(5, &star4, [vec![(1, 2), (3, 4)], vec![(1, 3), (2, 4)], vec![]]),
        sefe(5, &star4, [vec![(1, 2)], vec![(3, 4)], vec![(1, 3)]]),
        sefe(5, &star4, [vec![], vec![], vec![]]),
        sefe(5, &star4, [vec![(1, 3), (2, 4)], vec![], vec![]]),
        sefe(6, &double, [vec![(2, 4), (3, 5)], vec![(2, 5), (3, 4)], vec![]]),
        sefe(6, &double, [vec![(2, 4), (3, 5)], vec![(2, 3), (4, 5)], vec![(2, 5), (3, 4)]]),
        sefe(6, &double, [vec![(2, 3), (4, 5)], vec![(2, 4)], vec![(3, 5)]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    while out.len() < 30 {
        let n = rng.gen_range(5..=8);
        let tree: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        let mut degree = vec![0; n];
        for &(a, b) in &tree {
            degree[a] += 1;
            degree[b] += 1;
        }
        let leaves: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        if leaves.len() < 4 || leaves.len() == n - 1 && n == 5 {
            continue;
        }
        let graphs = [(); 3].map(|_| {
            let mut l = leaves.clone();
            l.shuffle(&mut rng);
            let size = rng.gen_range(0..=(l.len() / 2).min(3));
            (0..size).map(|k| (l[2 * k].min(l[2 * k + 1]), l[2 * k].max(l[2 * k + 1]))).collect::<Vec<_>>()
        });
        let mut seen = std::collections::BTreeSet::new();
        if graphs.iter().flatten().all(|e| seen.insert(*e)) {
            out.push(sefe(n, &tree, graphs));
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let family = theorem1_family();
    let results = par_map(&family, |s| {
        let expected = sefe_brute_check(s, LIMITS.budget).map_err(|e| e.to_string())?;
        let (i, _) = theorem1_generate(s, 2).map_err(|e| e.to_string())?;
        let got = decide(&i, Mode::Auto, LIMITS).map_err(|e| e.to_string())?.answer;
        if got == expected {
            Ok(expected)
        } else {
            Err(format!("decide={got} sefe={expected} on {}", s.to_json()))
        }
    });
    if let Some(Err(e)) = results.iter().find(|r| r.is_err()) {
        return Err(e.clone());
    }
    let yes = results.iter().filter(|r| matches!(r, Ok(true))).count();
    let no = family.len() - yes;
    if yes == 0 || no == 0 {
        return Err(format!("family lacks positive or negative cases ({yes} yes, {no} no)"));
    }
    Ok(format!("{} SEFE instances agree ({yes} positive, {no} negative)", family.len()))
}

fn criterion_4() -> Outcome {
    let c6 = |omega| build(6, &cycle(6), &[(0, 3), (1, 4), (2, 5)], omega);
    let octahedron = build(
        6,
        &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (3, 4), (4, 5), (2, 5)],
        &[(0, 1)],
        1,
    );
    let hub = build(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], &[(0, 4), (1, 4), (2, 4), (3, 4)], 1);
    let cases = [
        ("C6 chords, omega=3", c6(3), false),
        ("C6 chords, omega=2", c6(2), true),
        ("octahedron antipodal", octahedron, false),
        ("K4 hub", hub, false),
    ];
    for (name, i, expected) in &cases {
        let got = decide(i, Mode::Auto, LIMITS).map_err(|e| format!("{name}: {e}"))?.answer;
        if got != *expected {
            return Err(format!("{name}: expected {expected}, got {got}"));
        }
    }
    Ok("C6 ω=3 NO, C6 ω=2 YES, octahedron NO, K4 hub NO".into())
}

fn criterion_5_corpus() -> (Result<(usize, usize), String>, Tally) {
    let mut jobs = Vec::new();
    let mut seed = 0u64;
    while jobs.len() < 1400 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, m) = (rng.gen_range(4..=6), rng.gen_range(1..=5));
        if let Ok(i) = random_instance(n, m, 1, seed) {
            jobs.push(i);
        }
        seed += 1;
    }
    let results = par_map(&jobs, |i| {
        let mut t = Tally::default();
        let m = i.stream().len();
        let mut answers = Vec::new();
        for omega in 1..=m + 1 {
            let j = i.with_omega(omega);
            match decide(&j, Mode::Auto, LIMITS) {
                Ok(d) => {
                    if let Some(c) = single(&d) {
                        round_trip(&j, c, &mut t);
                    }
                    answers.push(d.answer);
                }
                Err(SolveError::Unsupported(_)) => return (None, t),
                Err(e) => return (Some(Err(format!("{e} on {}", j.to_json()))), t),
            }
        }
        if answers.windows(2).any(|w| w[1] && !w[0]) {
            return (Some(Err(format!("monotonicity violated {answers:?} on {}", i.to_json()))), t);
        }
        let planar = planarity_check(&i.union_graph());
        if answers[m - 1..].iter().any(|&a| a != planar) {
            return (Some(Err(format!("saturation violated {answers:?} planar={planar} on {}", i.to_json()))), t);
        }
        (Some(Ok(answers[0])), t)
    });
    let mut tally = Tally::default();
    let mut valid = 0;
    let mut yes = 0;
    for (r, t) in results {
        tally = tally.merge(t);
        match r {
            Some(Ok(a)) if valid < 1000 => {
                valid += 1;
                yes += a as usize;
            }
            Some(Err(e)) => return (Err(e), tally),
            _ => {}
        }
    }
    if valid < 1000 {
        return (Err(format!("only {valid} supported instances generated")), tally);
    }
    (Ok((valid, yes)), tally)
}

fn criterion_6(t: &Tally) -> Outcome {
    if let Some(f) = t.perturbation_failures.first() {
        return Err(format!("{} violations, first: {f}", t.perturbation_failures.len()));
    }
    Ok(format!("{} certificates accepted, {} perturbations rejected", t.certificates, t.perturbations))
}

fn criterion_7() -> Outcome {
    let mut details = Vec::new();
    for (tree, isolated, seed) in [(10_000, 0, 7), (9_000, 1_000, 8)] {
        let i = random_tree_instance(tree, isolated, 5_000, 1, seed).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let d = decide(&i, Mode::Auto, LIMITS).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if !d.answer {
            return Err("tree instance at window 1 decided NO".into());
        }
        if elapsed > Duration::from_secs(10) {
            return Err(format!("took {:.1}s", elapsed.as_secs_f64()));
        }
        let mut steps = 0;
        for rule in &d.trace {
            if let Rule::R1 { parent, star, rest } | Rule::R2 { parent, star, rest } = rule {
                steps += 1;
                if !(star < parent && rest < parent) {
                    return Err(format!("measure does not decrease: {rule}"));
                }
            }
        }
        if steps + 1 < blocks(i.backbone()).block_count() {
            return Err(format!("only {steps} recursion steps for a tree"));
        }
        let Some(Witness::Composite(pieces)) = &d.witness else {
            return Err("expected a composite witness".into());
        };
        let mut sampled = 0;
        for p in pieces.iter().step_by(97) {
            sampled += 1;
            if !brute_oracle(&p.instance, LIMITS).map_err(|e| e.to_string())? {
                return Err(format!("oracle rejects piece {}", p.instance.to_json()));
            }
            if !check_certificate(&p.instance, &p.certificate).map_err(|e| e.to_string())?.is_accept() {
                return Err(format!("piece certificate rejected: {}", p.instance.to_json()));
            }
        }
        details.push(format!(
            "n={} m=5000 YES in {:.2}s ({steps} steps, {sampled} pieces cross-checked)",
            i.vertex_count(),
            elapsed.as_secs_f64()
        ));
    }
    Ok(details.join("; "))
}

fn main() -> ExitCode {
    let mut failed = false;
    let mut report = |n: usize, name: &str, outcome: Outcome| {
        match &outcome {
            Ok(d) => println!("criterion {n} ({name}): PASS - {d}"),
            Err(e) => {
                failed = true;
                println!("criterion {n} ({name}): FAIL - {e}");
            }
        }
    };
    let (corpus, elapsed) = criterion_1_and_6_corpus();
    report(1, "oracle equivalence", criterion_1(&corpus, elapsed));
    report(2, "star reduction equivalence", criterion_2());
    report(3, "tree gadget equivalence", criterion_3());
    report(4, "hard-coded witnesses", criterion_4());
    let (laws, random_tally) = criterion_5_corpus();
    report(
        5,
        "window monotonicity and saturation",
        laws.map(|(valid, yes)| format!("{valid} random instances, {yes} yes at window 1, zero violations")),
    );
    report(6, "certificate round-trip", criterion_6(&corpus.merge(random_tally)));
    report(7, "window-1 scaling", criterion_7());
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
