use std::collections::BTreeSet;

use super::assign::{isolated_clusters, search_assignment, Budget};
use super::{Decision, Limits, Rule, SolveError};
use crate::certify::{core_vertices, DrawingCertificate};
use crate::graph::{canonical_faces, enumerate_planar_rotations, Graph, RotationSystem, VertexId};
use crate::instance::{Category, StreamedInstance};

/// Complete search for any instance whose backbone has at most one
/// non-trivial component.
///
/// Tree backbones are searched rotation by rotation while building each
/// vertex's cyclic order one neighbor at a time; a branch is cut as soon as two
/// coexisting leaf-to-leaf stream edges are forced to interleave. Other
/// backbones enumerate their planar rotations. Either way every surviving
/// rotation goes through the face-assignment search.
pub fn exhaustive(i: &StreamedInstance, limits: Limits) -> Result<Decision, SolveError> {
    let shape = i.shape();
    let np_hard = i.omega() >= 2 && !matches!(shape.category, Category::Star | Category::AllIsolated);
    let trace = vec![Rule::Exhaustive { np_hard }];
    Ok(match search(i, limits)? {
        Some(c) => Decision::yes(c, trace),
        None => Decision::no(trace),
    })
}

pub(crate) fn search(i: &StreamedInstance, limits: Limits) -> Result<Option<DrawingCertificate>, SolveError> {
    let core = core_vertices(i)?;
    let cluster = isolated_clusters(i);
    let mut budget = Budget::new(limits.budget);
    if core.is_empty() {
        let r = RotationSystem::empty();
        return search_assignment(i, &core, &r, &canonical_faces(&r), &cluster, &mut budget);
    }
    let (g, _) = i.backbone().induced(&core);
    if g.edge_count() + 1 == g.vertex_count() {
        return TreeSearch::new(i, &core, &g).run(i, &core, &cluster, &mut budget);
    }
    for r in enumerate_planar_rotations(&g, limits.budget)? {
        let faces = canonical_faces(&r);
        if let Some(c) = search_assignment(i, &core, &r, &faces, &cluster, &mut budget)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Two coexisting stream edges `(a, b)` and `(c, d)` between four distinct
/// leaves of the tree. Their interleaving depends only on the cyclic orders at
/// the branch vertices of the subtree spanning the four leaves.
struct Quartet {
    chords: [(VertexId, VertexId); 2],
    /// Spanning subtree adjacency restricted to its vertices: (vertex, neighbors).
    span: Vec<(VertexId, Vec<VertexId>)>,
}

impl Quartet {
    /// Cyclic order of the four leaves in the facial walk of the spanning
    /// subtree, under the (partial) rotations in `orders`.
    fn alternates(&self, orders: &[Vec<VertexId>]) -> bool {
        let nbrs = |x: VertexId| -> &[VertexId] {
            &self.span[self.span.binary_search_by_key(&x, |(v, _)| *v).unwrap()].1
        };
        let succ = |y: VertexId, from: VertexId| -> VertexId {
            let ns = nbrs(y);
            if ns.len() == 1 {
                return ns[0];
            }
            if ns.len() == 2 {
                return if ns[0] == from { ns[1] } else { ns[0] };
            }
            let restricted: Vec<VertexId> =
                orders[y].iter().copied().filter(|w| ns.contains(w)).collect();
            let p = restricted.iter().position(|&w| w == from).unwrap();
            restricted[(p + 1) % restricted.len()]
        };
        let start = self.chords[0].0;
        let mut leaves = vec![start];
        let (mut x, mut y) = (start, nbrs(start)[0]);
        loop {
            if nbrs(y).len() == 1 {
                if y == start {
                    break;
                }
                leaves.push(y);
            }
            let z = succ(y, x);
            x = y;
            y = z;
        }
        let pos = |v: VertexId| leaves.iter().position(|&l| l == v).unwrap();
        let (a, b) = (pos(self.chords[0].0), pos(self.chords[0].1));
        let (lo, hi) = (a.min(b), a.max(b));
        let inside = |v: VertexId| (lo < pos(v) && pos(v) < hi) as u8;
        inside(self.chords[1].0) + inside(self.chords[1].1) == 1
    }
}

struct TreeSearch {
    /// Sorted neighbors of every tree vertex (local ids).
    neighbors: Vec<Vec<VertexId>>,
    /// Neighbors whose position is searched, in insertion order.
    active: Vec<Vec<VertexId>>,
    /// Leaf pairs appended consecutively after the searched neighbors.
    cherries: Vec<Vec<(VertexId, VertexId)>>,
    /// Insertion steps: (vertex, index into `active` of the neighbor being inserted).
    steps: Vec<(VertexId, usize)>,
    /// Quartets to check right after each step.
    checks: Vec<Vec<Quartet>>,
}

impl TreeSearch {
    fn new(i: &StreamedInstance, core: &[VertexId], g: &Graph) -> Self {
        let k = g.vertex_count();
        let neighbors: Vec<Vec<VertexId>> = (0..k).map(|v| g.neighbors(v).to_vec()).collect();
        let mut local = vec![usize::MAX; i.vertex_count()];
        for (l, &v) in core.iter().enumerate() {
            local[v] = l;
        }
        let is_leaf = |x: usize| x != usize::MAX && neighbors[x].len() == 1;
        let leaf_chord = |e: &crate::instance::StreamEdge| -> Option<(VertexId, VertexId)> {
            let (a, b) = (local[e.u], local[e.v]);
            (is_leaf(a) && is_leaf(b)).then_some((a.min(b), a.max(b)))
        };

        // When every stream edge joins two leaves, a drawing exists iff no two
        // coexisting chords interleave. Then a chord between two leaves of the
        // same vertex that carry nothing else can always be drawn by keeping
        // the two leaves adjacent, and only vertices branching some quartet
        // need their rotation searched.
        let pure = i.stream().iter().all(|e| leaf_chord(e).is_some());
        let mut cherries: Vec<Vec<(VertexId, VertexId)>> = vec![Vec::new(); k];
        let mut in_cherry = vec![false; k];
        if pure {
            let mut chords_at: Vec<BTreeSet<(VertexId, VertexId)>> = vec![BTreeSet::new(); k];
            for e in i.stream() {
                let c = leaf_chord(e).unwrap();
                chords_at[c.0].insert(c);
                chords_at[c.1].insert(c);
            }
            let mut seen = BTreeSet::new();
            for e in i.stream() {
                let (a, b) = leaf_chord(e).unwrap();
                let centre = neighbors[a][0];
                if neighbors[b][0] == centre
                    && chords_at[a].len() == 1
                    && chords_at[b].len() == 1
                    && seen.insert((a, b))
                {
                    cherries[centre].push((a, b));
                    in_cherry[a] = true;
                    in_cherry[b] = true;
                }
            }
        }
        let active: Vec<Vec<VertexId>> =
            neighbors.iter().map(|ns| ns.iter().copied().filter(|&w| !in_cherry[w]).collect()).collect();

        // rooted tree for path queries
        let mut parent = vec![usize::MAX; k];
        let mut depth = vec![0usize; k];
        let mut stack = vec![0usize];
        let mut seen = vec![false; k];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &neighbors[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
        let path_edges = |mut a: VertexId, mut b: VertexId, out: &mut BTreeSet<(VertexId, VertexId)>| {
            while a != b {
                if depth[a] >= depth[b] {
                    out.insert((a.min(parent[a]), a.max(parent[a])));
                    a = parent[a];
                } else {
                    out.insert((b.min(parent[b]), b.max(parent[b])));
                    b = parent[b];
                }
            }
        };

        let mut quartets: Vec<Quartet> = Vec::new();
        let mut done = BTreeSet::new();
        for (p, q) in i.conflict_pairs() {
            let (Some(x), Some(y)) = (i.edge_at(p).and_then(leaf_chord), i.edge_at(q).and_then(leaf_chord))
            else {
                continue;
            };
            let ends = [x.0, x.1, y.0, y.1];
            if ends.iter().collect::<BTreeSet<_>>().len() < 4 || ends.iter().any(|&e| in_cherry[e]) {
                continue;
            }
            let mut key = [x, y];
            key.sort();
            if !done.insert(key) {
                continue;
            }
            let mut edges = BTreeSet::new();
            for &e in &ends[1..] {
                path_edges(ends[0], e, &mut edges);
            }
            let mut adj: std::collections::BTreeMap<VertexId, Vec<VertexId>> = Default::default();
            for &(a, b) in &edges {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
            quartets.push(Quartet { chords: [x, y], span: adj.into_iter().collect() });
        }

        // vertices branching some quartet are searched first
        let mut branching = vec![false; k];
        for q in &quartets {
            for (v, ns) in &q.span {
                if ns.len() >= 3 {
                    branching[*v] = true;
                }
            }
        }
        let mut order: Vec<VertexId> =
            (0..k).filter(|&v| active[v].len() >= 3 && (branching[v] || !pure)).collect();
        order.sort_by_key(|&v| (!branching[v], active[v].len(), v));
        let mut steps = Vec::new();
        let mut step_of = vec![Vec::new(); k];
        for &v in &order {
            step_of[v] = vec![usize::MAX; active[v].len()];
            for j in 2..active[v].len() {
                step_of[v][j] = steps.len();
                steps.push((v, j));
            }
        }
        let mut checks: Vec<Vec<Quartet>> = (0..steps.len()).map(|_| Vec::new()).collect();
        for q in quartets {
            let trigger = q
                .span
                .iter()
                .filter(|(_, ns)| ns.len() >= 3)
                .map(|(v, ns)| {
                    let last = ns.iter().map(|w| active[*v].binary_search(w).unwrap()).max().unwrap();
                    step_of[*v][last]
                })
                .max()
                .expect("four leaves span a branch vertex");
            checks[trigger].push(q);
        }
        TreeSearch { neighbors, active, cherries, steps, checks }
    }

    fn full_orders(&self, orders: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
        orders
            .iter()
            .zip(&self.cherries)
            .map(|(o, ch)| {
                let mut o = o.clone();
                for &(a, b) in ch {
                    o.push(a);
                    o.push(b);
                }
                o
            })
            .collect()
    }

    fn run(
        &self,
        i: &StreamedInstance,
        core: &[VertexId],
        cluster: &[usize],
        budget: &mut Budget,
    ) -> Result<Option<DrawingCertificate>, SolveError> {
        let labels: Vec<String> = core.iter().map(|&v| i.label(v).to_owned()).collect();
        let tree = Graph::from_indexed(
            labels,
            &(0..self.neighbors.len())
                .flat_map(|v| self.neighbors[v].iter().filter(move |&&w| v < w).map(move |&w| (v, w)))
                .collect::<Vec<_>>(),
        )?;
        let searched: BTreeSet<VertexId> = self.steps.iter().map(|&(v, _)| v).collect();
        let mut orders: Vec<Vec<VertexId>> = self
            .active
            .iter()
            .enumerate()
            .map(|(v, ns)| if searched.contains(&v) { ns.iter().take(2).copied().collect() } else { ns.clone() })
            .collect();
        let s = self.steps.len();
        let mut next = vec![1usize; s + 1];
        let mut inserted_at = vec![usize::MAX; s];
        let mut level = 0usize;
        loop {
            if level == s {
                budget.tick()?;
                let r = RotationSystem::for_graph(&tree, self.full_orders(&orders))?;
                let faces = canonical_faces(&r);
                if let Some(c) = search_assignment(i, core, &r, &faces, cluster, budget)? {
                    return Ok(Some(c));
                }
                if s == 0 {
                    return Ok(None);
                }
                level -= 1;
                continue;
            }
            let (v, j) = self.steps[level];
            if inserted_at[level] != usize::MAX {
                orders[v].remove(inserted_at[level]);
                inserted_at[level] = usize::MAX;
            }
            if next[level] <= j {
                budget.tick()?;
                let g = next[level];
                next[level] += 1;
                orders[v].insert(g, self.active[v][j]);
                inserted_at[level] = g;
                if self.checks[level].iter().all(|q| !q.alternates(&orders)) {
                    level += 1;
                    if level < s {
                        next[level] = 1;
                    }
                }
            } else if level == 0 {
                return Ok(None);
            } else {
                next[level] = 1;
                level -= 1;
            }
        }
    }
}
