//! Window-1 recursion over the block-cutvertex tree.
//!
//! While the backbone has several blocks, a leaf block β with parent
//! cutvertex `v` is split off: the star piece keeps β, collapses the rest of
//! the backbone (with every isolated cluster reaching it) into one vertex, and
//! collapses the remaining isolated clusters; the rest piece contracts β into
//! a single isolated vertex linked to `v` by a new stream edge. Both pieces
//! must be positive. With one block left, isolated clusters are contracted and
//! the star solver decides.
//!
//! [`algocon`] runs this incrementally on integer ids so every split costs
//! time proportional to the split-off block and its stream edges.
//! [`split_case_r1`] and [`split_case_r2`] build the two pieces of a single
//! step as ordinary instances, with merged vertices named by the contraction
//! rule.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::star::solve_star;
use super::{Decision, Limits, Measure, Piece, Rule, SolveError, Witness};
use crate::certify::certificate_of_trivial;
use crate::graph::{blocks, BlockCutTree, Graph, VertexId};
use crate::instance::{StreamEdge, StreamedInstance};

fn check_preconditions(i: &StreamedInstance) -> Result<(), SolveError> {
    if i.omega() != 1 {
        return Err(SolveError::UnsupportedOmega(i.omega()));
    }
    let comps = i.nontrivial_components().len();
    if comps > 1 {
        return Err(SolveError::WrongShape(format!(
            "backbone has {comps} non-trivial components; split them first"
        )));
    }
    Ok(())
}

/// Decides a window-1 instance whose backbone has at most one non-trivial
/// component and whose union graph is connected.
pub fn algocon(i: &StreamedInstance, limits: Limits) -> Result<Decision, SolveError> {
    check_preconditions(i)?;
    if !i.union_graph().is_connected() {
        return Err(SolveError::WrongShape("union graph is disconnected".into()));
    }
    let shape = i.shape();
    if shape.blocks == 0 {
        return Ok(Decision::yes(certificate_of_trivial(i)?, vec![Rule::Base1]));
    }
    if shape.blocks == 1 && shape.isolated_links == 0 {
        let mut d = solve_star(i, limits)?;
        d.trace.insert(0, Rule::Base2);
        return Ok(d);
    }
    Engine::new(i).run(limits)
}

/// Union-find with path halving.
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Makes `root` the representative of `x`'s set.
    fn attach(&mut self, x: usize, root: usize) {
        let r = self.find(x);
        if r != root {
            self.parent[r] = root;
        }
    }
}

struct Engine<'a> {
    input: &'a StreamedInstance,
    labels: Vec<String>,
    /// Alive vertex of the non-trivial component.
    in_core: Vec<bool>,
    /// Stream edges at core vertices: (neighbor as originally recorded, position).
    adj: Vec<Vec<(usize, usize)>>,
    /// Collapsed vertices point at the isolated vertex replacing them.
    merged: Dsu,
    /// Clusters of isolated vertices linked by stream edges.
    clusters: Dsu,
    cluster_size: Vec<usize>,
    /// Stream-edge incidences between a cluster (by root) and core vertices.
    core_incidences: Vec<usize>,
    isolated_links: HashSet<(usize, usize)>,
    next_position: usize,
    tree: BlockCutTree,
    parent_cut: Vec<usize>,
    parent_block: Vec<usize>,
    children: Vec<usize>,
    leaves: BTreeSet<usize>,
    remaining_blocks: usize,
    in_block: Vec<bool>,
    collapsed: usize,
}

impl<'a> Engine<'a> {
    fn new(i: &'a StreamedInstance) -> Self {
        let n = i.vertex_count();
        let labels: Vec<String> = i.backbone().labels().to_vec();
        let in_core: Vec<bool> = (0..n).map(|v| !i.is_isolated(v)).collect();
        let mut adj = vec![Vec::new(); n];
        let mut clusters = Dsu::new(n);
        let mut isolated_links = HashSet::new();
        for e in i.stream() {
            match (in_core[e.u], in_core[e.v]) {
                (false, false) => {
                    let (a, b) = (clusters.find(e.u), clusters.find(e.v));
                    if a != b {
                        clusters.parent[a.max(b)] = a.min(b);
                    }
                    isolated_links.insert((e.u, e.v));
                }
                _ => {
                    if in_core[e.u] {
                        adj[e.u].push((e.v, e.position));
                    }
                    if in_core[e.v] {
                        adj[e.v].push((e.u, e.position));
                    }
                }
            }
        }
        let mut cluster_size = vec![0usize; n];
        let mut core_incidences = vec![0usize; n];
        for v in 0..n {
            if !in_core[v] {
                let r = clusters.find(v);
                cluster_size[r] += 1;
            }
        }
        for e in i.stream() {
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                if !in_core[x] && in_core[y] {
                    let r = clusters.find(x);
                    core_incidences[r] += 1;
                }
            }
        }

        let tree = blocks(i.backbone());
        let nb = tree.block_count();
        let mut blocks_at: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (b, block) in tree.blocks().iter().enumerate() {
            for &v in &block.vertices {
                if tree.is_cutvertex(v) {
                    blocks_at[v].push(b);
                }
            }
        }
        let mut parent_cut = vec![usize::MAX; nb];
        let mut parent_block = vec![usize::MAX; n];
        let mut children = vec![0usize; nb];
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut seen = vec![false; nb];
        seen[0] = true;
        while let Some(b) = queue.pop_front() {
            for &c in tree.cutvertices_of(b) {
                if c == parent_cut[b] {
                    continue;
                }
                parent_block[c] = b;
                for &b2 in &blocks_at[c] {
                    if !seen[b2] {
                        seen[b2] = true;
                        parent_cut[b2] = c;
                        children[b] += 1;
                        queue.push_back(b2);
                    }
                }
            }
        }
        let leaves = (1..nb).filter(|&b| children[b] == 0).collect();
        let next_position = i.stream().last().map_or(1, |e| e.position + 1);
        Engine {
            input: i,
            labels,
            in_core,
            adj,
            merged: Dsu::new(n),
            clusters,
            cluster_size,
            core_incidences,
            isolated_links,
            next_position,
            tree,
            parent_cut,
            parent_block,
            children,
            leaves,
            remaining_blocks: nb,
            in_block: vec![false; n],
            collapsed: 0,
        }
    }

    fn measure(&self) -> Measure {
        (self.remaining_blocks, self.isolated_links.len())
    }

    fn run(mut self, limits: Limits) -> Result<Decision, SolveError> {
        let mut trace = Vec::new();
        let mut pieces = Vec::new();
        while self.remaining_blocks > 1 {
            let beta = *self.leaves.iter().next().expect("a non-root leaf block exists");
            let parent = self.measure();
            let (piece, d) = self.split_leaf(beta, limits)?;
            trace.push(Rule::R2 { parent, star: (1, 0), rest: self.measure() });
            trace.extend(d.trace.iter().cloned());
            if !d.answer {
                return Ok(Decision::no(trace));
            }
            pieces.push(Piece { instance: piece, certificate: d.witness_certificate() });
        }
        let parent = self.measure();
        let root: Vec<VertexId> = self.tree.blocks()[0].vertices.clone();
        let (piece, touched) = self.final_piece(&root);
        if parent.1 > 0 {
            trace.push(Rule::R1 { parent, star: (1, 0), rest: (0, parent.1 + touched) });
            trace.push(Rule::Base1);
        } else {
            trace.push(Rule::Base2);
        }
        let d = solve_star(&piece, limits)?;
        trace.extend(d.trace.iter().cloned());
        if !d.answer {
            return Ok(Decision::no(trace));
        }
        pieces.push(Piece { instance: piece, certificate: d.witness_certificate() });
        let _ = self.input;
        Ok(Decision { answer: true, witness: Some(Witness::Composite(pieces)), trace })
    }

    fn resolve(&mut self, x: usize) -> usize {
        self.merged.find(x)
    }

    fn cluster_of(&mut self, x: usize) -> usize {
        self.clusters.find(x)
    }

    fn cluster_label(&mut self, root: usize) -> String {
        if self.cluster_size[root] == 1 {
            self.labels[root].clone()
        } else {
            format!("#cluster:{}", self.labels[root])
        }
    }

    /// Splits off leaf block `beta`; returns the star piece and its decision,
    /// and turns the working instance into the rest piece.
    fn split_leaf(&mut self, beta: usize, limits: Limits) -> Result<(StreamedInstance, Decision), SolveError> {
        let v = self.parent_cut[beta];
        let block_vertices = self.tree.blocks()[beta].vertices.clone();
        let block_edges = self.tree.blocks()[beta].edges.clone();
        for &x in &block_vertices {
            self.in_block[x] = true;
        }
        let others: Vec<VertexId> = block_vertices.iter().copied().filter(|&x| x != v).collect();

        // stream edges leaving β \ {v}
        let mut internal: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut to_rest: Vec<(usize, usize)> = Vec::new(); // (b, position)
        let mut to_isolated: Vec<(usize, usize, usize)> = Vec::new(); // (b, x, position)
        let mut inc_block: BTreeMap<usize, usize> = BTreeMap::new();
        for &b in &others {
            for k in 0..self.adj[b].len() {
                let (y, p) = self.adj[b][k];
                let y = self.resolve(y);
                if self.in_core[y] && self.in_block[y] {
                    let key = (b.min(y), b.max(y));
                    let e = internal.entry(key).or_insert(p);
                    *e = (*e).min(p);
                } else if self.in_core[y] {
                    to_rest.push((b, p));
                } else {
                    let c = self.cluster_of(y);
                    *inc_block.entry(c).or_default() += 1;
                    to_isolated.push((b, y, p));
                }
            }
        }
        // stream edges at v
        let mut at_v_isolated: Vec<(usize, usize, usize)> = Vec::new(); // (x, cluster, position)
        let mut inc_v: BTreeMap<usize, usize> = BTreeMap::new();
        let mut keep_at_v: Vec<(usize, usize)> = Vec::new();
        for k in 0..self.adj[v].len() {
            let (y0, p) = self.adj[v][k];
            let y = self.resolve(y0);
            if self.in_core[y] && self.in_block[y] {
                continue; // already seen from the other endpoint
            } else if self.in_core[y] {
                keep_at_v.push((y0, p));
            } else {
                let c = self.cluster_of(y);
                *inc_v.entry(c).or_default() += 1;
                at_v_isolated.push((y, c, p));
            }
        }
        let touches_rest = |c: usize, me: &Self| {
            me.core_incidences[c] > inc_block.get(&c).copied().unwrap_or(0) + inc_v.get(&c).copied().unwrap_or(0)
        };
        let to_block_side = |c: usize, me: &Self| inc_block.contains_key(&c) || !touches_rest(c, me);

        // star piece
        let rest_label = "#rest".to_owned();
        let mut piece_edges: BTreeMap<(String, String), usize> = BTreeMap::new();
        let mut add = |a: String, b: String, p: usize| {
            let key = if a <= b { (a, b) } else { (b, a) };
            let e = piece_edges.entry(key).or_insert(p);
            *e = (*e).min(p);
        };
        let mut node_of_cluster: BTreeMap<usize, String> = BTreeMap::new();
        let mut cluster_nodes: BTreeSet<String> = BTreeSet::new();
        let involved: BTreeSet<usize> = inc_block.keys().chain(inc_v.keys()).copied().collect();
        for &c in &involved {
            let label = if touches_rest(c, self) {
                rest_label.clone()
            } else {
                let l = self.cluster_label(c);
                cluster_nodes.insert(l.clone());
                l
            };
            node_of_cluster.insert(c, label);
        }
        for (&(a, b), &p) in &internal {
            add(self.labels[a].clone(), self.labels[b].clone(), p);
        }
        for &(b, p) in &to_rest {
            add(self.labels[b].clone(), rest_label.clone(), p);
        }
        for &(b, y, p) in &to_isolated {
            let c = self.cluster_of(y);
            add(self.labels[b].clone(), node_of_cluster[&c].clone(), p);
        }
        for &(_, c, p) in &at_v_isolated {
            if to_block_side(c, self) {
                add(self.labels[v].clone(), node_of_cluster[&c].clone(), p);
            }
        }
        let link_position = self.next_position;
        add(self.labels[v].clone(), rest_label.clone(), link_position);

        let mut vertex_labels: Vec<String> = block_vertices.iter().map(|&x| self.labels[x].clone()).collect();
        vertex_labels.push(rest_label.clone());
        vertex_labels.extend(cluster_nodes.iter().cloned());
        let backbone: Vec<(String, String)> = block_edges
            .iter()
            .map(|&(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
            .collect();
        let piece = build_piece(vertex_labels, backbone, piece_edges)?;
        let d = solve_star(&piece, limits)?;

        // turn the working instance into the rest piece
        self.collapsed += 1;
        let b_new = self.merged.push();
        let c_new = self.clusters.push();
        debug_assert_eq!(b_new, c_new);
        self.labels.push(format!("#block:{}", self.collapsed));
        self.in_core.push(false);
        self.in_block.push(false);
        self.adj.push(Vec::new());
        let mut size = 1;
        let mut incidences = to_rest.len() + 1;
        for &c in &involved {
            if to_block_side(c, self) {
                size += self.cluster_size[c];
                incidences += self.core_incidences[c]
                    - inc_block.get(&c).copied().unwrap_or(0)
                    - inc_v.get(&c).copied().unwrap_or(0);
                self.clusters.attach(c, b_new);
            }
        }
        self.cluster_size.push(size);
        self.core_incidences.push(incidences);
        for &(_, y, _) in &to_isolated {
            self.isolated_links.insert((y.min(b_new), y.max(b_new)));
        }
        let mut new_adj_v = keep_at_v;
        for &(x, c, p) in &at_v_isolated {
            if to_block_side(c, self) {
                self.isolated_links.insert((x.min(b_new), x.max(b_new)));
            } else {
                new_adj_v.push((x, p));
            }
        }
        new_adj_v.push((b_new, link_position));
        self.adj[v] = new_adj_v;
        self.next_position += 1;
        for &b in &others {
            self.in_core[b] = false;
            self.merged.attach(b, b_new);
            self.adj[b] = Vec::new();
        }
        for &x in &block_vertices {
            self.in_block[x] = false;
        }
        self.leaves.remove(&beta);
        let up = self.parent_block[v];
        self.children[up] -= 1;
        if self.children[up] == 0 && up != 0 {
            self.leaves.insert(up);
        }
        self.remaining_blocks -= 1;
        Ok((piece, d))
    }

    /// The star piece of the last block: clusters contracted. Also returns the
    /// number of distinct isolated vertices adjacent to the block.
    fn final_piece(&mut self, root: &[VertexId]) -> (StreamedInstance, usize) {
        let mut piece_edges: BTreeMap<(String, String), usize> = BTreeMap::new();
        let mut add = |a: String, b: String, p: usize| {
            let key = if a <= b { (a, b) } else { (b, a) };
            let e = piece_edges.entry(key).or_insert(p);
            *e = (*e).min(p);
        };
        let mut nodes: BTreeSet<String> = BTreeSet::new();
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for &r in root {
            for k in 0..self.adj[r].len() {
                let (y, p) = self.adj[r][k];
                let y = self.resolve(y);
                if self.in_core[y] {
                    add(self.labels[r].clone(), self.labels[y].clone(), p);
                } else {
                    touched.insert(y);
                    let c = self.cluster_of(y);
                    let l = self.cluster_label(c);
                    nodes.insert(l.clone());
                    add(self.labels[r].clone(), l, p);
                }
            }
        }
        let block = &self.tree.blocks()[0];
        let mut vertex_labels: Vec<String> = root.iter().map(|&x| self.labels[x].clone()).collect();
        vertex_labels.extend(nodes);
        let backbone = block
            .edges
            .iter()
            .map(|&(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
            .collect();
        (build_piece(vertex_labels, backbone, piece_edges).expect("well-formed piece"), touched.len())
    }
}

impl Decision {
    fn witness_certificate(&self) -> crate::certify::DrawingCertificate {
        self.certificate().cloned().expect("star decisions carry a single certificate")
    }
}

fn build_piece(
    vertices: Vec<String>,
    backbone: Vec<(String, String)>,
    edges: BTreeMap<(String, String), usize>,
) -> Result<StreamedInstance, SolveError> {
    let mut stream: Vec<(String, String, usize)> = edges.into_iter().map(|((a, b), p)| (a, b, p)).collect();
    stream.sort_by_key(|e| e.2);
    Ok(StreamedInstance::with_positions(&vertices, &backbone, &stream, 1)?)
}

/// Leaf block chosen for the next split, with its parent cutvertex: the
/// block-cutvertex tree is rooted at the block holding the smallest edge, and
/// the smallest non-root block without children is taken.
fn leaf_block(g: &Graph) -> Option<(usize, VertexId, BlockCutTree)> {
    let tree = blocks(g);
    let nb = tree.block_count();
    if nb < 2 {
        return None;
    }
    let mut parent_cut = vec![usize::MAX; nb];
    let mut has_child = vec![false; nb];
    let mut seen = vec![false; nb];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(b) = queue.pop_front() {
        for &c in tree.cutvertices_of(b) {
            if c == parent_cut[b] {
                continue;
            }
            for b2 in tree.blocks_at(c) {
                if !seen[b2] {
                    seen[b2] = true;
                    parent_cut[b2] = c;
                    has_child[b] = true;
                    queue.push_back(b2);
                }
            }
        }
    }
    let beta = (1..nb).find(|&b| !has_child[b])?;
    Some((beta, parent_cut[beta], tree))
}

/// Contracts every class of a partition given as a list of vertex groups.
fn contract_groups(i: &StreamedInstance, groups: &[Vec<VertexId>]) -> StreamedInstance {
    let n = i.vertex_count();
    let mut class_of: Vec<usize> = (0..n).collect();
    for (k, g) in groups.iter().enumerate() {
        for &v in g {
            class_of[v] = n + k;
        }
    }
    i.contract_classes(&class_of)
}

/// Groups of vertices connected by union-graph edges whose endpoints both
/// satisfy `keep`.
fn groups_by(i: &StreamedInstance, keep: impl Fn(VertexId) -> bool) -> Vec<Vec<VertexId>> {
    let n = i.vertex_count();
    let mut dsu = Dsu::new(n);
    let all = i
        .backbone()
        .edges()
        .iter()
        .copied()
        .chain(i.stream().iter().map(|e| (e.u, e.v)));
    for (a, b) in all {
        if keep(a) && keep(b) {
            let (x, y) = (dsu.find(a), dsu.find(b));
            if x != y {
                dsu.parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for v in 0..n {
        if keep(v) {
            by_root.entry(dsu.find(v)).or_default().push(v);
        }
    }
    by_root.into_values().filter(|g| g.len() > 1).collect()
}

/// One window-1 step on an instance with a single block and stream edges
/// between isolated vertices. Returns `(star piece, rest piece)`: the star
/// piece contracts every edge between two isolated vertices; the rest piece
/// contracts the non-trivial component into one vertex.
pub fn split_case_r1(i: &StreamedInstance) -> Result<(StreamedInstance, StreamedInstance), SolveError> {
    check_preconditions(i)?;
    let shape = i.shape();
    if shape.blocks != 1 || shape.isolated_links == 0 {
        return Err(SolveError::WrongShape(
            "needs one block and a stream edge between isolated vertices".into(),
        ));
    }
    let star = contract_groups(i, &groups_by(i, |v| i.is_isolated(v)));
    let core: Vec<VertexId> = (0..i.vertex_count()).filter(|&v| !i.is_isolated(v)).collect();
    let rest = contract_groups(i, &[core]);
    Ok((star, rest))
}

/// One window-1 step on an instance with several blocks. The parent
/// cutvertex `v` of the chosen leaf block β is split into `v'` (β side) and
/// `v''` (other side); a stream edge `(v, x)` to an isolated `x` goes to `v'`
/// when `x` reaches β \ {v} along stream edges between isolated vertices,
/// otherwise to `v''` when it reaches the rest of the component that way, and
/// to `v'` if neither. The edge `(v', v'')` is appended to the stream.
/// Returns `(star piece, rest piece)`: the star piece contracts every
/// union-graph edge with both endpoints outside β, the rest piece contracts β.
pub fn split_case_r2(i: &StreamedInstance) -> Result<(StreamedInstance, StreamedInstance), SolveError> {
    check_preconditions(i)?;
    let Some((beta, v, tree)) = leaf_block(i.backbone()) else {
        return Err(SolveError::WrongShape("needs at least two blocks".into()));
    };
    let n = i.vertex_count();
    let mut in_beta = vec![false; n];
    for &x in &tree.blocks()[beta].vertices {
        in_beta[x] = true;
    }
    let v1 = format!("{}'", i.label(v));
    let v2 = format!("{}''", i.label(v));
    if i.index_of(&v1).is_some() || i.index_of(&v2).is_some() {
        return Err(SolveError::WrongShape(format!("labels `{v1}` or `{v2}` already in use")));
    }

    // which isolated vertices reach β \ {v} / the rest via isolated-only paths
    let clusters = super::assign::isolated_clusters(i);
    let mut reaches_beta = BTreeSet::new();
    let mut reaches_rest = BTreeSet::new();
    for e in i.stream() {
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            if i.is_isolated(x) && !i.is_isolated(y) && y != v {
                if in_beta[y] {
                    reaches_beta.insert(clusters[x]);
                } else {
                    reaches_rest.insert(clusters[x]);
                }
            }
        }
    }
    let name = |x: VertexId| i.label(x).to_owned();
    let side = |x: VertexId| -> String {
        if !i.is_isolated(x) {
            if in_beta[x] { v1.clone() } else { v2.clone() }
        } else if reaches_beta.contains(&clusters[x]) || !reaches_rest.contains(&clusters[x]) {
            v1.clone()
        } else {
            v2.clone()
        }
    };
    let mut vertices: Vec<String> = (0..n).filter(|&x| x != v).map(name).collect();
    vertices.push(v1.clone());
    vertices.push(v2.clone());
    let backbone: Vec<(String, String)> = i
        .backbone()
        .edges()
        .iter()
        .map(|&(a, b)| {
            if a == v {
                (side(b), name(b))
            } else if b == v {
                (name(a), side(a))
            } else {
                (name(a), name(b))
            }
        })
        .collect();
    let mut stream: Vec<(String, String, usize)> = i
        .stream()
        .iter()
        .map(|e: &StreamEdge| {
            if e.u == v {
                (side(e.v), name(e.v), e.position)
            } else if e.v == v {
                (name(e.u), side(e.u), e.position)
            } else {
                (name(e.u), name(e.v), e.position)
            }
        })
        .collect();
    let last = i.stream().last().map_or(0, |e| e.position);
    stream.push((v1.clone(), v2.clone(), last + 1));
    let star_of = StreamedInstance::with_positions(&vertices, &backbone, &stream, 1)?;

    let beta_star: Vec<VertexId> = (0..star_of.vertex_count())
        .filter(|&x| {
            let l = star_of.label(x);
            l == v1 || i.index_of(l).is_some_and(|o| in_beta[o] && o != v)
        })
        .collect();
    let mut is_beta = vec![false; star_of.vertex_count()];
    for &x in &beta_star {
        is_beta[x] = true;
    }
    let star = contract_groups(&star_of, &groups_by(&star_of, |x| !is_beta[x]));
    let rest = contract_groups(&star_of, &[beta_star]);
    Ok((star, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::check_certificate;
    use crate::solve::brute_oracle;

    fn inst(v: &[&str], s: &[(&str, &str)], e: &[(&str, &str)]) -> StreamedInstance {
        StreamedInstance::new(v, s, e, 1).unwrap()
    }

    /// Straightforward recursion over the materialized splits.
    fn reference(i: &StreamedInstance) -> bool {
        let shape = i.shape();
        if shape.blocks == 0 {
            true
        } else if shape.blocks == 1 && shape.isolated_links == 0 {
            solve_star(i, Limits::default()).unwrap().answer
        } else {
            let (a, b) = if shape.blocks == 1 {
                split_case_r1(i).unwrap()
            } else {
                split_case_r2(i).unwrap()
            };
            reference(&a) && reference(&b)
        }
    }

    fn check_all(i: &StreamedInstance, expected: bool) {
        let d = algocon(i, Limits::default()).unwrap();
        assert_eq!(d.answer, expected, "engine on {i:?}");
        assert_eq!(reference(i), expected, "reference on {i:?}");
        assert_eq!(brute_oracle(i, Limits::default()).unwrap(), expected, "oracle on {i:?}");
        if let Some(w) = &d.witness {
            match w {
                Witness::Single(c) => assert!(check_certificate(i, c).unwrap().is_accept()),
                Witness::Composite(ps) => {
                    for p in ps {
                        assert!(check_certificate(&p.instance, &p.certificate).unwrap().is_accept());
                    }
                }
            }
        }
    }

    #[test]
    fn path_with_end_chord() {
        check_all(&inst(&["a", "b", "c"], &[("a", "b"), ("b", "c")], &[("a", "c")]), true);
    }

    #[test]
    fn octahedron_antipodal_pair_is_no() {
        let v = ["n", "s", "a", "b", "c", "d"];
        let mut e = vec![("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")];
        for x in ["a", "b", "c", "d"] {
            e.push(("n", x));
            e.push(("s", x));
        }
        check_all(&inst(&v, &e, &[("n", "s")]), false);
        check_all(&inst(&v, &e, &[("a", "c")]), false);
        check_all(&inst(&v, &e, &[("a", "b")][..0]), true);
    }

    #[test]
    fn k4_hub_is_no() {
        let v = ["a", "b", "c", "d", "q"];
        let e = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")];
        check_all(&inst(&v, &e, &[("q", "a"), ("q", "b"), ("q", "c"), ("q", "d")]), false);
    }

    #[test]
    fn r1_example_pieces() {
        let i = inst(
            &["a", "b", "t", "u", "w"],
            &[("a", "b"), ("b", "t"), ("a", "t")],
            &[("a", "u"), ("u", "w"), ("w", "b")],
        );
        let (star, rest) = split_case_r1(&i).unwrap();
        assert_eq!(star.backbone().labels(), ["a", "b", "t", "u+w"]);
        let s: Vec<_> = star.stream().iter().map(|e| (star.edge_label(e), e.position)).collect();
        assert_eq!(
            s,
            vec![(("a".into(), "u+w".into()), 1), (("b".into(), "u+w".into()), 3)]
        );
        assert_eq!(rest.backbone().edge_count(), 0);
        assert_eq!(rest.vertex_count(), 3);
        assert_eq!(rest.stream().len(), 3);
        assert!(algocon(&rest, Limits::default()).unwrap().answer);
        assert_eq!(algocon(&rest, Limits::default()).unwrap().trace, vec![Rule::Base1]);
        check_all(&i, true);
    }

    #[test]
    fn r2_bowtie_pieces() {
        let v = ["a", "b", "c", "d", "v"];
        let s = [("a", "b"), ("a", "v"), ("b", "v"), ("c", "d"), ("c", "v"), ("d", "v")];
        let i = inst(&v, &s, &[]);
        let (star, rest) = split_case_r2(&i).unwrap();
        // root block holds the smallest edge (a, b); the leaf is c-d-v
        assert_eq!(star.backbone().labels(), ["a+b+v''", "c", "d", "v'"]);
        assert_eq!(star.backbone().edge_count(), 3);
        assert_eq!(star.stream().len(), 1);
        assert_eq!(rest.backbone().labels(), ["a", "b", "c+d+v'", "v''"]);
        assert_eq!(rest.stream().len(), 1);
        assert_eq!(star.shape().category, crate::instance::Category::Star);
        assert_eq!(rest.shape().category, crate::instance::Category::Star);
        check_all(&i, true);
        check_all(&inst(&v, &s, &[("a", "c")]), true);
    }

    #[test]
    fn two_k4_sharing_a_cutvertex() {
        let v = ["a", "b", "c", "x", "y", "z", "v"];
        let mut s = Vec::new();
        for group in [["a", "b", "c", "v"], ["x", "y", "z", "v"]] {
            for p in 0..4 {
                for q in p + 1..4 {
                    s.push((group[p], group[q]));
                }
            }
        }
        check_all(&inst(&v, &s, &[("a", "x")]), true);
        check_all(&inst(&v, &s, &[("a", "x"), ("b", "y"), ("c", "z")]), false);
        check_all(&inst(&v, &s, &[("a", "x"), ("b", "x")]), true);
    }

    #[test]
    fn trace_measure_decreases() {
        let v = ["a", "b", "c", "d", "e", "q", "r"];
        let s = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")];
        let i = inst(&v, &s, &[("a", "q"), ("q", "r"), ("r", "e"), ("b", "d")]);
        let d = algocon(&i, Limits::default()).unwrap();
        assert!(d.answer);
        for rule in &d.trace {
            if let Rule::R1 { parent, star, rest } | Rule::R2 { parent, star, rest } = rule {
                assert!(star < parent && rest < parent, "{rule}");
            }
        }
        check_all(&i, true);
    }

    #[test]
    fn preconditions() {
        let i = inst(&["a", "b"], &[("a", "b")], &[]).with_omega(2);
        assert_eq!(algocon(&i, Limits::default()), Err(SolveError::UnsupportedOmega(2)));
        let two = inst(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")], &[("a", "c")]);
        assert!(matches!(algocon(&two, Limits::default()), Err(SolveError::WrongShape(_))));
        let tri = inst(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")], &[]);
        assert!(matches!(split_case_r2(&tri), Err(SolveError::WrongShape(_))));
        assert!(matches!(split_case_r1(&tri), Err(SolveError::WrongShape(_))));
    }
}
