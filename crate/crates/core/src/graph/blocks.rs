use super::{Graph, VertexId};

/// A maximal 2-connected subgraph (or a bridge).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Sorted vertex ids.
    pub vertices: Vec<VertexId>,
    /// Sorted `(smaller, larger)` edges.
    pub edges: Vec<(VertexId, VertexId)>,
}

impl Block {
    /// Smallest edge of the block; blocks always have at least one edge.
    pub fn min_edge(&self) -> (VertexId, VertexId) {
        self.edges[0]
    }
}

/// Block-cutvertex decomposition of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutTree {
    blocks: Vec<Block>,
    cutvertices: Vec<VertexId>,
    /// For each block, the cutvertices it contains.
    block_cuts: Vec<Vec<VertexId>>,
    components: usize,
    nontrivial_components: usize,
}

impl BlockCutTree {
    /// Blocks, ordered by their smallest edge.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn cutvertices(&self) -> &[VertexId] {
        &self.cutvertices
    }

    pub fn is_cutvertex(&self, v: VertexId) -> bool {
        self.cutvertices.binary_search(&v).is_ok()
    }

    /// Cutvertices contained in block `b` (its neighbors in the tree).
    pub fn cutvertices_of(&self, b: usize) -> &[VertexId] {
        &self.block_cuts[b]
    }

    /// Blocks containing cutvertex `v` (its neighbors in the tree).
    pub fn blocks_at(&self, v: VertexId) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&b| self.block_cuts[b].contains(&v)).collect()
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Number of connected components with at least one edge.
    pub fn nontrivial_component_count(&self) -> usize {
        self.nontrivial_components
    }
}

/// Biconnected-component decomposition (iterative Hopcroft-Tarjan).
///
/// Isolated vertices form trivial components but no block.
pub fn blocks(g: &Graph) -> BlockCutTree {
    let n = g.vertex_count();
    const UNSET: usize = usize::MAX;
    let mut disc = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(VertexId, VertexId)> = Vec::new();
    let mut raw_blocks: Vec<Vec<(VertexId, VertexId)>> = Vec::new();
    let mut components = 0;
    let mut nontrivial = 0;

    for root in 0..n {
        if disc[root] != UNSET {
            continue;
        }
        components += 1;
        if g.degree(root) > 0 {
            nontrivial += 1;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(VertexId, VertexId, usize)> = vec![(root, UNSET, 0)];
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            let nbrs = g.neighbors(u);
            if *next < nbrs.len() {
                let w = nbrs[*next];
                *next += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == UNSET {
                    edge_stack.push((u, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, u, 0));
                } else if disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != UNSET {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] >= disc[parent] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push((e.0.min(e.1), e.0.max(e.1)));
                            if e == (parent, u) {
                                break;
                            }
                        }
                        raw_blocks.push(block);
                    }
                }
            }
        }
    }

    let mut blocks: Vec<Block> = raw_blocks
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable();
            let mut vertices: Vec<VertexId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            Block { vertices, edges }
        })
        .collect();
    blocks.sort_by_key(Block::min_edge);

    let mut membership = vec![0usize; n];
    for b in &blocks {
        for &v in &b.vertices {
            membership[v] += 1;
        }
    }
    let cutvertices: Vec<VertexId> = (0..n).filter(|&v| membership[v] >= 2).collect();
    let block_cuts = blocks
        .iter()
        .map(|b| b.vertices.iter().copied().filter(|&v| membership[v] >= 2).collect())
        .collect();
    BlockCutTree { blocks, cutvertices, block_cuts, components, nontrivial_components: nontrivial }
}
