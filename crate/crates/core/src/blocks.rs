//! Disconnected diagonal blocks.
//!
//! When several weakly connected blocks share the dominant eigenvalue the
//! eigenvector is not unique. Each block is then solved on its own and the
//! block vectors are merged with weights `kᵢ/q`, `kᵢ` being the block size
//! and `q` the total size of the merged blocks.

use crate::driver::{ComponentwiseSolver, RunReport};
use crate::error::{Result, SolveError};
use crate::graph::{SparseGraph, VertexId};
use crate::kernels::SolveOptions;

/// Disjoint vertex blocks of a graph with `num_vertices` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition {
    pub num_vertices: usize,
    /// Sorted vertex lists; blocks are ordered by their smallest vertex.
    pub blocks: Vec<Vec<VertexId>>,
    /// Total size of the blocks taking part in a merge.
    pub q: usize,
}

impl BlockPartition {
    pub fn new(num_vertices: usize, blocks: Vec<Vec<VertexId>>) -> Self {
        let q = blocks.iter().map(Vec::len).sum();
        Self {
            num_vertices,
            blocks,
            q,
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Keep only the blocks at `indices`, recomputing `q`.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self::new(
            self.num_vertices,
            indices.iter().map(|&i| self.blocks[i].clone()).collect(),
        )
    }
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Weakly connected components of `g`.
pub fn detect_blocks(g: &SparseGraph) -> BlockPartition {
    let n = g.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    for (u, v, _) in g.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            // smaller root wins so the root is the block's smallest vertex
            let (lo, hi) = if ru < rv { (ru, rv) } else { (rv, ru) };
            parent[hi] = lo;
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<VertexId>> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(v);
    }
    BlockPartition::new(n, blocks)
}

/// `Σ (kᵢ/q) xᵢ` placed at the block positions; `vectors[i]` is indexed by
/// position inside block `i` and should have unit L1 norm.
pub fn merge_isolated_blocks(partition: &BlockPartition, vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    if vectors.len() != partition.len() {
        return Err(SolveError::DimensionMismatch {
            expected: partition.len(),
            actual: vectors.len(),
        });
    }
    let total: usize = partition.blocks.iter().map(Vec::len).sum();
    if total != partition.q || partition.q == 0 {
        return Err(SolveError::InvalidArgument(format!(
            "block sizes sum to {total}, expected q = {}",
            partition.q
        )));
    }
    let q = partition.q as f64;
    let mut merged = vec![0.0; partition.num_vertices];
    let mut seen = vec![false; partition.num_vertices];
    for (block, x) in partition.blocks.iter().zip(vectors) {
        if x.len() != block.len() {
            return Err(SolveError::DimensionMismatch {
                expected: block.len(),
                actual: x.len(),
            });
        }
        let weight = block.len() as f64 / q;
        for (&v, &xv) in block.iter().zip(x) {
            if v >= partition.num_vertices || seen[v] {
                return Err(SolveError::InvalidArgument(format!(
                    "vertex {v} is out of range or in more than one block"
                )));
            }
            seen[v] = true;
            merged[v] = weight * xv;
        }
    }
    Ok(merged)
}

/// Result of [`run_auto_blocks`].
#[derive(Debug, Clone)]
pub struct AutoBlocks {
    pub centrality: Vec<f64>,
    pub report: RunReport,
    pub blocks: BlockPartition,
    /// Dominant eigenvalue of every block, same order as `blocks`.
    pub block_lambdas: Vec<f64>,
    /// Indices of the blocks merged; empty when a single block dominates and
    /// the standard run was used.
    pub merged: Vec<usize>,
}

/// Solve each weakly connected block separately and merge those that share
/// the dominant eigenvalue. With a single dominant block the ordinary run on
/// the whole graph is returned.
pub fn run_auto_blocks(g: &SparseGraph, opts: &SolveOptions) -> Result<AutoBlocks> {
    let solver = ComponentwiseSolver::new(g)?;
    let blocks = detect_blocks(g);
    let d = solver.decomposition();

    let mut block_of_comp = vec![0usize; d.num_components()];
    for (i, block) in blocks.blocks.iter().enumerate() {
        for &v in block {
            block_of_comp[d.comp_of(v).0] = i;
        }
    }

    let mut vectors = Vec::with_capacity(blocks.len());
    let mut block_lambdas = Vec::with_capacity(blocks.len());
    let mut report = RunReport::default();
    for i in 0..blocks.len() {
        let mask: Vec<bool> = block_of_comp.iter().map(|&b| b == i).collect();
        let sol = match solver.solve_masked(opts, Some(&mask)) {
            Ok(sol) => sol,
            // a block without spectral mass (a lone edge, say) cannot dominate
            Err(SolveError::Degenerate) => {
                vectors.push(vec![0.0; blocks.blocks[i].len()]);
                block_lambdas.push(0.0);
                continue;
            }
            Err(e) => return Err(e),
        };
        vectors.push(blocks.blocks[i].iter().map(|&v| sol.centrality[v]).collect());
        block_lambdas.push(sol.report.lambda_max);
        report.extend(sol.report);
    }

    let top = block_lambdas.iter().copied().fold(0.0, f64::max);
    let tie = opts.tie_rel_tol.max(opts.tol.sqrt());
    let tied: Vec<usize> = (0..blocks.len())
        .filter(|&i| top > 0.0 && (block_lambdas[i] - top).abs() <= tie * top)
        .collect();

    if tied.len() <= 1 {
        let sol = solver.solve(opts)?;
        return Ok(AutoBlocks {
            centrality: sol.centrality,
            report: sol.report,
            blocks,
            block_lambdas,
            merged: Vec::new(),
        });
    }

    let partition = blocks.select(&tied);
    let tied_vectors: Vec<Vec<f64>> = tied.iter().map(|&i| vectors[i].clone()).collect();
    let centrality = merge_isolated_blocks(&partition, &tied_vectors)?;
    report.lambda_max = top;
    Ok(AutoBlocks {
        centrality,
        report,
        blocks,
        block_lambdas,
        merged: tied,
    })
}
