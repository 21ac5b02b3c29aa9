//! Compressed sparse adjacency for weighted directed graphs.
//!
//! A [`SparseGraph`] stores, for every vertex, its outgoing edge list sorted by
//! target. Applied as a [`LinearOperator`] it computes `y[u] = Σ w(u→v)·x[v]`,
//! so the *transposed* graph acts as `Aᵀ` and is what the centrality kernels
//! iterate with. Vertex labels from the input file are remapped to dense ids
//! in ascending label order; the label table is kept on the graph.

use std::io::{BufRead, Write};

use crate::error::GraphError;

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// Which way the stored adjacency points relative to the input edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Original,
    Transposed,
}

impl Orientation {
    fn flipped(self) -> Self {
        match self {
            Orientation::Original => Orientation::Transposed,
            Orientation::Transposed => Orientation::Original,
        }
    }
}

/// Square non-negative matrix that can be applied to a dense vector.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y = M x`. `y` is overwritten.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Largest row sum of `M`, an upper bound on its spectral radius.
    fn max_row_sum(&self) -> f64;
}

/// Immutable CSR graph with non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseGraph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Vec<f64>,
    orientation: Orientation,
    // ascending, so label lookup is a binary search
    labels: Vec<u64>,
}

impl SparseGraph {
    /// Build a graph on `n` vertices labelled `0..n`. Duplicate edges are
    /// merged by summing their weights.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        Self::from_labeled_edges((0..n as u64).collect(), edges)
    }

    fn from_labeled_edges<I>(labels: Vec<u64>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let n = labels.len();
        let mut triples = Vec::new();
        for (u, v, w) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(GraphError::InvalidWeight {
                    tail: u,
                    head: v,
                    weight: w,
                });
            }
            triples.push((u, v, w));
        }
        triples.sort_unstable_by_key(|t| (t.0, t.1));

        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(triples.len());
        let mut weights: Vec<f64> = Vec::with_capacity(triples.len());
        let mut last: Option<(VertexId, VertexId)> = None;
        for (u, v, w) in triples {
            if last == Some((u, v)) {
                *weights.last_mut().expect("merged edge has a predecessor") += w;
                continue;
            }
            last = Some((u, v));
            offsets[u + 1] += 1;
            targets.push(v);
            weights.push(w);
        }
        for u in 0..n {
            offsets[u + 1] += offsets[u];
        }
        Ok(Self {
            offsets,
            targets,
            weights,
            orientation: Orientation::Original,
            labels,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Original label of a dense vertex id.
    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense id of an original label, if present.
    pub fn vertex_of_label(&self, label: u64) -> Option<VertexId> {
        self.labels.binary_search(&label).ok()
    }

    /// Targets of the stored out-edges of `u`, ascending.
    pub fn neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn edge_weights(&self, u: VertexId) -> &[f64] {
        &self.weights[self.offsets[u]..self.offsets[u + 1]]
    }

    /// `(target, weight)` pairs of the stored out-edges of `u`.
    pub fn edges_from(&self, u: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.neighbors(u)
            .iter()
            .copied()
            .zip(self.edge_weights(u).iter().copied())
    }

    /// All edges as `(source, target, weight)` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        (0..self.num_vertices()).flat_map(move |u| self.edges_from(u).map(move |(v, w)| (u, v, w)))
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Weight of the self-loop at `u`, zero if absent.
    pub fn self_loop(&self, u: VertexId) -> f64 {
        match self.neighbors(u).binary_search(&u) {
            Ok(pos) => self.edge_weights(u)[pos],
            Err(_) => 0.0,
        }
    }

    /// Graph with every edge reversed. Linear in `n + m`; rows of the result
    /// stay sorted by target.
    pub fn transpose(&self) -> SparseGraph {
        let n = self.num_vertices();
        let mut offsets = vec![0usize; n + 1];
        for &v in &self.targets {
            offsets[v + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0; self.num_edges()];
        let mut weights = vec![0.0; self.num_edges()];
        for u in 0..n {
            for (v, w) in self.edges_from(u) {
                let slot = cursor[v];
                targets[slot] = u;
                weights[slot] = w;
                cursor[v] += 1;
            }
        }
        SparseGraph {
            offsets,
            targets,
            weights,
            orientation: self.orientation.flipped(),
            labels: self.labels.clone(),
        }
    }

    /// Sum of the stored out-edge weights of every vertex.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.num_vertices())
            .map(|u| self.edge_weights(u).iter().sum())
            .collect()
    }

    /// Subgraph on a sorted, duplicate-free vertex subset.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Result<GraphSlice<'_>, GraphError> {
        let n = self.num_vertices();
        for (i, &v) in vertices.iter().enumerate() {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if i > 0 && vertices[i - 1] >= v {
                return Err(GraphError::UnsortedVertices { vertex: v });
            }
        }
        Ok(GraphSlice::build(self, vertices.to_vec(), |g| {
            vertices.binary_search(&g).ok()
        }))
    }

    /// Write the graph as an edge list using original labels. Unit weights
    /// are omitted so generated files match the plain `src\tdst` layout.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "# vertices: {} edges: {}",
            self.num_vertices(),
            self.num_edges()
        )?;
        for (u, v, w) in self.edges() {
            if w == 1.0 {
                writeln!(out, "{}\t{}", self.labels[u], self.labels[v])?;
            } else {
                writeln!(out, "{}\t{}\t{}", self.labels[u], self.labels[v], w)?;
            }
        }
        Ok(())
    }
}

impl LinearOperator for SparseGraph {
    fn dim(&self) -> usize {
        self.num_vertices()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        spmv(&self.offsets, &self.targets, &self.weights, x, y);
    }

    fn max_row_sum(&self) -> f64 {
        max_row_sum(&self.offsets, &self.weights)
    }
}

fn spmv(offsets: &[usize], targets: &[usize], weights: &[f64], x: &[f64], y: &mut [f64]) {
    for (row, out) in y.iter_mut().enumerate() {
        let range = offsets[row]..offsets[row + 1];
        *out = targets[range.clone()]
            .iter()
            .zip(&weights[range])
            .map(|(&col, &w)| w * x[col])
            .sum();
    }
}

fn max_row_sum(offsets: &[usize], weights: &[f64]) -> f64 {
    offsets
        .windows(2)
        .map(|r| weights[r[0]..r[1]].iter().sum::<f64>())
        .fold(0.0, f64::max)
}

/// Induced subgraph with its own local CSR.
///
/// Local id `i` corresponds to `vertices()[i]` in the parent graph.
#[derive(Debug, Clone)]
pub struct GraphSlice<'g> {
    parent: &'g SparseGraph,
    vertices: Vec<VertexId>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl<'g> GraphSlice<'g> {
    /// `local_of` maps a parent vertex to its local id, or `None` when the
    /// vertex is outside the subset.
    pub(crate) fn build(
        parent: &'g SparseGraph,
        vertices: Vec<VertexId>,
        local_of: impl Fn(VertexId) -> Option<usize>,
    ) -> Self {
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for &u in &vertices {
            for (v, w) in parent.edges_from(u) {
                if let Some(local) = local_of(v) {
                    targets.push(local);
                    weights.push(w);
                }
            }
            offsets.push(targets.len());
        }
        Self {
            parent,
            vertices,
            offsets,
            targets,
            weights,
        }
    }

    pub fn parent(&self) -> &'g SparseGraph {
        self.parent
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn global_of(&self, local: usize) -> VertexId {
        self.vertices[local]
    }

    pub fn local_of(&self, global: VertexId) -> Option<usize> {
        self.vertices.binary_search(&global).ok()
    }

    /// Local `(source, target, weight)` triples.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_vertices()).flat_map(move |u| {
            let range = self.offsets[u]..self.offsets[u + 1];
            self.targets[range.clone()]
                .iter()
                .zip(&self.weights[range])
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.offsets
            .windows(2)
            .map(|r| self.weights[r[0]..r[1]].iter().sum())
            .collect()
    }
}

impl LinearOperator for GraphSlice<'_> {
    fn dim(&self) -> usize {
        self.num_vertices()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        spmv(&self.offsets, &self.targets, &self.weights, x, y);
    }

    fn max_row_sum(&self) -> f64 {
        max_row_sum(&self.offsets, &self.weights)
    }
}

/// Edge-list parsing knobs.
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Lines starting with this character are skipped.
    pub comment: char,
    /// Weight used when a line has only `src dst`.
    pub default_weight: f64,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            comment: '#',
            default_weight: 1.0,
        }
    }
}

/// Read a whitespace-separated `src dst [weight]` edge list.
///
/// Labels are non-negative integers and are remapped to dense ids in
/// ascending label order. Duplicate edges have their weights summed.
pub fn parse_edge_list<R: BufRead>(
    mut reader: R,
    options: &ParseOptions,
) -> Result<SparseGraph, GraphError> {
    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    let mut line = String::new();
    let mut lineno = 0;
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        lineno += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(options.comment) {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let parse_label = |field: Option<&str>, what: &str| -> Result<u64, GraphError> {
            let field = field.ok_or_else(|| GraphError::Parse {
                line: lineno,
                reason: format!("missing {what} vertex"),
            })?;
            field.parse::<u64>().map_err(|_| GraphError::Parse {
                line: lineno,
                reason: format!("{what} vertex `{field}` is not a non-negative integer"),
            })
        };
        let src = parse_label(fields.next(), "source")?;
        let dst = parse_label(fields.next(), "target")?;
        let weight = match fields.next() {
            None => options.default_weight,
            Some(field) => {
                let w = field.parse::<f64>().map_err(|_| GraphError::Parse {
                    line: lineno,
                    reason: format!("weight `{field}` is not a number"),
                })?;
                if !(w.is_finite() && w >= 0.0) {
                    return Err(GraphError::Parse {
                        line: lineno,
                        reason: format!("weight {w} must be finite and non-negative"),
                    });
                }
                w
            }
        };
        if let Some(extra) = fields.next() {
            return Err(GraphError::Parse {
                line: lineno,
                reason: format!("unexpected trailing field `{extra}`"),
            });
        }
        raw.push((src, dst, weight));
    }
    if raw.is_empty() {
        return Err(GraphError::Empty);
    }

    let mut labels: Vec<u64> = raw.iter().flat_map(|&(s, d, _)| [s, d]).collect();
    labels.sort_unstable();
    labels.dedup();
    let dense = |label: u64| labels.binary_search(&label).expect("label collected above");
    let edges: Vec<_> = raw
        .iter()
        .map(|&(s, d, w)| (dense(s), dense(d), w))
        .collect();
    SparseGraph::from_labeled_edges(labels, edges)
}
