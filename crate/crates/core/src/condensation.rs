//! Strongly connected components, their levels in the condensation DAG and the
//! per-level ordering used by the componentwise solver.
//!
//! Components are found with an iterative Tarjan search. Tarjan emits a
//! component only after every component reachable from it, so the level of a
//! component (longest path to a sink of the condensation) can be fixed at
//! emission time by looking at the already-emitted successors. Component ids
//! follow emission order, which makes every condensation edge point from a
//! larger id to a smaller one.

use std::io::Write;

use crate::error::SolveError;
use crate::graph::{SparseGraph, VertexId};

/// Dense component index in `[0, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId(pub usize);

impl std::fmt::Display for ComponentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge of the original graph whose endpoints lie in different components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: f64,
}

/// All boundary edges between one ordered pair of components.
#[derive(Debug, Clone, Copy)]
pub struct CondensationEdge<'d> {
    pub source: ComponentId,
    pub target: ComponentId,
    pub edges: &'d [BoundaryEdge],
}

/// Partition of the vertex set into strongly connected components, with the
/// condensation structure needed to walk it level by level.
#[derive(Debug, Clone)]
pub struct Decomposition {
    comp_of: Vec<ComponentId>,
    // vertices grouped by component, ascending inside each group
    members: Vec<VertexId>,
    member_offsets: Vec<usize>,
    local_index: Vec<usize>,
    levels: Vec<usize>,
    self_loops: Vec<f64>,
    // sorted by (target component, source component, source, target)
    boundary: Vec<BoundaryEdge>,
    boundary_offsets: Vec<usize>,
    level_index: Vec<Vec<ComponentId>>,
}

impl Decomposition {
    pub fn num_vertices(&self) -> usize {
        self.comp_of.len()
    }

    pub fn num_components(&self) -> usize {
        self.levels.len()
    }

    pub fn component_ids(&self) -> impl Iterator<Item = ComponentId> {
        (0..self.num_components()).map(ComponentId)
    }

    pub fn comp_of(&self, v: VertexId) -> ComponentId {
        self.comp_of[v]
    }

    /// Sorted vertex list of a component.
    pub fn vertices(&self, c: ComponentId) -> &[VertexId] {
        &self.members[self.member_offsets[c.0]..self.member_offsets[c.0 + 1]]
    }

    pub fn size(&self, c: ComponentId) -> usize {
        self.member_offsets[c.0 + 1] - self.member_offsets[c.0]
    }

    pub fn level(&self, c: ComponentId) -> usize {
        self.levels[c.0]
    }

    pub fn max_level(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    pub fn is_single_vertex(&self, c: ComponentId) -> bool {
        self.size(c) == 1
    }

    /// Self-loop weight of a one-vertex component (zero for larger ones).
    pub fn self_loop_weight(&self, c: ComponentId) -> f64 {
        self.self_loops[c.0]
    }

    /// Position of `v` inside the vertex list of its component.
    pub fn local_index(&self, v: VertexId) -> usize {
        self.local_index[v]
    }

    /// Boundary edges whose target lies in `c`.
    pub fn incoming_boundary(&self, c: ComponentId) -> &[BoundaryEdge] {
        &self.boundary[self.boundary_offsets[c.0]..self.boundary_offsets[c.0 + 1]]
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    /// Condensation edges grouped by target component, then source component.
    pub fn condensation_edges(&self) -> impl Iterator<Item = CondensationEdge<'_>> + '_ {
        let comp_of = &self.comp_of;
        self.boundary
            .chunk_by(move |a, b| {
                comp_of[a.target] == comp_of[b.target] && comp_of[a.source] == comp_of[b.source]
            })
            .map(move |edges| CondensationEdge {
                source: comp_of[edges[0].source],
                target: comp_of[edges[0].target],
                edges,
            })
    }

    /// Components per level (index = level), largest first, ties by id.
    pub fn level_index(&self) -> &[Vec<ComponentId>] {
        &self.level_index
    }

    pub fn components_at(&self, level: usize) -> &[ComponentId] {
        self.level_index.get(level).map_or(&[], Vec::as_slice)
    }

    /// Debug dump as `vertex,component,level` using original vertex labels.
    pub fn write_csv<W: Write>(&self, graph: &SparseGraph, mut out: W) -> std::io::Result<()> {
        writeln!(out, "vertex,component,level")?;
        for v in 0..self.num_vertices() {
            let c = self.comp_of[v];
            writeln!(out, "{},{},{}", graph.label(v), c, self.level(c))?;
        }
        Ok(())
    }
}

/// Vertices of all one-vertex components on one level.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleVertexGroup {
    pub level: usize,
    pub members: Vec<VertexId>,
    pub self_loops: Vec<f64>,
}

impl SingleVertexGroup {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

const UNVISITED: usize = usize::MAX;

/// Strongly connected components of `g` with levels assigned and the
/// per-level ordering built. Iterative, linear in `n + m` apart from the
/// sorting of boundary edges.
pub fn find_components(g: &SparseGraph) -> Decomposition {
    let n = g.num_vertices();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<VertexId> = Vec::new();
    let mut call: Vec<(VertexId, usize)> = Vec::new();
    let mut counter = 0usize;

    let mut comp_of = vec![ComponentId(usize::MAX); n];
    let mut members = Vec::with_capacity(n);
    let mut member_offsets = vec![0usize];
    let mut levels = Vec::new();
    let mut self_loops = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            let neighbors = g.neighbors(v);
            if frame.1 < neighbors.len() {
                let w = neighbors[frame.1];
                frame.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }

            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] != index[v] {
                continue;
            }

            let cid = ComponentId(levels.len());
            let start = members.len();
            loop {
                let w = stack.pop().expect("component root is on the stack");
                on_stack[w] = false;
                comp_of[w] = cid;
                members.push(w);
                if w == v {
                    break;
                }
            }
            members[start..].sort_unstable();
            member_offsets.push(members.len());

            // every successor component has already been emitted
            let mut level = 0;
            for &u in &members[start..] {
                for &w in g.neighbors(u) {
                    let cw = comp_of[w];
                    if cw != cid {
                        level = level.max(levels[cw.0] + 1);
                    }
                }
            }
            levels.push(level);
            self_loops.push(if members.len() - start == 1 {
                g.self_loop(v)
            } else {
                0.0
            });
        }
    }

    let c = levels.len();
    let mut local_index = vec![0usize; n];
    for k in 0..c {
        for (i, &v) in members[member_offsets[k]..member_offsets[k + 1]]
            .iter()
            .enumerate()
        {
            local_index[v] = i;
        }
    }

    let mut boundary: Vec<BoundaryEdge> = g
        .edges()
        .filter(|&(u, v, _)| comp_of[u] != comp_of[v])
        .map(|(source, target, weight)| BoundaryEdge {
            source,
            target,
            weight,
        })
        .collect();
    boundary.sort_unstable_by_key(|e| (comp_of[e.target], comp_of[e.source], e.source, e.target));
    let mut boundary_offsets = vec![0usize; c + 1];
    for e in &boundary {
        boundary_offsets[comp_of[e.target].0 + 1] += 1;
    }
    for k in 0..c {
        boundary_offsets[k + 1] += boundary_offsets[k];
    }

    let decomp = Decomposition {
        comp_of,
        members,
        member_offsets,
        local_index,
        levels,
        self_loops,
        boundary,
        boundary_offsets,
        level_index: Vec::new(),
    };
    sort_components(decomp)
}

/// Recompute every level as the longest condensation path to a sink.
///
/// Runs a Kahn-style sweep from the sinks upward; a cycle among components
/// means the decomposition is corrupt.
pub fn assign_levels(mut decomp: Decomposition) -> Result<Decomposition, SolveError> {
    let c = decomp.num_components();
    let mut successors = vec![0usize; c];
    let mut predecessors: Vec<Vec<ComponentId>> = vec![Vec::new(); c];
    for edge in decomp.condensation_edges() {
        if edge.source == edge.target {
            return Err(SolveError::Invariant(format!(
                "condensation edge loops on component {}",
                edge.source
            )));
        }
        successors[edge.source.0] += 1;
        predecessors[edge.target.0].push(edge.source);
    }

    let mut levels = vec![0usize; c];
    let mut ready: Vec<ComponentId> = (0..c)
        .filter(|&k| successors[k] == 0)
        .map(ComponentId)
        .collect();
    let mut done = 0;
    while let Some(k) = ready.pop() {
        done += 1;
        for &p in &predecessors[k.0] {
            levels[p.0] = levels[p.0].max(levels[k.0] + 1);
            successors[p.0] -= 1;
            if successors[p.0] == 0 {
                ready.push(p);
            }
        }
    }
    if done != c {
        return Err(SolveError::Invariant(
            "condensation graph contains a cycle".into(),
        ));
    }
    decomp.levels = levels;
    Ok(sort_components(decomp))
}

/// Bucket components by level (linear in the component count), then order
/// each bucket by size descending with ties broken by the smaller id.
pub fn sort_components(mut decomp: Decomposition) -> Decomposition {
    let mut index: Vec<Vec<ComponentId>> = vec![Vec::new(); decomp.max_level() + 1];
    if decomp.num_components() == 0 {
        index.clear();
    }
    for c in decomp.component_ids() {
        index[decomp.level(c)].push(c);
    }
    for bucket in &mut index {
        bucket.sort_by(|&a, &b| decomp.size(b).cmp(&decomp.size(a)).then(a.cmp(&b)));
    }
    decomp.level_index = index;
    decomp
}

/// One group per level holding every one-vertex component of that level,
/// ordered by level ascending. Larger components are not touched.
pub fn group_single_vertex_components(decomp: &Decomposition) -> Vec<SingleVertexGroup> {
    let mut groups = Vec::new();
    for (level, comps) in decomp.level_index().iter().enumerate() {
        let mut singles: Vec<ComponentId> = comps
            .iter()
            .copied()
            .filter(|&c| decomp.is_single_vertex(c))
            .collect();
        if singles.is_empty() {
            continue;
        }
        singles.sort_unstable();
        groups.push(SingleVertexGroup {
            level,
            members: singles.iter().map(|&c| decomp.vertices(c)[0]).collect(),
            self_loops: singles.iter().map(|&c| decomp.self_loop_weight(c)).collect(),
        });
    }
    groups
}
