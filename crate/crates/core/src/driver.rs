//! Level-by-level componentwise solver.
//!
//! Components are visited from the sources of the condensation DAG down to
//! its sinks. Each component first pulls the weight flowing in from already
//! solved components, then is solved with one of three routes:
//!
//! * no input: its own power iteration, unless a row-sum bound or an early
//!   eigenvalue check shows it cannot reach the running maximum;
//! * input and a smaller spectral radius: the series `Σ (M/λ_max)ⁱ v / λ_max`;
//! * input and a series that does not converge: power iteration continued
//!   from the last series term.
//!
//! Every live (non-zero) component carries a growth key `(λ, order)`. A
//! component that reaches the running maximum while fed by a component of the
//! same eigenvalue grows one polynomial order faster, so its key has a higher
//! order. When a level produces a key above the running maximum, every live
//! component with a smaller key is set to zero.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::condensation::{
    find_components, group_single_vertex_components, BoundaryEdge, ComponentId, Decomposition,
    SingleVertexGroup,
};
use crate::error::{Result, SolveError};
use crate::graph::{GraphSlice, LinearOperator, SparseGraph, VertexId};
use crate::kernels::{
    l1, power_run, series_run, single_vertex_batch, IterationOutcome, PowerControl, SeriesOutcome,
    SingleRoute, SolveOptions, Status,
};

/// Asymptotic growth class of a live component: `‖xᵏ‖ ~ kᵒʳᵈᵉʳ λᵏ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthKey {
    pub lambda: f64,
    pub order: u32,
}

impl GrowthKey {
    /// Compare with eigenvalues within `rel_tol` treated as equal.
    pub fn compare(&self, other: &GrowthKey, rel_tol: f64) -> Ordering {
        let scale = self.lambda.abs().max(other.lambda.abs());
        if (self.lambda - other.lambda).abs() <= rel_tol * scale {
            self.order.cmp(&other.order)
        } else if self.lambda < other.lambda {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct LiveUnit {
    vertices: Vec<VertexId>,
    key: GrowthKey,
}

/// Mutable state shared across levels.
#[derive(Debug, Clone)]
pub struct GlobalState {
    /// Running maximum eigenvalue, `-1` before the first component is solved.
    pub lambda_max: f64,
    pub order: u32,
    /// Entry of the uniform start vector `x₀`.
    pub start_entry: f64,
    pub centrality: Vec<f64>,
    pub pending_weights: Vec<f64>,
    /// Eigenvalues closer than this (relative) are treated as equal.
    pub tie_rel_tol: f64,
    live: Vec<LiveUnit>,
}

impl GlobalState {
    pub fn new(n: usize, start_entry: f64, tie_rel_tol: f64) -> Self {
        Self {
            lambda_max: -1.0,
            order: 0,
            start_entry,
            centrality: vec![0.0; n],
            pending_weights: vec![0.0; n],
            tie_rel_tol,
            live: Vec::new(),
        }
    }

    /// Current maximum growth key, `None` before anything was solved.
    pub fn key(&self) -> Option<GrowthKey> {
        (self.lambda_max >= 0.0).then_some(GrowthKey {
            lambda: self.lambda_max,
            order: self.order,
        })
    }

    fn below_current(&self, key: &GrowthKey) -> bool {
        self.key()
            .is_some_and(|cur| key.compare(&cur, self.tie_rel_tol) == Ordering::Less)
    }

    pub(crate) fn push_live(&mut self, vertices: Vec<VertexId>, key: GrowthKey) {
        self.live.push(LiveUnit { vertices, key });
    }
}

/// Zero every live component whose key is below `new_key` and make `new_key`
/// the running maximum.
pub fn zero_out(state: &mut GlobalState, new_key: GrowthKey) {
    let tol = state.tie_rel_tol;
    let centrality = &mut state.centrality;
    state.live.retain(|unit| {
        if unit.key.compare(&new_key, tol) == Ordering::Less {
            for &v in &unit.vertices {
                centrality[v] = 0.0;
            }
            false
        } else {
            true
        }
    });
    state.lambda_max = new_key.lambda;
    state.order = new_key.order;
}

/// Add `w · centrality[source]` to the pending weight of every edge target.
pub fn propagate_weights(edges: &[BoundaryEdge], centrality: &[f64], pending: &mut [f64]) {
    for e in edges {
        pending[e.target] += e.weight * centrality[e.source];
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Skip,
    Solve,
}

/// A zero-input component whose largest row sum is below the running maximum
/// cannot become dominant.
pub fn skip_by_row_sum_bound<M: LinearOperator + ?Sized>(op: &M, state: &GlobalState) -> Bound {
    if op.max_row_sum() < state.lambda_max {
        Bound::Skip
    } else {
        Bound::Solve
    }
}

/// Component-local result of [`component_centrality`].
#[derive(Debug, Clone)]
pub struct ComponentSolution {
    pub outcome: IterationOutcome,
    /// Unnormalised centrality in the running scale.
    pub centrality: Vec<f64>,
    /// Growth key if the component stays live.
    pub key: Option<GrowthKey>,
}

fn zero_solution(dim: usize, status: Status, lambda_est: f64, iterations: usize) -> ComponentSolution {
    ComponentSolution {
        outcome: IterationOutcome {
            vector: vec![0.0; dim],
            lambda_est,
            iterations,
            status,
            converged: true,
            mass: 0.0,
        },
        centrality: vec![0.0; dim],
        key: None,
    }
}

/// Solve one component given the weight flowing into it.
///
/// `op` is the component block of `Aᵀ`; `state` is only read.
pub fn component_centrality<M: LinearOperator + ?Sized>(
    op: &M,
    incoming: &[f64],
    state: &GlobalState,
    opts: &SolveOptions,
) -> Result<ComponentSolution> {
    let dim = op.dim();
    if incoming.len() != dim {
        return Err(SolveError::DimensionMismatch {
            expected: dim,
            actual: incoming.len(),
        });
    }
    let share = state.start_entry * dim as f64;

    if l1(incoming) < opts.zero_input_tol {
        if opts.rowsum_skip && skip_by_row_sum_bound(op, state) == Bound::Skip {
            return Ok(zero_solution(dim, Status::SkippedBound, op.max_row_sum(), 0));
        }
        let x0 = vec![state.start_entry; dim];
        let ctl = PowerControl {
            check_scale: share,
            discard_against: (opts.half_discard && state.lambda_max > 0.0)
                .then_some(state.lambda_max),
        };
        let out = power_run(op, &x0, &ctl, opts);
        if out.status == Status::DiscardedHalf {
            return Ok(zero_solution(dim, Status::DiscardedHalf, out.lambda_est, out.iterations));
        }
        let key = GrowthKey {
            lambda: out.lambda_est,
            order: 0,
        };
        if state.below_current(&key) {
            let mut zero = zero_solution(dim, Status::Zero, out.lambda_est, out.iterations);
            zero.outcome.converged = out.converged;
            return Ok(zero);
        }
        let centrality = out.vector.iter().map(|v| v * out.mass).collect();
        return Ok(ComponentSolution {
            outcome: out,
            centrality,
            key: Some(key),
        });
    }

    if state.lambda_max <= 0.0 {
        return fallback(op, incoming, incoming, 0, state, opts);
    }
    match series_run(op, incoming, state.lambda_max, opts, true) {
        SeriesOutcome::Converged(out) => Ok(series_solution(out, state)),
        SeriesOutcome::Diverged(d) => fallback(op, incoming, &d.last_term, d.iterations, state, opts),
    }
}

fn series_solution(out: IterationOutcome, state: &GlobalState) -> ComponentSolution {
    let centrality = out.vector.iter().map(|v| v / state.lambda_max).collect();
    ComponentSolution {
        outcome: out,
        centrality,
        key: state.key(),
    }
}

/// Power iteration continued from `start` after `carried` series iterations.
fn fallback<M: LinearOperator + ?Sized>(
    op: &M,
    incoming: &[f64],
    start: &[f64],
    carried: usize,
    state: &GlobalState,
    opts: &SolveOptions,
) -> Result<ComponentSolution> {
    let ctl = PowerControl {
        check_scale: state.start_entry * op.dim() as f64,
        discard_against: None,
    };
    let mut out = power_run(op, start, &ctl, opts);
    let lambda = out.lambda_est;
    let lambda_max = state.lambda_max.max(0.0);
    let tol = state.tie_rel_tol;
    out.iterations += carried;

    if carried > 0 && lambda < lambda_max * (1.0 - tol) {
        // the checkpoint saw a transient; the series does converge
        let SeriesOutcome::Converged(mut series) =
            series_run(op, incoming, state.lambda_max, opts, false)
        else {
            unreachable!("unchecked series never reports divergence");
        };
        series.iterations += out.iterations;
        return Ok(series_solution(series, state));
    }

    let key = if lambda > lambda_max * (1.0 + tol) {
        GrowthKey { lambda, order: 0 }
    } else {
        GrowthKey {
            lambda: lambda_max,
            order: state.order + 1,
        }
    };
    let mut mass = out.mass;
    if carried > 0 && lambda > 0.0 {
        // series terms were scaled by 1/λ_max, rescale them to 1/λ
        mass *= (carried as f64 * (state.lambda_max.ln() - lambda.ln())).exp();
    }
    out.mass = mass;
    let centrality = out.vector.iter().map(|v| v * mass).collect();
    Ok(ComponentSolution {
        outcome: out,
        centrality,
        key: Some(key),
    })
}

/// What a report row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitLabel {
    Component(ComponentId),
    /// All one-vertex components of a level, solved as one batch.
    Singles { level: usize },
}

impl fmt::Display for UnitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitLabel::Component(c) => write!(f, "{c}"),
            UnitLabel::Singles { level } => write!(f, "g{level}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentRecord {
    pub unit: UnitLabel,
    pub level: usize,
    pub size: usize,
    pub iterations: usize,
    pub lambda_est: f64,
    pub status: Status,
    pub converged: bool,
}

/// Per-component diagnostics of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub records: Vec<ComponentRecord>,
    pub total_iterations: usize,
    pub wall_seconds: f64,
    /// Final running maximum eigenvalue.
    pub lambda_max: f64,
    /// Components that stopped at `max_iter`.
    pub nonconverged: usize,
}

impl RunReport {
    fn push(&mut self, record: ComponentRecord) {
        self.total_iterations += record.iterations;
        if !record.converged {
            self.nonconverged += 1;
        }
        self.records.push(record);
    }

    pub(crate) fn extend(&mut self, other: RunReport) {
        for r in other.records {
            self.push(r);
        }
        self.wall_seconds += other.wall_seconds;
    }

    pub fn record(&self, unit: UnitLabel) -> Option<&ComponentRecord> {
        self.records.iter().find(|r| r.unit == unit)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "component,level,size,iterations,lambda,status,converged")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{:.11e},{},{}",
                r.unit, r.level, r.size, r.iterations, r.lambda_est, r.status, r.converged
            )?;
        }
        Ok(())
    }
}

/// Normalised centrality and the run report.
#[derive(Debug, Clone)]
pub struct Solution {
    pub centrality: Vec<f64>,
    pub report: RunReport,
}

struct UnitResult {
    record: ComponentRecord,
    values: Vec<(VertexId, f64)>,
    live: Vec<(Vec<VertexId>, GrowthKey)>,
}

enum Unit<'a> {
    Component(ComponentId),
    Singles(&'a SingleVertexGroup),
}

/// Precomputed transpose and decomposition; can be solved repeatedly.
pub struct ComponentwiseSolver<'g> {
    graph: &'g SparseGraph,
    transposed: SparseGraph,
    decomp: Decomposition,
    singles: Vec<Option<SingleVertexGroup>>,
}

impl<'g> ComponentwiseSolver<'g> {
    pub fn new(graph: &'g SparseGraph) -> Result<Self> {
        if graph.num_vertices() == 0 {
            return Err(SolveError::InvalidArgument("graph has no vertices".into()));
        }
        let decomp = find_components(graph);
        let mut singles = vec![None; decomp.max_level() + 1];
        for group in group_single_vertex_components(&decomp) {
            let level = group.level;
            singles[level] = Some(group);
        }
        Ok(Self {
            graph,
            transposed: graph.transpose(),
            decomp,
            singles,
        })
    }

    pub fn graph(&self) -> &'g SparseGraph {
        self.graph
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomp
    }

    pub fn solve(&self, opts: &SolveOptions) -> Result<Solution> {
        self.solve_masked(opts, None)
    }

    /// Solve restricted to the components with `mask[c] == true`. The result
    /// is normalised over the selected vertices; all others are zero.
    pub fn solve_masked(&self, opts: &SolveOptions, mask: Option<&[bool]>) -> Result<Solution> {
        opts.validate()?;
        let started = Instant::now();
        let d = &self.decomp;
        let n = d.num_vertices();
        if let Some(m) = mask {
            if m.len() != d.num_components() {
                return Err(SolveError::DimensionMismatch {
                    expected: d.num_components(),
                    actual: m.len(),
                });
            }
        }
        let selected = |c: ComponentId| mask.is_none_or(|m| m[c.0]);
        let active: usize = d.component_ids().filter(|&c| selected(c)).map(|c| d.size(c)).sum();
        if active == 0 {
            return Err(SolveError::InvalidArgument("no component selected".into()));
        }

        let tie = opts.tie_rel_tol.max(opts.tol.sqrt());
        let mut state = GlobalState::new(n, 1.0 / active as f64, tie);
        let mut report = RunReport::default();

        for level in (0..=d.max_level()).rev() {
            let filtered_group;
            let mut units: Vec<Unit<'_>> = d
                .components_at(level)
                .iter()
                .copied()
                .filter(|&c| selected(c) && (!opts.batch_singles || !d.is_single_vertex(c)))
                .map(Unit::Component)
                .collect();
            if opts.batch_singles {
                if let Some(group) = &self.singles[level] {
                    filtered_group = mask.map(|_| filter_group(group, d, &selected));
                    let g = filtered_group.as_ref().unwrap_or(group);
                    if !g.is_empty() {
                        units.push(Unit::Singles(g));
                    }
                }
            }

            for unit in &units {
                match unit {
                    Unit::Component(c) => self.pull(&mut state, *c),
                    Unit::Singles(g) => {
                        for &v in &g.members {
                            self.pull(&mut state, d.comp_of(v));
                        }
                    }
                }
            }

            let solve = |unit: &Unit<'_>| match unit {
                Unit::Component(c) => self.solve_component(*c, &state, opts),
                Unit::Singles(g) => solve_singles(g, &state, opts),
            };
            let results: Vec<UnitResult> = if opts.parallel_levels && units.len() > 1 {
                units.par_iter().map(solve).collect::<Result<_>>()?
            } else {
                units.iter().map(solve).collect::<Result<_>>()?
            };

            let mut top = state.key();
            for r in results {
                for (v, x) in r.values {
                    state.centrality[v] = x;
                }
                for (vertices, key) in r.live {
                    if top.is_none_or(|t| key.compare(&t, tie) == Ordering::Greater) {
                        top = Some(key);
                    }
                    state.push_live(vertices, key);
                }
                report.push(r.record);
            }
            if let Some(key) = top {
                zero_out(&mut state, key);
            }
        }

        if state.centrality.iter().any(|v| !v.is_finite()) {
            return Err(SolveError::Invariant(
                "non-finite centrality entry".into(),
            ));
        }
        let total: f64 = state.centrality.iter().sum();
        if total <= 0.0 || state.lambda_max <= 0.0 {
            return Err(SolveError::Degenerate);
        }
        let mut centrality = state.centrality;
        centrality.iter_mut().for_each(|v| *v /= total);
        report.lambda_max = state.lambda_max;
        report.wall_seconds = started.elapsed().as_secs_f64();
        Ok(Solution { centrality, report })
    }

    fn pull(&self, state: &mut GlobalState, c: ComponentId) {
        propagate_weights(
            self.decomp.incoming_boundary(c),
            &state.centrality,
            &mut state.pending_weights,
        );
    }

    fn slice(&self, c: ComponentId) -> GraphSlice<'_> {
        let d = &self.decomp;
        GraphSlice::build(&self.transposed, d.vertices(c).to_vec(), |v| {
            (d.comp_of(v) == c).then(|| d.local_index(v))
        })
    }

    fn solve_component(
        &self,
        c: ComponentId,
        state: &GlobalState,
        opts: &SolveOptions,
    ) -> Result<UnitResult> {
        let d = &self.decomp;
        let vertices = d.vertices(c);
        let slice = self.slice(c);
        let incoming: Vec<f64> = vertices.iter().map(|&v| state.pending_weights[v]).collect();
        let sol = component_centrality(&slice, &incoming, state, opts)?;
        Ok(UnitResult {
            record: ComponentRecord {
                unit: UnitLabel::Component(c),
                level: d.level(c),
                size: vertices.len(),
                iterations: sol.outcome.iterations,
                lambda_est: sol.outcome.lambda_est,
                status: sol.outcome.status,
                converged: sol.outcome.converged,
            },
            values: vertices.iter().copied().zip(sol.centrality).collect(),
            live: sol.key.map(|k| (vertices.to_vec(), k)).into_iter().collect(),
        })
    }
}

fn filter_group(
    group: &SingleVertexGroup,
    d: &Decomposition,
    selected: &impl Fn(ComponentId) -> bool,
) -> SingleVertexGroup {
    let (members, self_loops) = group
        .members
        .iter()
        .zip(&group.self_loops)
        .filter(|(&v, _)| selected(d.comp_of(v)))
        .map(|(&v, &a)| (v, a))
        .unzip();
    SingleVertexGroup {
        level: group.level,
        members,
        self_loops,
    }
}

fn solve_singles(
    group: &SingleVertexGroup,
    state: &GlobalState,
    opts: &SolveOptions,
) -> Result<UnitResult> {
    let weights: Vec<f64> = group
        .members
        .iter()
        .map(|&v| {
            let w = state.pending_weights[v];
            if w < opts.zero_input_tol {
                0.0
            } else {
                w
            }
        })
        .collect();
    let ranks = single_vertex_batch(group, &weights, state.lambda_max)?;
    let tie = state.tie_rel_tol;

    let mut values = Vec::with_capacity(group.len());
    let mut live = Vec::new();
    let mut statuses = Vec::with_capacity(group.len());
    for ((&v, &a), (&w, rank)) in group
        .members
        .iter()
        .zip(&group.self_loops)
        .zip(weights.iter().zip(&ranks))
    {
        let (value, key, status) = if w == 0.0 {
            let key = GrowthKey { lambda: a, order: 0 };
            if opts.rowsum_skip && a < state.lambda_max {
                (0.0, None, Status::SkippedBound)
            } else if state.below_current(&key) {
                (0.0, None, Status::Zero)
            } else {
                (state.start_entry, Some(key), Status::ConvergedPower)
            }
        } else {
            match rank.route {
                SingleRoute::Series => (
                    rank.rank / state.lambda_max,
                    state.key(),
                    Status::ConvergedSeries,
                ),
                SingleRoute::Power => {
                    let lambda_max = state.lambda_max.max(0.0);
                    let key = if a > lambda_max * (1.0 + tie) {
                        GrowthKey { lambda: a, order: 0 }
                    } else {
                        GrowthKey {
                            lambda: lambda_max,
                            order: state.order + 1,
                        }
                    };
                    (rank.rank * w, Some(key), Status::ConvergedPower)
                }
            }
        };
        values.push((v, value));
        if let Some(k) = key {
            live.push((vec![v], k));
        }
        statuses.push(status);
    }

    let status = [
        Status::ConvergedPower,
        Status::ConvergedSeries,
        Status::Zero,
        Status::SkippedBound,
    ]
    .into_iter()
    .find(|s| statuses.contains(s))
    .unwrap_or(Status::SkippedBound);
    let solved = statuses.iter().any(|&s| s != Status::SkippedBound);
    Ok(UnitResult {
        record: ComponentRecord {
            unit: UnitLabel::Singles { level: group.level },
            level: group.level,
            size: group.len(),
            iterations: usize::from(solved),
            lambda_est: group.self_loops.iter().copied().fold(0.0, f64::max),
            status,
            converged: true,
        },
        values,
        live,
    })
}

/// Componentwise centrality of `g`, normalised to unit L1 norm.
pub fn run_componentwise(g: &SparseGraph, opts: &SolveOptions) -> Result<Solution> {
    ComponentwiseSolver::new(g)?.solve(opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[u8]]) -> SparseGraph {
        let n = rows.len();
        let edges = rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(move |(j, &a)| (i, j, a as f64))
        });
        SparseGraph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn growth_key_ordering() {
        let a = GrowthKey { lambda: 2.0, order: 0 };
        let b = GrowthKey { lambda: 2.0, order: 1 };
        let c = GrowthKey { lambda: 2.5, order: 0 };
        assert_eq!(a.compare(&b, 1e-12), Ordering::Less);
        assert_eq!(b.compare(&c, 1e-12), Ordering::Less);
        assert_eq!(
            a.compare(&GrowthKey { lambda: 2.0 + 1e-14, order: 0 }, 1e-12),
            Ordering::Equal
        );
    }

    #[test]
    fn zero_out_clears_smaller_keys() {
        let mut state = GlobalState::new(3, 1.0 / 3.0, 1e-12);
        state.centrality = vec![0.5, 0.25, 0.25];
        state.push_live(vec![0], GrowthKey { lambda: 1.0, order: 0 });
        state.push_live(vec![1, 2], GrowthKey { lambda: 2.0, order: 0 });
        zero_out(&mut state, GrowthKey { lambda: 2.0, order: 0 });
        assert_eq!(state.centrality, vec![0.0, 0.25, 0.25]);
        assert_eq!(state.lambda_max, 2.0);
        assert_eq!(state.live.len(), 1);
    }

    #[test]
    fn propagation_sums_weighted_sources() {
        let edges = [
            BoundaryEdge { source: 0, target: 2, weight: 1.0 },
            BoundaryEdge { source: 1, target: 2, weight: 2.0 },
        ];
        let mut pending = vec![0.0; 3];
        propagate_weights(&edges, &[0.5, 0.25, 0.0], &mut pending);
        assert_eq!(pending, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn row_sum_bound() {
        let g = dense(&[&[1, 1], &[1, 0]]);
        let mut state = GlobalState::new(2, 0.5, 1e-12);
        state.lambda_max = 3.0;
        assert_eq!(skip_by_row_sum_bound(&g, &state), Bound::Skip);
        state.lambda_max = 2.0;
        assert_eq!(skip_by_row_sum_bound(&g, &state), Bound::Solve);
    }

    #[test]
    fn series_route_divides_by_lambda() {
        let g = dense(&[&[1]]);
        let mut state = GlobalState::new(1, 1.0, 1e-12);
        state.lambda_max = 2.0;
        let opts = SolveOptions::with_tol(1e-14);
        let sol = component_centrality(&g, &[1.0], &state, &opts).unwrap();
        assert_eq!(sol.outcome.status, Status::ConvergedSeries);
        assert!((sol.centrality[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_disjoint_sinks_with_equal_radius_share_weight() {
        let g = dense(&[&[1, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 1]]);
        let sol = run_componentwise(&g, &SolveOptions::default()).unwrap();
        for v in sol.centrality {
            assert!((v - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn smaller_upstream_is_zeroed() {
        // source self-loop of weight 1 feeds a 2-cycle with loops (λ = 2)
        let g = dense(&[&[1, 1, 0], &[0, 1, 1], &[0, 1, 1]]);
        let sol = run_componentwise(&g, &SolveOptions::default()).unwrap();
        assert_eq!(sol.centrality[0], 0.0);
        assert!((sol.centrality[1] - 0.5).abs() < 1e-9);
        assert!((sol.report.lambda_max - 2.0).abs() < 1e-9);
    }

    #[test]
    fn report_csv_layout() {
        let g = dense(&[&[0, 1], &[0, 1]]);
        let sol = run_componentwise(&g, &SolveOptions::default()).unwrap();
        let mut out = Vec::new();
        sol.report.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("component,level,size,iterations,lambda,status,converged\n"));
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("g1,1,1,"));
    }
}
