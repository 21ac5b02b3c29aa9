//! Numerical cores: power iteration, eigenvalue estimation, the downstream
//! series `Σ (M/λ)ⁱ v` and the closed form for one-vertex components.
//!
//! Every kernel works on a [`LinearOperator`] already in the transposed
//! orientation (`y = Aᵀ x`). Vectors are non-negative and normalised in L1.

use crate::condensation::SingleVertexGroup;
use crate::error::{Result, SolveError};
use crate::graph::LinearOperator;

/// Tolerances, iteration limits, checkpoints and optimisation switches.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Convergence threshold on the maximum absolute change between iterates.
    pub tol: f64,
    pub max_iter: usize,
    /// Series terms are compared every this many iterations.
    pub series_check_at: usize,
    /// Iterations at which a power run compares its eigenvalue estimate with
    /// the running maximum.
    pub eig_check_at: Vec<usize>,
    /// A power run is discarded when its estimate falls below
    /// `half_factor × λ_max` at a checkpoint.
    pub half_factor: f64,
    /// Incoming weight below this L1 mass counts as zero input.
    pub zero_input_tol: f64,
    /// Relative tolerance under which two eigenvalues are treated as equal.
    pub tie_rel_tol: f64,
    pub rowsum_skip: bool,
    pub half_discard: bool,
    pub batch_singles: bool,
    pub parallel_levels: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 10_000,
            series_check_at: 20,
            eig_check_at: vec![10, 20],
            half_factor: 0.5,
            zero_input_tol: 1e-12,
            tie_rel_tol: 1e-12,
            rowsum_skip: true,
            half_discard: true,
            batch_singles: true,
            parallel_levels: false,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(SolveError::InvalidArgument(msg.to_string()));
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad("tol must be a positive number");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive");
        }
        if self.series_check_at < 2 {
            return bad("series_check_at must be at least 2");
        }
        if !(self.half_factor > 0.0 && self.half_factor <= 1.0) {
            return bad("half_factor must lie in (0, 1]");
        }
        if !(self.zero_input_tol.is_finite() && self.zero_input_tol > 0.0) {
            return bad("zero_input_tol must be a positive number");
        }
        if !(self.tie_rel_tol.is_finite() && self.tie_rel_tol >= 0.0) {
            return bad("tie_rel_tol must be non-negative");
        }
        Ok(())
    }
}

/// How a component (or kernel run) ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    ConvergedSeries,
    ConvergedPower,
    SkippedBound,
    DiscardedHalf,
    Zero,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ConvergedSeries => "converged-series",
            Status::ConvergedPower => "converged-power",
            Status::SkippedBound => "skipped-bound",
            Status::DiscardedHalf => "discarded-half",
            Status::Zero => "zero",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of one kernel run on a component-local vector.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    /// Power runs: L1-normalised eigenvector estimate. Series runs: the
    /// accumulated (unnormalised) sum.
    pub vector: Vec<f64>,
    pub lambda_est: f64,
    pub iterations: usize,
    pub status: Status,
    /// `false` when the run stopped at `max_iter`.
    pub converged: bool,
    /// L1 mass of `lim (M/λ)ᵏ x₀`, the size the normalised vector would have
    /// inside a non-normalised iteration started from `x₀`.
    pub mass: f64,
}

/// Outcome of [`series_accumulate`].
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesOutcome {
    Converged(IterationOutcome),
    /// Terms stopped shrinking at a checkpoint; the caller should switch to
    /// power iteration.
    Diverged(DivergedSeries),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergedSeries {
    pub iterations: usize,
    /// Latest term `(M/λ)ᵏ v`; power iteration can continue from here.
    pub last_term: Vec<f64>,
    pub partial_sum: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Converging,
    NotConverging,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discard {
    Discard,
    Continue,
}

/// Route chosen for a member of a one-vertex batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleRoute {
    /// Closed-form geometric series against the running maximum.
    Series,
    /// Own eigenvalue reaches the running maximum: the normalised 1×1
    /// eigenvector (rank 1) is used instead.
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleRank {
    pub rank: f64,
    pub route: SingleRoute,
}

pub(crate) fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

pub(crate) fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn check_start<M: LinearOperator + ?Sized>(op: &M, x: &[f64]) -> Result<()> {
    if x.len() != op.dim() {
        return Err(SolveError::DimensionMismatch {
            expected: op.dim(),
            actual: x.len(),
        });
    }
    if x.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(SolveError::InvalidArgument(
            "start vector must be finite and non-negative".into(),
        ));
    }
    if !x.iter().any(|&v| v > 0.0) {
        return Err(SolveError::ZeroStart);
    }
    Ok(())
}

/// Uniform positive start vector with unit L1 norm.
pub fn uniform_start(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

/// Normalised power iteration `x ← Mx / ‖Mx‖₁` until the largest entry
/// change drops below `tol` or `max_iter` is reached.
pub fn power_iteration<M: LinearOperator + ?Sized>(
    op: &M,
    x0: &[f64],
    opts: &SolveOptions,
) -> Result<IterationOutcome> {
    check_start(op, x0)?;
    Ok(power_run(
        op,
        x0,
        &PowerControl {
            check_scale: 1.0,
            discard_against: None,
        },
        opts,
    ))
}

pub(crate) struct PowerControl {
    /// L1 norm the iterate is held at while testing convergence.
    pub check_scale: f64,
    /// Running maximum eigenvalue for early discards, if enabled.
    pub discard_against: Option<f64>,
}

pub(crate) fn power_run<M: LinearOperator + ?Sized>(
    op: &M,
    start: &[f64],
    ctl: &PowerControl,
    opts: &SolveOptions,
) -> IterationOutcome {
    let dim = op.dim();
    let start_norm = l1(start);
    let scale = ctl.check_scale;
    let mut x: Vec<f64> = start.iter().map(|v| v / start_norm * scale).collect();
    let mut y = vec![0.0; dim];
    let mut lambda = 0.0;
    let mut log_growth = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    let mut status = Status::ConvergedPower;

    while iterations < opts.max_iter {
        iterations += 1;
        op.apply(&x, &mut y);
        let norm = l1(&y);
        if !(norm > 0.0 && norm.is_finite()) {
            // nilpotent block: the start vector is annihilated
            lambda = 0.0;
            converged = true;
            break;
        }
        lambda = norm / scale;
        log_growth += lambda.ln();
        let f = scale / norm;
        let mut change: f64 = 0.0;
        for (xi, yi) in x.iter_mut().zip(&y) {
            let next = yi * f;
            change = change.max((next - *xi).abs());
            *xi = next;
        }
        if let Some(lambda_max) = ctl.discard_against {
            if opts.eig_check_at.contains(&iterations)
                && early_discard(lambda, lambda_max, opts.half_factor) == Discard::Discard
            {
                status = Status::DiscardedHalf;
                break;
            }
        }
        if change < opts.tol {
            converged = true;
            break;
        }
    }

    let mass = if lambda > 0.0 {
        start_norm * (log_growth - iterations as f64 * lambda.ln()).exp()
    } else {
        start_norm
    };
    x.iter_mut().for_each(|v| *v /= scale);
    IterationOutcome {
        vector: x,
        lambda_est: lambda,
        iterations,
        status,
        converged,
        mass,
    }
}

/// `‖next‖₁ / ‖prev‖₁`; for a normalised `prev` this is the L1 norm of the
/// unnormalised product, which tends to the dominant eigenvalue.
pub fn estimate_eigenvalue(prev: &[f64], next_unnormalized: &[f64]) -> Result<f64> {
    if prev.len() != next_unnormalized.len() {
        return Err(SolveError::DimensionMismatch {
            expected: prev.len(),
            actual: next_unnormalized.len(),
        });
    }
    let denom = l1(prev);
    if denom == 0.0 {
        return Err(SolveError::ZeroStart);
    }
    Ok(l1(next_unnormalized) / denom)
}

/// Partial sums of `Σ_{i≥0} (M/λ_max)ⁱ v`.
///
/// Stops when the latest term's largest entry is below `tol`. Every
/// `series_check_at` iterations the latest term is compared with the term at
/// the previous checkpoint; if it did not shrink the series is reported as
/// diverged.
pub fn series_accumulate<M: LinearOperator + ?Sized>(
    op: &M,
    v: &[f64],
    lambda_max: f64,
    opts: &SolveOptions,
) -> Result<SeriesOutcome> {
    check_start(op, v)?;
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(SolveError::InvalidArgument(format!(
            "lambda_max must be positive, got {lambda_max}"
        )));
    }
    Ok(series_run(op, v, lambda_max, opts, true))
}

pub(crate) fn series_run<M: LinearOperator + ?Sized>(
    op: &M,
    v: &[f64],
    lambda_max: f64,
    opts: &SolveOptions,
    check_divergence: bool,
) -> SeriesOutcome {
    let mut sum = v.to_vec();
    let mut term = v.to_vec();
    let mut next = vec![0.0; v.len()];
    let mut checkpoint = max_abs(v);
    let mut growth = 0.0;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iter {
        iterations += 1;
        op.apply(&term, &mut next);
        let before = l1(&term);
        next.iter_mut().for_each(|t| *t /= lambda_max);
        if before > 0.0 {
            growth = lambda_max * l1(&next) / before;
        }
        std::mem::swap(&mut term, &mut next);
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        let latest = max_abs(&term);
        if latest < opts.tol {
            converged = true;
            break;
        }
        if check_divergence && iterations % opts.series_check_at == 0 {
            if detect_divergence(checkpoint, latest) == Convergence::NotConverging {
                return SeriesOutcome::Diverged(DivergedSeries {
                    iterations,
                    last_term: term,
                    partial_sum: sum,
                });
            }
            checkpoint = latest;
        }
    }

    let mass = l1(&sum);
    SeriesOutcome::Converged(IterationOutcome {
        vector: sum,
        lambda_est: growth,
        iterations,
        status: Status::ConvergedSeries,
        converged,
        mass,
    })
}

/// Terms converge only if the current max-norm is strictly below the one at
/// the previous checkpoint.
pub fn detect_divergence(previous_checkpoint: f64, current: f64) -> Convergence {
    if current < previous_checkpoint * (1.0 - 1e-12) {
        Convergence::Converging
    } else {
        Convergence::NotConverging
    }
}

/// Early stop for power runs whose estimate is far below the running maximum.
pub fn early_discard(lambda_est: f64, lambda_max: f64, half_factor: f64) -> Discard {
    if lambda_est < half_factor * lambda_max {
        Discard::Discard
    } else {
        Discard::Continue
    }
}

/// Closed-form ranks for a batch of one-vertex components.
///
/// A member with self-loop weight `a` and incoming weight `w` gets
/// `w·λ/(λ − a)` (the sum of `w·(a/λ)ⁱ`) when `λ_max > a`. Otherwise its own
/// eigenvalue reaches the maximum and it takes the normalised 1×1 eigenvector,
/// rank 1. Zero input always gives rank 0.
pub fn single_vertex_batch(
    group: &SingleVertexGroup,
    weights: &[f64],
    lambda_max: f64,
) -> Result<Vec<SingleRank>> {
    if weights.len() != group.len() {
        return Err(SolveError::DimensionMismatch {
            expected: group.len(),
            actual: weights.len(),
        });
    }
    weights
        .iter()
        .zip(&group.self_loops)
        .map(|(&w, &a)| {
            if !(w.is_finite() && w >= 0.0) {
                return Err(SolveError::InvalidArgument(format!(
                    "incoming weight {w} must be finite and non-negative"
                )));
            }
            let rank = if w == 0.0 {
                SingleRank {
                    rank: 0.0,
                    route: SingleRoute::Series,
                }
            } else if lambda_max > a {
                SingleRank {
                    rank: if a == 0.0 {
                        w
                    } else {
                        w * lambda_max / (lambda_max - a)
                    },
                    route: SingleRoute::Series,
                }
            } else {
                SingleRank {
                    rank: 1.0,
                    route: SingleRoute::Power,
                }
            };
            Ok(rank)
        })
        .collect()
}
