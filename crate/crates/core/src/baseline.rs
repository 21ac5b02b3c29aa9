//! Plain power iteration on the whole graph, the reference the componentwise
//! solver is compared against.

use std::time::Instant;

use crate::error::{Result, SolveError};
use crate::graph::SparseGraph;
use crate::kernels::{power_iteration, uniform_start, IterationOutcome, SolveOptions};

#[derive(Debug, Clone)]
pub struct BaselineRun {
    /// Normalised eigenvector estimate plus iteration count and eigenvalue.
    pub outcome: IterationOutcome,
    pub wall_seconds: f64,
}

impl BaselineRun {
    pub fn centrality(&self) -> &[f64] {
        &self.outcome.vector
    }
}

/// Power iteration with `Aᵀ` from the uniform start vector. The recorded
/// wall time covers the iteration only, not building the transpose.
pub fn run_baseline(g: &SparseGraph, opts: &SolveOptions) -> Result<BaselineRun> {
    opts.validate()?;
    let n = g.num_vertices();
    if n == 0 {
        return Err(SolveError::InvalidArgument("graph has no vertices".into()));
    }
    let gt = g.transpose();
    let started = Instant::now();
    let outcome = power_iteration(&gt, &uniform_start(n), opts)?;
    if outcome.lambda_est == 0.0 {
        return Err(SolveError::Degenerate);
    }
    Ok(BaselineRun {
        outcome,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}
