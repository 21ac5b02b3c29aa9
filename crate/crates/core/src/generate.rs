//! Seeded synthetic graphs.
//!
//! All generators are deterministic for a fixed seed (ChaCha8) and shuffle the
//! vertex ids so that component structure is not visible in the numbering.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SolveError};
use crate::graph::{SparseGraph, VertexId};

type Edge = (VertexId, VertexId, f64);

fn invalid(msg: impl Into<String>) -> SolveError {
    SolveError::InvalidArgument(msg.into())
}

fn shuffled(n: usize, edges: Vec<Edge>, rng: &mut ChaCha8Rng) -> Result<SparseGraph> {
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(rng);
    let edges = edges.into_iter().map(|(u, v, w)| (perm[u], perm[v], w));
    Ok(SparseGraph::from_edges(n, edges)?)
}

/// Directed cycle on `start..start + size` with one unit self-loop and up to
/// `size` random chords, keeping every row sum at most 3.
fn cycle_with_chords(start: usize, size: usize, rng: &mut ChaCha8Rng, edges: &mut Vec<Edge>) {
    let mut row = vec![0.0; size];
    if size > 1 {
        for (i, r) in row.iter_mut().enumerate() {
            edges.push((start + i, start + (i + 1) % size, 1.0));
            *r += 1.0;
        }
    }
    let looped = rng.gen_range(0..size);
    edges.push((start + looped, start + looped, 1.0));
    row[looped] += 1.0;
    for _ in 0..size {
        let (i, j) = (rng.gen_range(0..size), rng.gen_range(0..size));
        if row[i] + 1.0 <= 3.0 {
            edges.push((start + i, start + j, 1.0));
            row[i] += 1.0;
        }
    }
}

/// A random DAG of strongly connected components with one strictly dominant
/// component.
#[derive(Debug, Clone)]
pub struct DagOfSccs {
    pub components: usize,
    pub min_size: usize,
    pub max_size: usize,
    /// Probability of a link between any ordered pair of components.
    pub link_prob: f64,
    pub seed: u64,
}

impl Default for DagOfSccs {
    fn default() -> Self {
        Self {
            components: 10,
            min_size: 5,
            max_size: 5,
            link_prob: 0.3,
            seed: 0,
        }
    }
}

/// Non-dominant components are a cycle with one self-loop and a few chords,
/// every row sum at most 3. The dominant one is complete with every weight 2,
/// so its eigenvalue is `2·size ≥ 4` (a lone vertex gets a loop of weight 4).
/// Links always go from a lower to a higher creation index, and the first
/// three components are chained so at least three levels exist.
pub fn dag_of_sccs(cfg: &DagOfSccs) -> Result<SparseGraph> {
    if cfg.components == 0 || cfg.min_size == 0 || cfg.min_size > cfg.max_size {
        return Err(invalid("need components ≥ 1 and 1 ≤ min_size ≤ max_size"));
    }
    if !(0.0..=1.0).contains(&cfg.link_prob) {
        return Err(invalid("link_prob must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sizes: Vec<usize> = (0..cfg.components)
        .map(|_| rng.gen_range(cfg.min_size..=cfg.max_size))
        .collect();
    let mut starts = Vec::with_capacity(sizes.len());
    let mut n = 0;
    for &s in &sizes {
        starts.push(n);
        n += s;
    }
    let dominant = rng.gen_range(0..cfg.components);

    let mut edges = Vec::new();
    for (c, (&start, &size)) in starts.iter().zip(&sizes).enumerate() {
        if c == dominant {
            if size == 1 {
                edges.push((start, start, 4.0));
            }
            for u in start..start + size {
                for v in start..start + size {
                    if size > 1 {
                        edges.push((u, v, 2.0));
                    }
                }
            }
            continue;
        }
        cycle_with_chords(start, size, &mut rng, &mut edges);
    }

    let pick = |rng: &mut ChaCha8Rng, c: usize| starts[c] + rng.gen_range(0..sizes[c]);
    for a in 0..cfg.components {
        for b in a + 1..cfg.components {
            let chained = b == a + 1 && b <= 2;
            if chained || rng.gen_bool(cfg.link_prob) {
                let (u, v) = (pick(&mut rng, a), pick(&mut rng, b));
                edges.push((u, v, 1.0));
            }
        }
    }
    shuffled(n, edges, &mut rng)
}

/// Bow-tie graph: one giant strongly connected core, small components
/// upstream of it (IN) and small and medium components downstream (OUT).
#[derive(Debug, Clone)]
pub struct GiantComponent {
    pub n: usize,
    pub giant_fraction: f64,
    /// Random out-edges per giant vertex on top of its Hamiltonian cycle.
    pub extra_degree: usize,
    pub seed: u64,
}

impl Default for GiantComponent {
    fn default() -> Self {
        Self {
            n: 10_000,
            giant_fraction: 0.5,
            extra_degree: 3,
            seed: 0,
        }
    }
}

/// IN components are complete digraphs with self-loops on at most three
/// vertices, so their own power iterations finish in a couple of steps; links
/// inside IN only end at one-vertex components. OUT
/// components are cycles with chords and one self-loop, row sums at most 3;
/// medium ones reach a few dozen vertices. Every OUT component has an edge
/// from the core, whose eigenvalue exceeds 3 once `extra_degree ≥ 3`.
pub fn giant_component(cfg: &GiantComponent) -> Result<SparseGraph> {
    if cfg.n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    if !(cfg.giant_fraction > 0.0 && cfg.giant_fraction <= 1.0) {
        return Err(invalid("giant_fraction must lie in (0, 1]"));
    }
    let giant = ((cfg.n as f64 * cfg.giant_fraction).round() as usize).clamp(2, cfg.n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut edges = Vec::new();

    for u in 0..giant {
        edges.push((u, (u + 1) % giant, 1.0));
        for _ in 0..cfg.extra_degree {
            edges.push((u, rng.gen_range(0..giant), 1.0));
        }
        if rng.gen_bool(0.1) {
            edges.push((u, u, 1.0));
        }
    }

    let mut in_singles: Vec<usize> = Vec::new();
    let mut outs: Vec<(usize, usize)> = Vec::new();
    let mut next = giant;
    while next < cfg.n {
        let upstream = rng.gen_bool(0.5);
        let roll: f64 = rng.gen();
        let wanted = if roll < 0.7 {
            1
        } else if roll < 0.9 || upstream {
            rng.gen_range(2..=3)
        } else {
            rng.gen_range(4..=40)
        };
        let size = wanted.min(cfg.n - next);
        let start = next;
        next += size;

        if upstream {
            for u in start..start + size {
                for v in start..start + size {
                    if size > 1 || rng.gen_bool(0.5) {
                        edges.push((u, v, 1.0));
                    }
                }
            }
            for _ in 0..rng.gen_range(1..=2) {
                edges.push((start + rng.gen_range(0..size), rng.gen_range(0..giant), 1.0));
            }
            if !in_singles.is_empty() && rng.gen_bool(0.3) {
                let s = in_singles[rng.gen_range(0..in_singles.len())];
                edges.push((start + rng.gen_range(0..size), s, 1.0));
            }
            if !outs.is_empty() && rng.gen_bool(0.2) {
                let (s, k) = outs[rng.gen_range(0..outs.len())];
                edges.push((start + rng.gen_range(0..size), s + rng.gen_range(0..k), 1.0));
            }
            if size == 1 {
                in_singles.push(start);
            }
        } else {
            cycle_with_chords(start, size, &mut rng, &mut edges);
            for _ in 0..rng.gen_range(1..=2) {
                edges.push((rng.gen_range(0..giant), start + rng.gen_range(0..size), 1.0));
            }
            if !outs.is_empty() && rng.gen_bool(0.3) {
                let (s, k) = outs[rng.gen_range(0..outs.len())];
                edges.push((s + rng.gen_range(0..k), start + rng.gen_range(0..size), 1.0));
            }
            outs.push((start, size));
        }
    }
    shuffled(cfg.n, edges, &mut rng)
}

/// Weakly disconnected blocks sharing the dominant eigenvalue 2.
#[derive(Debug, Clone)]
pub struct IsolatedBlocks {
    pub blocks: usize,
    pub min_size: usize,
    pub max_size: usize,
    pub seed: u64,
}

impl Default for IsolatedBlocks {
    fn default() -> Self {
        Self {
            blocks: 2,
            min_size: 3,
            max_size: 8,
            seed: 0,
        }
    }
}

/// Each block is a directed cycle with a unit self-loop on every vertex
/// (`I + P`), whose eigenvalue is exactly 2 with a uniform eigenvector.
pub fn isolated_blocks(cfg: &IsolatedBlocks) -> Result<SparseGraph> {
    if cfg.blocks < 2 {
        return Err(invalid("need at least two blocks"));
    }
    if cfg.min_size == 0 || cfg.min_size > cfg.max_size {
        return Err(invalid("need 1 ≤ min_size ≤ max_size"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut edges = Vec::new();
    let mut n = 0;
    for _ in 0..cfg.blocks {
        let size = rng.gen_range(cfg.min_size..=cfg.max_size);
        for i in 0..size {
            edges.push((n + i, n + (i + 1) % size, 1.0));
            edges.push((n + i, n + i, 1.0));
        }
        n += size;
    }
    shuffled(n, edges, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::detect_blocks;
    use crate::condensation::find_components;

    #[test]
    fn dag_of_sccs_shape() {
        let g = dag_of_sccs(&DagOfSccs {
            seed: 7,
            ..DagOfSccs::default()
        })
        .unwrap();
        assert_eq!(g.num_vertices(), 50);
        let d = find_components(&g);
        assert_eq!(d.num_components(), 10);
        assert!(d.max_level() >= 2);
    }

    #[test]
    fn generators_are_deterministic() {
        let cfg = GiantComponent {
            n: 500,
            seed: 3,
            ..GiantComponent::default()
        };
        assert_eq!(giant_component(&cfg).unwrap(), giant_component(&cfg).unwrap());
        let other = GiantComponent { seed: 4, ..cfg };
        assert_ne!(giant_component(&other).unwrap(), giant_component(&cfg).unwrap());
    }

    #[test]
    fn isolated_blocks_are_disconnected() {
        let g = isolated_blocks(&IsolatedBlocks::default()).unwrap();
        assert_eq!(detect_blocks(&g).len(), 2);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(dag_of_sccs(&DagOfSccs {
            min_size: 3,
            max_size: 2,
            ..DagOfSccs::default()
        })
        .is_err());
        assert!(giant_component(&GiantComponent {
            giant_fraction: 0.0,
            ..GiantComponent::default()
        })
        .is_err());
        assert!(isolated_blocks(&IsolatedBlocks {
            blocks: 1,
            ..IsolatedBlocks::default()
        })
        .is_err());
    }
}
