//! Exact maxima for small instances: the largest set of pairwise disjoint
//! edges, by branch and bound over the disjointness graph of all C(N,2)
//! edges. Grounds the pipeline's output from above at desk scale.

use crate::drawing::{edge_key, Drawing, EdgeKey};
use crate::extract::{extract_pipeline, verify_disjoint, PipelineError};
use crate::matching::MatchingConfig;
use thiserror::Error;

pub const DEFAULT_LIMIT_N: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle supports up to {limit} vertices, drawing has {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("drawing fails validation with {0} violation(s)")]
    InvalidDrawing(usize),
}

/// Maximum number of pairwise disjoint edges, with a witness. Exhaustive
/// (branch and bound), exact, and deterministic.
pub fn max_disjoint_edges_exact(
    d: &Drawing,
    limit_n: usize,
) -> Result<(usize, Vec<EdgeKey>), OracleError> {
    let n = d.n_vertices();
    let limit = limit_n.min(16); // u128 adjacency: C(16,2) = 120 fits
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    let report = d.validate();
    if !report.is_ok() {
        return Err(OracleError::InvalidDrawing(report.violations.len()));
    }

    // Vertices of the search graph: all edges of K, in id order.
    let ids: Vec<_> = d.vertex_ids().collect();
    let mut edges: Vec<EdgeKey> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push(edge_key(ids[i], ids[j]));
        }
    }
    let cm = d.crossing_matrix();
    let m = edges.len();
    let mut adj = vec![0u128; m];
    for a in 0..m {
        for b in (a + 1)..m {
            let (e1, e2) = (edges[a], edges[b]);
            let shares = e1.0 == e2.0 || e1.0 == e2.1 || e1.1 == e2.0 || e1.1 == e2.1;
            if shares || cm.crossings(e1, e2) == 1 {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }

    let mut best: (usize, u128) = (0, 0);
    let all: u128 = if m == 128 { !0 } else { (1u128 << m) - 1 };
    branch(&adj, all, 0, 0, &mut best);
    let witness: Vec<EdgeKey> = (0..m).filter(|&v| best.1 >> v & 1 == 1).map(|v| edges[v]).collect();
    debug_assert!(verify_disjoint(d, &witness).is_ok());
    Ok((best.0, witness))
}

fn branch(adj: &[u128], cand: u128, picked: u128, size: usize, best: &mut (usize, u128)) {
    if size > best.0 {
        *best = (size, picked);
    }
    if cand == 0 || size + cand.count_ones() as usize <= best.0 {
        return;
    }
    // Branch on the candidate with the most candidate neighbors: including
    // it clears the most, excluding it cuts the bound fastest.
    let mut v = 0;
    let mut vdeg = 0;
    let mut rest = cand;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let deg = (adj[u] & cand).count_ones();
        if deg >= vdeg {
            v = u;
            vdeg = deg;
        }
    }
    // Include v.
    branch(adj, cand & !adj[v] & !(1u128 << v), picked | 1 << v, size + 1, best);
    // Exclude v.
    branch(adj, cand & !(1u128 << v), picked, size, best);
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub pipeline_size: usize,
    pub oracle_size: usize,
    pub pipeline_edges: Vec<(u32, u32)>,
    pub oracle_edges: Vec<EdgeKey>,
}

#[derive(Debug, Error)]
pub enum CompareError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("pipeline found {pipeline} disjoint edges but the exact maximum is {oracle}")]
    PipelineExceedsOracle { pipeline: usize, oracle: usize },
}

/// Runs both the guarantee pipeline and the exact oracle; the pipeline can
/// never beat the oracle.
pub fn compare_pipeline_vs_oracle(
    d: &Drawing,
    cfg: &MatchingConfig,
    limit_n: usize,
) -> Result<Comparison, CompareError> {
    let (oracle_size, oracle_edges) = max_disjoint_edges_exact(d, limit_n)?;
    let report = extract_pipeline(d, cfg)?;
    let pipeline_size = report.chosen.len();
    if pipeline_size > oracle_size {
        return Err(CompareError::PipelineExceedsOracle {
            pipeline: pipeline_size,
            oracle: oracle_size,
        });
    }
    Ok(Comparison {
        pipeline_size,
        oracle_size,
        pipeline_edges: report.chosen,
        oracle_edges,
    })
}
