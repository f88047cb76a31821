//! From a low-stabbing matching to verified pairwise disjoint edges.
//!
//! Two matching pairs conflict when either pair's interior or crossing row
//! stabs the other pair. Non-conflicting pairs are disjoint edges of the
//! drawing, so an independent set in the conflict graph is the answer; the
//! Turán-style minimum-degree greedy guarantees its size, and an exact
//! geometric pass re-verifies disjointness without trusting any of that.

use crate::drawing::{edge_key, ApexError, Drawing, EdgeKey, LabelError};
use crate::geometry::{polyline_crossings, Point};
use crate::matching::{low_stab_matching, Matching, MatchingConfig};
use crate::setsys::{
    build_crossing_sets, build_interior_sets, build_intervals, check_symdiff_identity, SetSysError,
    SetSystem,
};
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    /// The matching pairs, by label; vertex v of the graph is `pairs[v]`.
    pub pairs: Vec<(usize, usize)>,
    /// Symmetric, no self-loops; row-major upper triangle mirrored.
    adj: Vec<bool>,
    pub edge_count: usize,
}

impl ConflictGraph {
    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.pairs.len() + b]
    }

    pub fn degree(&self, v: usize) -> usize {
        let n = self.pairs.len();
        (0..n).filter(|&u| self.adj[v * n + u]).count()
    }

    /// ceil(V^2 / (2e + V)): the independent-set size the greedy must reach.
    pub fn turan_bound(&self) -> usize {
        let v = self.pairs.len();
        if v == 0 {
            return 0;
        }
        (v * v).div_ceil(2 * self.edge_count + v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConflictError {
    #[error("no set-system row for matching pair ({0}, {1})")]
    MissingRow(usize, usize),
}

/// Adjacency from the four stabbing conditions: S_{ij} or S'_{ij} stabs
/// (k,l), or S_{kl} or S'_{kl} stabs (i,j).
pub fn build_conflict_graph(
    m: &Matching,
    interiors: &SetSystem,
    crossings: &SetSystem,
) -> Result<ConflictGraph, ConflictError> {
    let n = interiors.ground_size;
    let pairs = m.pairs.clone();
    let expect_rows = n * (n - 1) / 2;
    for &(i, j) in &pairs {
        if crate::scaled::pair_rank(n, i - 1, j - 1) >= expect_rows
            || interiors.rows.len() != expect_rows
            || crossings.rows.len() != expect_rows
        {
            return Err(ConflictError::MissingRow(i, j));
        }
    }
    let v = pairs.len();
    let mut adj = vec![false; v * v];
    let mut edge_count = 0;
    let stabs = |sys: &SetSystem, (i, j): (usize, usize), (k, l): (usize, usize)| {
        let row = sys.row(i, j);
        row.members.contains(k) != row.members.contains(l)
    };
    for a in 0..v {
        for b in (a + 1)..v {
            let (p, q) = (pairs[a], pairs[b]);
            let conflict = stabs(interiors, p, q)
                || stabs(crossings, p, q)
                || stabs(interiors, q, p)
                || stabs(crossings, q, p);
            if conflict {
                adj[a * v + b] = true;
                adj[b * v + a] = true;
                edge_count += 1;
            }
        }
    }
    Ok(ConflictGraph {
        pairs,
        adj,
        edge_count,
    })
}

/// Minimum-degree greedy: pick the lowest-degree surviving vertex (ties by
/// index), drop its closed neighborhood, repeat. Meets the Turán bound.
pub fn turan_independent_set(g: &ConflictGraph) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut picked = Vec::new();
    loop {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if alive[v] && best.is_none_or(|b| degree[v] < degree[b]) {
                best = Some(v);
            }
        }
        let Some(v) = best else { break };
        picked.push(v);
        let mut removed: Vec<usize> = vec![v];
        removed.extend((0..n).filter(|&u| alive[u] && g.adjacent(v, u)));
        for &u in &removed {
            alive[u] = false;
        }
        for &u in &removed {
            for w in 0..n {
                if alive[w] && g.adjacent(u, w) {
                    degree[w] -= 1;
                }
            }
        }
    }
    picked.sort_unstable();
    picked
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointnessFailure {
    pub edges: (EdgeKey, EdgeKey),
    /// Crossing point when the failure is a crossing, None for a shared
    /// vertex.
    pub at: Option<Point>,
}

/// Exact all-pairs disjointness check on the chosen edges: no shared
/// vertices, no arc crossings. Independent of the combinatorial pipeline.
pub fn verify_disjoint(d: &Drawing, chosen: &[EdgeKey]) -> Result<(), DisjointnessFailure> {
    for (a, &e1) in chosen.iter().enumerate() {
        for &e2 in &chosen[(a + 1)..] {
            if e1.0 == e2.0 || e1.0 == e2.1 || e1.1 == e2.0 || e1.1 == e2.1 {
                return Err(DisjointnessFailure {
                    edges: (e1, e2),
                    at: None,
                });
            }
            let arc1 = d.arc(e1.0, e1.1).expect("chosen edge of K");
            let arc2 = d.arc(e2.0, e2.1).expect("chosen edge of K");
            let meet = polyline_crossings(arc1, arc2).expect("valid drawing has clean contacts");
            if let Some(p) = meet.crossings.first() {
                return Err(DisjointnessFailure {
                    edges: (e1, e2),
                    at: Some(p.clone()),
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractionReport {
    /// The disjoint edges found, as vertex id pairs.
    pub chosen: Vec<(u32, u32)>,
    pub apex: u32,
    pub ground_size: usize,
    pub conflict_vertices: usize,
    pub conflict_edges: usize,
    pub turan_bound: usize,
    pub max_stab: usize,
    pub verified_disjoint: bool,
    /// (stage, seconds); cleared by callers that need byte-stable output.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<(String, f64)>,
}

impl ExtractionReport {
    pub fn without_timings(mut self) -> Self {
        self.timings.clear();
        self
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("drawing fails validation with {0} violation(s)")]
    InvalidDrawing(usize),
    #[error(transparent)]
    Apex(#[from] ApexError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    SetSys(#[from] SetSysError),
    #[error("symmetric-difference identity violated at {count} places, first at (i={i}, j={j}, k={k})")]
    IdentityViolation {
        count: usize,
        i: usize,
        j: usize,
        k: usize,
    },
    #[error(transparent)]
    Conflict(#[from] ConflictError),
    #[error("chosen edges failed geometric verification between ({} {}) and ({} {})",
            .0.edges.0.0, .0.edges.0.1, .0.edges.1.0, .0.edges.1.1)]
    VerificationFailed(DisjointnessFailure),
}

/// The whole route: apex, labels, set systems, identity check, matching,
/// conflict graph, independent set, geometric verification.
pub fn extract_pipeline(d: &Drawing, cfg: &MatchingConfig) -> Result<ExtractionReport, PipelineError> {
    let mut timings: Vec<(String, f64)> = Vec::new();
    let lap = |label: &str, t: &mut Instant, timings: &mut Vec<(String, f64)>| {
        timings.push((label.to_string(), t.elapsed().as_secs_f64()));
        *t = Instant::now();
    };
    let mut t = Instant::now();

    let report = d.validate();
    if !report.is_ok() {
        return Err(PipelineError::InvalidDrawing(report.violations.len()));
    }
    lap("validate", &mut t, &mut timings);

    let apex = d.select_apex()?;
    let lab = d.label_ccw(apex)?;
    lap("label", &mut t, &mut timings);

    let interiors = build_interior_sets(d, &lab)?;
    let crossings = build_crossing_sets(d, &lab);
    let intervals = build_intervals(lab.n());
    lap("setsys", &mut t, &mut timings);

    let violations = check_symdiff_identity(&interiors, &crossings, &intervals);
    if let Some(first) = violations.first() {
        return Err(PipelineError::IdentityViolation {
            count: violations.len(),
            i: first.i,
            j: first.j,
            k: first.k,
        });
    }
    lap("identity", &mut t, &mut timings);

    let combined = SetSystem {
        ground_size: lab.n(),
        rows: interiors
            .rows
            .iter()
            .chain(crossings.rows.iter())
            .cloned()
            .collect(),
    };
    let matching = low_stab_matching(&combined, lab.n(), cfg);
    lap("matching", &mut t, &mut timings);

    let graph = build_conflict_graph(&matching, &interiors, &crossings)?;
    let picked = turan_independent_set(&graph);
    lap("conflict", &mut t, &mut timings);

    let chosen_edges: Vec<EdgeKey> = picked
        .iter()
        .map(|&v| {
            let (i, j) = graph.pairs[v];
            edge_key(lab.vertex(i), lab.vertex(j))
        })
        .collect();
    verify_disjoint(d, &chosen_edges).map_err(PipelineError::VerificationFailed)?;
    lap("verify", &mut t, &mut timings);

    Ok(ExtractionReport {
        chosen: chosen_edges.iter().map(|&(u, v)| (u.0, v.0)).collect(),
        apex: apex.0,
        ground_size: lab.n(),
        conflict_vertices: graph.n(),
        conflict_edges: graph.edge_count,
        turan_bound: graph.turan_bound(),
        max_stab: matching.max_stab,
        verified_disjoint: true,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::VertexId;
    use crate::geometry::Polyline;
    use std::collections::BTreeMap;

    fn straight_drawing(coords: &[(i64, i64)]) -> Drawing {
        let vertices: Vec<(VertexId, Point)> = coords
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| (VertexId(k as u32), Point::from_ints(x, y)))
            .collect();
        let mut arcs = BTreeMap::new();
        for i in 0..coords.len() {
            for j in (i + 1)..coords.len() {
                arcs.insert(
                    (VertexId(i as u32), VertexId(j as u32)),
                    Polyline::segment(
                        Point::from_ints(coords[i].0, coords[i].1),
                        Point::from_ints(coords[j].0, coords[j].1),
                    )
                    .unwrap(),
                );
            }
        }
        Drawing::new(vertices, arcs).unwrap()
    }

    fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> ConflictGraph {
        let mut adj = vec![false; n * n];
        for &(a, b) in edges {
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        ConflictGraph {
            pairs: (0..n).map(|v| (2 * v + 1, 2 * v + 2)).collect(),
            adj,
            edge_count: edges.len(),
        }
    }

    #[test]
    fn turan_greedy_on_small_graphs() {
        let edgeless = graph_from_edges(4, &[]);
        assert_eq!(turan_independent_set(&edgeless), vec![0, 1, 2, 3]);
        assert_eq!(edgeless.turan_bound(), 4);

        let complete = graph_from_edges(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        );
        assert_eq!(turan_independent_set(&complete).len(), 1);
        assert_eq!(complete.turan_bound(), 1);

        let path = graph_from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let ind = turan_independent_set(&path);
        assert_eq!(ind.len(), 2);
        assert!(path.turan_bound() <= 2);
    }

    #[test]
    fn turan_greedy_meets_bound_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..=12);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((a, b));
                    }
                }
            }
            let g = graph_from_edges(n, &edges);
            let ind = turan_independent_set(&g);
            assert!(ind.len() >= g.turan_bound());
            for (x, &a) in ind.iter().enumerate() {
                for &b in &ind[(x + 1)..] {
                    assert!(!g.adjacent(a, b));
                }
            }
        }
    }

    #[test]
    fn verify_disjoint_on_quadrilateral() {
        let d = straight_drawing(&[(0, 0), (10, 1), (11, 11), (1, 10)]);
        let v = |k: u32| VertexId(k);
        // Opposite sides are disjoint.
        assert!(verify_disjoint(&d, &[(v(0), v(1)), (v(2), v(3))]).is_ok());
        // Diagonals cross, with a witness point.
        let err = verify_disjoint(&d, &[(v(0), v(2)), (v(1), v(3))]).unwrap_err();
        assert!(err.at.is_some());
        // Shared vertex.
        let err = verify_disjoint(&d, &[(v(0), v(1)), (v(1), v(2))]).unwrap_err();
        assert!(err.at.is_none());
    }

    #[test]
    fn pipeline_on_convex_nine() {
        let coords: Vec<(i64, i64)> = (1..=8).map(|t| (t, t * t)).collect();
        let mut coords = coords;
        coords.push((0, 3)); // ninth vertex, still convex position
        let d = straight_drawing(&coords);
        assert!(d.validate().is_ok(), "{:?}", d.validate().violations);
        let report = extract_pipeline(&d, &MatchingConfig::default()).unwrap();
        assert_eq!(report.ground_size, 8);
        assert_eq!(report.conflict_edges, 0);
        assert_eq!(report.chosen.len(), 4);
        assert!(report.verified_disjoint);
    }

    #[test]
    fn pipeline_on_triangle() {
        let d = straight_drawing(&[(0, 0), (4, 1), (1, 4)]);
        let report = extract_pipeline(&d, &MatchingConfig::default()).unwrap();
        assert_eq!(report.chosen.len(), 1);
    }

    #[test]
    fn pipeline_rejects_invalid_drawing() {
        let d = straight_drawing(&[(0, 0), (1, 0), (2, 0)]);
        match extract_pipeline(&d, &MatchingConfig::default()) {
            Err(PipelineError::InvalidDrawing(_)) => {}
            other => panic!("expected InvalidDrawing, got {:?}", other.map(|r| r.chosen)),
        }
    }

    #[test]
    fn pipeline_on_general_position_instance() {
        let coords = [(39, 16), (22, 33), (1, 29), (15, 3), (10, 7), (23, 30), (15, 24)];
        let d = straight_drawing(&coords);
        let report = extract_pipeline(&d, &MatchingConfig::default()).unwrap();
        assert!(report.verified_disjoint);
        assert!(report.chosen.len() >= report.turan_bound);
        assert!(!report.chosen.is_empty());
    }
}
