//! The three set systems over the labeled ground set X = {v_1, .., v_n}:
//! triangle interiors S, apex-arc crossing sets S', and index intervals I.
//!
//! The load-bearing fact is the parity identity S'_{ij} = S_{ij} Δ I_{ij}:
//! the arc from the apex to v_k crosses the arc v_i v_j exactly when v_k is
//! inside the triangle xor between the labels. `check_symdiff_identity`
//! asserts it row by row, which cross-checks the Jordan interior predicate,
//! the crossing matrix, and the labeling against one another.

use crate::arrangement::cell_count;
use crate::bitrow::BitRow;
use crate::drawing::{edge_key, triangle_loop, Drawing, Labeling, TriangleError};
use crate::geometry::{Point, PointLocation};
use crate::scaled::{pair_rank, point_in_loop, Coord, Geom, ScaledView};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    Interior,
    Crossing,
    Interval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetRow {
    pub kind: RowKind,
    /// 1-based label pair, i < j.
    pub i: usize,
    pub j: usize,
    pub members: BitRow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    pub ground_size: usize,
    /// One row per label pair i < j, in `pair_rank` order of (i-1, j-1).
    pub rows: Vec<SetRow>,
}

impl SetSystem {
    pub fn row(&self, i: usize, j: usize) -> &SetRow {
        &self.rows[pair_rank(self.ground_size, i - 1, j - 1)]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetSysError {
    #[error("ground vertex v{k} lies on the boundary of triangle ({i}, {j})")]
    InternalBoundaryContact { i: usize, j: usize, k: usize },
    #[error(transparent)]
    Triangle(#[from] TriangleError),
}

/// S_{ij}: ground vertices strictly inside the triangle through the apex,
/// v_i, and v_j.
pub fn build_interior_sets(d: &Drawing, lab: &Labeling) -> Result<SetSystem, SetSysError> {
    match d.scaled_view() {
        ScaledView::Small(g) => interior_sets_on(g, d, lab),
        ScaledView::Big(g) => interior_sets_on(g, d, lab),
    }
}

fn interior_sets_on<T: Coord>(
    g: &Geom<T>,
    d: &Drawing,
    lab: &Labeling,
) -> Result<SetSystem, SetSysError> {
    let n = lab.n();
    let apex = d.idx_of(lab.apex()).unwrap();
    let vidx: Vec<usize> = (1..=n).map(|k| d.idx_of(lab.vertex(k)).unwrap()).collect();
    let mut rows = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let tri = triangle_loop(g, apex, vidx[i - 1], vidx[j - 1]);
            let mut members = BitRow::empty(n);
            for k in 1..=n {
                if k == i || k == j {
                    continue;
                }
                match point_in_loop(&g.verts[vidx[k - 1]], &tri) {
                    PointLocation::Inside => members.insert(k),
                    PointLocation::Outside => {}
                    PointLocation::OnBoundary => {
                        return Err(SetSysError::InternalBoundaryContact { i, j, k })
                    }
                }
            }
            rows.push(SetRow {
                kind: RowKind::Interior,
                i,
                j,
                members,
            });
        }
    }
    Ok(SetSystem {
        ground_size: n,
        rows,
    })
}

/// S'_{ij}: ground vertices v_k whose apex arc crosses the arc v_i v_j.
pub fn build_crossing_sets(d: &Drawing, lab: &Labeling) -> SetSystem {
    let n = lab.n();
    let cm = d.crossing_matrix();
    let apex = lab.apex();
    let mut rows = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let eij = edge_key(lab.vertex(i), lab.vertex(j));
            let mut members = BitRow::empty(n);
            for k in 1..=n {
                if k == i || k == j {
                    continue;
                }
                if cm.crossings(edge_key(apex, lab.vertex(k)), eij) == 1 {
                    members.insert(k);
                }
            }
            rows.push(SetRow {
                kind: RowKind::Crossing,
                i,
                j,
                members,
            });
        }
    }
    SetSystem {
        ground_size: n,
        rows,
    }
}

/// I_{ij} = {v_k : i < k < j}.
pub fn build_intervals(n: usize) -> SetSystem {
    assert!(n >= 2);
    let mut rows = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in (i + 1)..=n {
            rows.push(SetRow {
                kind: RowKind::Interval,
                i,
                j,
                members: BitRow::from_members(n, (i + 1)..j),
            });
        }
    }
    SetSystem {
        ground_size: n,
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymdiffViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

/// Verifies S'_{ij} = S_{ij} Δ I_{ij} for every pair; returns every (i,j,k)
/// where the two sides disagree on v_k.
pub fn check_symdiff_identity(
    interiors: &SetSystem,
    crossings: &SetSystem,
    intervals: &SetSystem,
) -> Vec<SymdiffViolation> {
    let n = interiors.ground_size;
    assert_eq!(n, crossings.ground_size);
    assert_eq!(n, intervals.ground_size);
    let mut out = Vec::new();
    for (idx, s) in interiors.rows.iter().enumerate() {
        let sp = &crossings.rows[idx];
        let iv = &intervals.rows[idx];
        let expect = s.members.symdiff(&iv.members);
        if expect != sp.members {
            let diff = expect.symdiff(&sp.members);
            for k in diff.members() {
                out.push(SymdiffViolation { i: s.i, j: s.j, k });
            }
        }
    }
    out
}

/// Number of distinct membership signatures the rows induce on the ground
/// set (the cells of their Venn diagram, empty cell excluded unless some
/// element realizes it).
pub fn count_equiv_classes(rows: &[&SetRow], ground_size: usize) -> usize {
    let mut sigs: Vec<Vec<u64>> = (1..=ground_size)
        .map(|k| {
            let mut sig = vec![0u64; rows.len().div_ceil(64)];
            for (r, row) in rows.iter().enumerate() {
                if row.members.contains(k) {
                    sig[r / 64] |= 1 << (r % 64);
                }
            }
            sig
        })
        .collect();
    sigs.sort();
    sigs.dedup();
    sigs.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShatterProbe {
    pub m: usize,
    pub observed_classes: usize,
    pub bound: usize,
}

/// Dual-shatter probe: the maximum class count over random m-subfamilies.
/// The paired bound depends on what the system contains: 3m for intervals
/// only, 5m² for interiors only, 120m³ once crossing rows are in play.
pub fn probe_shatter(sys: &SetSystem, m: usize, trials: usize, seed: u64) -> ShatterProbe {
    assert!(m <= sys.rows.len());
    let bound = shatter_bound(sys, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut observed = 0;
    for _ in 0..trials.max(1) {
        let picks = rand::seq::index::sample(&mut rng, sys.rows.len(), m);
        let rows: Vec<&SetRow> = picks.iter().map(|r| &sys.rows[r]).collect();
        observed = observed.max(count_equiv_classes(&rows, sys.ground_size));
    }
    ShatterProbe {
        m,
        observed_classes: observed,
        bound,
    }
}

fn shatter_bound(sys: &SetSystem, m: usize) -> usize {
    let mut has_interior = false;
    let mut has_crossing = false;
    let mut has_interval = false;
    for r in &sys.rows {
        match r.kind {
            RowKind::Interior => has_interior = true,
            RowKind::Crossing => has_crossing = true,
            RowKind::Interval => has_interval = true,
        }
    }
    if has_crossing {
        120 * m * m * m
    } else if has_interior {
        5 * m * m
    } else {
        debug_assert!(has_interval || sys.rows.is_empty());
        3 * m.max(1)
    }
}

/// Cells of the plane arrangement of the given triangle curves. Triangles
/// sharing an apex arc contribute that arc once: the count is over the union
/// of arcs, not a multiset of curves.
pub fn cell_count_triangles(d: &Drawing, lab: &Labeling, pairs: &[(usize, usize)]) -> usize {
    let mut arcs: Vec<(crate::drawing::VertexId, crate::drawing::VertexId)> = Vec::new();
    for &(i, j) in pairs {
        let (a, b) = (lab.vertex(i), lab.vertex(j));
        arcs.push(edge_key(lab.apex(), a));
        arcs.push(edge_key(lab.apex(), b));
        arcs.push(edge_key(a, b));
    }
    arcs.sort();
    arcs.dedup();
    let chains: Vec<Vec<Point>> = arcs
        .iter()
        .map(|&(u, v)| d.arc(u, v).unwrap().points().to_vec())
        .collect();
    cell_count(&chains)
}

/// Matching pairs split by the row: exactly one endpoint inside.
pub fn stabbing_number(row: &SetRow, pairs: &[(usize, usize)]) -> usize {
    pairs
        .iter()
        .filter(|&&(u, w)| row.members.contains(u) != row.members.contains(w))
        .count()
}
