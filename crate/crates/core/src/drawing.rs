//! Complete simple topological graph drawings: validation, apex selection,
//! counterclockwise labeling, triangles, and the crossing matrix.
//!
//! A drawing is a complete graph whose edges are polyline arcs. Validation
//! enforces the simple-topological-graph model: arcs are non-self-
//! intersecting, no arc passes through a foreign vertex, every pair of arcs
//! meets at most once (a shared endpoint counts), all contacts are proper
//! crossings, and no three arcs share an interior point.

use crate::geometry::{signed_area, ClosedCurve, Point, PointLocation, Polyline};
use crate::scaled::{
    build_scaled, classify_segments, convex_hull, crossing_point_big, crossing_point_f64,
    loop_area_sign, n_pairs, on_segment, orient_sign, pair_rank, point_in_loop, Coord, Geom, Pt,
    ScaledView, SegClass,
};
use num_bigint::BigInt;
use num_traits::Signed;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type EdgeKey = (VertexId, VertexId);

/// Normalizes an unordered vertex pair to (low, high).
pub fn edge_key(u: VertexId, v: VertexId) -> EdgeKey {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructuralError {
    #[error("drawing needs at least three vertices")]
    TooFewVertices,
    #[error("duplicate vertex id {0}")]
    DuplicateVertexId(VertexId),
    #[error("vertices {0} and {1} share the same point")]
    DuplicateVertexPoint(VertexId, VertexId),
    #[error("arc references unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("arc between {0} and {1} is a self-loop")]
    SelfLoopArc(VertexId, VertexId),
    #[error("missing arc between {0} and {1}")]
    MissingArc(VertexId, VertexId),
    #[error("duplicate arc between {0} and {1}")]
    DuplicateArc(VertexId, VertexId),
    #[error("arc between {0} and {1} does not start/end at its vertices")]
    EndpointMismatch(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    SelfIntersection,
    TangencyOrOverlap,
    MultipleCrossings,
    AdjacentEdgesCross,
    VertexOnArcInterior,
    TripleInteriorPoint,
    JointCoincidence,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// The offending arcs, as vertex pairs.
    pub arcs: Vec<EdgeKey>,
    /// Witness point, when one exists.
    pub witness: Option<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// 0/1 transversal crossing counts for every unordered pair of arcs.
pub struct CrossingMatrix {
    n_verts: usize,
    ids: Vec<VertexId>,
    id_to_idx: HashMap<VertexId, usize>,
    bits: Vec<u64>,
}

impl CrossingMatrix {
    fn arc_rank(&self, e: EdgeKey) -> usize {
        let i = self.id_to_idx[&e.0];
        let j = self.id_to_idx[&e.1];
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        pair_rank(self.n_verts, i, j)
    }

    /// Number of transversal crossings (0 or 1 in a valid drawing) between
    /// the arcs of two vertex pairs.
    pub fn crossings(&self, e1: EdgeKey, e2: EdgeKey) -> u32 {
        let a = self.arc_rank(e1);
        let b = self.arc_rank(e2);
        if a == b {
            return 0;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let idx = pair_rank(n_pairs(self.n_verts), a, b);
        ((self.bits[idx / 64] >> (idx % 64)) & 1) as u32
    }

    pub fn total_crossings(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

}

struct Analysis {
    report: ValidationReport,
    matrix: CrossingMatrix,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApexError {
    #[error("no vertex lies on the boundary of the unbounded cell")]
    NoOuterVertex,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("apex {0} is not a vertex of the drawing")]
    UnknownApex(VertexId),
    #[error("arcs to {0} and {1} leave the apex in the same direction")]
    AmbiguousRotation(VertexId, VertexId),
    #[error("triangle orientations do not admit a counterclockwise order")]
    InconsistentOrientation,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangleError {
    #[error("triangle indices out of range")]
    BadIndices,
    #[error("triangle curve on labels ({0}, {1}) is not simple")]
    NonSimpleTriangle(usize, usize),
}

/// Apex plus the counterclockwise ground-set order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    apex: VertexId,
    order: Vec<VertexId>,
    label_of: HashMap<VertexId, usize>,
    dropped: Option<VertexId>,
}

impl Labeling {
    fn new(apex: VertexId, order: Vec<VertexId>, dropped: Option<VertexId>) -> Self {
        let label_of = order
            .iter()
            .enumerate()
            .map(|(k, &v)| (v, k + 1))
            .collect();
        Labeling {
            apex,
            order,
            label_of,
            dropped,
        }
    }

    pub fn apex(&self) -> VertexId {
        self.apex
    }

    /// Ground-set size; always even.
    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Vertex carrying label `k`, 1-based.
    pub fn vertex(&self, k: usize) -> VertexId {
        self.order[k - 1]
    }

    /// 1-based label of a ground vertex.
    pub fn label(&self, v: VertexId) -> Option<usize> {
        self.label_of.get(&v).copied()
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// Vertex removed to make the ground set even, if any.
    pub fn dropped(&self) -> Option<VertexId> {
        self.dropped
    }
}

/// A triangle K[v0, v_i, v_j]: the simple closed curve through the apex and
/// two ground vertices.
#[derive(Debug, Clone)]
pub struct Triangle {
    pub i: usize,
    pub j: usize,
    pub curve: ClosedCurve,
}

pub struct Drawing {
    /// Sorted by id.
    verts: Vec<(VertexId, Point)>,
    /// `pair_rank` order over vertex positions; each polyline starts at the
    /// lower-position vertex.
    arcs: Vec<Polyline>,
    scaled: ScaledView,
    analysis: OnceLock<Analysis>,
}

impl Drawing {
    pub fn new(
        vertices: Vec<(VertexId, Point)>,
        arcs: BTreeMap<EdgeKey, Polyline>,
    ) -> Result<Drawing, StructuralError> {
        if vertices.len() < 3 {
            return Err(StructuralError::TooFewVertices);
        }
        let mut verts = vertices;
        verts.sort_by_key(|(id, _)| *id);
        for w in verts.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(StructuralError::DuplicateVertexId(w[0].0));
            }
        }
        {
            let mut by_point: Vec<(&Point, VertexId)> =
                verts.iter().map(|(id, p)| (p, *id)).collect();
            by_point.sort();
            for w in by_point.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(StructuralError::DuplicateVertexPoint(w[0].1, w[1].1));
                }
            }
        }
        let idx_of: HashMap<VertexId, usize> =
            verts.iter().enumerate().map(|(k, (id, _))| (*id, k)).collect();

        let n = verts.len();
        let mut slots: Vec<Option<Polyline>> = vec![None; n_pairs(n)];
        for ((u, v), poly) in arcs {
            if u == v {
                return Err(StructuralError::SelfLoopArc(u, v));
            }
            let iu = *idx_of.get(&u).ok_or(StructuralError::UnknownVertex(u))?;
            let iv = *idx_of.get(&v).ok_or(StructuralError::UnknownVertex(v))?;
            let (lo, hi) = if iu < iv { (iu, iv) } else { (iv, iu) };
            let rank = pair_rank(n, lo, hi);
            if slots[rank].is_some() {
                return Err(StructuralError::DuplicateArc(u, v));
            }
            let lo_pt = &verts[lo].1;
            let hi_pt = &verts[hi].1;
            let oriented = if poly.first() == lo_pt && poly.last() == hi_pt {
                poly
            } else if poly.first() == hi_pt && poly.last() == lo_pt {
                poly.reversed()
            } else {
                return Err(StructuralError::EndpointMismatch(u, v));
            };
            slots[rank] = Some(oriented);
        }
        let mut arcs_vec = Vec::with_capacity(slots.len());
        for (rank, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(p) => arcs_vec.push(p),
                None => {
                    let (i, j) = unrank(n, rank);
                    return Err(StructuralError::MissingArc(verts[i].0, verts[j].0));
                }
            }
        }

        let vert_points: Vec<Point> = verts.iter().map(|(_, p)| p.clone()).collect();
        let arc_points: Vec<Vec<Point>> =
            arcs_vec.iter().map(|p| p.points().to_vec()).collect();
        let scaled = build_scaled(&vert_points, &arc_points);

        Ok(Drawing {
            verts,
            arcs: arcs_vec,
            scaled,
            analysis: OnceLock::new(),
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> &[(VertexId, Point)] {
        &self.verts
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.verts.iter().map(|(id, _)| *id)
    }

    pub fn point_of(&self, v: VertexId) -> Option<&Point> {
        self.idx_of(v).map(|i| &self.verts[i].1)
    }

    pub fn arc(&self, u: VertexId, v: VertexId) -> Option<&Polyline> {
        let iu = self.idx_of(u)?;
        let iv = self.idx_of(v)?;
        if iu == iv {
            return None;
        }
        let (lo, hi) = if iu < iv { (iu, iv) } else { (iv, iu) };
        Some(&self.arcs[pair_rank(self.n_vertices(), lo, hi)])
    }

    /// All arcs with their vertex pairs, in canonical order.
    pub fn arc_pairs(&self) -> impl Iterator<Item = (EdgeKey, &Polyline)> + '_ {
        let n = self.n_vertices();
        (0..n).flat_map(move |i| {
            ((i + 1)..n).map(move |j| {
                (
                    (self.verts[i].0, self.verts[j].0),
                    &self.arcs[pair_rank(n, i, j)],
                )
            })
        })
    }

    pub(crate) fn idx_of(&self, v: VertexId) -> Option<usize> {
        self.verts.binary_search_by_key(&v, |(id, _)| *id).ok()
    }


    pub(crate) fn scaled_view(&self) -> &ScaledView {
        &self.scaled
    }

    fn analysis(&self) -> &Analysis {
        self.analysis.get_or_init(|| match &self.scaled {
            ScaledView::Small(g) => analyze(g, &self.vert_ids()),
            ScaledView::Big(g) => analyze(g, &self.vert_ids()),
        })
    }

    fn vert_ids(&self) -> Vec<VertexId> {
        self.verts.iter().map(|(id, _)| *id).collect()
    }

    /// Checks every invariant of the simple topological drawing model and
    /// reports all violations found; never fails structurally.
    pub fn validate(&self) -> &ValidationReport {
        &self.analysis().report
    }

    /// Transversal crossing counts per arc pair. Meaningful once `validate`
    /// reports no violations.
    pub fn crossing_matrix(&self) -> &CrossingMatrix {
        &self.analysis().matrix
    }

    /// Deterministically selects a vertex on the boundary of the unbounded
    /// cell: among vertices on the convex hull of all drawn ink, the one with
    /// lexicographically smallest (y, x).
    pub fn select_apex(&self) -> Result<VertexId, ApexError> {
        let idx = match &self.scaled {
            ScaledView::Small(g) => apex_index(g),
            ScaledView::Big(g) => apex_index(g),
        }?;
        Ok(self.verts[idx].0)
    }

    /// Labels the non-apex vertices v_1..v_n counterclockwise so that every
    /// triangle curve (apex, v_i, v_j) with i < j is positively oriented.
    /// Drops the last label when the count is odd, so n is always even.
    pub fn label_ccw(&self, apex: VertexId) -> Result<Labeling, LabelError> {
        let apex_idx = self.idx_of(apex).ok_or(LabelError::UnknownApex(apex))?;
        let order_idx = match &self.scaled {
            ScaledView::Small(g) => ccw_order(g, apex_idx),
            ScaledView::Big(g) => ccw_order(g, apex_idx),
        }
        .map_err(|e| match e {
            OrderError::Ambiguous(a, b) => {
                LabelError::AmbiguousRotation(self.verts[a].0, self.verts[b].0)
            }
            OrderError::Inconsistent => LabelError::InconsistentOrientation,
        })?;
        let mut order: Vec<VertexId> = order_idx.iter().map(|&i| self.verts[i].0).collect();
        let dropped = if order.len() % 2 == 1 {
            order.pop()
        } else {
            None
        };
        Ok(Labeling::new(apex, order, dropped))
    }

    /// The closed curve of triangle K[v0, v_i, v_j], oriented
    /// counterclockwise.
    pub fn triangle_curve(
        &self,
        lab: &Labeling,
        i: usize,
        j: usize,
    ) -> Result<Triangle, TriangleError> {
        if i < 1 || j <= i || j > lab.n() {
            return Err(TriangleError::BadIndices);
        }
        let a = lab.vertex(i);
        let b = lab.vertex(j);
        let pts = self.concat_triangle(lab.apex(), a, b);
        let curve =
            ClosedCurve::new_unchecked(pts).map_err(|_| TriangleError::NonSimpleTriangle(i, j))?;
        if !curve.is_simple() {
            return Err(TriangleError::NonSimpleTriangle(i, j));
        }
        let curve = if signed_area(&curve).is_negative() {
            curve.reversed()
        } else {
            curve
        };
        Ok(Triangle { i, j, curve })
    }

    /// Point sequence of the closed walk apex -> a -> b -> apex, junction
    /// points deduplicated, first point not repeated.
    fn concat_triangle(&self, apex: VertexId, a: VertexId, b: VertexId) -> Vec<Point> {
        let mut pts: Vec<Point> = Vec::new();
        for (from, to) in [(apex, a), (a, b), (b, apex)] {
            let arc = self.arc(from, to).unwrap();
            let from_pt = self.point_of(from).unwrap();
            let forward = arc.first() == from_pt;
            let seg: Vec<Point> = if forward {
                arc.points().to_vec()
            } else {
                arc.reversed().points().to_vec()
            };
            let skip = usize::from(!pts.is_empty());
            pts.extend(seg.into_iter().skip(skip));
        }
        pts.pop(); // closing point equals the first
        pts
    }
}

fn unrank(n: usize, rank: usize) -> (usize, usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            if pair_rank(n, i, j) == rank {
                return (i, j);
            }
        }
    }
    unreachable!()
}

// ---------------------------------------------------------------------------
// Analysis over the scaled view.

fn analyze<T: Coord>(g: &Geom<T>, ids: &[VertexId]) -> Analysis {
    let n = g.n_verts();
    let n_arcs = n_pairs(n);
    let mut violations: Vec<Violation> = Vec::new();
    let ekey = |i: usize, j: usize| edge_key(ids[i], ids[j]);

    // Arc endpoints by rank.
    let mut ends: Vec<(usize, usize)> = Vec::with_capacity(n_arcs);
    for i in 0..n {
        for j in (i + 1)..n {
            ends.push((i, j));
        }
    }

    // 1. Per-arc self-intersection.
    for (rank, arc) in g.arcs.iter().enumerate() {
        if !arc_is_simple(arc) {
            let (i, j) = ends[rank];
            violations.push(Violation {
                kind: ViolationKind::SelfIntersection,
                arcs: vec![ekey(i, j)],
                witness: None,
            });
        }
    }

    // 2. Vertices on foreign arc interiors.
    for v in 0..n {
        let p = &g.verts[v];
        for (rank, arc) in g.arcs.iter().enumerate() {
            let (i, j) = ends[rank];
            if i == v || j == v {
                continue;
            }
            if arc.windows(2).any(|w| on_segment(p, &w[0], &w[1])) {
                violations.push(Violation {
                    kind: ViolationKind::VertexOnArcInterior,
                    arcs: vec![ekey(i, j)],
                    witness: Some(g.to_point(p)),
                });
            }
        }
    }

    // 3. Pairwise arc analysis: crossing counts, degenerate contacts.
    let bboxes: Vec<[T; 4]> = g.arcs.iter().map(|arc| bbox(arc)).collect();
    let mut bits = vec![0u64; (n_pairs(n_arcs) + 63) / 64];
    let mut grid = CrossingGrid::new(g);
    for ra in 0..n_arcs {
        let (i1, j1) = ends[ra];
        for rb in (ra + 1)..n_arcs {
            let (i2, j2) = ends[rb];
            if boxes_disjoint(&bboxes[ra], &bboxes[rb]) {
                continue;
            }
            let shared: Option<usize> = [i1, j1]
                .into_iter()
                .find(|v| *v == i2 || *v == j2);
            let arc_a = &g.arcs[ra];
            let arc_b = &g.arcs[rb];
            let mut crossings: Vec<(usize, usize)> = Vec::new();
            for (sa, wa) in arc_a.windows(2).enumerate() {
                for (sb, wb) in arc_b.windows(2).enumerate() {
                    if seg_boxes_disjoint(&wa[0], &wa[1], &wb[0], &wb[1]) {
                        continue;
                    }
                    match classify_segments(&wa[0], &wa[1], &wb[0], &wb[1]) {
                        SegClass::Disjoint => {}
                        SegClass::Proper => crossings.push((sa, sb)),
                        SegClass::Touch(p) => {
                            let allowed =
                                shared.is_some_and(|s| p == g.verts[s]);
                            if allowed {
                                continue;
                            }
                            // Touch at a terminal vertex point is reported by
                            // the vertex scan above; the rest are contacts at
                            // interior joints.
                            let terminal = [i1, j1, i2, j2]
                                .iter()
                                .any(|&v| p == g.verts[v]);
                            if !terminal {
                                violations.push(Violation {
                                    kind: ViolationKind::JointCoincidence,
                                    arcs: vec![ekey(i1, j1), ekey(i2, j2)],
                                    witness: Some(g.to_point(&p)),
                                });
                            }
                        }
                        SegClass::Overlap => {
                            violations.push(Violation {
                                kind: ViolationKind::TangencyOrOverlap,
                                arcs: vec![ekey(i1, j1), ekey(i2, j2)],
                                witness: None,
                            });
                        }
                    }
                }
            }
            if !crossings.is_empty() {
                let witness = || {
                    let (sa, sb) = crossings[0];
                    Some(crossing_witness(g, ra, rb, sa, sb))
                };
                if shared.is_some() {
                    violations.push(Violation {
                        kind: ViolationKind::AdjacentEdgesCross,
                        arcs: vec![ekey(i1, j1), ekey(i2, j2)],
                        witness: witness(),
                    });
                } else if crossings.len() >= 2 {
                    violations.push(Violation {
                        kind: ViolationKind::MultipleCrossings,
                        arcs: vec![ekey(i1, j1), ekey(i2, j2)],
                        witness: witness(),
                    });
                } else {
                    let idx = pair_rank(n_pairs(n), ra, rb);
                    bits[idx / 64] |= 1 << (idx % 64);
                }
                for (sa, sb) in &crossings {
                    grid.insert(g, ra, rb, *sa, *sb, &mut violations, &ends, ids);
                }
            }
        }
    }

    dedupe_violations(&mut violations);
    Analysis {
        report: ValidationReport { violations },
        matrix: CrossingMatrix {
            n_verts: n,
            ids: ids.to_vec(),
            id_to_idx: ids.iter().enumerate().map(|(k, &id)| (id, k)).collect(),
            bits,
        },
    }
}

fn arc_is_simple<T: Coord>(arc: &[Pt<T>]) -> bool {
    let m = arc.len() - 1; // segment count
    for a in 0..m {
        for b in (a + 1)..m {
            let cls = classify_segments(&arc[a], &arc[a + 1], &arc[b], &arc[b + 1]);
            match cls {
                SegClass::Disjoint => {}
                SegClass::Touch(ref p) if b == a + 1 && *p == arc[b] => {}
                _ => return false,
            }
        }
    }
    true
}

fn bbox<T: Coord>(arc: &[Pt<T>]) -> [T; 4] {
    let mut minx = arc[0][0].clone();
    let mut maxx = arc[0][0].clone();
    let mut miny = arc[0][1].clone();
    let mut maxy = arc[0][1].clone();
    for p in &arc[1..] {
        if p[0] < minx {
            minx = p[0].clone();
        }
        if p[0] > maxx {
            maxx = p[0].clone();
        }
        if p[1] < miny {
            miny = p[1].clone();
        }
        if p[1] > maxy {
            maxy = p[1].clone();
        }
    }
    [minx, maxx, miny, maxy]
}

fn boxes_disjoint<T: Coord>(a: &[T; 4], b: &[T; 4]) -> bool {
    a[1] < b[0] || b[1] < a[0] || a[3] < b[2] || b[3] < a[2]
}

fn seg_boxes_disjoint<T: Coord>(a0: &Pt<T>, a1: &Pt<T>, b0: &Pt<T>, b1: &Pt<T>) -> bool {
    let (alox, ahix) = minmax(&a0[0], &a1[0]);
    let (blox, bhix) = minmax(&b0[0], &b1[0]);
    if ahix < blox || bhix < alox {
        return true;
    }
    let (aloy, ahiy) = minmax(&a0[1], &a1[1]);
    let (bloy, bhiy) = minmax(&b0[1], &b1[1]);
    ahiy < bloy || bhiy < aloy
}

fn minmax<'a, T: Ord>(a: &'a T, b: &'a T) -> (&'a T, &'a T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn crossing_witness<T: Coord>(g: &Geom<T>, ra: usize, rb: usize, sa: usize, sb: usize) -> Point {
    let a = &g.arcs[ra];
    let b = &g.arcs[rb];
    let (px, py, d) = crossing_point_big(&a[sa], &a[sa + 1], &b[sb], &b[sb + 1]);
    let denom = &d * &g.denom;
    Point::new(
        crate::geometry::Rational::new(px, denom.clone()),
        crate::geometry::Rational::new(py, denom),
    )
}

/// Spatial hash over approximate crossing points; exact confirmation on
/// near-collisions. Detects three arcs through one interior point.
struct CrossingGrid {
    cell: f64,
    map: HashMap<(i64, i64), Vec<CrossRec>>,
    reported: Vec<(BigInt, BigInt, BigInt)>,
}

#[derive(Clone, Copy)]
struct CrossRec {
    x: f64,
    y: f64,
    ra: u32,
    rb: u32,
    sa: u16,
    sb: u16,
}

impl CrossingGrid {
    fn new<T: Coord>(g: &Geom<T>) -> Self {
        let mut extent = 1.0f64;
        for p in g.verts.iter().chain(g.arcs.iter().flatten()) {
            extent = extent.max(p[0].to_f64_lossy().abs()).max(p[1].to_f64_lossy().abs());
        }
        CrossingGrid {
            cell: extent * 1e-9,
            map: HashMap::new(),
            reported: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn insert<T: Coord>(
        &mut self,
        g: &Geom<T>,
        ra: usize,
        rb: usize,
        sa: usize,
        sb: usize,
        violations: &mut Vec<Violation>,
        ends: &[(usize, usize)],
        ids: &[VertexId],
    ) {
        let a = &g.arcs[ra];
        let b = &g.arcs[rb];
        let (x, y) = crossing_point_f64(&a[sa], &a[sa + 1], &b[sb], &b[sb + 1]);
        let rec = CrossRec {
            x,
            y,
            ra: ra as u32,
            rb: rb as u32,
            sa: sa as u16,
            sb: sb as u16,
        };
        let cx = (x / self.cell).floor() as i64;
        let cy = (y / self.cell).floor() as i64;
        let tol = self.cell;
        let mut matched: Option<CrossRec> = None;
        'outer: for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                if let Some(list) = self.map.get(&(cx + dx, cy + dy)) {
                    for other in list {
                        if (other.x - x).abs() <= tol && (other.y - y).abs() <= tol {
                            // Same arc pair never yields two records at one
                            // point; only distinct pairs matter here.
                            if (other.ra, other.rb) != (rec.ra, rec.rb)
                                && exact_equal(g, other, &rec)
                            {
                                matched = Some(*other);
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        if let Some(other) = matched {
            let key = exact_point(g, &rec);
            if !self.reported.contains(&key) {
                self.reported.push(key.clone());
                let mut arcs: Vec<EdgeKey> = [rec.ra, rec.rb, other.ra, other.rb]
                    .iter()
                    .map(|&r| {
                        let (i, j) = ends[r as usize];
                        edge_key(ids[i], ids[j])
                    })
                    .collect();
                arcs.sort();
                arcs.dedup();
                let denom = &key.2 * &g.denom;
                violations.push(Violation {
                    kind: ViolationKind::TripleInteriorPoint,
                    arcs,
                    witness: Some(Point::new(
                        crate::geometry::Rational::new(key.0.clone(), denom.clone()),
                        crate::geometry::Rational::new(key.1.clone(), denom),
                    )),
                });
            }
        }
        self.map.entry((cx, cy)).or_default().push(rec);
    }
}

fn exact_point<T: Coord>(g: &Geom<T>, r: &CrossRec) -> (BigInt, BigInt, BigInt) {
    let a = &g.arcs[r.ra as usize];
    let b = &g.arcs[r.rb as usize];
    crossing_point_big(
        &a[r.sa as usize],
        &a[r.sa as usize + 1],
        &b[r.sb as usize],
        &b[r.sb as usize + 1],
    )
}

fn exact_equal<T: Coord>(g: &Geom<T>, a: &CrossRec, b: &CrossRec) -> bool {
    exact_point(g, a) == exact_point(g, b)
}

fn dedupe_violations(violations: &mut Vec<Violation>) {
    let mut seen: Vec<Violation> = Vec::new();
    violations.retain(|v| {
        if seen.contains(v) {
            false
        } else {
            seen.push(v.clone());
            true
        }
    });
}

// ---------------------------------------------------------------------------
// Apex selection and labeling.

fn apex_index<T: Coord>(g: &Geom<T>) -> Result<usize, ApexError> {
    let mut ink: Vec<Pt<T>> = g.verts.clone();
    for arc in &g.arcs {
        ink.extend(arc.iter().cloned());
    }
    let hull = convex_hull(&ink);
    let qualifies = |p: &Pt<T>| -> bool {
        if hull.len() < 3 {
            return true;
        }
        point_in_loop(p, &hull) != PointLocation::Inside
    };
    let mut best: Option<usize> = None;
    for (idx, p) in g.verts.iter().enumerate() {
        if !qualifies(p) {
            continue;
        }
        let better = match best {
            None => true,
            Some(cur) => {
                let q = &g.verts[cur];
                (&p[1], &p[0]) < (&q[1], &q[0])
            }
        };
        if better {
            best = Some(idx);
        }
    }
    best.ok_or(ApexError::NoOuterVertex)
}

enum OrderError {
    Ambiguous(usize, usize),
    Inconsistent,
}

fn ccw_order<T: Coord>(g: &Geom<T>, apex: usize) -> Result<Vec<usize>, OrderError> {
    let n = g.n_verts();
    let others: Vec<usize> = (0..n).filter(|&v| v != apex).collect();

    // Exact direction ties at the apex are a general-position violation.
    let dir = |v: usize| -> Pt<T> {
        let arc = g.arc(apex, v);
        let (p, q) = if apex < v {
            (&arc[0], &arc[1])
        } else {
            (&arc[arc.len() - 1], &arc[arc.len() - 2])
        };
        [q[0].clone() - p[0].clone(), q[1].clone() - p[1].clone()]
    };
    let dirs: Vec<Pt<T>> = others.iter().map(|&v| dir(v)).collect();
    let zero = [T::zero(), T::zero()];
    for a in 0..dirs.len() {
        for b in (a + 1)..dirs.len() {
            let cross = orient_sign(&zero, &dirs[a], &dirs[b]) == Ordering::Equal;
            if cross {
                let dot = dirs[a][0].clone() * dirs[b][0].clone()
                    + dirs[a][1].clone() * dirs[b][1].clone();
                if dot > T::zero() {
                    return Err(OrderError::Ambiguous(others[a], others[b]));
                }
            }
        }
    }

    // Pairwise triangle orientation: sigma[a][b] == Greater means the curve
    // apex -> a -> b -> apex is counterclockwise, i.e. a precedes b.
    let m = others.len();
    let mut sigma = vec![Ordering::Equal; m * m];
    for x in 0..m {
        for y in (x + 1)..m {
            let s = triangle_area_sign(g, apex, others[x], others[y]);
            if s == Ordering::Equal {
                return Err(OrderError::Inconsistent);
            }
            sigma[x * m + y] = s;
            sigma[y * m + x] = s.reverse();
        }
    }
    let mut perm: Vec<usize> = (0..m).collect();
    perm.sort_by(|&x, &y| {
        if sigma[x * m + y] == Ordering::Greater {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    });
    // The sort only realizes the order if the orientation relation is
    // transitive; verify every pair.
    for a in 0..m {
        for b in (a + 1)..m {
            if sigma[perm[a] * m + perm[b]] != Ordering::Greater {
                return Err(OrderError::Inconsistent);
            }
        }
    }
    Ok(perm.into_iter().map(|k| others[k]).collect())
}

pub(crate) fn triangle_loop<T: Coord>(g: &Geom<T>, apex: usize, a: usize, b: usize) -> Vec<Pt<T>> {
    let mut pts: Vec<Pt<T>> = Vec::new();
    for (from, to) in [(apex, a), (a, b), (b, apex)] {
        let arc = g.arc(from, to);
        let forward = from < to;
        let skip = usize::from(!pts.is_empty());
        if forward {
            pts.extend(arc.iter().skip(skip).cloned());
        } else {
            pts.extend(arc.iter().rev().skip(skip).cloned());
        }
    }
    pts.pop();
    pts
}

fn triangle_area_sign<T: Coord>(g: &Geom<T>, apex: usize, a: usize, b: usize) -> Ordering {
    let pts = triangle_loop(g, apex, a, b);
    loop_area_sign(&pts)
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::SelfIntersection => "SelfIntersection",
            ViolationKind::TangencyOrOverlap => "TangencyOrOverlap",
            ViolationKind::MultipleCrossings => "MultipleCrossings",
            ViolationKind::AdjacentEdgesCross => "AdjacentEdgesCross",
            ViolationKind::VertexOnArcInterior => "VertexOnArcInterior",
            ViolationKind::TripleInteriorPoint => "TripleInteriorPoint",
            ViolationKind::JointCoincidence => "JointCoincidence",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight_drawing(coords: &[(i64, i64)]) -> Drawing {
        let vertices: Vec<(VertexId, Point)> = coords
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| (VertexId(k as u32), Point::from_ints(x, y)))
            .collect();
        let mut arcs = BTreeMap::new();
        for i in 0..coords.len() {
            for j in (i + 1)..coords.len() {
                let a = Point::from_ints(coords[i].0, coords[i].1);
                let b = Point::from_ints(coords[j].0, coords[j].1);
                arcs.insert(
                    (VertexId(i as u32), VertexId(j as u32)),
                    Polyline::segment(a, b).unwrap(),
                );
            }
        }
        Drawing::new(vertices, arcs).unwrap()
    }

    // Regular-ish convex pentagon on integer coordinates.
    const PENTAGON: &[(i64, i64)] = &[(0, 0), (10, -2), (14, 7), (5, 13), (-4, 6)];

    #[test]
    fn convex_pentagon_is_valid() {
        let d = straight_drawing(PENTAGON);
        let report = d.validate();
        assert!(report.is_ok(), "{:?}", report.violations);
        // Straight-line K5 in convex position: C(5,4) = 5 crossings.
        assert_eq!(d.crossing_matrix().total_crossings(), 5);
    }

    #[test]
    fn convex_crossing_count_matches_quadruples() {
        for n in [4usize, 6, 7] {
            let coords: Vec<(i64, i64)> =
                (0..n as i64).map(|t| (t, t * t)).collect();
            let d = straight_drawing(&coords);
            assert!(d.validate().is_ok());
            let expect = (n * (n - 1) * (n - 2) * (n - 3) / 24) as u64;
            assert_eq!(d.crossing_matrix().total_crossings(), expect);
        }
    }

    #[test]
    fn collinear_triple_hits_vertex_on_arc() {
        let d = straight_drawing(&[(0, 0), (1, 0), (2, 0)]);
        let report = d.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::VertexOnArcInterior));
    }

    #[test]
    fn double_crossing_polyline_is_rejected
        () {
        // One bent arc that crosses a straight arc twice.
        let vertices = vec![
            (VertexId(0), Point::from_ints(0, 1)),
            (VertexId(1), Point::from_ints(10, 1)),
            (VertexId(2), Point::from_ints(3, -5)),
            (VertexId(3), Point::from_ints(7, 9)),
        ];
        let p = |x: i64, y: i64| Point::from_ints(x, y);
        let mut arcs = BTreeMap::new();
        let seg = |a: Point, b: Point| Polyline::segment(a, b).unwrap();
        arcs.insert((VertexId(0), VertexId(1)), seg(p(0, 1), p(10, 1)));
        arcs.insert((VertexId(0), VertexId(2)), seg(p(0, 1), p(3, -5)));
        arcs.insert((VertexId(0), VertexId(3)), seg(p(0, 1), p(7, 9)));
        arcs.insert((VertexId(1), VertexId(2)), seg(p(10, 1), p(3, -5)));
        arcs.insert((VertexId(1), VertexId(3)), seg(p(10, 1), p(7, 9)));
        // The 2-3 arc dips below y = 1, comes back up over it, and dips again.
        arcs.insert(
            (VertexId(2), VertexId(3)),
            Polyline::new(vec![p(3, -5), p(5, 3), p(6, 0), p(7, 9)]).unwrap(),
        );
        let d = Drawing::new(vertices, arcs).unwrap();
        let report = d.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::MultipleCrossings),
            "{:?}", report.violations);
    }

    #[test]
    fn triple_point_is_detected() {
        // Three long arcs concurrent at the origin, plus vertices far out.
        let vertices: Vec<(VertexId, Point)> = [
            (0i64, 7i64), (7, 5), (9, -2), (0, -7), (-7, -5), (-9, 2),
        ]
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| (VertexId(k as u32), Point::from_ints(x, y)))
        .collect();
        let pts: Vec<Point> = vertices.iter().map(|(_, p)| p.clone()).collect();
        let mut arcs = BTreeMap::new();
        for i in 0..6 {
            for j in (i + 1)..6 {
                arcs.insert(
                    (VertexId(i as u32), VertexId(j as u32)),
                    Polyline::segment(pts[i].clone(), pts[j].clone()).unwrap(),
                );
            }
        }
        // 0-3, 1-4, 2-5 all pass through the origin.
        let d = Drawing::new(vertices, arcs).unwrap();
        let report = d.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::TripleInteriorPoint),
            "{:?}", report.violations);
    }

    #[test]
    fn apex_is_on_hull_and_lowest() {
        let d = straight_drawing(PENTAGON);
        let apex = d.select_apex().unwrap();
        // (10, -2) is the lowest point and lies on the hull.
        assert_eq!(d.point_of(apex).unwrap(), &Point::from_ints(10, -2));
    }

    #[test]
    fn no_apex_when_all_vertices_buried() {
        // A vertex strictly inside the hull of the others is not an apex.
        let d = straight_drawing(&[(0, 0), (10, 1), (5, 12), (5, 4)]);
        let apex = d.select_apex().unwrap();
        assert_ne!(d.point_of(apex).unwrap(), &Point::from_ints(5, 4));
    }

    #[test]
    fn labeling_matches_angular_order() {
        let d = straight_drawing(PENTAGON);
        let apex = d.select_apex().unwrap();
        let lab = d.label_ccw(apex).unwrap();
        assert_eq!(lab.n(), 4);
        assert!(lab.dropped().is_none());
        // For straight arcs, counterclockwise labeling is angular order
        // around the apex.
        let ap = d.point_of(apex).unwrap().clone();
        let mut expected: Vec<VertexId> =
            d.vertex_ids().filter(|&v| v != apex).collect();
        expected.sort_by(|&a, &b| {
            let pa = d.point_of(a).unwrap();
            let pb = d.point_of(b).unwrap();
            match crate::geometry::orient(&ap, pa, pb) {
                crate::geometry::Orientation::Ccw => std::cmp::Ordering::Less,
                crate::geometry::Orientation::Cw => std::cmp::Ordering::Greater,
                crate::geometry::Orientation::Collinear => std::cmp::Ordering::Equal,
            }
        });
        assert_eq!(lab.order(), &expected[..]);
        for k in 1..=lab.n() {
            assert_eq!(lab.label(lab.vertex(k)), Some(k));
        }
    }

    #[test]
    fn odd_ground_set_drops_last_label() {
        let coords: Vec<(i64, i64)> = (0..6).map(|t| (t, t * t)).collect();
        let d = straight_drawing(&coords);
        let apex = d.select_apex().unwrap();
        let lab = d.label_ccw(apex).unwrap();
        assert_eq!(lab.n(), 4);
        assert!(lab.dropped().is_some());
    }

    #[test]
    fn triangle_curves_are_simple_and_ccw() {
        let d = straight_drawing(PENTAGON);
        let apex = d.select_apex().unwrap();
        let lab = d.label_ccw(apex).unwrap();
        for i in 1..=lab.n() {
            for j in (i + 1)..=lab.n() {
                let t = d.triangle_curve(&lab, i, j).unwrap();
                assert!(signed_area(&t.curve) > Rational::default());
            }
        }
    }

    use crate::geometry::Rational;

    #[test]
    fn missing_arc_is_structural_error() {
        let vertices = vec![
            (VertexId(0), Point::from_ints(0, 0)),
            (VertexId(1), Point::from_ints(1, 0)),
            (VertexId(2), Point::from_ints(0, 1)),
        ];
        let mut arcs = BTreeMap::new();
        arcs.insert(
            (VertexId(0), VertexId(1)),
            Polyline::segment(Point::from_ints(0, 0), Point::from_ints(1, 0)).unwrap(),
        );
        match Drawing::new(vertices, arcs) {
            Err(StructuralError::MissingArc(_, _)) => {}
            other => panic!("expected MissingArc, got {:?}", other.err()),
        }
    }
}
