//! Seeded generators of valid drawings: convex position, random general
//! position, and perturbed-polyline variants of either.
//!
//! Every generator output passes full validation, admits an apex, and
//! labels cleanly — callers never need to handle degenerate instances.
//! The price is a rejection loop; all retries are deterministic in the
//! seed, so the same parameters always produce the same drawing.

use crate::drawing::{Drawing, StructuralError, VertexId};
use crate::geometry::{Point, Polyline, Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    ConvexParabola,
    RandomGeneralPosition,
    PerturbedPolyline,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// Coordinate range for the random family; must give collision headroom.
    pub coord_bound: i64,
    /// Interior joints per arc for the polyline family.
    pub bends: usize,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GenSpec {
            family,
            n,
            seed,
            coord_bound: default_coord_bound(n),
            bends: 1,
        }
    }
}

pub fn default_coord_bound(n: usize) -> i64 {
    32 * (n as i64) * (n as i64)
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("need at least 3 vertices, got {0}")]
    TooFew(usize),
    #[error("coordinate bound {bound} below N^2 = {min}")]
    BoundTooSmall { bound: i64, min: i64 },
    #[error("no valid instance within the retry budget")]
    RetryBudgetExceeded,
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

pub fn generate(spec: &GenSpec) -> Result<Drawing, GenError> {
    match spec.family {
        Family::ConvexParabola => convex_position(spec.n),
        Family::RandomGeneralPosition => {
            random_general_position(spec.n, spec.seed, spec.coord_bound)
        }
        Family::PerturbedPolyline => {
            let base = random_general_position(spec.n, spec.seed, spec.coord_bound)?;
            perturb_to_polylines(&base, spec.seed ^ 0x9e37_79b9_7f4a_7c15, spec.bends)
        }
    }
}

/// Usable = valid model, has an outer-cell vertex, labels cleanly.
fn usable(d: &Drawing) -> bool {
    d.validate().is_ok()
        && d.select_apex()
            .is_ok_and(|apex| d.label_ccw(apex).is_ok())
}

fn straight_drawing(points: Vec<Point>) -> Result<Drawing, GenError> {
    let vertices: Vec<(VertexId, Point)> = points
        .iter()
        .enumerate()
        .map(|(k, p)| (VertexId(k as u32), p.clone()))
        .collect();
    let mut arcs = BTreeMap::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            arcs.insert(
                (VertexId(i as u32), VertexId(j as u32)),
                Polyline::segment(points[i].clone(), points[j].clone())?,
            );
        }
    }
    Ok(Drawing::new(vertices, arcs)?)
}

/// N points in strictly convex position, straight-line arcs.
///
/// The integer parabola (t, t²) is the skeleton, but its chords are
/// concurrent from N = 9 on (e.g. the chords 1-6, 3-7, 4-9 all pass through
/// (5, 29)), so larger instances get deterministic dyadic-rational nudges in
/// y. The nudges are far smaller than the parabola's second difference, so
/// strict convexity survives; sizes shrink until validation passes.
pub fn convex_position(n: usize) -> Result<Drawing, GenError> {
    if n < 3 {
        return Err(GenError::TooFew(n));
    }
    let ints: Vec<Point> = (1..=n as i64).map(|t| Point::from_ints(t, t * t)).collect();
    if n <= 8 {
        let d = straight_drawing(ints)?;
        debug_assert!(usable(&d));
        return Ok(d);
    }
    // Internal fixed seed: convex_position(N) is a pure function of N.
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0_0000 + n as u64);
    let mut denom_log = 20u32;
    for _ in 0..64 {
        let denom = BigInt::from(1u8) << denom_log;
        let points: Vec<Point> = (1..=n as i64)
            .map(|t| {
                // |offset| < 2^16 / 2^denom_log ≤ 1/16: second differences
                // of y stay ≥ 2 - 4/16 > 0, keeping the chain strictly
                // convex.
                let num = BigInt::from(rng.gen_range(-(1i32 << 16)..(1i32 << 16)));
                Point::new(
                    Rational::from_integer(BigInt::from(t)),
                    Rational::from_integer(BigInt::from(t * t))
                        + Rational::new(num, denom.clone()),
                )
            })
            .collect();
        let d = straight_drawing(points)?;
        if usable(&d) {
            return Ok(d);
        }
        denom_log += 2;
    }
    Err(GenError::RetryBudgetExceeded)
}

/// N integer points, uniform in [0, coord_bound]², rejection-sampled until
/// the straight-line drawing is fully valid (distinct points, no collinear
/// triples, no concurrent chords).
pub fn random_general_position(n: usize, seed: u64, coord_bound: i64) -> Result<Drawing, GenError> {
    if n < 3 {
        return Err(GenError::TooFew(n));
    }
    let min = (n as i64) * (n as i64);
    if coord_bound < min {
        return Err(GenError::BoundTooSmall {
            bound: coord_bound,
            min,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'rounds: for _ in 0..1000 {
        let pts: Vec<(i64, i64)> = (0..n)
            .map(|_| (rng.gen_range(0..=coord_bound), rng.gen_range(0..=coord_bound)))
            .collect();
        // Cheap pre-screen before paying for full validation: duplicates and
        // collinear triples cover the overwhelming share of rejections.
        for i in 0..n {
            for j in (i + 1)..n {
                if pts[i] == pts[j] {
                    continue 'rounds;
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (x1, y1) = pts[i];
                    let (x2, y2) = pts[j];
                    let (x3, y3) = pts[k];
                    let cross =
                        (x2 - x1) as i128 * (y3 - y1) as i128 - (y2 - y1) as i128 * (x3 - x1) as i128;
                    if cross == 0 {
                        continue 'rounds;
                    }
                }
            }
        }
        let points: Vec<Point> = pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect();
        let d = straight_drawing(points)?;
        if usable(&d) {
            return Ok(d);
        }
    }
    Err(GenError::RetryBudgetExceeded)
}

/// Re-draws every arc as a polyline with `bends` interior joints, each
/// nudged off the straight line by small dyadic offsets. Offsets shrink
/// geometrically on retry until the drawing validates; the crossing pattern
/// may legitimately differ from the input's.
pub fn perturb_to_polylines(d: &Drawing, seed: u64, bends: usize) -> Result<Drawing, GenError> {
    let vertices: Vec<(VertexId, Point)> = d.vertices().to_vec();
    if bends == 0 {
        let mut arcs = BTreeMap::new();
        for (key, poly) in d.arc_pairs() {
            arcs.insert(key, poly.clone());
        }
        return Ok(Drawing::new(vertices, arcs)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Offsets scale with the drawing so bends are big enough to matter, but
    // stay near the typical vertex spacing (~span/4n): much larger and every
    // attempt reroutes arcs across vertices, costing a full re-validation per
    // retry. Retries shrink geometrically from there.
    let span = coordinate_span(d);
    let n = d.n_vertices().max(2) as u32;
    let mut denom_log = 5 + (32 - n.leading_zeros());
    for _ in 0..64 {
        let denom = BigInt::from(1u8) << denom_log;
        let mut arcs = BTreeMap::new();
        for (key, poly) in d.arc_pairs() {
            let a = poly.first().clone();
            let b = poly.last().clone();
            let mut pts = vec![a.clone()];
            for s in 1..=bends {
                // Joint at parameter s/(bends+1) plus a dyadic nudge.
                let t = Rational::new(BigInt::from(s as i64), BigInt::from(bends as i64 + 1));
                let base_x = (&a.x) + (&b.x - &a.x) * &t;
                let base_y = (&a.y) + (&b.y - &a.y) * &t;
                let dx = &span
                    * Rational::new(
                        BigInt::from(rng.gen_range(-(1i32 << 4)..=(1 << 4))),
                        denom.clone(),
                    );
                let dy = &span
                    * Rational::new(
                        BigInt::from(rng.gen_range(-(1i32 << 4)..=(1 << 4))),
                        denom.clone(),
                    );
                pts.push(Point::new(base_x + dx, base_y + dy));
            }
            pts.push(b);
            pts.dedup();
            arcs.insert(key, Polyline::new(pts).map_err(|_| GenError::RetryBudgetExceeded)?);
        }
        let cand = Drawing::new(vertices.clone(), arcs)?;
        if usable(&cand) {
            return Ok(cand);
        }
        // Validation dominates the cost, and it grows quartically with n,
        // so large instances shrink more aggressively per retry.
        denom_log += if n >= 32 { 4 } else { 2 };
    }
    Err(GenError::RetryBudgetExceeded)
}

fn coordinate_span(d: &Drawing) -> Rational {
    let mut pts = d.vertices().iter().map(|(_, p)| p);
    let first = pts.next().expect("drawing has vertices");
    let (mut min_x, mut max_x) = (first.x.clone(), first.x.clone());
    let (mut min_y, mut max_y) = (first.y.clone(), first.y.clone());
    for p in pts {
        if p.x < min_x {
            min_x = p.x.clone();
        }
        if p.x > max_x {
            max_x = p.x.clone();
        }
        if p.y < min_y {
            min_y = p.y.clone();
        }
        if p.y > max_y {
            max_y = p.y.clone();
        }
    }
    let span = (max_x - min_x) + (max_y - min_y);
    if span == Rational::from_integer(BigInt::from(0)) {
        Rational::from_integer(BigInt::from(1))
    } else {
        span
    }
}
