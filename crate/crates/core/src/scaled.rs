//! Integer-scaled mirror of the rational predicates.
//!
//! A drawing's coordinates share one denominator after clearing fractions, so
//! every predicate reduces to integer sign computations. When all scaled
//! coordinates fit in 57 bits the whole drawing runs on `i128` (products of
//! differences stay far below 2^127); otherwise the same generic code runs on
//! `BigInt`. Results are bit-identical to the rational path in `geometry`,
//! which property tests cross-check.

use crate::geometry::{Point, PointLocation, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

pub(crate) trait Coord:
    Clone
    + Ord
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
{
    fn to_big(&self) -> BigInt;
    fn to_f64_lossy(&self) -> f64;
}

impl Coord for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
}

impl Coord for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::INFINITY)
    }
}

pub(crate) type Pt<T> = [T; 2];

/// Rank of the unordered pair (i, j), i < j, in lexicographic order over n
/// elements.
pub(crate) fn pair_rank(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub(crate) fn n_pairs(n: usize) -> usize {
    n * (n - 1) / 2
}

fn diff<T: Coord>(a: &T, b: &T) -> T {
    a.clone() - b.clone()
}

/// Sign of (q - p) x (r - p). Greater means counterclockwise.
pub(crate) fn orient_sign<T: Coord>(p: &Pt<T>, q: &Pt<T>, r: &Pt<T>) -> Ordering {
    let v = diff(&q[0], &p[0]) * diff(&r[1], &p[1]) - diff(&q[1], &p[1]) * diff(&r[0], &p[0]);
    v.cmp(&T::zero())
}

fn within<T: Coord>(x: &T, a: &T, b: &T) -> bool {
    if a <= b {
        x >= a && x <= b
    } else {
        x >= b && x <= a
    }
}

/// True iff p lies on the closed segment [a, b].
pub(crate) fn on_segment<T: Coord>(p: &Pt<T>, a: &Pt<T>, b: &Pt<T>) -> bool {
    orient_sign(a, b, p) == Ordering::Equal
        && within(&p[0], &a[0], &b[0])
        && within(&p[1], &a[1], &b[1])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum SegClass<T: Coord> {
    Disjoint,
    /// Transversal crossing of the open interiors.
    Proper,
    /// Single-point contact involving at least one segment endpoint.
    Touch(Pt<T>),
    /// Collinear overlap of positive length.
    Overlap,
}

pub(crate) fn classify_segments<T: Coord>(
    a0: &Pt<T>,
    a1: &Pt<T>,
    b0: &Pt<T>,
    b1: &Pt<T>,
) -> SegClass<T> {
    let o1 = orient_sign(a0, a1, b0);
    let o2 = orient_sign(a0, a1, b1);
    let o3 = orient_sign(b0, b1, a0);
    let o4 = orient_sign(b0, b1, a1);
    let in_box = |p: &Pt<T>, u: &Pt<T>, v: &Pt<T>| {
        within(&p[0], &u[0], &v[0]) && within(&p[1], &u[1], &v[1])
    };
    // Endpoints of one segment lying on the other; two distinct such points
    // force a collinear overlap.
    let mut candidates: Vec<&Pt<T>> = Vec::new();
    if o1 == Ordering::Equal && in_box(b0, a0, a1) {
        candidates.push(b0);
    }
    if o2 == Ordering::Equal && in_box(b1, a0, a1) {
        candidates.push(b1);
    }
    if o3 == Ordering::Equal && in_box(a0, b0, b1) {
        candidates.push(a0);
    }
    if o4 == Ordering::Equal && in_box(a1, b0, b1) {
        candidates.push(a1);
    }
    let mut contacts: Vec<&Pt<T>> = Vec::new();
    for p in candidates {
        if !contacts.iter().any(|q| *q == p) {
            contacts.push(p);
        }
    }
    match contacts.len() {
        0 => {
            let opp = |x: Ordering, y: Ordering| {
                (x == Ordering::Greater && y == Ordering::Less)
                    || (x == Ordering::Less && y == Ordering::Greater)
            };
            if opp(o1, o2) && opp(o3, o4) {
                SegClass::Proper
            } else {
                SegClass::Disjoint
            }
        }
        1 => SegClass::Touch(contacts[0].clone()),
        _ => SegClass::Overlap,
    }
}

/// Exact crossing point of two properly crossing segments, as a pair of
/// fractions over a common positive denominator (still in scaled units).
pub(crate) fn crossing_point_big<T: Coord>(
    a0: &Pt<T>,
    a1: &Pt<T>,
    b0: &Pt<T>,
    b1: &Pt<T>,
) -> (BigInt, BigInt, BigInt) {
    let ax = a0[0].to_big();
    let ay = a0[1].to_big();
    let dax = a1[0].to_big() - &ax;
    let day = a1[1].to_big() - &ay;
    let bx = b0[0].to_big();
    let by = b0[1].to_big();
    let dbx = b1[0].to_big() - &bx;
    let dby = b1[1].to_big() - &by;
    let denom = &dax * &dby - &day * &dbx;
    let num = (&bx - &ax) * &dby - (&by - &ay) * &dbx;
    // p = a0 + (num/denom) * da
    let mut px = &ax * &denom + &num * &dax;
    let mut py = &ay * &denom + &num * &day;
    let mut d = denom;
    if d.is_negative() {
        px = -px;
        py = -py;
        d = -d;
    }
    let g = px.gcd(&py).gcd(&d);
    if !g.is_zero() {
        px /= &g;
        py /= &g;
        d /= &g;
    }
    (px, py, d)
}

/// Floating approximation of the crossing point, good enough for spatial
/// bucketing (never for decisions).
pub(crate) fn crossing_point_f64<T: Coord>(
    a0: &Pt<T>,
    a1: &Pt<T>,
    b0: &Pt<T>,
    b1: &Pt<T>,
) -> (f64, f64) {
    let ax = a0[0].to_f64_lossy();
    let ay = a0[1].to_f64_lossy();
    let dax = a1[0].to_f64_lossy() - ax;
    let day = a1[1].to_f64_lossy() - ay;
    let bx = b0[0].to_f64_lossy();
    let by = b0[1].to_f64_lossy();
    let dbx = b1[0].to_f64_lossy() - bx;
    let dby = b1[1].to_f64_lossy() - by;
    let denom = dax * dby - day * dbx;
    let num = (bx - ax) * dby - (by - ay) * dbx;
    let u = num / denom;
    (ax + u * dax, ay + u * day)
}

/// Jordan parity for a closed polygonal loop (first point not repeated),
/// horizontal ray with the half-open edge rule.
pub(crate) fn point_in_loop<T: Coord>(p: &Pt<T>, loop_pts: &[Pt<T>]) -> PointLocation {
    let n = loop_pts.len();
    for k in 0..n {
        if on_segment(p, &loop_pts[k], &loop_pts[(k + 1) % n]) {
            return PointLocation::OnBoundary;
        }
    }
    let mut inside = false;
    for k in 0..n {
        let a = &loop_pts[k];
        let b = &loop_pts[(k + 1) % n];
        let a_below = a[1] <= p[1];
        let b_below = b[1] <= p[1];
        if a_below == b_below {
            continue;
        }
        let o = orient_sign(a, b, p);
        let upward = b[1] > a[1];
        let hits_right = if upward {
            o == Ordering::Greater
        } else {
            o == Ordering::Less
        };
        if hits_right {
            inside = !inside;
        }
    }
    if inside {
        PointLocation::Inside
    } else {
        PointLocation::Outside
    }
}

/// Sign of the shoelace sum of a closed loop. Greater means counterclockwise.
pub(crate) fn loop_area_sign<T: Coord>(loop_pts: &[Pt<T>]) -> Ordering {
    let n = loop_pts.len();
    let mut sum = T::zero();
    for k in 0..n {
        let a = &loop_pts[k];
        let b = &loop_pts[(k + 1) % n];
        sum = sum + (a[0].clone() * b[1].clone() - b[0].clone() * a[1].clone());
    }
    sum.cmp(&T::zero())
}

/// Convex hull (strict turns only) by monotone chain. Returns the hull in
/// counterclockwise order; collinear boundary points are dropped.
pub(crate) fn convex_hull<T: Coord>(points: &[Pt<T>]) -> Vec<Pt<T>> {
    let mut pts: Vec<Pt<T>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let build = |iter: &mut dyn Iterator<Item = &Pt<T>>| {
        let mut chain: Vec<Pt<T>> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && orient_sign(&chain[chain.len() - 2], &chain[chain.len() - 1], p)
                    != Ordering::Greater
            {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain
    };
    let mut lower = build(&mut pts.iter());
    let mut upper = build(&mut pts.iter().rev());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    lower
}

/// Whole-drawing geometry with cleared denominators.
pub(crate) struct Geom<T: Coord> {
    pub denom: BigInt,
    pub verts: Vec<Pt<T>>,
    /// Indexed by `pair_rank` over vertex positions; each arc's first point
    /// is the lower-position vertex.
    pub arcs: Vec<Vec<Pt<T>>>,
}

impl<T: Coord> Geom<T> {
    pub fn n_verts(&self) -> usize {
        self.verts.len()
    }

    pub fn arc(&self, i: usize, j: usize) -> &[Pt<T>] {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        &self.arcs[pair_rank(self.n_verts(), a, b)]
    }

    /// Descale back to drawing coordinates.
    pub fn to_point(&self, p: &Pt<T>) -> Point {
        Point::new(
            Rational::new(p[0].to_big(), self.denom.clone()),
            Rational::new(p[1].to_big(), self.denom.clone()),
        )
    }
}

pub(crate) enum ScaledView {
    Small(Geom<i128>),
    Big(Geom<BigInt>),
}

const I128_SAFE_BITS: u64 = 57;

/// Clears denominators across every coordinate of the drawing. `vert_points`
/// are the vertex positions in index order, `arc_points` the arcs in
/// `pair_rank` order, already oriented low-to-high vertex position.
pub(crate) fn build_scaled(vert_points: &[Point], arc_points: &[Vec<Point>]) -> ScaledView {
    let mut denom = BigInt::from(1);
    let mut fold = |r: &Rational| {
        denom = denom.lcm(r.denom());
    };
    for p in vert_points {
        fold(&p.x);
        fold(&p.y);
    }
    for arc in arc_points {
        for p in arc {
            fold(&p.x);
            fold(&p.y);
        }
    }
    let scale = |r: &Rational| -> BigInt { r.numer() * (&denom / r.denom()) };
    let verts: Vec<Pt<BigInt>> = vert_points.iter().map(|p| [scale(&p.x), scale(&p.y)]).collect();
    let arcs: Vec<Vec<Pt<BigInt>>> = arc_points
        .iter()
        .map(|arc| arc.iter().map(|p| [scale(&p.x), scale(&p.y)]).collect())
        .collect();

    let fits = verts
        .iter()
        .chain(arcs.iter().flatten())
        .all(|p| p[0].bits() <= I128_SAFE_BITS && p[1].bits() <= I128_SAFE_BITS);
    if fits {
        let small = |p: &Pt<BigInt>| [p[0].to_i128().unwrap(), p[1].to_i128().unwrap()];
        ScaledView::Small(Geom {
            denom,
            verts: verts.iter().map(small).collect(),
            arcs: arcs.iter().map(|a| a.iter().map(small).collect()).collect(),
        })
    } else {
        ScaledView::Big(Geom { denom, verts, arcs })
    }
}
