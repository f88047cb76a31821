//! Exact geometric predicates and curve primitives.
//!
//! All coordinates are arbitrary-precision rationals and every predicate
//! returns an exact sign; there is no floating point and no epsilon anywhere.
//! Degenerate contacts (tangencies, collinear overlaps, crossings at polyline
//! joints) are never resolved, they are reported and handled upstream as
//! validation failures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

pub type Rational = BigRational;

/// Exact point in the plane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point {
            x: Rational::from_integer(BigInt::from(x)),
            y: Rational::from_integer(BigInt::from(y)),
        }
    }

    pub fn from_fracs(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point {
            x: Rational::new(BigInt::from(xn), BigInt::from(xd)),
            y: Rational::new(BigInt::from(yn), BigInt::from(yd)),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("polyline needs at least two points")]
    ShortPolyline,
    #[error("consecutive polyline points coincide")]
    RepeatedPoint,
    #[error("closed curve needs at least three points")]
    ShortCurve,
    #[error("closed curve is not simple")]
    NonSimpleCurve,
    #[error("closed curve has zero area")]
    ZeroAreaCurve,
    #[error("degenerate contact between arcs: {0}")]
    DegenerateContact(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

/// Exact sign of the cross product (q - p) x (r - p).
pub fn orient(p: &Point, q: &Point, r: &Point) -> Orientation {
    let lhs = (&q.x - &p.x) * (&r.y - &p.y);
    let rhs = (&q.y - &p.y) * (&r.x - &p.x);
    match lhs.cmp(&rhs) {
        Ordering::Greater => Orientation::Ccw,
        Ordering::Less => Orientation::Cw,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// True iff `p` lies on the closed segment [a, b]. Assumes nothing about
/// collinearity; does the full check.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orient(a, b, p) != Orientation::Collinear {
        return false;
    }
    let (lox, hix) = minmax(&a.x, &b.x);
    let (loy, hiy) = minmax(&a.y, &b.y);
    &p.x >= lox && &p.x <= hix && &p.y >= loy && &p.y <= hiy
}

fn minmax<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if a == b {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    None,
    /// Transversal crossing of both open interiors.
    Proper(Point),
    /// The segments meet exactly at a common endpoint.
    SharedEndpoint(Point),
    /// Collinear overlap, endpoint in the other segment's interior, or a
    /// touch without crossing. Signaled upward as a validation failure.
    Degenerate,
}

pub fn segment_intersection(s: &Segment, t: &Segment) -> SegmentIntersection {
    let shared: Vec<&Point> = [(&s.a, &t.a), (&s.a, &t.b), (&s.b, &t.a), (&s.b, &t.b)]
        .iter()
        .filter(|(p, q)| p == q)
        .map(|(p, _)| *p)
        .collect();
    if shared.len() >= 2 {
        // Same segment up to direction.
        return SegmentIntersection::Degenerate;
    }
    if let Some(p) = shared.first() {
        // Two distinct segments with one common endpoint meet only there,
        // unless they are collinear and run back over each other.
        let s_other = if *p == &s.a { &s.b } else { &s.a };
        let t_other = if *p == &t.a { &t.b } else { &t.a };
        if orient(p, s_other, t_other) == Orientation::Collinear {
            // Opposite rays are fine, overlapping rays are not.
            let dot = (&s_other.x - &p.x) * (&t_other.x - &p.x)
                + (&s_other.y - &p.y) * (&t_other.y - &p.y);
            if dot.is_positive() {
                return SegmentIntersection::Degenerate;
            }
        }
        return SegmentIntersection::SharedEndpoint((*p).clone());
    }

    let o1 = orient(&s.a, &s.b, &t.a);
    let o2 = orient(&s.a, &s.b, &t.b);
    let o3 = orient(&t.a, &t.b, &s.a);
    let o4 = orient(&t.a, &t.b, &s.b);

    let opposite = |x: Orientation, y: Orientation| {
        (x == Orientation::Ccw && y == Orientation::Cw)
            || (x == Orientation::Cw && y == Orientation::Ccw)
    };
    if opposite(o1, o2) && opposite(o3, o4) {
        return SegmentIntersection::Proper(line_intersection_point(s, t));
    }
    // Any remaining contact involves a collinear configuration: an endpoint
    // on the other segment (touch or T-junction) or a collinear overlap.
    let touches = (o1 == Orientation::Collinear && on_segment(&t.a, &s.a, &s.b))
        || (o2 == Orientation::Collinear && on_segment(&t.b, &s.a, &s.b))
        || (o3 == Orientation::Collinear && on_segment(&s.a, &t.a, &t.b))
        || (o4 == Orientation::Collinear && on_segment(&s.b, &t.a, &t.b));
    if touches {
        SegmentIntersection::Degenerate
    } else {
        SegmentIntersection::None
    }
}

/// Intersection point of the supporting lines; only meaningful when the
/// segments properly cross.
fn line_intersection_point(s: &Segment, t: &Segment) -> Point {
    let dsx = &s.b.x - &s.a.x;
    let dsy = &s.b.y - &s.a.y;
    let dtx = &t.b.x - &t.a.x;
    let dty = &t.b.y - &t.a.y;
    let denom = &dsx * &dty - &dsy * &dtx;
    let num = (&t.a.x - &s.a.x) * &dty - (&t.a.y - &s.a.y) * &dtx;
    let u = num / denom;
    Point {
        x: &s.a.x + &u * dsx,
        y: &s.a.y + u * dsy,
    }
}

/// Open polygonal arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::ShortPolyline);
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeometryError::RepeatedPoint);
        }
        Ok(Polyline { points })
    }

    pub fn segment(a: Point, b: Point) -> Result<Self, GeometryError> {
        Polyline::new(vec![a, b])
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> &Point {
        self.points.first().unwrap()
    }

    pub fn last(&self) -> &Point {
        self.points.last().unwrap()
    }

    pub fn reversed(&self) -> Polyline {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { points }
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.points.windows(2).map(|w| Segment {
            a: w[0].clone(),
            b: w[1].clone(),
        })
    }

    /// True iff the arc does not intersect itself. Consecutive segments may
    /// share only their common joint and must not fold back onto each other.
    pub fn is_simple(&self) -> bool {
        let segs: Vec<Segment> = self.segments().collect();
        for i in 0..segs.len() {
            for j in (i + 1)..segs.len() {
                match segment_intersection(&segs[i], &segs[j]) {
                    SegmentIntersection::None => {}
                    SegmentIntersection::SharedEndpoint(_) if j == i + 1 => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// Result of enumerating all intersections of two arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcIntersections {
    /// Transversal crossing points, in no particular order.
    pub crossings: Vec<Point>,
    /// Common terminal endpoints of the two arcs.
    pub shared_endpoints: Vec<Point>,
}

/// All transversal crossings of two arcs. Shared terminal endpoints are
/// reported separately; any other contact (tangency, overlap, crossing at an
/// interior joint) is a general-position violation.
pub fn polyline_crossings(a: &Polyline, b: &Polyline) -> Result<ArcIntersections, GeometryError> {
    let mut crossings = Vec::new();
    let mut shared = Vec::new();
    let a_segs: Vec<Segment> = a.segments().collect();
    let b_segs: Vec<Segment> = b.segments().collect();
    for sa in &a_segs {
        for sb in &b_segs {
            match segment_intersection(sa, sb) {
                SegmentIntersection::None => {}
                SegmentIntersection::Proper(p) => crossings.push(p),
                SegmentIntersection::SharedEndpoint(p) => {
                    let a_terminal = &p == a.first() || &p == a.last();
                    let b_terminal = &p == b.first() || &p == b.last();
                    if a_terminal && b_terminal {
                        if !shared.contains(&p) {
                            shared.push(p);
                        }
                    } else {
                        return Err(GeometryError::DegenerateContact(format!(
                            "contact at interior joint {:?}",
                            p
                        )));
                    }
                }
                SegmentIntersection::Degenerate => {
                    return Err(GeometryError::DegenerateContact(
                        "tangency, overlap or endpoint-in-interior".into(),
                    ));
                }
            }
        }
    }
    Ok(ArcIntersections {
        crossings,
        shared_endpoints: shared,
    })
}

/// Simple closed polygonal loop. The point list does not repeat the first
/// point; the closing edge is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedCurve {
    points: Vec<Point>,
}

impl ClosedCurve {
    /// Builds a curve and checks it is a simple loop with nonzero area.
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        let curve = Self::new_unchecked(points)?;
        if !curve.is_simple() {
            return Err(GeometryError::NonSimpleCurve);
        }
        if signed_area(&curve).is_zero() {
            return Err(GeometryError::ZeroAreaCurve);
        }
        Ok(curve)
    }

    /// Skips the quadratic simplicity check; the caller vouches for it.
    pub fn new_unchecked(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 3 {
            return Err(GeometryError::ShortCurve);
        }
        let n = points.len();
        for k in 0..n {
            if points[k] == points[(k + 1) % n] {
                return Err(GeometryError::RepeatedPoint);
            }
        }
        Ok(ClosedCurve { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.points.len();
        (0..n).map(move |k| Segment {
            a: self.points[k].clone(),
            b: self.points[(k + 1) % n].clone(),
        })
    }

    pub fn is_simple(&self) -> bool {
        let edges: Vec<Segment> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                match segment_intersection(&edges[i], &edges[j]) {
                    SegmentIntersection::None => {}
                    SegmentIntersection::SharedEndpoint(_) if adjacent => {}
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn reversed(&self) -> ClosedCurve {
        let mut points = self.points.clone();
        points.reverse();
        ClosedCurve { points }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLocation {
    Inside,
    Outside,
    OnBoundary,
}

/// Exact Jordan parity test with a horizontal ray and the half-open edge
/// rule: an edge counts iff exactly one endpoint is strictly below the query
/// point and the crossing lies strictly to its right.
pub fn point_in_closed_curve(p: &Point, c: &ClosedCurve) -> PointLocation {
    for e in c.edges() {
        if on_segment(p, &e.a, &e.b) {
            return PointLocation::OnBoundary;
        }
    }
    let mut inside = false;
    for e in c.edges() {
        let a_below = e.a.y <= p.y;
        let b_below = e.b.y <= p.y;
        if a_below == b_below {
            continue;
        }
        // The edge straddles the horizontal line through p (half-open).
        // Upward edge: crossing is right of p iff p is left of a->b.
        let o = orient(&e.a, &e.b, p);
        let upward = e.b.y > e.a.y;
        let hits_right = if upward {
            o == Orientation::Ccw
        } else {
            o == Orientation::Cw
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

/// Shoelace area; positive iff the traversal is counterclockwise.
pub fn signed_area(c: &ClosedCurve) -> Rational {
    let pts = c.points();
    let n = pts.len();
    let mut sum = Rational::zero();
    for k in 0..n {
        let a = &pts[k];
        let b = &pts[(k + 1) % n];
        sum += &a.x * &b.y - &b.x * &a.y;
    }
    sum / (Rational::one() + Rational::one())
}
