//! Randomized properties of the exact kernel and the bit rows.

use disjedge::bitrow::BitRow;
use disjedge::format::{format_rational, parse_rational};
use disjedge::geometry::{
    orient, segment_intersection, Orientation, Point, Rational, Segment, SegmentIntersection,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (any::<i64>(), 1i64..=1_000_000)
        .prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn point() -> impl Strategy<Value = Point> {
    (rational(), rational()).prop_map(|(x, y)| Point::new(x, y))
}

fn flip(o: Orientation) -> Orientation {
    match o {
        Orientation::Ccw => Orientation::Cw,
        Orientation::Cw => Orientation::Ccw,
        Orientation::Collinear => Orientation::Collinear,
    }
}

proptest! {
    #[test]
    fn rational_strings_round_trip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn orientation_is_antisymmetric(p in point(), q in point(), r in point()) {
        prop_assert_eq!(orient(&p, &q, &r), flip(orient(&p, &r, &q)));
        // Cyclic shifts preserve the sign.
        prop_assert_eq!(orient(&p, &q, &r), orient(&q, &r, &p));
    }

    #[test]
    fn orientation_survives_translation(
        p in point(), q in point(), r in point(), t in point(),
    ) {
        let shift = |a: &Point| Point::new(&a.x + &t.x, &a.y + &t.y);
        prop_assert_eq!(orient(&p, &q, &r), orient(&shift(&p), &shift(&q), &shift(&r)));
    }

    #[test]
    fn segment_intersection_is_symmetric(
        a in point(), b in point(), c in point(), d in point(),
    ) {
        prop_assume!(a != b && c != d);
        let s = Segment::new(a, b).unwrap();
        let t = Segment::new(c, d).unwrap();
        prop_assert_eq!(segment_intersection(&s, &t), segment_intersection(&t, &s));
    }

    #[test]
    fn proper_crossings_lie_on_both_segments(
        a in point(), b in point(), c in point(), d in point(),
    ) {
        prop_assume!(a != b && c != d);
        let s = Segment::new(a, b).unwrap();
        let t = Segment::new(c, d).unwrap();
        if let SegmentIntersection::Proper(x) = segment_intersection(&s, &t) {
            prop_assert!(disjedge::geometry::on_segment(&x, &s.a, &s.b));
            prop_assert!(disjedge::geometry::on_segment(&x, &t.a, &t.b));
            // Proper means interior: never an endpoint of either segment.
            prop_assert!(x != s.a && x != s.b && x != t.a && x != t.b);
        }
    }

    #[test]
    fn symdiff_is_an_involution(
        xs in proptest::collection::btree_set(1usize..=64, 0..32),
        ys in proptest::collection::btree_set(1usize..=64, 0..32),
    ) {
        let a = BitRow::from_members(64, xs.iter().copied());
        let b = BitRow::from_members(64, ys.iter().copied());
        let d = a.symdiff(&b);
        prop_assert_eq!(d.count(), a.symdiff_count(&b));
        prop_assert_eq!(d.symdiff(&b), a.clone());
        prop_assert_eq!(d.count(), xs.symmetric_difference(&ys).count());
    }
}
