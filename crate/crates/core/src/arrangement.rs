//! Cell counting for arrangements of polyline chains.
//!
//! The union of a family of chains is a plane graph; with V nodes, E edges
//! and C connected components it divides the plane into E - V + 1 + C cells
//! (the unbounded one included). Nodes are chain joints, endpoints, and
//! pairwise crossing points, all computed exactly.

use crate::geometry::{on_segment, segment_intersection, Point, Segment, SegmentIntersection};
use std::collections::BTreeMap;

/// Number of cells in the arrangement of the given chains.
///
/// Each chain is an open polyline; closed curves repeat their first point at
/// the end. Chains must not overlap along a positive-length stretch —
/// duplicate whole segments are tolerated (and deduplicated), partial
/// overlaps are not.
pub fn cell_count(chains: &[Vec<Point>]) -> usize {
    // Distinct undirected segments.
    let mut segs: Vec<(Point, Point)> = Vec::new();
    for chain in chains {
        for w in chain.windows(2) {
            let (a, b) = if w[0] <= w[1] {
                (w[0].clone(), w[1].clone())
            } else {
                (w[1].clone(), w[0].clone())
            };
            if a != b {
                segs.push((a, b));
            }
        }
    }
    segs.sort();
    segs.dedup();

    let mut nodes: BTreeMap<Point, usize> = BTreeMap::new();
    let node_id = |p: Point, nodes: &mut BTreeMap<Point, usize>| -> usize {
        let next = nodes.len();
        *nodes.entry(p).or_insert(next)
    };

    // Split points per segment: endpoints, proper crossings, and foreign
    // endpoints lying in the interior.
    let mut splits: Vec<Vec<Point>> = segs
        .iter()
        .map(|(a, b)| vec![a.clone(), b.clone()])
        .collect();
    for i in 0..segs.len() {
        let si = Segment::new(segs[i].0.clone(), segs[i].1.clone()).unwrap();
        for j in (i + 1)..segs.len() {
            let sj = Segment::new(segs[j].0.clone(), segs[j].1.clone()).unwrap();
            if let SegmentIntersection::Proper(p) = segment_intersection(&si, &sj) {
                splits[i].push(p.clone());
                splits[j].push(p);
            }
        }
        for j in 0..segs.len() {
            if i == j {
                continue;
            }
            for e in [&segs[j].0, &segs[j].1] {
                if *e != segs[i].0 && *e != segs[i].1 && on_segment(e, &segs[i].0, &segs[i].1) {
                    splits[i].push(e.clone());
                }
            }
        }
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (k, (a, b)) in segs.iter().enumerate() {
        let pts = &mut splits[k];
        // Order along the segment: lexicographic works because a < b.
        pts.sort();
        pts.dedup();
        debug_assert_eq!((pts.first(), pts.last()), (Some(a), Some(b)));
        for w in pts.windows(2) {
            let u = node_id(w[0].clone(), &mut nodes);
            let v = node_id(w[1].clone(), &mut nodes);
            edges.push((u, v));
        }
    }
    edges.sort();
    edges.dedup();

    let v = nodes.len();
    let e = edges.len();
    if v == 0 {
        return 1;
    }
    let mut dsu = Dsu::new(v);
    for &(a, b) in &edges {
        dsu.union(a, b);
    }
    let c = dsu.components();
    e + 1 + c - v
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn components(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x) == x).count()
    }
}

/// Convenience: treat each loop (first point not repeated) as a closed chain.
pub fn cell_count_loops(loops: &[Vec<Point>]) -> usize {
    let closed: Vec<Vec<Point>> = loops
        .iter()
        .map(|l| {
            let mut c = l.clone();
            if let Some(first) = l.first() {
                c.push(first.clone());
            }
            c
        })
        .collect();
    cell_count(&closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(pts: [(i64, i64); 3]) -> Vec<Point> {
        pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
    }

    #[test]
    fn single_triangle_two_cells() {
        assert_eq!(cell_count_loops(&[tri([(0, 0), (4, 0), (0, 4)])]), 2);
    }

    #[test]
    fn disjoint_triangles_three_cells() {
        let a = tri([(0, 0), (2, 0), (0, 2)]);
        let b = tri([(10, 0), (12, 0), (10, 2)]);
        assert_eq!(cell_count_loops(&[a, b]), 3);
    }

    #[test]
    fn star_of_david_eight_cells() {
        // Two overlapping triangles crossing in six points.
        let up = tri([(0, 0), (6, 0), (3, 6)]);
        let down = tri([(0, 4), (6, 4), (3, -2)]);
        assert_eq!(cell_count_loops(&[up, down]), 8);
    }

    #[test]
    fn shared_edge_triangles_three_cells() {
        // Triangles on either side of a common segment; the duplicate
        // segment must collapse.
        let a = tri([(0, 0), (4, 0), (2, 3)]);
        let b = tri([(0, 0), (4, 0), (2, -3)]);
        assert_eq!(cell_count_loops(&[a, b]), 3);
    }

    #[test]
    fn nested_triangles_three_cells() {
        let outer = tri([(0, 0), (12, 0), (0, 12)]);
        let inner = tri([(2, 2), (5, 2), (2, 5)]);
        assert_eq!(cell_count_loops(&[outer, inner]), 3);
    }

    #[test]
    fn empty_family_one_cell() {
        assert_eq!(cell_count(&[]), 1);
    }
}
