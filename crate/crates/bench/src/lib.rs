//! Shared instance setup for the benchmarks.

use disjedge::gen::{self, Family, GenSpec};
use disjedge::Drawing;

pub fn convex(n: usize) -> Drawing {
    gen::generate(&GenSpec::new(Family::ConvexParabola, n, 0)).unwrap()
}

pub fn random(n: usize, seed: u64) -> Drawing {
    gen::generate(&GenSpec::new(Family::RandomGeneralPosition, n, seed)).unwrap()
}
