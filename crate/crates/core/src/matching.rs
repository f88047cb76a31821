//! Perfect matchings on the ground set with low stabbing number.
//!
//! Greedy multiplicative reweighting: every row starts at weight 1; each
//! round picks the unmatched pair stabbed by the least total weight, then
//! doubles (generally: multiplies) the weight of every row that stabs it.
//! Rows that keep getting stabbed get expensive fast, which steers later
//! pairs away from them and flattens the final stabbing histogram.

use crate::geometry::Rational;
use crate::setsys::{stabbing_number, SetRow, SetSystem};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// n/2 disjoint label pairs covering {1, .., n}, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub max_stab: usize,
    /// Final stabbing count per row, in row order.
    pub stab_histogram: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Smallest (min index, max index) pair wins.
    Lexicographic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingConfig {
    /// Must exceed 1. With the default 2 the inner loop stays in integer
    /// popcount arithmetic; anything else takes an exact big-rational path.
    pub weight_multiplier: Rational,
    pub tie_break: TieBreak,
    /// Calibration constant for reporting max_stab / n^(2/3) ratios; carries
    /// no semantics inside the algorithm.
    pub stab_constant_c1: f64,
}

impl Default for MatchingConfig {
    fn default() -> Self {
        MatchingConfig {
            weight_multiplier: Rational::from_integer(BigInt::from(2)),
            tie_break: TieBreak::Lexicographic,
            stab_constant_c1: 4.0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("exhaustive search supports ground sets up to 10, got {0}")]
    GroundTooLarge(usize),
}

/// Row-membership bitmap per ground element: bit r of `of[k]` says row r
/// contains element k. The xor of two elements' bitmaps is exactly the set
/// of rows stabbing that pair.
struct MemberBits {
    words: usize,
    of: Vec<Vec<u64>>, // indexed 0..n, entry 0 unused
}

impl MemberBits {
    fn build(sys: &SetSystem, n: usize) -> Self {
        let words = sys.rows.len().div_ceil(64).max(1);
        let mut of = vec![vec![0u64; words]; n + 1];
        for (r, row) in sys.rows.iter().enumerate() {
            for k in row.members.members() {
                of[k][r / 64] |= 1 << (r % 64);
            }
        }
        MemberBits { words, of }
    }
}

pub fn low_stab_matching(sys: &SetSystem, n: usize, cfg: &MatchingConfig) -> Matching {
    assert!(n % 2 == 0 && n >= 2);
    assert_eq!(sys.ground_size, n);
    assert!(cfg.weight_multiplier > Rational::one());
    let two = Rational::from_integer(BigInt::from(2));

    let pairs = if cfg.weight_multiplier == two {
        reweight_pow2(sys, n)
    } else {
        reweight_exact(sys, n, &cfg.weight_multiplier)
    };
    finish(sys, pairs)
}

/// Multiplier-2 path: a row stabbed s times weighs 2^s, so pair costs are
/// sums of powers of two — grouped popcounts over the row bitmaps, all in
/// u128 (row count < 2^14 and exponents ≤ n/2 ≤ 64 keep sums well inside).
fn reweight_pow2(sys: &SetSystem, n: usize) -> Vec<(usize, usize)> {
    let mb = MemberBits::build(sys, n);
    let n_rows = sys.rows.len();
    let mut stabs: Vec<u32> = vec![0; n_rows];
    let mut unmatched: Vec<usize> = (1..=n).collect();
    let mut chosen = Vec::with_capacity(n / 2);

    while !unmatched.is_empty() {
        // Exponent groups: one mask of rows per current weight.
        let mut exps: Vec<u32> = stabs.clone();
        exps.sort_unstable();
        exps.dedup();
        let mut masks: Vec<(u32, Vec<u64>)> =
            exps.iter().map(|&e| (e, vec![0u64; mb.words])).collect();
        for (r, &s) in stabs.iter().enumerate() {
            let g = exps.binary_search(&s).unwrap();
            masks[g].1[r / 64] |= 1 << (r % 64);
        }

        let mut best: Option<((usize, usize), u128)> = None;
        for (a, &u) in unmatched.iter().enumerate() {
            for &w in &unmatched[(a + 1)..] {
                let mut cost: u128 = 0;
                for (e, mask) in &masks {
                    let mut c: u32 = 0;
                    for i in 0..mb.words {
                        c += ((mb.of[u][i] ^ mb.of[w][i]) & mask[i]).count_ones();
                    }
                    cost += (c as u128) << e;
                }
                // Ascending scan order makes strict < the lexicographic
                // tie-break.
                if best.as_ref().is_none_or(|(_, b)| cost < *b) {
                    best = Some(((u, w), cost));
                }
            }
        }
        let ((u, w), _) = best.unwrap();
        for (r, s) in stabs.iter_mut().enumerate() {
            let bit = (mb.of[u][r / 64] ^ mb.of[w][r / 64]) >> (r % 64) & 1;
            *s += bit as u32;
        }
        unmatched.retain(|&x| x != u && x != w);
        chosen.push((u, w));
    }
    chosen
}

/// General multiplier: exact rational weights, same selection rule.
fn reweight_exact(sys: &SetSystem, n: usize, mult: &Rational) -> Vec<(usize, usize)> {
    let mut weights: Vec<Rational> = vec![Rational::one(); sys.rows.len()];
    let mut unmatched: Vec<usize> = (1..=n).collect();
    let mut chosen = Vec::with_capacity(n / 2);
    let stab =
        |row: &SetRow, u: usize, w: usize| row.members.contains(u) != row.members.contains(w);

    while !unmatched.is_empty() {
        let mut best: Option<((usize, usize), Rational)> = None;
        for (a, &u) in unmatched.iter().enumerate() {
            for &w in &unmatched[(a + 1)..] {
                let mut cost = Rational::zero();
                for (r, row) in sys.rows.iter().enumerate() {
                    if stab(row, u, w) {
                        cost += &weights[r];
                    }
                }
                if best.as_ref().is_none_or(|(_, b)| cost < *b) {
                    best = Some(((u, w), cost));
                }
            }
        }
        let ((u, w), _) = best.unwrap();
        for (r, row) in sys.rows.iter().enumerate() {
            if stab(row, u, w) {
                weights[r] *= mult;
            }
        }
        unmatched.retain(|&x| x != u && x != w);
        chosen.push((u, w));
    }
    chosen
}

fn finish(sys: &SetSystem, mut pairs: Vec<(usize, usize)>) -> Matching {
    pairs.sort_unstable();
    let stab_histogram: Vec<usize> = sys
        .rows
        .iter()
        .map(|row| stabbing_number(row, &pairs))
        .collect();
    let max_stab = stab_histogram.iter().copied().max().unwrap_or(0);
    Matching {
        pairs,
        max_stab,
        stab_histogram,
    }
}

/// Minimizes the maximum per-row stabbing number over all (n-1)!! perfect
/// matchings. Ties go to the lexicographically smallest matching.
pub fn exhaustive_best_matching(sys: &SetSystem, n: usize) -> Result<Matching, MatchingError> {
    if n > 10 {
        return Err(MatchingError::GroundTooLarge(n));
    }
    assert!(n % 2 == 0 && n >= 2);
    let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
    let mut current: Vec<(usize, usize)> = Vec::new();
    let mut free: Vec<usize> = (1..=n).collect();
    enumerate(sys, &mut free, &mut current, &mut best);
    let (_, pairs) = best.unwrap();
    Ok(finish(sys, pairs))
}

fn enumerate(
    sys: &SetSystem,
    free: &mut Vec<usize>,
    current: &mut Vec<(usize, usize)>,
    best: &mut Option<(usize, Vec<(usize, usize)>)>,
) {
    if free.is_empty() {
        let value = sys
            .rows
            .iter()
            .map(|row| stabbing_number(row, current))
            .max()
            .unwrap_or(0);
        let better = match best {
            None => true,
            Some((b, pairs)) => value < *b || (value == *b && &current[..] < &pairs[..]),
        };
        if better {
            *best = Some((value, current.clone()));
        }
        return;
    }
    // Always pair off the smallest free element: each matching enumerated
    // once, in lexicographic order.
    let u = free[0];
    for k in 1..free.len() {
        let w = free[k];
        let mut rest: Vec<usize> = free.iter().copied().filter(|&x| x != u && x != w).collect();
        current.push((u, w));
        enumerate(sys, &mut rest, current, best);
        current.pop();
    }
}
