//! Fixed-width bit rows over a 1-based ground set {1, .., n}.
//!
//! Set-system rows are stored as packed u64 words so that symmetric
//! differences and stabbing counts reduce to xor + popcount.

/// Membership row over a ground set of fixed size. Element k (1-based)
/// occupies bit k-1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn empty(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(len: usize, members: I) -> Self {
        let mut row = BitRow::empty(len);
        for k in members {
            row.insert(k);
        }
        row
    }

    /// Ground-set size, not the member count.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, k: usize) {
        debug_assert!(1 <= k && k <= self.len);
        self.words[(k - 1) / 64] |= 1 << ((k - 1) % 64);
    }

    pub fn contains(&self, k: usize) -> bool {
        debug_assert!(1 <= k && k <= self.len);
        (self.words[(k - 1) / 64] >> ((k - 1) % 64)) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn symdiff(&self, other: &BitRow) -> BitRow {
        assert_eq!(self.len, other.len);
        BitRow {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// |self Δ other| without allocating.
    pub fn symdiff_count(&self, other: &BitRow) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// 1-based members in increasing order.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b + 1)
                }
            })
        })
    }
}

impl std::fmt::Display for BitRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, k) in self.members().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "}}")
    }
}

/// Does an unordered pair {i, j} "stab" the set: exactly one endpoint inside.
pub fn pair_stabs(row: &BitRow, i: usize, j: usize) -> bool {
    row.contains(i) != row.contains(j)
}
