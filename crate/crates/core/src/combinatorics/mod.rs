//! Set partitions, permutations and pairings.
//!
//! Everything is 0-based internally. Pairings of `[2k]` use the encoding
//! `i -> i`, `ī -> k + i`, see [`bar`].

mod pairing;
mod partition;
mod permutation;

pub use pairing::{enumerate_pairings, loop_count, Pairing, MAX_PAIRING_SIZE};
pub use partition::{enumerate_partitions, mobius, SetPartition, MAX_PARTITION_SIZE};
pub use permutation::{cycle_partition, CycleType, Permutation};

/// Index of `ī` in `[2k]`.
#[inline]
pub fn bar(i: usize, k: usize) -> usize {
    k + i
}

/// Union-find over `0..n` with path halving.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root so components are labelled by their minimum
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
