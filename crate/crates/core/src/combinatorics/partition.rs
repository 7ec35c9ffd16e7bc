use std::fmt;

use super::DisjointSets;
use crate::error::{Error, Result};

/// Largest ground set [`enumerate_partitions`] will enumerate (Bell(10) = 115975).
pub const MAX_PARTITION_SIZE: usize = 10;

/// A partition of `{0, .., k-1}`.
///
/// Blocks are sorted by their least element and each block is sorted
/// ascending, so derived equality and hashing are structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    ground_size: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition from arbitrary blocks, validating disjointness and coverage.
    pub fn from_blocks(ground_size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; ground_size];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Argument("empty block".into()));
            }
            for &x in block {
                if x >= ground_size {
                    return Err(Error::Argument(format!(
                        "element {x} outside ground set of size {ground_size}"
                    )));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Argument(format!("element {x} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::Argument(format!("element {missing} not covered")));
        }
        Ok(Self::canonical(ground_size, blocks))
    }

    /// Builds a partition from a block label per element (labels need not be contiguous).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &label) in labels.iter().enumerate() {
            match order.iter().position(|&l| l == label) {
                Some(b) => blocks[b].push(x),
                None => {
                    order.push(label);
                    blocks.push(vec![x]);
                }
            }
        }
        // first-occurrence order already sorts blocks by least element
        SetPartition {
            ground_size: labels.len(),
            blocks,
        }
    }

    fn canonical(ground_size: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition {
            ground_size,
            blocks,
        }
    }

    /// `0_k`: all singletons.
    pub fn finest(k: usize) -> Self {
        SetPartition {
            ground_size: k,
            blocks: (0..k).map(|i| vec![i]).collect(),
        }
    }

    /// `1_k`: a single block.
    pub fn coarsest(k: usize) -> Self {
        SetPartition {
            ground_size: k,
            blocks: if k == 0 { vec![] } else { vec![(0..k).collect()] },
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_finest(&self) -> bool {
        self.blocks.len() == self.ground_size
    }

    pub fn is_coarsest(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Block index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.ground_size];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x] = b;
            }
        }
        labels
    }

    /// Bitmask of each block (ground sets up to 64 elements).
    pub fn block_masks(&self) -> Vec<u64> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u64, |m, &x| m | (1 << x)))
            .collect()
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.ground_size != other.ground_size {
            return Err(Error::Dimension(format!(
                "partitions of [{}] and [{}]",
                self.ground_size, other.ground_size
            )));
        }
        Ok(())
    }

    /// True iff every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Self) -> Result<bool> {
        self.check_same_size(other)?;
        Ok(self.refines_unchecked(other))
    }

    pub(crate) fn refines_unchecked(&self, other: &Self) -> bool {
        let labels = other.labels();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| labels[x] == labels[b[0]]))
    }

    /// Greatest lower bound: nonempty pairwise intersections of blocks.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_same_size(other)?;
        let (la, lb) = (self.labels(), other.labels());
        let k = self.ground_size;
        let combined: Vec<usize> = (0..k).map(|x| la[x] * k + lb[x]).collect();
        Ok(Self::from_labels(&combined))
    }

    /// Least upper bound: connected components of the block-overlap graph.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same_size(other)?;
        Ok(self.join_unchecked(other))
    }

    pub(crate) fn join_unchecked(&self, other: &Self) -> Self {
        let mut sets = DisjointSets::new(self.ground_size);
        for block in self.blocks.iter().chain(other.blocks.iter()) {
            for &x in &block[1..] {
                sets.union(block[0], x);
            }
        }
        let labels: Vec<usize> = (0..self.ground_size).map(|x| sets.find(x)).collect();
        Self::from_labels(&labels)
    }
}

impl fmt::Display for SetPartition {
    /// 1-based, e.g. `{{1,2},{3}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// All partitions of `[k]`, generated as restricted growth strings.
pub fn enumerate_partitions(k: usize) -> Result<Vec<SetPartition>> {
    if k == 0 || k > MAX_PARTITION_SIZE {
        return Err(Error::SizeLimit {
            what: "partition ground size",
            value: k,
            limit: MAX_PARTITION_SIZE,
        });
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; k];
    // max_prefix[i] = max(labels[0..i])
    let mut max_prefix = vec![0usize; k];
    loop {
        out.push(SetPartition::from_labels(&labels));
        // find rightmost position that can be incremented
        let mut i = k - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            if labels[i] <= max_prefix[i] {
                break;
            }
            i -= 1;
        }
        labels[i] += 1;
        for j in i + 1..k {
            labels[j] = 0;
            max_prefix[j] = max_prefix[j - 1].max(labels[j - 1]);
        }
    }
}

/// Möbius function of the partition lattice, `μ(C, B)` for `C ≤ B`.
///
/// Product over blocks of `B` of `(-1)^(i-1) (i-1)!` where `i` counts the
/// blocks of `C` inside that block.
pub fn mobius(c: &SetPartition, b: &SetPartition) -> Result<i64> {
    if !c.refines(b)? {
        return Err(Error::OrderViolation(format!("{c} does not refine {b}")));
    }
    Ok(mobius_unchecked(c, b))
}

pub(crate) fn mobius_unchecked(c: &SetPartition, b: &SetPartition) -> i64 {
    let labels = b.labels();
    let mut counts = vec![0usize; b.num_blocks()];
    for block in c.blocks() {
        counts[labels[block[0]]] += 1;
    }
    counts
        .into_iter()
        .map(|i| {
            let fact: i64 = (1..i as i64).product();
            if i % 2 == 1 {
                fact
            } else {
                -fact
            }
        })
        .product()
}
