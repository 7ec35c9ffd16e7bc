use std::fmt;

use super::{DisjointSets, Permutation, SetPartition};
use crate::error::{Error, Result};

/// Largest `2k` accepted by [`enumerate_pairings`] (11!! = 10395 pairings).
pub const MAX_PAIRING_SIZE: usize = 12;

/// A fixed-point-free involution of `[2k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    partner: Vec<usize>,
}

impl Pairing {
    pub fn from_partner(partner: Vec<usize>) -> Result<Self> {
        let m = partner.len();
        if m % 2 != 0 {
            return Err(Error::Argument(format!("pairing of odd size {m}")));
        }
        for (a, &b) in partner.iter().enumerate() {
            if b >= m || b == a || partner[b] != a {
                return Err(Error::Argument(format!(
                    "{partner:?} is not a fixed-point-free involution"
                )));
            }
        }
        Ok(Pairing { partner })
    }

    /// From a list of unordered pairs covering `[size]`.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![usize::MAX; size];
        for &(a, b) in pairs {
            if a >= size || b >= size || partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::Argument(format!("bad pairs {pairs:?}")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        Self::from_partner(partner)
    }

    /// `{(i, k + σ(i))}`: the pairing of `[k]` with `[k̄]` attached to `σ`.
    pub fn from_permutation(sigma: &Permutation) -> Self {
        let k = sigma.size();
        let mut partner = vec![0; 2 * k];
        for i in 0..k {
            let j = k + sigma.apply(i);
            partner[i] = j;
            partner[j] = i;
        }
        Pairing { partner }
    }

    /// `γ = {(i, ī)}`.
    pub fn bar_pairing(k: usize) -> Self {
        Self::from_permutation(&Permutation::identity(k))
    }

    pub fn size(&self) -> usize {
        self.partner.len()
    }

    #[inline]
    pub fn partner(&self, a: usize) -> usize {
        self.partner[a]
    }

    /// Pairs `(a, b)` with `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(a, &b)| a < b)
            .map(|(a, &b)| (a, b))
            .collect()
    }

    pub fn as_partition(&self) -> SetPartition {
        let labels: Vec<usize> = (0..self.size()).map(|a| a.min(self.partner[a])).collect();
        SetPartition::from_labels(&labels)
    }

    /// True iff `index` is constant on every pair.
    pub fn is_constant_on_pairs<T: PartialEq>(&self, index: &[T]) -> bool {
        self.partner.iter().enumerate().all(|(a, &b)| index[a] == index[b])
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in self.pairs() {
            write!(f, "({} {})", a + 1, b + 1)?;
        }
        Ok(())
    }
}

/// Connected components of the multigraph whose edges are the pairs of both pairings.
pub fn loop_count(p1: &Pairing, p2: &Pairing) -> Result<usize> {
    if p1.size() != p2.size() {
        return Err(Error::Dimension(format!(
            "pairings of sizes {} and {}",
            p1.size(),
            p2.size()
        )));
    }
    let mut sets = DisjointSets::new(p1.size());
    for a in 0..p1.size() {
        sets.union(a, p1.partner(a));
        sets.union(a, p2.partner(a));
    }
    Ok(sets.components())
}

/// All `(2k-1)!!` pairings of `[2k]`, in lexicographic order of their pair lists.
pub fn enumerate_pairings(two_k: usize) -> Result<Vec<Pairing>> {
    if two_k % 2 != 0 || two_k == 0 {
        return Err(Error::Argument(format!("pairings need a positive even size, got {two_k}")));
    }
    if two_k > MAX_PAIRING_SIZE {
        return Err(Error::SizeLimit {
            what: "pairing size",
            value: two_k,
            limit: MAX_PAIRING_SIZE,
        });
    }
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; two_k];
    extend_pairings(&mut partner, &mut out);
    Ok(out)
}

fn extend_pairings(partner: &mut [usize], out: &mut Vec<Pairing>) {
    let Some(a) = partner.iter().position(|&p| p == usize::MAX) else {
        out.push(Pairing {
            partner: partner.to_vec(),
        });
        return;
    };
    for b in a + 1..partner.len() {
        if partner[b] != usize::MAX {
            continue;
        }
        partner[a] = b;
        partner[b] = a;
        extend_pairings(partner, out);
        partner[a] = usize::MAX;
        partner[b] = usize::MAX;
    }
}
