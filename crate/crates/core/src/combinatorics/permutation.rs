use std::fmt;
use std::hash::{Hash, Hasher};

use super::SetPartition;
use crate::error::{Error, Result};

/// A bijection of `{0, .., k-1}` with its cycle decomposition precomputed.
#[derive(Debug, Clone)]
pub struct Permutation {
    images: Vec<usize>,
    // each cycle starts at its least element; cycles sorted by that element
    cycles: Vec<Vec<usize>>,
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for Permutation {}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.images.cmp(&other.images)
    }
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &x in &images {
            if x >= k || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Argument(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Self::from_images_unchecked(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        let cycles = compute_cycles(&images);
        Permutation { images, cycles }
    }

    /// Builds a permutation of `[k]` from disjoint 0-based cycles; unlisted points are fixed.
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut touched = vec![false; k];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= k || std::mem::replace(&mut touched[x], true) {
                    return Err(Error::Argument(format!("bad cycle {cycle:?} for k = {k}")));
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self::from_images_unchecked(images))
    }

    pub fn identity(k: usize) -> Self {
        Self::from_images_unchecked((0..k).collect())
    }

    /// All of `S_k` in lexicographic order of the image vector.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut current: Vec<usize> = (0..k).collect();
        let mut out = Vec::new();
        loop {
            out.push(Self::from_images_unchecked(current.clone()));
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
                return out;
            };
            let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// `#(σ)`, the number of cycles including fixed points.
    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles.iter().map(Vec::len).collect())
    }

    /// `self ∘ other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.size(), other.size(), "composing permutations of different sizes");
        Self::from_images_unchecked(other.images.iter().map(|&x| self.images[x]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.size()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self::from_images_unchecked(inv)
    }

    /// Restriction to an invariant subset, relabelled by rank within `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        let rank = |x: usize| sorted.binary_search(&x).ok();
        let images = sorted
            .iter()
            .map(|&x| {
                rank(self.images[x])
                    .ok_or_else(|| Error::Argument(format!("subset {subset:?} is not invariant")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_images_unchecked(images))
    }
}

fn compute_cycles(images: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; images.len()];
    let mut cycles = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = images[x];
        }
        cycles.push(cycle);
    }
    cycles
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation with fixed points, e.g. `(1 2)(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in &self.cycles {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The partition `0_σ` whose blocks are the cycles of `σ`.
pub fn cycle_partition(sigma: &Permutation) -> SetPartition {
    let mut labels = vec![0; sigma.size()];
    for (c, cycle) in sigma.cycles().iter().enumerate() {
        for &x in cycle {
            labels[x] = c;
        }
    }
    SetPartition::from_labels(&labels)
}

/// An integer partition, parts weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// A representative permutation whose cycles are consecutive runs.
    pub fn representative(&self) -> Permutation {
        let k = self.total();
        let mut images: Vec<usize> = (0..k).collect();
        let mut start = 0;
        for &len in &self.parts {
            for i in 0..len {
                images[start + i] = start + (i + 1) % len;
            }
            start += len;
        }
        Permutation::from_images_unchecked(images)
    }

    /// Merges the parts of several cycle types.
    pub fn union<'a>(types: impl IntoIterator<Item = &'a CycleType>) -> Self {
        Self::new(types.into_iter().flat_map(|t| t.parts.iter().copied()).collect())
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(k: usize) -> impl Strategy<Value = Permutation> {
        Just((0..k).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    #[test]
    fn symmetric_group_sizes() {
        for (k, fact) in [(1, 1), (2, 2), (3, 6), (4, 24), (5, 120)] {
            let all = Permutation::all(k);
            assert_eq!(all.len(), fact);
            let distinct: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), fact);
        }
    }

    #[test]
    fn cycle_partition_examples() {
        assert_eq!(cycle_partition(&Permutation::identity(3)), SetPartition::finest(3));
        let c3 = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(cycle_partition(&c3), SetPartition::coarsest(3));
        let t = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        assert_eq!(
            cycle_partition(&t),
            SetPartition::from_blocks(3, vec![vec![0, 1], vec![2]]).unwrap()
        );
        assert_eq!(t.to_string(), "(1 2)(3)");
        assert_eq!(cycle_partition(&t).num_blocks(), t.num_cycles());
    }

    #[test]
    fn compose_and_inverse() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // a(b(0)) = a(0) = 1, a(b(1)) = a(2) = 2, a(b(2)) = a(1) = 0
        assert_eq!(a.compose(&b).images(), &[1, 2, 0]);
        for p in Permutation::all(4) {
            assert!(p.compose(&p.inverse()).is_identity());
        }
    }

    #[test]
    fn cycle_partition_of_product_is_refined_by_join() {
        let all = Permutation::all(4);
        for s in &all {
            for t in &all {
                let join = cycle_partition(s).join(&cycle_partition(t)).unwrap();
                assert!(cycle_partition(&s.compose(t)).refines(&join).unwrap());
            }
        }
    }

    #[test]
    fn restriction() {
        let p = Permutation::from_cycles(5, &[&[0, 3], &[1, 4, 2]]).unwrap();
        let r = p.restrict(&[1, 2, 4]).unwrap();
        assert_eq!(r.cycle_type(), CycleType::new(vec![3]));
        assert!(p.restrict(&[0, 1]).is_err());
    }

    #[test]
    fn cycle_type_representative() {
        let t = CycleType::new(vec![1, 3, 2]);
        assert_eq!(t.parts(), &[3, 2, 1]);
        assert_eq!(t.representative().cycle_type(), t);
        assert_eq!(t.to_string(), "[3,2,1]");
    }

    proptest! {
        #[test]
        fn group_laws(a in perm(7), b in perm(7), c in perm(7)) {
            prop_assert!(a.compose(&a.inverse()).is_identity());
            prop_assert!(a.inverse().compose(&a).is_identity());
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert_eq!(a.compose(&b).apply(3), a.apply(b.apply(3)));
        }

        #[test]
        fn cycle_type_is_a_class_function(a in perm(7), g in perm(7)) {
            let conj = g.compose(&a).compose(&g.inverse());
            prop_assert_eq!(conj.cycle_type(), a.cycle_type());
            prop_assert_eq!(a.cycle_type().total(), 7);
            prop_assert_eq!(a.inverse().cycle_type(), a.cycle_type());
            prop_assert_eq!(a.num_cycles(), a.cycle_type().len());
        }
    }
}
