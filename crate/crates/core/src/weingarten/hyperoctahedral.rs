//! The hyperoctahedral group `H_k ⊂ S_{2k}` and the coset machinery used to
//! reduce orthogonal Weingarten values to a permutation of `[k]`.

use crate::combinatorics::{bar, Pairing, Permutation};
use crate::error::{Error, Result};

/// Largest `k` for which [`hyperoctahedral_group`] and
/// [`particular_permutations`] enumerate.
pub const MAX_COSET_ORDER: usize = 4;

/// A vector of signs `ε ∈ {-1, +1}^k`, stored as `true` for `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    negative: Vec<bool>,
}

impl SignVector {
    pub fn all_positive(k: usize) -> Self {
        SignVector {
            negative: vec![false; k],
        }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        signs
            .iter()
            .map(|&s| match s {
                1 => Ok(false),
                -1 => Ok(true),
                _ => Err(Error::Argument(format!("sign {s} is not ±1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(|negative| SignVector { negative })
    }

    /// All `2^k` sign vectors, ordered by the bitmask of negative entries.
    pub fn all(k: usize) -> Vec<SignVector> {
        (0..1u32 << k)
            .map(|mask| SignVector {
                negative: (0..k).map(|i| mask >> i & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.negative.is_empty()
    }

    pub fn is_negative(&self, i: usize) -> bool {
        self.negative[i]
    }

    pub fn sign(&self, i: usize) -> i8 {
        if self.negative[i] {
            -1
        } else {
            1
        }
    }
}

/// `η(g) = {(g(i), g(ī))}`.
pub fn eta(g: &Permutation) -> Result<Pairing> {
    let m = g.size();
    if m % 2 != 0 {
        return Err(Error::Argument(format!("η needs a permutation of even size, got {m}")));
    }
    let k = m / 2;
    let mut partner = vec![0; m];
    for i in 0..k {
        let (a, b) = (g.apply(i), g.apply(bar(i, k)));
        partner[a] = b;
        partner[b] = a;
    }
    Pairing::from_partner(partner)
}

/// `t_π(i) = i`, `t_π(ī) = \overline{π(i)}`.
pub fn t_of_perm(pi: &Permutation) -> Permutation {
    let k = pi.size();
    let mut images: Vec<usize> = (0..2 * k).collect();
    for i in 0..k {
        images[bar(i, k)] = bar(pi.apply(i), k);
    }
    Permutation::from_images_unchecked(images)
}

/// `τ_ε = ∏_{ε_i = -1} (i ī)`.
pub fn tau_of_signs(eps: &SignVector) -> Permutation {
    let k = eps.len();
    let mut images: Vec<usize> = (0..2 * k).collect();
    for i in (0..k).filter(|&i| eps.is_negative(i)) {
        images.swap(i, bar(i, k));
    }
    Permutation::from_images_unchecked(images)
}

/// `H_k`, the centralizer of `γ = ∏(i ī)`, by filtering `S_{2k}`.
pub fn hyperoctahedral_group(k: usize) -> Result<Vec<Permutation>> {
    if k == 0 || k > 3 {
        return Err(Error::SizeLimit {
            what: "hyperoctahedral order",
            value: k,
            limit: 3,
        });
    }
    let gamma = tau_of_signs(&SignVector {
        negative: vec![true; k],
    });
    Ok(Permutation::all(2 * k)
        .into_iter()
        .filter(|g| gamma.compose(g) == g.compose(&gamma))
        .collect())
}

/// Pairs `(ε, π)` with `ε = +1` at the least element of every cycle of `π`.
///
/// There are `(2k)!/(2^k k!)` of them, one per left coset of `H_k`.
pub fn particular_permutations(k: usize) -> Result<Vec<(SignVector, Permutation)>> {
    if k == 0 || k > MAX_COSET_ORDER {
        return Err(Error::SizeLimit {
            what: "particular permutation order",
            value: k,
            limit: MAX_COSET_ORDER,
        });
    }
    let mut out = Vec::new();
    for pi in Permutation::all(k) {
        for eps in SignVector::all(k) {
            // cycles are stored starting from their least element
            if pi.cycles().iter().all(|c| !eps.is_negative(c[0])) {
                out.push((eps, pi.clone()));
            }
        }
    }
    Ok(out)
}

/// The permutation `σ ∈ S_k` with `t_σ ∈ H_k Σ H_k`.
///
/// Walks each cycle of the 2-regular graph `η(Σ) ∪ η(Id)`, starting at the
/// smallest barred vertex `ī`, stepping along `η(Id)` to `i` and then along
/// `η(Σ)`; the unbarred indices met in order form one cycle of `σ`.
pub fn sigma_of(big_sigma: &Permutation) -> Result<Permutation> {
    let pairing = eta(big_sigma)?;
    let k = big_sigma.size() / 2;
    let index = |v: usize| if v >= k { v - k } else { v };
    let gamma_partner = |v: usize| if v >= k { v - k } else { v + k };

    let mut images: Vec<usize> = (0..k).collect();
    let mut visited = vec![false; 2 * k];
    // scanning barred vertices in increasing order finds each cycle's minimum first
    for start in k..2 * k {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        loop {
            visited[v] = true;
            cycle.push(index(v));
            let w = gamma_partner(v);
            visited[w] = true;
            v = pairing.partner(w);
            if v == start {
                break;
            }
        }
        for (i, &x) in cycle.iter().enumerate() {
            images[x] = cycle[(i + 1) % cycle.len()];
        }
    }
    Ok(Permutation::from_images_unchecked(images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::cycle_partition;
    use proptest::prelude::*;

    #[test]
    fn eta_examples() {
        for k in 1..=3 {
            let gamma = Pairing::bar_pairing(k);
            assert_eq!(eta(&Permutation::identity(2 * k)).unwrap(), gamma);
            for eps in SignVector::all(k) {
                assert_eq!(eta(&tau_of_signs(&eps)).unwrap(), gamma);
            }
        }
        assert!(eta(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn t_and_tau_examples() {
        assert!(t_of_perm(&Permutation::identity(3)).is_identity());
        assert!(tau_of_signs(&SignVector::all_positive(3)).is_identity());
        let gamma = tau_of_signs(&SignVector::from_signs(&[-1, -1]).unwrap());
        // (1 1̄)(2 2̄) with 1̄ = 2, 2̄ = 3 (0-based)
        assert_eq!(gamma.images(), &[2, 3, 0, 1]);
        let pi = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(t_of_perm(&pi).images(), &[0, 1, 2, 4, 5, 3]);
    }

    #[test]
    fn hyperoctahedral_orders_and_eta_invariance() {
        assert_eq!(hyperoctahedral_group(1).unwrap().len(), 2);
        assert_eq!(hyperoctahedral_group(2).unwrap().len(), 8);
        let h3 = hyperoctahedral_group(3).unwrap();
        assert_eq!(h3.len(), 48);
        for g in Permutation::all(6).iter().step_by(11) {
            let e = eta(g).unwrap();
            for h in &h3 {
                assert_eq!(eta(&g.compose(h)).unwrap(), e);
            }
        }
    }

    #[test]
    fn eta_fibres_are_left_cosets() {
        // η(g) = η(g') iff g' ∈ g H_k
        let h2 = hyperoctahedral_group(2).unwrap();
        let all = Permutation::all(4);
        for g in &all {
            for g2 in &all {
                let same = eta(g).unwrap() == eta(g2).unwrap();
                let coset = h2.iter().any(|h| g.compose(h) == *g2);
                assert_eq!(same, coset);
            }
        }
    }

    #[test]
    fn particular_permutation_counts() {
        assert_eq!(particular_permutations(1).unwrap().len(), 1);
        assert_eq!(particular_permutations(2).unwrap().len(), 3);
        assert_eq!(particular_permutations(3).unwrap().len(), 15);
        assert_eq!(particular_permutations(4).unwrap().len(), 105);
        let (eps, pi) = &particular_permutations(1).unwrap()[0];
        assert_eq!(eps.sign(0), 1);
        assert!(pi.is_identity());
    }

    #[test]
    fn particular_permutations_hit_every_coset_once() {
        for k in 1..=4 {
            let mut seen: Vec<Pairing> = particular_permutations(k)
                .unwrap()
                .iter()
                .map(|(eps, pi)| eta(&tau_of_signs(eps).compose(&t_of_perm(pi))).unwrap())
                .collect();
            let total = seen.len();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), total, "k = {k}");
        }
    }

    #[test]
    fn sigma_of_examples() {
        assert!(sigma_of(&Permutation::identity(6)).unwrap().is_identity());
        for eps in SignVector::all(3) {
            assert!(sigma_of(&tau_of_signs(&eps)).unwrap().is_identity());
        }
        for pi in Permutation::all(3) {
            let s = sigma_of(&t_of_perm(&pi)).unwrap();
            assert_eq!(s, pi);
            assert_eq!(s.cycle_type(), pi.cycle_type());
        }
    }

    #[test]
    fn sigma_of_lies_in_double_coset() {
        let h2 = hyperoctahedral_group(2).unwrap();
        for big in Permutation::all(4) {
            let t = t_of_perm(&sigma_of(&big).unwrap());
            let found = h2
                .iter()
                .any(|h1| h2.iter().any(|h2_| h1.compose(&big).compose(h2_) == t));
            assert!(found, "Σ = {big}");
        }
    }

    #[test]
    fn sigma_cycles_are_graph_components() {
        // the blocks of σ are the index sets of the cycles of η(Σ) ∪ η(Id)
        for big in Permutation::all(6).iter().step_by(5) {
            let k = 3;
            let p = eta(big).unwrap();
            let mut sets = crate::combinatorics::DisjointSets::new(2 * k);
            for v in 0..2 * k {
                sets.union(v, p.partner(v));
                sets.union(v, if v >= k { v - k } else { v + k });
            }
            let labels: Vec<usize> = (0..k).map(|i| sets.find(i)).collect();
            let expected = crate::combinatorics::SetPartition::from_labels(&labels);
            assert_eq!(cycle_partition(&sigma_of(big).unwrap()), expected);
        }
    }

    proptest! {
        #[test]
        fn sigma_type_is_constant_on_double_cosets(
            images in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
            h1 in 0usize..48,
            h2 in 0usize..48,
        ) {
            let h3 = hyperoctahedral_group(3).unwrap();
            let big = Permutation::from_images(images).unwrap();
            let moved = h3[h1].compose(&big).compose(&h3[h2]);
            prop_assert_eq!(
                sigma_of(&moved).unwrap().cycle_type(),
                sigma_of(&big).unwrap().cycle_type()
            );
        }
    }
}
