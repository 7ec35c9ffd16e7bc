use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{cycle_partition, enumerate_partitions, mobius, CycleType, Permutation, SetPartition};
use crate::error::{Error, Result};
use crate::weingarten::{weingarten_orthogonal_by_type, weingarten_unitary_by_type};
use crate::Group;

pub(crate) fn weingarten_by_type(group: Group, n: usize, key: &CycleType) -> Result<BigRational> {
    match group {
        Group::Unitary => weingarten_unitary_by_type(n, key),
        Group::Orthogonal => weingarten_orthogonal_by_type(n, key),
    }
}

/// `∏_{V ∈ C} W(π|_V)` for a `π`-invariant `C`.
pub(crate) fn product_over_blocks(
    group: Group,
    n: usize,
    pi: &Permutation,
    c: &SetPartition,
) -> Result<BigRational> {
    let labels = c.labels();
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); c.num_blocks()];
    for cycle in pi.cycles() {
        parts[labels[cycle[0]]].push(cycle.len());
    }
    let mut prod = BigRational::one();
    for p in parts {
        prod *= weingarten_by_type(group, n, &CycleType::new(p))?;
    }
    Ok(prod)
}

/// `C_{π,A} = Σ_{0_π ≤ C ≤ A} μ(C, A) ∏_{V ∈ C} W(π|_V)`.
pub fn relative_cumulant(
    group: Group,
    pi: &Permutation,
    a: &SetPartition,
    n: usize,
) -> Result<BigRational> {
    let r = pi.size();
    super::check_order(group, r)?;
    let floor = cycle_partition(pi);
    if !floor.refines(a)? {
        return Err(Error::OrderViolation(format!(
            "cycle partition {floor} of {pi} does not refine {a}"
        )));
    }
    let mut total = BigRational::zero();
    for c in enumerate_partitions(r)? {
        if floor.refines(&c)? && c.refines(a)? {
            let mu = mobius(&c, a)?;
            total += product_over_blocks(group, n, pi, &c)? * BigRational::from_integer(mu.into());
        }
    }
    Ok(total)
}

/// Relative cumulant of the unitary Weingarten function.
pub fn relative_cumulant_unitary(pi: &Permutation, a: &SetPartition, n: usize) -> Result<BigRational> {
    relative_cumulant(Group::Unitary, pi, a, n)
}

/// Relative cumulant of the orthogonal Weingarten function `WΛ`, with `σ` the
/// coset representative produced by [`crate::weingarten::sigma_of`].
pub fn relative_cumulant_orthogonal(
    sigma: &Permutation,
    a: &SetPartition,
    n: usize,
) -> Result<BigRational> {
    relative_cumulant(Group::Orthogonal, sigma, a, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn order_two_values() {
        for n in 2..9i64 {
            let nu = n as usize;
            let id = Permutation::identity(2);
            let swap = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
            let zero = SetPartition::finest(2);
            let one = SetPartition::coarsest(2);
            assert_eq!(
                relative_cumulant_unitary(&swap, &one, nu).unwrap(),
                r(-1, n * (n * n - 1))
            );
            assert_eq!(
                relative_cumulant_unitary(&id, &one, nu).unwrap(),
                r(1, n * n * (n * n - 1))
            );
            assert_eq!(relative_cumulant_unitary(&id, &zero, nu).unwrap(), r(1, n * n));
            assert_eq!(relative_cumulant_orthogonal(&id, &zero, nu).unwrap(), r(1, n * n));
            assert!(matches!(
                relative_cumulant_unitary(&swap, &zero, nu),
                Err(Error::OrderViolation(_))
            ));
        }
        let one = SetPartition::coarsest(1);
        assert_eq!(
            relative_cumulant_orthogonal(&Permutation::identity(1), &one, 7).unwrap(),
            r(1, 7)
        );
    }

    #[test]
    fn single_term_interval() {
        for group in [Group::Unitary, Group::Orthogonal] {
            for pi in Permutation::all(3) {
                let floor = cycle_partition(&pi);
                let expected: BigRational = pi
                    .cycles()
                    .iter()
                    .map(|c| weingarten_by_type(group, 6, &CycleType::new(vec![c.len()])).unwrap())
                    .product();
                assert_eq!(relative_cumulant(group, &pi, &floor, 6).unwrap(), expected);
            }
        }
    }

    fn check_reverse_identity(group: Group, r: usize, n: usize) {
        let parts = enumerate_partitions(r).unwrap();
        for pi in Permutation::all(r) {
            let floor = cycle_partition(&pi);
            for c in parts.iter().filter(|c| floor.refines(c).unwrap()) {
                let sum: BigRational = parts
                    .iter()
                    .filter(|a| floor.refines(a).unwrap() && a.refines(c).unwrap())
                    .map(|a| relative_cumulant(group, &pi, a, n).unwrap())
                    .sum();
                // independent evaluation of ∏ W(π|_V) through explicit restriction
                let direct: BigRational = c
                    .blocks()
                    .iter()
                    .map(|v| {
                        let t = pi.restrict(v).unwrap().cycle_type();
                        weingarten_by_type(group, n, &t).unwrap()
                    })
                    .product();
                assert_eq!(sum, direct, "{group} π = {pi}, C = {c}");
            }
        }
    }

    #[test]
    fn reverse_identity_unitary() {
        check_reverse_identity(Group::Unitary, 3, 6);
        check_reverse_identity(Group::Unitary, 4, 5);
    }

    #[test]
    fn reverse_identity_orthogonal() {
        check_reverse_identity(Group::Orthogonal, 3, 8);
    }
}
