use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::hyperoctahedral::sigma_of;
use super::matrix::RationalMatrix;
use crate::combinatorics::{enumerate_pairings, loop_count, CycleType, Pairing, Permutation};
use crate::error::{Error, Result};
use crate::Group;

pub const MAX_UNITARY_ORDER: usize = 4;
pub const MAX_ORTHOGONAL_ORDER: usize = 3;

/// Inverse Gram matrix for one `(group, n, k)` together with the Weingarten
/// values it determines, keyed by cycle type.
#[derive(Debug, Clone)]
pub struct WeingartenTable {
    group: Group,
    n: usize,
    order: usize,
    pairings: Vec<Pairing>,
    /// Unitary only: `pairings[i]` is the pairing of `permutations[i]`.
    permutations: Vec<Permutation>,
    base: usize,
    gram: RationalMatrix,
    inverse: RationalMatrix,
    values: BTreeMap<CycleType, BigRational>,
}

type CacheKey = (Group, usize, usize);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<WeingartenTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<WeingartenTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn max_order(group: Group) -> usize {
    match group {
        Group::Unitary => MAX_UNITARY_ORDER,
        Group::Orthogonal => MAX_ORTHOGONAL_ORDER,
    }
}

fn check_args(group: Group, n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument("matrix size n must be positive".into()));
    }
    let limit = max_order(group);
    if k == 0 || k > limit {
        return Err(Error::SizeLimit {
            what: "Weingarten order k",
            value: k,
            limit,
        });
    }
    Ok(())
}

fn gram_over(pairings: &[Pairing], n: usize) -> Result<RationalMatrix> {
    let n = BigInt::from(n);
    let mut loops = vec![0usize; pairings.len() * pairings.len()];
    for (a, p1) in pairings.iter().enumerate() {
        for (b, p2) in pairings.iter().enumerate() {
            loops[a * pairings.len() + b] = loop_count(p1, p2)?;
        }
    }
    RationalMatrix::from_fn(pairings.len(), pairings.len(), |a, b| {
        BigRational::from_integer(Pow::pow(&n, loops[a * pairings.len() + b]))
    })
}

/// `k! × k!` Gram matrix over the pairings `{(i, k + σ(i))}`, `σ` in lexicographic order.
pub fn gram_unitary(k: usize, n: usize) -> Result<RationalMatrix> {
    check_args(Group::Unitary, n, k)?;
    let pairings: Vec<Pairing> = Permutation::all(k)
        .iter()
        .map(Pairing::from_permutation)
        .collect();
    gram_over(&pairings, n)
}

/// `(2k-1)!! × (2k-1)!!` Gram matrix over all pairings of `[2k]`.
pub fn gram_orthogonal(k: usize, n: usize) -> Result<RationalMatrix> {
    check_args(Group::Orthogonal, n, k)?;
    gram_over(&enumerate_pairings(2 * k)?, n)
}

impl WeingartenTable {
    /// Memoized table for `(group, n, k)`; built on first use.
    pub fn get(group: Group, n: usize, k: usize) -> Result<Arc<WeingartenTable>> {
        check_args(group, n, k)?;
        if let Some(t) = cache().read().unwrap().get(&(group, n, k)) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(Self::build(group, n, k)?);
        let mut guard = cache().write().unwrap();
        Ok(Arc::clone(guard.entry((group, n, k)).or_insert(table)))
    }

    fn build(group: Group, n: usize, k: usize) -> Result<Self> {
        let (pairings, permutations) = match group {
            Group::Unitary => {
                let perms = Permutation::all(k);
                (perms.iter().map(Pairing::from_permutation).collect(), perms)
            }
            Group::Orthogonal => (enumerate_pairings(2 * k)?, Vec::new()),
        };
        let base_pairing = Pairing::bar_pairing(k);
        let base = pairings
            .iter()
            .position(|p| *p == base_pairing)
            .expect("base pairing is always enumerated");
        let gram = gram_over(&pairings, n)?;
        let inverse = gram.inverse()?.ok_or(Error::SingularGram { n, k })?;

        let mut values = BTreeMap::new();
        for (idx, pairing) in pairings.iter().enumerate() {
            let key = match group {
                Group::Unitary => permutations[idx].cycle_type(),
                Group::Orthogonal => sigma_of(&permutation_with_eta(pairing))?.cycle_type(),
            };
            let value = inverse[(base, idx)].clone();
            if let Some(existing) = values.insert(key.clone(), value.clone()) {
                debug_assert_eq!(existing, value, "Weingarten value not constant on {key}");
            }
        }
        Ok(WeingartenTable {
            group,
            n,
            order: k,
            pairings,
            permutations,
            base,
            gram,
            inverse,
            values,
        })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn base_index(&self) -> usize {
        self.base
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    /// The Weingarten matrix (exact inverse of the Gram matrix).
    pub fn inverse(&self) -> &RationalMatrix {
        &self.inverse
    }

    pub fn values(&self) -> &BTreeMap<CycleType, BigRational> {
        &self.values
    }

    pub fn value(&self, key: &CycleType) -> Result<&BigRational> {
        self.values.get(key).ok_or_else(|| {
            Error::Argument(format!(
                "cycle type {key} is not a key of the order-{} table",
                self.order
            ))
        })
    }

    /// Unitary tables only: the permutation indexing each row.
    pub fn permutations(&self) -> &[Permutation] {
        &self.permutations
    }
}

/// Some `g ∈ S_{2k}` with `η(g) = p`.
fn permutation_with_eta(p: &Pairing) -> Permutation {
    let k = p.size() / 2;
    let mut images = vec![0; 2 * k];
    for (i, (a, b)) in p.pairs().into_iter().enumerate() {
        images[i] = a;
        images[k + i] = b;
    }
    Permutation::from_images_unchecked(images)
}

/// `W(n, σ)`; depends only on the cycle type of `σ`.
pub fn weingarten_unitary(n: usize, sigma: &Permutation) -> Result<BigRational> {
    weingarten_unitary_by_type(n, &sigma.cycle_type())
}

pub fn weingarten_unitary_by_type(n: usize, key: &CycleType) -> Result<BigRational> {
    let table = WeingartenTable::get(Group::Unitary, n, key.total())?;
    table.value(key).cloned()
}

/// `WΛ(Σ)` for `Σ ∈ S_{2k}`, through the double-coset invariant `sigma_of(Σ)`.
pub fn weingarten_orthogonal(n: usize, big_sigma: &Permutation) -> Result<BigRational> {
    weingarten_orthogonal_by_type(n, &sigma_of(big_sigma)?.cycle_type())
}

pub fn weingarten_orthogonal_by_type(n: usize, key: &CycleType) -> Result<BigRational> {
    let table = WeingartenTable::get(Group::Orthogonal, n, key.total())?;
    table.value(key).cloned()
}

fn check_indices(i: &[usize], j: &[usize], n: usize) -> Result<usize> {
    if i.len() != j.len() || i.len() % 2 != 0 || i.is_empty() {
        return Err(Error::Argument(format!(
            "index tuples must have equal positive even length, got {} and {}",
            i.len(),
            j.len()
        )));
    }
    if let Some(&bad) = i.iter().chain(j).find(|&&x| x >= n) {
        return Err(Error::Argument(format!("index {bad} outside 0..{n}")));
    }
    Ok(i.len() / 2)
}

fn pairing_sum(table: &WeingartenTable, i: &[usize], j: &[usize]) -> BigRational {
    let rows: Vec<usize> = (0..table.pairings.len())
        .filter(|&a| table.pairings[a].is_constant_on_pairs(i))
        .collect();
    let cols: Vec<usize> = (0..table.pairings.len())
        .filter(|&b| table.pairings[b].is_constant_on_pairs(j))
        .collect();
    let mut total = BigRational::zero();
    for &a in &rows {
        for &b in &cols {
            total += &table.inverse[(a, b)];
        }
    }
    total
}

/// `E(U_{i1 j1} ⋯ U_{ik jk} conj(U_{i1̄ j1̄}) ⋯ conj(U_{ik̄ jk̄}))` for Haar `U ∈ U(n)`.
///
/// `i` and `j` hold `2k` 0-based indices: the first `k` for the plain factors,
/// the last `k` for the conjugated ones.
pub fn joint_moment_unitary(i: &[usize], j: &[usize], n: usize) -> Result<BigRational> {
    let k = check_indices(i, j, n)?;
    let table = WeingartenTable::get(Group::Unitary, n, k)?;
    Ok(pairing_sum(&table, i, j))
}

/// `E(O_{i1 j1} ⋯ O_{i2k j2k})` for Haar `O ∈ O(n)`, 0-based indices.
pub fn joint_moment_orthogonal(i: &[usize], j: &[usize], n: usize) -> Result<BigRational> {
    let k = check_indices(i, j, n)?;
    let table = WeingartenTable::get(Group::Orthogonal, n, k)?;
    Ok(pairing_sum(&table, i, j))
}
