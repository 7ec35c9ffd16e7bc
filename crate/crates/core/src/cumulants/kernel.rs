use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::relative::relative_cumulant;
use super::traces::{diagonal_partition_trace, projector_partition_trace};
use super::{check_order, ProjectorFamily};
use crate::combinatorics::{cycle_partition, enumerate_partitions, DisjointSets, Permutation, SetPartition};
use crate::error::{Error, Result};
use crate::weingarten::{sigma_of, t_of_perm, tau_of_signs, SignVector, WeingartenTable};
use crate::Group;

/// One coefficient of a [`PartitionKernel`]: `rows` and `cols` index the
/// kernel's partition list.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTerm {
    pub rows: usize,
    pub cols: usize,
    pub coefficient: BigRational,
}

/// A bilinear form `Σ_{P,Q} K(P, Q) Tr_P(D) Tr_Q(D̄)` over partitions of `[r]`.
///
/// `Tr_P(D)` is the product over blocks of `P` of the trace of the product of
/// the `D_a` in that block, which is what `Tr_α` reduces to for commuting
/// (here diagonal) matrices with `P` the cycle partition of `α`.
#[derive(Debug, Clone)]
pub struct PartitionKernel {
    order: usize,
    partitions: Vec<SetPartition>,
    terms: Vec<KernelTerm>,
    denominator: BigInt,
    numerators: Vec<BigInt>,
    small: Option<(i128, Vec<i128>)>,
}

impl PartitionKernel {
    fn from_coefficients(order: usize, coefficients: HashMap<(usize, usize), BigRational>) -> Result<Self> {
        let partitions = enumerate_partitions(order)?;
        let mut terms: Vec<KernelTerm> = coefficients
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((rows, cols), coefficient)| KernelTerm { rows, cols, coefficient })
            .collect();
        terms.sort_by_key(|t| (t.rows, t.cols));
        let denominator = terms
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.coefficient.denom()));
        let numerators: Vec<BigInt> = terms
            .iter()
            .map(|t| t.coefficient.numer() * (&denominator / t.coefficient.denom()))
            .collect();
        let small = denominator.to_i128().and_then(|d| {
            numerators
                .iter()
                .map(ToPrimitive::to_i128)
                .collect::<Option<Vec<_>>>()
                .map(|nums| (d, nums))
        });
        Ok(PartitionKernel {
            order,
            partitions,
            terms,
            denominator,
            numerators,
            small,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The partitions of `[r]` that term indices refer to.
    pub fn partitions(&self) -> &[SetPartition] {
        &self.partitions
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Evaluates with caller-supplied partition traces, indexed like [`Self::partitions`].
    pub fn evaluate_with(&self, row_traces: &[BigRational], col_traces: &[BigRational]) -> BigRational {
        let mut total = BigInt::zero();
        let mut scaled = BigRational::zero();
        let integral = row_traces.iter().chain(col_traces).all(|x| x.is_integer());
        if integral {
            for (t, num) in self.terms.iter().zip(&self.numerators) {
                total += num * row_traces[t.rows].numer() * col_traces[t.cols].numer();
            }
            return BigRational::new(total, self.denominator.clone());
        }
        for t in &self.terms {
            scaled += &t.coefficient * &row_traces[t.rows] * &col_traces[t.cols];
        }
        scaled
    }

    /// Value for the projector family `(I_{p_a}, I_{q_a})`.
    pub fn evaluate(&self, family: &ProjectorFamily) -> Result<BigRational> {
        self.check_slots(family.order())?;
        let rows = family.row_dims();
        let cols = family.col_dims();
        let tr = |dims: &[usize]| -> Vec<BigRational> {
            self.partitions
                .iter()
                .map(|p| BigRational::from_integer(projector_partition_trace(p, dims)))
                .collect()
        };
        Ok(self.evaluate_with(&tr(&rows), &tr(&cols)))
    }

    /// Value for diagonal matrices `D_a`, `D̄_a` given by their diagonals.
    pub fn evaluate_diagonal(
        &self,
        rows: &[Vec<BigRational>],
        cols: &[Vec<BigRational>],
    ) -> Result<BigRational> {
        self.check_slots(rows.len())?;
        self.check_slots(cols.len())?;
        let tr = |d: &[Vec<BigRational>]| -> Result<Vec<BigRational>> {
            self.partitions
                .iter()
                .map(|p| diagonal_partition_trace(p, d))
                .collect()
        };
        Ok(self.evaluate_with(&tr(rows)?, &tr(cols)?))
    }

    /// Numerator over [`Self::small_denominator`] for projector dims, in
    /// checked `i128` arithmetic; `None` on overflow.
    pub fn scaled(&self, rows: &[usize], cols: &[usize]) -> Option<i128> {
        let (_, nums) = self.small.as_ref()?;
        let row_tr = small_traces(&self.partitions, rows)?;
        let col_tr = small_traces(&self.partitions, cols)?;
        let mut total: i128 = 0;
        for (t, &num) in self.terms.iter().zip(nums) {
            let term = num.checked_mul(row_tr[t.rows])?.checked_mul(col_tr[t.cols])?;
            total = total.checked_add(term)?;
        }
        Some(total)
    }

    pub fn small_denominator(&self) -> Option<i128> {
        self.small.as_ref().map(|s| s.0)
    }

    fn check_slots(&self, r: usize) -> Result<()> {
        if r != self.order {
            return Err(Error::Dimension(format!(
                "{r} slots for a kernel of order {}",
                self.order
            )));
        }
        Ok(())
    }
}

fn small_traces(partitions: &[SetPartition], dims: &[usize]) -> Option<Vec<i128>> {
    partitions
        .iter()
        .map(|p| {
            p.blocks().iter().try_fold(1i128, |acc, b| {
                let m = b.iter().map(|&a| dims[a]).min().unwrap_or(0) as i128;
                acc.checked_mul(m)
            })
        })
        .collect()
}

type KernelCache = RwLock<HashMap<(Group, usize, usize), Arc<PartitionKernel>>>;

fn cached(
    cache: &'static OnceLock<KernelCache>,
    key: (Group, usize, usize),
    build: impl FnOnce() -> Result<PartitionKernel>,
) -> Result<Arc<PartitionKernel>> {
    let cache = cache.get_or_init(Default::default);
    if let Some(k) = cache.read().unwrap().get(&key) {
        return Ok(Arc::clone(k));
    }
    let kernel = Arc::new(build()?);
    Ok(Arc::clone(cache.write().unwrap().entry(key).or_insert(kernel)))
}

fn index_of(partitions: &[SetPartition]) -> HashMap<SetPartition, usize> {
    partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()
}

/// Sum of `C_{π,A}` over the `A` with `0_π ≤ A` and `A ∨ 0_α ∨ 0_β = 1_r`.
struct AdmissibleSums {
    group: Group,
    n: usize,
    partitions: Vec<SetPartition>,
    top: SetPartition,
    relative: HashMap<(Permutation, usize), BigRational>,
}

impl AdmissibleSums {
    fn new(group: Group, n: usize, r: usize) -> Result<Self> {
        Ok(AdmissibleSums {
            group,
            n,
            partitions: enumerate_partitions(r)?,
            top: SetPartition::coarsest(r),
            relative: HashMap::new(),
        })
    }

    fn sum(&mut self, pi: &Permutation, alpha: &Permutation, beta: &Permutation) -> Result<BigRational> {
        let floor = cycle_partition(pi);
        let ab = cycle_partition(alpha).join(&cycle_partition(beta))?;
        let mut total = BigRational::zero();
        for (idx, a) in self.partitions.iter().enumerate() {
            if !floor.refines(a)? || a.join(&ab)? != self.top {
                continue;
            }
            let key = (pi.clone(), idx);
            if !self.relative.contains_key(&key) {
                let v = relative_cumulant(self.group, pi, a, self.n)?;
                self.relative.insert(key.clone(), v);
            }
            total += &self.relative[&key];
        }
        Ok(total)
    }
}

fn build_unitary_cumulant(n: usize, r: usize) -> Result<PartitionKernel> {
    let partitions = enumerate_partitions(r)?;
    let index = index_of(&partitions);
    let mut sums = AdmissibleSums::new(Group::Unitary, n, r)?;
    let mut coefficients: HashMap<(usize, usize), BigRational> = HashMap::new();
    let perms = Permutation::all(r);
    for alpha in &perms {
        for beta in &perms {
            let pi = beta.compose(&alpha.inverse());
            let c = sums.sum(&pi, alpha, beta)?;
            // Tr_α(D̄) carries the column dims, Tr_{β⁻¹}(D) the row dims
            let rows = index[&cycle_partition(&beta.inverse())];
            let cols = index[&cycle_partition(alpha)];
            *coefficients.entry((rows, cols)).or_insert_with(BigRational::zero) += c;
        }
    }
    PartitionKernel::from_coefficients(r, coefficients)
}

fn build_orthogonal_cumulant(n: usize, r: usize) -> Result<PartitionKernel> {
    let partitions = enumerate_partitions(r)?;
    let index = index_of(&partitions);
    let mut sums = AdmissibleSums::new(Group::Orthogonal, n, r)?;
    let mut coefficients: HashMap<(usize, usize), BigRational> = HashMap::new();
    let perms = Permutation::all(r);
    let signs = SignVector::all(r);
    let two = BigRational::from_integer(2.into());
    for alpha in &perms {
        let t_alpha_inv = t_of_perm(&alpha.inverse());
        for beta in &perms {
            let t_beta = t_of_perm(beta);
            let exponent = r as i32 - alpha.num_cycles() as i32 - beta.num_cycles() as i32;
            let lambda = num_traits::Pow::pow(&two, exponent);
            let mut acc = BigRational::zero();
            for eps in &signs {
                let big = t_alpha_inv.compose(&tau_of_signs(eps)).compose(&t_beta);
                let sigma = sigma_of(&big)?;
                acc += sums.sum(&sigma, alpha, beta)?;
            }
            // Tr_α(D) carries the row dims, Tr_{β⁻¹}(D̄) the column dims
            let rows = index[&cycle_partition(alpha)];
            let cols = index[&cycle_partition(&beta.inverse())];
            *coefficients.entry((rows, cols)).or_insert_with(BigRational::zero) += acc * &lambda;
        }
    }
    PartitionKernel::from_coefficients(r, coefficients)
}

/// Kernel of the relative-cumulant formula for `κ_r(X_1, .., X_r)`,
/// `X_a = Tr(D_a U D̄_a U*)`, memoized per `(group, n, r)`.
pub fn cumulant_kernel(group: Group, n: usize, r: usize) -> Result<Arc<PartitionKernel>> {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    check_order(group, r)?;
    cached(&CACHE, (group, n, r), || match group {
        Group::Unitary => build_unitary_cumulant(n, r),
        Group::Orthogonal => build_orthogonal_cumulant(n, r),
    })
}

/// Kernel of the moment `E(X_1 ⋯ X_m)` read directly off the inverse Gram matrix.
pub fn moment_kernel(group: Group, n: usize, m: usize) -> Result<Arc<PartitionKernel>> {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    check_order(group, m)?;
    cached(&CACHE, (group, n, m), || {
        let table = WeingartenTable::get(group, n, m)?;
        let partitions = enumerate_partitions(m)?;
        let index = index_of(&partitions);
        // index constraint induced on [m] by each pairing of the 2m entries
        let induced: Vec<usize> = match group {
            Group::Unitary => table
                .permutations()
                .iter()
                .map(|p| index[&cycle_partition(p)])
                .collect(),
            Group::Orthogonal => table
                .pairings()
                .iter()
                .map(|p| {
                    let mut sets = DisjointSets::new(2 * m);
                    for v in 0..2 * m {
                        sets.union(v, p.partner(v));
                    }
                    for a in 0..m {
                        sets.union(a, m + a);
                    }
                    let labels: Vec<usize> = (0..m).map(|a| sets.find(a)).collect();
                    index[&SetPartition::from_labels(&labels)]
                })
                .collect(),
        };
        let inv = table.inverse();
        let mut coefficients: HashMap<(usize, usize), BigRational> = HashMap::new();
        for (x, &rows) in induced.iter().enumerate() {
            for (y, &cols) in induced.iter().enumerate() {
                *coefficients.entry((rows, cols)).or_insert_with(BigRational::zero) += &inv[(x, y)];
            }
        }
        PartitionKernel::from_coefficients(m, coefficients)
    })
}
