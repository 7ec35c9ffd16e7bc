use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::classical::{classical_cumulant, MomentFunctional};
use super::kernel::{cumulant_kernel, moment_kernel, PartitionKernel};
use super::{check_order, CumulantRequest, ProjectorFamily};
use crate::combinatorics::{enumerate_partitions, mobius, SetPartition};
use crate::error::{Error, Result};
use crate::Group;

use std::sync::Arc;

/// `κ_r(T_{p_1,q_1}, .., T_{p_r,q_r})` for Haar unitary `U`, through the
/// relative cumulants of the Weingarten function.
pub fn trace_cumulant_unitary(req: &CumulantRequest) -> Result<BigRational> {
    if req.group != Group::Unitary {
        return Err(Error::Argument("expected a unitary request".into()));
    }
    trace_cumulant(req)
}

/// Orthogonal analogue of [`trace_cumulant_unitary`], summing over sign
/// vectors with weight `2^{r - #α - #β}`.
pub fn trace_cumulant_orthogonal(req: &CumulantRequest) -> Result<BigRational> {
    if req.group != Group::Orthogonal {
        return Err(Error::Argument("expected an orthogonal request".into()));
    }
    trace_cumulant(req)
}

pub fn trace_cumulant(req: &CumulantRequest) -> Result<BigRational> {
    check_order(req.group, req.order())?;
    cumulant_kernel(req.group, req.family.n(), req.order())?.evaluate(&req.family)
}

/// Cumulant of `Tr(D_a U D̄_a U*)` for diagonal `D_a`, `D̄_a` of size `n`.
pub fn trace_cumulant_diagonal(
    group: Group,
    rows: &[Vec<BigRational>],
    cols: &[Vec<BigRational>],
) -> Result<BigRational> {
    let (n, r) = diagonal_shape(rows, cols)?;
    cumulant_kernel(group, n, r)?.evaluate_diagonal(rows, cols)
}

fn diagonal_shape(rows: &[Vec<BigRational>], cols: &[Vec<BigRational>]) -> Result<(usize, usize)> {
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::Dimension(format!(
            "{} row matrices and {} column matrices",
            rows.len(),
            cols.len()
        )));
    }
    Ok((rows[0].len(), rows.len()))
}

fn check_partition(c: &SetPartition, r: usize) -> Result<()> {
    if c.ground_size() != r {
        return Err(Error::Dimension(format!(
            "partition of [{}] for {r} statistics",
            c.ground_size()
        )));
    }
    Ok(())
}

/// `E_C(T_1, .., T_r) = ∏_{V ∈ C} E(∏_{a ∈ V} T_a)`, each block moment summed
/// over pairs of pairings with the inverse Gram matrix.
pub fn mixed_trace_moment(group: Group, c: &SetPartition, family: &ProjectorFamily) -> Result<BigRational> {
    check_partition(c, family.order())?;
    check_order(group, family.order())?;
    let mut prod = BigRational::one();
    for block in c.blocks() {
        prod *= moment_kernel(group, family.n(), block.len())?.evaluate(&family.restrict(block))?;
    }
    Ok(prod)
}

pub fn mixed_trace_moment_diagonal(
    group: Group,
    c: &SetPartition,
    rows: &[Vec<BigRational>],
    cols: &[Vec<BigRational>],
) -> Result<BigRational> {
    let (n, r) = diagonal_shape(rows, cols)?;
    check_partition(c, r)?;
    check_order(group, r)?;
    let mut prod = BigRational::one();
    for block in c.blocks() {
        let pick = |d: &[Vec<BigRational>]| block.iter().map(|&a| d[a].clone()).collect::<Vec<_>>();
        prod *= moment_kernel(group, n, block.len())?.evaluate_diagonal(&pick(rows), &pick(cols))?;
    }
    Ok(prod)
}

/// `κ_r` obtained by Möbius inversion of [`mixed_trace_moment`].
pub fn oracle_cumulant(req: &CumulantRequest) -> Result<BigRational> {
    let r = req.order();
    check_order(req.group, r)?;
    let m = MomentFunctional::from_block_moments(r, |block| {
        moment_kernel(req.group, req.family.n(), block.len())?.evaluate(&req.family.restrict(block))
    })?;
    classical_cumulant(&m)
}

/// Compares the formula and the oracle at one `(group, n, r)` over many
/// projector families, in `i128` where possible.
#[derive(Debug, Clone)]
pub struct GridCheck {
    group: Group,
    n: usize,
    r: usize,
    formula: Arc<PartitionKernel>,
    moments: Vec<Arc<PartitionKernel>>,
    /// Slots of each nonempty subset of `[r]`, indexed by bitmask.
    subsets: Vec<Vec<usize>>,
    /// `(μ(C, 1_r) · L / den(C), block masks)` for every partition `C`.
    combos: Vec<(i128, Vec<usize>)>,
    oracle_denominator: Option<i128>,
}

/// Outcome of [`GridCheck::run`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridReport {
    pub checked: u64,
    pub mismatches: u64,
    /// Up to ten offending `(row dims, column dims)`.
    pub examples: Vec<(Vec<usize>, Vec<usize>)>,
}

impl GridReport {
    fn merge(mut self, other: GridReport) -> GridReport {
        self.checked += other.checked;
        self.mismatches += other.mismatches;
        self.examples.extend(other.examples);
        self.examples.truncate(10);
        self
    }
}

impl GridCheck {
    pub fn new(group: Group, n: usize, r: usize) -> Result<Self> {
        check_order(group, r)?;
        let formula = cumulant_kernel(group, n, r)?;
        let moments = (1..=r)
            .map(|m| moment_kernel(group, n, m))
            .collect::<Result<Vec<_>>>()?;
        let subsets: Vec<Vec<usize>> = (0..1usize << r)
            .map(|mask| (0..r).filter(|a| mask >> a & 1 == 1).collect())
            .collect();

        let top = SetPartition::coarsest(r);
        let mut raw = Vec::new();
        let mut lcm = BigInt::one();
        for c in enumerate_partitions(r)? {
            let den: BigInt = c
                .blocks()
                .iter()
                .map(|b| moments[b.len() - 1].denominator().clone())
                .product();
            lcm = lcm.lcm(&den);
            let masks: Vec<usize> = c
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&a| 1usize << a).sum())
                .collect();
            raw.push((mobius(&c, &top)?, den, masks));
        }
        let combos: Option<Vec<(i128, Vec<usize>)>> = raw
            .into_iter()
            .map(|(mu, den, masks)| {
                (BigInt::from(mu) * (&lcm / den)).to_i128().map(|w| (w, masks))
            })
            .collect();
        let oracle_denominator = lcm.to_i128().filter(|_| combos.is_some());
        Ok(GridCheck {
            group,
            n,
            r,
            formula,
            moments,
            subsets,
            combos: combos.unwrap_or_default(),
            oracle_denominator,
        })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.r
    }

    /// Exact `(formula, oracle)` values.
    pub fn values(&self, rows: &[usize], cols: &[usize]) -> Result<(BigRational, BigRational)> {
        let family = ProjectorFamily::new(self.n, rows.iter().copied().zip(cols.iter().copied()).collect())?;
        let req = CumulantRequest::new(self.group, family);
        Ok((self.formula.evaluate(&req.family)?, oracle_cumulant(&req)?))
    }

    fn oracle_scaled(&self, rows: &[usize], cols: &[usize]) -> Option<i128> {
        self.oracle_denominator?;
        let mut block = vec![0i128; self.subsets.len()];
        let mut sub_rows = Vec::with_capacity(self.r);
        let mut sub_cols = Vec::with_capacity(self.r);
        for (mask, slots) in self.subsets.iter().enumerate().skip(1) {
            sub_rows.clear();
            sub_cols.clear();
            sub_rows.extend(slots.iter().map(|&a| rows[a]));
            sub_cols.extend(slots.iter().map(|&a| cols[a]));
            block[mask] = self.moments[slots.len() - 1].scaled(&sub_rows, &sub_cols)?;
        }
        let mut total: i128 = 0;
        for (weight, masks) in &self.combos {
            let term = masks
                .iter()
                .try_fold(*weight, |acc, &m| acc.checked_mul(block[m]))?;
            total = total.checked_add(term)?;
        }
        Some(total)
    }

    /// Whether formula and oracle agree exactly at the given dims.
    pub fn agrees(&self, rows: &[usize], cols: &[usize]) -> Result<bool> {
        let fast = (|| {
            let k = self.formula.scaled(rows, cols)?;
            let o = self.oracle_scaled(rows, cols)?;
            let lhs = k.checked_mul(self.oracle_denominator?)?;
            let rhs = o.checked_mul(self.formula.small_denominator()?)?;
            Some(lhs == rhs)
        })();
        match fast {
            Some(v) => Ok(v),
            None => {
                let (a, b) = self.values(rows, cols)?;
                Ok(a == b)
            }
        }
    }

    /// Number of points with every `p_a, q_a` in `1..=n`.
    pub fn full_grid_size(&self) -> u64 {
        (self.n as u64 * self.n as u64).pow(self.r as u32)
    }

    /// Dims of grid point `index`, slot-major with `p_a, q_a ∈ 1..=n`.
    pub fn grid_point(&self, mut index: u64) -> (Vec<usize>, Vec<usize>) {
        let n = self.n as u64;
        let mut rows = vec![0; self.r];
        let mut cols = vec![0; self.r];
        for a in (0..self.r).rev() {
            cols[a] = (index % n) as usize + 1;
            index /= n;
            rows[a] = (index % n) as usize + 1;
            index /= n;
        }
        (rows, cols)
    }

    /// Checks every `step`-th point of the full grid (`step = 1` for all of it).
    pub fn run(&self, step: u64) -> Result<GridReport> {
        let step = step.max(1);
        let count = self.full_grid_size().div_ceil(step);
        (0..count)
            .into_par_iter()
            .map(|i| {
                let (rows, cols) = self.grid_point(i * step);
                let ok = self.agrees(&rows, &cols)?;
                Ok(GridReport {
                    checked: 1,
                    mismatches: u64::from(!ok),
                    examples: if ok { Vec::new() } else { vec![(rows, cols)] },
                })
            })
            .try_reduce(GridReport::default, |a, b| Ok(a.merge(b)))
    }
}
