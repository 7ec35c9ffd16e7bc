use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{cycle_partition, Permutation, SetPartition};
use crate::error::{Error, Result};

/// `Tr_α(I_{d_1}, .., I_{d_k})`: a product of nested coordinate projectors has
/// the smallest rank on each cycle, so the trace is `∏_cycles min d_a`.
pub fn projector_trace(alpha: &Permutation, dims: &[usize]) -> Result<BigInt> {
    if dims.len() != alpha.size() {
        return Err(Error::Dimension(format!(
            "{} dims for a permutation of size {}",
            dims.len(),
            alpha.size()
        )));
    }
    Ok(projector_partition_trace(&cycle_partition(alpha), dims))
}

pub fn projector_partition_trace(blocks: &SetPartition, dims: &[usize]) -> BigInt {
    blocks
        .blocks()
        .iter()
        .map(|b| BigInt::from(b.iter().map(|&a| dims[a]).min().unwrap_or(0)))
        .product()
}

/// `Tr_α(D_1, .., D_k)` for diagonal `D_a`, given by their diagonals.
pub fn diagonal_trace(alpha: &Permutation, diags: &[Vec<BigRational>]) -> Result<BigRational> {
    if diags.len() != alpha.size() {
        return Err(Error::Dimension(format!(
            "{} matrices for a permutation of size {}",
            diags.len(),
            alpha.size()
        )));
    }
    diagonal_partition_trace(&cycle_partition(alpha), diags)
}

pub fn diagonal_partition_trace(
    blocks: &SetPartition,
    diags: &[Vec<BigRational>],
) -> Result<BigRational> {
    let n = diags.first().map_or(0, Vec::len);
    if diags.iter().any(|d| d.len() != n) {
        return Err(Error::Dimension("diagonals of unequal length".into()));
    }
    let mut total = BigRational::one();
    for block in blocks.blocks() {
        let mut tr = BigRational::zero();
        for i in 0..n {
            let mut prod = BigRational::one();
            for &a in block {
                prod *= &diags[a][i];
            }
            tr += prod;
        }
        total *= tr;
    }
    Ok(total)
}
