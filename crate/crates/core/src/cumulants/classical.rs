use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{enumerate_partitions, mobius, SetPartition};
use crate::error::{Error, Result};

/// `C ↦ E_C(a_1, .., a_r)` on every partition of `[r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentFunctional {
    order: usize,
    values: HashMap<SetPartition, BigRational>,
}

impl MomentFunctional {
    pub fn from_fn(
        order: usize,
        mut f: impl FnMut(&SetPartition) -> Result<BigRational>,
    ) -> Result<Self> {
        let values = enumerate_partitions(order)?
            .into_iter()
            .map(|c| f(&c).map(|v| (c, v)))
            .collect::<Result<_>>()?;
        Ok(MomentFunctional { order, values })
    }

    /// The multiplicative functional `E_C = ∏_{V ∈ C} m(V)` built from block moments.
    ///
    /// Each distinct block is evaluated once.
    pub fn from_block_moments(
        order: usize,
        mut m: impl FnMut(&[usize]) -> Result<BigRational>,
    ) -> Result<Self> {
        let mut cache: HashMap<Vec<usize>, BigRational> = HashMap::new();
        Self::from_fn(order, |c| {
            let mut prod = BigRational::from_integer(1.into());
            for block in c.blocks() {
                if !cache.contains_key(block) {
                    let v = m(block)?;
                    cache.insert(block.clone(), v);
                }
                prod *= &cache[block];
            }
            Ok(prod)
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, c: &SetPartition) -> Option<&BigRational> {
        self.values.get(c)
    }
}

/// `κ_r = Σ_{C ∈ P(r)} μ(C, 1_r) E_C`.
pub fn classical_cumulant(m: &MomentFunctional) -> Result<BigRational> {
    let top = SetPartition::coarsest(m.order);
    let mut total = BigRational::zero();
    for c in enumerate_partitions(m.order)? {
        let value = m
            .get(&c)
            .ok_or_else(|| Error::Argument(format!("moment functional undefined at {c}")))?;
        total += value * BigRational::from_integer(mobius(&c, &top)?.into());
    }
    Ok(total)
}
