//! Classical and relative cumulants, and the cumulants of the truncated traces
//! `T_{p,q} = Tr(I_p U I_q U*)`.
//!
//! Two independent routes to `κ_r(T_1, .., T_r)` are provided. The formula
//! route ([`trace_cumulant_unitary`], [`trace_cumulant_orthogonal`]) sums
//! relative cumulants of the Weingarten function over admissible
//! `(α, β, A)`. The oracle route ([`mixed_trace_moment`]) computes mixed
//! moments straight from the inverse Gram matrix and feeds them through
//! [`classical_cumulant`]. Both are folded into [`PartitionKernel`]s, since
//! for diagonal `D` every trace depends on a permutation only through its
//! cycle partition.

mod classical;
mod closed;
mod family;
mod kernel;
mod relative;
mod trace_cumulant;
mod traces;

pub use classical::{classical_cumulant, MomentFunctional};
pub use closed::{
    covariance_closed, fourth_central_moment, limit_covariance, variance_closed,
    variance_closed_orthogonal,
};
pub use family::{CumulantRequest, ProjectorFamily};
pub use kernel::{cumulant_kernel, moment_kernel, KernelTerm, PartitionKernel};
pub use relative::{relative_cumulant, relative_cumulant_orthogonal, relative_cumulant_unitary};
pub use trace_cumulant::{
    mixed_trace_moment, mixed_trace_moment_diagonal, oracle_cumulant, trace_cumulant,
    trace_cumulant_diagonal, trace_cumulant_orthogonal, trace_cumulant_unitary, GridCheck,
};
pub use traces::{diagonal_partition_trace, diagonal_trace, projector_partition_trace, projector_trace};

use crate::error::{Error, Result};
use crate::weingarten::{MAX_ORTHOGONAL_ORDER, MAX_UNITARY_ORDER};
use crate::Group;

/// Largest cumulant order with an exact path for `group`.
pub fn max_exact_order(group: Group) -> usize {
    match group {
        Group::Unitary => MAX_UNITARY_ORDER,
        Group::Orthogonal => MAX_ORTHOGONAL_ORDER,
    }
}

pub(crate) fn check_order(group: Group, r: usize) -> Result<()> {
    let limit = max_exact_order(group);
    if r == 0 || r > limit {
        return Err(Error::SizeLimit {
            what: "exact cumulant order r",
            value: r,
            limit,
        });
    }
    Ok(())
}
