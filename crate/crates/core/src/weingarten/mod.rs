//! Exact unitary and orthogonal Weingarten functions at a fixed integer `n`.
//!
//! Both groups follow the same recipe: build the Gram matrix `n^{loop(p1, p2)}`
//! over a set of pairings, invert it exactly, and read off the row belonging
//! to the base pairing. Unitary tables are indexed by the bipartite pairings
//! `{(i, k + σ(i))}` (one per `σ ∈ S_k`); orthogonal tables by all pairings of
//! `[2k]`. Values are keyed by cycle type, of `σ` in the unitary case and of
//! [`sigma_of`] in the orthogonal case.

mod hyperoctahedral;
mod matrix;
mod table;

pub use hyperoctahedral::{
    eta, hyperoctahedral_group, particular_permutations, sigma_of, t_of_perm, tau_of_signs,
    SignVector, MAX_COSET_ORDER,
};
pub use matrix::RationalMatrix;
pub use table::{
    gram_orthogonal, gram_unitary, joint_moment_orthogonal, joint_moment_unitary,
    weingarten_orthogonal, weingarten_orthogonal_by_type, weingarten_unitary,
    weingarten_unitary_by_type, WeingartenTable, MAX_ORTHOGONAL_ORDER, MAX_UNITARY_ORDER,
};

pub use num_rational::BigRational;
