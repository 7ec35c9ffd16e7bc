//! Haar-distributed unitary and orthogonal matrices from the QR decomposition
//! of a Ginibre matrix, with the triangular factor's diagonal made positive.

use ndarray::{Array2, ArrayBase, Data, Ix2};
use ndarray_linalg::{c64, Scalar, QR};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(master_seed, replica_index)` fully determines a sampled matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub replica_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, replica_index: u64) -> Self {
        SeedSpec {
            master_seed,
            replica_index,
        }
    }

    /// ChaCha8 keyed by the master seed, one stream per replica.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.replica_index);
        rng
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument("matrix size must be positive".into()));
    }
    Ok(())
}

/// Haar unitary `n × n` matrix.
pub fn haar_unitary(n: usize, seed: SeedSpec) -> Result<Array2<c64>> {
    check_size(n)?;
    let mut rng = seed.rng();
    let g = Array2::from_shape_simple_fn((n, n), || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        c64::new(re, im)
    });
    let (mut q, r) = g.qr().map_err(|e| Error::Linalg(e.to_string()))?;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64::new(1.0, 0.0) };
        q.column_mut(j).mapv_inplace(|x| x * phase);
    }
    Ok(q)
}

/// Haar orthogonal `n × n` matrix.
pub fn haar_orthogonal(n: usize, seed: SeedSpec) -> Result<Array2<f64>> {
    check_size(n)?;
    let mut rng = seed.rng();
    let g = Array2::from_shape_simple_fn((n, n), || StandardNormal.sample(&mut rng));
    let (mut q, r): (Array2<f64>, Array2<f64>) = g.qr().map_err(|e| Error::Linalg(e.to_string()))?;
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).mapv_inplace(|x| -x);
        }
    }
    Ok(q)
}

/// `max |(M M* - I)_{ij}|`.
pub fn orthonormality_residual<A, S>(m: &ArrayBase<S, Ix2>) -> Result<f64>
where
    A: Scalar,
    S: Data<Elem = A>,
{
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::Dimension(format!("{rows}x{cols} matrix is not square")));
    }
    let adjoint = m.t().mapv(|x| x.conj());
    let gram = m.dot(&adjoint);
    let mut worst: f64 = 0.0;
    for ((i, j), x) in gram.indexed_iter() {
        let target = if i == j { A::one() } else { A::zero() };
        worst = worst.max((*x - target).abs().to_f64().unwrap_or(f64::INFINITY));
    }
    Ok(worst)
}
