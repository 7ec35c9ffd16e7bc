use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use rand_distr::{Distribution, StandardNormal};

use super::field::ProcessSample;
use crate::error::{Error, Result};
use crate::haar::SeedSpec;
use crate::Group;

/// Ridge added to the grid covariance before taking its square root.
pub const BRIDGE_RIDGE: f64 = 1e-12;

/// `(2/β)(s ∧ s' - ss')(t ∧ t' - tt')`, the covariance of the limiting
/// Brownian bridge.
pub fn bridge_covariance(a: (f64, f64), b: (f64, f64), group: Group) -> f64 {
    let (s, t) = a;
    let (s2, t2) = b;
    2.0 / group.beta() as f64 * (s.min(s2) - s * s2) * (t.min(t2) - t * t2)
}

/// Exact Gaussian sampler for the limiting bridge on a finite grid.
#[derive(Debug, Clone)]
pub struct BridgeReference {
    group: Group,
    grid: Vec<(f64, f64)>,
    covariance: Array2<f64>,
    /// Symmetric square root of `covariance + ridge`.
    root: Array2<f64>,
    min_eigenvalue: f64,
}

impl BridgeReference {
    pub fn new(grid: &[(f64, f64)], group: Group) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Argument("empty grid".into()));
        }
        for &(s, t) in grid {
            if !(s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0) {
                return Err(Error::Argument(format!(
                    "grid point ({s}, {t}) is on the boundary, where the bridge is degenerate"
                )));
            }
        }
        let m = grid.len();
        let covariance = Array2::from_shape_fn((m, m), |(i, j)| bridge_covariance(grid[i], grid[j], group));
        let ridged = &covariance + &(Array2::<f64>::eye(m) * BRIDGE_RIDGE);
        let (values, vectors) = ridged.eigh(UPLO::Lower).map_err(|e| Error::Linalg(e.to_string()))?;
        let min_eigenvalue = values.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < 0.0 {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        let sqrt = Array2::from_diag(&values.mapv(f64::sqrt));
        let root = vectors.dot(&sqrt).dot(&vectors.t());
        Ok(BridgeReference {
            group,
            grid: grid.to_vec(),
            covariance,
            root,
            min_eigenvalue,
        })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn grid(&self) -> &[(f64, f64)] {
        &self.grid
    }

    pub fn covariance(&self) -> &Array2<f64> {
        &self.covariance
    }

    /// Smallest eigenvalue after the ridge.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn ridge(&self) -> f64 {
        BRIDGE_RIDGE
    }

    pub fn sample(&self, seed: SeedSpec) -> ProcessSample {
        let mut rng = seed.rng();
        let z: Array1<f64> = (0..self.grid.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
        ProcessSample {
            grid: self.grid.clone(),
            values: self.root.dot(&z).to_vec(),
        }
    }

    pub fn samples(&self, count: usize, master_seed: u64) -> Vec<ProcessSample> {
        (0..count as u64)
            .map(|r| self.sample(SeedSpec::new(master_seed, r)))
            .collect()
    }
}
