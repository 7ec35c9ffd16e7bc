use ndarray::{ArrayBase, Data, Ix2};
use ndarray_linalg::Scalar;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar::{haar_orthogonal, haar_unitary, SeedSpec};
use crate::Group;

/// `⌊n x⌋`, snapping values within `1e-9` of an integer so that e.g.
/// `0.3 · 400` lands on 120.
pub fn floor_index(n: usize, x: f64) -> usize {
    let v = (n as f64 * x + 1e-9).floor();
    (v.max(0.0) as usize).min(n)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Argument(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Prefix sums of `|M_ij|²`: `T_{p,q} = Σ_{i<p, j<q} |M_ij|²` in O(1).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceField {
    n: usize,
    /// `(n+1) × (n+1)`, row-major.
    cumulative: Vec<f64>,
}

impl TraceField {
    pub fn from_matrix<A, S>(m: &ArrayBase<S, Ix2>) -> Result<Self>
    where
        A: Scalar,
        S: Data<Elem = A>,
    {
        let (rows, cols) = m.dim();
        if rows != cols {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix is not square")));
        }
        let n = rows;
        let w = n + 1;
        let mut cumulative = vec![0.0; w * w];
        let mut columns = vec![Compensated::default(); n];
        for p in 0..n {
            let mut row = Compensated::default();
            for q in 0..n {
                let x = m[(p, q)];
                row.add((x.conj() * x).re().to_f64().unwrap_or(f64::NAN));
                // column q of the cumulative grid accumulates row prefixes
                let mut col = columns[q];
                col.add(row.value());
                columns[q] = col;
                cumulative[(p + 1) * w + q + 1] = col.value();
            }
        }
        Ok(TraceField { n, cumulative })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `T_{p,q}` for `0 ≤ p, q ≤ n`.
    pub fn t(&self, p: usize, q: usize) -> f64 {
        self.cumulative[p * (self.n + 1) + q]
    }

    /// `T_{p,q} - pq/n`.
    pub fn centred(&self, p: usize, q: usize) -> f64 {
        self.t(p, q) - (p * q) as f64 / self.n as f64
    }

    /// `sup_{p,q} |T_{p,q}/n - pq/n²|` over the whole grid.
    pub fn lln_sup(&self) -> f64 {
        let n = self.n as f64;
        let mut worst: f64 = 0.0;
        for p in 0..=self.n {
            for q in 0..=self.n {
                worst = worst.max((self.t(p, q) / n - (p * q) as f64 / (n * n)).abs());
            }
        }
        worst
    }
}

/// `W^(n)(s, t) = T_{⌊ns⌋,⌊nt⌋} - ⌊ns⌋⌊nt⌋/n`.
pub fn process_value(f: &TraceField, s: f64, t: f64) -> Result<f64> {
    check_unit("s", s)?;
    check_unit("t", t)?;
    Ok(f.centred(floor_index(f.n, s), floor_index(f.n, t)))
}

/// Increment of `W^(n)` over the block `]s, s'] × ]t, t']`.
pub fn block_increment(f: &TraceField, s: f64, s2: f64, t: f64, t2: f64) -> Result<f64> {
    if s > s2 || t > t2 {
        return Err(Error::OrderViolation(format!(
            "block ]{s}, {s2}] x ]{t}, {t2}] is not ordered"
        )));
    }
    Ok(process_value(f, s2, t2)? - process_value(f, s2, t)? - process_value(f, s, t2)?
        + process_value(f, s, t)?)
}

/// Values of `W^(n)` on a list of grid points for one sampled matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessSample {
    pub grid: Vec<(f64, f64)>,
    pub values: Vec<f64>,
}

impl ProcessSample {
    pub fn from_field(f: &TraceField, grid: &[(f64, f64)]) -> Result<Self> {
        let values = grid
            .iter()
            .map(|&(s, t)| process_value(f, s, t))
            .collect::<Result<_>>()?;
        Ok(ProcessSample {
            grid: grid.to_vec(),
            values,
        })
    }
}

/// The Cartesian grid `levels × levels`, `s` varying slowest.
pub fn product_grid(levels: &[f64]) -> Vec<(f64, f64)> {
    levels
        .iter()
        .flat_map(|&s| levels.iter().map(move |&t| (s, t)))
        .collect()
}

/// Trace field of one Haar sample.
pub fn sample_trace_field(group: Group, n: usize, seed: SeedSpec) -> Result<TraceField> {
    match group {
        Group::Unitary => TraceField::from_matrix(&haar_unitary(n, seed)?),
        Group::Orthogonal => TraceField::from_matrix(&haar_orthogonal(n, seed)?),
    }
}

/// Applies `f` to the trace fields of replicas `0..replicas` in parallel;
/// the output is in replica order whatever the thread count.
pub fn map_replicas<T, F>(group: Group, n: usize, replicas: usize, master_seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&TraceField) -> Result<T> + Sync,
{
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| f(&sample_trace_field(group, n, SeedSpec::new(master_seed, r))?))
        .collect()
}
