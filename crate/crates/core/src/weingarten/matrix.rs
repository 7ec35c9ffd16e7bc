use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix")));
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        Ok(m)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|l| &self[(i, l)] * &other[(l, j)])
                .fold(BigRational::zero(), |acc, x| acc + x)
        })
    }

    /// Exact inverse by fraction-free (Bareiss) Gauss-Jordan elimination.
    ///
    /// Rows are first scaled to integers; every intermediate division is exact.
    /// Returns `Ok(None)` when the matrix is singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let width = 2 * n;

        let mut scales = Vec::with_capacity(n);
        let mut work: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let scale = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut row: Vec<BigInt> = self
                .row(i)
                .iter()
                .map(|x| x.numer() * (&scale / x.denom()))
                .collect();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            work.push(row);
            scales.push(scale);
        }

        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(pivot_row) = (k..n).find(|&i| !work[i][k].is_zero()) else {
                return Ok(None);
            };
            work.swap(k, pivot_row);
            let pivot_row = work[k].clone();
            let pivot = &pivot_row[k];
            for (i, row) in work.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..width {
                    if j == k {
                        continue;
                    }
                    let num = pivot * &row[j] - &factor * &pivot_row[j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "inexact Bareiss division");
                    row[j] = q;
                }
                row[k] = BigInt::zero();
            }
            prev = pivot.clone();
        }

        // left block is now prev * I; right block is prev * A^{-1}, A = S * self
        let det = prev;
        let inv = Self::from_fn(n, n, |i, j| {
            BigRational::new(&work[i][n + j] * &scales[j], det.clone())
        })?;
        Ok(Some(inv))
    }

    /// Least common denominator of all entries.
    pub fn common_denominator(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn max_abs_numerator_bits(&self) -> u64 {
        self.entries
            .iter()
            .map(|x| x.numer().abs().bits())
            .max()
            .unwrap_or(0)
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.entries[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> BigRational {
        r(n, 1)
    }

    /// Adjugate / determinant for 3x3, written out by cofactors.
    fn adjugate_inverse_3x3(m: &RationalMatrix) -> RationalMatrix {
        let a = |i: usize, j: usize| m[(i, j)].clone();
        let cof = |i: usize, j: usize| {
            let rows: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let cols: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let minor = a(rows[0], cols[0]) * a(rows[1], cols[1])
                - a(rows[0], cols[1]) * a(rows[1], cols[0]);
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        };
        let det = (0..3).fold(BigRational::zero(), |acc, j| acc + a(0, j) * cof(0, j));
        RationalMatrix::from_fn(3, 3, |i, j| cof(j, i) / &det).unwrap()
    }

    #[test]
    fn inverts_integer_matrix_exactly() {
        let n = 4;
        let m = RationalMatrix::from_fn(3, 3, |i, j| int(if i == j { n * n } else { n })).unwrap();
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(inv, adjugate_inverse_3x3(&m));
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn inverts_rational_matrix_with_pivoting() {
        let m = RationalMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => int(0),
            (0, 1) => r(1, 2),
            (0, 2) => r(-3, 7),
            (1, 0) => r(2, 3),
            (1, 1) => int(5),
            (1, 2) => int(1),
            (2, 0) => r(1, 9),
            (2, 1) => int(0),
            _ => r(4, 5),
        })
        .unwrap();
        let inv = m.inverse().unwrap().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
        assert_eq!(inv, adjugate_inverse_3x3(&m));
    }

    #[test]
    fn singular_is_none() {
        let m = RationalMatrix::from_fn(2, 2, |_, _| int(3)).unwrap();
        assert_eq!(m.inverse().unwrap(), None);
        let rect = RationalMatrix::zeros(2, 3).unwrap();
        assert!(rect.inverse().is_err());
    }

    #[test]
    fn hilbert_matrix() {
        let n = 6;
        let h = RationalMatrix::from_fn(n, n, |i, j| r(1, (i + j + 1) as i64)).unwrap();
        let inv = h.inverse().unwrap().unwrap();
        assert!(h.mul(&inv).unwrap().is_identity());
        // known integer entry of the 6x6 inverse Hilbert matrix
        assert_eq!(inv[(0, 0)], int(36));
        assert_eq!(inv.common_denominator(), BigInt::one());
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(entries in proptest::collection::vec((-9i64..10, 1i64..5), 16)) {
            let m = RationalMatrix::from_fn(4, 4, |i, j| {
                let (a, b) = entries[4 * i + j];
                r(a, b)
            })
            .unwrap();
            if let Some(inv) = m.inverse().unwrap() {
                prop_assert!(m.mul(&inv).unwrap().is_identity());
                prop_assert!(inv.mul(&m).unwrap().is_identity());
                prop_assert_eq!(inv.inverse().unwrap().unwrap(), m);
            } else {
                // singular together with its transpose
                let t = RationalMatrix::from_fn(4, 4, |i, j| m[(j, i)].clone()).unwrap();
                prop_assert!(t.inverse().unwrap().is_none());
            }
        }
    }
}
