use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use ndarray::{s, Array2};
use ndarray_linalg::{EigValsh, Lapack, Scalar, UPLO};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::floor_index;
use super::stats::mean_se;
use crate::error::{Error, Result};
use crate::haar::{haar_orthogonal, haar_unitary, SeedSpec};
use crate::Group;

/// Number of equal-width histogram bins on `[0, 1]`.
pub const SPECTRAL_BINS: usize = 40;

const QUADRATURE_DEGREE: usize = 64;

/// The Kesten-McKay law with support `[u-, u+]`, the limiting spectral
/// distribution of `H = (I_p U I_q)(I_p U I_q)*` restricted to its first
/// `p = ⌊ns⌋` coordinates, for `q = ⌊nt⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KestenMcKay {
    pub s: f64,
    pub t: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub c: f64,
    /// `s ≤ min(t, 1 - t)`; outside it the limit also carries atoms at 0 or 1
    /// and the density below has mass less than one.
    pub clean_regime: bool,
}

pub fn kesten_mckay(s: f64, t: f64) -> Result<KestenMcKay> {
    for (name, v) in [("s", s), ("t", t)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Argument(format!("{name} = {v} must lie in (0, 1)")));
        }
    }
    let a = (s * (1.0 - t)).sqrt();
    let b = ((1.0 - s) * t).sqrt();
    let (u_minus, u_plus) = ((a - b).powi(2), (a + b).powi(2).min(1.0));
    let inv_c = 0.5 * (1.0 - (u_minus * u_plus).sqrt() - ((1.0 - u_minus) * (1.0 - u_plus)).sqrt());
    Ok(KestenMcKay {
        s,
        t,
        u_minus,
        u_plus,
        c: 1.0 / inv_c,
        clean_regime: s <= t.min(1.0 - t) + 1e-12,
    })
}

impl KestenMcKay {
    pub fn density(&self, x: f64) -> f64 {
        if x <= self.u_minus || x >= self.u_plus {
            return 0.0;
        }
        self.c * ((x - self.u_minus) * (self.u_plus - x)).sqrt() / (2.0 * PI * x * (1.0 - x))
    }

    /// `∫_a^b g(x) π(x) dx`, by Gauss-Legendre in the angle
    /// `x = u- + (u+ - u-) sin²(θ/2)`, which absorbs the square-root edges.
    pub fn integrate(&self, a: f64, b: f64, g: impl Fn(f64) -> f64) -> f64 {
        let (lo, hi) = (a.max(self.u_minus), b.min(self.u_plus));
        if lo >= hi {
            return 0.0;
        }
        let w = self.u_plus - self.u_minus;
        let angle = |x: f64| 2.0 * ((x - self.u_minus) / w).clamp(0.0, 1.0).sqrt().asin();
        let rule = GaussLegendre::new(NonZeroUsize::new(QUADRATURE_DEGREE).unwrap());
        let f = |theta: f64| {
            let (sn, cs) = (theta / 2.0).sin_cos();
            let (sn2, cs2) = (sn * sn, cs * cs);
            let x = self.u_minus + w * sn2;
            let one_minus = (1.0 - self.u_plus) + w * cs2;
            // π(x) dx with √((x-u-)(u+-x)) = w sn cs and dx = w sn cs dθ
            g(x) * self.c * w * w * sn2 * cs2 / (2.0 * PI * x * one_minus)
        };
        rule.integrate(angle(lo), angle(hi), f)
    }

    pub fn mass(&self) -> f64 {
        self.integrate(0.0, 1.0, |_| 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.integrate(0.0, 1.0, |x| x)
    }

    /// Mass of each of `bins` equal bins on `[0, 1]`.
    pub fn bin_masses(&self, bins: usize) -> Vec<f64> {
        let h = 1.0 / bins as f64;
        (0..bins)
            .map(|i| self.integrate(i as f64 * h, (i + 1) as f64 * h, |_| 1.0))
            .collect()
    }
}

/// Pooled eigenvalue histogram of `H_{p,q}` against the Kesten-McKay law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralHistogram {
    pub edges: Vec<f64>,
    pub frequencies: Vec<f64>,
    /// Kesten-McKay mass per bin.
    pub reference: Vec<f64>,
    /// Density at bin midpoints, for plotting.
    pub density_at_midpoints: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralComparison {
    pub group: Group,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub replicas: usize,
    pub law: KestenMcKay,
    pub histogram: SpectralHistogram,
    /// `Σ_bins |frequency - reference mass|`.
    pub l1: f64,
    pub mean_eigenvalue: f64,
    pub mean_eigenvalue_se: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Set when `(p, q)` is outside the regime where the limit has no atoms.
    pub regime_warning: Option<String>,
}

fn truncated_spectrum<A>(m: &Array2<A>, p: usize, q: usize) -> Result<Vec<f64>>
where
    A: Scalar + Lapack,
{
    let v = m.slice(s![..p, ..q]);
    let h = v.dot(&v.t().mapv(|x| x.conj()));
    let eig = h
        .eigvalsh(UPLO::Lower)
        .map_err(|e| Error::Linalg(e.to_string()))?;
    Ok(eig.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
}

/// Eigenvalues of `H_{p,q}` for one Haar sample.
pub fn sample_spectrum(group: Group, n: usize, p: usize, q: usize, seed: SeedSpec) -> Result<Vec<f64>> {
    if p == 0 || q == 0 || p > n || q > n {
        return Err(Error::Dimension(format!("need 1 <= p, q <= n, got p = {p}, q = {q}, n = {n}")));
    }
    match group {
        Group::Unitary => truncated_spectrum(&haar_unitary(n, seed)?, p, q),
        Group::Orthogonal => truncated_spectrum(&haar_orthogonal(n, seed)?, p, q),
    }
}

pub fn spectral_compare(
    group: Group,
    n: usize,
    s: f64,
    t: f64,
    replicas: usize,
    master_seed: u64,
) -> Result<SpectralComparison> {
    let law = kesten_mckay(s, t)?;
    let (p, q) = (floor_index(n, s), floor_index(n, t));
    if replicas < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: replicas,
        });
    }
    let spectra: Vec<Vec<f64>> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| sample_spectrum(group, n, p, q, SeedSpec::new(master_seed, r)))
        .collect::<Result<_>>()?;

    let bins = SPECTRAL_BINS;
    let mut counts = vec![0usize; bins];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in spectra.iter().flatten() {
        lo = lo.min(x);
        hi = hi.max(x);
        let b = ((x.clamp(0.0, 1.0) * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let total: usize = counts.iter().sum();
    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let reference = law.bin_masses(bins);
    let l1 = frequencies
        .iter()
        .zip(&reference)
        .map(|(f, r)| (f - r).abs())
        .sum();
    let h = 1.0 / bins as f64;
    let edges = (0..=bins).map(|i| i as f64 * h).collect();
    let density_at_midpoints = (0..bins).map(|i| law.density((i as f64 + 0.5) * h)).collect();

    let means: Vec<f64> = spectra
        .iter()
        .map(|e| e.iter().sum::<f64>() / e.len() as f64)
        .collect();
    let (mean_eigenvalue, mean_eigenvalue_se) = mean_se(&means)?;

    let regime_warning = (p > q || p + q > n).then(|| {
        format!("p = {p}, q = {q}, n = {n} is outside p <= q, p + q <= n; the limit has atoms not covered by the density")
    });

    Ok(SpectralComparison {
        group,
        n,
        p,
        q,
        replicas,
        law,
        histogram: SpectralHistogram {
            edges,
            frequencies,
            reference,
            density_at_midpoints,
        },
        l1,
        mean_eigenvalue,
        mean_eigenvalue_se,
        min_eigenvalue: lo,
        max_eigenvalue: hi,
        regime_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcsine_case() {
        let k = kesten_mckay(0.5, 0.5).unwrap();
        assert!(k.u_minus.abs() < 1e-15 && (k.u_plus - 1.0).abs() < 1e-15);
        assert!((k.c - 2.0).abs() < 1e-12);
        for x in [0.1, 0.37, 0.5, 0.93] {
            let arcsine = 1.0 / (PI * (x * (1.0 - x)).sqrt());
            assert!((k.density(x) - arcsine).abs() < 1e-12);
        }
        assert!((k.mass() - 1.0).abs() < 1e-10);
        assert!(k.clean_regime);
    }

    #[test]
    fn mass_and_mean() {
        for (s, t) in [(0.3, 0.5), (0.1, 0.2), (0.25, 0.7), (0.05, 0.5)] {
            let k = kesten_mckay(s, t).unwrap();
            assert!((k.mass() - 1.0).abs() < 1e-8, "({s}, {t}): {}", k.mass());
            assert!((k.mean() - t).abs() < 1e-8, "({s}, {t}): {}", k.mean());
            let bins: f64 = k.bin_masses(SPECTRAL_BINS).iter().sum();
            assert!((bins - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn mass_against_plain_quadrature() {
        // independent check: midpoint rule in x, far from the square-root edges
        let k = kesten_mckay(0.3, 0.5).unwrap();
        let (a, b) = (k.u_minus + 0.1, k.u_plus - 0.1);
        let m = 200_000;
        let h = (b - a) / m as f64;
        let direct: f64 = (0..m).map(|i| k.density(a + (i as f64 + 0.5) * h) * h).sum();
        assert!((k.integrate(a, b, |_| 1.0) - direct).abs() < 1e-8);
    }

    #[test]
    fn support_edges_and_boundaries() {
        let k = kesten_mckay(0.3, 0.5).unwrap();
        let a: f64 = (0.3f64 * 0.5).sqrt();
        let b: f64 = (0.7f64 * 0.5).sqrt();
        assert!((k.u_minus - (a - b).powi(2)).abs() < 1e-15);
        assert!((k.u_plus - (a + b).powi(2)).abs() < 1e-15);
        assert_eq!(k.density(k.u_minus / 2.0), 0.0);
        assert!(kesten_mckay(0.0, 0.5).is_err());
        assert!(kesten_mckay(0.5, 1.0).is_err());
        let outside = kesten_mckay(0.6, 0.5).unwrap();
        assert!(!outside.clean_regime);
        // the normalising constant still gives mass one, but C no longer equals 1/s
        assert!((outside.mass() - 1.0).abs() < 1e-8);
        assert!((outside.c - 1.0 / 0.6).abs() > 0.5);
        assert!((k.c - 1.0 / 0.3).abs() < 1e-9);
    }

    #[test]
    fn small_spectral_run() {
        let cmp = spectral_compare(Group::Unitary, 60, 0.3, 0.5, 20, 5).unwrap();
        assert_eq!((cmp.p, cmp.q), (18, 30));
        assert!(cmp.min_eigenvalue > -1e-10 && cmp.max_eigenvalue < 1.0 + 1e-10);
        assert!((cmp.histogram.frequencies.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(cmp.regime_warning.is_none());
        assert!(((cmp.mean_eigenvalue - 0.5) / cmp.mean_eigenvalue_se).abs() < 4.0);
        let again = spectral_compare(Group::Unitary, 60, 0.3, 0.5, 20, 5).unwrap();
        assert_eq!(cmp, again);
        let warn = spectral_compare(Group::Orthogonal, 20, 0.6, 0.5, 4, 1).unwrap();
        assert!(warn.regime_warning.is_some());
        // p - q = 2 of the p = 12 eigenvalues sit at zero
        assert!(warn.histogram.frequencies[0] >= 2.0 / 12.0);
    }

    #[test]
    fn spectrum_trace_is_t() {
        let seed = SeedSpec::new(3, 1);
        let eig = sample_spectrum(Group::Orthogonal, 12, 4, 7, seed).unwrap();
        let f = super::super::field::TraceField::from_matrix(&haar_orthogonal(12, seed).unwrap()).unwrap();
        assert!((eig.iter().sum::<f64>() - f.t(4, 7)).abs() < 1e-12);
    }
}
