use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, Normal};
use statrs::stats_tests::ks_test::{ks_onesample, KSOneSampleAlternativeMethod};
use statrs::stats_tests::NaNPolicy;

use crate::error::{Error, Result};

/// Minimum sample size for [`kstat_estimators`].
pub const MIN_KSTAT_SAMPLES: usize = 8;
/// Minimum replica count for [`covariance_mc`].
pub const MIN_COVARIANCE_REPLICAS: usize = 100;

/// Unbiased k-statistics with leave-one-out jackknife standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KStats {
    pub count: usize,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub se2: f64,
    pub se3: f64,
    pub se4: f64,
}

/// `(k2, k3, k4)` from power sums of `n` observations.
fn kstats_from_sums(n: f64, s: [f64; 4]) -> [f64; 3] {
    let [s1, s2, s3, s4] = s;
    let k2 = (n * s2 - s1 * s1) / (n * (n - 1.0));
    let k3 = (n * n * s3 - 3.0 * n * s2 * s1 + 2.0 * s1.powi(3)) / (n * (n - 1.0) * (n - 2.0));
    let k4 = ((n.powi(3) + n * n) * s4 - 4.0 * (n * n + n) * s3 * s1 - 3.0 * (n * n - n) * s2 * s2
        + 12.0 * n * s2 * s1 * s1
        - 6.0 * s1.powi(4))
        / (n * (n - 1.0) * (n - 2.0) * (n - 3.0));
    [k2, k3, k4]
}

fn power_sums(xs: &[f64]) -> [f64; 4] {
    xs.iter().fold([0.0; 4], |[a, b, c, d], &x| {
        let x2 = x * x;
        [a + x, b + x2, c + x2 * x, d + x2 * x2]
    })
}

/// Jackknife standard error from leave-one-out estimates.
pub fn jackknife_se(leave_one_out: &[f64]) -> f64 {
    let n = leave_one_out.len() as f64;
    let mean = leave_one_out.iter().sum::<f64>() / n;
    let ss: f64 = leave_one_out.iter().map(|v| (v - mean).powi(2)).sum();
    ((n - 1.0) / n * ss).sqrt()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample mean and its standard error `sd/√N`.
pub fn mean_se(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: xs.len(),
        });
    }
    let m = mean(xs);
    let n = xs.len() as f64;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((m, (var / n).sqrt()))
}

pub fn kstat_estimators(values: &[f64]) -> Result<KStats> {
    let count = values.len();
    if count < MIN_KSTAT_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_KSTAT_SAMPLES,
            got: count,
        });
    }
    // k-statistics are shift invariant; centring keeps the power sums small
    let m = mean(values);
    let centred: Vec<f64> = values.iter().map(|x| x - m).collect();
    let sums = power_sums(&centred);
    let n = count as f64;
    let [k2, k3, k4] = kstats_from_sums(n, sums);

    let mut loo = [
        Vec::with_capacity(count),
        Vec::with_capacity(count),
        Vec::with_capacity(count),
    ];
    for &x in &centred {
        let x2 = x * x;
        let reduced = [sums[0] - x, sums[1] - x2, sums[2] - x2 * x, sums[3] - x2 * x2];
        for (dst, v) in loo.iter_mut().zip(kstats_from_sums(n - 1.0, reduced)) {
            dst.push(v);
        }
    }
    Ok(KStats {
        count,
        k2,
        k3,
        k4,
        se2: jackknife_se(&loo[0]),
        se3: jackknife_se(&loo[1]),
        se4: jackknife_se(&loo[2]),
    })
}

/// Sample covariances between the columns of `rows` (one row per replica),
/// with jackknife standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEstimate {
    pub replicas: usize,
    pub estimate: Vec<Vec<f64>>,
    pub se: Vec<Vec<f64>>,
}

pub fn covariance_mc(rows: &[Vec<f64>]) -> Result<CovarianceEstimate> {
    let replicas = rows.len();
    if replicas < MIN_COVARIANCE_REPLICAS {
        return Err(Error::InsufficientSamples {
            needed: MIN_COVARIANCE_REPLICAS,
            got: replicas,
        });
    }
    let dim = rows[0].len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Dimension("replica rows differ in length".into()));
    }
    let n = replicas as f64;
    let means: Vec<f64> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect();
    let centred: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&means).map(|(x, m)| x - m).collect())
        .collect();

    let mut estimate = vec![vec![0.0; dim]; dim];
    let mut se = vec![vec![0.0; dim]; dim];
    let mut loo = vec![0.0; replicas];
    for a in 0..dim {
        for b in a..dim {
            let (mut sa, mut sb, mut sab) = (0.0, 0.0, 0.0);
            for r in &centred {
                sa += r[a];
                sb += r[b];
                sab += r[a] * r[b];
            }
            let cov = (sab - sa * sb / n) / (n - 1.0);
            for (slot, r) in loo.iter_mut().zip(&centred) {
                let (ra, rb) = (sa - r[a], sb - r[b]);
                *slot = (sab - r[a] * r[b] - ra * rb / (n - 1.0)) / (n - 2.0);
            }
            let e = jackknife_se(&loo);
            estimate[a][b] = cov;
            estimate[b][a] = cov;
            se[a][b] = e;
            se[b][a] = e;
        }
    }
    Ok(CovarianceEstimate {
        replicas,
        estimate,
        se,
    })
}

/// One-sample Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

impl KsOutcome {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value >= level
    }
}

fn ks_against<D: ContinuousCDF<f64, f64>>(sample: &[f64], dist: &D) -> Result<KsOutcome> {
    let (statistic, p_value) = ks_onesample(
        sample.to_vec(),
        dist,
        KSOneSampleAlternativeMethod::TwoSidedAsymptotic,
        NaNPolicy::Error,
    )
    .map_err(|e| Error::Argument(format!("KS test: {e:?}")))?;
    Ok(KsOutcome { statistic, p_value })
}

pub fn ks_standard_normal(sample: &[f64]) -> Result<KsOutcome> {
    ks_against(sample, &Normal::standard())
}

/// KS test against `Beta(1, n-1)`, the law of `|U_11|²` for Haar unitary `U`.
pub fn ks_beta_one(sample: &[f64], n: usize) -> Result<KsOutcome> {
    if n < 2 {
        return Err(Error::Argument(format!("Beta(1, n-1) needs n >= 2, got {n}")));
    }
    let dist = Beta::new(1.0, (n - 1) as f64).map_err(|e| Error::Argument(e.to_string()))?;
    ks_against(sample, &dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp1, StandardNormal};

    fn within(est: f64, se: f64, target: f64, k: f64) -> bool {
        (est - target).abs() <= k * se
    }

    #[test]
    fn constant_sample_is_degenerate() {
        let k = kstat_estimators(&[3.5; 20]).unwrap();
        assert_eq!((k.k2, k.k3, k.k4), (0.0, 0.0, 0.0));
        assert!(kstat_estimators(&[1.0; 7]).is_err());
    }

    #[test]
    fn small_sample_matches_direct_formulas() {
        let xs = [1.0, 2.0, 4.0, 7.0, 11.0, 16.0, 22.0, 29.0];
        let k = kstat_estimators(&xs).unwrap();
        let n = xs.len() as f64;
        let m = mean(&xs);
        let mm = |r: i32| xs.iter().map(|x| (x - m).powi(r)).sum::<f64>() / n;
        let (m2, m3, m4) = (mm(2), mm(3), mm(4));
        // k-statistics written via central moments
        let k2 = n * m2 / (n - 1.0);
        let k3 = n * n * m3 / ((n - 1.0) * (n - 2.0));
        let k4 = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2)
            / ((n - 1.0) * (n - 2.0) * (n - 3.0));
        assert!((k.k2 - k2).abs() < 1e-9 * k2.abs());
        assert!((k.k3 - k3).abs() < 1e-9 * k3.abs());
        assert!((k.k4 - k4).abs() < 1e-9 * k4.abs());
        assert!(k.se2 > 0.0 && k.se3 > 0.0 && k.se4 > 0.0);
    }

    #[test]
    fn gaussian_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..100_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let k = kstat_estimators(&xs).unwrap();
        assert!(within(k.k2, k.se2, 1.0, 4.0));
        assert!(within(k.k3, k.se3, 0.0, 4.0));
        assert!(within(k.k4, k.se4, 0.0, 4.0));
        assert!(ks_standard_normal(&xs).unwrap().passes(0.01));
    }

    #[test]
    fn exponential_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let xs: Vec<f64> = (0..100_000).map(|_| Exp1.sample(&mut rng)).collect();
        let k = kstat_estimators(&xs).unwrap();
        // κ_r = (r-1)! for the unit exponential
        assert!(within(k.k2, k.se2, 1.0, 4.0), "{k:?}");
        assert!(within(k.k3, k.se3, 2.0, 4.0), "{k:?}");
        assert!(within(k.k4, k.se4, 6.0, 4.0), "{k:?}");
        assert!(!ks_standard_normal(&xs).unwrap().passes(0.01));
    }

    #[test]
    fn jackknife_se_of_the_mean_is_classical() {
        // for the mean the jackknife reproduces sd/√N exactly
        let xs: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64).collect();
        let total: f64 = xs.iter().sum();
        let n = xs.len() as f64;
        let loo: Vec<f64> = xs.iter().map(|x| (total - x) / (n - 1.0)).collect();
        let (_, se) = mean_se(&xs).unwrap();
        assert!((jackknife_se(&loo) - se).abs() < 1e-12);
    }

    #[test]
    fn covariance_of_correlated_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rows: Vec<Vec<f64>> = (0..20_000)
            .map(|_| {
                let a: f64 = StandardNormal.sample(&mut rng);
                let b: f64 = StandardNormal.sample(&mut rng);
                vec![a, 0.5 * a + b, 0.0]
            })
            .collect();
        let c = covariance_mc(&rows).unwrap();
        assert!(within(c.estimate[0][0], c.se[0][0], 1.0, 4.0));
        assert!(within(c.estimate[0][1], c.se[0][1], 0.5, 4.0));
        assert!(within(c.estimate[1][1], c.se[1][1], 1.25, 4.0));
        assert_eq!((c.estimate[2][2], c.se[2][2]), (0.0, 0.0));
        assert_eq!(c.estimate[0][1], c.estimate[1][0]);
        assert!(covariance_mc(&rows[..99]).is_err());
    }

    #[test]
    fn covariance_jackknife_matches_brute_force() {
        let rows: Vec<Vec<f64>> = (0..120)
            .map(|i| vec![((i * 7) % 13) as f64, ((i * i) % 17) as f64])
            .collect();
        let c = covariance_mc(&rows).unwrap();
        let cov = |rs: &[&Vec<f64>]| {
            let n = rs.len() as f64;
            let ma = rs.iter().map(|r| r[0]).sum::<f64>() / n;
            let mb = rs.iter().map(|r| r[1]).sum::<f64>() / n;
            rs.iter().map(|r| (r[0] - ma) * (r[1] - mb)).sum::<f64>() / (n - 1.0)
        };
        let all: Vec<&Vec<f64>> = rows.iter().collect();
        assert!((cov(&all) - c.estimate[0][1]).abs() < 1e-10);
        let loo: Vec<f64> = (0..rows.len())
            .map(|i| {
                let sub: Vec<&Vec<f64>> = rows.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r).collect();
                cov(&sub)
            })
            .collect();
        assert!((jackknife_se(&loo) - c.se[0][1]).abs() < 1e-9);
    }

    #[test]
    fn ks_beta_detects_wrong_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let beta = rand_distr::Beta::new(1.0, 7.0).unwrap();
        let xs: Vec<f64> = (0..20_000).map(|_| beta.sample(&mut rng)).collect();
        assert!(ks_beta_one(&xs, 8).unwrap().passes(0.01));
        assert!(!ks_beta_one(&xs, 9).unwrap().passes(0.01));
        assert!(ks_beta_one(&xs, 1).is_err());
    }
}
