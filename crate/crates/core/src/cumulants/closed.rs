use num_rational::BigRational;

use super::{trace_cumulant, CumulantRequest, ProjectorFamily};
use crate::error::{Error, Result};
use crate::Group;

fn check_dims(dims: &[usize], n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Argument(format!("closed forms need n >= 2, got {n}")));
    }
    if let Some(&d) = dims.iter().find(|&&d| d == 0 || d > n) {
        return Err(Error::Dimension(format!("dimension {d} outside 1..={n}")));
    }
    Ok(())
}

fn frac(num: i128, den: i128) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `Var T_{p,q} = pq (n² - n(p+q) + pq) / (n²(n²-1))` for Haar unitary `U`.
pub fn variance_closed(p: usize, q: usize, n: usize) -> Result<BigRational> {
    check_dims(&[p, q], n)?;
    let (p, q, n) = (p as i128, q as i128, n as i128);
    Ok(frac(p * q * (n * n - n * (p + q) + p * q), n * n * (n * n - 1)))
}

/// `Cov(T_{p,q}, T_{p',q'})` for Haar unitary `U`.
pub fn covariance_closed(p: usize, q: usize, p2: usize, q2: usize, n: usize) -> Result<BigRational> {
    check_dims(&[p, q, p2, q2], n)?;
    let pm = p.min(p2) as i128;
    let qm = q.min(q2) as i128;
    let (p, q, p2, q2, n) = (p as i128, q as i128, p2 as i128, q2 as i128, n as i128);
    let d = n * n - 1;
    Ok(frac(pm * qm, d) - frac(pm * q * q2, n * d) - frac(p * p2 * qm, n * d)
        + frac(p * p2 * q * q2, n * n * d))
}

/// `Var T_{p,q} = 2pq (n² - n(p+q) + pq) / (n²(n+2)(n-1))` for Haar orthogonal `O`.
pub fn variance_closed_orthogonal(p: usize, q: usize, n: usize) -> Result<BigRational> {
    check_dims(&[p, q], n)?;
    let (p, q, n) = (p as i128, q as i128, n as i128);
    Ok(frac(2 * p * q * (n * n - n * (p + q) + p * q), n * n * (n + 2) * (n - 1)))
}

/// Covariance of the limiting bridge, `(2/β)(s∧s' - ss')(t∧t' - tt')`.
pub fn limit_covariance(s: f64, t: f64, s2: f64, t2: f64, group: Group) -> f64 {
    2.0 / group.beta() as f64 * (s.min(s2) - s * s2) * (t.min(t2) - t * t2)
}

/// `E(T_{p,q} - E T_{p,q})⁴ = κ₄ + 3κ₂²`, exact.
///
/// Needs the fourth cumulant, so only the unitary group is supported.
pub fn fourth_central_moment(p: usize, q: usize, n: usize, group: Group) -> Result<BigRational> {
    let kappa = |r: usize| {
        trace_cumulant(&CumulantRequest::new(group, ProjectorFamily::uniform(n, r, p, q)?))
    };
    let k4 = kappa(4)?;
    let k2 = kappa(2)?;
    Ok(k4 + frac(3, 1) * &k2 * &k2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulants::GridCheck;
    use num_traits::{Signed, ToPrimitive, Zero};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn kappa(group: Group, n: usize, dims: &[(usize, usize)]) -> BigRational {
        trace_cumulant(&CumulantRequest::new(group, ProjectorFamily::new(n, dims.to_vec()).unwrap())).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(variance_closed(1, 1, 2).unwrap(), r(1, 12));
        for n in 2..8 {
            for (p2, q2) in [(1, 1), (n, 1), (2.min(n), n)] {
                assert!(covariance_closed(n, n, p2, q2, n).unwrap().is_zero());
            }
            let ni = n as i64;
            assert_eq!(
                variance_closed_orthogonal(1, 1, n).unwrap(),
                r(2 * (ni - 1), ni * ni * (ni + 2))
            );
        }
        assert!(variance_closed(0, 1, 3).is_err());
        assert!(variance_closed(4, 1, 3).is_err());
        assert!(covariance_closed(1, 1, 1, 1, 1).is_err());
    }

    #[test]
    fn symmetries() {
        for n in 2..=7 {
            for p in 1..=n {
                for q in 1..=n {
                    assert_eq!(variance_closed(p, q, n).unwrap(), variance_closed(q, p, n).unwrap());
                    assert_eq!(variance_closed(p, q, n).unwrap(), covariance_closed(p, q, p, q, n).unwrap());
                    for p2 in 1..=n {
                        for q2 in 1..=n {
                            assert_eq!(
                                covariance_closed(p, q, p2, q2, n).unwrap(),
                                covariance_closed(p2, q2, p, q, n).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn second_cumulant_matches_closed_forms() {
        for n in 2..=6 {
            for p in 1..=n {
                for q in 1..=n {
                    assert_eq!(kappa(Group::Orthogonal, n, &[(p, q), (p, q)]), variance_closed_orthogonal(p, q, n).unwrap());
                    for p2 in 1..=n {
                        for q2 in 1..=n {
                            assert_eq!(
                                kappa(Group::Unitary, n, &[(p, q), (p2, q2)]),
                                covariance_closed(p, q, p2, q2, n).unwrap(),
                                "n={n} ({p},{q}) ({p2},{q2})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn limit_examples() {
        assert!((limit_covariance(0.5, 0.5, 0.5, 0.5, Group::Unitary) - 1.0 / 16.0).abs() < 1e-15);
        assert!((limit_covariance(0.5, 0.5, 0.5, 0.5, Group::Orthogonal) - 1.0 / 8.0).abs() < 1e-15);
        for x in [0.1, 0.5, 0.9] {
            assert_eq!(limit_covariance(0.0, x, 0.3, 0.6, Group::Unitary), 0.0);
            assert_eq!(limit_covariance(x, 1.0, 0.3, 0.6, Group::Orthogonal), 0.0);
        }
    }

    /// Central fourth moment of Beta(1, n-1), the law of |U_11|².
    fn beta_central_fourth(n: i64) -> BigRational {
        let raw = |k: i64| (0..k).map(|i| r(1 + i, n + i)).product::<BigRational>();
        let mu = raw(1);
        raw(4) - r(4, 1) * &mu * raw(3) + r(6, 1) * &mu * &mu * raw(2) - r(3, 1) * mu.pow(4)
    }

    #[test]
    fn fourth_central_moment_examples() {
        assert_eq!(beta_central_fourth(2), r(1, 80));
        // the order-4 Gram matrix is singular below n = 4
        assert!(matches!(
            fourth_central_moment(1, 1, 2, Group::Unitary),
            Err(Error::SingularGram { n: 2, k: 4 })
        ));
        for n in 4..=9 {
            assert!(fourth_central_moment(n, n, n, Group::Unitary).unwrap().is_zero());
            assert_eq!(
                fourth_central_moment(1, 1, n, Group::Unitary).unwrap(),
                beta_central_fourth(n as i64)
            );
        }
        assert!(matches!(
            fourth_central_moment(1, 1, 8, Group::Orthogonal),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn third_cumulant_vanishes_at_half_columns() {
        // T_{p,n-q} = p - T_{p,q} and T_{p,n-q} has the law of T_{p,q} when q = n/2
        for group in [Group::Unitary, Group::Orthogonal] {
            for n in [6usize, 8, 10] {
                for p in 1..=n {
                    assert!(kappa(group, n, &[(p, n / 2); 3]).is_zero());
                }
            }
            assert!(!kappa(group, 7, &[(3, 3); 3]).is_zero());
        }
    }

    #[test]
    fn third_cumulant_decays() {
        let k3 = |group, n: usize| kappa(group, n, &[(n / 4, n / 4); 3]).abs();
        let u: Vec<_> = [8, 16, 32].iter().map(|&n| k3(Group::Unitary, n)).collect();
        assert!(u[0] > u[1] && u[1] > u[2], "{u:?}");
        let o: Vec<_> = [8, 16, 24].iter().map(|&n| k3(Group::Orthogonal, n)).collect();
        assert!(o[0] > o[1] && o[1] > o[2], "{o:?}");
    }

    #[test]
    fn fourth_cumulant_scaled_is_bounded() {
        let mut worst: f64 = 0.0;
        for n in [6usize, 8] {
            for p in 1..=n {
                for q in 1..=n {
                    let k4 = kappa(Group::Unitary, n, &[(p, q); 4]);
                    let scaled = k4.abs() * r((n as i64).pow(4), ((p * p * q * q) as i64).max(1));
                    worst = worst.max(scaled.to_f64().unwrap());
                }
            }
        }
        assert!(worst.is_finite() && worst < 100.0, "{worst}");
    }

    #[test]
    fn moderate_grid_oracle_equivalence() {
        let report = GridCheck::new(Group::Unitary, 5, 3).unwrap().run(1).unwrap();
        assert_eq!(report.mismatches, 0);
        let report = GridCheck::new(Group::Orthogonal, 5, 3).unwrap().run(1).unwrap();
        assert_eq!(report.mismatches, 0);
        let report = GridCheck::new(Group::Unitary, 4, 4).unwrap().run(7).unwrap();
        assert_eq!(report.mismatches, 0);
    }
}
