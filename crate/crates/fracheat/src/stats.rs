//! Statistics used by the validation suites: moment estimators for centered
//! samples, a two-sample Kolmogorov-Smirnov test, Jarque-Bera normality, and
//! empirical quantiles.

/// Mean of a sample.
pub fn mean(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty());
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Second moment about zero. For samples that are centered by construction
/// (Gaussian paths started at the origin) this is the variance estimator
/// with known mean, whose standard error is `var * sqrt(2/n)`.
pub fn second_moment(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty());
    xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64
}

/// Cross moment `E[XY]` about zero; covariance estimator when both samples
/// are centered by construction.
pub fn cross_moment(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / xs.len() as f64
}

/// Standard error of the zero-mean covariance estimator for a bivariate
/// Gaussian with variances `vx`, `vy` and covariance `c`:
/// `sqrt((vx*vy + c^2)/n)`.
pub fn cov_standard_error(vx: f64, vy: f64, c: f64, n: usize) -> f64 {
    ((vx * vy + c * c) / n as f64).sqrt()
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // Consume every element tied at the current value from both sides
        // before comparing the empirical CDFs.
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic two-sample KS rejection threshold at level `alpha`:
/// `c(alpha) * sqrt((n+m)/(n*m))` with `c(alpha) = sqrt(ln(2/alpha)/2)`.
pub fn ks_threshold(n: usize, m: usize, alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0);
    let c = ((2.0 / alpha).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Jarque-Bera statistic; asymptotically chi-square with 2 degrees of
/// freedom under normality.
pub fn jarque_bera(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mu = mean(xs);
    let m2 = xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mu).powi(3)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mu).powi(4)).sum::<f64>() / n;
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    n * (skew * skew / 6.0 + (kurt - 3.0).powi(2) / 24.0)
}

/// Chi-square(2) quantile at 1 - alpha, the Jarque-Bera critical value:
/// `-2 ln(alpha)`.
pub fn jarque_bera_critical(alpha: f64) -> f64 {
    -2.0 * alpha.ln()
}

/// Empirical quantile by linear interpolation of the sorted sample.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    assert!((0.0..=1.0).contains(&q));
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{derive_rng, DOMAIN_FIELD};
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn ks_identical_samples_zero() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_statistic(&xs, &xs), 0.0);
    }

    #[test]
    fn ks_detects_shift() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 0.5).collect();
        assert!(ks_statistic(&a, &b) > 0.45);
    }

    #[test]
    fn jarque_bera_accepts_gaussian() {
        let mut rng = derive_rng(7, DOMAIN_FIELD, 0, 0);
        let xs: Vec<f64> = (0..10_000)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        assert!(jarque_bera(&xs) < jarque_bera_critical(0.001));
    }

    #[test]
    fn jarque_bera_rejects_uniform() {
        let mut rng = derive_rng(8, DOMAIN_FIELD, 0, 0);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        assert!(jarque_bera(&xs) > jarque_bera_critical(0.001));
    }

    #[test]
    fn quantile_interpolates() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(quantile(&xs, 0.0), 0.0);
        assert_eq!(quantile(&xs, 1.0), 3.0);
        assert!((quantile(&xs, 0.5) - 1.5).abs() < 1e-15);
    }
}
