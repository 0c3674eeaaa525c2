//! Summary statistics and the Kolmogorov–Smirnov normality test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Standard error of the sample mean.
pub fn std_error(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Mean and standard error in one pass over the data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub count: usize,
}

impl Estimate {
    pub fn of(xs: &[f64]) -> Estimate {
        Estimate {
            value: mean(xs),
            std_error: std_error(xs),
            count: xs.len(),
        }
    }

    /// 95% normal confidence interval.
    pub fn ci95(&self) -> (f64, f64) {
        (
            self.value - 1.96 * self.std_error,
            self.value + 1.96 * self.std_error,
        )
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in v.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic Kolmogorov tail `P(D > d)` with the Stephens small-sample
/// correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    kolmogorov_tail(lambda)
}

/// `Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2 k² λ²)`.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Result of a KS test against a centred normal law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub variance: f64,
    pub statistic: f64,
    pub p_value: f64,
}

pub fn ks_normal(xs: &[f64], mean: f64, variance: f64) -> KsResult {
    if !(variance > 0.0) {
        return KsResult {
            variance,
            statistic: 1.0,
            p_value: 0.0,
        };
    }
    let law = Normal::new(mean, variance.sqrt()).expect("positive variance");
    let statistic = ks_statistic(xs, |x| law.cdf(x));
    KsResult {
        variance,
        statistic,
        p_value: ks_p_value(statistic, xs.len()),
    }
}

/// Anderson–Darling statistic `A²` against a normal law.
pub fn anderson_darling(xs: &[f64], mean: f64, variance: f64) -> f64 {
    let law = Normal::new(mean, variance.sqrt()).expect("positive variance");
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let nf = n as f64;
    let eps = 1e-300;
    let mut s = 0.0;
    for i in 0..n {
        let fi = law.cdf(v[i]).max(eps);
        let fr = (1.0 - law.cdf(v[n - 1 - i])).max(eps);
        s += (2.0 * i as f64 + 1.0) * (fi.ln() + fr.ln());
    }
    -nf - s / nf
}
