//! Drift `λ = lim d(Z_n o, o)/n` and the positive-drift gate.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::harness::defaults::{DRIFT_CHECK_N, DRIFT_CHECK_TRIALS, DRIFT_REFUSAL_SE, DRIFT_STABILITY};
use crate::rng::Domain;
use crate::stats::{self, Estimate};
use crate::walker::{Walk, WalkConfig};

/// Empirical `P(d(Z_k o, o) ≤ r k)` at `r = ratio · λ̂`.
#[derive(Clone, Debug, Serialize)]
pub struct TailPoint {
    pub n: usize,
    pub probability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TailReport {
    pub ratio: f64,
    pub points: Vec<TailPoint>,
    /// `κ` in `P ≈ C e^{-κ n}`, fitted on the grid points with positive
    /// probability; absent when fewer than two such points exist.
    pub rate: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DriftReport {
    pub lambda: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
    pub n: usize,
    pub trials: usize,
    pub tail: TailReport,
}

/// `10, 20, 40, … < n` followed by `n`.
pub fn tail_grid(n: usize) -> Vec<usize> {
    let mut g = Vec::new();
    let mut k = 10;
    while k < n {
        g.push(k);
        k *= 2;
    }
    g.push(n);
    g
}

/// Displacements at each grid point, per trial.
fn grid_displacements(cfg: &WalkConfig, seed: u64, domain: Domain, grid: &[usize], trials: usize) -> Vec<Vec<f64>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut w = Walk::new(cfg, seed, domain, t, false);
            grid.iter()
                .map(|&k| {
                    w.advance(k - w.steps());
                    w.displacement()
                })
                .collect()
        })
        .collect()
}

/// `λ̂ = mean d(Z_n o, o)/n` over an independent batch of trials, with its
/// confidence interval and the lower-tail report at half the drift.
pub fn drift_estimate(cfg: &WalkConfig, seed: u64, n: usize, trials: usize) -> Result<DriftReport> {
    if n == 0 || trials < 2 {
        return domain(format!("drift needs n ≥ 1 and at least two trials (n={n}, trials={trials})"));
    }
    let grid = tail_grid(n);
    let rows = grid_displacements(cfg, seed, Domain::DriftBatch, &grid, trials);
    let last = grid.len() - 1;
    let rates: Vec<f64> = rows.iter().map(|r| r[last] / n as f64).collect();
    let est = Estimate::of(&rates);
    let ratio = 0.5;
    let points: Vec<TailPoint> = grid
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let thr = ratio * est.value * k as f64;
            let hits = rows.iter().filter(|r| r[i] <= thr).count();
            TailPoint {
                n: k,
                probability: hits as f64 / trials as f64,
            }
        })
        .collect();
    let positive: Vec<&TailPoint> = points.iter().filter(|p| p.probability > 0.0).collect();
    let rate = (positive.len() >= 2).then(|| {
        let xs: Vec<f64> = positive.iter().map(|p| p.n as f64).collect();
        let ys: Vec<f64> = positive.iter().map(|p| p.probability.ln()).collect();
        -stats::ls_slope(&xs, &ys)
    });
    Ok(DriftReport {
        lambda: est.value,
        std_error: est.std_error,
        ci95: est.ci95(),
        n,
        trials,
        tail: TailReport { ratio, points, rate },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DriftCheck {
    pub lambda: f64,
    pub std_error: f64,
    pub lambda_half: f64,
}

/// Refuses walks whose drift is not clearly positive: `λ̂ ≤ 3·SE`, or `λ̂`
/// moving by more than 25% between `n/2` and `n` (the `n^{-1/2}` decay of
/// a centred walk).
pub fn check_positive_drift(cfg: &WalkConfig, seed: u64) -> Result<DriftCheck> {
    let n = DRIFT_CHECK_N;
    let grid = [n / 2, n];
    let rows = grid_displacements(cfg, seed, Domain::DriftBatch, &grid, DRIFT_CHECK_TRIALS);
    let full: Vec<f64> = rows.iter().map(|r| r[1] / n as f64).collect();
    let half: Vec<f64> = rows.iter().map(|r| r[0] / (n / 2) as f64).collect();
    let est = Estimate::of(&full);
    let lambda_half = stats::mean(&half);
    let check = DriftCheck {
        lambda: est.value,
        std_error: est.std_error,
        lambda_half,
    };
    if !(est.value > DRIFT_REFUSAL_SE * est.std_error) || est.value <= 0.0 {
        return Err(Error::ZeroDrift(format!(
            "λ̂ = {:.4} is within {DRIFT_REFUSAL_SE} standard errors ({:.4}) of zero",
            est.value, est.std_error
        )));
    }
    if (lambda_half - est.value).abs() > DRIFT_STABILITY * est.value {
        return Err(Error::ZeroDrift(format!(
            "λ̂ moves from {lambda_half:.4} at n={} to {:.4} at n={n}, as for a centred walk",
            n / 2,
            est.value
        )));
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_ends_at_n() {
        assert_eq!(tail_grid(100), vec![10, 20, 40, 80, 100]);
        assert_eq!(tail_grid(5), vec![5]);
    }
}
