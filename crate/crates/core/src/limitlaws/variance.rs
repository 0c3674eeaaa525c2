//! The variance formula `σ² = ∫ (β(g,x) − ψ(x) + ψ(gx) − λ)² dμ(g) dν(x)`
//! and the cohomological checks built on the same ingredients.

use rayon::prelude::*;
use serde::Serialize;

use super::boundary::BoundarySampleSet;
use super::cocycle::busemann_cocycle;
use super::psi::PsiEstimator;
use crate::error::Result;
use crate::geometry::BoundaryProxy;
use crate::stats::Estimate;
use crate::walker::WalkConfig;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VarianceEstimate {
    pub sigma2: f64,
    pub std_error: f64,
    pub count: usize,
    /// `σ̂² ≤ 3·SE`: no evidence of a non-degenerate limit.
    pub degenerate: bool,
}

/// Weighted mean and standard error of per-point values.
fn weighted_estimate(vals: &[f64], weights: &[f64]) -> Estimate {
    let total: f64 = weights.iter().sum();
    let mean = vals.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total;
    let var = vals
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - mean) * (v - mean))
        .sum::<f64>()
        / total;
    let n_eff = total * total / weights.iter().map(|w| w * w).sum::<f64>();
    let var = if n_eff > 1.0 { var * n_eff / (n_eff - 1.0) } else { 0.0 };
    Estimate {
        value: mean,
        std_error: (var / n_eff).sqrt(),
        count: vals.len(),
    }
}

/// `E_g[(β(g,x) − ψ̂(x) + ψ̂(gx) − λ)²]`, exact over the finite support.
fn centred_square(cfg: &WalkConfig, psi: &PsiEstimator, x: &BoundaryProxy, lambda: f64) -> Result<f64> {
    let px = psi.estimate(x)?.value;
    let mut acc = 0.0;
    for (g, mu) in cfg.support.iter().zip(&cfg.weights) {
        let gx = g.act_boundary(x)?;
        let b0 = busemann_cocycle(&cfg.space, g, x) - px + psi.estimate(&gx)?.value;
        acc += mu * (b0 - lambda) * (b0 - lambda);
    }
    Ok(acc)
}

/// `σ̂²` by Monte Carlo over `x ~ ν̂`, with the `g`-integral done exactly.
pub fn variance_estimate(
    cfg: &WalkConfig,
    nu: &BoundarySampleSet,
    psi: &PsiEstimator,
    lambda: f64,
) -> Result<VarianceEstimate> {
    let vals: Vec<f64> = nu
        .points
        .par_iter()
        .map(|x| centred_square(cfg, psi, x, lambda))
        .collect::<Result<_>>()?;
    let est = weighted_estimate(&vals, &nu.weights);
    Ok(VarianceEstimate {
        sigma2: est.value.max(0.0),
        std_error: est.std_error,
        count: est.count,
        degenerate: !(est.value > 3.0 * est.std_error),
    })
}

/// `∫ β(g, x) dμ(g) dν̂(x)`, which should reproduce the drift.
pub fn mean_cocycle(cfg: &WalkConfig, nu: &BoundarySampleSet) -> Estimate {
    let vals: Vec<f64> = nu
        .points
        .par_iter()
        .map(|x| {
            cfg.support
                .iter()
                .zip(&cfg.weights)
                .map(|(g, mu)| mu * busemann_cocycle(&cfg.space, g, x))
                .sum()
        })
        .collect();
    weighted_estimate(&vals, &nu.weights)
}

/// `Σ_g μ(g) (β(g,x) + ψ̂(gx) − ψ̂(x))` at one point, with an error bar from
/// the `ψ̂` standard errors.
pub fn cohomological_mean(cfg: &WalkConfig, psi: &PsiEstimator, x: &BoundaryProxy) -> Result<Estimate> {
    let px = psi.estimate(x)?;
    let mut value = -px.value;
    let mut var = px.std_error * px.std_error;
    for (g, mu) in cfg.support.iter().zip(&cfg.weights) {
        let pgx = psi.estimate(&g.act_boundary(x)?)?;
        value += mu * (busemann_cocycle(&cfg.space, g, x) + pgx.value);
        var += mu * mu * pgx.std_error * pgx.std_error;
    }
    Ok(Estimate {
        value,
        std_error: var.sqrt(),
        count: psi.samples().len(),
    })
}
