//! Centred displacements `S_n` and their normality report.

use rayon::prelude::*;
use serde::Serialize;

use super::boundary::{default_depth, sample_boundary, BoundarySampleSet, Direction};
use super::drift::{drift_estimate, DriftReport};
use super::psi::{psi_summary, PsiEstimator, PsiSummary};
use super::variance::{variance_estimate, VarianceEstimate};
use crate::error::{Error, Result};
use crate::geometry::SpaceKind;
use crate::harness::defaults::{
    KS_MIN_TRIALS, PSI_SAMPLES, PSI_SAMPLES_CLOSED_FORM, VARIANCE_SAMPLES,
    VARIANCE_SAMPLES_CLOSED_FORM,
};
use crate::rng::Domain;
use crate::stats::{self, KsResult};
use crate::walker::{Walk, WalkConfig};

/// One CLT sample.
#[derive(Clone, Debug, Serialize)]
pub struct SnRow {
    pub trial: u64,
    pub n: usize,
    pub displacement: f64,
    #[serde(rename = "S_n")]
    pub s_n: f64,
}

/// `S_n = (d(Z_n o, o) − n λ̂)/√n` over the CLT batch (independent of the
/// drift batch that produced `λ̂`).
pub fn sn_rows(cfg: &WalkConfig, seed: u64, n: usize, trials: usize, lambda: f64) -> Vec<SnRow> {
    let root = (n as f64).sqrt();
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut w = Walk::new(cfg, seed, Domain::CltBatch, t, false);
            w.advance(n);
            let d = w.displacement();
            SnRow {
                trial: t,
                n,
                displacement: d,
                s_n: (d - n as f64 * lambda) / root,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitLawReport {
    pub n: usize,
    pub trials: usize,
    pub drift: DriftReport,
    pub sn: Vec<f64>,
    pub empirical_variance: f64,
    pub sigma2: Option<VarianceEstimate>,
    pub psi: Option<PsiSummary>,
    /// KS against `N(0, σ̂²)`.
    pub ks_formula: Option<KsResult>,
    /// KS against `N(0, empirical variance)`.
    pub ks_empirical: KsResult,
    pub anderson_darling: Option<f64>,
    /// `σ̂² > 3·SE(σ̂²)` (or, without `σ̂²`, a positive empirical variance).
    pub non_degenerate: bool,
    /// Why the boundary-based estimates were skipped, if they were.
    pub boundary_note: Option<String>,
}

/// Normality report for `S_n`, given the drift and, when available, the
/// formula variance.
pub fn clt_report(
    cfg: &WalkConfig,
    seed: u64,
    n: usize,
    trials: usize,
    drift: DriftReport,
    sigma2: Option<VarianceEstimate>,
) -> Result<LimitLawReport> {
    if trials < KS_MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "the KS test needs at least {KS_MIN_TRIALS} trials, got {trials}"
        )));
    }
    let sn: Vec<f64> = sn_rows(cfg, seed, n, trials, drift.lambda)
        .into_iter()
        .map(|r| r.s_n)
        .collect();
    let empirical_variance = stats::variance(&sn);
    let ks_empirical = stats::ks_normal(&sn, 0.0, empirical_variance);
    let ks_formula = sigma2.map(|v| stats::ks_normal(&sn, 0.0, v.sigma2));
    let anderson_darling =
        (empirical_variance > 0.0).then(|| stats::anderson_darling(&sn, 0.0, empirical_variance));
    let non_degenerate = match &sigma2 {
        Some(v) => !v.degenerate,
        None => empirical_variance > 0.0,
    };
    Ok(LimitLawReport {
        n,
        trials,
        drift,
        sn,
        empirical_variance,
        sigma2,
        psi: None,
        ks_formula,
        ks_empirical,
        anderson_darling,
        non_degenerate,
        boundary_note: None,
    })
}

/// Sample sizes for the boundary-based estimates.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LimitLawBudget {
    pub boundary_depth: usize,
    pub psi_samples: usize,
    pub variance_samples: usize,
    pub psi_points: usize,
}

impl LimitLawBudget {
    /// Trees have a sorted-prefix `ψ` evaluator; elsewhere each `ψ̂(x)` is a
    /// full pass over `ν̌`, so the samples are smaller.
    pub fn for_space(kind: SpaceKind) -> Self {
        let tree = matches!(kind, SpaceKind::RegularTree { .. });
        LimitLawBudget {
            boundary_depth: default_depth(kind),
            psi_samples: if tree { PSI_SAMPLES } else { PSI_SAMPLES_CLOSED_FORM },
            variance_samples: if tree { VARIANCE_SAMPLES } else { VARIANCE_SAMPLES_CLOSED_FORM },
            psi_points: 20,
        }
    }
}

/// Boundary proxies and the `ψ`/`σ̂²` estimates built on them.
pub struct BoundaryEstimates {
    pub nu: BoundarySampleSet,
    pub psi: PsiEstimator,
    pub psi_summary: PsiSummary,
    pub sigma2: VarianceEstimate,
}

pub fn boundary_estimates(
    cfg: &WalkConfig,
    seed: u64,
    lambda: f64,
    budget: &LimitLawBudget,
) -> Result<BoundaryEstimates> {
    let nu = sample_boundary(cfg, seed, Direction::Forward, budget.boundary_depth, budget.variance_samples)?;
    let check = sample_boundary(cfg, seed, Direction::Reversed, budget.boundary_depth, budget.psi_samples)?;
    let psi = PsiEstimator::new(&cfg.space, check)?;
    let probes: Vec<_> = nu.points.iter().take(budget.psi_points).cloned().collect();
    let psi_summary = psi_summary(&psi, &probes)?;
    let sigma2 = variance_estimate(cfg, &nu, &psi, lambda)?;
    Ok(BoundaryEstimates {
        nu,
        psi,
        psi_summary,
        sigma2,
    })
}

/// Drift, boundary estimates and the CLT report in one pass. When the walk
/// has no clear drift the boundary part is skipped and the reason recorded.
pub fn limit_law_report(
    cfg: &WalkConfig,
    seed: u64,
    n: usize,
    trials: usize,
    budget: &LimitLawBudget,
) -> Result<LimitLawReport> {
    if trials < KS_MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "the KS test needs at least {KS_MIN_TRIALS} trials, got {trials}"
        )));
    }
    let drift = drift_estimate(cfg, seed, n, trials)?;
    let lambda = drift.lambda;
    let (sigma2, psi, note) = match boundary_estimates(cfg, seed, lambda, budget) {
        Ok(b) => (Some(b.sigma2), Some(b.psi_summary), None),
        Err(e @ Error::ZeroDrift(_)) => (None, None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let mut report = clt_report(cfg, seed, n, trials, drift, sigma2)?;
    report.psi = psi;
    report.boundary_note = note;
    Ok(report)
}
