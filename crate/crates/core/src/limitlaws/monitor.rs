//! Busemann–displacement gap and the three geometric estimates along a
//! trajectory.

use rayon::prelude::*;
use serde::Serialize;

use super::boundary::{boundary_sample, default_depth, proxy_toward, Direction};
use super::cocycle::busemann_cocycle;
use crate::error::{Error, Result};
use crate::geometry::{BoundaryProxy, BOUNDARY_DEPTH};
use crate::rng::{self, hash_words, Domain};
use crate::stats;
use crate::walker::{Isometry, Walk, WalkConfig};

/// Which boundary point the gap is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapReference {
    /// `ξ⁺` of the same trajectory (the walk continued past `n`); the gap is
    /// `|b_{ξ⁺}(Z_k o) + d(Z_k o, o)|`, twice the distance from `Z_k o` to
    /// the ray `[o, ξ⁺)` up to the tree/hyperbolic constant.
    ForwardLimit,
    /// An independent `ν̌` sample `ξ`; the gap is `|b_ξ(Z_k o) − d(Z_k o, o)|
    /// = 2 (ξ | Z_k o)_o`.
    Independent,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapSeries {
    pub trial: u64,
    pub reference: GapReference,
    /// `gaps[k-1]` is the gap at step `k`.
    pub gaps: Vec<f64>,
    pub max: f64,
    /// Least-squares slope of the gap against `k`.
    pub slope: f64,
}

fn reference_point(cfg: &WalkConfig, seed: u64, trial: u64, n: usize, reference: GapReference) -> BoundaryProxy {
    let extra = default_depth(cfg.space.kind);
    match reference {
        GapReference::ForwardLimit => {
            let mut w = Walk::forward(cfg, seed, trial);
            w.advance(n + extra);
            proxy_toward(cfg, w.position(), false, hash_words(&[seed, trial, 0xf0f0]))
        }
        GapReference::Independent => boundary_sample(cfg, seed, Direction::Reversed, extra, trial),
    }
}

/// Gap series for trial `trial` up to step `n`.
pub fn displacement_busemann_gap(
    cfg: &WalkConfig,
    seed: u64,
    trial: u64,
    n: usize,
    reference: GapReference,
) -> GapSeries {
    let xi = reference_point(cfg, seed, trial, n, reference);
    let sign = match reference {
        GapReference::ForwardLimit => 1.0,
        GapReference::Independent => -1.0,
    };
    let mut w = Walk::forward(cfg, seed, trial);
    let gaps: Vec<f64> = match (&xi, cfg.space.basepoint.tree()) {
        // rooted tree: b_ξ(Z_k) = |Z_k| − 2 lcp(Z_k, ξ), lcp kept incrementally
        (BoundaryProxy::Tree(ray), Some(o)) if o.is_vertex() && o.vertex.is_empty() => {
            let deep = ray.deepened(n + 1);
            let xs = deep.prefix().letters();
            let mut lcp = 0usize;
            let mut prev_len = 0usize;
            (0..n)
                .map(|_| {
                    let i = w.step();
                    let word = w.position().word().expect("tree walk").letters();
                    let touched = cfg.support[i].word().map_or(0, |g| g.len());
                    lcp = lcp.min(prev_len.saturating_sub(touched)).min(word.len());
                    while lcp < word.len() && word[lcp] == xs[lcp] {
                        lcp += 1;
                    }
                    prev_len = word.len();
                    let d = word.len() as f64;
                    let b = d - 2.0 * lcp as f64;
                    (b + sign * d).abs()
                })
                .collect()
        }
        _ if reference == GapReference::ForwardLimit => {
            // Z_k⁻¹ ξ⁺ = ω_{k+1} ω_{k+2} ⋯ ζ is a well-conditioned boundary
            // point even when ξ⁺ itself sits within rounding of Z_k o, and
            // b_{ξ⁺}(Z_k o) = −β(Z_k, Z_k⁻¹ ξ⁺) by the cocycle identity.
            let m = n + default_depth(cfg.space.kind);
            let steps: Vec<usize> = (0..m).map(|_| w.step()).collect();
            let mut r = rng::stream(seed, Domain::RayTail, trial);
            let mut eta = cfg.space.random_boundary(&mut r);
            // the flat direction is invariant under the action, so it is
            // copied from ξ⁺ rather than iterated
            if let (BoundaryProxy::TreeLine { angle, .. }, BoundaryProxy::TreeLine { angle: a, .. }) =
                (&xi, &mut eta)
            {
                *a = *angle;
            }
            let mut pulled = vec![eta.clone(); n + 1];
            for k in (0..m).rev() {
                eta = cfg.support[steps[k]].act_boundary(&eta).expect("same space");
                if k <= n {
                    pulled[k] = eta.clone();
                }
            }
            let mut z = Walk::forward(cfg, seed, trial);
            (1..=n)
                .map(|k| {
                    z.step();
                    let g = z.position();
                    let b = -busemann_cocycle(&cfg.space, g, &pulled[k]);
                    (b + g.displacement(&cfg.space)).abs()
                })
                .collect()
        }
        _ => (0..n)
            .map(|_| {
                w.step();
                let z = w.position();
                let b = busemann_cocycle(&cfg.space, &z.inverse(), &xi);
                (b - z.displacement(&cfg.space)).abs()
            })
            .collect(),
    };
    let ks: Vec<f64> = (1..=n).map(|k| k as f64).collect();
    GapSeries {
        trial,
        reference,
        max: gaps.iter().copied().fold(0.0, f64::max),
        slope: if n >= 2 { stats::ls_slope(&ks, &gaps) } else { 0.0 },
        gaps,
    }
}

/// Truth values of the three estimates at one `n`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MonitorPoint {
    pub n: usize,
    /// `(Z_n x | Z_n o)_o ≥ (λ − ε) n`.
    pub escape: bool,
    /// `(y | Z_n o)_o ≤ ε n`.
    pub transverse: bool,
    /// `(y | Z_n x)_o ≤ ε n + 2L + 1`.
    pub boundary: bool,
}

impl MonitorPoint {
    pub fn holds(&self) -> bool {
        self.escape && self.transverse && self.boundary
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonitorSeries {
    pub points: Vec<MonitorPoint>,
    pub first_failure: Option<usize>,
}

impl MonitorSeries {
    /// Fraction of grid points with `n ≥ from` where all three hold.
    pub fn pass_rate(&self, from: usize) -> f64 {
        let tail: Vec<&MonitorPoint> = self.points.iter().filter(|p| p.n >= from).collect();
        if tail.is_empty() {
            return 1.0;
        }
        tail.iter().filter(|p| p.holds()).count() as f64 / tail.len() as f64
    }
}

fn check_epsilon(lambda: f64, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.5 * lambda) {
        return Err(Error::Precondition(format!(
            "ε must lie in (0, λ̂/2) = (0, {:.4}), got {epsilon}",
            0.5 * lambda
        )));
    }
    Ok(())
}

/// The three estimates along trial `trial` at `n = stride, 2·stride, …`.
/// Gromov products against the orbit point use the cocycle, so they stay
/// exact for long matrix products:
/// `(Z x | Z o)_o = ½(d + β(Z, x))`, `(y | Z o)_o = ½(d − β(Z⁻¹, y))`.
#[allow(clippy::too_many_arguments)]
pub fn geometric_estimates_monitor(
    cfg: &WalkConfig,
    seed: u64,
    trial: u64,
    x: &BoundaryProxy,
    y: &BoundaryProxy,
    lambda: f64,
    epsilon: f64,
    l: usize,
    n_max: usize,
    stride: usize,
) -> Result<MonitorSeries> {
    check_epsilon(lambda, epsilon)?;
    cfg.space.check_boundary(x)?;
    cfg.space.check_boundary(y)?;
    let stride = stride.max(1);
    let space = &cfg.space;
    let o = &space.basepoint;
    let mut w = Walk::forward(cfg, seed, trial);
    let mut points = Vec::new();
    let mut n = stride;
    while n <= n_max {
        w.advance(n - w.steps());
        let z: &Isometry = w.position();
        let d = z.displacement(space);
        let escape_gp = 0.5 * (d + busemann_cocycle(space, z, x));
        let transverse_gp = 0.5 * (d - busemann_cocycle(space, &z.inverse(), y));
        let zx = z.act_boundary(x)?;
        let boundary_gp = space.gromov_product_boundary_at(y, &zx, o, BOUNDARY_DEPTH);
        let nf = n as f64;
        points.push(MonitorPoint {
            n,
            escape: escape_gp >= (lambda - epsilon) * nf - 1e-9,
            transverse: transverse_gp <= epsilon * nf + 1e-9,
            boundary: boundary_gp <= epsilon * nf + (2 * l + 1) as f64 + 1e-9,
        });
        n += stride;
    }
    let first_failure = points.iter().find(|p| !p.holds()).map(|p| p.n);
    Ok(MonitorSeries {
        points,
        first_failure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MonitorSummary {
    pub pairs: usize,
    pub epsilon: f64,
    pub l: usize,
    /// `(n, fraction of pairs where all three hold)`.
    pub per_n: Vec<(usize, f64)>,
    pub first_failures: Vec<Option<usize>>,
}

impl MonitorSummary {
    /// Pass fraction over all pairs and grid points with `n ≥ from`.
    pub fn pass_rate(&self, from: usize) -> f64 {
        let tail: Vec<f64> = self.per_n.iter().filter(|(n, _)| *n >= from).map(|p| p.1).collect();
        if tail.is_empty() {
            1.0
        } else {
            stats::mean(&tail)
        }
    }
}

/// The monitor over `pairs` independent `(x, y) ~ ν̂ ⊗ ν̌` pairs, pair `i`
/// driving walk trial `i`.
#[allow(clippy::too_many_arguments)]
pub fn monitor_batch(
    cfg: &WalkConfig,
    seed: u64,
    pairs: usize,
    lambda: f64,
    epsilon: f64,
    l: usize,
    n_max: usize,
    stride: usize,
) -> Result<MonitorSummary> {
    check_epsilon(lambda, epsilon)?;
    let depth = default_depth(cfg.space.kind);
    let series: Vec<MonitorSeries> = (0..pairs as u64)
        .into_par_iter()
        .map(|i| {
            let x = boundary_sample(cfg, seed, Direction::Forward, depth, i);
            let y = boundary_sample(cfg, seed, Direction::Reversed, depth, i);
            geometric_estimates_monitor(cfg, seed, i, &x, &y, lambda, epsilon, l, n_max, stride)
        })
        .collect::<Result<_>>()?;
    let grid: Vec<usize> = series.first().map(|s| s.points.iter().map(|p| p.n).collect()).unwrap_or_default();
    let per_n = grid
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let ok = series.iter().filter(|s| s.points[j].holds()).count();
            (n, ok as f64 / pairs.max(1) as f64)
        })
        .collect();
    Ok(MonitorSummary {
        pairs,
        epsilon,
        l,
        per_n,
        first_failures: series.iter().map(|s| s.first_failure).collect(),
    })
}
