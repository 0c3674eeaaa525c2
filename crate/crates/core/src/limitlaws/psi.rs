//! `ψ(x) = −2 ∫ (x|y)_o dν̌(y)` from a finite `ν̌` proxy.

use rayon::prelude::*;
use serde::Serialize;

use super::boundary::{BoundarySampleSet, Direction};
use crate::error::{Error, Result};
use crate::geometry::tree::TreeRay;
use crate::geometry::word::Letter;
use crate::geometry::{BoundaryProxy, ModelSpace, Point, SpaceKind, BOUNDARY_DEPTH};

/// Letters kept per sample in the sorted prefix index.
const INDEX_DEPTH: usize = 64;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PsiValue {
    pub value: f64,
    pub std_error: f64,
    /// Samples that entered the mean.
    pub used: usize,
    /// Samples rejected because `(x|y) = +∞` at the proxy depth.
    pub collisions: usize,
}

/// Sorted first letters of the `ν̌` rays, for trees based at the identity
/// vertex where `(x|y)_o` is the common-prefix length.
#[derive(Clone, Debug)]
struct PrefixIndex {
    keys: Vec<Vec<Letter>>,
    /// Original sample index for each sorted key.
    order: Vec<usize>,
    /// `cum[i]` is the weight of keys `[0, i)`.
    cum: Vec<f64>,
}

impl PrefixIndex {
    fn build(rays: &[&TreeRay], weights: &[f64]) -> PrefixIndex {
        let keys: Vec<Vec<Letter>> = rays
            .par_iter()
            .map(|r| r.letters().take(INDEX_DEPTH).collect())
            .collect();
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut cum = Vec::with_capacity(keys.len() + 1);
        cum.push(0.0);
        for &i in &order {
            let last = *cum.last().expect("non-empty");
            cum.push(last + weights[i]);
        }
        let keys = order.iter().map(|&i| keys[i].clone()).collect();
        PrefixIndex { keys, order, cum }
    }
}

/// A `ν̌` proxy prepared for repeated `ψ` evaluations.
#[derive(Clone, Debug)]
pub struct PsiEstimator {
    space: ModelSpace,
    samples: BoundarySampleSet,
    index: Option<PrefixIndex>,
    /// `Σ w²` of the normalized weights (effective sample size is its inverse).
    sum_w2: f64,
}

impl PsiEstimator {
    pub fn new(space: &ModelSpace, samples: BoundarySampleSet) -> Result<Self> {
        if samples.direction != Direction::Reversed {
            return Err(Error::Precondition("ψ integrates against ν̌: use reversed-walk samples".into()));
        }
        if samples.is_empty() {
            return Err(Error::Precondition("ψ needs at least one ν̌ sample".into()));
        }
        let rooted_tree = matches!(space.kind, SpaceKind::RegularTree { .. })
            && matches!(&space.basepoint, Point::Tree(p) if p.is_vertex() && p.vertex.is_empty());
        let index = if rooted_tree {
            let rays: Option<Vec<&TreeRay>> = samples.points.iter().map(|p| p.tree_ray()).collect();
            rays.map(|r| PrefixIndex::build(&r, &samples.weights))
        } else {
            None
        };
        let sum_w2 = samples.weights.iter().map(|w| w * w).sum();
        Ok(PsiEstimator {
            space: space.clone(),
            samples,
            index,
            sum_w2,
        })
    }

    pub fn samples(&self) -> &BoundarySampleSet {
        &self.samples
    }

    /// Weighted first and second moments of `(x|y)` over non-colliding
    /// samples: `(Σw, Σw g, Σw g², collisions)`.
    fn moments(&self, x: &BoundaryProxy) -> (f64, f64, f64, usize) {
        if let (Some(idx), Some(xr)) = (&self.index, x.tree_ray()) {
            return self.prefix_moments(idx, xr);
        }
        let o = &self.space.basepoint;
        let mut acc = (0.0, 0.0, 0.0, 0usize);
        for (y, w) in self.samples.points.iter().zip(&self.samples.weights) {
            let g = self.space.gromov_product_boundary(x, y, o);
            if g.is_finite() {
                acc.0 += w;
                acc.1 += w * g;
                acc.2 += w * g * g;
            } else {
                acc.3 += 1;
            }
        }
        acc
    }

    /// `Σ_i w_i lcp_i = Σ_{k≥1} W(lcp ≥ k)`, each `W` a range sum over the
    /// sorted keys; `lcp² = Σ_{k ≤ lcp} (2k − 1)` likewise.
    fn prefix_moments(&self, idx: &PrefixIndex, x: &TreeRay) -> (f64, f64, f64, usize) {
        let xs: Vec<Letter> = x.letters().take(INDEX_DEPTH).collect();
        let (mut lo, mut hi) = (0usize, idx.keys.len());
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (k, &l) in xs.iter().enumerate() {
            let a = lo + idx.keys[lo..hi].partition_point(|key| key[k] < l);
            let b = a + idx.keys[a..hi].partition_point(|key| key[k] == l);
            (lo, hi) = (a, b);
            if lo == hi {
                break;
            }
            let wk = idx.cum[hi] - idx.cum[lo];
            m1 += wk;
            m2 += wk * (2 * (k + 1) - 1) as f64;
        }
        let mut total = *idx.cum.last().expect("non-empty");
        let mut collisions = 0;
        // samples agreeing on the whole index: finish their prefixes exactly
        for s in lo..hi {
            let i = idx.order[s];
            let w = self.samples.weights[i];
            let y = self.samples.points[i].tree_ray().expect("tree");
            let full = x.lcp_ray(y, BOUNDARY_DEPTH);
            let k0 = INDEX_DEPTH as f64;
            if full >= BOUNDARY_DEPTH {
                collisions += 1;
                total -= w;
                m1 -= w * k0;
                m2 -= w * k0 * k0;
            } else {
                let f = full as f64;
                m1 += w * (f - k0);
                m2 += w * (f * f - k0 * k0);
            }
        }
        (total, m1, m2, collisions)
    }

    pub fn estimate(&self, x: &BoundaryProxy) -> Result<PsiValue> {
        let (w, m1, m2, collisions) = self.moments(x);
        if !(w > 0.0) {
            return Err(Error::Indeterminate(
                "every ν̌ sample sits at infinite Gromov product from x".into(),
            ));
        }
        let mean = m1 / w;
        let var = (m2 / w - mean * mean).max(0.0);
        let n_eff = 1.0 / self.sum_w2;
        Ok(PsiValue {
            value: -2.0 * mean,
            std_error: 2.0 * (var / n_eff).sqrt(),
            used: self.samples.len() - collisions,
            collisions,
        })
    }
}

/// `ψ̂(x)` from a `ν̌` proxy in one call.
pub fn estimate_psi(space: &ModelSpace, x: &BoundaryProxy, check_samples: &BoundarySampleSet) -> Result<PsiValue> {
    PsiEstimator::new(space, check_samples.clone())?.estimate(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiSummary {
    pub points: Vec<PsiValue>,
    pub sup: f64,
    pub inf: f64,
    pub sup_abs: f64,
    pub samples: usize,
    pub collisions: usize,
}

pub fn psi_summary(est: &PsiEstimator, xs: &[BoundaryProxy]) -> Result<PsiSummary> {
    let points: Vec<PsiValue> = xs
        .par_iter()
        .map(|x| est.estimate(x))
        .collect::<Result<_>>()?;
    let vals: Vec<f64> = points.iter().map(|p| p.value).collect();
    Ok(PsiSummary {
        sup: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        inf: vals.iter().copied().fold(f64::INFINITY, f64::min),
        sup_abs: vals.iter().map(|v| v.abs()).fold(0.0, f64::max),
        samples: est.samples.len(),
        collisions: points.iter().map(|p| p.collisions).sum(),
        points,
    })
}
