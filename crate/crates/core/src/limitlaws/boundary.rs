//! Finite-depth proxies for the hitting measures `ν` and `ν̌`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::drift::check_positive_drift;
use crate::error::{domain, Error, Result};
use crate::geometry::hyperbolic::{self, Ideal, Uhp};
use crate::geometry::tree::TreeRay;
use crate::geometry::word::Word;
use crate::geometry::{BoundaryProxy, Point, SpaceKind};
use crate::harness::defaults::{BOUNDARY_WALK_DEPTH_HYPERBOLIC, BOUNDARY_WALK_DEPTH_TREE};
use crate::rng::{hash_words, Domain};
use crate::walker::{Isometry, Mobius, Walk, WalkConfig};

/// Which walk a sample comes from: `μ` (giving `ν`) or `μ̌` (giving `ν̌`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Reversed,
}

impl Direction {
    fn domain(self) -> Domain {
        match self {
            Direction::Forward => Domain::BoundaryForward,
            Direction::Reversed => Domain::BoundaryReversed,
        }
    }
}

/// Weighted boundary points with their provenance.
#[derive(Clone, Debug)]
pub struct BoundarySampleSet {
    pub points: Vec<BoundaryProxy>,
    pub weights: Vec<f64>,
    pub direction: Direction,
    pub depth: usize,
    pub trials: usize,
}

impl BoundarySampleSet {
    pub fn uniform(points: Vec<BoundaryProxy>, direction: Direction, depth: usize) -> Self {
        let n = points.len();
        BoundarySampleSet {
            weights: vec![1.0 / n.max(1) as f64; n],
            trials: n,
            points,
            direction,
            depth,
        }
    }

    pub fn weighted(
        points: Vec<BoundaryProxy>,
        weights: Vec<f64>,
        direction: Direction,
        depth: usize,
    ) -> Result<Self> {
        if points.len() != weights.len() || points.is_empty() {
            return domain("boundary sample needs one weight per point");
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return domain(format!("boundary weights must be non-negative and sum to 1 (sum {total})"));
        }
        Ok(BoundarySampleSet {
            trials: points.len(),
            points,
            weights,
            direction,
            depth,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First `k` samples, reweighted uniformly.
    pub fn head(&self, k: usize) -> BoundarySampleSet {
        BoundarySampleSet::uniform(self.points[..k.min(self.len())].to_vec(), self.direction, self.depth)
    }
}

/// Walk length behind one boundary sample.
pub fn default_depth(kind: SpaceKind) -> usize {
    match kind {
        SpaceKind::HyperbolicPlane => BOUNDARY_WALK_DEPTH_HYPERBOLIC,
        _ => BOUNDARY_WALK_DEPTH_TREE,
    }
}

/// Ideal endpoint of the ray from `o` through `g o`. Far out, where `g o`
/// is no longer representable, the image of the dominant column is used;
/// the two differ by `O(e^{-d(o, g o)})`.
fn ideal_toward(o: &Uhp, m: &Mobius) -> Ideal {
    if m.log_scale() < 150.0 {
        return hyperbolic::ray_endpoint(o, &m.apply(o));
    }
    let [_, _, c, d] = m.normalized();
    if c.abs() >= d.abs() {
        m.apply_ideal(&Ideal::Infinity)
    } else {
        m.apply_ideal(&Ideal::Real(0.0))
    }
}

fn tree_ray(valence: u8, w: &Word, dirac_core: Option<(Word, Word)>, tail_seed: u64) -> TreeRay {
    if let Some((u, c)) = dirac_core {
        if let Ok(r) = TreeRay::periodic(valence, u, c) {
            return r;
        }
    }
    TreeRay::random_tail(valence, w.clone(), tail_seed)
}

/// The proxy toward `g o`: the word itself followed by a seeded tail on
/// trees, the ray endpoint in the hyperbolic plane, the direction of the
/// displacement in the flat and product factors. A Dirac measure at an
/// axial word gets its exact periodic limit instead of a random tail.
pub fn proxy_toward(cfg: &WalkConfig, g: &Isometry, reversed: bool, tail_seed: u64) -> BoundaryProxy {
    let dirac_core = || {
        if !cfg.is_dirac() {
            return None;
        }
        let gen = &cfg.support[0];
        let w = gen.word()?;
        let w = if reversed { w.inverse() } else { w.clone() };
        let (u, c) = w.cyclic_reduction();
        (!c.is_empty()).then_some((u, c))
    };
    match (g, &cfg.space.basepoint) {
        (Isometry::Tree(w), _) => {
            let v = cfg.space.valence().expect("tree");
            BoundaryProxy::Tree(tree_ray(v, w, dirac_core(), tail_seed))
        }
        (Isometry::Mobius(m), Point::Hyperbolic(o)) => BoundaryProxy::Ideal(ideal_toward(o, m)),
        (Isometry::Rigid(_), Point::Euclidean(o)) => {
            let p = match g.act(&cfg.space.basepoint).expect("flat") {
                Point::Euclidean(p) => p,
                _ => unreachable!(),
            };
            BoundaryProxy::Direction((p[1] - o[1]).atan2(p[0] - o[0]))
        }
        (Isometry::TreeShift(w, s), _) => {
            let v = cfg.space.valence().expect("product");
            // tree factor measured from the identity vertex
            let tree_part = w.len() as f64;
            BoundaryProxy::TreeLine {
                ray: tree_ray(v, w, dirac_core(), tail_seed),
                angle: s.atan2(tree_part),
            }
        }
        _ => panic!("element and basepoint from different spaces"),
    }
}

/// One boundary sample: the walk for `(seed, direction, index)` run for
/// `depth` steps, then projected to the boundary.
pub fn boundary_sample(cfg: &WalkConfig, seed: u64, direction: Direction, depth: usize, index: u64) -> BoundaryProxy {
    let reversed = direction == Direction::Reversed;
    let mut w = Walk::new(cfg, seed, direction.domain(), index, reversed);
    w.advance(depth);
    let tail_seed = hash_words(&[seed, index, reversed as u64, 0x7a11]);
    proxy_toward(cfg, w.position(), reversed, tail_seed)
}

/// `count` samples of `ν` (forward) or `ν̌` (reversed). Refuses walks whose
/// drift is not clearly positive, since their orbits need not converge.
pub fn sample_boundary(
    cfg: &WalkConfig,
    seed: u64,
    direction: Direction,
    depth: usize,
    count: usize,
) -> Result<BoundarySampleSet> {
    check_positive_drift(cfg, seed)?;
    Ok(sample_boundary_unchecked(cfg, seed, direction, depth, count))
}

/// As [`sample_boundary`] without the drift gate.
pub fn sample_boundary_unchecked(
    cfg: &WalkConfig,
    seed: u64,
    direction: Direction,
    depth: usize,
    count: usize,
) -> BoundarySampleSet {
    let points: Vec<BoundaryProxy> = (0..count as u64)
        .into_par_iter()
        .map(|i| boundary_sample(cfg, seed, direction, depth, i))
        .collect();
    BoundarySampleSet::uniform(points, direction, depth)
}

fn ray_of(p: &BoundaryProxy) -> Result<&TreeRay> {
    p.tree_ray()
        .ok_or_else(|| Error::Precondition("cylinder statistics need tree boundary points".into()))
}

/// Weighted frequencies of the depth-`k` cylinders.
pub fn cylinder_distribution(samples: &BoundarySampleSet, k: usize) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (p, w) in samples.points.iter().zip(&samples.weights) {
        *out.entry(ray_of(p)?.cylinder(k).to_string()).or_insert(0.0) += w;
    }
    Ok(out)
}

fn total_variation(p: &BTreeMap<String, f64>, q: &BTreeMap<String, f64>) -> f64 {
    let keys: std::collections::BTreeSet<&String> = p.keys().chain(q.keys()).collect();
    0.5 * keys
        .into_iter()
        .map(|k| (p.get(k).unwrap_or(&0.0) - q.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
}

/// Total variation on depth-2 cylinders between `ν̂` and `Σ μ(g) g·ν̂`.
pub fn stationarity_check(cfg: &WalkConfig, samples: &BoundarySampleSet) -> Result<f64> {
    let here = cylinder_distribution(samples, 2)?;
    let mut pushed: BTreeMap<String, f64> = BTreeMap::new();
    for (g, mu) in cfg.support.iter().zip(&cfg.weights) {
        for (p, w) in samples.points.iter().zip(&samples.weights) {
            let moved = g.act_boundary(p)?;
            *pushed.entry(ray_of(&moved)?.cylinder(2).to_string()).or_insert(0.0) += mu * w;
        }
    }
    Ok(total_variation(&here, &pushed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_variation_of_disjoint_laws_is_one() {
        let p = BTreeMap::from([("ab".to_string(), 1.0)]);
        let q = BTreeMap::from([("ba".to_string(), 1.0)]);
        assert_eq!(total_variation(&p, &q), 1.0);
        assert_eq!(total_variation(&p, &p), 0.0);
    }
}
