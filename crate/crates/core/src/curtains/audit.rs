//! Sampled audits of the curtain axioms: partition, thickness, star
//! convexity, the bottleneck bound and the four-point condition for the
//! lower model metric.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{GeodesicSeg, ModelSpace, Point};
use crate::rng::{stream, Domain};

use super::{
    d_l_lower, fiber_sample, sample_in_curtain, Chain, Curtain, DualChainSearch, SearchBudget,
    Side, PARAM_SLACK,
};

/// Points sampled along each audited geodesic.
const SEGMENT_SAMPLES: usize = 32;

/// Partition check: the projection parameter is finite, exactly one side
/// applies, and the foot is no farther than any sampled point of the dual.
pub fn partition_violation(space: &ModelSpace, h: &Curtain, x: &Point) -> bool {
    let s = h.dual.project_param(x);
    if !s.is_finite() {
        return true;
    }
    let flags = [
        s < h.t - 0.5,
        (h.t - 0.5..=h.t + 0.5).contains(&s),
        s > h.t + 0.5,
    ];
    if flags.iter().filter(|f| **f).count() != 1 {
        return true;
    }
    let side = h.side_of(x);
    let expected = [Side::Minus, Side::Pole, Side::Plus][flags.iter().position(|f| *f).unwrap()];
    if side != expected {
        return true;
    }
    let foot = space.d(x, &h.dual.eval(s));
    (0..=SEGMENT_SAMPLES).any(|k| {
        let u = h.dual.length * k as f64 / SEGMENT_SAMPLES as f64;
        space.d(x, &h.dual.eval(u)) < foot - 1e-9
    })
}

/// Thickness check on one pair: `d(x, y) ≥ 1 - 1e-6` for `x ∈ h⁻`, `y ∈ h⁺`.
pub fn thickness_violation(space: &ModelSpace, h: &Curtain, x: &Point, y: &Point) -> bool {
    h.side_of(x) == Side::Minus && h.side_of(y) == Side::Plus && space.d(x, y) < 1.0 - 1e-6
}

/// Number of sampled points of `[x, π_P(x)]` outside the curtain, over
/// samples `x` in the curtain.
pub fn star_convexity_audit(space: &ModelSpace, h: &Curtain, samples: &[Point]) -> Result<usize> {
    let mut bad = 0;
    for x in samples {
        if h.side_of(x) != Side::Pole {
            return domain("star convexity samples must lie in the curtain");
        }
        let foot = h.pole_foot(x);
        let g = space.seg(x, &foot);
        bad += (0..=SEGMENT_SAMPLES)
            .filter(|&k| {
                let p = g.eval(g.length * k as f64 / SEGMENT_SAMPLES as f64);
                let s = h.dual.project_param(&p);
                s < h.t - 0.5 - PARAM_SLACK || s > h.t + 0.5 + PARAM_SLACK
            })
            .count();
    }
    Ok(bad)
}

/// Largest `d(p, π_γ(p)) - (2L + 1)` over sampled `p ∈ [x2, y2] ∩ h_2`, where
/// `h_1, h_2, h_3` is an L-chain dual to `γ` separating `{x1, x2}` from
/// `{y1, y2}`.
pub fn bottleneck_audit(
    space: &ModelSpace,
    chain3: &Chain,
    x2: &Point,
    y2: &Point,
    l: usize,
) -> Result<f64> {
    if chain3.len() != 3 {
        return domain("bottleneck audit needs exactly three curtains");
    }
    let gamma = &chain3.curtains[0].dual;
    if !chain3.curtains.iter().all(|h| h.dual == *gamma) {
        return domain("bottleneck curtains must share their dual geodesic");
    }
    let x1 = &gamma.a;
    let y1 = &gamma.b;
    for h in &chain3.curtains {
        if h.side_of(x1) != Side::Minus
            || h.side_of(x2) != Side::Minus
            || h.side_of(y1) != Side::Plus
            || h.side_of(y2) != Side::Plus
        {
            return domain("chain does not separate {x1, x2} from {y1, y2}");
        }
    }
    let h2 = &chain3.curtains[1];
    let seg = space.seg(x2, y2);
    let steps = (seg.length * 20.0).ceil().max(50.0) as usize;
    let mut worst = f64::NEG_INFINITY;
    for k in 0..=steps {
        let p = seg.eval(seg.length * k as f64 / steps as f64);
        if h2.side_of(&p) == Side::Pole {
            let (foot, _) = gamma.project(&p);
            worst = worst.max(space.d(&p, &foot));
        }
    }
    if worst == f64::NEG_INFINITY {
        return domain("no sample of [x2, y2] fell in the middle curtain");
    }
    Ok(worst - (2 * l + 1) as f64)
}

/// Empirical δ of the four-point condition in the `d_L_lower` pseudometric.
pub fn four_point_audit(
    space: &ModelSpace,
    l: usize,
    quadruples: usize,
    radius: f64,
    budget: &SearchBudget,
    seed: u64,
) -> Result<f64> {
    if quadruples == 0 {
        return domain("need at least one quadruple");
    }
    let deltas: Vec<Result<f64>> = (0..quadruples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, Domain::Audit, i);
            let pts: Vec<Point> = (0..4)
                .map(|_| space.random_point(&space.basepoint, radius, &mut rng))
                .collect();
            four_point_delta(space, &pts[0], &pts[1], &pts[2], &pts[3], l, budget)
        })
        .collect();
    let mut worst: f64 = 0.0;
    for d in deltas {
        worst = worst.max(d?);
    }
    Ok(worst)
}

/// `min((x|y), (y|z)) - (x|z)` based at `o`, in `d_L_lower`.
pub fn four_point_delta(
    space: &ModelSpace,
    x: &Point,
    y: &Point,
    z: &Point,
    o: &Point,
    l: usize,
    budget: &SearchBudget,
) -> Result<f64> {
    let d = |a: &Point, b: &Point| -> Result<f64> { Ok(d_l_lower(space, a, b, l, budget)? as f64) };
    let gp = |a: &Point, b: &Point| -> Result<f64> { Ok(0.5 * (d(a, o)? + d(b, o)? - d(a, b)?)) };
    Ok(gp(x, y)?.min(gp(y, z)?) - gp(x, z)?)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurtainAuditSummary {
    pub configurations: usize,
    pub partition_violations: usize,
    pub thickness_violations: usize,
    pub star_convexity_violations: usize,
    pub bottleneck_configurations: usize,
    pub bottleneck_violations: usize,
    pub max_bottleneck_excess: Option<f64>,
}

impl CurtainAuditSummary {
    pub fn violations(&self) -> usize {
        self.partition_violations
            + self.thickness_violations
            + self.star_convexity_violations
            + self.bottleneck_violations
    }
}

fn random_curtain<R: Rng + ?Sized>(space: &ModelSpace, radius: f64, rng: &mut R) -> Curtain {
    loop {
        let x = space.random_point(&space.basepoint, radius, rng);
        let y = space.random_point(&space.basepoint, radius, rng);
        let g = space.seg(&x, &y);
        if g.length > 1.0 {
            let t = 0.5 + (g.length - 1.0) * rng.gen::<f64>();
            return Curtain::new(&g, t).expect("pole fits");
        }
    }
}

fn point_near_side<R: Rng + ?Sized>(
    space: &ModelSpace,
    g: &GeodesicSeg,
    h: &Curtain,
    side: Side,
    rng: &mut R,
) -> Point {
    let (lo, hi) = match side {
        Side::Minus => ((h.t - 0.5 - 1.0).max(0.0), h.t - 0.5),
        Side::Plus => (h.t + 0.5, (h.t + 0.5 + 1.0).min(g.length)),
        Side::Pole => (h.t - 0.5, h.t + 0.5),
    };
    fiber_sample(space, g, lo, hi, 3.0, rng)
}

/// Partition, thickness and star convexity over `configs` random curtains.
pub fn axiom_audits(space: &ModelSpace, configs: usize, seed: u64) -> CurtainAuditSummary {
    let rows: Vec<(usize, usize, usize)> = (0..configs as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, Domain::Audit, i);
            let h = random_curtain(space, 8.0, &mut rng);
            let mut part = 0;
            let mut thick = 0;
            for _ in 0..4 {
                let x = space.random_point(&space.basepoint, 10.0, &mut rng);
                part += usize::from(partition_violation(space, &h, &x));
            }
            if h.t - 0.5 > 0.0 && h.t + 0.5 < h.dual.length {
                for _ in 0..4 {
                    let x = point_near_side(space, &h.dual, &h, Side::Minus, &mut rng);
                    let y = point_near_side(space, &h.dual, &h, Side::Plus, &mut rng);
                    thick += usize::from(thickness_violation(space, &h, &x, &y));
                }
            }
            let inside: Vec<Point> = (0..4)
                .map(|_| sample_in_curtain(space, &h, 5.0, &mut rng))
                .filter(|p| h.side_of(p) == Side::Pole)
                .collect();
            let star = star_convexity_audit(space, &h, &inside).unwrap_or(usize::MAX);
            (part, thick, star)
        })
        .collect();
    let mut out = CurtainAuditSummary {
        configurations: configs,
        ..Default::default()
    };
    for (p, t, s) in rows {
        out.partition_violations += p;
        out.thickness_violations += t;
        out.star_convexity_violations += s;
    }
    out
}

/// Bottleneck audit over `segments` random dual geodesics of length about
/// `length`, with `per_segment` random `(x2, y2)` each.
pub fn bottleneck_audits(
    space: &ModelSpace,
    l: usize,
    segments: usize,
    per_segment: usize,
    length: f64,
    budget: &SearchBudget,
    seed: u64,
) -> CurtainAuditSummary {
    let rows: Vec<Vec<f64>> = (0..segments as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed ^ 0xb07e, Domain::Audit, i);
            let x1 = space.random_point(&space.basepoint, 2.0, &mut rng);
            let y1 = space.random_on_sphere(&x1, length, &mut rng);
            let Ok(mut search) = DualChainSearch::new(space, &x1, &y1, budget) else {
                return Vec::new();
            };
            let chain = search.greedy(l);
            if chain.len() < 3 {
                return Vec::new();
            }
            let mid = chain.len() / 2;
            let chain3 = Chain {
                curtains: chain.curtains[mid - 1..=mid + 1].to_vec(),
                reference: x1.clone(),
            };
            let (h1, h3) = (&chain3.curtains[0], &chain3.curtains[2]);
            let mut out = Vec::with_capacity(per_segment);
            let mut tries = 0;
            while out.len() < per_segment && tries < per_segment * 20 {
                tries += 1;
                let gamma = &h1.dual;
                let x2 = fiber_sample(space, gamma, 0.0, h1.t - 0.5, 4.0, &mut rng);
                let y2 = fiber_sample(space, gamma, h3.t + 0.5, gamma.length, 4.0, &mut rng);
                if let Ok(e) = bottleneck_audit(space, &chain3, &x2, &y2, l) {
                    out.push(e);
                }
            }
            out
        })
        .collect();
    let mut out = CurtainAuditSummary::default();
    for r in rows {
        for e in r {
            out.bottleneck_configurations += 1;
            out.bottleneck_violations += usize::from(e > 1e-9);
            out.max_bottleneck_excess =
                Some(out.max_bottleneck_excess.map_or(e, |m: f64| m.max(e)));
        }
    }
    out.configurations = out.bottleneck_configurations;
    out
}
