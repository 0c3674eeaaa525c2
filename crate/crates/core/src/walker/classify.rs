//! Translation lengths, isometry types and the contracting-fraction
//! experiment.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::isometry::{Isometry, Mobius};
use super::walk::{Walk, WalkConfig};
use crate::geometry::tree::TreePoint;
use crate::geometry::word::Word;
use crate::geometry::{ModelSpace, Point};
use crate::harness::defaults::PROBE_BALLS;
use crate::rng::{self, Domain};
use crate::stats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Identity,
    Elliptic,
    Parabolic,
    Axial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Contracting {
    Yes,
    No,
    Unknown,
}

/// Projection diameter of one ball disjoint from the quasi-axis.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProbeBall {
    pub radius: f64,
    pub diameter: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Probe {
    pub axis_length: f64,
    pub balls: Vec<ProbeBall>,
    pub max_diameter: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Evidence {
    /// Which exact rule produced the verdict.
    pub rule: &'static str,
    pub probe: Option<Probe>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub kind: Kind,
    pub translation_length: f64,
    pub contracting: Contracting,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TranslationLength {
    pub estimate: f64,
    pub exact: Option<f64>,
}

const TRACE_TOL: f64 = 1e-9;

fn exact_length(g: &Isometry) -> f64 {
    match g {
        Isometry::Tree(w) => w.translation_length() as f64,
        Isometry::Mobius(m) => m.translation_length(),
        Isometry::Rigid(r) => {
            if r.is_translation() {
                r.shift[0].hypot(r.shift[1])
            } else {
                0.0
            }
        }
        Isometry::TreeShift(w, s) => (w.translation_length() as f64).hypot(*s),
    }
}

/// `d(g^N o, o)/N` together with the exact stable length.
pub fn translation_length(
    space: &ModelSpace,
    g: &Isometry,
    iterations: usize,
) -> TranslationLength {
    let n = iterations.max(1);
    TranslationLength {
        estimate: g.power(n).displacement(space) / n as f64,
        exact: Some(exact_length(g)),
    }
}

fn mobius_kind(m: &Mobius) -> Kind {
    let n = m.normalized();
    let scalar = n[1].abs() < 1e-12 && n[2].abs() < 1e-12 && (n[0] - n[3]).abs() < 1e-12;
    if scalar {
        return Kind::Identity;
    }
    let lt = m.log_abs_trace();
    let two = 2f64.ln();
    if lt > two + TRACE_TOL {
        Kind::Axial
    } else if lt < two - TRACE_TOL {
        Kind::Elliptic
    } else {
        Kind::Parabolic
    }
}

fn tree_kind(w: &Word) -> Kind {
    if w.is_empty() {
        Kind::Identity
    } else if w.translation_length() == 0 {
        Kind::Elliptic
    } else {
        Kind::Axial
    }
}

/// Exact classification from the per-space rule; no probe.
pub fn classify(g: &Isometry) -> Classification {
    let (kind, contracting, rule) = match g {
        Isometry::Tree(w) => {
            let k = tree_kind(w);
            let c = if k == Kind::Axial {
                Contracting::Yes
            } else {
                Contracting::No
            };
            (k, c, "tree: axial elements are contracting (no flats)")
        }
        Isometry::Mobius(m) => {
            let k = mobius_kind(m);
            let c = if k == Kind::Axial {
                Contracting::Yes
            } else {
                Contracting::No
            };
            (k, c, "hyperbolic: |tr| > 2 is axial and contracting")
        }
        Isometry::Rigid(r) => {
            let k = if !r.is_translation() {
                Kind::Elliptic
            } else if r.shift == [0.0, 0.0] {
                Kind::Identity
            } else {
                Kind::Axial
            };
            (
                k,
                Contracting::No,
                "euclidean: every axis bounds a half-plane",
            )
        }
        Isometry::TreeShift(w, s) => {
            let tk = tree_kind(w);
            let k = if tk == Kind::Axial || *s != 0.0 {
                Kind::Axial
            } else {
                tk
            };
            (k, Contracting::No, "product: every axis lies in a flat")
        }
    };
    let translation_length = if kind == Kind::Axial {
        exact_length(g)
    } else {
        0.0
    };
    Classification {
        kind,
        translation_length,
        contracting,
        evidence: Evidence { rule, probe: None },
    }
}

/// A point on the axis when one is cheap to name exactly, else the basepoint.
fn axis_point(space: &ModelSpace, g: &Isometry) -> Point {
    match g {
        Isometry::Tree(w) => Point::Tree(TreePoint::vertex(w.cyclic_reduction().0)),
        Isometry::TreeShift(w, _) => {
            Point::TreeLine(TreePoint::vertex(w.cyclic_reduction().0), 0.0)
        }
        _ => space.basepoint.clone(),
    }
}

/// Classification plus the empirical contraction probe: projections of
/// `PROBE_BALLS` random balls disjoint from a long stretch of the axis.
pub fn classify_with_probe(space: &ModelSpace, g: &Isometry, seed: u64) -> Classification {
    let mut c = classify(g);
    if c.kind != Kind::Axial {
        return c;
    }
    let p = axis_point(space, g);
    let k = ((20.0 / c.translation_length).ceil() as usize).clamp(1, 400);
    let gk = g.power(k);
    let a = gk.inverse().act(&p).expect("matching space");
    let b = gk.act(&p).expect("matching space");
    let seg = space.seg(&a, &b);
    let mid = seg.eval(0.5 * seg.length);
    let mut rng = rng::stream(seed, Domain::Classify, 0);
    let mut balls = Vec::with_capacity(PROBE_BALLS);
    let mut attempts = 0;
    while balls.len() < PROBE_BALLS && attempts < 50 * PROBE_BALLS {
        attempts += 1;
        let offset = rng.gen_range(1.0..10.0);
        let center = space.random_on_sphere(&mid, offset, &mut rng);
        let (foot, _) = seg.project(&center);
        let gap = space.d(&center, &foot);
        if gap < 0.5 {
            continue;
        }
        let radius = rng.gen_range(0.2..0.9) * gap;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..48 {
            let x = if j % 2 == 0 {
                space.random_on_sphere(&center, radius, &mut rng)
            } else {
                space.random_point(&center, radius, &mut rng)
            };
            let t = seg.project_param(&x);
            lo = lo.min(t);
            hi = hi.max(t);
        }
        balls.push(ProbeBall {
            radius,
            diameter: hi - lo,
        });
    }
    let max_diameter = balls.iter().map(|b| b.diameter).fold(0.0, f64::max);
    c.evidence.probe = Some(Probe {
        axis_length: seg.length,
        balls,
        max_diameter,
    });
    c
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FractionPoint {
    pub n: usize,
    pub fraction: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// For each `n` in `grid`, the fraction of trials whose `Z_n` is contracting.
pub fn contracting_fraction(
    cfg: &WalkConfig,
    seed: u64,
    grid: &[usize],
    trials: usize,
) -> Vec<FractionPoint> {
    let mut sorted = grid.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let hits: Vec<Vec<bool>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut w = Walk::forward(cfg, seed, t);
            sorted
                .iter()
                .map(|&n| {
                    w.advance(n - w.steps());
                    classify(w.position()).contracting == Contracting::Yes
                })
                .collect()
        })
        .collect();
    sorted
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let xs: Vec<f64> = hits.iter().map(|h| if h[i] { 1.0 } else { 0.0 }).collect();
            let p = stats::mean(&xs);
            FractionPoint {
                n,
                fraction: p,
                std_error: if trials > 0 {
                    (p * (1.0 - p) / trials as f64).sqrt()
                } else {
                    0.0
                },
                trials,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_rules() {
        let w = |s: &str| Isometry::Tree(Word::parse(s).unwrap());
        assert_eq!(classify(&w("")).kind, Kind::Identity);
        let ab = classify(&w("ab"));
        assert_eq!(ab.kind, Kind::Axial);
        assert_eq!(ab.contracting, Contracting::Yes);
        assert_eq!(ab.translation_length, 2.0);
    }

    #[test]
    fn hyperbolic_rules() {
        let m = |a, b, c, d| Isometry::Mobius(Mobius::new(a, b, c, d).unwrap());
        assert_eq!(classify(&m(2.0, 0.0, 0.0, 0.5)).kind, Kind::Axial);
        assert_eq!(classify(&m(1.0, 1.0, 0.0, 1.0)).kind, Kind::Parabolic);
        let (s, c) = 0.3f64.sin_cos();
        assert_eq!(classify(&m(c, s, -s, c)).kind, Kind::Elliptic);
        assert_eq!(classify(&m(1.0, 0.0, 0.0, 1.0)).kind, Kind::Identity);
    }
}
