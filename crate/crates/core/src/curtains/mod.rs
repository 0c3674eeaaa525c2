//! Curtains dual to geodesics, chains, L-separation and the audits of the
//! bottleneck and star-convexity properties.

pub mod audit;
pub mod chain;
pub mod separation;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{GeodesicSeg, ModelSpace, Point, SegShape};

pub use chain::{d_inf, is_chain, Chain};
pub use separation::{
    d_l_lower, greedy_dual_l_chain, l_separated, DualChainSearch, SearchBudget, SeparationReport,
    Verdict, Witness,
};

/// Slack applied to parameter comparisons in audits.
pub const PARAM_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Pole,
    Plus,
}

/// The set of points whose projection to `dual` lands in the unit window
/// `[t - ½, t + ½]`, together with its two complementary halfspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Curtain {
    pub dual: GeodesicSeg,
    pub t: f64,
}

impl Curtain {
    pub fn new(dual: &GeodesicSeg, t: f64) -> Result<Curtain> {
        if !t.is_finite() || t - 0.5 < -PARAM_SLACK || t + 0.5 > dual.length + PARAM_SLACK {
            return domain(format!(
                "curtain at {t} does not fit in a geodesic of length {}",
                dual.length
            ));
        }
        Ok(Curtain {
            dual: dual.clone(),
            t,
        })
    }

    pub fn pole(&self) -> (f64, f64) {
        (self.t - 0.5, self.t + 0.5)
    }

    pub fn side_of_param(&self, s: f64) -> Side {
        if s < self.t - 0.5 {
            Side::Minus
        } else if s > self.t + 0.5 {
            Side::Plus
        } else {
            Side::Pole
        }
    }

    pub fn side_of(&self, x: &Point) -> Side {
        self.side_of_param(self.dual.project_param(x))
    }

    /// The same curtain with halfspaces swapped.
    pub fn flipped(&self) -> Curtain {
        Curtain {
            dual: self.dual.reversed(),
            t: self.dual.length - self.t,
        }
    }

    /// Whether all of `a` lies in one open halfspace and all of `b` in the
    /// other. A sample on the pole makes the question undecidable here.
    pub fn separates(&self, a: &[Point], b: &[Point]) -> Result<bool> {
        let sides = |xs: &[Point]| -> Result<Vec<Side>> {
            xs.iter()
                .map(|x| match self.side_of(x) {
                    Side::Pole => Err(Error::Indeterminate(format!(
                        "{x:?} lies on the pole of the curtain at {}",
                        self.t
                    ))),
                    s => Ok(s),
                })
                .collect()
        };
        let sa = sides(a)?;
        let sb = sides(b)?;
        let (Some(&first_a), Some(&first_b)) = (sa.first(), sb.first()) else {
            return Ok(false);
        };
        Ok(first_a != first_b
            && sa.iter().all(|&s| s == first_a)
            && sb.iter().all(|&s| s == first_b))
    }

    /// Projection onto the pole.
    pub fn pole_foot(&self, x: &Point) -> Point {
        let s = self.dual.project_param(x).clamp(self.t - 0.5, self.t + 0.5);
        self.dual.eval(s)
    }

    /// Whether two curtains share their dual segment.
    pub fn same_dual(&self, other: &Curtain) -> bool {
        self.dual == other.dual
    }
}

/// Point of the curtain's pole region at distance at most `radius` from the
/// dual geodesic.
pub fn sample_in_curtain<R: Rng + ?Sized>(
    space: &ModelSpace,
    h: &Curtain,
    radius: f64,
    rng: &mut R,
) -> Point {
    let (lo, hi) = h.pole();
    fiber_sample(space, &h.dual, lo, hi, radius, rng)
}

/// Point whose projection parameter onto `seg` lies in `[lo, hi]`, at
/// distance at most `radius` from `seg`. Fibres are sampled exactly where
/// they have closed form; the product falls back to rejection.
pub fn fiber_sample<R: Rng + ?Sized>(
    space: &ModelSpace,
    seg: &GeodesicSeg,
    lo: f64,
    hi: f64,
    radius: f64,
    rng: &mut R,
) -> Point {
    let lo = lo.max(0.0);
    let hi = hi.min(seg.length).max(lo);
    let u = lo + (hi - lo) * rng.gen::<f64>();
    match &seg.shape {
        SegShape::Euclidean(s) => {
            let r = radius * (2.0 * rng.gen::<f64>() - 1.0);
            Point::Euclidean(s.fiber_point(u, r))
        }
        SegShape::Hyperbolic(s) => {
            let r = radius * (2.0 * rng.gen::<f64>() - 1.0);
            Point::Hyperbolic(s.fiber_point(u, r))
        }
        SegShape::Tree(path) => {
            let valence = space.valence().expect("tree space");
            let verts: Vec<f64> = path
                .vertex_params()
                .into_iter()
                .filter(|s| (lo..=hi).contains(s))
                .collect();
            if verts.is_empty() || rng.gen::<f64>() < 0.25 {
                return Point::Tree(path.eval(u));
            }
            let s = verts[rng.gen_range(0..verts.len())];
            let v = path.eval(s);
            let avoid = path.path_letters_at(s);
            let r = radius * rng.gen::<f64>();
            crate::geometry::tree::random_branch(valence, &v.vertex, &avoid, r, rng)
                .map(Point::Tree)
                .unwrap_or(Point::Tree(v))
        }
        SegShape::TreeLine(ps) => {
            for _ in 0..64 {
                let r = radius * (2.0 * rng.gen::<f64>() - 1.0);
                let cand = if rng.gen::<bool>() {
                    // move inside the flat strip spanned by the tree path and the line
                    let tree_param = ps.tree_rate * u - ps.line_rate * r;
                    if !(0.0..=ps.path.length).contains(&tree_param) {
                        continue;
                    }
                    Point::TreeLine(
                        ps.path.eval(tree_param),
                        ps.s0 + ps.line_rate * u + ps.tree_rate * r,
                    )
                } else {
                    space.random_point(&seg.eval(u), radius, rng)
                };
                let s = seg.project_param(&cand);
                if s >= lo && s <= hi {
                    return cand;
                }
            }
            seg.eval(u)
        }
    }
}

/// Deterministic sample of a curtain: the pole midpoint and ends, then
/// `count` fibre points.
pub fn curtain_cloud<R: Rng + ?Sized>(
    space: &ModelSpace,
    h: &Curtain,
    count: usize,
    radius: f64,
    rng: &mut R,
) -> Vec<Point> {
    let (lo, hi) = h.pole();
    let mut out = vec![
        h.dual.eval(h.t),
        h.dual.eval(lo.max(0.0)),
        h.dual.eval(hi.min(h.dual.length)),
    ];
    out.extend((0..count).map(|_| sample_in_curtain(space, h, radius, rng)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn tree_curtain_sides() {
        let s = ModelSpace::tree(4);
        let g = s
            .geodesic(&Point::vertex("e").unwrap(), &Point::vertex("aa").unwrap())
            .unwrap();
        let h = Curtain::new(&g, 1.0).unwrap();
        assert_eq!(h.side_of(&Point::vertex("b").unwrap()), Side::Minus);
        assert_eq!(h.side_of(&Point::vertex("a").unwrap()), Side::Pole);
        assert_eq!(h.side_of(&Point::vertex("ab").unwrap()), Side::Pole);
        assert_eq!(h.side_of(&Point::vertex("aab").unwrap()), Side::Plus);
    }

    #[test]
    fn pole_boundary_is_closed() {
        let s = ModelSpace::euclidean();
        let g = s
            .geodesic(&Point::flat(0.0, 0.0), &Point::flat(10.0, 0.0))
            .unwrap();
        let h = Curtain::new(&g, 5.0).unwrap();
        assert_eq!(h.side_of(&Point::flat(4.5, 2.0)), Side::Pole);
        assert_eq!(h.side_of(&Point::flat(5.5, -2.0)), Side::Pole);
        assert_eq!(h.side_of(&Point::flat(7.0, 3.0)), Side::Plus);
    }

    #[test]
    fn curtain_must_fit() {
        let s = ModelSpace::euclidean();
        let g = s
            .geodesic(&Point::flat(0.0, 0.0), &Point::flat(2.0, 0.0))
            .unwrap();
        assert!(Curtain::new(&g, 0.2).is_err());
        assert!(Curtain::new(&g, 1.8).is_err());
        assert!(Curtain::new(&g, 0.5).is_ok());
    }

    #[test]
    fn flipped_swaps_sides() {
        let s = ModelSpace::hyperbolic();
        let g = s
            .geodesic(
                &Point::uhp(0.0, 1.0).unwrap(),
                &Point::uhp(1.0, 3.0).unwrap(),
            )
            .unwrap();
        let h = Curtain::new(&g, 0.6).unwrap();
        let f = h.flipped();
        let x = g.a.clone();
        assert_eq!(h.side_of(&x), Side::Minus);
        assert_eq!(f.side_of(&x), Side::Plus);
    }

    #[test]
    fn clouds_stay_in_pole() {
        let mut rng = crate::rng::stream(1, crate::rng::Domain::Curtain, 0);
        for s in [
            ModelSpace::tree(4),
            ModelSpace::hyperbolic(),
            ModelSpace::euclidean(),
            ModelSpace::tree_times_line(4),
        ] {
            for _ in 0..20 {
                let x = s.random_point(&s.basepoint, 6.0, &mut rng);
                let y = s.random_point(&s.basepoint, 6.0, &mut rng);
                let g = s.seg(&x, &y);
                if g.length < 1.0 {
                    continue;
                }
                let h = Curtain::new(&g, 0.5 * g.length).unwrap();
                for p in curtain_cloud(&s, &h, 30, 5.0, &mut rng) {
                    let u = g.project_param(&p);
                    assert!(
                        u >= h.t - 0.5 - 1e-9 && u <= h.t + 0.5 + 1e-9,
                        "{:?}",
                        s.kind
                    );
                }
            }
        }
    }
}
