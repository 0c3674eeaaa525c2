//! Metric kernels for the four model spaces: the regular tree, the
//! hyperbolic plane, the Euclidean plane and the product of a tree with a
//! line. Every operation is closed form.

pub mod euclidean;
pub mod hyperbolic;
pub mod product;
pub mod tree;
pub mod word;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use euclidean::{FlatSeg, Vec2};
use hyperbolic::{HypSeg, Ideal, Uhp};
use product::ProductSeg;
use tree::{TreePath, TreePoint, TreeRay};
use word::Word;

/// Default depth to which boundary rays are compared or materialized.
pub const BOUNDARY_DEPTH: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    RegularTree { valence: u8 },
    HyperbolicPlane,
    EuclideanPlane,
    TreeTimesLine { valence: u8 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Tree(TreePoint),
    Hyperbolic(Uhp),
    Euclidean(Vec2),
    TreeLine(TreePoint, f64),
}

impl Point {
    pub fn vertex(s: &str) -> Result<Point> {
        Ok(Point::Tree(TreePoint::vertex(Word::parse(s)?)))
    }

    pub fn uhp(re: f64, im: f64) -> Result<Point> {
        Ok(Point::Hyperbolic(Uhp::new(re, im)?))
    }

    pub fn flat(x: f64, y: f64) -> Point {
        Point::Euclidean([x, y])
    }

    pub fn tree(&self) -> Option<&TreePoint> {
        match self {
            Point::Tree(p) | Point::TreeLine(p, _) => Some(p),
            _ => None,
        }
    }
}

/// A boundary point, stored as finite data that determines it.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryProxy {
    Tree(TreeRay),
    Ideal(Ideal),
    /// Unit direction given by its angle.
    Direction(f64),
    /// Ray in the product: the tree ray is followed at speed `cos angle`
    /// and the line at speed `sin angle`, `angle ∈ [-π/2, π/2]`.
    TreeLine {
        ray: TreeRay,
        angle: f64,
    },
}

impl BoundaryProxy {
    pub fn tree_ray(&self) -> Option<&TreeRay> {
        match self {
            BoundaryProxy::Tree(r) | BoundaryProxy::TreeLine { ray: r, .. } => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SegShape {
    Tree(TreePath),
    Hyperbolic(HypSeg),
    Euclidean(FlatSeg),
    TreeLine(ProductSeg),
}

/// Unit-speed geodesic segment from `a` to `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicSeg {
    pub a: Point,
    pub b: Point,
    pub length: f64,
    pub shape: SegShape,
}

impl GeodesicSeg {
    pub fn eval(&self, t: f64) -> Point {
        match &self.shape {
            SegShape::Tree(p) => Point::Tree(p.eval(t)),
            SegShape::Hyperbolic(s) => Point::Hyperbolic(s.eval(t)),
            SegShape::Euclidean(s) => Point::Euclidean(s.eval(t)),
            SegShape::TreeLine(s) => {
                let (p, r) = s.eval(t);
                Point::TreeLine(p, r)
            }
        }
    }

    /// Parameter of the closest point of the segment to `x`.
    pub fn project_param(&self, x: &Point) -> f64 {
        match (&self.shape, x) {
            (SegShape::Tree(p), Point::Tree(x)) => p.project_param(x),
            (SegShape::Hyperbolic(s), Point::Hyperbolic(x)) => s.project_param(x),
            (SegShape::Euclidean(s), Point::Euclidean(x)) => s.project_param(x),
            (SegShape::TreeLine(s), Point::TreeLine(p, r)) => s.project_param(&(p.clone(), *r)),
            _ => panic!("point does not belong to the segment's space"),
        }
    }

    pub fn project(&self, x: &Point) -> (Point, f64) {
        let t = self.project_param(x);
        (self.eval(t), t)
    }

    pub fn reversed(&self) -> GeodesicSeg {
        geodesic_unchecked(&self.b, &self.a)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpace {
    pub kind: SpaceKind,
    pub basepoint: Point,
}

fn geodesic_unchecked(x: &Point, y: &Point) -> GeodesicSeg {
    let shape = match (x, y) {
        (Point::Tree(p), Point::Tree(q)) => SegShape::Tree(TreePath::between(p, q)),
        (Point::Hyperbolic(p), Point::Hyperbolic(q)) => SegShape::Hyperbolic(HypSeg::between(p, q)),
        (Point::Euclidean(p), Point::Euclidean(q)) => SegShape::Euclidean(FlatSeg::between(p, q)),
        (Point::TreeLine(p, r), Point::TreeLine(q, s)) => {
            SegShape::TreeLine(ProductSeg::between(&(p.clone(), *r), &(q.clone(), *s)))
        }
        _ => panic!("points from different spaces"),
    };
    let length = match &shape {
        SegShape::Tree(p) => p.length,
        SegShape::Hyperbolic(s) => s.length,
        SegShape::Euclidean(s) => s.length,
        SegShape::TreeLine(s) => s.length,
    };
    GeodesicSeg {
        a: x.clone(),
        b: y.clone(),
        length,
        shape,
    }
}

impl ModelSpace {
    pub fn new(kind: SpaceKind) -> ModelSpace {
        let basepoint = match kind {
            SpaceKind::RegularTree { .. } => Point::Tree(TreePoint::vertex(Word::identity())),
            SpaceKind::HyperbolicPlane => Point::Hyperbolic(Uhp::I),
            SpaceKind::EuclideanPlane => Point::Euclidean([0.0, 0.0]),
            SpaceKind::TreeTimesLine { .. } => {
                Point::TreeLine(TreePoint::vertex(Word::identity()), 0.0)
            }
        };
        ModelSpace { kind, basepoint }
    }

    pub fn tree(valence: u8) -> ModelSpace {
        ModelSpace::new(SpaceKind::RegularTree { valence })
    }

    pub fn hyperbolic() -> ModelSpace {
        ModelSpace::new(SpaceKind::HyperbolicPlane)
    }

    pub fn euclidean() -> ModelSpace {
        ModelSpace::new(SpaceKind::EuclideanPlane)
    }

    pub fn tree_times_line(valence: u8) -> ModelSpace {
        ModelSpace::new(SpaceKind::TreeTimesLine { valence })
    }

    pub fn valence(&self) -> Option<u8> {
        match self.kind {
            SpaceKind::RegularTree { valence } | SpaceKind::TreeTimesLine { valence } => {
                Some(valence)
            }
            _ => None,
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        let ok = match (self.kind, x) {
            (SpaceKind::RegularTree { valence }, Point::Tree(p)) => p.is_valid(valence),
            (SpaceKind::HyperbolicPlane, Point::Hyperbolic(z)) => {
                z.im > 0.0 && z.im.is_finite() && z.re.is_finite()
            }
            (SpaceKind::EuclideanPlane, Point::Euclidean(v)) => {
                v[0].is_finite() && v[1].is_finite()
            }
            (SpaceKind::TreeTimesLine { valence }, Point::TreeLine(p, r)) => {
                p.is_valid(valence) && r.is_finite()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            domain(format!("{x:?} is not a valid point of {:?}", self.kind))
        }
    }

    pub fn check_boundary(&self, xi: &BoundaryProxy) -> Result<()> {
        let ok = match (self.kind, xi) {
            (SpaceKind::RegularTree { valence }, BoundaryProxy::Tree(r)) => r.valence() == valence,
            (SpaceKind::HyperbolicPlane, BoundaryProxy::Ideal(x)) => x.is_valid(),
            (SpaceKind::EuclideanPlane, BoundaryProxy::Direction(a)) => a.is_finite(),
            (SpaceKind::TreeTimesLine { valence }, BoundaryProxy::TreeLine { ray, angle }) => {
                ray.valence() == valence && angle.abs() <= std::f64::consts::FRAC_PI_2
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            domain(format!("{xi:?} is not a boundary point of {:?}", self.kind))
        }
    }

    /// Validated distance.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.d(x, y))
    }

    /// Distance without validation; points must belong to this space.
    pub fn d(&self, x: &Point, y: &Point) -> f64 {
        match (x, y) {
            (Point::Tree(p), Point::Tree(q)) => tree::distance(p, q),
            (Point::Hyperbolic(p), Point::Hyperbolic(q)) => hyperbolic::distance(p, q),
            (Point::Euclidean(p), Point::Euclidean(q)) => euclidean::distance(p, q),
            (Point::TreeLine(p, r), Point::TreeLine(q, s)) => tree::distance(p, q).hypot(r - s),
            _ => panic!("points from different spaces"),
        }
    }

    pub fn geodesic(&self, x: &Point, y: &Point) -> Result<GeodesicSeg> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(geodesic_unchecked(x, y))
    }

    pub fn seg(&self, x: &Point, y: &Point) -> GeodesicSeg {
        geodesic_unchecked(x, y)
    }

    pub fn project(&self, g: &GeodesicSeg, x: &Point) -> (Point, f64) {
        g.project(x)
    }

    pub fn midpoint(&self, x: &Point, y: &Point) -> Point {
        let g = geodesic_unchecked(x, y);
        g.eval(0.5 * g.length)
    }

    /// Busemann function of `xi` normalized to vanish at `base`.
    pub fn busemann(&self, xi: &BoundaryProxy, base: &Point, z: &Point) -> f64 {
        match (xi, base, z) {
            (BoundaryProxy::Tree(r), Point::Tree(b), Point::Tree(z)) => r.busemann(b, z),
            (BoundaryProxy::Ideal(x), Point::Hyperbolic(b), Point::Hyperbolic(z)) => {
                hyperbolic::busemann(x, b, z)
            }
            (BoundaryProxy::Direction(a), Point::Euclidean(b), Point::Euclidean(z)) => {
                -euclidean::dot(&euclidean::unit(*a), &euclidean::sub(z, b))
            }
            (
                BoundaryProxy::TreeLine { ray, angle },
                Point::TreeLine(b, br),
                Point::TreeLine(z, zr),
            ) => {
                let (s, c) = angle.sin_cos();
                let bt = if c == 0.0 {
                    0.0
                } else {
                    c * ray.busemann(b, z)
                };
                bt - s * (zr - br)
            }
            _ => panic!("boundary point and points from different spaces"),
        }
    }

    pub fn gromov_product(&self, x: &Point, y: &Point, o: &Point) -> f64 {
        let v = 0.5 * (self.d(x, o) + self.d(y, o) - self.d(x, y));
        v.max(0.0)
    }

    /// Gromov product of two boundary points; `+∞` iff they coincide.
    /// Tree rays are compared to `BOUNDARY_DEPTH` letters.
    pub fn gromov_product_boundary(&self, x: &BoundaryProxy, y: &BoundaryProxy, o: &Point) -> f64 {
        self.gromov_product_boundary_at(x, y, o, BOUNDARY_DEPTH)
    }

    pub fn gromov_product_boundary_at(
        &self,
        x: &BoundaryProxy,
        y: &BoundaryProxy,
        o: &Point,
        depth: usize,
    ) -> f64 {
        match (x, y, o) {
            (BoundaryProxy::Tree(a), BoundaryProxy::Tree(b), Point::Tree(o)) => {
                tree_boundary_product(a, b, o, depth)
            }
            (BoundaryProxy::Ideal(a), BoundaryProxy::Ideal(b), Point::Hyperbolic(o)) => {
                hyperbolic::gromov_ideal(o, a, b)
            }
            (BoundaryProxy::Direction(a), BoundaryProxy::Direction(b), Point::Euclidean(_)) => {
                let diff = (a - b).rem_euclid(std::f64::consts::TAU);
                if (diff - std::f64::consts::PI).abs() < 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            (
                BoundaryProxy::TreeLine { ray: ra, angle: ta },
                BoundaryProxy::TreeLine { ray: rb, angle: tb },
                Point::TreeLine(o, _),
            ) => {
                if (ta + tb).abs() > 1e-12 {
                    return f64::INFINITY;
                }
                let c = ta.cos();
                if c.abs() < 1e-15 {
                    return 0.0;
                }
                c * tree_boundary_product(ra, rb, o, depth)
            }
            _ => panic!("boundary points from different spaces"),
        }
    }

    /// `(m | x)_o = ½ (d(o, m) - b_x(m))` with `b_x` normalized at `o`.
    pub fn mixed_gromov_product(&self, m: &Point, x: &BoundaryProxy, o: &Point) -> f64 {
        0.5 * (self.d(o, m) - self.busemann(x, o, m))
    }

    /// Point at distance `r` from the basepoint on the ray towards `xi`
    /// (for tree rays, from the identity vertex along the ray).
    pub fn approach(&self, xi: &BoundaryProxy, r: f64) -> Point {
        match (xi, &self.basepoint) {
            (BoundaryProxy::Tree(ray), _) => Point::Tree(point_on_ray(ray, r)),
            (BoundaryProxy::Ideal(x), Point::Hyperbolic(o)) => {
                Point::Hyperbolic(hyperbolic::toward_ideal(o, x, r))
            }
            (BoundaryProxy::Direction(a), Point::Euclidean(o)) => {
                let u = euclidean::unit(*a);
                Point::Euclidean([o[0] + r * u[0], o[1] + r * u[1]])
            }
            (BoundaryProxy::TreeLine { ray, angle }, Point::TreeLine(_, o)) => {
                let (s, c) = angle.sin_cos();
                Point::TreeLine(point_on_ray(ray, c.max(0.0) * r), o + s * r)
            }
            _ => panic!("boundary point does not match the basepoint"),
        }
    }

    /// Random point at distance at most `radius` from `center`.
    pub fn random_point<R: Rng + ?Sized>(&self, center: &Point, radius: f64, rng: &mut R) -> Point {
        let r = radius * rng.gen::<f64>();
        self.random_on_sphere(center, r, rng)
    }

    /// Random point at distance `r` from `center` (for trees, from the
    /// vertex nearest to `center`).
    pub fn random_on_sphere<R: Rng + ?Sized>(&self, center: &Point, r: f64, rng: &mut R) -> Point {
        let phi = std::f64::consts::TAU * rng.gen::<f64>();
        match (self.kind, center) {
            (SpaceKind::RegularTree { valence }, Point::Tree(c)) => {
                Point::Tree(random_tree_point(valence, c, r, rng))
            }
            (SpaceKind::HyperbolicPlane, Point::Hyperbolic(c)) => {
                Point::Hyperbolic(hyperbolic::exp_at(c, r, phi))
            }
            (SpaceKind::EuclideanPlane, Point::Euclidean(c)) => {
                let u = euclidean::unit(phi);
                Point::Euclidean([c[0] + r * u[0], c[1] + r * u[1]])
            }
            (SpaceKind::TreeTimesLine { valence }, Point::TreeLine(c, s)) => {
                let (sn, cs) = phi.sin_cos();
                let p = random_tree_point(valence, c, r * cs.abs(), rng);
                Point::TreeLine(p, s + r * sn)
            }
            _ => panic!("center does not belong to the space"),
        }
    }

    /// Random boundary point (for tree rays, a seeded random ray).
    pub fn random_boundary<R: Rng + ?Sized>(&self, rng: &mut R) -> BoundaryProxy {
        match self.kind {
            SpaceKind::RegularTree { valence } => {
                BoundaryProxy::Tree(TreeRay::random_tail(valence, Word::identity(), rng.gen()))
            }
            SpaceKind::HyperbolicPlane => {
                let phi = std::f64::consts::TAU * rng.gen::<f64>();
                let o = match &self.basepoint {
                    Point::Hyperbolic(o) => *o,
                    _ => Uhp::I,
                };
                BoundaryProxy::Ideal(hyperbolic::ray_endpoint(
                    &o,
                    &hyperbolic::exp_at(&o, 1.0, phi),
                ))
            }
            SpaceKind::EuclideanPlane => {
                BoundaryProxy::Direction(std::f64::consts::TAU * rng.gen::<f64>())
            }
            SpaceKind::TreeTimesLine { valence } => BoundaryProxy::TreeLine {
                ray: TreeRay::random_tail(valence, Word::identity(), rng.gen()),
                angle: std::f64::consts::PI * (rng.gen::<f64>() - 0.5),
            },
        }
    }

    /// Distance from the basepoint.
    pub fn norm(&self, x: &Point) -> f64 {
        self.d(&self.basepoint, x)
    }
}

fn tree_boundary_product(a: &TreeRay, b: &TreeRay, o: &TreePoint, depth: usize) -> f64 {
    let k = a.lcp_ray(b, depth);
    if k >= depth {
        return f64::INFINITY;
    }
    let branch = TreePoint::vertex(a.vertex_at(k));
    let v = -0.5 * (a.busemann(o, &branch) + b.busemann(o, &branch));
    v.max(0.0)
}

/// Point at distance `r ≥ 0` from the identity along a ray.
pub fn point_on_ray(ray: &TreeRay, r: f64) -> TreePoint {
    let whole = r.floor() as usize;
    let frac = r - whole as f64;
    let mut letters = ray.letters();
    let v = Word::from_letters(letters.by_ref().take(whole));
    if frac > 0.0 {
        let l = letters.next().expect("rays are infinite");
        TreePoint::along(&v, l, frac)
    } else {
        TreePoint::vertex(v)
    }
}

fn random_tree_point<R: Rng + ?Sized>(
    valence: u8,
    c: &TreePoint,
    r: f64,
    rng: &mut R,
) -> TreePoint {
    // start from the nearer endpoint of the centre's edge, then branch out
    let start = match c.toward {
        None => c.vertex.clone(),
        Some(l) if c.offset > 0.5 => c.vertex.mul(&Word::from_letters([l])),
        Some(_) => c.vertex.clone(),
    };
    tree::random_branch(valence, &start, &[], r, rng)
        .unwrap_or_else(|| TreePoint::vertex(start.clone()))
}
