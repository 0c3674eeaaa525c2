//! Group elements acting on the model spaces.

use std::fmt;

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::geometry::euclidean::{self, Vec2};
use crate::geometry::hyperbolic::{Ideal, Sl2, Uhp};
use crate::geometry::word::{alphabet, inv, Word};
use crate::geometry::{BoundaryProxy, ModelSpace, Point, SpaceKind};
use crate::harness::defaults::RENORMALIZE_EVERY;

/// A matrix of `SL(2, ℝ)` stored as `e^s · N` with `max |N_ij| = 1`, so long
/// products neither overflow nor underflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    n: [f64; 4],
    log_scale: f64,
    since_renorm: u32,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        n: [1.0, 0.0, 0.0, 1.0],
        log_scale: 0.0,
        since_renorm: 0,
    };

    /// Matrix `[[a, b], [c, d]]` with positive determinant, rescaled to det 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Mobius> {
        let det = a * d - b * c;
        if !(det > 0.0) || ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return domain(format!(
                "[[{a}, {b}], [{c}, {d}]] has non-positive determinant"
            ));
        }
        Ok(Mobius::from_parts([a, b, c, d], -0.5 * det.ln()))
    }

    fn from_parts(n: [f64; 4], log_scale: f64) -> Mobius {
        let m = n.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Mobius {
            n: [n[0] / m, n[1] / m, n[2] / m, n[3] / m],
            log_scale: log_scale + m.ln(),
            since_renorm: 0,
        }
    }

    /// Normalized entries; the matrix is `e^{log_scale}` times these.
    pub fn normalized(&self) -> [f64; 4] {
        self.n
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Entries of the det-1 matrix (may overflow for long products).
    pub fn entries(&self) -> [f64; 4] {
        let e = self.log_scale.exp();
        [self.n[0] * e, self.n[1] * e, self.n[2] * e, self.n[3] * e]
    }

    fn sl2(&self) -> Sl2 {
        Sl2 {
            a: self.n[0],
            b: self.n[1],
            c: self.n[2],
            d: self.n[3],
        }
    }

    pub fn compose(&self, o: &Mobius) -> Mobius {
        let p = self.sl2().mul(&o.sl2());
        let mut out = Mobius::from_parts([p.a, p.b, p.c, p.d], self.log_scale + o.log_scale);
        out.since_renorm = self.since_renorm.max(o.since_renorm) + 1;
        if out.since_renorm as usize >= RENORMALIZE_EVERY {
            out.renormalize();
        }
        out
    }

    /// Resets the scale so that the determinant is exactly one again. Far
    /// from the identity the normalized matrix is nearly rank one and its
    /// computed determinant is rounding noise, so only a small correction
    /// of a well-conditioned matrix is applied.
    pub fn renormalize(&mut self) {
        let det = self.n[0] * self.n[3] - self.n[1] * self.n[2];
        if det > 1e-6 {
            let s = -0.5 * det.ln();
            if (s - self.log_scale).abs() < 1e-6 {
                self.log_scale = s;
            }
        }
        self.since_renorm = 0;
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            n: [self.n[3], -self.n[1], -self.n[2], self.n[0]],
            log_scale: self.log_scale,
            since_renorm: self.since_renorm,
        }
    }

    /// `ln |tr|`.
    pub fn log_abs_trace(&self) -> f64 {
        self.log_scale + (self.n[0] + self.n[3]).abs().ln()
    }

    pub fn trace(&self) -> f64 {
        (self.n[0] + self.n[3]) * self.log_scale.exp()
    }

    pub fn apply(&self, z: &Uhp) -> Uhp {
        let [a, b, c, d] = self.n;
        let nr = a * z.re + b;
        let dr = c * z.re + d;
        let di = c * z.im;
        let den = dr * dr + di * di;
        Uhp {
            re: (nr * dr + a * c * z.im * z.im) / den,
            im: z.im * (-2.0 * self.log_scale).exp() / den,
        }
    }

    pub fn apply_ideal(&self, x: &Ideal) -> Ideal {
        self.sl2().apply_ideal(x)
    }

    /// Conjugate by the affine frame sending `i` to `o`: `F⁻¹ M F`.
    pub fn at_basepoint(&self, o: &Uhp) -> Mobius {
        if *o == Uhp::I {
            return *self;
        }
        let f = Sl2::frame_at(o);
        let p = f.adjugate().mul(&self.sl2()).mul(&f);
        Mobius::from_parts([p.a, p.b, p.c, p.d], self.log_scale)
    }

    /// `d(i, M i)` from `cosh d = ‖M‖²/2`, evaluated in logs.
    pub fn displacement_at_i(&self) -> f64 {
        let norm2: f64 = self.n.iter().map(|x| x * x).sum();
        let lx = 2.0 * self.log_scale + (0.5 * norm2).ln();
        if lx > 20.0 {
            lx + std::f64::consts::LN_2
        } else {
            lx.exp().max(1.0).acosh()
        }
    }

    /// `b_ξ(M i)` normalized at `i`.
    pub fn busemann_image_at_i(&self, xi: &Ideal) -> f64 {
        let [p, q, r, t] = self.n;
        let s2 = 2.0 * self.log_scale;
        match *xi {
            Ideal::Infinity => s2 + (r * r + t * t).ln(),
            Ideal::Real(x) => {
                let u = q - x * t;
                let v = p - x * r;
                s2 + (u * u + v * v).ln() - (1.0 + x * x).ln()
            }
        }
    }

    /// `2 acosh(|tr|/2)` when the trace exceeds 2.
    pub fn translation_length(&self) -> f64 {
        let lt = self.log_abs_trace();
        if lt > 20.0 {
            2.0 * lt
        } else {
            let tr = lt.exp();
            if tr <= 2.0 {
                0.0
            } else {
                2.0 * (0.5 * tr).acosh()
            }
        }
    }
}

/// Rigid motion `x ↦ R_θ x + v` of the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rigid {
    pub angle: f64,
    pub shift: Vec2,
}

impl Rigid {
    pub fn compose(&self, o: &Rigid) -> Rigid {
        let r = euclidean::rotate(self.angle, &o.shift);
        Rigid {
            angle: wrap_angle(self.angle + o.angle),
            shift: [r[0] + self.shift[0], r[1] + self.shift[1]],
        }
    }

    pub fn inverse(&self) -> Rigid {
        let r = euclidean::rotate(-self.angle, &self.shift);
        Rigid {
            angle: wrap_angle(-self.angle),
            shift: [-r[0], -r[1]],
        }
    }

    pub fn apply(&self, x: &Vec2) -> Vec2 {
        let r = euclidean::rotate(self.angle, x);
        [r[0] + self.shift[0], r[1] + self.shift[1]]
    }

    pub fn is_translation(&self) -> bool {
        wrap_angle(self.angle).abs() < 1e-12
    }
}

/// Angle reduced to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Isometry {
    Tree(Word),
    Mobius(Mobius),
    Rigid(Rigid),
    /// `(x, r) ↦ (w·x, r + shift)`.
    TreeShift(Word, f64),
}

fn mismatch() -> Error {
    Error::Domain("isometries from different spaces".into())
}

impl Isometry {
    pub fn identity(kind: SpaceKind) -> Isometry {
        match kind {
            SpaceKind::RegularTree { .. } => Isometry::Tree(Word::identity()),
            SpaceKind::HyperbolicPlane => Isometry::Mobius(Mobius::IDENTITY),
            SpaceKind::EuclideanPlane => Isometry::Rigid(Rigid {
                angle: 0.0,
                shift: [0.0, 0.0],
            }),
            SpaceKind::TreeTimesLine { .. } => Isometry::TreeShift(Word::identity(), 0.0),
        }
    }

    pub fn belongs_to(&self, kind: SpaceKind) -> bool {
        match (self, kind) {
            (Isometry::Tree(w), SpaceKind::RegularTree { valence }) => w.in_alphabet(valence),
            (Isometry::Mobius(_), SpaceKind::HyperbolicPlane) => true,
            (Isometry::Rigid(_), SpaceKind::EuclideanPlane) => true,
            (Isometry::TreeShift(w, s), SpaceKind::TreeTimesLine { valence }) => {
                w.in_alphabet(valence) && s.is_finite()
            }
            _ => false,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        Ok(match (self, other) {
            (Isometry::Tree(a), Isometry::Tree(b)) => Isometry::Tree(a.mul(b)),
            (Isometry::Mobius(a), Isometry::Mobius(b)) => Isometry::Mobius(a.compose(b)),
            (Isometry::Rigid(a), Isometry::Rigid(b)) => Isometry::Rigid(a.compose(b)),
            (Isometry::TreeShift(a, s), Isometry::TreeShift(b, t)) => {
                Isometry::TreeShift(a.mul(b), s + t)
            }
            _ => return Err(mismatch()),
        })
    }

    /// `self ← self ∘ other`, reusing storage for words.
    pub fn then(&mut self, other: &Isometry) {
        match (self, other) {
            (Isometry::Tree(a), Isometry::Tree(b)) => a.mul_assign(b),
            (Isometry::TreeShift(a, s), Isometry::TreeShift(b, t)) => {
                a.mul_assign(b);
                *s += t;
            }
            (Isometry::Mobius(a), Isometry::Mobius(b)) => *a = a.compose(b),
            (Isometry::Rigid(a), Isometry::Rigid(b)) => *a = a.compose(b),
            _ => panic!("isometries from different spaces"),
        }
    }

    pub fn inverse(&self) -> Isometry {
        match self {
            Isometry::Tree(w) => Isometry::Tree(w.inverse()),
            Isometry::Mobius(m) => Isometry::Mobius(m.inverse()),
            Isometry::Rigid(r) => Isometry::Rigid(r.inverse()),
            Isometry::TreeShift(w, s) => Isometry::TreeShift(w.inverse(), -s),
        }
    }

    pub fn power(&self, k: usize) -> Isometry {
        let mut out = match self {
            Isometry::Tree(_) => Isometry::Tree(Word::identity()),
            Isometry::Mobius(_) => Isometry::Mobius(Mobius::IDENTITY),
            Isometry::Rigid(_) => Isometry::Rigid(Rigid {
                angle: 0.0,
                shift: [0.0, 0.0],
            }),
            Isometry::TreeShift(..) => Isometry::TreeShift(Word::identity(), 0.0),
        };
        for _ in 0..k {
            out.then(self);
        }
        out
    }

    pub fn act(&self, x: &Point) -> Result<Point> {
        Ok(match (self, x) {
            (Isometry::Tree(w), Point::Tree(p)) => Point::Tree(p.translate(w)),
            (Isometry::Mobius(m), Point::Hyperbolic(z)) => Point::Hyperbolic(m.apply(z)),
            (Isometry::Rigid(r), Point::Euclidean(v)) => Point::Euclidean(r.apply(v)),
            (Isometry::TreeShift(w, s), Point::TreeLine(p, r)) => {
                Point::TreeLine(p.translate(w), r + s)
            }
            _ => return Err(mismatch()),
        })
    }

    pub fn act_boundary(&self, xi: &BoundaryProxy) -> Result<BoundaryProxy> {
        Ok(match (self, xi) {
            (Isometry::Tree(w), BoundaryProxy::Tree(r)) => BoundaryProxy::Tree(r.translate(w)),
            (Isometry::Mobius(m), BoundaryProxy::Ideal(x)) => {
                BoundaryProxy::Ideal(m.apply_ideal(x))
            }
            (Isometry::Rigid(r), BoundaryProxy::Direction(a)) => {
                BoundaryProxy::Direction(wrap_angle(a + r.angle))
            }
            (Isometry::TreeShift(w, _), BoundaryProxy::TreeLine { ray, angle }) => {
                BoundaryProxy::TreeLine {
                    ray: ray.translate(w),
                    angle: *angle,
                }
            }
            _ => return Err(mismatch()),
        })
    }

    /// `d(g o, o)`; for matrices computed in logs so long products stay exact.
    pub fn displacement(&self, space: &ModelSpace) -> f64 {
        match (self, &space.basepoint) {
            (Isometry::Tree(w), Point::Tree(o)) if o.is_vertex() && o.vertex.is_empty() => {
                w.len() as f64
            }
            (Isometry::Mobius(m), Point::Hyperbolic(o)) => m.at_basepoint(o).displacement_at_i(),
            (Isometry::TreeShift(w, s), Point::TreeLine(o, r0))
                if o.is_vertex() && o.vertex.is_empty() && *r0 == 0.0 =>
            {
                (w.len() as f64).hypot(*s)
            }
            _ => {
                let o = &space.basepoint;
                space.d(&self.act(o).expect("matching space"), o)
            }
        }
    }

    /// Busemann cocycle `β(g, ξ) = b_ξ(g⁻¹ o)`, normalized at the basepoint.
    pub fn cocycle(&self, space: &ModelSpace, xi: &BoundaryProxy) -> f64 {
        let o = &space.basepoint;
        match (self, xi, o) {
            (Isometry::Mobius(m), BoundaryProxy::Ideal(x), Point::Hyperbolic(o)) => {
                let inv = m.inverse().at_basepoint(o);
                let local = crate::geometry::hyperbolic::ideal_in_frame(o, x);
                inv.busemann_image_at_i(&local)
            }
            _ => {
                let z = self.inverse().act(o).expect("matching space");
                space.busemann(xi, o, &z)
            }
        }
    }

    /// A random element of "size" up to `size`: a reduced word of length at
    /// most `size`, or a product of up to `size` random hyperbolic or rigid
    /// factors.
    pub fn random<R: Rng + ?Sized>(kind: SpaceKind, size: usize, rng: &mut R) -> Isometry {
        let k = rng.gen_range(0..=size);
        let word = |rng: &mut R, valence: u8| {
            let letters = alphabet(valence);
            let mut w = Word::identity();
            while w.len() < k {
                let l = letters[rng.gen_range(0..letters.len())];
                if w.last() != Some(inv(l)) {
                    w.push(l);
                }
            }
            w
        };
        match kind {
            SpaceKind::RegularTree { valence } => Isometry::Tree(word(rng, valence)),
            SpaceKind::HyperbolicPlane => {
                let mut g = Mobius::IDENTITY;
                for _ in 0..k.max(1) {
                    let t: f64 = rng.gen_range(0.0..3.0);
                    let r1 = Sl2::rotation(rng.gen_range(0.0..std::f64::consts::TAU));
                    let r2 = Sl2::rotation(rng.gen_range(0.0..std::f64::consts::TAU));
                    let e = (0.5 * t).exp();
                    let diag = Sl2 { a: e, b: 0.0, c: 0.0, d: 1.0 / e };
                    let m = r1.mul(&diag).mul(&r2);
                    g = g.compose(&Mobius::new(m.a, m.b, m.c, m.d).expect("det 1"));
                }
                Isometry::Mobius(g)
            }
            SpaceKind::EuclideanPlane => Isometry::Rigid(Rigid {
                angle: wrap_angle(rng.gen_range(0.0..std::f64::consts::TAU)),
                shift: [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)],
            }),
            SpaceKind::TreeTimesLine { valence } => {
                Isometry::TreeShift(word(rng, valence), rng.gen_range(-5.0..5.0))
            }
        }
    }

    /// Short textual form: a word, matrix entries, or a rigid motion.
    pub fn digest(&self) -> String {
        self.to_string()
    }

    pub fn word(&self) -> Option<&Word> {
        match self {
            Isometry::Tree(w) | Isometry::TreeShift(w, _) => Some(w),
            _ => None,
        }
    }

    /// Parses the text form used by configs: a word for trees, `a,b,c,d`
    /// for matrices, `θ,tx,ty` for rigid motions and `word;shift` for the
    /// product.
    pub fn parse(kind: SpaceKind, s: &str) -> Result<Isometry> {
        let nums = |t: &str| -> Result<Vec<f64>> {
            t.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Domain(format!("bad number {x:?} in {s:?}")))
                })
                .collect()
        };
        let g = match kind {
            SpaceKind::RegularTree { .. } => Isometry::Tree(Word::parse(s)?),
            SpaceKind::HyperbolicPlane => {
                let v = nums(s)?;
                if v.len() != 4 {
                    return domain(format!("matrix needs four entries, got {s:?}"));
                }
                Isometry::Mobius(Mobius::new(v[0], v[1], v[2], v[3])?)
            }
            SpaceKind::EuclideanPlane => {
                let v = nums(s)?;
                if v.len() != 3 {
                    return domain(format!("rigid motion needs angle,tx,ty, got {s:?}"));
                }
                Isometry::Rigid(Rigid {
                    angle: wrap_angle(v[0]),
                    shift: [v[1], v[2]],
                })
            }
            SpaceKind::TreeTimesLine { .. } => {
                let (w, sh) = s
                    .split_once(';')
                    .ok_or_else(|| Error::Domain(format!("expected word;shift, got {s:?}")))?;
                let shift = sh
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Domain(format!("bad shift in {s:?}")))?;
                Isometry::TreeShift(Word::parse(w.trim())?, shift)
            }
        };
        if !g.belongs_to(kind) {
            return domain(format!("{s:?} uses letters outside the space's alphabet"));
        }
        Ok(g)
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Isometry::Tree(w) => write!(f, "{w}"),
            Isometry::Mobius(m) => {
                // sign-normalized so that ±M print alike
                let n = m.normalized();
                let lead = n.iter().copied().find(|x| x.abs() > 1e-300).unwrap_or(1.0);
                let sg = lead.signum();
                write!(
                    f,
                    "e^{:.6}[{:.9},{:.9},{:.9},{:.9}]",
                    m.log_scale(),
                    sg * n[0],
                    sg * n[1],
                    sg * n[2],
                    sg * n[3]
                )
            }
            Isometry::Rigid(r) => write!(f, "({:.9},{:.9},{:.9})", r.angle, r.shift[0], r.shift[1]),
            Isometry::TreeShift(w, s) => write!(f, "{w};{s:.9}"),
        }
    }
}
