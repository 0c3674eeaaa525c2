//! Upper half-plane model: points, Möbius maps, geodesic frames and
//! boundary kernels.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Uhp {
    pub re: f64,
    pub im: f64,
}

impl Uhp {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return domain(format!("({re}, {im}) is not in the upper half-plane"));
        }
        Ok(Uhp { re, im })
    }

    pub const I: Uhp = Uhp { re: 0.0, im: 1.0 };
}

/// A point of `ℝ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Ideal {
    Real(f64),
    Infinity,
}

impl Ideal {
    pub fn is_valid(&self) -> bool {
        match self {
            Ideal::Real(x) => x.is_finite(),
            Ideal::Infinity => true,
        }
    }
}

pub fn distance(z: &Uhp, w: &Uhp) -> f64 {
    let dx = z.re - w.re;
    let dy = z.im - w.im;
    let chord = (dx * dx + dy * dy).sqrt();
    2.0 * (chord / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// A real 2×2 matrix acting by Möbius transformations. Frames keep det 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sl2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse up to the determinant, which Möbius action ignores.
    pub fn adjugate(&self) -> Sl2 {
        Sl2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn apply(&self, z: &Uhp) -> Uhp {
        let nr = self.a * z.re + self.b;
        let dr = self.c * z.re + self.d;
        let di = self.c * z.im;
        let den = dr * dr + di * di;
        Uhp {
            re: (nr * dr + self.a * self.c * z.im * z.im) / den,
            im: self.det() * z.im / den,
        }
    }

    pub fn apply_ideal(&self, x: &Ideal) -> Ideal {
        match *x {
            Ideal::Infinity => {
                if self.c == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Real(self.a / self.c)
                }
            }
            Ideal::Real(t) => {
                let den = self.c * t + self.d;
                if den == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Real((self.a * t + self.b) / den)
                }
            }
        }
    }

    /// The affine isometry taking `i` to `o`.
    pub fn frame_at(o: &Uhp) -> Sl2 {
        let s = o.im.sqrt();
        Sl2 {
            a: s,
            b: o.re / s,
            c: 0.0,
            d: 1.0 / s,
        }
    }

    /// Elliptic rotation about `i` by angle `alpha` (disk-model angle).
    pub fn rotation(alpha: f64) -> Sl2 {
        let (s, c) = (0.5 * alpha).sin_cos();
        Sl2 {
            a: c,
            b: s,
            c: -s,
            d: c,
        }
    }
}

/// Disk coordinate of a half-plane point, Cayley map `(z - i)/(z + i)`.
fn to_disk(z: &Uhp) -> (f64, f64) {
    let (nr, ni) = (z.re, z.im - 1.0);
    let (dr, di) = (z.re, z.im + 1.0);
    let den = dr * dr + di * di;
    ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
}

/// Inverse Cayley map `i (1 + w)/(1 - w)`.
fn from_disk(w: (f64, f64)) -> Uhp {
    let (nr, ni) = (1.0 + w.0, w.1);
    let (dr, di) = (1.0 - w.0, -w.1);
    let den = dr * dr + di * di;
    let qr = (nr * dr + ni * di) / den;
    let qi = (ni * dr - nr * di) / den;
    Uhp { re: -qi, im: qr }
}

/// Point at distance `r` from `i` in disk direction `phi`.
pub fn exp_at_i(r: f64, phi: f64) -> Uhp {
    let t = (0.5 * r).tanh();
    from_disk((t * phi.cos(), t * phi.sin()))
}

/// Point at distance `r` from `o` in disk direction `phi`.
pub fn exp_at(o: &Uhp, r: f64, phi: f64) -> Uhp {
    Sl2::frame_at(o).apply(&exp_at_i(r, phi))
}

/// Poisson kernel `Im z / |z - ξ|²` (or `Im z` at infinity).
pub fn poisson(z: &Uhp, xi: &Ideal) -> f64 {
    match *xi {
        Ideal::Infinity => z.im,
        Ideal::Real(x) => {
            let dx = z.re - x;
            z.im / (dx * dx + z.im * z.im)
        }
    }
}

pub fn busemann(xi: &Ideal, base: &Uhp, z: &Uhp) -> f64 {
    poisson(base, xi).ln() - poisson(z, xi).ln()
}

/// Ideal point expressed in the frame where `o` sits at `i`.
pub fn ideal_in_frame(o: &Uhp, xi: &Ideal) -> Ideal {
    match *xi {
        Ideal::Infinity => Ideal::Infinity,
        Ideal::Real(x) => Ideal::Real((x - o.re) / o.im),
    }
}

/// Closed-form Gromov product of two ideal points seen from `o`.
pub fn gromov_ideal(o: &Uhp, x: &Ideal, y: &Ideal) -> f64 {
    let (x, y) = (ideal_in_frame(o, x), ideal_in_frame(o, y));
    match (x, y) {
        (Ideal::Infinity, Ideal::Infinity) => f64::INFINITY,
        (Ideal::Real(a), Ideal::Infinity) | (Ideal::Infinity, Ideal::Real(a)) => a.hypot(1.0).ln(),
        (Ideal::Real(a), Ideal::Real(b)) => {
            if a == b {
                f64::INFINITY
            } else {
                a.hypot(1.0).ln() + b.hypot(1.0).ln() - (a - b).abs().ln()
            }
        }
    }
}

/// Ideal endpoint of the ray from `o` through `p`.
pub fn ray_endpoint(o: &Uhp, p: &Uhp) -> Ideal {
    let frame = Sl2::frame_at(o);
    let q = frame.adjugate().apply(p);
    let (wr, wi) = to_disk(&q);
    let n = wr.hypot(wi);
    if n == 0.0 {
        return Ideal::Infinity;
    }
    let (ur, ui) = (wr / n, wi / n);
    // i (1 + u)/(1 - u) is real for |u| = 1
    let den = (1.0 - ur) * (1.0 - ur) + ui * ui;
    if den < 1e-300 {
        return frame.apply_ideal(&Ideal::Infinity);
    }
    let x = -2.0 * ui / den;
    frame.apply_ideal(&Ideal::Real(x))
}

/// Point at distance `r` from `o` on the ray towards `xi`.
pub fn toward_ideal(o: &Uhp, xi: &Ideal, r: f64) -> Uhp {
    let frame = Sl2::frame_at(o);
    let local = ideal_in_frame(o, xi);
    let phi = match local {
        Ideal::Infinity => 0.0,
        Ideal::Real(x) => {
            // disk image of x is (x - i)/(x + i)
            let den = x * x + 1.0;
            let (ur, ui) = ((x * x - 1.0) / den, -2.0 * x / den);
            ui.atan2(ur)
        }
    };
    frame.apply(&exp_at_i(r, phi))
}

/// A unit-speed hyperbolic segment, stored through a frame that sends the
/// segment onto the imaginary axis with `a ↦ i` and `b ↦ i e^len`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypSeg {
    pub a: Uhp,
    pub b: Uhp,
    pub length: f64,
    frame: Sl2,
    frame_inv: Sl2,
}

impl HypSeg {
    pub fn between(a: &Uhp, b: &Uhp) -> HypSeg {
        let length = distance(a, b);
        let to_i = Sl2::frame_at(a).adjugate();
        let frame = if length == 0.0 {
            to_i
        } else {
            let bp = to_i.apply(b);
            let (wr, wi) = to_disk(&bp);
            let phi = wi.atan2(wr);
            Sl2::rotation(-phi).mul(&to_i)
        };
        HypSeg {
            a: *a,
            b: *b,
            length,
            frame,
            frame_inv: frame.adjugate(),
        }
    }

    pub fn eval(&self, t: f64) -> Uhp {
        if t <= 0.0 {
            return self.a;
        }
        if t >= self.length {
            return self.b;
        }
        self.frame_inv.apply(&Uhp {
            re: 0.0,
            im: t.exp(),
        })
    }

    /// Unclamped coordinate of the foot on the full geodesic line.
    pub fn line_param(&self, x: &Uhp) -> f64 {
        let w = self.frame.apply(x);
        w.re.hypot(w.im).ln()
    }

    pub fn project_param(&self, x: &Uhp) -> f64 {
        self.line_param(x).clamp(0.0, self.length)
    }

    /// Point at signed distance `r` from `eval(u)` along the perpendicular.
    pub fn fiber_point(&self, u: f64, r: f64) -> Uhp {
        let s = u.exp();
        self.frame_inv.apply(&Uhp {
            re: s * r.tanh(),
            im: s / r.cosh(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let d = distance(&Uhp::I, &Uhp { re: 0.0, im: 2.0 });
        assert!((d - 2f64.ln()).abs() < 1e-15);
        assert!((d.cosh() - 1.25).abs() < 1e-14);
    }

    #[test]
    fn rotation_sign() {
        // rotating i·e maps onto the positive imaginary axis direction in the frame
        let a = Uhp { re: 0.3, im: 0.7 };
        let b = Uhp { re: -1.2, im: 2.5 };
        let seg = HypSeg::between(&a, &b);
        let fa = seg.frame.apply(&a);
        let fb = seg.frame.apply(&b);
        assert!(fa.re.abs() < 1e-12 && (fa.im - 1.0).abs() < 1e-12);
        assert!(fb.re.abs() < 1e-9 && (fb.im - seg.length.exp()).abs() < 1e-9);
    }

    #[test]
    fn vertical_geodesic_midpoint() {
        let seg = HypSeg::between(&Uhp::I, &Uhp { re: 0.0, im: 4.0 });
        let m = seg.eval(2f64.ln());
        assert!(m.re.abs() < 1e-12 && (m.im - 2.0).abs() < 1e-12);
    }

    #[test]
    fn busemann_at_infinity() {
        let b = busemann(&Ideal::Infinity, &Uhp::I, &Uhp { re: 0.0, im: 2.0 });
        assert!((b + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn ray_endpoint_roundtrip() {
        let o = Uhp { re: 0.4, im: 1.3 };
        for &x in &[-3.0, -0.2, 0.0, 0.9, 7.5] {
            let p = toward_ideal(&o, &Ideal::Real(x), 3.0);
            assert!((distance(&o, &p) - 3.0).abs() < 1e-9);
            match ray_endpoint(&o, &p) {
                Ideal::Real(y) => assert!((x - y).abs() < 1e-9, "{x} vs {y}"),
                Ideal::Infinity => panic!("expected finite endpoint"),
            }
        }
        let p = toward_ideal(&o, &Ideal::Infinity, 2.0);
        assert!((p.re - o.re).abs() < 1e-12 && p.im > o.im);
    }

    #[test]
    fn gromov_ideal_opposite_is_zero() {
        assert!(gromov_ideal(&Uhp::I, &Ideal::Real(0.0), &Ideal::Infinity).abs() < 1e-15);
        assert!(gromov_ideal(&Uhp::I, &Ideal::Real(-1.0), &Ideal::Real(1.0)).abs() < 1e-15);
        assert_eq!(
            gromov_ideal(&Uhp::I, &Ideal::Real(2.0), &Ideal::Real(2.0)),
            f64::INFINITY
        );
    }
}
