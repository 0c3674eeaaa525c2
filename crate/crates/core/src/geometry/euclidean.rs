//! The flat plane.

pub type Vec2 = [f64; 2];

#[inline]
pub fn sub(a: &Vec2, b: &Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn dot(a: &Vec2, b: &Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn distance(a: &Vec2, b: &Vec2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn unit(angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    [c, s]
}

pub fn rotate(angle: f64, v: &Vec2) -> Vec2 {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatSeg {
    pub a: Vec2,
    pub b: Vec2,
    pub length: f64,
    /// Unit direction, or zero for a degenerate segment.
    pub dir: Vec2,
}

impl FlatSeg {
    pub fn between(a: &Vec2, b: &Vec2) -> FlatSeg {
        let length = distance(a, b);
        let dir = if length > 0.0 {
            let d = sub(b, a);
            [d[0] / length, d[1] / length]
        } else {
            [0.0, 0.0]
        };
        FlatSeg {
            a: *a,
            b: *b,
            length,
            dir,
        }
    }

    pub fn eval(&self, t: f64) -> Vec2 {
        if t >= self.length {
            return self.b;
        }
        let t = t.max(0.0);
        [self.a[0] + t * self.dir[0], self.a[1] + t * self.dir[1]]
    }

    pub fn line_param(&self, x: &Vec2) -> f64 {
        dot(&sub(x, &self.a), &self.dir)
    }

    pub fn project_param(&self, x: &Vec2) -> f64 {
        self.line_param(x).clamp(0.0, self.length)
    }

    /// Point at signed distance `r` from `eval(u)` along the left normal.
    pub fn fiber_point(&self, u: f64, r: f64) -> Vec2 {
        [
            self.a[0] + u * self.dir[0] - r * self.dir[1],
            self.a[1] + u * self.dir[1] + r * self.dir[0],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagoras() {
        assert_eq!(distance(&[0.0, 0.0], &[3.0, 4.0]), 5.0);
    }

    #[test]
    fn orthogonal_foot() {
        let s = FlatSeg::between(&[0.0, -1.0], &[0.0, 1.0]);
        let t = s.project_param(&[1.0, 0.0]);
        assert!((t - 1.0).abs() < 1e-15);
        assert_eq!(s.eval(t), [0.0, 0.0]);
    }

    #[test]
    fn fiber_is_perpendicular() {
        let s = FlatSeg::between(&[1.0, 1.0], &[4.0, 5.0]);
        let p = s.fiber_point(2.0, 3.0);
        assert!((s.line_param(&p) - 2.0).abs() < 1e-12);
        assert!((distance(&p, &s.eval(2.0)) - 3.0).abs() < 1e-12);
    }
}
