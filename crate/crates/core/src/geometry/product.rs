//! The ℓ² product of a regular tree with the real line.

use super::tree::{distance as tree_distance, TreePath, TreePoint};

#[derive(Clone, Debug, PartialEq)]
pub struct ProductSeg {
    pub path: TreePath,
    pub s0: f64,
    pub s1: f64,
    pub length: f64,
    /// Tree speed and line speed; `tree_rate² + line_rate² = 1`.
    pub tree_rate: f64,
    pub line_rate: f64,
}

pub fn distance(p: &(TreePoint, f64), q: &(TreePoint, f64)) -> f64 {
    tree_distance(&p.0, &q.0).hypot(p.1 - q.1)
}

impl ProductSeg {
    pub fn between(a: &(TreePoint, f64), b: &(TreePoint, f64)) -> ProductSeg {
        let path = TreePath::between(&a.0, &b.0);
        let dr = b.1 - a.1;
        let length = path.length.hypot(dr);
        let (tree_rate, line_rate) = if length > 0.0 {
            (path.length / length, dr / length)
        } else {
            (0.0, 0.0)
        };
        ProductSeg {
            path,
            s0: a.1,
            s1: b.1,
            length,
            tree_rate,
            line_rate,
        }
    }

    pub fn eval(&self, t: f64) -> (TreePoint, f64) {
        if t >= self.length {
            return (self.path.b.clone(), self.s1);
        }
        let t = t.max(0.0);
        (
            self.path.eval(self.tree_rate * t),
            self.s0 + self.line_rate * t,
        )
    }

    /// Closest-point parameter. The squared distance to `eval(t)` is
    /// `(h + |c t - u|)² + (m - e t)²`, a convex piecewise quadratic with a
    /// kink where the tree component passes the tree foot `u`.
    pub fn project_param(&self, x: &(TreePoint, f64)) -> f64 {
        if self.length == 0.0 {
            return 0.0;
        }
        let (c, e) = (self.tree_rate, self.line_rate);
        let u = self.path.project_param(&x.0);
        let h = tree_distance(&x.0, &self.path.eval(u));
        let m = x.1 - self.s0;
        let f = |t: f64| {
            let a = h + (c * t - u).abs();
            let b = m - e * t;
            a * a + b * b
        };
        let kink = if c > 0.0 {
            (u / c).min(self.length)
        } else {
            self.length
        };
        let mut cands = vec![
            (c * (h + u) + e * m).clamp(0.0, kink),
            (c * (u - h) + e * m).clamp(kink, self.length),
        ];
        if c == 0.0 {
            cands.push((e * m).clamp(0.0, self.length));
        }
        cands
            .into_iter()
            .min_by(|a, b| f(*a).total_cmp(&f(*b)))
            .expect("non-empty candidate list")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::word::Word;

    fn pt(s: &str, r: f64) -> (TreePoint, f64) {
        (TreePoint::vertex(Word::parse(s).unwrap()), r)
    }

    #[test]
    fn diagonal_length() {
        let s = ProductSeg::between(&pt("e", 0.0), &pt("aaa", 4.0));
        assert!((s.length - 5.0).abs() < 1e-15);
        let mid = s.eval(2.5);
        assert!((distance(&mid, &pt("e", 0.0)) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn projection_matches_scan() {
        let s = ProductSeg::between(&pt("ab", -1.0), &pt("aBB", 2.0));
        for x in [pt("b", 0.3), pt("abab", 5.0), pt("aB", -3.0), pt("A", 1.0)] {
            let t = s.project_param(&x);
            let best = (0..=20000)
                .map(|i| i as f64 * s.length / 20000.0)
                .map(|t| distance(&s.eval(t), &x))
                .fold(f64::INFINITY, f64::min);
            assert!(distance(&s.eval(t), &x) <= best + 1e-9);
        }
    }
}
