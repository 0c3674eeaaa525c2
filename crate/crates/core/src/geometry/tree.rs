//! The regular tree as the Cayley graph of a free product, with points on
//! edge interiors, geodesic paths, projections and boundary rays.

use rand::Rng;

use super::word::{alphabet, inv, Letter, Word};
use crate::error::{domain, Result};
use crate::rng::{hash_words, unit_from_hash};

/// A point of the metric tree: a vertex, or a point at distance `offset`
/// from `vertex` along the edge labelled `toward`.
///
/// Canonical form: `offset ∈ [0, 1)`, `toward` is `None` iff `offset == 0`,
/// and `vertex` is the endpoint closer to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct TreePoint {
    pub vertex: Word,
    pub toward: Option<Letter>,
    pub offset: f64,
}

impl TreePoint {
    pub fn vertex(w: Word) -> Self {
        TreePoint {
            vertex: w,
            toward: None,
            offset: 0.0,
        }
    }

    /// Point at distance `f` from `v` along edge `l`; `f` is clamped to [0, 1].
    pub fn along(v: &Word, l: Letter, f: f64) -> Self {
        if f <= 0.0 {
            return TreePoint::vertex(v.clone());
        }
        let mut other = v.clone();
        other.push(l);
        if f >= 1.0 {
            return TreePoint::vertex(other);
        }
        if other.len() < v.len() {
            TreePoint {
                vertex: other,
                toward: Some(inv(l)),
                offset: 1.0 - f,
            }
        } else {
            TreePoint {
                vertex: v.clone(),
                toward: Some(l),
                offset: f,
            }
        }
    }

    pub fn is_vertex(&self) -> bool {
        self.toward.is_none()
    }

    pub fn is_valid(&self, valence: u8) -> bool {
        let letters_ok = self.vertex.in_alphabet(valence)
            && self
                .toward
                .is_none_or(|l| super::word::letter_in_alphabet(l, valence));
        let offset_ok =
            (0.0..1.0).contains(&self.offset) && (self.toward.is_none() == (self.offset == 0.0));
        letters_ok && offset_ok
    }

    /// Edge endpoints with their distances from this point.
    fn ends(&self) -> ([(Word, f64); 2], usize) {
        match self.toward {
            None => ([(self.vertex.clone(), 0.0), (Word::identity(), 0.0)], 1),
            Some(l) => {
                let mut other = self.vertex.clone();
                other.push(l);
                (
                    [
                        (self.vertex.clone(), self.offset),
                        (other, 1.0 - self.offset),
                    ],
                    2,
                )
            }
        }
    }

    /// Left action of a group element.
    pub fn translate(&self, g: &Word) -> TreePoint {
        let v = g.mul(&self.vertex);
        match self.toward {
            None => TreePoint::vertex(v),
            Some(l) => TreePoint::along(&v, l, self.offset),
        }
    }
}

#[inline]
pub fn vertex_distance(x: &Word, y: &Word) -> f64 {
    (x.len() + y.len() - 2 * x.lcp(y)) as f64
}

fn same_edge(p: &TreePoint, q: &TreePoint) -> bool {
    match (p.toward, q.toward) {
        (Some(a), Some(b)) => p.vertex == q.vertex && a == b,
        _ => false,
    }
}

/// A vertex given as a reduced prefix plus at most one extra letter, so edge
/// endpoints can be compared without building their words.
#[derive(Clone, Copy)]
struct Virtual<'a> {
    base: &'a [Letter],
    extra: Option<Letter>,
}

impl<'a> Virtual<'a> {
    fn len(&self) -> usize {
        self.base.len() + usize::from(self.extra.is_some())
    }

    fn at(&self, i: usize) -> Option<Letter> {
        match self.base.get(i) {
            Some(&l) => Some(l),
            None if i == self.base.len() => self.extra,
            None => None,
        }
    }

    /// `common` is the common prefix length of the words the two bases
    /// were cut from.
    fn lcp(&self, o: &Virtual, common: usize) -> usize {
        let mut k = common.min(self.base.len()).min(o.base.len());
        while let (Some(a), Some(b)) = (self.at(k), o.at(k)) {
            if a != b {
                break;
            }
            k += 1;
        }
        k
    }

    fn distance(&self, o: &Virtual, common: usize) -> f64 {
        (self.len() + o.len() - 2 * self.lcp(o, common)) as f64
    }
}

/// Edge endpoints of a point with their distances from it.
fn virtual_ends(p: &TreePoint) -> ([(Virtual<'_>, f64); 2], usize) {
    let here = Virtual {
        base: p.vertex.letters(),
        extra: None,
    };
    match p.toward {
        None => ([(here, 0.0), (here, 0.0)], 1),
        Some(l) => {
            let letters = p.vertex.letters();
            let other = if letters.last() == Some(&inv(l)) {
                Virtual {
                    base: &letters[..letters.len() - 1],
                    extra: None,
                }
            } else {
                Virtual {
                    base: letters,
                    extra: Some(l),
                }
            };
            ([(here, p.offset), (other, 1.0 - p.offset)], 2)
        }
    }
}

pub fn distance(p: &TreePoint, q: &TreePoint) -> f64 {
    if p.is_vertex() && q.is_vertex() {
        return vertex_distance(&p.vertex, &q.vertex);
    }
    if same_edge(p, q) {
        return (p.offset - q.offset).abs();
    }
    let (ep, np) = virtual_ends(p);
    let (eq, nq) = virtual_ends(q);
    let common = p.vertex.lcp(&q.vertex);
    let mut best = f64::INFINITY;
    for (x, dx) in &ep[..np] {
        for (y, dy) in &eq[..nq] {
            best = best.min(dx + x.distance(y, common) + dy);
        }
    }
    best
}

/// Letter leading from vertex `u` to the adjacent vertex `v`.
fn step_letter(u: &Word, v: &Word) -> Letter {
    if v.len() > u.len() {
        v.last().expect("longer neighbour has a last letter")
    } else {
        inv(u.last().expect("longer neighbour has a last letter"))
    }
}

/// Unit-speed geodesic between two tree points.
#[derive(Clone, Debug, PartialEq)]
pub struct TreePath {
    pub a: TreePoint,
    pub b: TreePoint,
    pub length: f64,
    /// Vertices crossed by the path with their arclength parameters.
    stops: Vec<(f64, Word)>,
}

impl TreePath {
    pub fn between(a: &TreePoint, b: &TreePoint) -> TreePath {
        let length = distance(a, b);
        if length == 0.0 || same_edge(a, b) {
            return TreePath {
                a: a.clone(),
                b: b.clone(),
                length,
                stops: Vec::new(),
            };
        }
        let (ea, na) = a.ends();
        let (eb, nb) = b.ends();
        let mut best = (f64::INFINITY, 0, 0);
        for (i, (x, dx)) in ea[..na].iter().enumerate() {
            for (j, (y, dy)) in eb[..nb].iter().enumerate() {
                let c = dx + vertex_distance(x, y) + dy;
                if c < best.0 - 1e-12 {
                    best = (c, i, j);
                }
            }
        }
        let (x, dx) = &ea[best.1];
        let (y, _) = &eb[best.2];
        let common = x.lcp(y);
        let mut stops = Vec::with_capacity(x.len() + y.len() - 2 * common + 1);
        let mut s = *dx;
        let mut v = x.clone();
        stops.push((s, v.clone()));
        while v.len() > common {
            v.pop();
            s += 1.0;
            stops.push((s, v.clone()));
        }
        for &l in &y.letters()[common..] {
            v.push(l);
            s += 1.0;
            stops.push((s, v.clone()));
        }
        TreePath {
            a: a.clone(),
            b: b.clone(),
            length,
            stops,
        }
    }

    pub fn reversed(&self) -> TreePath {
        TreePath::between(&self.b, &self.a)
    }

    /// Parameters of the vertices on the path.
    pub fn vertex_params(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.stops.iter().map(|(s, _)| *s).collect();
        if self.stops.is_empty() {
            if self.a.is_vertex() {
                out.push(0.0);
            }
            if self.b.is_vertex() && self.length > 0.0 {
                out.push(self.length);
            }
        }
        out
    }

    /// Letters at the vertex `eval(t)` pointing along the path.
    pub fn path_letters_at(&self, t: f64) -> Vec<Letter> {
        let v = self.eval(t);
        let mut out = Vec::with_capacity(2);
        for s in [t - 0.5, t + 0.5] {
            if (s < t && t > 0.0) || (s > t && t < self.length) {
                let p = self.eval(s);
                if p != v {
                    if let Some(l) = toward_point(&v.vertex, &p) {
                        out.push(l);
                    }
                }
            }
        }
        out
    }

    pub fn eval(&self, t: f64) -> TreePoint {
        let t = t.clamp(0.0, self.length);
        if self.stops.is_empty() {
            return self.eval_single_edge(t);
        }
        let first = &self.stops[0];
        if t <= first.0 {
            // between a and the first vertex
            let l = toward_point(&first.1, &self.a);
            return match l {
                Some(l) => TreePoint::along(&first.1, l, first.0 - t),
                None => TreePoint::vertex(first.1.clone()),
            };
        }
        let last = self.stops.last().expect("non-empty");
        if t >= last.0 {
            let l = toward_point(&last.1, &self.b);
            return match l {
                Some(l) => TreePoint::along(&last.1, l, t - last.0),
                None => TreePoint::vertex(last.1.clone()),
            };
        }
        // search the stored parameters so a vertex parameter maps to its vertex
        let k = (self.stops.partition_point(|(s, _)| *s <= t) - 1).min(self.stops.len() - 2);
        let (s0, v0) = &self.stops[k];
        let (_, v1) = &self.stops[k + 1];
        TreePoint::along(v0, step_letter(v0, v1), t - s0)
    }

    fn eval_single_edge(&self, t: f64) -> TreePoint {
        if self.length == 0.0 {
            return self.a.clone();
        }
        // a and b share an edge: pick the edge from whichever is interior
        let (u, l) = match (&self.a.toward, &self.b.toward) {
            (Some(l), _) => (self.a.vertex.clone(), *l),
            (None, Some(l)) => (self.b.vertex.clone(), *l),
            (None, None) => {
                // adjacent vertices
                let l = step_letter(&self.a.vertex, &self.b.vertex);
                return TreePoint::along(&self.a.vertex, l, t);
            }
        };
        let pa = edge_position(&u, &self.a);
        let pb = edge_position(&u, &self.b);
        let pos = if pb >= pa { pa + t } else { pa - t };
        TreePoint::along(&u, l, pos)
    }

    /// Closed-form projection: the tripod centre of `(a, b, x)`.
    pub fn project_param(&self, x: &TreePoint) -> f64 {
        let da = distance(&self.a, x);
        let db = distance(&self.b, x);
        (0.5 * (da + self.length - db)).clamp(0.0, self.length)
    }
}

/// Position of `p` on the edge `(u, u·l)` measured from `u`.
fn edge_position(u: &Word, p: &TreePoint) -> f64 {
    if p.is_vertex() {
        return if &p.vertex == u { 0.0 } else { 1.0 };
    }
    if &p.vertex == u {
        p.offset
    } else {
        1.0 - p.offset
    }
}

/// Letter of the edge at vertex `v` that contains point `p` (p adjacent to v).
pub(crate) fn toward_point(v: &Word, p: &TreePoint) -> Option<Letter> {
    match p.toward {
        None => {
            if &p.vertex == v {
                None
            } else {
                Some(step_letter(v, &p.vertex))
            }
        }
        Some(l) => {
            if &p.vertex == v {
                Some(l)
            } else {
                Some(inv(l))
            }
        }
    }
}

/// How letters beyond the materialized prefix of a ray are produced.
#[derive(Clone, Debug, PartialEq)]
pub enum RayTail {
    /// Repeats `pattern` cyclically starting at `phase`.
    Periodic { pattern: Vec<Letter>, phase: usize },
    /// Non-backtracking letters drawn from a counter hash of `(seed, index)`.
    Random { seed: u64, index: u64 },
}

/// A geodesic ray from the identity vertex: a point of the tree boundary,
/// materialized to a finite prefix and extended lazily by its tail rule.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeRay {
    valence: u8,
    prefix: Word,
    tail: RayTail,
}

impl TreeRay {
    /// The periodic ray `pattern pattern pattern …` after `prefix`.
    pub fn periodic(valence: u8, prefix: Word, pattern: Word) -> Result<Self> {
        let p = pattern.letters().to_vec();
        if p.is_empty() {
            return domain("periodic ray needs a non-empty pattern");
        }
        if p.len() > 1 && p[0] == inv(p[p.len() - 1]) {
            return domain(format!("pattern {pattern} is not cyclically reduced"));
        }
        if p.len() == 1 && p[0] == inv(p[0]) {
            return domain("an involution cannot generate a ray");
        }
        if prefix.last() == Some(inv(p[0])) {
            return domain("prefix backtracks into the pattern");
        }
        if !prefix.in_alphabet(valence) || !pattern.in_alphabet(valence) {
            return domain("letters outside the tree alphabet");
        }
        Ok(TreeRay {
            valence,
            prefix,
            tail: RayTail::Periodic {
                pattern: p,
                phase: 0,
            },
        })
    }

    /// `prefix` followed by a seeded non-backtracking continuation.
    pub fn random_tail(valence: u8, prefix: Word, seed: u64) -> Self {
        TreeRay {
            valence,
            prefix,
            tail: RayTail::Random { seed, index: 0 },
        }
    }

    /// Parses `"ab…"` (periodic tail `b`) or `"a(ab)"` style: the text in
    /// parentheses is the repeating pattern. A trailing `…` or `...` repeats
    /// the final letter.
    pub fn parse(valence: u8, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(open) = s.find('(') {
            let close = s
                .rfind(')')
                .ok_or_else(|| crate::Error::Domain(format!("unbalanced ray {s:?}")))?;
            let prefix = Word::parse(&s[..open])?;
            let pattern = Word::parse(&s[open + 1..close])?;
            return TreeRay::periodic(valence, prefix, pattern);
        }
        let body = s.trim_end_matches('…').trim_end_matches("...");
        let w = Word::parse(body)?;
        let last = match w.last() {
            Some(l) => l,
            None => return domain("ray needs at least one letter"),
        };
        let mut prefix = w.clone();
        prefix.pop();
        TreeRay::periodic(valence, prefix, Word::from_letters([last]))
    }

    pub fn valence(&self) -> u8 {
        self.valence
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    pub fn tail(&self) -> &RayTail {
        &self.tail
    }

    pub fn letters(&self) -> RayLetters<'_> {
        RayLetters {
            ray: self,
            pos: 0,
            prev: None,
            tail: self.tail.clone(),
        }
    }

    pub fn letter(&self, k: usize) -> Letter {
        self.letters().nth(k).expect("rays are infinite")
    }

    /// Materializes tail letters until the prefix has length `depth`.
    /// Letters already materialized never change.
    pub fn deepened(&self, depth: usize) -> TreeRay {
        if depth <= self.prefix.len() {
            return self.clone();
        }
        let mut prefix = self.prefix.clone();
        let mut tail = self.tail.clone();
        while prefix.len() < depth {
            let l = next_tail_letter(self.valence, prefix.last(), &mut tail);
            prefix.push(l);
        }
        TreeRay {
            valence: self.valence,
            prefix,
            tail,
        }
    }

    /// Vertex at distance `k` from the identity along the ray.
    pub fn vertex_at(&self, k: usize) -> Word {
        Word::from_letters(self.letters().take(k))
    }

    pub fn lcp_word(&self, w: &Word) -> usize {
        self.letters()
            .zip(w.letters().iter())
            .take_while(|(a, b)| a == *b)
            .count()
    }

    /// Common prefix with another ray, capped at `limit`.
    pub fn lcp_ray(&self, other: &TreeRay, limit: usize) -> usize {
        self.letters()
            .zip(other.letters())
            .take(limit)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Left action `g · ray`.
    pub fn translate(&self, g: &Word) -> TreeRay {
        let materialized = self.deepened(self.prefix.len().max(g.len() + 1));
        let prefix = g.mul(&materialized.prefix);
        TreeRay {
            valence: self.valence,
            prefix,
            tail: materialized.tail,
        }
    }

    /// Busemann-type height `h(v) = |v| - 2 lcp(ray, v)`; differences of it
    /// are Busemann functions.
    pub fn height(&self, p: &TreePoint) -> f64 {
        let hv = |v: &Word| v.len() as f64 - 2.0 * self.lcp_word(v) as f64;
        match p.toward {
            None => hv(&p.vertex),
            Some(l) => {
                let mut other = p.vertex.clone();
                other.push(l);
                (1.0 - p.offset) * hv(&p.vertex) + p.offset * hv(&other)
            }
        }
    }

    pub fn busemann(&self, base: &TreePoint, z: &TreePoint) -> f64 {
        self.height(z) - self.height(base)
    }

    /// First `k` letters as a word (cylinder label).
    pub fn cylinder(&self, k: usize) -> Word {
        self.vertex_at(k)
    }
}

fn next_tail_letter(valence: u8, prev: Option<Letter>, tail: &mut RayTail) -> Letter {
    match tail {
        RayTail::Periodic { pattern, phase } => {
            let l = pattern[*phase % pattern.len()];
            *phase = (*phase + 1) % pattern.len();
            l
        }
        RayTail::Random { seed, index } => {
            let letters = alphabet(valence);
            let options: Vec<Letter> = letters
                .into_iter()
                .filter(|&l| Some(inv(l)) != prev)
                .collect();
            let u = unit_from_hash(hash_words(&[*seed, *index]));
            *index += 1;
            options[((u * options.len() as f64) as usize).min(options.len() - 1)]
        }
    }
}

pub struct RayLetters<'a> {
    ray: &'a TreeRay,
    pos: usize,
    prev: Option<Letter>,
    tail: RayTail,
}

impl Iterator for RayLetters<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        let pre = self.ray.prefix.letters();
        let l = if self.pos < pre.len() {
            pre[self.pos]
        } else {
            next_tail_letter(self.ray.valence, self.prev, &mut self.tail)
        };
        self.pos += 1;
        self.prev = Some(l);
        Some(l)
    }
}

/// Non-backtracking random walk of total length `dist` from `start`, whose
/// first step avoids the letters in `avoid`.
pub fn random_branch<R: Rng + ?Sized>(
    valence: u8,
    start: &Word,
    avoid: &[Letter],
    dist: f64,
    rng: &mut R,
) -> Option<TreePoint> {
    let letters = alphabet(valence);
    let first: Vec<Letter> = letters
        .iter()
        .copied()
        .filter(|l| !avoid.contains(l))
        .collect();
    if first.is_empty() {
        return None;
    }
    if dist <= 0.0 {
        return Some(TreePoint::vertex(start.clone()));
    }
    let mut v = start.clone();
    let mut prev: Option<Letter> = None;
    let whole = dist.floor() as usize;
    let frac = dist - whole as f64;
    let steps = whole + usize::from(frac > 0.0);
    for step in 0..steps {
        let options: Vec<Letter> = if step == 0 {
            first.clone()
        } else {
            letters
                .iter()
                .copied()
                .filter(|&l| Some(inv(l)) != prev)
                .collect()
        };
        let l = options[rng.gen_range(0..options.len())];
        if step == steps - 1 && frac > 0.0 {
            return Some(TreePoint::along(&v, l, frac));
        }
        v.push(l);
        prev = Some(l);
    }
    Some(TreePoint::vertex(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn v(s: &str) -> TreePoint {
        TreePoint::vertex(w(s))
    }

    #[test]
    fn vertex_distances() {
        assert_eq!(distance(&v("e"), &v("ab")), 2.0);
        assert_eq!(distance(&v("ab"), &v("aB")), 2.0);
        assert_eq!(distance(&v("ab"), &v("ba")), 4.0);
    }

    #[test]
    fn edge_points() {
        let p = TreePoint::along(&w("a"), 2, 0.25); // on edge a -> ab
        let q = TreePoint::along(&w("ab"), 3, 0.25); // on edge ab -> a, canonicalized
        assert_eq!(q.vertex, w("a"));
        assert!((q.offset - 0.75).abs() < 1e-15);
        assert!((distance(&p, &q) - 0.5).abs() < 1e-15);
        assert!((distance(&p, &v("e")) - 1.25).abs() < 1e-15);
        assert!((distance(&p, &v("b")) - 2.25).abs() < 1e-15);
    }

    #[test]
    fn path_eval_hits_vertices() {
        let path = TreePath::between(&v("e"), &v("aa"));
        assert_eq!(path.length, 2.0);
        assert_eq!(path.eval(1.0), v("a"));
        let mid = path.eval(1.5);
        assert!((distance(&mid, &v("aa")) - 0.5).abs() < 1e-12);
        let rev = path.reversed();
        assert_eq!(rev.eval(0.5), TreePoint::along(&w("a"), 0, 0.5));
    }

    #[test]
    fn projection_is_tripod_centre() {
        let path = TreePath::between(&v("a"), &v("aa"));
        let t = path.project_param(&v("b"));
        assert_eq!(t, 0.0);
        assert_eq!(path.eval(t), v("a"));
        let path = TreePath::between(&v("B"), &v("aab"));
        let t = path.project_param(&v("ac"));
        assert_eq!(t, 2.0);
    }

    #[test]
    fn ray_letters_are_stable_under_deepening() {
        let ray = TreeRay::random_tail(4, w("ab"), 11);
        let first: Vec<Letter> = ray.letters().take(50).collect();
        let deep = ray.deepened(30);
        let again: Vec<Letter> = deep.letters().take(50).collect();
        assert_eq!(first, again);
        assert_eq!(deep.depth(), 30);
        // non-backtracking
        assert!(first.windows(2).all(|p| p[1] != inv(p[0])));
    }

    #[test]
    fn busemann_on_tree() {
        let xi = TreeRay::parse(4, "aaa…").unwrap();
        assert_eq!(xi.busemann(&v("e"), &v("a")), -1.0);
        assert_eq!(xi.busemann(&v("e"), &v("b")), 1.0);
        assert_eq!(xi.busemann(&v("e"), &v("e")), 0.0);
        let p = TreePoint::along(&w("e"), 0, 0.3);
        assert!((xi.busemann(&v("e"), &p) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn translate_ray() {
        let xi = TreeRay::parse(4, "aaa…").unwrap();
        let moved = xi.translate(&w("A"));
        assert_eq!(
            moved.letters().take(4).collect::<Vec<_>>(),
            vec![0, 0, 0, 0]
        );
        let moved = xi.translate(&w("b"));
        assert_eq!(moved.cylinder(3), w("baa"));
    }
}
