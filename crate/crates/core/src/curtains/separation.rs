//! Budgeted falsification of L-separation and greedy dual L-chains.
//!
//! A pair of curtains is falsified when some geodesic carries more than `L`
//! curtains, pairwise more than one apart, each of which contains a sampled
//! point of both curtains. Falsification is sound; certification is only
//! relative to the search budget.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{GeodesicSeg, ModelSpace, Point};
use crate::rng::{hash_words, stream, Domain};

use super::{curtain_cloud, is_chain, Chain, Curtain, Side};

/// Minimal spacing between witness curtains on a common geodesic.
const WITNESS_GAP: f64 = 1.0 + 1e-6;
/// Margin keeping witness poles off the candidate's endpoints.
const EDGE_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Candidate dual geodesics tried per curtain pair.
    pub candidates: usize,
    /// Sampled points per curtain.
    pub cloud: usize,
    /// The search window has radius `d + window_extra`.
    pub window_extra: f64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            candidates: crate::harness::defaults::FALSIFIER_CANDIDATES,
            cloud: crate::harness::defaults::FALSIFIER_CLOUD,
            window_extra: crate::harness::defaults::FALSIFIER_WINDOW_EXTRA,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    CertifiedUpToBudget,
    Falsified,
}

/// A chain of curtains dual to `dual`, each meeting both tested curtains.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub dual: GeodesicSeg,
    pub params: Vec<f64>,
    /// For each witness curtain, a point shared with the first curtain.
    pub meet_first: Vec<Point>,
    /// For each witness curtain, a point shared with the second curtain.
    pub meet_second: Vec<Point>,
}

impl Witness {
    pub fn curtains(&self) -> Result<Vec<Curtain>> {
        self.params
            .iter()
            .map(|&t| Curtain::new(&self.dual, t))
            .collect()
    }

    /// Independent check: the witness is a chain and each of its curtains
    /// meets both `h1` and `h2`.
    pub fn validate(&self, space: &ModelSpace, h1: &Curtain, h2: &Curtain) -> Result<Chain> {
        let cs = self.curtains()?;
        let chain = is_chain(space, &cs, &self.dual.a)?;
        for (i, k) in cs.iter().enumerate() {
            let (p, q) = (&self.meet_first[i], &self.meet_second[i]);
            let ok = k.side_of(p) == Side::Pole
                && h1.side_of(p) == Side::Pole
                && k.side_of(q) == Side::Pole
                && h2.side_of(q) == Side::Pole;
            if !ok {
                return domain(format!("witness curtain {i} does not meet both curtains"));
            }
        }
        Ok(chain)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationReport {
    pub l: usize,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub candidates_used: usize,
    /// Longest meeting chain found within the budget.
    pub longest_found: usize,
    pub budget: SearchBudget,
}

/// Stable key of a curtain, used to seed its samples.
fn curtain_key(h: &Curtain) -> u64 {
    let text = format!("{:?}|{:?}|{:?}", h.dual.a, h.dual.b, h.t.to_bits());
    let words: Vec<u64> = text
        .as_bytes()
        .chunks(8)
        .map(|c| {
            let mut b = [0u8; 8];
            b[..c.len()].copy_from_slice(c);
            u64::from_le_bytes(b)
        })
        .collect();
    hash_words(&words)
}

fn cloud_of(space: &ModelSpace, h: &Curtain, budget: &SearchBudget, radius: f64) -> Vec<Point> {
    let mut rng = stream(budget.seed, Domain::Curtain, curtain_key(h));
    curtain_cloud(space, h, budget.cloud, radius, &mut rng)
        .into_iter()
        .filter(|p| h.side_of(p) == Side::Pole)
        .collect()
}

/// Sorted, merged union of `[s - ½, s + ½]` over projection parameters.
fn witnessed_set(params: &mut [f64]) -> Vec<(f64, f64)> {
    params.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &s in params.iter() {
        let (a, b) = (s - 0.5, s + 0.5);
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn intersect(x: &[(f64, f64)], y: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < x.len() && j < y.len() {
        let a = x[i].0.max(y[j].0);
        let b = x[i].1.min(y[j].1);
        if a <= b {
            out.push((a, b));
        }
        if x[i].1 < y[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Leftmost-first selection of points with spacing `WITNESS_GAP`; optimal
/// for a union of closed intervals.
fn greedy_points(set: &[(f64, f64)], lo: f64, hi: f64, cap: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &(a, b) in set {
        let (a, b) = (a.max(lo), b.min(hi));
        let mut t = match out.last() {
            Some(&p) => a.max(p + WITNESS_GAP),
            None => a,
        };
        while t <= b && out.len() < cap {
            out.push(t);
            t += WITNESS_GAP;
        }
        if out.len() >= cap {
            break;
        }
    }
    out
}

fn nearest(sorted: &[(f64, usize)], t: f64) -> usize {
    let i = sorted.partition_point(|(s, _)| *s < t);
    let mut best = (f64::INFINITY, 0);
    for k in [i.wrapping_sub(1), i] {
        if let Some(&(s, idx)) = sorted.get(k) {
            if (s - t).abs() < best.0 {
                best = ((s - t).abs(), idx);
            }
        }
    }
    best.1
}

/// Farthest pair of a cloud by two sweeps.
fn far_pair(space: &ModelSpace, cloud: &[Point]) -> Option<(Point, Point)> {
    let first = cloud.first()?;
    let pick = |from: &Point| {
        cloud
            .iter()
            .max_by(|a, b| space.d(from, a).total_cmp(&space.d(from, b)))
            .expect("non-empty")
            .clone()
    };
    let p = pick(first);
    let q = pick(&p);
    Some((p, q))
}

struct PairOutcome {
    count: usize,
    witness: Option<Witness>,
    candidates: usize,
}

/// Longest meeting chain over the budgeted candidates, stopping once `cap`
/// curtains are found.
#[allow(clippy::too_many_arguments)]
fn search_pair(
    space: &ModelSpace,
    c1: &[Point],
    c2: &[Point],
    center: &Point,
    radius: f64,
    budget: &SearchBudget,
    pair_seed: u64,
    cap: usize,
) -> PairOutcome {
    let mut rng = stream(budget.seed, Domain::Curtain, pair_seed);
    let mut structured: Vec<(Point, Point)> = Vec::new();
    structured.extend(far_pair(space, c1));
    structured.extend(far_pair(space, c2));
    let mut best = PairOutcome {
        count: 0,
        witness: None,
        candidates: 0,
    };
    let total = budget.candidates.max(structured.len());
    for k in 0..total {
        let (p, q) = if k < structured.len() {
            structured[k].clone()
        } else {
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| match rng.gen_range(0..3) {
                0 => c1[rng.gen_range(0..c1.len())].clone(),
                1 => c2[rng.gen_range(0..c2.len())].clone(),
                _ => space.random_point(center, radius, rng),
            };
            (draw(&mut rng), draw(&mut rng))
        };
        best.candidates = k + 1;
        let g = space.seg(&p, &q);
        // also skips segments whose length is lost to floating point
        if !(g.length >= 1.0 + 2.0 * EDGE_MARGIN) || !g.length.is_finite() {
            continue;
        }
        let mut s1: Vec<(f64, usize)> = c1
            .iter()
            .enumerate()
            .map(|(i, x)| (g.project_param(x), i))
            .collect();
        let mut s2: Vec<(f64, usize)> = c2
            .iter()
            .enumerate()
            .map(|(i, x)| (g.project_param(x), i))
            .collect();
        s1.sort_by(|a, b| a.0.total_cmp(&b.0));
        s2.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut p1: Vec<f64> = s1.iter().map(|x| x.0).collect();
        let mut p2: Vec<f64> = s2.iter().map(|x| x.0).collect();
        let w = intersect(&witnessed_set(&mut p1), &witnessed_set(&mut p2));
        let params = greedy_points(&w, 0.5 + EDGE_MARGIN, g.length - 0.5 - EDGE_MARGIN, cap);
        if params.len() > best.count {
            let meet_first = params
                .iter()
                .map(|&t| c1[nearest(&s1, t)].clone())
                .collect();
            let meet_second = params
                .iter()
                .map(|&t| c2[nearest(&s2, t)].clone())
                .collect();
            best.count = params.len();
            best.witness = Some(Witness {
                dual: g,
                params,
                meet_first,
                meet_second,
            });
            if best.count >= cap {
                break;
            }
        }
    }
    best
}

fn check_disjoint(
    space: &ModelSpace,
    h1: &Curtain,
    h2: &Curtain,
    c1: &[Point],
    c2: &[Point],
) -> Result<()> {
    if h1.same_dual(h2) {
        if (h1.t - h2.t).abs() <= 1.0 {
            return domain("curtains on a common geodesic must be more than one apart");
        }
        return Ok(());
    }
    if h1 == h2
        || c1.iter().any(|p| h2.side_of(p) == Side::Pole)
        || c2.iter().any(|p| h1.side_of(p) == Side::Pole)
    {
        return domain("curtains intersect");
    }
    let _ = space;
    Ok(())
}

fn pair_seed(h1: &Curtain, h2: &Curtain) -> u64 {
    hash_words(&[curtain_key(h1), curtain_key(h2)])
}

/// Falsifier for L-separation of two disjoint curtains.
pub fn l_separated(
    space: &ModelSpace,
    h1: &Curtain,
    h2: &Curtain,
    l: usize,
    budget: &SearchBudget,
) -> Result<SeparationReport> {
    if l == 0 {
        return domain("L must be positive");
    }
    let m1 = h1.dual.eval(h1.t);
    let m2 = h2.dual.eval(h2.t);
    let radius = space.d(&m1, &m2) + budget.window_extra;
    let center = space.midpoint(&m1, &m2);
    let c1 = cloud_of(space, h1, budget, radius);
    let c2 = cloud_of(space, h2, budget, radius);
    check_disjoint(space, h1, h2, &c1, &c2)?;
    let out = search_pair(
        space,
        &c1,
        &c2,
        &center,
        radius,
        budget,
        pair_seed(h1, h2),
        l + 1,
    );
    let falsified = out.count > l;
    Ok(SeparationReport {
        l,
        verdict: if falsified {
            Verdict::Falsified
        } else {
            Verdict::CertifiedUpToBudget
        },
        witness: if falsified { out.witness } else { None },
        candidates_used: out.candidates,
        longest_found: out.count,
        budget: *budget,
    })
}

/// Greedy dual-chain search along `[x, y]`, caching pair searches so that
/// several values of `L` share work.
pub struct DualChainSearch<'a> {
    space: &'a ModelSpace,
    seg: GeodesicSeg,
    grid: Vec<Curtain>,
    clouds: Vec<Vec<Point>>,
    center: Point,
    radius: f64,
    budget: SearchBudget,
    counts: HashMap<(usize, usize), usize>,
}

impl<'a> DualChainSearch<'a> {
    pub fn new(space: &'a ModelSpace, x: &Point, y: &Point, budget: &SearchBudget) -> Result<Self> {
        let seg = space.geodesic(x, y)?;
        let d = seg.length;
        let mut grid = Vec::new();
        if d > 1.0 {
            let start = if d <= 1.5 { 0.5 * d } else { 1.0 };
            let mut t = start;
            while t + 0.5 < d {
                grid.push(Curtain::new(&seg, t)?);
                t += 1.0;
            }
        }
        let radius = d + budget.window_extra;
        let clouds = grid
            .iter()
            .map(|h| cloud_of(space, h, budget, radius))
            .collect();
        Ok(DualChainSearch {
            space,
            center: seg.eval(0.5 * d),
            seg,
            grid,
            clouds,
            radius,
            budget: *budget,
            counts: HashMap::new(),
        })
    }

    pub fn segment(&self) -> &GeodesicSeg {
        &self.seg
    }

    pub fn grid(&self) -> &[Curtain] {
        &self.grid
    }

    /// Longest meeting chain found for grid curtains `i < j`.
    pub fn pair_count(&mut self, i: usize, j: usize) -> usize {
        if let Some(&c) = self.counts.get(&(i, j)) {
            return c;
        }
        let out = search_pair(
            self.space,
            &self.clouds[i],
            &self.clouds[j],
            &self.center,
            self.radius,
            &self.budget,
            pair_seed(&self.grid[i], &self.grid[j]),
            usize::MAX,
        );
        self.counts.insert((i, j), out.count);
        out.count
    }

    /// Indices of the greedy L-chain. A grid curtain `c` is accepted when
    /// no grid curtain at or before the last accepted one is falsified
    /// against it; by nesting, a falsified outer pair falsifies all inner
    /// pairs, so this is sound and monotone in `L`.
    pub fn greedy_indices(&mut self, l: usize) -> Vec<usize> {
        let mut acc: Vec<usize> = Vec::new();
        for c in 0..self.grid.len() {
            let Some(&last) = acc.last() else {
                acc.push(c);
                continue;
            };
            if self.grid[c].t - self.grid[last].t <= 1.0 {
                continue;
            }
            let ok = (0..=last).rev().all(|a| self.pair_count(a, c) <= l);
            if ok {
                acc.push(c);
            }
        }
        acc
    }

    pub fn greedy(&mut self, l: usize) -> Chain {
        let idx = self.greedy_indices(l);
        Chain {
            curtains: idx.into_iter().map(|i| self.grid[i].clone()).collect(),
            reference: self.seg.a.clone(),
        }
    }
}

pub fn greedy_dual_l_chain(
    space: &ModelSpace,
    x: &Point,
    y: &Point,
    l: usize,
    budget: &SearchBudget,
) -> Result<Chain> {
    Ok(DualChainSearch::new(space, x, y, budget)?.greedy(l))
}

/// `1 + |greedy L-chain|`, or 0 when `x = y`.
pub fn d_l_lower(
    space: &ModelSpace,
    x: &Point,
    y: &Point,
    l: usize,
    budget: &SearchBudget,
) -> Result<u64> {
    if space.distance(x, y)? == 0.0 {
        return Ok(0);
    }
    Ok(1 + greedy_dual_l_chain(space, x, y, l, budget)?.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_algebra() {
        let mut a = vec![0.0, 0.8, 3.0];
        let w = witnessed_set(&mut a);
        assert_eq!(w, vec![(-0.5, 1.3), (2.5, 3.5)]);
        let x = intersect(&w, &[(1.0, 3.0)]);
        assert_eq!(x, vec![(1.0, 1.3), (2.5, 3.0)]);
        let pts = greedy_points(&[(0.0, 3.5)], 0.5, 10.0, 10);
        assert_eq!(pts.len(), 3);
        assert!(pts.windows(2).all(|p| p[1] - p[0] > 1.0));
    }

    #[test]
    fn identical_curtains_rejected() {
        let s = ModelSpace::euclidean();
        let g = s.seg(&Point::flat(0.0, 0.0), &Point::flat(10.0, 0.0));
        let h = Curtain::new(&g, 5.0).unwrap();
        let small = SearchBudget {
            candidates: 4,
            ..SearchBudget::default()
        };
        assert!(l_separated(&s, &h, &h, 1, &small).is_err());
    }
}
