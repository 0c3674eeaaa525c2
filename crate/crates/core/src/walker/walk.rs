//! Random-walk trajectories `Z_n = ω₁ ⋯ ω_n`.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::isometry::Isometry;
use crate::error::{domain, Result};
use crate::geometry::ModelSpace;
use crate::rng::{self, hash_words, Domain};

/// A finitely supported probability measure on isometries of one space.
#[derive(Clone, Debug)]
pub struct WalkConfig {
    pub space: ModelSpace,
    pub support: Vec<Isometry>,
    pub weights: Vec<f64>,
    cdf: Vec<f64>,
}

impl WalkConfig {
    pub fn new(space: ModelSpace, support: Vec<Isometry>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return domain("measure has empty support");
        }
        if support.len() != weights.len() {
            return domain(format!(
                "{} generators but {} weights",
                support.len(),
                weights.len()
            ));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return domain(format!("weight {w} is not positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return domain(format!("weights sum to {total}, not 1"));
        }
        if let Some(g) = support.iter().find(|g| !g.belongs_to(space.kind)) {
            return domain(format!("generator {g} does not act on {:?}", space.kind));
        }
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        Ok(WalkConfig {
            space,
            support,
            weights,
            cdf,
        })
    }

    /// Uniform measure on `gens ∪ gens⁻¹`.
    pub fn symmetric(space: ModelSpace, gens: &[Isometry]) -> Result<Self> {
        let support: Vec<Isometry> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
        let w = vec![1.0 / support.len() as f64; support.len()];
        WalkConfig::new(space, support, w)
    }

    pub fn dirac(space: ModelSpace, g: Isometry) -> Result<Self> {
        WalkConfig::new(space, vec![g], vec![1.0])
    }

    /// One uniform draw per increment.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cdf.len() - 1)
    }

    /// The reflected measure `μ̌(g) = μ(g⁻¹)`.
    pub fn reflected(&self) -> WalkConfig {
        WalkConfig {
            space: self.space.clone(),
            support: self.support.iter().map(Isometry::inverse).collect(),
            weights: self.weights.clone(),
            cdf: self.cdf.clone(),
        }
    }

    pub fn is_dirac(&self) -> bool {
        self.support.len() == 1
    }

    /// `Σ μ(g) d(g o, o)`.
    pub fn first_moment(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.weights)
            .map(|(g, w)| w * g.displacement(&self.space))
            .sum()
    }

    /// Distinct elements among products of at most `len` letters from the
    /// support and its inverses, compared by orbit point of the basepoint
    /// and by digest.
    pub fn distinct_products(&self, len: usize) -> usize {
        let letters: Vec<Isometry> = self
            .support
            .iter()
            .flat_map(|g| [g.clone(), g.inverse()])
            .collect();
        let id = Isometry::identity(self.space.kind);
        let mut seen: HashSet<String> = HashSet::new();
        seen.insert(id.digest());
        let mut frontier = vec![id];
        for _ in 0..len {
            let mut next = Vec::new();
            for g in &frontier {
                for l in &letters {
                    let h = g.compose(l).expect("same space");
                    if seen.insert(h.digest()) {
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        seen.len()
    }

    /// The only admissibility check made: at least `k` distinct elements at
    /// word length 3.
    pub fn check_admissible(&self, k: usize) -> Result<()> {
        let c = self.distinct_products(3);
        if c < k {
            return domain(format!(
                "support reaches only {c} elements at length 3 (need {k})"
            ));
        }
        Ok(())
    }
}

/// Running product of increments for one trial.
pub struct Walk<'a> {
    cfg: &'a WalkConfig,
    rng: ChaCha8Rng,
    position: Isometry,
    steps: usize,
    reflected: bool,
}

impl<'a> Walk<'a> {
    /// The walk for `(seed, domain, trial)`. With `reflected` the increments
    /// are the inverses `ω_k⁻¹`, i.e. the walk driven by `μ̌`.
    pub fn new(
        cfg: &'a WalkConfig,
        seed: u64,
        domain: Domain,
        trial: u64,
        reflected: bool,
    ) -> Self {
        Walk {
            cfg,
            rng: rng::stream(seed, domain, trial),
            position: Isometry::identity(cfg.space.kind),
            steps: 0,
            reflected,
        }
    }

    pub fn forward(cfg: &'a WalkConfig, seed: u64, trial: u64) -> Self {
        Walk::new(cfg, seed, Domain::Walk, trial, false)
    }

    /// Draws `ω_{k+1}`, multiplies it on the right and returns its index.
    pub fn step(&mut self) -> usize {
        let i = self.cfg.sample_index(&mut self.rng);
        if self.reflected {
            self.position.then(&self.cfg.support[i].inverse());
        } else {
            self.position.then(&self.cfg.support[i]);
        }
        self.steps += 1;
        i
    }

    pub fn advance(&mut self, k: usize) {
        for _ in 0..k {
            self.step();
        }
    }

    pub fn position(&self) -> &Isometry {
        &self.position
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn displacement(&self) -> f64 {
        self.position.displacement(&self.cfg.space)
    }
}

/// `(Z_k, d(Z_k o, o))` for `k = 0..=n`.
pub fn trajectory(cfg: &WalkConfig, seed: u64, trial: u64, n: usize) -> Vec<(Isometry, f64)> {
    let mut w = Walk::forward(cfg, seed, trial);
    let mut out = Vec::with_capacity(n + 1);
    out.push((w.position().clone(), 0.0));
    for _ in 0..n {
        w.step();
        out.push((w.position().clone(), w.displacement()));
    }
    out
}

/// `d(Z_k o, o)` for `k = 0..=n` without storing the elements.
pub fn displacement_series(cfg: &WalkConfig, seed: u64, trial: u64, n: usize) -> Vec<f64> {
    let mut w = Walk::forward(cfg, seed, trial);
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for _ in 0..n {
        w.step();
        out.push(w.displacement());
    }
    out
}

/// `d(Z_n o, o)` for trials `0..trials`, in trial order.
pub fn final_displacements(cfg: &WalkConfig, seed: u64, n: usize, trials: usize) -> Vec<f64> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut w = Walk::forward(cfg, seed, t);
            w.advance(n);
            w.displacement()
        })
        .collect()
}

/// One row of a trajectory dump.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub trial: u64,
    pub n: usize,
    pub displacement: f64,
    pub digest: String,
}

/// Short stable text for an element: the word itself when short, otherwise
/// a prefix plus a hash of the full text.
pub fn element_digest(g: &Isometry) -> String {
    let text = g.digest();
    if text.chars().count() <= 32 {
        return text;
    }
    let words: Vec<u64> = text
        .as_bytes()
        .chunks(8)
        .map(|c| {
            let mut b = [0u8; 8];
            b[..c.len()].copy_from_slice(c);
            u64::from_le_bytes(b)
        })
        .collect();
    let head: String = text.chars().take(16).collect();
    format!("{head}~{:016x}", hash_words(&words))
}

/// Rows at `n = stride, 2·stride, …, n_max` for each trial.
pub fn trajectory_rows(
    cfg: &WalkConfig,
    seed: u64,
    trials: usize,
    n_max: usize,
    stride: usize,
) -> Vec<TrajectoryRow> {
    let stride = stride.max(1);
    let per_trial: Vec<Vec<TrajectoryRow>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut w = Walk::forward(cfg, seed, t);
            let mut rows = Vec::new();
            for k in 1..=n_max {
                w.step();
                if k % stride == 0 || k == n_max {
                    rows.push(TrajectoryRow {
                        trial: t,
                        n: k,
                        displacement: w.displacement(),
                        digest: element_digest(w.position()),
                    });
                }
            }
            rows
        })
        .collect();
    per_trial.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::word::Word;

    fn f2() -> WalkConfig {
        let a = Isometry::Tree(Word::parse("a").unwrap());
        let b = Isometry::Tree(Word::parse("b").unwrap());
        WalkConfig::symmetric(ModelSpace::tree(4), &[a, b]).unwrap()
    }

    #[test]
    fn rejects_bad_weights() {
        let a = Isometry::Tree(Word::parse("a").unwrap());
        assert!(WalkConfig::new(ModelSpace::tree(4), vec![a.clone()], vec![0.5]).is_err());
        assert!(WalkConfig::new(ModelSpace::tree(4), vec![a], vec![-1.0]).is_err());
    }

    #[test]
    fn zero_length_is_identity() {
        let t = trajectory(&f2(), 1, 0, 0);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].1, 0.0);
    }

    #[test]
    fn f2_reaches_many_elements() {
        // 1 + 4 + 12 + 36 reduced words of length ≤ 3
        assert_eq!(f2().distinct_products(3), 53);
    }

    #[test]
    fn sampling_respects_weights() {
        let a = Isometry::Tree(Word::parse("a").unwrap());
        let b = Isometry::Tree(Word::parse("b").unwrap());
        let cfg = WalkConfig::new(ModelSpace::tree(4), vec![a, b], vec![0.8, 0.2]).unwrap();
        let mut r = rng::stream(3, Domain::Walk, 0);
        let hits = (0..20000).filter(|_| cfg.sample_index(&mut r) == 0).count();
        assert!((hits as f64 / 20000.0 - 0.8).abs() < 0.015);
    }
}
