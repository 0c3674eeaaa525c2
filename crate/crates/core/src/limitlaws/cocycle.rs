//! The Busemann cocycle `β(g, ξ) = b_ξ(g⁻¹ o)` and its audits.

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{BoundaryProxy, ModelSpace};
use crate::rng::{self, Domain};
use crate::walker::Isometry;

#[derive(Clone, Debug)]
pub struct CocycleSample {
    pub g: Isometry,
    pub xi: BoundaryProxy,
    pub beta: f64,
}

impl CocycleSample {
    pub fn new(space: &ModelSpace, g: Isometry, xi: BoundaryProxy) -> Self {
        let beta = busemann_cocycle(space, &g, &xi);
        CocycleSample { g, xi, beta }
    }
}

/// `β(g, ξ)` normalized at the space's basepoint.
pub fn busemann_cocycle(space: &ModelSpace, g: &Isometry, xi: &BoundaryProxy) -> f64 {
    g.cocycle(space, xi)
}

/// `β(g₁g₂, ξ) − β(g₁, g₂ξ) − β(g₂, ξ)`.
pub fn cocycle_residual(space: &ModelSpace, g1: &Isometry, g2: &Isometry, xi: &BoundaryProxy) -> f64 {
    let g12 = g1.compose(g2).expect("same space");
    let g2xi = g2.act_boundary(xi).expect("same space");
    busemann_cocycle(space, &g12, xi) - busemann_cocycle(space, g1, &g2xi) - busemann_cocycle(space, g2, xi)
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleAudit {
    pub triples: usize,
    pub max_residual: f64,
    /// Largest `|β(g, ξ)| − d(g o, o)`; the horofunction bound says ≤ 0.
    pub max_lipschitz_excess: f64,
}

impl CocycleAudit {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual <= tol && self.max_lipschitz_excess <= 1e-6
    }
}

/// Residuals over `triples` random `(g₁, g₂, ξ)`, with elements of word
/// size up to `size` and boundary points from `ModelSpace::random_boundary`.
pub fn cocycle_audit(space: &ModelSpace, triples: usize, size: usize, seed: u64) -> CocycleAudit {
    let rows: Vec<(f64, f64)> = (0..triples as u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(seed, Domain::Audit, t);
            let g1 = Isometry::random(space.kind, size, &mut r);
            let g2 = Isometry::random(space.kind, size, &mut r);
            let xi = space.random_boundary(&mut r);
            let res = cocycle_residual(space, &g1, &g2, &xi).abs();
            let excess = busemann_cocycle(space, &g1, &xi).abs() - g1.displacement(space);
            (res, excess)
        })
        .collect();
    CocycleAudit {
        triples,
        max_residual: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        max_lipschitz_excess: rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hyperbolic::Ideal;
    use crate::walker::Mobius;

    #[test]
    fn diagonal_at_infinity() {
        let g = Isometry::Mobius(Mobius::new(2.0, 0.0, 0.0, 0.5).unwrap());
        let b = busemann_cocycle(&ModelSpace::hyperbolic(), &g, &BoundaryProxy::Ideal(Ideal::Infinity));
        assert!((b - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn small_audits_pass() {
        for space in [ModelSpace::tree(4), ModelSpace::hyperbolic(), ModelSpace::euclidean(), ModelSpace::tree_times_line(4)] {
            let a = cocycle_audit(&space, 200, 6, 5);
            assert!(a.passes(1e-8), "{:?}: {a:?}", space.kind);
        }
    }
}
