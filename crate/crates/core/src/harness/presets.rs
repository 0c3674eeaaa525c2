//! Named walk configurations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::word::Word;
use crate::geometry::ModelSpace;
use crate::walker::{classify, Isometry, Kind, Mobius, Rigid, WalkConfig};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PresetInfo {
    pub name: &'static str,
    pub space: &'static str,
    pub description: &'static str,
}

pub const PRESETS: [PresetInfo; 6] = [
    PresetInfo {
        name: "f2-uniform",
        space: "tree(4)",
        description: "free group on a, b: uniform on a, A, b, B (drift 1/2, σ² = 3/4)",
    },
    PresetInfo {
        name: "tree-q3",
        space: "tree(4)",
        description: "4-regular tree (branching 3), biased nearest-neighbour walk a .4, A .1, b .25, B .25",
    },
    PresetInfo {
        name: "fuchsian-schottky",
        space: "hyperbolic",
        description: "Schottky pair [[3,4],[2,3]], [[2,.75],[4,2]] and inverses, uniform",
    },
    PresetInfo {
        name: "euclidean-centered",
        space: "euclidean",
        description: "four unit translations, uniform (zero drift, no contracting elements)",
    },
    PresetInfo {
        name: "product-tree-line",
        space: "tree(4) x line",
        description: "F2 x Z: a, A, b, B in the tree factor and shifts ±1 in the line, uniform",
    },
    PresetInfo {
        name: "dirac-a",
        space: "tree(4)",
        description: "Dirac measure at a (deterministic, degenerate limit law)",
    },
];

/// Closed-form values a preset's estimates are checked against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Oracle {
    pub drift: f64,
    pub sigma2: f64,
    /// `ψ` is constant on the boundary.
    pub psi: f64,
    /// A depth-2 cylinder and its `ν` mass.
    pub cylinder: (&'static str, f64),
}

/// The simple walk on `F₂` projects to a reflected `±1` walk with up-step
/// probability `3/4`: drift `1/2`, variance `4pq = 3/4`, and `ψ = −3/4` from
/// the geometric series of Gromov products against `ν̌`.
pub fn oracle(name: &str) -> Option<Oracle> {
    (name == "f2-uniform").then_some(Oracle {
        drift: 0.5,
        sigma2: 0.75,
        psi: -0.75,
        cylinder: ("ab", 1.0 / 12.0),
    })
}

fn word(s: &str) -> Isometry {
    Isometry::Tree(Word::parse(s).expect("literal word"))
}

/// Every product of two support elements is axial; with disjoint isometric
/// circles this is the ping-pong witness for a free, discrete group.
pub fn schottky_pair() -> Result<(Isometry, Isometry)> {
    let a = Isometry::Mobius(Mobius::new(3.0, 4.0, 2.0, 3.0)?);
    let b = Isometry::Mobius(Mobius::new(2.0, 0.75, 4.0, 2.0)?);
    let letters = [a.clone(), a.inverse(), b.clone(), b.inverse()];
    for (i, g) in letters.iter().enumerate() {
        for (j, h) in letters.iter().enumerate() {
            // g·g⁻¹ is the identity, skip those
            if i ^ 1 == j {
                continue;
            }
            if classify(&g.compose(h)?).kind != Kind::Axial {
                return Err(Error::Config(format!("ping-pong check failed on letters {i}, {j}")));
            }
        }
    }
    Ok((a, b))
}

pub fn preset(name: &str) -> Result<WalkConfig> {
    let cfg = match name {
        "f2-uniform" => WalkConfig::symmetric(ModelSpace::tree(4), &[word("a"), word("b")])?,
        "tree-q3" => WalkConfig::new(
            ModelSpace::tree(4),
            vec![word("a"), word("A"), word("b"), word("B")],
            vec![0.4, 0.1, 0.25, 0.25],
        )?,
        "fuchsian-schottky" => {
            let (a, b) = schottky_pair()?;
            WalkConfig::symmetric(ModelSpace::hyperbolic(), &[a, b])?
        }
        "euclidean-centered" => {
            let t = |x: f64, y: f64| Isometry::Rigid(Rigid { angle: 0.0, shift: [x, y] });
            WalkConfig::symmetric(ModelSpace::euclidean(), &[t(1.0, 0.0), t(0.0, 1.0)])?
        }
        "product-tree-line" => {
            let s = |w: &str, r: f64| Isometry::TreeShift(Word::parse(w).expect("literal"), r);
            WalkConfig::symmetric(ModelSpace::tree_times_line(4), &[s("a", 0.0), s("b", 0.0), s("", 1.0)])?
        }
        "dirac-a" => WalkConfig::dirac(ModelSpace::tree(4), word("a"))?,
        other => {
            return Err(Error::Config(format!(
                "unknown preset {other:?}; known: {}",
                PRESETS.iter().map(|p| p.name).collect::<Vec<_>>().join(", ")
            )))
        }
    };
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_builds() {
        for p in PRESETS {
            let cfg = preset(p.name).unwrap();
            if !cfg.is_dirac() {
                cfg.check_admissible(10).unwrap();
            }
        }
        assert!(preset("nope").is_err());
    }
}
