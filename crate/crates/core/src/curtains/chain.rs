use crate::error::{domain, Error, Result};
use crate::geometry::{ModelSpace, Point};
use crate::rng::{stream, Domain};

use super::{curtain_cloud, Curtain, Side};

/// Sample size and radius behind the sampled chain certificate.
const CERT_SAMPLES: usize = 64;
const CERT_RADIUS: f64 = 10.0;

/// Curtains `h_1, …, h_n` with a common reference point in every `h_i⁻`,
/// each separating its neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub curtains: Vec<Curtain>,
    pub reference: Point,
}

impl Chain {
    pub fn empty(reference: Point) -> Chain {
        Chain {
            curtains: Vec::new(),
            reference,
        }
    }

    pub fn len(&self) -> usize {
        self.curtains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curtains.is_empty()
    }
}

/// Orients the curtains towards `reference` and certifies the chain
/// condition. Curtains on a common dual geodesic are checked exactly by
/// their parameters; otherwise consecutive curtains are certified on
/// deterministic samples of their poles.
pub fn is_chain(space: &ModelSpace, cs: &[Curtain], reference: &Point) -> Result<Chain> {
    if cs.is_empty() {
        return domain("a chain needs at least one curtain");
    }
    let mut oriented = Vec::with_capacity(cs.len());
    for (i, h) in cs.iter().enumerate() {
        match h.side_of(reference) {
            Side::Minus => oriented.push(h.clone()),
            Side::Plus => oriented.push(h.flipped()),
            Side::Pole => {
                return Err(Error::Indeterminate(format!(
                    "reference lies on the pole of curtain {i}"
                )))
            }
        }
    }
    let common = oriented.iter().all(|h| h.same_dual(&oriented[0]));
    for i in 1..oriented.len() {
        let (prev, next) = (&oriented[i - 1], &oriented[i]);
        let ok = if common {
            next.t - prev.t > 1.0
        } else {
            let mut rng = stream(0, Domain::Curtain, i as u64);
            let in_next = curtain_cloud(space, next, CERT_SAMPLES, CERT_RADIUS, &mut rng);
            let in_prev = curtain_cloud(space, prev, CERT_SAMPLES, CERT_RADIUS, &mut rng);
            in_next.iter().all(|p| prev.side_of(p) == Side::Plus)
                && in_prev.iter().all(|p| next.side_of(p) == Side::Minus)
        };
        if !ok {
            return Err(Error::NotAChain(i - 1, i));
        }
    }
    Ok(Chain {
        curtains: oriented,
        reference: reference.clone(),
    })
}

/// `⌈d(x, y)⌉` with a realizing chain of `⌈d⌉ - 1` curtains dual to
/// `[x, y]`. With `k` curtains and slack `s = d - k`, curtain `j` sits at
/// `½ + j s/(k+1) + (j - 1)`, so neighbours are more than one apart and
/// `x`, `y` lie strictly outside every pole.
pub fn d_inf(space: &ModelSpace, x: &Point, y: &Point) -> Result<(u64, Chain)> {
    let g = space.geodesic(x, y)?;
    let d = g.length;
    if d == 0.0 {
        return domain("d_inf needs distinct points");
    }
    let ceil = d.ceil();
    let k = ceil as usize - 1;
    let s = d - k as f64;
    let curtains = (1..=k)
        .map(|j| {
            let t = 0.5 + j as f64 * s / (k as f64 + 1.0) + (j as f64 - 1.0);
            Curtain::new(&g, t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        ceil as u64,
        Chain {
            curtains,
            reference: x.clone(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_inf_examples() {
        let s = ModelSpace::euclidean();
        let (n, c) = d_inf(&s, &Point::flat(0.0, 0.0), &Point::flat(2.3, 0.0)).unwrap();
        assert_eq!((n, c.len()), (3, 2));
        let (n, c) = d_inf(&s, &Point::flat(0.0, 0.0), &Point::flat(1.0, 0.0)).unwrap();
        assert_eq!((n, c.len()), (1, 0));
        let t = ModelSpace::tree(4);
        let (n, c) = d_inf(
            &t,
            &Point::vertex("e").unwrap(),
            &Point::vertex("aaa").unwrap(),
        )
        .unwrap();
        assert_eq!((n, c.len()), (3, 2));
    }

    #[test]
    fn realizing_chain_separates_endpoints() {
        let s = ModelSpace::hyperbolic();
        let x = Point::uhp(0.2, 0.5).unwrap();
        let y = Point::uhp(3.0, 2.0).unwrap();
        let (n, c) = d_inf(&s, &x, &y).unwrap();
        assert_eq!(n as usize, c.len() + 1);
        let chain = is_chain(&s, &c.curtains, &x).unwrap();
        for h in &chain.curtains {
            assert!(h.separates(std::slice::from_ref(&x), std::slice::from_ref(&y)).unwrap());
        }
    }

    #[test]
    fn crossing_slabs_are_not_a_chain() {
        let s = ModelSpace::euclidean();
        let gx = s
            .geodesic(&Point::flat(-5.0, 0.0), &Point::flat(5.0, 0.0))
            .unwrap();
        let gy = s
            .geodesic(&Point::flat(0.0, -5.0), &Point::flat(0.0, 5.0))
            .unwrap();
        let hs = [
            Curtain::new(&gx, 5.0).unwrap(),
            Curtain::new(&gy, 5.0).unwrap(),
        ];
        let err = is_chain(&s, &hs, &Point::flat(-3.0, -3.0)).unwrap_err();
        assert_eq!(err, Error::NotAChain(0, 1));
    }

    #[test]
    fn single_curtain_is_a_chain() {
        let s = ModelSpace::euclidean();
        let g = s
            .geodesic(&Point::flat(0.0, 0.0), &Point::flat(3.0, 0.0))
            .unwrap();
        let c = is_chain(
            &s,
            &[Curtain::new(&g, 1.5).unwrap()],
            &Point::flat(5.0, 0.0),
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.curtains[0].side_of(&Point::flat(5.0, 0.0)), Side::Minus);
    }

    #[test]
    fn tree_unit_family_is_a_chain() {
        let s = ModelSpace::tree(4);
        let g = s
            .geodesic(
                &Point::vertex("e").unwrap(),
                &Point::vertex("aaaa").unwrap(),
            )
            .unwrap();
        // spacing must exceed one for closed poles to be disjoint
        let hs: Vec<Curtain> = [0.9, 2.0, 3.1]
            .iter()
            .map(|&t| Curtain::new(&g, t).unwrap())
            .collect();
        assert_eq!(is_chain(&s, &hs, &g.a).unwrap().len(), 3);
        let touching: Vec<Curtain> = [1.0, 2.0]
            .iter()
            .map(|&t| Curtain::new(&g, t).unwrap())
            .collect();
        assert!(is_chain(&s, &touching, &g.a).is_err());
    }
}
