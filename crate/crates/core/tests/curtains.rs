use curtainlab::curtains::audit::{
    axiom_audits, bottleneck_audit, bottleneck_audits, four_point_delta, star_convexity_audit,
};
use curtainlab::curtains::{
    curtain_cloud, d_inf, d_l_lower, greedy_dual_l_chain, is_chain, l_separated, Chain, Curtain,
    DualChainSearch, SearchBudget, Side, Verdict,
};
use curtainlab::geometry::{ModelSpace, Point};
use curtainlab::rng::{stream, Domain};
use curtainlab::Error;
use proptest::prelude::*;

fn v(s: &str) -> Point {
    Point::vertex(s).unwrap()
}

fn small_budget() -> SearchBudget {
    SearchBudget {
        candidates: 60,
        ..SearchBudget::default()
    }
}

#[test]
fn dual_curtain_examples() {
    let t = ModelSpace::tree(4);
    let g = t.geodesic(&v("e"), &v("aa")).unwrap();
    let h = Curtain::new(&g, 1.0).unwrap();
    assert_eq!(h.side_of(&v("a")), Side::Pole);

    let e = ModelSpace::euclidean();
    let g = e
        .geodesic(&Point::flat(0.0, 0.0), &Point::flat(10.0, 0.0))
        .unwrap();
    let h = Curtain::new(&g, 5.0).unwrap();
    for (x, side) in [
        (4.4, Side::Minus),
        (4.5, Side::Pole),
        (5.5, Side::Pole),
        (5.6, Side::Plus),
    ] {
        assert_eq!(h.side_of(&Point::flat(x, 17.0)), side);
    }

    let hp = ModelSpace::hyperbolic();
    let g = hp
        .geodesic(
            &Point::uhp(0.0, 1.0).unwrap(),
            &Point::uhp(0.0, 4f64.exp()).unwrap(),
        )
        .unwrap();
    let h = Curtain::new(&g, 2.0).unwrap();
    // the pole's preimage is the annulus e^1.5 ≤ |z| ≤ e^2.5
    for (r, side) in [
        (1.4f64, Side::Minus),
        (1.6, Side::Pole),
        (2.4, Side::Pole),
        (2.6, Side::Plus),
    ] {
        for angle in [0.2f64, 1.0, 2.9] {
            let m = r.exp();
            let z = Point::uhp(m * angle.cos(), m * angle.sin()).unwrap();
            assert_eq!(h.side_of(&z), side, "r={r} angle={angle}");
        }
    }
}

#[test]
fn dual_curtain_rejects_poles_outside() {
    let e = ModelSpace::euclidean();
    let g = e
        .geodesic(&Point::flat(0.0, 0.0), &Point::flat(10.0, 0.0))
        .unwrap();
    assert!(matches!(Curtain::new(&g, 0.3), Err(Error::Domain(_))));
    assert!(matches!(Curtain::new(&g, 9.7), Err(Error::Domain(_))));
}

#[test]
fn side_of_examples() {
    let t = ModelSpace::tree(4);
    let g = t.geodesic(&v("e"), &v("aa")).unwrap();
    let h = Curtain::new(&g, 1.0).unwrap();
    assert_eq!(h.side_of(&v("b")), Side::Minus);
    let e = ModelSpace::euclidean();
    let g = e
        .geodesic(&Point::flat(0.0, 0.0), &Point::flat(10.0, 0.0))
        .unwrap();
    let slab = Curtain::new(&g, 5.0).unwrap();
    assert_eq!(slab.side_of(&Point::flat(7.0, 3.0)), Side::Plus);
}

#[test]
fn separates_examples() {
    let e = ModelSpace::euclidean();
    let x = Point::flat(0.0, 0.0);
    let y = Point::flat(3.0, 0.0);
    let g = e.geodesic(&x, &y).unwrap();
    let mid = Curtain::new(&g, 1.5).unwrap();
    assert!(mid.separates(std::slice::from_ref(&x), std::slice::from_ref(&y)).unwrap());
    assert!(!mid.separates(std::slice::from_ref(&x), std::slice::from_ref(&x)).unwrap());

    let g = e
        .geodesic(&Point::flat(0.0, 0.0), &Point::flat(10.0, 0.0))
        .unwrap();
    let slab = Curtain::new(&g, 5.0).unwrap();
    assert!(slab
        .separates(&[Point::flat(0.0, 9.0)], &[Point::flat(9.0, -9.0)])
        .unwrap());
    assert!(matches!(
        slab.separates(&[Point::flat(5.0, 0.0)], &[Point::flat(9.0, 0.0)]),
        Err(Error::Indeterminate(_))
    ));
}

#[test]
fn d_inf_examples() {
    let e = ModelSpace::euclidean();
    let (n, c) = d_inf(&e, &Point::flat(0.0, 0.0), &Point::flat(2.3, 0.0)).unwrap();
    assert_eq!((n, c.len()), (3, 2));
    let (n, c) = d_inf(&e, &Point::flat(0.0, 0.0), &Point::flat(0.0, 1.0)).unwrap();
    assert_eq!((n, c.len()), (1, 0));
    let t = ModelSpace::tree(4);
    let (n, c) = d_inf(&t, &v("e"), &v("aaa")).unwrap();
    assert_eq!(n, 3);
    // brute-force halfspace check over the radius-4 ball
    let chain = is_chain(&t, &c.curtains, &v("e")).unwrap();
    for h in &chain.curtains {
        assert!(h.separates(&[v("e")], &[v("aaa")]).unwrap());
    }
}

#[test]
fn euclidean_parallel_slabs_are_falsified() {
    let e = ModelSpace::euclidean();
    let g = e
        .geodesic(&Point::flat(0.0, 0.0), &Point::flat(20.0, 0.0))
        .unwrap();
    let h1 = Curtain::new(&g, 5.0).unwrap();
    let h2 = Curtain::new(&g, 11.0).unwrap(); // pole gap of 5
    let rep = l_separated(&e, &h1, &h2, 10, &SearchBudget::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::Falsified);
    let w = rep.witness.unwrap();
    assert!(w.params.len() >= 11);
    let chain = w.validate(&e, &h1, &h2).unwrap();
    assert!(chain.len() > 10);
}

#[test]
fn tree_separated_pair_is_certified() {
    let t = ModelSpace::tree(4);
    let g = t.geodesic(&v("e"), &v("aaaaaa")).unwrap();
    let h1 = Curtain::new(&g, 1.0).unwrap();
    let h2 = Curtain::new(&g, 5.0).unwrap();
    let rep = l_separated(&t, &h1, &h2, 1, &small_budget()).unwrap();
    assert_eq!(rep.verdict, Verdict::CertifiedUpToBudget);
    assert!(rep.witness.is_none());
    assert_eq!(rep.candidates_used, 60);
}

#[test]
fn l_separated_rejects_equal_curtains() {
    let t = ModelSpace::tree(4);
    let g = t.geodesic(&v("e"), &v("aaaa")).unwrap();
    let h = Curtain::new(&g, 2.0).unwrap();
    assert!(matches!(
        l_separated(&t, &h, &h, 1, &small_budget()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn greedy_chain_examples() {
    let t = ModelSpace::tree(4);
    let y = v(&"a".repeat(12));
    let c = greedy_dual_l_chain(&t, &v("e"), &y, 1, &small_budget()).unwrap();
    assert!(c.len() >= 2);
    assert!(1 + c.len() as u64 >= 3);
    // the chain is a chain, and each adjacent pair passes the falsifier
    is_chain(&t, &c.curtains, &v("e")).unwrap();
    for w in c.curtains.windows(2) {
        let rep = l_separated(&t, &w[0], &w[1], 1, &small_budget()).unwrap();
        assert_eq!(rep.verdict, Verdict::CertifiedUpToBudget);
    }

    let e = ModelSpace::euclidean();
    let c = greedy_dual_l_chain(
        &e,
        &Point::flat(-3.0, 1.0),
        &Point::flat(6.0, 4.0),
        5,
        &small_budget(),
    )
    .unwrap();
    assert!(c.len() <= 1);

    let c = greedy_dual_l_chain(
        &e,
        &Point::flat(0.0, 0.0),
        &Point::flat(0.9, 0.0),
        1,
        &small_budget(),
    )
    .unwrap();
    assert!(c.is_empty());
}

#[test]
fn d_l_lower_is_monotone_in_l_and_below_d_inf() {
    let mut rng = stream(3, Domain::Audit, 0);
    for space in [
        ModelSpace::tree(4),
        ModelSpace::hyperbolic(),
        ModelSpace::tree_times_line(4),
    ] {
        for _ in 0..6 {
            let x = space.random_point(&space.basepoint, 4.0, &mut rng);
            let y = space.random_point(&space.basepoint, 4.0, &mut rng);
            let mut search = DualChainSearch::new(&space, &x, &y, &small_budget()).unwrap();
            let sizes: Vec<usize> = (1..=4).map(|l| search.greedy(l).len()).collect();
            assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");
            let d = space.d(&x, &y);
            if d > 0.0 {
                let (ceil, _) = d_inf(&space, &x, &y).unwrap();
                assert!((*sizes.last().unwrap() as u64) < ceil);
            }
        }
    }
}

#[test]
fn star_convexity_examples() {
    let mut rng = stream(5, Domain::Audit, 1);
    let e = ModelSpace::euclidean();
    let g = e
        .geodesic(&Point::flat(0.0, 0.0), &Point::flat(10.0, 0.0))
        .unwrap();
    let slab = Curtain::new(&g, 5.0).unwrap();
    let pts = curtain_cloud(&e, &slab, 200, 20.0, &mut rng);
    assert_eq!(star_convexity_audit(&e, &slab, &pts).unwrap(), 0);

    let t = ModelSpace::tree(4);
    let g = t.geodesic(&v("Ab"), &v("aab")).unwrap();
    let h = Curtain::new(&g, 2.0).unwrap();
    let pts = curtain_cloud(&t, &h, 1000, 5.0, &mut rng);
    assert_eq!(star_convexity_audit(&t, &h, &pts).unwrap(), 0);

    let hp = ModelSpace::hyperbolic();
    let g = hp
        .geodesic(
            &Point::uhp(0.0, 1.0).unwrap(),
            &Point::uhp(0.0, 4f64.exp()).unwrap(),
        )
        .unwrap();
    let h = Curtain::new(&g, 2.0).unwrap();
    let pts = curtain_cloud(&hp, &h, 1000, 6.0, &mut rng);
    assert_eq!(star_convexity_audit(&hp, &h, &pts).unwrap(), 0);
}

#[test]
fn bottleneck_on_the_dual_geodesic_is_trivial() {
    let t = ModelSpace::tree(4);
    let x1 = v("e");
    let y1 = v(&"ab".repeat(6));
    let chain = greedy_dual_l_chain(&t, &x1, &y1, 1, &small_budget()).unwrap();
    assert!(chain.len() >= 3);
    let chain3 = Chain {
        curtains: chain.curtains[..3].to_vec(),
        reference: x1.clone(),
    };
    let excess = bottleneck_audit(&t, &chain3, &x1, &y1, 1).unwrap();
    assert!(excess <= -3.0 + 1e-12);
}

#[test]
fn bottleneck_hypotheses_are_checked() {
    let t = ModelSpace::tree(4);
    let x1 = v("e");
    let y1 = v(&"ab".repeat(6));
    let chain = greedy_dual_l_chain(&t, &x1, &y1, 1, &small_budget()).unwrap();
    let chain3 = Chain {
        curtains: chain.curtains[..3].to_vec(),
        reference: x1.clone(),
    };
    assert!(bottleneck_audit(&t, &chain3, &y1, &x1, 1).is_err());
}

#[test]
fn sampled_audits_have_no_violations() {
    for space in [
        ModelSpace::tree(4),
        ModelSpace::hyperbolic(),
        ModelSpace::euclidean(),
        ModelSpace::tree_times_line(4),
    ] {
        let s = axiom_audits(&space, 100, 11);
        assert_eq!(s.violations(), 0, "{:?}: {s:?}", space.kind);
    }
    // the hyperbolic plane has no 1-chains of three curtains (every pair is
    // falsified at L = 1), so it is audited at L = 2
    for (space, l) in [
        (ModelSpace::tree(4), 1),
        (ModelSpace::tree(4), 2),
        (ModelSpace::hyperbolic(), 2),
    ] {
        let s = bottleneck_audits(&space, l, 4, 10, 12.0, &small_budget(), 2);
        assert!(s.bottleneck_configurations > 0, "{:?}", space.kind);
        assert_eq!(s.bottleneck_violations, 0, "{:?}: {s:?}", space.kind);
    }
}

#[test]
fn four_point_degenerate_quadruple() {
    let t = ModelSpace::tree(4);
    let x = v("ab");
    let d = four_point_delta(&t, &x, &x, &x, &v("e"), 1, &small_budget()).unwrap();
    assert_eq!(d, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn thickness_on_common_geodesic(a in -5.0f64..5.0, b in -5.0f64..5.0, t in 0.5f64..9.5, ya in -9.0f64..9.0, yb in -9.0f64..9.0) {
        let e = ModelSpace::euclidean();
        let g = e.geodesic(&Point::flat(0.0, 0.0), &Point::flat(10.0, 0.0)).unwrap();
        let h = Curtain::new(&g, t).unwrap();
        let x = Point::flat(t - 0.5 - a.abs() - 1e-12, ya);
        let y = Point::flat(t + 0.5 + b.abs() + 1e-12, yb);
        prop_assert_eq!(h.side_of(&x), Side::Minus);
        prop_assert_eq!(h.side_of(&y), Side::Plus);
        prop_assert!(e.d(&x, &y) >= 1.0 - 1e-6);
    }

    #[test]
    fn witness_chains_revalidate(seed in 0u64..20) {
        let e = ModelSpace::euclidean();
        let mut rng = stream(seed, Domain::Audit, 9);
        let x = e.random_point(&e.basepoint, 5.0, &mut rng);
        let y = e.random_on_sphere(&x, 8.0, &mut rng);
        let g = e.seg(&x, &y);
        let h1 = Curtain::new(&g, 1.0).unwrap();
        let h2 = Curtain::new(&g, 6.5).unwrap();
        let rep = l_separated(&e, &h1, &h2, 2, &small_budget()).unwrap();
        prop_assert_eq!(rep.verdict, Verdict::Falsified);
        let w = rep.witness.unwrap();
        prop_assert!(w.validate(&e, &h1, &h2).is_ok());
    }

    #[test]
    fn euclidean_lower_bound_is_degenerate(seed in 0u64..16, l in 1usize..4) {
        let e = ModelSpace::euclidean();
        let mut rng = stream(seed, Domain::Audit, 4);
        let x = e.random_point(&e.basepoint, 6.0, &mut rng);
        let y = e.random_point(&e.basepoint, 6.0, &mut rng);
        prop_assert!(d_l_lower(&e, &x, &y, l, &small_budget()).unwrap() <= 2);
    }
}
