use curtainlab::geometry::hyperbolic::Ideal;
use curtainlab::geometry::tree::TreeRay;
use curtainlab::geometry::{BoundaryProxy, ModelSpace, Point};
use curtainlab::rng::{stream, Domain};
use curtainlab::Error;
use proptest::prelude::*;

fn v(s: &str) -> Point {
    Point::vertex(s).unwrap()
}

fn h(re: f64, im: f64) -> Point {
    Point::uhp(re, im).unwrap()
}

fn ray(valence: u8, s: &str) -> BoundaryProxy {
    BoundaryProxy::Tree(TreeRay::parse(valence, s).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn spaces() -> Vec<ModelSpace> {
    vec![
        ModelSpace::tree(4),
        ModelSpace::hyperbolic(),
        ModelSpace::euclidean(),
        ModelSpace::tree_times_line(4),
    ]
}

#[test]
fn distance_examples() {
    let e = ModelSpace::euclidean();
    assert!(close(e.distance(&Point::flat(0.0, 0.0), &Point::flat(3.0, 4.0)).unwrap(), 5.0, 1e-12));
    let hyp = ModelSpace::hyperbolic();
    let d = hyp.distance(&h(0.0, 1.0), &h(0.0, 2.0)).unwrap();
    assert!(close(d, 2f64.ln(), 1e-12));
    assert!(close(d.cosh(), 1.25, 1e-12));
    let t = ModelSpace::tree(4);
    assert_eq!(t.distance(&v("e"), &v("ab")).unwrap(), 2.0);
}

#[test]
fn distance_rejects_bad_coordinates() {
    assert!(matches!(Point::uhp(0.0, -1.0), Err(Error::Domain(_))));
    let t = ModelSpace::tree(4);
    // `c` is not a letter of the 4-valent tree
    let bad = Point::vertex("c").unwrap();
    assert!(matches!(t.distance(&v("e"), &bad), Err(Error::Domain(_))));
    let hyp = ModelSpace::hyperbolic();
    assert!(hyp.distance(&v("e"), &h(0.0, 1.0)).is_err());
}

#[test]
fn geodesic_examples() {
    let e = ModelSpace::euclidean();
    let g = e.geodesic(&Point::flat(0.0, 0.0), &Point::flat(2.0, 0.0)).unwrap();
    assert_eq!(g.eval(1.0), Point::flat(1.0, 0.0));
    let t = ModelSpace::tree(4);
    let g = t.geodesic(&v("e"), &v("aa")).unwrap();
    assert_eq!(g.eval(1.0), v("a"));
    let hyp = ModelSpace::hyperbolic();
    let g = hyp.geodesic(&h(0.0, 1.0), &h(0.0, 4.0)).unwrap();
    let mid = g.eval(2f64.ln());
    assert!(hyp.distance(&mid, &h(0.0, 2.0)).unwrap() < 1e-12);
}

#[test]
fn projection_examples() {
    let e = ModelSpace::euclidean();
    let g = e.geodesic(&Point::flat(0.0, -1.0), &Point::flat(0.0, 1.0)).unwrap();
    let (foot, t) = g.project(&Point::flat(1.0, 0.0));
    assert!(e.d(&foot, &Point::flat(0.0, 0.0)) < 1e-12);
    assert!(close(t, 1.0, 1e-12));

    let tr = ModelSpace::tree(4);
    let g = tr.geodesic(&v("a"), &v("aa")).unwrap();
    assert_eq!(g.project(&v("b")).0, v("a"));

    // numeric minimisation of the distance along the segment
    let hyp = ModelSpace::hyperbolic();
    let g = hyp.geodesic(&h(0.0, 1.0), &h(0.0, 4.0)).unwrap();
    let x = h(1.0, 1.0);
    let (mut lo, mut hi) = (0.0, g.length);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if hyp.d(&g.eval(m1), &x) < hyp.d(&g.eval(m2), &x) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let (foot, t) = g.project(&x);
    assert!(close(t, 0.5 * (lo + hi), 1e-7));
    assert!(hyp.d(&foot, &h(0.0, 2f64.sqrt())) < 1e-7);
}

#[test]
fn busemann_examples() {
    let mut rng = stream(1, Domain::Audit, 0);
    for s in spaces() {
        let xi = s.random_boundary(&mut rng);
        let z = s.random_point(&s.basepoint, 3.0, &mut rng);
        assert_eq!(s.busemann(&xi, &z, &z), 0.0);
    }
    let t = ModelSpace::tree(4);
    assert_eq!(t.busemann(&ray(4, "aaa…"), &v("e"), &v("a")), -1.0);

    let hyp = ModelSpace::hyperbolic();
    let b = hyp.busemann(&BoundaryProxy::Ideal(Ideal::Infinity), &h(0.0, 1.0), &h(0.0, 2.0));
    assert!(close(b, -(2f64.ln()), 1e-12));
    // the same value as a limit along x_n = 10⁶ i
    let far = h(0.0, 1e6);
    let limit = hyp.d(&h(0.0, 2.0), &far) - hyp.d(&h(0.0, 1.0), &far);
    assert!(close(b, limit, 1e-6));
}

#[test]
fn gromov_product_examples() {
    let t6 = ModelSpace::tree(6);
    assert_eq!(t6.gromov_product(&v("ab"), &v("ac"), &v("e")), 1.0);
    let e = ModelSpace::euclidean();
    let o = Point::flat(0.0, 0.0);
    let gp = e.gromov_product(&Point::flat(2.0, 0.0), &Point::flat(0.0, 2.0), &o);
    assert!(close(gp, 2.0 - 2f64.sqrt(), 1e-12));
    let mut rng = stream(2, Domain::Audit, 0);
    for s in spaces() {
        let x = s.random_point(&s.basepoint, 3.0, &mut rng);
        assert!(s.gromov_product(&x, &s.basepoint, &s.basepoint).abs() < 1e-12);
    }
}

#[test]
fn boundary_gromov_product_examples() {
    let t6 = ModelSpace::tree(6);
    let o = v("e");
    assert_eq!(t6.gromov_product_boundary(&ray(6, "ab…"), &ray(6, "ac…"), &o), 1.0);
    assert_eq!(t6.gromov_product_boundary(&ray(6, "a…"), &ray(6, "b…"), &o), 0.0);
    assert_eq!(t6.gromov_product_boundary(&ray(6, "ab…"), &ray(6, "ab…"), &o), f64::INFINITY);
    // limit of interior products along the two rays
    let (x, y) = (ray(6, "ab…"), ray(6, "ac…"));
    for r in [3.0, 10.0, 40.0] {
        let inner = t6.gromov_product(&t6.approach(&x, r), &t6.approach(&y, r), &o);
        assert_eq!(inner, 1.0);
    }
    let hyp = ModelSpace::hyperbolic();
    let i = h(0.0, 1.0);
    let xi = BoundaryProxy::Ideal(Ideal::Real(0.3));
    assert_eq!(hyp.gromov_product_boundary(&xi, &xi, &i), f64::INFINITY);
}

#[test]
fn mixed_gromov_product_examples() {
    let t = ModelSpace::tree(4);
    let o = v("e");
    let x = ray(4, "aaa…");
    assert_eq!(t.mixed_gromov_product(&o, &x, &o), 0.0);
    assert_eq!(t.mixed_gromov_product(&v("a"), &x, &o), 1.0);
    assert_eq!(t.mixed_gromov_product(&v("b"), &x, &o), 0.0);
}

#[test]
fn boundary_product_is_monotone_limit_of_interior_products() {
    let t = ModelSpace::tree(4);
    let o = v("e");
    let mut rng = stream(9, Domain::Audit, 0);
    for _ in 0..200 {
        let x = t.random_boundary(&mut rng);
        let y = t.random_boundary(&mut rng);
        let limit = t.gromov_product_boundary(&x, &y, &o);
        let vals: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0, 64.0]
            .iter()
            .map(|&r| t.gromov_product(&t.approach(&x, r), &t.approach(&y, r), &o))
            .collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{vals:?}");
        assert!(vals.iter().all(|&g| g <= limit + 1e-12));
        if limit.is_finite() {
            assert_eq!(*vals.last().unwrap(), limit);
            // deeper comparison does not move a finite value
            assert_eq!(t.gromov_product_boundary_at(&x, &y, &o, 200), limit);
        }
    }
}

fn space_strategy() -> impl Strategy<Value = ModelSpace> {
    prop_oneof![
        Just(ModelSpace::tree(4)),
        Just(ModelSpace::tree(3)),
        Just(ModelSpace::hyperbolic()),
        Just(ModelSpace::euclidean()),
        Just(ModelSpace::tree_times_line(4)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn metric_axioms(space in space_strategy(), seed in any::<u64>()) {
        let mut rng = stream(seed, Domain::Audit, 0);
        let o = space.basepoint.clone();
        let x = space.random_point(&o, 6.0, &mut rng);
        let y = space.random_point(&o, 6.0, &mut rng);
        let z = space.random_point(&o, 6.0, &mut rng);
        let (dxy, dyx) = (space.d(&x, &y), space.d(&y, &x));
        prop_assert!(dxy >= 0.0);
        prop_assert!(space.d(&x, &x).abs() < 1e-9);
        prop_assert!((dxy - dyx).abs() < 1e-9);
        prop_assert!(space.d(&x, &z) <= dxy + space.d(&y, &z) + 1e-9);
    }

    #[test]
    fn projection_is_one_lipschitz_and_idempotent(space in space_strategy(), seed in any::<u64>(), s in 0.0f64..1.0) {
        let mut rng = stream(seed, Domain::Audit, 1);
        let o = space.basepoint.clone();
        let a = space.random_point(&o, 5.0, &mut rng);
        let b = space.random_point(&o, 5.0, &mut rng);
        let g = space.seg(&a, &b);
        let x = space.random_point(&o, 7.0, &mut rng);
        let y = space.random_point(&o, 7.0, &mut rng);
        let (px, tx) = g.project(&x);
        let (py, _) = g.project(&y);
        prop_assert!(space.d(&px, &py) <= space.d(&x, &y) + 1e-9);
        // points of [x, π(x)] project to π(x)
        let back = space.seg(&x, &px);
        let x2 = back.eval(s * back.length);
        prop_assert!((g.project_param(&x2) - tx).abs() < 1e-7);
    }

    #[test]
    fn tree_paths_hit_their_vertices(seed in any::<u64>()) {
        use curtainlab::geometry::SegShape;
        let space = ModelSpace::tree(4);
        let mut rng = stream(seed, Domain::Audit, 3);
        let a = space.random_point(&space.basepoint, 6.0, &mut rng);
        let b = space.random_point(&space.basepoint, 6.0, &mut rng);
        let g = space.seg(&a, &b);
        let SegShape::Tree(path) = &g.shape else { unreachable!() };
        for s in path.vertex_params() {
            prop_assert!(path.eval(s).is_vertex(), "{s}");
        }
    }

    #[test]
    fn busemann_is_one_lipschitz(space in space_strategy(), seed in any::<u64>()) {
        let mut rng = stream(seed, Domain::Audit, 2);
        let o = space.basepoint.clone();
        let xi = space.random_boundary(&mut rng);
        let z = space.random_point(&o, 6.0, &mut rng);
        let w = space.random_point(&o, 6.0, &mut rng);
        let diff = space.busemann(&xi, &o, &z) - space.busemann(&xi, &o, &w);
        prop_assert!(diff.abs() <= space.d(&z, &w) + 1e-9);
    }
}
