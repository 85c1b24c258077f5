use flat_kernel::catalog::*;
use flat_kernel::rational::one;
use flat_kernel::*;
use num_complex::Complex64;
use proptest::prelude::*;
use teich_flow::*;

fn tp(re: f64, im: f64) -> TorusPoint {
    TorusPoint::new(Complex64::new(re, im)).unwrap()
}

/// Half the upper half-plane distance from the cross-ratio formula.
fn cross_ratio_distance(a: &TorusPoint, b: &TorusPoint) -> f64 {
    let near = (a.tau - b.tau).norm();
    let far = (a.tau - b.tau.conj()).norm();
    0.5 * ((far + near) / (far - near)).ln()
}

#[test]
fn flow_at_zero_is_identity() {
    let s = slit_torus();
    assert_eq!(flow(&s, 0.0).unwrap(), s);
}

#[test]
fn exact_factor_two_gives_the_two_by_one_torus() {
    let s = flow_exact(&square_torus(), &qi(2)).unwrap();
    assert_eq!(s, rectangle_torus(&qi(2), &one()));
    assert!(isometric(&s, &rectangle_torus(&qi(2), &one())).unwrap());
}

#[test]
fn flow_stretches_only_horizontal_spans() {
    let s = slit_torus();
    let k = q(7, 3);
    let f = flow_exact(&s, &k).unwrap();
    for (p, fp) in s.polygons().iter().zip(f.polygons()) {
        for e in 0..p.len() {
            let a = p.edge_vector(e);
            let b = fp.edge_vector(e);
            assert_eq!(a.y, b.y);
            assert_eq!(&a.x * &k, b.x);
        }
    }
    assert_eq!(f.area(), &s.area() * &k);
}

#[test]
fn float_flow_scales_area_and_inverts_exactly() {
    let s = square_torus();
    for t in [-1.3, -0.2, 0.4, 2.0] {
        let f = flow(&s, t).unwrap();
        let area = flat_kernel::rational::to_f64(&f.area());
        assert!((area - (2.0 * t).exp()).abs() < 1e-12 * area.max(1.0));
        let back = flow(&f, -t).unwrap();
        assert!(isometric(&s, &back).unwrap());
    }
}

#[test]
fn flow_preserves_cone_orders_and_genus() {
    for s in [slit_torus(), generic_four_zero_surface(211)] {
        let f = flow(&s, 0.7).unwrap();
        let orders = |x: &FlatSurface| x.cone_data().iter().map(|c| c.order).collect::<Vec<_>>();
        assert_eq!(orders(&s), orders(&f));
        assert_eq!(s.genus(), f.genus());
    }
}

#[test]
fn invalid_scale_is_rejected() {
    assert!(matches!(flow_exact(&square_torus(), &qi(0)), Err(FlowError::InvalidScale(_))));
    assert!(matches!(flow_exact(&square_torus(), &qi(-2)), Err(FlowError::InvalidScale(_))));
    assert!(matches!(flow(&square_torus(), 1e6), Err(FlowError::NonFiniteTime(_))));
}

#[test]
fn ray_parameter_conversions() {
    let r = RayParameter::from_scale(4.0).unwrap();
    assert!((r.t - 2f64.ln()).abs() < 1e-15);
    assert!((r.scale() - 4.0).abs() < 1e-12);
    let r = RayParameter::from_log_time(0.0).unwrap();
    assert_eq!(r.t, 1.0);
}

#[test]
fn torus_distance_examples() {
    assert_eq!(torus_teich_distance(&tp(0.3, 1.7), &tp(0.3, 1.7)), 0.0);
    let d = torus_teich_distance(&tp(0.0, 1.0), &tp(0.0, 2.0));
    assert!((d - 0.5 * 2f64.ln()).abs() < 1e-15);
    assert!((d - cross_ratio_distance(&tp(0.0, 1.0), &tp(0.0, 2.0))).abs() < 1e-15);
    let l = torus_teich_distance(&tp(0.0, 1.0), &tp(1.0, 1.0));
    let r = torus_teich_distance(&tp(0.0, 1.0), &tp(-1.0, 1.0));
    assert_eq!(l, r);
    assert!(TorusPoint::new(Complex64::new(0.0, -1.0)).is_err());
}

#[test]
fn lattice_of_polygon_tori() {
    let l = ExactLattice::of_surface(&rectangle_torus(&qi(2), &one())).unwrap();
    let expected = ExactLattice { w1: Vec2::new(qi(2), qi(0)), w2: Vec2::new(qi(0), qi(1)) };
    assert!(l.same_lattice(&expected));
    let s = SlitTorus::theta().build().unwrap();
    assert!(matches!(ExactLattice::of_surface(&s), Err(TorusError::NotATorus(2))));
}

#[test]
fn reduction_lands_in_fundamental_domain() {
    let t = tp(3.7, 0.05).reduced().tau;
    assert!(t.re.abs() <= 0.5 + 1e-12 && t.norm() >= 1.0 - 1e-12);
}

proptest! {
    #[test]
    fn distance_matches_cross_ratio_and_is_symmetric(
        a in -3.0f64..3.0, b in 0.05f64..5.0, c in -3.0f64..3.0, d in 0.05f64..5.0,
        e in -3.0f64..3.0, f in 0.05f64..5.0,
    ) {
        let (x, y, z) = (tp(a, b), tp(c, d), tp(e, f));
        let dxy = torus_teich_distance(&x, &y);
        prop_assert!((dxy - cross_ratio_distance(&x, &y)).abs() < 1e-9 * (1.0 + dxy));
        prop_assert_eq!(dxy, torus_teich_distance(&y, &x));
        prop_assert!(dxy <= torus_teich_distance(&x, &z) + torus_teich_distance(&z, &y) + 1e-12);
    }

    #[test]
    fn flow_semigroup(n1 in 1i64..20, d1 in 1i64..20, n2 in 1i64..20, d2 in 1i64..20) {
        let s = slit_torus();
        let (k1, k2) = (q(n1, d1), q(n2, d2));
        let two_steps = flow_exact(&flow_exact(&s, &k1).unwrap(), &k2).unwrap();
        let one_step = flow_exact(&s, &(&k1 * &k2)).unwrap();
        prop_assert!(isometric(&two_steps, &one_step).unwrap());
    }

    #[test]
    fn lattice_basis_spans_generators(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9, m in 1i64..5) {
        prop_assume!(a * d - b * c != 0);
        let u = Vec2::new(q(a, 3), q(b, 1));
        let v = Vec2::new(q(c, 3), q(d, 1));
        let w = &(&u * &qi(m)) + &v;
        let basis = lattice_basis(&[u.clone(), w.clone(), v.clone()]).unwrap();
        let direct = lattice_basis(&[u, v]).unwrap();
        prop_assert!(basis.same_lattice(&direct));
        prop_assert!(basis.area() > qi(0));
        prop_assert_eq!(basis.area(), flat_kernel::rational::abs(&(qi(a * d - b * c) / qi(3))));
    }
}
