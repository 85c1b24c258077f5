use flat_kernel::catalog::*;
use flat_kernel::rational::{one, zero};
use flat_kernel::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Cone angles by floating interior-angle summation, independent of the exact sweep count.
fn angle_oracle(s: &FlatSurface) -> BTreeMap<usize, f64> {
    let mut sum = BTreeMap::new();
    for (pi, p) in s.polygons().iter().enumerate() {
        let n = p.len();
        for i in 0..n {
            let (ax, ay) = (p.vertex(i + n - 1) - p.vertex(i)).to_f64();
            let (bx, by) = (p.vertex(i + 1) - p.vertex(i)).to_f64();
            // Interior angle at a counterclockwise vertex, from the outgoing to the incoming edge.
            let mut a = ay.atan2(ax) - by.atan2(bx);
            if a <= 0.0 {
                a += 2.0 * std::f64::consts::PI;
            }
            *sum.entry(s.class_of(Corner::new(pi, i))).or_insert(0.0) += a / std::f64::consts::PI;
        }
    }
    sum
}

fn all_surfaces() -> Vec<FlatSurface> {
    vec![
        square_torus(),
        rectangle_torus(&qi(2), &one()),
        marked_square_torus(),
        slit_torus(),
        SlitTorus::two_interval().build().unwrap(),
        generic_four_zero_surface(211),
        one_cylinder_surface(&one(), &qi(2), [q(1, 2), q(1, 1), q(1, 2)]).unwrap(),
    ]
}

#[test]
fn square_torus_is_flat_genus_one() {
    let s = square_torus();
    assert!(s.cone_data().is_empty());
    assert_eq!(s.genus(), 1);
    assert_eq!(s.area(), one());
    let r = rectangle_torus(&qi(2), &one());
    assert_eq!(r.genus(), 1);
    assert_eq!(r.area(), qi(2));
}

#[test]
fn slit_torus_has_two_double_zeros() {
    let s = slit_torus();
    assert_eq!(s.genus(), 2);
    let cones = s.cone_data();
    assert_eq!(cones.len(), 2);
    for c in &cones {
        assert_eq!(c.angle_pi, 4);
        assert_eq!(c.order, 2);
    }
    let oracle = angle_oracle(&s);
    for c in &cones {
        assert!((oracle[&c.vertex_class] - 4.0).abs() < 1e-9);
    }
    assert_eq!(s.order_sum(), 4);
}

#[test]
fn other_catalog_surfaces() {
    let s = SlitTorus::two_interval().build().unwrap();
    assert_eq!(s.genus(), 2);
    assert_eq!(s.cone_data().iter().map(|c| c.order).collect::<Vec<_>>(), vec![4]);
    let g = generic_four_zero_surface(211);
    assert_eq!(g.genus(), 2);
    let orders: Vec<i32> = g.cone_data().iter().map(|c| c.order).collect();
    assert_eq!(orders, vec![1, 1, 1, 1]);
    let c = one_cylinder_surface(&one(), &one(), [q(1, 4), q(1, 2), q(1, 4)]).unwrap();
    assert_eq!(c.genus(), 2);
    assert_eq!(c.cone_data().len(), 1);
}

#[test]
fn angle_sums_match_oracle_everywhere() {
    for s in all_surfaces() {
        let oracle = angle_oracle(&s);
        for (i, class) in s.vertex_classes().iter().enumerate() {
            assert!((oracle[&i] - class.angle_pi as f64).abs() < 1e-9, "{}", s.describe());
        }
    }
}

#[test]
fn mismatched_gluing_is_rejected() {
    let r = Polygon::rectangle(&zero(), &zero(), &one(), &qi(2));
    let g = vec![
        Gluing::translation(EdgeRef::new(0, 0), EdgeRef::new(0, 1)),
        Gluing::translation(EdgeRef::new(0, 2), EdgeRef::new(0, 3)),
    ];
    assert!(matches!(build_surface(vec![r.clone()], g), Err(SurfaceError::VectorMismatch { .. })));
    let g = vec![Gluing::translation(EdgeRef::new(0, 0), EdgeRef::new(0, 2))];
    assert!(matches!(build_surface(vec![r.clone()], g), Err(SurfaceError::UnmatchedEdge(_))));
    let g = vec![
        Gluing::translation(EdgeRef::new(0, 0), EdgeRef::new(0, 2)),
        Gluing::translation(EdgeRef::new(0, 1), EdgeRef::new(0, 3)),
        Gluing::translation(EdgeRef::new(1, 0), EdgeRef::new(1, 2)),
        Gluing::translation(EdgeRef::new(1, 1), EdgeRef::new(1, 3)),
    ];
    assert!(matches!(build_surface(vec![r.clone(), r], g), Err(SurfaceError::Disconnected)));
}

#[test]
fn folded_rectangle_is_a_simple_pole() {
    // Pillowcase: each horizontal side folded onto itself around its midpoint.
    let pts = [(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1)];
    let r = Polygon::new(pts.iter().map(|&(x, y)| Vec2::new(qi(x), qi(y))).collect());
    let e = |i| EdgeRef::new(0, i);
    let g = vec![Gluing::rotation(e(0), e(1)), Gluing::rotation(e(3), e(4)), Gluing::translation(e(2), e(5))];
    let s = build_surface(vec![r], g);
    assert!(matches!(s, Err(SurfaceError::SimplePole(_))), "{s:?}");
}

#[test]
fn isometry_examples() {
    let s = square_torus();
    let r = rectangle_torus(&qi(2), &one());
    assert!(!isometric(&s, &r).unwrap());
    assert!(isometric(&s, &s).unwrap());
    let theta = slit_torus();
    let two = SlitTorus::two_interval().build().unwrap();
    assert!(isometric(&theta, &theta).unwrap());
    assert!(!isometric(&theta, &two).unwrap());
    // Same rectangle torus cut differently is not a relabeling of polygons.
    let mut rl = Relabeling::identity(&theta);
    rl.perm = vec![1, 0];
    rl.rotate = vec![true, false];
    rl.shift = vec![3, 1];
    let moved = rl.apply(&theta).unwrap();
    assert!(isometric(&theta, &moved).unwrap());
    assert!(isometric(&moved, &theta).unwrap());
}

#[test]
fn isometry_size_cap() {
    let s = square_torus();
    assert!(matches!(
        isometric_with_limit(&s, &s, 0),
        Err(IsometryError::SizeLimitExceeded { found: 1, limit: 0 })
    ));
}

#[test]
fn marking_distinguishes_surfaces() {
    let plain = square_torus();
    let marked = marked_square_torus();
    assert!(!isometric(&plain, &marked).unwrap());
    assert!(isometric(&marked, &marked).unwrap());
    assert_eq!(marked.vertex_classes().iter().filter(|c| c.label.is_some()).count(), 1);
}

fn random_relabeling(s: &FlatSurface, rng: &mut ChaCha8Rng) -> Relabeling {
    let n = s.polygons().len();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    Relabeling {
        perm,
        shift: (0..n).map(|_| rng.gen_range(0..12)).collect(),
        rotate: (0..n).map(|_| rng.gen_bool(0.5)).collect(),
        translate: (0..n).map(|_| Vec2::new(q(rng.gen_range(-9..9), 7), q(rng.gen_range(-9..9), 5))).collect(),
        swap_sides: (0..s.gluings().len()).map(|_| rng.gen_bool(0.5)).collect(),
    }
}

#[test]
fn invariants_survive_random_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let surfaces = all_surfaces();
    for trial in 0..100 {
        let s = &surfaces[trial % surfaces.len()];
        let r = random_relabeling(s, &mut rng).apply(s).unwrap();
        let orders = |x: &FlatSurface| {
            let mut o: Vec<i32> = x.cone_data().iter().map(|c| c.order).collect();
            o.sort();
            o
        };
        assert_eq!(orders(s), orders(&r));
        assert_eq!(s.genus(), r.genus());
        assert_eq!(s.area(), r.area());
        assert!(isometric(s, &r).unwrap());
    }
}

fn gauss_bonnet(s: &FlatSurface) {
    assert_eq!(s.order_sum(), 4 * s.genus() as i64 - 4);
}

#[test]
fn gauss_bonnet_on_catalog() {
    for s in all_surfaces() {
        gauss_bonnet(&s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_bonnet_on_random_slit_tori(
        k in 2usize..5,
        raw in proptest::collection::vec(1i64..20, 5),
        shuffle in proptest::collection::vec(0usize..100, 5),
        shear_num in 1i64..10,
    ) {
        let pieces: Vec<Q> = raw[..k].iter().map(|&r| q(r, 100)).collect();
        let mut perm: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            perm.swap(i, shuffle[i] % (i + 1));
        }
        let st = SlitTorus { shear: q(shear_num, 37), x0: q(1, 2), y0: q(1, 10), pieces, perm };
        match st.build() {
            Ok(s) => gauss_bonnet(&s),
            // Permutations fixing the top or bottom piece fold back a π corner or leave it regular.
            Err(e) => prop_assert!(matches!(e, SurfaceError::SimplePole(_)), "{e}"),
        }
    }

    #[test]
    fn gluing_maps_are_involutions(idx in 0usize..7, edge_pick in 0usize..64, num in 0i64..=16) {
        let s = &all_surfaces()[idx];
        let edges: Vec<EdgeRef> = s.edge_refs().collect();
        let e = edges[edge_pick % edges.len()];
        let p = s.polygon(e.poly);
        let t = q(num, 16);
        let pt = p.edge_start(e.edge) + &(&p.edge_vector(e.edge) * &t);
        let link = s.link(e);
        let image = link.map.apply(&pt);
        // The image lies on the partner edge, at the mirrored parameter.
        let pp = s.polygon(link.to.poly);
        let expected = pp.edge_end(link.to.edge) - &(&pp.edge_vector(link.to.edge) * &t);
        prop_assert_eq!(&image, &expected);
        let back = s.link(link.to).map.apply(&image);
        prop_assert_eq!(back, pt);
    }
}

/// The square torus cut into a left and a right rectangle.
fn two_strip_torus(split: Q) -> FlatSurface {
    let z = zero();
    let rest = one() - &split;
    let polys = vec![Polygon::rectangle(&z, &z, &split, &one()), Polygon::rectangle(&z, &z, &rest, &one())];
    let e = EdgeRef::new;
    let g = vec![
        Gluing::translation(e(0, 1), e(1, 3)),
        Gluing::translation(e(1, 1), e(0, 3)),
        Gluing::translation(e(0, 2), e(0, 0)),
        Gluing::translation(e(1, 2), e(1, 0)),
    ];
    FlatSurface::new(polys, g, Marking::default()).unwrap()
}

#[test]
fn rectilinear_isometry_ignores_the_decomposition() {
    let s = square_torus();
    let cut = two_strip_torus(q(1, 3));
    assert!(!isometric(&s, &cut).unwrap());
    assert!(isometric_rectilinear(&s, &cut, CELL_LIMIT).unwrap());
    assert!(isometric_rectilinear(&two_strip_torus(q(1, 4)), &cut, CELL_LIMIT).unwrap());
    let wide = rectangle_torus(&q(2, 1), &one());
    let tall = rectangle_torus(&one(), &q(2, 1));
    assert!(!isometric_rectilinear(&wide, &tall, CELL_LIMIT).unwrap());
    let c = one_cylinder_surface(&one(), &q(3, 1), [one(), one(), one()]).unwrap();
    let c2 = one_cylinder_surface(&one(), &q(3, 1), [one(), one(), one()]).unwrap();
    assert!(isometric_rectilinear(&c, &c2, CELL_LIMIT).unwrap());
    let other = one_cylinder_surface(&one(), &q(3, 1), [one(), q(1, 2), q(3, 2)]).unwrap();
    assert!(!isometric_rectilinear(&c, &other, CELL_LIMIT).unwrap());
    let turned = c.map_linear(&q(-1, 1), &zero(), &zero(), &q(-1, 1)).unwrap();
    assert!(isometric_rectilinear(&c, &turned, CELL_LIMIT).unwrap());
    assert!(matches!(isometric_rectilinear(&slit_torus(), &s, CELL_LIMIT), Err(CellError::NotRectilinear(_))));
    assert!(matches!(isometric_rectilinear(&c, &c2, 2), Err(CellError::CellLimitExceeded { .. })));
}
