use flat_kernel::catalog::{generic_four_zero_surface, marked_square_torus, one_cylinder_surface, slit_torus, SlitTorus};
use flat_kernel::rational::from_f64;
use flat_kernel::{q, qi, Q};
use half_plane::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use vertical_graph::ribbon::{EdgeKind, RibbonEdge, Slot};
use vertical_graph::{appended_graph, RibbonGraph};

fn sorted(mut v: Vec<Q>) -> Vec<Q> {
    v.sort();
    v
}

fn ray(v: usize, s: usize) -> RibbonEdge {
    RibbonEdge { kind: EdgeKind::Ray { at: Slot::new(v, s) }, length: None }
}

fn edge(a: (usize, usize), b: (usize, usize), l: Q) -> RibbonEdge {
    RibbonEdge { kind: EdgeKind::Finite { a: Slot::new(a.0, a.1), b: Slot::new(b.0, b.1) }, length: Some(l) }
}

fn tripod() -> RibbonGraph {
    RibbonGraph::new(vec![3], vec![ray(0, 0), ray(0, 1), ray(0, 2)]).unwrap()
}

fn loop_spine(c: Q) -> RibbonGraph {
    RibbonGraph::new(vec![2], vec![edge((0, 0), (0, 1), c)]).unwrap()
}

/// Two vertices with two rays each, joined by two edges: one end with two half-planes
/// whose sides carry one edge each.
fn ladder(a: Q, b: Q) -> RibbonGraph {
    RibbonGraph::new(vec![3, 3], vec![edge((0, 1), (1, 2), a), edge((0, 2), (1, 1), b), ray(0, 0), ray(1, 0)]).unwrap()
}

#[test]
fn planar_end_residues() {
    let e = PlanarEnd::new(vec![(qi(0), qi(1)), (qi(0), qi(3))]).unwrap();
    assert_eq!(metric_residue(&e), qi(2));
    assert_eq!(e.order(), 4);
    let same = PlanarEnd::new(vec![(qi(1), qi(4)); 4]).unwrap();
    assert_eq!(metric_residue(&same), qi(0));
    let odd = PlanarEnd::new(vec![(qi(0), qi(1)), (qi(2), qi(7)), (qi(-1), qi(0))]).unwrap();
    assert_eq!(metric_residue(&odd), qi(0));
    assert!(PlanarEnd::new(vec![(qi(1), qi(1))]).is_err());
    assert!(PlanarEnd::new(vec![]).is_err());
}

#[test]
fn crown_residues() {
    let c = CrownEnd::new(vec![(qi(0), qi(5)), (qi(0), qi(3))]).unwrap();
    assert_eq!(crown_residue(&c), qi(2));
    let moved = c.shift_basepoint(0, &q(17, 3)).shift_basepoint(1, &q(-2, 7));
    assert_eq!(crown_residue(&moved), qi(2));
    let five = CrownEnd::new((1..=5).map(|i| (qi(0), qi(i))).collect()).unwrap();
    assert_eq!(crown_residue(&five), qi(0));
}

#[test]
fn normalized_truncations() {
    let c = CrownEnd::from_side_lengths(&[qi(2), qi(3), qi(3), qi(2)]).unwrap();
    assert_eq!(crown_residue(&c), qi(0));
    assert_eq!(normalize_truncation(&c, &qi(10)).unwrap(), vec![qi(10); 4]);
    let c = CrownEnd::from_side_lengths(&[qi(1), qi(3)]).unwrap();
    assert_eq!(sorted(normalize_truncation(&c, &qi(10)).unwrap()), vec![qi(10), qi(12)]);
    let c = CrownEnd::from_side_lengths(&[qi(1), qi(4), q(1, 2)]).unwrap();
    assert_eq!(normalize_truncation(&c, &qi(10)).unwrap(), vec![qi(10); 3]);
    assert!(matches!(normalize_truncation(&c, &qi(1)), Err(HalfPlaneError::HTooSmall { .. })));
}

#[test]
fn tripod_spine_has_one_order_five_end() {
    let s = build_hps(&tripod()).unwrap();
    assert_eq!(s.half_plane_count(), 3);
    assert_eq!(s.cylinder_count(), 0);
    assert_eq!(s.ends.len(), 1);
    assert_eq!(s.ends[0].data.order, 5);
    assert_eq!(s.ends[0].data.residue, Residue::Planar(qi(0)));
}

#[test]
fn loop_spine_has_two_cylinder_ends() {
    let c = from_f64(2.0 * PI).unwrap();
    let s = build_hps(&loop_spine(c)).unwrap();
    assert_eq!(s.cylinder_count(), 2);
    assert_eq!(s.half_plane_count(), 0);
    assert_eq!(s.ends.len(), 2);
    for e in &s.ends {
        assert_eq!(e.data.order, 2);
        assert!((e.data.residue.value() - 1.0).abs() < 1e-15);
    }
    let s = build_hps(&loop_spine(qi(4))).unwrap();
    assert!((s.ends[0].data.residue.value() - 2.0 / PI).abs() < 1e-15);
}

#[test]
fn zero_length_cycle_is_unattachable() {
    let spine = loop_spine(qi(0));
    assert!(matches!(build_hps(&spine), Err(HalfPlaneError::UnattachableSide(_))));
}

#[test]
fn ladder_end_carries_the_edge_difference() {
    let spine = ladder(qi(3), qi(1));
    let s = build_hps(&spine).unwrap();
    let planar: Vec<_> = s.ends.iter().filter(|e| e.data.order > 2).collect();
    assert!(planar.iter().any(|e| e.data.order == 4 && e.data.residue == Residue::Planar(qi(2))));
}

#[test]
fn end_data_examples() {
    let s = build_hps(&ladder(qi(1), qi(3))).unwrap();
    let i = s.ends.iter().position(|e| e.data.order == 4).unwrap();
    let d = end_local_data(&s, i, None).unwrap();
    assert_eq!((d.order, d.residue.clone()), (4, Residue::Planar(qi(2))));
    assert!(d.leading_term.is_none());
    let with_chart = end_local_data(&s, i, Some(ModelChart { derivative: 2.0 })).unwrap();
    assert_eq!(with_chart.leading_term, Some((0.25, 0.0)));

    let cyl = build_hps(&loop_spine(from_f64(4.0 * PI).unwrap())).unwrap();
    let d = end_local_data(&cyl, 0, None).unwrap();
    assert_eq!(d.order, 2);
    assert!((d.residue.value() - 2.0).abs() < 1e-15);

    let t = build_hps(&tripod()).unwrap();
    let d = end_local_data(&t, 0, None).unwrap();
    assert_eq!((d.order, d.residue), (5, Residue::Planar(qi(0))));
    assert!(end_local_data(&t, 3, None).is_err());
}

#[test]
fn truncation_examples() {
    let cyl = build_hps(&loop_spine(qi(5))).unwrap();
    let t = truncate(&cyl, 0, &qi(6)).unwrap();
    assert_eq!(t.boundary, TruncationBoundary::Closed { circumference: qi(5), annulus_width: qi(3) });
    assert!(t.complement_is_punctured_disk);

    let tri = build_hps(&tripod()).unwrap();
    let t = truncate(&tri, 0, &qi(10)).unwrap();
    assert_eq!(t.boundary, TruncationBoundary::Polygonal { vertical_sides: vec![qi(10); 3], rectangle_widths: vec![qi(5); 3] });
    assert!(t.complement_is_punctured_disk);

    let lad = build_hps(&ladder(qi(1), qi(3))).unwrap();
    let i = lad.ends.iter().position(|e| e.data.order == 4).unwrap();
    let t = truncate(&lad, i, &qi(10)).unwrap();
    match t.boundary {
        TruncationBoundary::Polygonal { vertical_sides, rectangle_widths } => {
            assert_eq!(sorted(vertical_sides), vec![qi(10), qi(12)]);
            assert_eq!(rectangle_widths, vec![qi(5), qi(5)]);
        }
        other => panic!("{other:?}"),
    }
    assert!(t.complement_is_punctured_disk);
    assert!(matches!(truncate(&lad, i, &qi(0)), Err(HalfPlaneError::HTooSmall { .. })));
}

#[test]
fn leading_terms_and_schedule() {
    let a = Complex64::new(0.3, -1.2);
    assert_eq!(pullback_leading_term(a, 6, 1.0).unwrap(), a);
    assert_eq!(pullback_leading_term(a, 2, 7.5).unwrap(), a);
    assert_eq!(pullback_leading_term(Complex64::new(1.0, 0.0), 4, 2.0).unwrap(), Complex64::new(0.25, 0.0));
    assert!(pullback_leading_term(a, 4, 0.0).is_err());
    assert_eq!(truncation_height_schedule(1.0, 2, 0).unwrap(), 1.0);
    assert_eq!(truncation_height_schedule(1.0, 4, 1).unwrap(), 4.0);
    assert_eq!(truncation_height_schedule(2.0, 2, 3).unwrap(), 16.0);
}

#[test]
fn slit_torus_limit() {
    let y = y_infinity(&slit_torus(), &qi(2)).unwrap();
    assert_eq!(y.half_plane_count(), 2);
    assert_eq!(y.cylinder_count(), 0);
    assert_eq!(y.component_count(), 1);
    assert_eq!(y.ends.len(), 1);
    assert_eq!((y.ends[0].data.order, y.ends[0].data.residue.clone()), (4, Residue::Planar(qi(0))));
    // Both half-planes meet along the whole slit.
    let ex = boundary_exchange(&y);
    let cross: Q = ex.iter().filter(|p| p.from_side == 0 && p.to_side == 1).map(|p| &p.end - &p.start).sum();
    assert_eq!(cross, q(1, 2));
}

#[test]
fn two_piece_slit_limit_is_a_two_interval_exchange() {
    let y = y_infinity(&SlitTorus::two_interval().build().unwrap(), &qi(2)).unwrap();
    assert_eq!(y.half_plane_count(), 2);
    let ex = boundary_exchange(&y);
    assert_eq!(ex.iter().filter(|p| p.from_side == 0 && p.to_side == 1).count(), 2);
    assert!(ex.iter().all(|p| p.from_side != p.to_side));
}

#[test]
fn generic_limit_is_four_planes_with_cubic_differentials() {
    let y = y_infinity(&generic_four_zero_surface(211), &qi(2)).unwrap();
    assert_eq!(y.component_count(), 4);
    assert_eq!(y.ends.len(), 4);
    assert_eq!(y.half_plane_count(), 12);
    for e in &y.ends {
        assert_eq!(e.half_planes(), 3);
        assert_eq!(e.data.order, 5);
        assert_eq!(e.data.residue, Residue::Planar(qi(0)));
    }
}

#[test]
fn marked_torus_limit_is_two_cylinders() {
    let y = y_infinity(&marked_square_torus(), &qi(2)).unwrap();
    assert_eq!(y.half_plane_count(), 0);
    assert_eq!(y.cylinder_count(), 2);
    for e in &y.ends {
        assert_eq!(e.data.order, 2);
        assert_eq!(e.data.residue, Residue::Cylinder { circumference: qi(1) });
    }
}

#[test]
fn graph_residues_match_end_data() {
    let surfaces = vec![
        slit_torus(),
        SlitTorus::two_interval().build().unwrap(),
        generic_four_zero_surface(211),
        marked_square_torus(),
        one_cylinder_surface(&qi(1), &qi(1), [q(1, 4), q(1, 2), q(1, 4)]).unwrap(),
    ];
    for s in surfaces {
        let g = appended_graph(&s, &qi(2)).unwrap();
        let y = y_infinity(&s, &qi(2)).unwrap();
        for (i, e) in y.ends.iter().enumerate() {
            let d = end_local_data(&y, i, None).unwrap();
            if let Residue::Planar(c) = &d.residue {
                assert_eq!(&limit_residue_from_graph(&g, e.walk), c);
            }
        }
    }
}

#[test]
fn feeler_length_does_not_change_residues() {
    let s = slit_torus();
    let a = appended_graph(&s, &qi(1)).unwrap();
    let b = appended_graph(&s, &qi(5)).unwrap();
    assert_eq!(limit_residue_from_graph(&a, 0), limit_residue_from_graph(&b, 0));
}

#[test]
fn parity_warnings_flag_even_orders_with_residue() {
    let s = build_hps(&ladder(qi(3), qi(1))).unwrap();
    let warned = s.parity_warnings();
    assert!(!warned.is_empty());
    assert!(warned.iter().all(|&i| s.ends[i].data.order.is_multiple_of(2)));
    assert!(build_hps(&tripod()).unwrap().parity_warnings().is_empty());
}

fn rat() -> impl Strategy<Value = Q> {
    (-50i64..50, 1i64..12).prop_map(|(n, d)| q(n, d))
}

fn crown() -> impl Strategy<Value = CrownEnd> {
    (1usize..8)
        .prop_flat_map(|n| proptest::collection::vec((rat(), 0i64..40, 1i64..6), n))
        .prop_map(|v| CrownEnd::new(v.into_iter().map(|(l, len, d)| (l.clone(), l + q(len, d))).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn crown_residue_ignores_basepoints_and_leaves(c in crown(), shifts in proptest::collection::vec((rat(), rat()), 8)) {
        let r = crown_residue(&c);
        let mut moved = c.clone();
        for (i, (b, l)) in shifts.iter().enumerate().take(c.len()) {
            moved = moved.shift_basepoint(i, b).shift_leaf(i, l);
        }
        prop_assert_eq!(crown_residue(&moved), r);
    }

    #[test]
    fn truncation_lengths_are_h_and_h_plus_c(c in crown(), extra in 0i64..20) {
        let total: Q = c.side_lengths().iter().sum();
        let h = total + qi(extra);
        let lengths = normalize_truncation(&c, &h).unwrap();
        let residue = crown_residue(&c);
        let mut expected = vec![h.clone(); c.len()];
        expected[0] = &h + &residue;
        prop_assert_eq!(sorted(lengths.clone()), sorted(expected));
        // The lengths come from moving leaves outward only.
        let d = truncation_leaf_shifts(&c, &h).unwrap();
        prop_assert!(d.iter().all(|x| *x >= qi(0)));
        let moved = (0..c.len()).fold(c.clone(), |m, i| m.shift_leaf(i, &d[i]));
        prop_assert_eq!(moved.side_lengths(), lengths);
    }

    #[test]
    fn notch_shifts(len in proptest::collection::vec(1i64..30, 1..5)) {
        let notches: Vec<(Q, Q)> = len.iter().chain(len.iter()).map(|&l| (qi(0), qi(l))).collect();
        let e = PlanarEnd::new(notches.clone()).unwrap();
        let mut by_two = notches.clone();
        by_two.rotate_left(2);
        let mut by_one = notches.clone();
        by_one.rotate_left(1);
        prop_assert_eq!(metric_residue(&PlanarEnd::new(by_two).unwrap()), metric_residue(&e));
        prop_assert_eq!(metric_residue(&PlanarEnd::new(by_one).unwrap()), metric_residue(&e));
    }
}
