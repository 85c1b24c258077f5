use flat_kernel::catalog::{rectangle_torus, square_torus};
use flat_kernel::rational::{from_f64, q, qi, to_f64};
use flat_kernel::{
    isometric, isometric_rectilinear, EdgeRef, FlatSurface, Gluing, Marking, Polygon, Vec2, CELL_LIMIT, Q,
};
use grafting::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teich_flow::{flow_exact, ExactLattice, FlatTorus, TorusPoint};

fn lattice(a: (Q, Q), b: (Q, Q)) -> ExactLattice {
    ExactLattice { w1: Vec2::new(a.0, a.1), w2: Vec2::new(b.0, b.1) }
}

fn e(p: usize, k: usize) -> EdgeRef {
    EdgeRef::new(p, k)
}

/// Three unit squares in an L, each cut in two along its vertical midline: genus 2,
/// one cone point of angle 6π, and two disjoint closed vertical curves through
/// regular points (`x = 3/2` of length 1 and `x = 1/2` of length 2).
fn split_l() -> FlatSurface {
    let h = q(1, 2);
    let rect = |x: Q, y: Q| Polygon::rectangle(&x, &y, &h, &qi(1));
    let polys = vec![
        rect(qi(0), qi(0)),
        rect(q(1, 2), qi(0)),
        rect(qi(1), qi(0)),
        rect(q(3, 2), qi(0)),
        rect(qi(0), qi(1)),
        rect(q(1, 2), qi(1)),
    ];
    let t = Gluing::translation;
    let g = vec![
        t(e(0, 1), e(1, 3)),
        t(e(1, 1), e(2, 3)),
        t(e(2, 1), e(3, 3)),
        t(e(3, 1), e(0, 3)),
        t(e(4, 1), e(5, 3)),
        t(e(5, 1), e(4, 3)),
        t(e(0, 2), e(4, 0)),
        t(e(4, 2), e(0, 0)),
        t(e(1, 2), e(5, 0)),
        t(e(5, 2), e(1, 0)),
        t(e(2, 2), e(2, 0)),
        t(e(3, 2), e(3, 0)),
    ];
    FlatSurface::new(polys, g, Marking::default()).unwrap()
}

#[test]
fn zero_width_is_identity() {
    let s = split_l();
    let out = graft_cylinder(&s, &GraftLocus::new(vec![e(2, 1)]), &qi(0)).unwrap();
    assert!(isometric(&s, &out).unwrap());
}

#[test]
fn vertical_curve_on_square_torus() {
    for t in [q(1, 3), qi(1), q(7, 2)] {
        let out = graft_cylinder(&square_torus(), &GraftLocus::new(vec![e(0, 1)]), &t).unwrap();
        let l = ExactLattice::of_surface(&out).unwrap();
        assert!(l.same_lattice(&lattice((qi(1) + &t, qi(0)), (qi(0), qi(1)))));
        let tau = FlatTorus::from_modulus(&TorusPoint::new(Complex64::i()).unwrap());
        let want = graft_lattice(&tau, SimpleCurve::new(0, 1).unwrap(), to_f64(&t)).unwrap();
        let m = want.modulus().unwrap().tau;
        assert!((m - Complex64::i() / (1.0 + to_f64(&t))).norm() < 1e-14);
    }
}

#[test]
fn horizontal_curve_after_quarter_turn() {
    let t = q(2, 5);
    let turned = square_torus().map_linear(&qi(0), &qi(-1), &qi(1), &qi(0)).unwrap();
    assert!(turned.polygon(0).edge_vector(0).is_vertical());
    let out = graft_cylinder(&turned, &GraftLocus::new(vec![e(0, 0)]), &t).unwrap();
    let back = out.map_linear(&qi(0), &qi(1), &qi(-1), &qi(0)).unwrap();
    let l = ExactLattice::of_surface(&back).unwrap();
    assert!(l.same_lattice(&lattice((qi(1), qi(0)), (qi(0), qi(1) + &t))));
    let m = graft_torus(&TorusPoint::new(Complex64::i()).unwrap(), SimpleCurve::new(1, 0).unwrap(), 0.4).unwrap();
    assert!((m.tau - Complex64::new(0.0, 1.4)).norm() < 1e-14);
}

#[test]
fn graft_torus_examples() {
    let i = TorusPoint::new(Complex64::i()).unwrap();
    let c = SimpleCurve::new(1, 1).unwrap();
    assert_eq!(graft_torus(&i, c, 0.0).unwrap(), i);
    for t in [0.5, 1.0, 3.0] {
        let m = graft_torus(&i, SimpleCurve::new(1, 0).unwrap(), t).unwrap();
        assert!((m.tau - Complex64::new(0.0, 1.0 + t)).norm() < 1e-14);
    }
    assert!(graft_torus(&i, c, -1.0).is_err());
}

/// The square torus rescaled by `(1 + i)/2` so that the `(1, 1)` curve becomes the
/// vertical side of a parallelogram.
#[test]
fn diagonal_curve_matches_polygon_model() {
    let pt = |x: Q, y: Q| Vec2::new(x, y);
    let para = Polygon::new(vec![pt(qi(0), qi(0)), pt(q(1, 2), q(-1, 2)), pt(q(1, 2), q(1, 2)), pt(qi(0), qi(1))]);
    let s = FlatSurface::new(
        vec![para],
        vec![Gluing::translation(e(0, 0), e(0, 2)), Gluing::translation(e(0, 1), e(0, 3))],
        Marking::default(),
    )
    .unwrap();
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let t_model = from_f64(scale).unwrap();
    let out = graft_cylinder(&s, &GraftLocus::new(vec![e(0, 1)]), &t_model).unwrap();
    let model = ExactLattice::of_surface(&out).unwrap().to_float();
    let i = TorusPoint::new(Complex64::i()).unwrap();
    let c = SimpleCurve::new(1, 1).unwrap();
    let oracle = graft_lattice(&FlatTorus::from_modulus(&i), c, 1.0).unwrap();
    assert!((model.area() - 0.5 * oracle.area()).abs() < 1e-12);
    let a = model.modulus().unwrap().reduced().tau;
    let b = graft_torus(&i, c, 1.0).unwrap().reduced().tau;
    // Reduced representatives agree up to the boundary identifications of the domain.
    let images = [b, b + 1.0, b - 1.0, -b.conj()];
    assert!(images.iter().any(|z| (a - z).norm() < 1e-9), "{a} vs {b}");
}

#[test]
fn area_genus_and_cones_on_genus_two() {
    let s = split_l();
    assert_eq!(s.genus(), 2);
    for (locus, circ) in [(vec![e(2, 1)], qi(1)), (vec![e(0, 1), e(4, 1)], qi(2))] {
        let locus = GraftLocus::new(locus);
        assert_eq!(locus.circumference(&s), circ);
        let t = q(3, 7);
        let out = graft_cylinder(&s, &locus, &t).unwrap();
        assert_eq!(out.area(), s.area() + &circ * &t);
        assert_eq!(out.genus(), 2);
        assert_eq!(out.cone_data().iter().map(|c| c.angle_pi).collect::<Vec<_>>(), vec![6]);
    }
}

#[test]
fn disjoint_grafts_commute() {
    let s = split_l();
    let a = GraftLocus::new(vec![e(2, 1)]);
    let b = GraftLocus::new(vec![e(0, 1), e(4, 1)]);
    let (ta, tb) = (q(1, 3), q(5, 4));
    let ab = graft_cylinder(&graft_cylinder(&s, &a, &ta).unwrap(), &b, &tb).unwrap();
    let ba = graft_cylinder(&graft_cylinder(&s, &b, &tb).unwrap(), &a, &ta).unwrap();
    assert!(isometric(&ab, &ba).unwrap());
    let aa = graft_cylinder(&graft_cylinder(&s, &a, &ta).unwrap(), &a, &tb).unwrap();
    assert!(!isometric(&ab, &aa).unwrap());
}

#[test]
fn downward_locus_is_the_same_curve() {
    let s = split_l();
    let up = graft_cylinder(&s, &GraftLocus::new(vec![e(2, 1)]), &q(2, 3)).unwrap();
    let down = graft_cylinder(&s, &GraftLocus::new(vec![e(3, 3)]), &q(2, 3)).unwrap();
    assert!(isometric_rectilinear(&up, &down, CELL_LIMIT).unwrap());
}

#[test]
fn bad_loci() {
    let s = split_l();
    let t = q(1, 2);
    assert_eq!(
        graft_cylinder(&s, &GraftLocus::new(vec![e(0, 0)]), &t),
        Err(GraftError::LocusNotVertical(e(0, 0)))
    );
    // Open path, through the cone point, repeated segment.
    for locus in [vec![e(0, 1)], vec![e(0, 3)], vec![e(2, 1), e(3, 3)]] {
        assert!(matches!(
            graft_cylinder(&s, &GraftLocus::new(locus), &t),
            Err(GraftError::LocusNotEmbedded(_))
        ));
    }
    assert!(matches!(
        graft_cylinder(&s, &GraftLocus::new(vec![e(2, 1)]), &q(-1, 2)),
        Err(GraftError::NegativeWidth(_))
    ));
}

proptest! {
    #[test]
    fn lattice_grafting_is_a_semigroup(
        x in -2.0f64..2.0, y in 0.2f64..3.0,
        p in -4i64..5, qq in -4i64..5,
        t1 in 0.0f64..5.0, t2 in 0.0f64..5.0,
    ) {
        prop_assume!(num_integer::Integer::gcd(&p, &qq) == 1);
        let tau = TorusPoint::new(Complex64::new(x, y)).unwrap();
        let c = SimpleCurve::new(p, qq).unwrap();
        let l = FlatTorus::from_modulus(&tau);
        let once = graft_lattice(&l, c, t1 + t2).unwrap();
        let twice = graft_lattice(&graft_lattice(&l, c, t1).unwrap(), c, t2).unwrap();
        prop_assert!((once.w1 - twice.w1).norm() < 1e-9);
        prop_assert!((once.w2 - twice.w2).norm() < 1e-9);
        let gamma = l.point(p, qq).norm();
        prop_assert!((once.area() - l.area() - gamma * (t1 + t2)).abs() < 1e-9);
        let m1 = graft_torus(&tau, c, t1 + t2).unwrap();
        prop_assert!((m1.tau - once.modulus().unwrap().tau).norm() < 1e-12);
    }
}

#[test]
fn single_annulus_track_is_a_torus() {
    let (w, h) = (q(3, 2), qi(2));
    let track = TrainTrackData::single_annulus(w.clone(), h.clone());
    let ends = piece_ends(&track).unwrap();
    assert_eq!(ends.len(), 2);
    assert!(ends.iter().all(|e| e.closed && e.residue() == h));
    for s in [q(1, 2), qi(3), q(22, 7)] {
        let y = build_yt(&track, &WidthScale::new(s.clone()).unwrap()).unwrap();
        assert_eq!(y.genus(), 1);
        let l = ExactLattice::of_surface(&y).unwrap();
        assert!(l.same_lattice(&lattice((&s * &w, qi(0)), (qi(0), h.clone()))));
    }
    let y = build_yt(&track, &WidthScale::from_time(1.0).unwrap()).unwrap();
    assert!((to_f64(&y.area()) - 2.0 * std::f64::consts::PI * 3.0).abs() < 1e-12);
}

#[test]
fn ray_property_on_random_tracks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut passes = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let track = random_track(&mut rng, n);
        let s1 = WidthScale::new(q(rng.gen_range(1..=9), rng.gen_range(1..=4))).unwrap();
        let r = qi([4, 9, 25][rng.gen_range(0..3)]);
        let y2 = build_yt(&track, &s1.times(&r).unwrap()).unwrap();
        let y1 = build_yt(&track, &s1).unwrap();
        if isometric(&y2, &flow_exact(&y1, &r).unwrap()).unwrap() {
            passes += 1;
        }
    }
    assert_eq!(passes, 100);
}

#[test]
fn different_times_are_not_isometric() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let track = random_track(&mut rng, 3);
    let s = WidthScale::new(qi(1)).unwrap();
    let a = build_yt(&track, &s).unwrap();
    let b = build_yt(&track, &s.times(&qi(4)).unwrap()).unwrap();
    assert!(!isometric(&a, &b).unwrap());
    assert!(!isometric(&b, &flow_exact(&a, &qi(2)).unwrap()).unwrap());
}

#[test]
fn splitting_a_branch_gives_the_same_surface() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 12 {
        let n = rng.gen_range(1..=3);
        let track = random_track(&mut rng, n);
        let Some(b) = track.branches.iter().position(|b| b.kind == BranchKind::Rectangle) else { continue };
        let at = &track.branches[b].weight * q(rng.gen_range(1..=4), 5);
        let split = track.split_branch(b, &at).unwrap();
        assert_eq!(split.branches.len(), track.branches.len() + 1);
        let s = WidthScale::new(q(rng.gen_range(1..=5), 2)).unwrap();
        let a = build_yt(&track, &s).unwrap();
        let c = build_yt(&split, &s).unwrap();
        assert_eq!(a.genus(), c.genus());
        assert!(isometric_rectilinear(&a, &c, CELL_LIMIT).unwrap());
        checked += 1;
    }
}

#[test]
fn residue_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let track = random_track(&mut rng, 3);
    let s = WidthScale::new(qi(1)).unwrap();
    let mut bad = track.clone();
    bad.pieces[0].end_residues[0] += qi(1);
    assert!(matches!(build_yt(&bad, &s), Err(GraftError::ResidueMismatch { piece: 0, .. })));
    let mut short = track.clone();
    short.pieces[1].end_residues.pop();
    assert!(matches!(build_yt(&short, &s), Err(GraftError::ResidueMismatch { piece: 1, .. })));
    let mut low = track.clone();
    low.min_height = qi(100);
    assert!(matches!(build_yt(&low, &s), Err(GraftError::HTooSmall { .. })) || low.branches.iter().all(|b| b.kind == BranchKind::Annulus));
}

#[test]
fn malformed_tracks() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let track = random_track(&mut rng, 2);
    let s = WidthScale::new(qi(1)).unwrap();
    let mut gap = track.clone();
    gap.gluing.pop();
    assert!(matches!(build_yt(&gap, &s), Err(GraftError::InvalidTrack(_))));
    let mut orphan = track.clone();
    orphan.pieces[0].halves.pop();
    assert!(matches!(build_yt(&orphan, &s), Err(GraftError::InvalidTrack(_))));
    assert!(WidthScale::new(qi(0)).is_err());
}

#[test]
fn track_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let track = random_track(&mut rng, 4);
    let text = serde_json::to_string(&track).unwrap();
    let back: TrainTrackData = serde_json::from_str(&text).unwrap();
    assert_eq!(back, track);
}

#[test]
fn flat_tori_widths_follow_the_scale() {
    let s = WidthScale::new(q(5, 3)).unwrap();
    let track = TrainTrackData::single_annulus(qi(2), qi(1));
    let y = build_yt(&track, &s).unwrap();
    assert!(isometric_rectilinear(&y, &rectangle_torus(&q(10, 3), &qi(1)), CELL_LIMIT).unwrap());
}
