use flat_kernel::catalog::{generic_four_zero_surface, marked_square_torus, one_cylinder_surface, slit_torus, square_torus, SlitTorus};
use flat_kernel::{q, qi, FlatSurface, Q};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use teich_flow::flow_exact;
use vertical_graph::*;

/// Cone points of the theta slit torus, all on the line x = 1/2.
const SLIT_POINT_Y: [(i64, i64); 4] = [(1, 4), (3, 8), (5, 8), (3, 4)];

/// Candidate vertical holonomies between slit points after the shear x ↦ x + c·y:
/// every saddle connection projects to a straight segment of the torus
/// ℂ / ⟨(1,0), (a,1)⟩, so its holonomy is a difference of points plus a lattice vector.
fn vertical_candidates(a: &Q, c: &Q, bound: &Q) -> Vec<Q> {
    let mut out = Vec::new();
    let ys: Vec<Q> = SLIT_POINT_Y.iter().map(|&(n, d)| q(n, d)).collect();
    for y1 in &ys {
        for y2 in &ys {
            let dy0 = y2 - y1;
            for n in -4i64..=4 {
                let dy = &dy0 + qi(n);
                if dy.is_zero() || dy.abs() > *bound {
                    continue;
                }
                // dx = c·dy0 + n·(a + c) + m must vanish for an integer m.
                let dx = c * &dy0 + qi(n) * (a + c);
                if dx.is_integer() {
                    out.push(dy.abs());
                }
            }
        }
    }
    out
}

fn connection_key(g: &VerticalGraph) -> Vec<(Prong, Prong, Q)> {
    g.connections.iter().map(|c| (c.from, c.to, c.length.clone())).collect()
}

fn cylinder() -> FlatSurface {
    one_cylinder_surface(&qi(1), &qi(1), [q(1, 4), q(1, 2), q(1, 4)]).unwrap()
}

#[test]
fn square_torus_has_no_connections() {
    assert!(vertical_saddle_connections(&square_torus(), &qi(10)).unwrap().is_empty());
}

#[test]
fn slit_connections_are_the_slit() {
    let s = slit_torus();
    let cs = vertical_saddle_connections(&s, &qi(2)).unwrap();
    assert_eq!(cs.len(), 3);
    let total: Q = cs.iter().map(|c| c.length.clone()).sum();
    assert_eq!(total, q(1, 2));
    let mut lengths: Vec<Q> = cs.iter().map(|c| c.length.clone()).collect();
    lengths.sort();
    assert_eq!(lengths, vec![q(1, 8), q(1, 8), q(1, 4)]);
    for c in &cs {
        assert_ne!(c.from.vertex, c.to.vertex);
        for seg in &c.path {
            assert_eq!(seg.start.x, q(1, 2));
            assert_eq!(seg.end.x, q(1, 2));
        }
    }
}

#[test]
fn slit_connection_lengths_are_trace_candidates() {
    let s = slit_torus();
    let a = SlitTorus::theta().shear;
    let cands = vertical_candidates(&a, &qi(0), &qi(2));
    for c in vertical_saddle_connections(&s, &qi(2)).unwrap() {
        assert!(cands.contains(&c.length));
    }
}

#[test]
fn sheared_slit_has_no_vertical_connections() {
    let a = SlitTorus::theta().shear;
    let bound = qi(2);
    for c in [q(1, 3), q(2, 7), q(5, 11)] {
        assert!(vertical_candidates(&a, &c, &bound).is_empty(), "oracle finds a candidate for shear {c}");
        let s = slit_torus().map_linear(&qi(1), &c, &qi(0), &qi(1)).unwrap();
        assert!(vertical_saddle_connections(&s, &bound).unwrap().is_empty());
    }
}

#[test]
fn slit_torus_theta_graph() {
    let g = appended_graph(&slit_torus(), &qi(2)).unwrap();
    assert_eq!(g.vertices.len(), 2);
    assert!(g.vertices.iter().all(|v| v.prongs.len() == 4));
    assert_eq!(g.connections.len(), 3);
    assert_eq!(g.feelers.len(), 2);
    assert_eq!(g.component_count(), 1);
    let sides = g.sides();
    assert_eq!(sides.len(), 2);
    assert!(sides.iter().all(|s| !s.is_cycle));
    assert_eq!(g.walk_residue(0), qi(0));
}

#[test]
fn generic_surface_gives_tripods() {
    let s = generic_four_zero_surface(211);
    assert!(vertical_saddle_connections(&s, &qi(100)).unwrap().is_empty());
    let g = appended_graph(&s, &qi(1)).unwrap();
    assert_eq!(g.vertices.len(), 4);
    assert!(g.vertices.iter().all(|v| v.prongs.len() == 3));
    assert_eq!(g.feelers.len(), 12);
    assert_eq!(g.component_count(), 4);
    let sides = g.sides();
    assert_eq!(sides.len(), 12);
    assert!(sides.iter().all(|s| !s.is_cycle));
    let r = g.ribbon();
    let mut per_vertex = BTreeMap::new();
    for w in r.walks() {
        *per_vertex.entry(r.vertex_of_walk(&w)).or_insert(0) += 1;
    }
    assert!(per_vertex.values().all(|&n| n == 1));
}

#[test]
fn marked_torus_gives_two_cycle_sides() {
    let g = appended_graph(&marked_square_torus(), &qi(2)).unwrap();
    assert_eq!(g.vertices.len(), 1);
    assert_eq!(g.vertices[0].prongs.len(), 2);
    assert_eq!(g.connections.len(), 1);
    assert_eq!(g.connections[0].length, qi(1));
    let sides = g.sides();
    assert_eq!(sides.len(), 2);
    assert!(sides.iter().all(|s| s.is_cycle));
}

#[test]
fn zero_length_gives_vertices_only() {
    let g = appended_graph(&generic_four_zero_surface(211), &qi(0)).unwrap();
    assert_eq!(g.vertices.len(), 4);
    assert!(g.connections.is_empty());
    assert!(g.feelers.is_empty());
}

#[test]
fn negative_bound_is_rejected() {
    assert_eq!(vertical_saddle_connections(&slit_torus(), &q(-1, 2)).unwrap_err(), GraphError::NegativeBound);
}

#[test]
fn short_connection_list_makes_feelers_collide() {
    let s = slit_torus();
    let short = vertical_saddle_connections(&s, &q(1, 16)).unwrap();
    assert!(short.is_empty());
    match appended_graph_with(&s, short, &qi(1)) {
        Err(GraphError::FeelersCollide { at, .. }) => assert!(at == "1/8" || at == "1/4"),
        other => panic!("expected a collision, got {other:?}"),
    }
}

fn all_graphs() -> Vec<(&'static str, FlatSurface)> {
    vec![
        ("slit", slit_torus()),
        ("two-interval", SlitTorus::two_interval().build().unwrap()),
        ("generic", generic_four_zero_surface(211)),
        ("marked", marked_square_torus()),
        ("cylinder", cylinder()),
    ]
}

#[test]
fn prong_counts_match_cone_angles() {
    for (name, s) in all_graphs() {
        let g = appended_graph(&s, &qi(1)).unwrap();
        for v in &g.vertices {
            assert_eq!(v.prongs.len(), v.angle_pi as usize, "{name}");
        }
        let mut used = BTreeSet::new();
        for c in &g.connections {
            assert!(used.insert(c.from) && used.insert(c.to), "{name}");
            assert!(c.length > qi(0));
        }
        for f in &g.feelers {
            assert!(used.insert(f.prong), "{name}");
        }
        assert_eq!(used.len(), g.prong_count(), "{name}");
    }
}

#[test]
fn sides_partition_half_edges() {
    for (name, s) in all_graphs() {
        let g = appended_graph(&s, &qi(1)).unwrap();
        let r = g.ribbon();
        let mut seen = BTreeMap::new();
        for side in r.sides() {
            for h in &side.half_edges {
                *seen.entry((h.edge, h.end == End::A)).or_insert(0) += 1;
            }
        }
        assert_eq!(seen.len(), 2 * r.edges.len(), "{name}");
        assert!(seen.values().all(|&n| n == 1), "{name}");
    }
}

#[test]
fn euler_characteristic_per_component() {
    let expected = [("slit", vec![1]), ("two-interval", vec![1]), ("generic", vec![0, 0, 0, 0]), ("marked", vec![0]), ("cylinder", vec![1])];
    for ((name, s), (_, genera)) in all_graphs().into_iter().zip(expected) {
        let g = appended_graph(&s, &qi(1)).unwrap();
        let r = g.ribbon();
        assert_eq!(r.component_genera().unwrap(), genera, "{name}");
        // Per component: V − E_finite + walks = 2 − 2g (rays do not change the thickening).
        let comp = r.components();
        for (k, gen) in genera.iter().enumerate() {
            let v = comp.iter().filter(|&&c| c == k).count() as i64;
            let e = r
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| !r.is_ray(*i))
                .filter(|(i, _)| comp[r.origin(HalfEdge { edge: *i, end: End::A }).unwrap().vertex] == k)
                .count() as i64;
            let w = r.walks().iter().filter(|w| r.vertex_of_walk(w).map(|x| comp[x]) == Some(k)).count() as i64;
            assert_eq!(v - e + w, 2 - 2 * *gen as i64, "{name} component {k}");
        }
    }
}

#[test]
fn connections_survive_the_flow() {
    let s = slit_torus();
    let base = appended_graph(&s, &qi(2)).unwrap();
    for k in [q(1, 9), q(1, 2), qi(3), qi(16), q(211, 5)] {
        let f = flow_exact(&s, &k).unwrap();
        let g = appended_graph(&f, &qi(2)).unwrap();
        assert_eq!(connection_key(&g), connection_key(&base));
        assert_eq!(g.feelers.iter().map(|f| f.prong).collect::<Vec<_>>(), base.feelers.iter().map(|f| f.prong).collect::<Vec<_>>());
    }
}

fn restriction_matches(s: &FlatSurface, long: &Q, short: &Q) {
    let wide = appended_graph(s, long).unwrap().restrict(short);
    let narrow = appended_graph(s, short).unwrap();
    assert_eq!(connection_key(&wide), connection_key(&narrow));
    let fl = |g: &VerticalGraph| g.feelers.iter().map(|f| (f.prong, f.length.clone())).collect::<Vec<_>>();
    assert_eq!(fl(&wide), fl(&narrow));
    for (a, b) in wide.feelers.iter().zip(&narrow.feelers) {
        let la: Q = a.path.iter().map(|p| p.length()).sum();
        let lb: Q = b.path.iter().map(|p| p.length()).sum();
        assert_eq!(la, lb);
        assert_eq!(la, *short);
    }
    assert_eq!(wide.sides().len(), narrow.sides().len());
}

#[test]
fn restriction_to_shorter_length() {
    restriction_matches(&slit_torus(), &qi(2), &q(1, 16));
    restriction_matches(&slit_torus(), &qi(2), &q(3, 16));
    restriction_matches(&slit_torus(), &qi(3), &qi(1));
    restriction_matches(&generic_four_zero_surface(211), &qi(5), &qi(2));
}

#[test]
fn collars_cover_the_surface() {
    for (name, s, k) in [("slit", slit_torus(), 1), ("generic", generic_four_zero_surface(211), 4), ("marked", marked_square_torus(), 1), ("cylinder", cylinder(), 1)] {
        let pieces = polygonal_decomposition(&s, &qi(2)).unwrap();
        assert_eq!(pieces.len(), k, "{name}");
        let total: Q = pieces.iter().map(|p| p.area.clone()).sum();
        assert_eq!(total, s.area(), "{name}");
        for p in &pieces {
            assert_eq!(p.sides.len(), p.collar_widths.len());
            assert!(p.collar_widths.iter().all(|w| *w > qi(0)), "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_slit_tori_have_consistent_graphs(num in 1i64..10, l in 1i64..6) {
        let mut st = SlitTorus::theta();
        st.shear = q(num, 37);
        let s = st.build().unwrap();
        let g = appended_graph(&s, &q(l, 2)).unwrap();
        let r = g.ribbon();
        let mut seen = BTreeSet::new();
        for side in r.sides() {
            for h in &side.half_edges {
                prop_assert!(seen.insert((h.edge, h.end == End::A)));
            }
        }
        prop_assert_eq!(seen.len(), 2 * r.edges.len());
        prop_assert!(r.component_genera().is_ok());
    }
}
