use flat_kernel::catalog::{generic_four_zero_surface, marked_square_torus, one_cylinder_surface, SlitTorus};
use flat_kernel::rational::{q, qi};
use flat_kernel::{FlatSurface, SurfaceError};
use half_plane::{truncate, y_infinity};
use lab_cli::{
    parse_surface_file, render_graph, render_truncation, run_experiment, write_surface, ExperimentConfig, FileError, SurfaceFile,
    EXPERIMENTS,
};
use proptest::prelude::*;
use std::path::PathBuf;
use std::process::Command;
use teich_flow::flow_exact;
use vertical_graph::appended_graph;

const SQUARE: &str = r#"{"schema": 1,
 "polygons": [
  [["0","0"],["1","0"],["1","1"],["0","1"]]
 ],
 "gluings": [
  [[0,0],[0,2],1],
  [[0,1],[0,3],1]
 ]
}
"#;

fn surfaces() -> Vec<FlatSurface> {
    vec![
        SlitTorus::theta().build().unwrap(),
        SlitTorus::two_interval().build().unwrap(),
        generic_four_zero_surface(211),
        marked_square_torus(),
        one_cylinder_surface(&qi(1), &qi(1), [q(1, 4), q(1, 2), q(1, 4)]).unwrap(),
    ]
}

fn lab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lab")).args(args).output().expect("lab runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lab-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn surface_files_round_trip(which in 0usize..5, num in 1i64..50, den in 1i64..50) {
        let s = flow_exact(&surfaces()[which], &q(num, den)).unwrap();
        let text = write_surface(&s);
        let parsed = parse_surface_file(&text).unwrap();
        prop_assert_eq!(&parsed.file, &SurfaceFile::of_surface(&s));
        prop_assert_eq!(parsed.file.to_json(), text.clone());
        let again = parsed.validate().unwrap();
        prop_assert_eq!(write_surface(&again), text);
    }
}

#[test]
fn vector_mismatch_points_at_the_gluing_and_names_both_edges() {
    let text = SQUARE.replace(r#"["1","1"]"#, r#"["1","2"]"#);
    let err = parse_surface_file(&text).unwrap().validate().unwrap_err();
    assert_eq!(err.line(), 6);
    match err {
        FileError::Validation { source: SurfaceError::VectorMismatch { a, b, .. }, .. } => {
            assert_eq!((a.poly, a.edge, b.poly, b.edge), (0, 0, 0, 2));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn dangling_gluing_is_unmatched() {
    let text = SQUARE.replace("[0,3],1", "[0,7],1");
    let err = parse_surface_file(&text).unwrap().validate().unwrap_err();
    assert_eq!(err.line(), 7);
    assert!(matches!(err, FileError::Validation { source: SurfaceError::UnmatchedEdge(_), .. }), "{err:?}");
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let err = parse_surface_file(&SQUARE.replace(r#""1","0"]"#, r#""1","0""#)).unwrap_err();
    assert!(matches!(err, FileError::Parse { line: 5, column: 11, .. }), "{err:?}");
}

#[test]
fn reports_are_byte_identical_for_equal_inputs() {
    let cfg = ExperimentConfig { grid: 64, trials: 20, ..ExperimentConfig::default() };
    for name in EXPERIMENTS {
        let a = run_experiment(name, &cfg).unwrap();
        let b = run_experiment(name, &cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{name}");
        assert_eq!(a.artifacts, b.artifacts, "{name}");
    }
}

#[test]
fn seed_changes_randomized_reports() {
    let cfg = ExperimentConfig { trials: 20, ..ExperimentConfig::default() };
    let other = ExperimentConfig { seed: cfg.seed + 1, ..cfg.clone() };
    for name in ["yt-ray-property", "residue-suite"] {
        assert_ne!(run_experiment(name, &cfg).unwrap().to_json(), run_experiment(name, &other).unwrap().to_json(), "{name}");
    }
}

#[test]
fn slit_torus_graph_svg_has_two_vertices_and_feelers() {
    let s = SlitTorus::theta().build().unwrap();
    let g = appended_graph(&s, &qi(2)).unwrap();
    let svg = render_graph(&g).unwrap();
    assert_eq!(svg.matches("<circle id=\"vertex-").count(), 2);
    assert_eq!(svg.matches("id=\"feeler-").count(), g.feelers.len());
    assert!(!g.feelers.is_empty());
    assert_eq!(svg.matches("id=\"conn-").count() - svg.matches("id=\"conn-label-").count(), g.connections.len());
}

#[test]
fn order_five_truncation_svg_has_three_rectangles() {
    let y = y_infinity(&generic_four_zero_surface(211), &qi(2)).unwrap();
    let svg = render_truncation(&truncate(&y, 0, &qi(10)).unwrap()).unwrap();
    assert_eq!(svg.matches("id=\"rect-").count(), 3);
    assert_eq!(svg, render_truncation(&truncate(&y, 0, &qi(10)).unwrap()).unwrap());
}

#[test]
fn validate_exit_codes() {
    let ok = temp_file("square.json", SQUARE);
    let (code, out, _) = lab(&["validate", ok.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok: 1 polygons, 2 gluings, genus 1"), "{out}");

    let bad = temp_file("mismatch.json", &SQUARE.replace(r#"["1","1"]"#, r#"["1","2"]"#));
    let (code, _, err) = lab(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("mismatch.json: line 6:"), "{err}");
}

#[test]
fn flow_by_exact_scale() {
    let f = temp_file("flow.json", SQUARE);
    let (code, out, _) = lab(&["flow", f.to_str().unwrap(), "--scale", "9/4"]);
    assert_eq!(code, 0);
    let s = parse_surface_file(&out).unwrap().validate().unwrap();
    assert_eq!(s.polygons()[0].vertices[1].x, q(9, 4));
    let (code, _, _) = lab(&["flow", f.to_str().unwrap(), "--scale", "nine"]);
    assert_eq!(code, 2);
}

#[test]
fn experiment_exit_codes() {
    assert_eq!(lab(&["experiment", "strebel-warmup"]).0, 0);
    assert_eq!(lab(&["experiment", "no-such-thing"]).0, 2);
    assert_eq!(lab(&["experiment", "qc-suite", "--grid", "10"]).0, 2);
    // A horizon this short leaves the distance far above its threshold.
    assert_eq!(lab(&["experiment", "torus-asymptoticity", "--horizon", "0.1"]).0, 1);
}

#[test]
fn experiment_out_dir_holds_report_and_artifacts() {
    let dir = std::env::temp_dir().join(format!("lab-cli-out-{}", std::process::id()));
    let (code, listing, _) = lab(&["experiment", "slit-torus-limit", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    for name in ["report.json", "surface.svg", "vgraph.svg", "truncation.svg"] {
        assert!(dir.join(name).is_file(), "{name} missing; wrote {listing}");
    }
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["experiment"], "slit-torus-limit");
}

#[test]
fn graft_torus_mode() {
    let (code, out, _) = lab(&["graft", "--tau", "0,1", "--curve", "1,0", "--t", "1"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["grafted_tau"].is_array());
}
