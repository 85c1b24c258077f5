//! Scripted experiments. Each returns a report whose assertions are evaluated, never
//! panics on a failed assertion, and depends only on its configuration.

use crate::qc_suite::qc_suite;
use crate::report::ExperimentReport;
use crate::svg::{render_graph, render_surface, render_truncation};
use crate::LabError;
use flat_kernel::catalog::{generic_four_zero_surface, marked_square_torus, one_cylinder_surface, SlitTorus};
use flat_kernel::rational::{format_q, q, qi};
use flat_kernel::{isometric, FlatSurface, Q};
use grafting::{build_yt, graft_lattice, random_track, SimpleCurve, WidthScale};
use half_plane::{
    boundary_exchange, crown_residue, end_local_data, limit_residue_from_graph, normalize_truncation, truncate, y_infinity,
    CrownEnd, GeneralizedHalfPlaneSurface, Residue,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeMap;
use teich_flow::{flow_exact, torus_teich_distance, FlatTorus, TorusPoint};
use vertical_graph::{appended_graph, vertical_saddle_connections};

/// Experiment names accepted by [`run_experiment`].
pub const EXPERIMENTS: [&str; 7] = [
    "slit-torus-limit",
    "generic-limit",
    "strebel-warmup",
    "torus-asymptoticity",
    "yt-ray-property",
    "qc-suite",
    "residue-suite",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Finest grid side of the qc suite; coarser levels halve it.
    pub grid: usize,
    /// Perturbation size for the qc constructions.
    pub epsilon: f64,
    /// Feeler length of the appended vertical graph.
    pub feeler_length: Q,
    /// Last ray parameter of the torus experiment, in arclength.
    pub horizon: f64,
    /// Random instances in the randomized suites.
    pub trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { seed: 7, grid: 512, epsilon: 0.01, feeler_length: qi(2), horizon: 5.0, trials: 100 }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |s: String| Err(LabError::ConfigInvalid(s));
        if self.grid < 64 || !self.grid.is_multiple_of(4) {
            return bad(format!("grid must be a multiple of 4 and at least 64, got {}", self.grid));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.05) {
            return bad(format!("epsilon must lie in (0, 0.05], got {}", self.epsilon));
        }
        if self.feeler_length <= qi(0) {
            return bad(format!("feeler length must be positive, got {}", format_q(&self.feeler_length)));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0 && self.horizon <= 20.0) {
            return bad(format!("horizon must lie in (0, 20], got {}", self.horizon));
        }
        if self.trials == 0 {
            return bad("at least one trial is needed".into());
        }
        Ok(())
    }
}

pub fn run_experiment(name: &str, cfg: &ExperimentConfig) -> Result<ExperimentReport, LabError> {
    if !EXPERIMENTS.contains(&name) {
        return Err(LabError::UnknownExperiment(name.to_string()));
    }
    cfg.validate()?;
    match name {
        "slit-torus-limit" => slit_torus_limit(cfg),
        "generic-limit" => generic_limit(cfg),
        "strebel-warmup" => strebel_warmup(cfg),
        "torus-asymptoticity" => torus_asymptoticity(cfg),
        "yt-ray-property" => yt_ray_property(cfg),
        "qc-suite" => qc_suite(cfg),
        "residue-suite" => residue_suite(cfg),
        _ => unreachable!("checked against the list"),
    }
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

fn cone_summary(s: &FlatSurface) -> Vec<serde_json::Value> {
    s.cone_data().iter().map(|c| json!({"angle_pi": c.angle_pi, "order": c.order})).collect()
}

fn end_summary(y: &GeneralizedHalfPlaneSurface) -> Vec<serde_json::Value> {
    y.ends
        .iter()
        .map(|e| {
            let residue = match &e.data.residue {
                Residue::Planar(c) => json!({"planar": format_q(c)}),
                Residue::Cylinder { circumference } => json!({"cylinder_circumference": format_q(circumference)}),
            };
            json!({"walk": e.walk, "order": e.data.order, "half_planes": e.half_planes(), "residue": residue})
        })
        .collect()
}

/// The finite boundary of each listed side is exchanged isometrically with the other
/// sides, with no piece glued back to its own side.
fn exchange_between(y: &GeneralizedHalfPlaneSurface) -> (bool, usize) {
    let ex = boundary_exchange(y);
    let no_self = ex.iter().all(|p| p.from_side != p.to_side);
    let covered = (0..y.sides.len()).all(|i| {
        let total: Q = ex.iter().filter(|p| p.from_side == i).map(|p| &p.end - &p.start).sum();
        total == y.spine.side_length(&y.sides[i])
    });
    (no_self && covered, ex.len() / 2)
}

fn slit_torus_limit(cfg: &ExperimentConfig) -> Result<ExperimentReport, LabError> {
    let mut r = ExperimentReport::new("slit-torus-limit");
    let st = SlitTorus::theta();
    r.input("shear", format_q(&st.shear));
    r.input("slit_foot", [format_q(&st.x0), format_q(&st.y0)]);
    r.input("pieces", strings(&st.pieces));
    r.input("permutation", &st.perm);
    r.input("feeler_length", format_q(&cfg.feeler_length));
    let s = st.build()?;
    let cones = s.cone_data();
    r.measure("genus", s.genus());
    r.measure("cone_points", cone_summary(&s));
    r.measure("order_sum", s.order_sum());
    r.check("genus is 2", s.genus() == 2, format!("genus {}", s.genus()));
    let two_4pi = cones.len() == 2 && cones.iter().all(|c| c.angle_pi == 4);
    r.check("two cone points of angle 4π", two_4pi, format!("{} cone points", cones.len()));
    let g = s.genus() as i64;
    r.check("orders sum to 4g − 4", s.order_sum() == 4 * g - 4, format!("Σ orders = {}", s.order_sum()));

    let graph = appended_graph(&s, &cfg.feeler_length)?;
    let y = y_infinity(&s, &cfg.feeler_length)?;
    r.measure("components", y.component_count());
    r.measure("half_planes", y.half_plane_count());
    r.measure("half_cylinders", y.cylinder_count());
    r.measure("ends", end_summary(&y));
    r.check("one limit component", y.component_count() == 1, format!("{} components", y.component_count()));
    r.check("exactly 2 half-planes", y.half_plane_count() == 2, format!("{}", y.half_plane_count()));
    r.check("no half-cylinders", y.cylinder_count() == 0, format!("{}", y.cylinder_count()));
    let (exchange, pieces) = exchange_between(&y);
    r.measure("exchange_pieces", pieces);
    let ex = serde_json::to_value(boundary_exchange(&y)).expect("exchange serializes");
    r.measure("boundary_exchange", ex);
    r.check(
        "boundary is an interval exchange between the two half-planes",
        exchange && y.sides.len() == 2,
        format!("{} sides, {pieces} exchanged intervals", y.sides.len()),
    );

    // The two-piece regluing, for comparison: a single 6π point and two intervals.
    let two = SlitTorus::two_interval().build()?;
    let y2 = y_infinity(&two, &cfg.feeler_length)?;
    r.measure(
        "two_piece_variant",
        json!({
            "genus": two.genus(),
            "cone_points": cone_summary(&two),
            "half_planes": y2.half_plane_count(),
            "half_cylinders": y2.cylinder_count(),
            "exchange_pieces": exchange_between(&y2).1,
        }),
    );

    r.attach("surface.svg", render_surface(&s)?);
    r.attach("vgraph.svg", render_graph(&graph)?);
    r.attach("truncation.svg", render_truncation(&truncate(&y, 0, &qi(10))?)?);
    Ok(r)
}

fn generic_limit(cfg: &ExperimentConfig) -> Result<ExperimentReport, LabError> {
    let mut r = ExperimentReport::new("generic-limit");
    let n = 211;
    let bound = qi(100);
    r.input("shear_denominator", n);
    r.input("saddle_connection_bound", format_q(&bound));
    r.input("feeler_length", format_q(&cfg.feeler_length));
    let s = generic_four_zero_surface(n);
    let cones = s.cone_data();
    r.measure("genus", s.genus());
    r.measure("cone_points", cone_summary(&s));
    r.check(
        "four simple zeros",
        cones.len() == 4 && cones.iter().all(|c| c.order == 1),
        format!("{} cone points", cones.len()),
    );
    let conns = vertical_saddle_connections(&s, &bound)?;
    r.measure("vertical_saddle_connections", conns.len());
    r.check("no vertical saddle connections up to the bound", conns.is_empty(), format!("{} found", conns.len()));

    let y = y_infinity(&s, &cfg.feeler_length)?;
    r.measure("components", y.component_count());
    r.measure("ends", end_summary(&y));
    let tripods = y.spine.vertex_count() == 4 && (0..y.spine.edges.len()).all(|e| y.spine.is_ray(e)) && y.spine.slots.iter().all(|&k| k == 3);
    r.check("4 tripod components", y.component_count() == 4 && tripods, format!("{} components", y.component_count()));
    let each = y.ends.len() == 4
        && y.ends.iter().all(|e| e.half_planes() == 3 && e.data.order == 5 && e.data.residue == Residue::Planar(qi(0)));
    r.check("each end: 3 half-planes, order 5, residue 0", each, format!("{} ends", y.ends.len()));

    let graph = appended_graph(&s, &cfg.feeler_length)?;
    r.attach("surface.svg", render_surface(&s)?);
    r.attach("vgraph.svg", render_graph(&graph)?);
    r.attach("truncation.svg", render_truncation(&truncate(&y, 0, &qi(10))?)?);
    Ok(r)
}

fn strebel_warmup(cfg: &ExperimentConfig) -> Result<ExperimentReport, LabError> {
    let mut r = ExperimentReport::new("strebel-warmup");
    r.input("surface", "square torus with a marked corner");
    r.input("feeler_length", format_q(&cfg.feeler_length));
    let s = marked_square_torus();
    let graph = appended_graph(&s, &cfg.feeler_length)?;
    let y = y_infinity(&s, &cfg.feeler_length)?;
    r.measure("saddle_connections", graph.connections.iter().map(|c| format_q(&c.length)).collect::<Vec<_>>());
    r.measure("feelers", graph.feelers.len());
    r.measure("half_planes", y.half_plane_count());
    r.measure("half_cylinders", y.cylinder_count());
    r.measure("ends", end_summary(&y));
    r.check(
        "graph is one closed loop",
        graph.connections.len() == 1 && graph.feelers.is_empty(),
        format!("{} connections, {} feelers", graph.connections.len(), graph.feelers.len()),
    );
    r.check("no half-planes", y.half_plane_count() == 0, format!("{}", y.half_plane_count()));
    r.check("two half-infinite cylinders", y.cylinder_count() == 2, format!("{}", y.cylinder_count()));
    let ends_ok = y.ends.len() == 2
        && y.ends.iter().all(|e| e.data.order == 2 && e.data.residue == Residue::Cylinder { circumference: qi(1) });
    r.check("cylinder ends of circumference 1", ends_ok, format!("{} ends", y.ends.len()));
    r.attach("surface.svg", render_surface(&s)?);
    r.attach("vgraph.svg", render_graph(&graph)?);
    r.attach("truncation.svg", render_truncation(&truncate(&y, 0, &qi(2))?)?);
    Ok(r)
}

/// How the grafting amount and the ray stretch depend on the ray parameter.
#[derive(Clone, Copy, Debug)]
pub struct Reading {
    pub name: &'static str,
    /// Ray parameter reached at arclength `s`.
    pub parameter: fn(f64) -> f64,
    /// Horizontal stretch of the ray point at parameter `t`.
    pub stretch: fn(f64) -> f64,
    /// Grafting amount paired with parameter `t`.
    pub graft: fn(f64) -> f64,
    /// Ratio of grafting amount to stretch.
    pub ratio: f64,
}

/// `gr_{e^{2t}}` against the ray stretched by `e^{2t}`, and `gr_{e²t}` against the ray
/// stretched by `t = e^s`.
pub const READINGS: [Reading; 2] = [
    Reading { name: "exp(2t)", parameter: |s| s, stretch: |t| (2.0 * t).exp(), graft: |t| (2.0 * t).exp(), ratio: 1.0 },
    Reading {
        name: "e^2 t",
        parameter: |s| s.exp(),
        stretch: |t| t,
        graft: |t| std::f64::consts::E * std::f64::consts::E * t,
        ratio: std::f64::consts::E * std::f64::consts::E,
    },
];

pub const TORUS_CURVES: [(i64, i64); 3] = [(1, 0), (0, 1), (1, 1)];

fn torus_asymptoticity(cfg: &ExperimentConfig) -> Result<ExperimentReport, LabError> {
    let mut r = ExperimentReport::new("torus-asymptoticity");
    let samples = 65;
    let tau = TorusPoint::new(Complex64::new(0.0, 1.0))?;
    r.input("tau", [0.0, 1.0]);
    r.input("curves", TORUS_CURVES);
    r.input("horizon", cfg.horizon);
    r.input("samples", samples);
    let x = FlatTorus::from_modulus(&tau);
    for reading in READINGS {
        let mut per_curve = BTreeMap::new();
        let (mut monotone, mut below, mut worst_err) = (true, true, 0.0f64);
        for (p, qq) in TORUS_CURVES {
            let curve = SimpleCurve::new(p, qq)?;
            let gamma = x.point(p, qq);
            // Distance between consecutive grafting loci.
            let h = x.area() / gamma.norm();
            // The ray through the rescaled limit of the grafted tori.
            let y = x.stretch_normal(gamma, reading.ratio / h);
            let mut ts = Vec::with_capacity(samples);
            let mut ds = Vec::with_capacity(samples);
            for k in 0..samples {
                let s = cfg.horizon * k as f64 / (samples - 1) as f64;
                let t = (reading.parameter)(s);
                let stretch = (reading.stretch)(t);
                let grafted = graft_lattice(&x, curve, (reading.graft)(t))?.modulus()?;
                let ray = y.stretch_normal(gamma, stretch).modulus()?;
                let d = torus_teich_distance(&grafted, &ray);
                let oracle = 0.5 * (h / (reading.ratio * stretch)).ln_1p();
                worst_err = worst_err.max((d - oracle).abs());
                ts.push(t);
                ds.push(d);
            }
            let mono = ds.windows(2).all(|w| w[1] < w[0]);
            let last = *ds.last().expect("samples");
            monotone &= mono;
            below &= last < 0.01;
            let far = graft_lattice(&x, curve, (reading.graft)(*ts.last().expect("samples")))?;
            let rescaled = far.stretch_normal(gamma, 1.0 / (reading.stretch)(*ts.last().expect("samples"))).modulus()?;
            let y_tau = y.modulus()?.tau;
            per_curve.insert(
                format!("({p},{qq})"),
                json!({
                    "ray_base_tau": [y_tau.re, y_tau.im],
                    "fit_residual": torus_teich_distance(&rescaled, &y.modulus()?),
                    "t": ts,
                    "distance": ds,
                    "t0": ts[0],
                    "final_distance": last,
                    "monotone": mono,
                }),
            );
        }
        r.measure(reading.name, json!({"curves": per_curve, "max_oracle_error": worst_err}));
        r.check(&format!("{}: d(t) decreasing for t ≥ t0", reading.name), monotone, "all curves".to_string());
        r.check(&format!("{}: d(T) < 0.01", reading.name), below, format!("horizon {}", cfg.horizon));
        r.check(&format!("{}: oracle error < 1e-9", reading.name), worst_err < 1e-9, format!("max error {worst_err:e}"));
    }
    Ok(r)
}

fn yt_ray_property(cfg: &ExperimentConfig) -> Result<ExperimentReport, LabError> {
    let mut r = ExperimentReport::new("yt-ray-property");
    r.input("seed", cfg.seed);
    r.input("tracks", cfg.trials);
    r.input("ratios", [4, 9, 25]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut passes = 0;
    let mut failures = Vec::new();
    let mut by_ratio: BTreeMap<String, usize> = BTreeMap::new();
    let mut by_size: BTreeMap<String, usize> = BTreeMap::new();
    for k in 0..cfg.trials {
        let n = rng.gen_range(1..=4);
        let track = random_track(&mut rng, n);
        let s1 = WidthScale::new(q(rng.gen_range(1..=9), rng.gen_range(1..=4)))?;
        let ratio = [4, 9, 25][rng.gen_range(0..3)];
        *by_ratio.entry(ratio.to_string()).or_default() += 1;
        *by_size.entry(n.to_string()).or_default() += 1;
        let y2 = build_yt(&track, &s1.times(&qi(ratio))?)?;
        let y1 = build_yt(&track, &s1)?;
        if isometric(&y2, &flow_exact(&y1, &qi(ratio))?)? {
            passes += 1;
        } else {
            failures.push(k);
        }
    }
    r.measure("passes", passes);
    r.measure("failures", failures);
    r.measure("ratio_counts", by_ratio);
    r.measure("branch_counts", by_size);
    r.check(
        "Y at t₂ is isometric to Y at t₁ flowed by t₂/t₁",
        passes == cfg.trials,
        format!("{passes}/{} exact passes", cfg.trials),
    );
    Ok(r)
}

fn random_q<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(-50..50), rng.gen_range(1..12))
}

fn random_crown<R: Rng>(rng: &mut R) -> CrownEnd {
    let n = rng.gen_range(1..8);
    let cuts = (0..n)
        .map(|_| {
            let l = random_q(rng);
            let len = q(rng.gen_range(0..40), rng.gen_range(1..6));
            (l.clone(), l + len)
        })
        .collect();
    CrownEnd::new(cuts).expect("cuts are ordered")
}

/// Surfaces whose limits the experiments examine.
pub fn experiment_surfaces() -> Result<Vec<(&'static str, FlatSurface)>, LabError> {
    Ok(vec![
        ("slit torus", SlitTorus::theta().build()?),
        ("two-piece slit torus", SlitTorus::two_interval().build()?),
        ("four simple zeros", generic_four_zero_surface(211)),
        ("marked square torus", marked_square_torus()),
        ("one cylinder", one_cylinder_surface(&qi(1), &qi(1), [q(1, 4), q(1, 2), q(1, 4)])?),
    ])
}

fn residue_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport, LabError> {
    let mut r = ExperimentReport::new("residue-suite");
    let trials = 2 * cfg.trials;
    r.input("seed", cfg.seed);
    r.input("crowns", trials);
    r.input("feeler_length", format_q(&cfg.feeler_length));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut invariant, mut normalized) = (0, 0);
    for _ in 0..trials {
        let c = random_crown(&mut rng);
        let residue = crown_residue(&c);
        let mut moved = c.clone();
        for i in 0..c.len() {
            moved = moved.shift_basepoint(i, &random_q(&mut rng)).shift_leaf(i, &random_q(&mut rng));
        }
        if crown_residue(&moved) == residue {
            invariant += 1;
        }
        let total: Q = c.side_lengths().iter().sum();
        let h = total + qi(rng.gen_range(0..20));
        let mut got = normalize_truncation(&c, &h)?;
        let mut want = vec![h.clone(); c.len()];
        want[0] = &h + &residue;
        got.sort();
        want.sort();
        if got == want {
            normalized += 1;
        }
    }
    r.measure("shift_invariant", invariant);
    r.measure("normalized", normalized);
    r.check("crown residue unchanged by basepoint and leaf shifts", invariant == trials, format!("{invariant}/{trials}"));
    r.check("normalized truncation is {H, …, H, H + C}", normalized == trials, format!("{normalized}/{trials}"));

    let mut compared = BTreeMap::new();
    let mut all_agree = true;
    for (name, s) in experiment_surfaces()? {
        let g = appended_graph(&s, &cfg.feeler_length)?;
        let y = y_infinity(&s, &cfg.feeler_length)?;
        let ribbon = g.ribbon();
        let sides = ribbon.sides();
        let mut agree = 0;
        for (i, e) in y.ends.iter().enumerate() {
            let d = end_local_data(&y, i, None)?;
            let ok = match &d.residue {
                Residue::Planar(c) => &limit_residue_from_graph(&g, e.walk) == c,
                Residue::Cylinder { circumference } => {
                    let around: Q = sides.iter().filter(|s| s.walk == e.walk).map(|s| ribbon.side_length(s)).sum();
                    &around == circumference
                }
            };
            agree += ok as usize;
        }
        all_agree &= agree == y.ends.len();
        compared.insert(name.to_string(), json!({"ends": y.ends.len(), "agree": agree}));
    }
    r.measure("graph_residues", compared);
    r.check("graph residues agree with end data on every experiment surface", all_agree, "see graph_residues");
    Ok(r)
}
