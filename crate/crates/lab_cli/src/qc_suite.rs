//! Numerical measurements of the quasiconformal constructions, with the constant
//! `C = (K − 1)/ε` fitted for each family.

use crate::experiments::ExperimentConfig;
use crate::report::ExperimentReport;
use crate::LabError;
use num_complex::Complex64;
use qc_toolkit::*;
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

/// `exp(z + μ z̄)`: constant Beltrami coefficient `μ` but not affine.
pub fn exp_affine(mu: Complex64) -> impl Fn(Complex64) -> Complex64 + Sync {
    move |z: Complex64| (z + mu * z.conj()).exp()
}

/// `z + μ z̄` pushed radially back onto the circle through `z`.
pub fn normalized_shear(mu: Complex64) -> impl Fn(Complex64) -> Complex64 + Sync {
    move |z: Complex64| {
        let u = z + mu * z.conj();
        if u.norm() == 0.0 {
            u
        } else {
            u * (z.norm() / u.norm())
        }
    }
}

/// `x + Σ (a_k sin 2πkx + b_k cos 2πkx)/2πk`.
pub fn fourier_lift(coeffs: &[(f64, f64)]) -> impl Fn(f64) -> f64 + '_ {
    move |x: f64| {
        x + coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let w = TAU * (k + 1) as f64;
                (a * (w * x).sin() + b * (w * x).cos()) / w
            })
            .sum::<f64>()
    }
}

pub fn beltrami_k(mu: f64) -> f64 {
    (1.0 + mu) / (1.0 - mu)
}

fn unit_square() -> Domain {
    Domain::Rectangle { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 }
}

fn sup_k(domain: Domain, n: usize, f: &(impl PlaneMap + ?Sized)) -> Result<f64, QcError> {
    Ok(dilatation(&GridMap::sample(domain, n, n, f)?)?.sup_k)
}

/// Four round annuli of modulus `m`: two nested domain halves sharing the circle at
/// `e^{-2πm}`, and the matching targets.
fn sewing_annuli(m: f64) -> [RoundAnnulus; 2] {
    let r = |y: f64| (-TAU * y).exp();
    [RoundAnnulus { inner: r(m), outer: 1.0 }, RoundAnnulus { inner: r(2.0 * m), outer: r(m) }]
}

pub fn qc_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport, LabError> {
    let mut r = ExperimentReport::new("qc-suite");
    let g = cfg.grid;
    let eps = cfg.epsilon;
    let quad = Quadrature::default();
    r.input("grid", g);
    r.input("epsilon", eps);
    r.input("quadrature_nodes", quad.nodes);
    r.input("quadrature_tolerance", quad.tolerance);
    let mut constants = BTreeMap::new();

    // Dilatation estimator.
    let stretch = |z: Complex64| Complex64::new(2.0 * z.re, z.im);
    let shear = |z: Complex64| z + 0.1 * z.conj();
    let affine = [(sup_k(unit_square(), 256, &stretch)? - 2.0).abs(), (sup_k(unit_square(), 256, &shear)? - 1.1 / 0.9).abs()];
    r.measure("affine_errors", affine);
    r.check("affine maps match their closed form within 1e-6", affine.iter().all(|e| *e < 1e-6), format!("{affine:?}"));
    let mu = Complex64::new(0.2, 0.1);
    let f = exp_affine(mu);
    let exact = beltrami_k(mu.norm());
    let sizes = [g / 4, g / 2, g];
    let mut errors = Vec::new();
    let mut coarsest = None;
    for &n in &sizes {
        let m = GridMap::sample(unit_square(), n, n, &f)?;
        let rep = dilatation(&m)?;
        errors.push((rep.sup_k - exact).abs());
        if coarsest.is_none() {
            coarsest = Some(rep);
        }
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    r.measure("dilatation", json!({"mu": [mu.re, mu.im], "exact": exact, "grids": sizes, "errors": errors, "ratios": ratios}));
    r.check("dilatation error below 1e-3 on the finest grid", errors[2] < 1e-3, format!("{:e} at {g}²", errors[2]));
    r.check(
        "second-order convergence ratio in [3.5, 4.5]",
        ratios.iter().all(|x| (3.5..=4.5).contains(x)),
        format!("{ratios:?}"),
    );
    let coarsest = coarsest.expect("three grids");
    r.attach("dilatation_field.csv", coarsest.field_csv());
    r.attach("dilatation_quantiles.csv", coarsest.quantiles_csv());

    // Quasisymmetry of a sine perturbation of the identity.
    let qs = quasisymmetry_constant(&CircleMap::from_lift(1024, |x| x + 0.01 * (TAU * x).sin() / TAU)?);
    r.measure("quasisymmetry_sine", qs);
    r.check("sine perturbation has quasisymmetry constant in (1, 1.05)", qs > 1.0 && qs < 1.05, format!("{qs}"));

    // Beurling–Ahlfors periodicity.
    let lifts: [&[(f64, f64)]; 3] = [&[(0.1, -0.05), (0.03, 0.02)], &[(0.18, 0.0)], &[(0.05, 0.05), (-0.1, 0.02), (0.04, -0.03)]];
    let defects: Vec<f64> = lifts
        .iter()
        .map(|c| {
            let l = fourier_lift(c);
            CircleMap::from_lift(2048, |x| l(x) + 0.1).map(|h| periodicity_defect(&h, &quad, 64))
        })
        .collect::<Result<_, _>>()?;
    r.measure("periodicity_defects", &defects);
    r.check("Beurling–Ahlfors periodicity defect below 1e-6", defects.iter().all(|d| *d < 1e-6), format!("{defects:?}"));

    // Identity interpolation: exact inside, matches the boundary map.
    let lift = fourier_lift(&[(0.1, -0.05), (0.03, 0.02)]);
    let h = CircleMap::from_lift(4096, |x| lift(x) + 0.1)?;
    let depth = 2.5;
    let interp = IdentityInterpolant::new(h.clone(), depth, quad)?;
    let s = interp.identity_radius();
    let m = interpolate_identity(&h, depth, &quad, 64, 200)?;
    let (mut inside, mut exact_inside) = (0, 0);
    for j in 0..m.m() {
        for i in 0..m.n() {
            let z = m.point(i, j);
            if z.norm() <= s {
                inside += 1;
                exact_inside += (m.value(i, j) == z) as usize;
            }
        }
    }
    let boundary = (0..4096)
        .map(|k| {
            let x = k as f64 / 4096.0;
            (interp.eval(Complex64::from_polar(1.0, TAU * x)) - Complex64::from_polar(1.0, TAU * h.eval(x))).norm()
        })
        .fold(0.0, f64::max);
    r.measure("identity_interpolation", json!({"depth": depth, "samples_inside": inside, "boundary_error": boundary}));
    r.check(
        "identity interpolation is exactly the identity on the inner disk",
        inside > 0 && exact_inside == inside,
        format!("{exact_inside}/{inside} samples"),
    );
    r.check("identity interpolation matches h on the boundary within 1e-6", boundary < 1e-6, format!("{boundary:e}"));

    // K(D) for a rotation, against the closed form of the linear interpolant.
    let rot = CircleMap::rotation(512, 0.05);
    let mut curve = Vec::new();
    for d in [1.5, 2.0, 3.0, 4.0, 6.0] {
        let k = dilatation(&interpolate_identity(&rot, d, &quad, 128, 256)?)?.sup_k;
        let a = 0.05 / (d - 1.0);
        let (p, q) = ((1.0 + a * a / 4.0).sqrt(), a / 2.0);
        curve.push(json!({"depth": d, "sup_k": k, "closed_form": (p + q) / (p - q), "c0_over_d_minus_1": a}));
    }
    r.measure("identity_interpolation_k_of_depth", curve);

    // Good rectangles.
    let good = Goodness { epsilon: 0.15, additive: 1.5 };
    let rect = extend_good_rectangle_map(&GoodBoundary::linear(1001, 101.0), (100.0, 10.0), (101.0, 10.0), &good, (g, g))?;
    let wiggle = |amp: f64| move |x: f64| 1.01 * x + amp * (PI * x / 25.0).sin();
    let fb = GoodBoundary::from_fns(2001, 100.0, wiggle(0.3), wiggle(-0.3));
    let wig = extend_good_rectangle_map(&fb, (100.0, 10.0), (101.0, 10.0), &good, (g / 2, g / 4))?;
    r.measure("good_rectangle", json!({"linear_sup_k": rect.report.sup_k, "wiggle_sup_k": wig.report.sup_k}));
    r.check("good rectangle extension has sup K ≤ 1.02", rect.report.sup_k <= 1.02, format!("{}", rect.report.sup_k));
    constants.insert("good_rectangle", rect.constant.max(wig.constant));

    // Boundary traces of a normalized shear.
    let ann = Domain::Annulus { inner: 0.01, outer: 1.0 };
    let sh = GridMap::sample(ann, g, 64, &normalized_shear(Complex64::new(eps, 0.0)))?;
    let k_sh = dilatation(&sh)?.sup_k;
    let qs_sh = quasisymmetry_constant(&boundary_trace(&sh)?);
    r.measure("boundary_trace", json!({"sup_k": k_sh, "quasisymmetry": qs_sh}));
    constants.insert("boundary_trace", (qs_sh - 1.0) / eps);

    // Conformal interpolation.
    let icfg = InterpolationConfig::default();
    let mu_f = 2.0 * eps;
    let fmap = move |z: Complex64| z + mu_f * z.conj();
    let g_id = Holomorphic { map: |z: Complex64| z, derivative: |_: Complex64| Complex64::new(1.0, 0.0) };
    let ci = interpolate_with_conformal(&fmap, &g_id, 0.9, &icfg)?;
    let (_, rep) = ci.sample(g / 2, g)?;
    r.measure(
        "conformal_interpolation",
        json!({"perturbation": mu_f, "sup_k": rep.sup_k, "inner_radius": ci.inner_radius(), "seam_radius": ci.seam_radius()}),
    );
    constants.insert("conformal_interpolation", (rep.sup_k - 1.0) / mu_f);

    // Sewing annuli with perturbed halves.
    let modulus = (1.5f64).max((1.0 / eps).ln() / TAU + 0.5);
    let [a1, a2] = sewing_annuli(modulus);
    let f1 = normalized_shear(Complex64::new(eps, 0.0));
    let f2 = normalized_shear(Complex64::new(0.0, eps));
    let glue = CircleMap::from_lift(4096, |x| x + eps * (TAU * 2.0 * x).sin() / (TAU * 2.0))?;
    let outer = AnnulusPiece { domain: a1, target: a1, map: &f1 };
    let inner = AnnulusPiece { domain: a2, target: a2, map: &f2 };
    let mut sewn = Vec::new();
    for n in [g / 2, g] {
        let scfg = SewConfig { epsilon: eps, grid: (n, n), ..SewConfig::default() };
        let out = sew_annuli(&outer, &inner, &glue, &scfg)?;
        sewn.push(((out.sup_k() - 1.0) / eps, out.seam_defect, out.sup_k()));
    }
    let (c_coarse, c_fine) = (sewn[0].0, sewn[1].0);
    r.measure(
        "sewing",
        json!({"modulus": modulus, "grids": [g / 2, g], "sup_k": [sewn[0].2, sewn[1].2], "seam_defect": [sewn[0].1, sewn[1].1]}),
    );
    r.check(
        "sewn annuli agree across the seam within 1e-6",
        sewn.iter().all(|s| s.1 < 1e-6),
        format!("{:e}, {:e}", sewn[0].1, sewn[1].1),
    );
    r.check(
        "sewing constant stable within 20% between grids",
        (c_fine / c_coarse - 1.0).abs() <= 0.2,
        format!("C = {c_coarse:.4} at {}², {c_fine:.4} at {g}²", g / 2),
    );
    constants.insert("sewing_coarse", c_coarse);
    constants.insert("sewing_fine", c_fine);
    r.measure("fitted_constants", constants);
    Ok(r)
}
