//! Argument parsing and command dispatch for the `lab` binary. Commands produce
//! their output in memory so they can be tested without a process.

use crate::experiments::{run_experiment, ExperimentConfig};
use crate::qc_suite::{beltrami_k, exp_affine, normalized_shear};
use crate::surface_file::{parse_surface_file, write_surface, FileError};
use crate::svg::{render_graph, render_surface, render_truncation};
use crate::LabError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use flat_kernel::rational::parse_q;
use flat_kernel::{EdgeRef, FlatSurface, Q};
use grafting::{build_yt, graft_cylinder, graft_torus, GraftLocus, SimpleCurve, TrainTrackData, WidthScale};
use half_plane::{boundary_exchange, end_local_data, truncate, y_infinity};
use num_complex::Complex64;
use qc_toolkit::*;
use serde_json::json;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use teich_flow::{flow_exact, scale_factor, TorusPoint};
use vertical_graph::appended_graph;

#[derive(Parser, Debug)]
#[command(name = "lab", version, about = "Flat surfaces, stretch rays, their limits and quasiconformal measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write results into this directory instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Time {
    /// Ray time; the horizontal stretch is e^{2t} rounded to a double.
    #[arg(long = "t", allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Exact rational stretch factor, e.g. 4 or 9/4.
    #[arg(long)]
    pub scale: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum QcOp {
    /// Dilatation of z + ε z̄ and of exp(z + ε z̄) on the unit square.
    Dilatation,
    /// Quasisymmetry constant of x + ε sin(2πx)/2π.
    Quasisymmetry,
    /// Identity interpolation of a rotation by ε turns.
    Interpolate,
    /// Extension between [0,100]×[0,10] and [0,100(1+ε)]×[0,10].
    Rectangle,
    /// Sewing two annuli carrying shears of size ε.
    Sew,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a surface file.
    Validate { file: PathBuf },
    /// Stretch a surface horizontally along the ray.
    Flow {
        file: PathBuf,
        #[command(flatten)]
        time: Time,
        #[command(flatten)]
        output: Output,
    },
    /// Vertical saddle connections, feelers and the sides of the vertical graph.
    Vgraph {
        file: PathBuf,
        /// Feeler length and saddle-connection bound.
        #[arg(long = "L", default_value = "2")]
        l: String,
        #[command(flatten)]
        output: Output,
    },
    /// The limit half-plane surface with its end data.
    Limit {
        file: PathBuf,
        #[arg(long = "L", default_value = "2")]
        l: String,
        /// Truncation height for the SVG rendering.
        #[arg(long, default_value = "10")]
        height: String,
        /// End to truncate for the SVG rendering.
        #[arg(long, default_value_t = 0)]
        end: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Graft a surface along a vertical locus, or a torus modulus along a curve.
    Graft {
        /// Surface file; omit when grafting a torus modulus.
        file: Option<PathBuf>,
        /// Locus edges as poly:edge pairs separated by commas.
        #[arg(long, requires = "file")]
        locus: Option<String>,
        /// Torus modulus as re,im.
        #[arg(long, conflicts_with = "file", requires = "curve", allow_hyphen_values = true)]
        tau: Option<String>,
        /// Curve class as p,q.
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
        /// Grafting width (rational for surfaces).
        #[arg(long = "t")]
        t: String,
        #[command(flatten)]
        output: Output,
    },
    /// Build the flat surface of a weighted track at a grafting time.
    Yt {
        /// Track in the JSON layout of the grafting crate.
        file: PathBuf,
        /// Grafting time; the width scale is 2πt.
        #[arg(long = "t")]
        t: Option<f64>,
        /// Exact width scale instead of 2πt.
        #[arg(long, conflicts_with = "t")]
        scale: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Run one quasiconformal construction and measure it.
    Qc {
        op: QcOp,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run a scripted experiment and report its assertions.
    Experiment {
        name: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long = "L", default_value = "2")]
        l: String,
        #[arg(long, default_value_t = 5.0)]
        horizon: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        output: Output,
    },
}

/// What a command produced: named documents and whether its assertions held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub documents: Vec<(String, String)>,
    pub passed: bool,
}

impl Outcome {
    fn one(name: &str, content: String) -> Self {
        Outcome { documents: vec![(name.to_string(), content)], passed: true }
    }

    /// Exit status: 0 when every assertion held, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn read(path: &Path) -> Result<String, LabError> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io { path: path.display().to_string(), source })
}

fn in_file(path: &Path, e: FileError) -> LabError {
    LabError::Input(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<FlatSurface, LabError> {
    let text = read(path)?;
    parse_surface_file(&text).and_then(|p| p.validate()).map_err(|e| in_file(path, e))
}

fn rational(flag: &str, s: &str) -> Result<Q, LabError> {
    parse_q(s).map_err(|_| LabError::Input(format!("--{flag}: {s:?} is not a rational number")))
}

fn pair<T: std::str::FromStr>(flag: &str, s: &str) -> Result<(T, T), LabError> {
    let bad = || LabError::Input(format!("--{flag}: expected two comma-separated numbers, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn unsupported(cmd: &str, f: Format) -> LabError {
    LabError::Input(format!("{cmd} does not produce {f:?} output"))
}

fn surface_output(cmd: &str, s: &FlatSurface, f: Format) -> Result<Outcome, LabError> {
    match f {
        Format::Json => Ok(Outcome::one("surface.json", write_surface(s))),
        Format::Svg => Ok(Outcome::one("surface.svg", render_surface(s)?)),
        Format::Csv => Err(unsupported(cmd, f)),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, LabError> {
    match &cli.command {
        Command::Validate { file } => {
            let s = load(file)?;
            let angles: Vec<String> = s.cone_data().iter().map(|c| format!("{}π", c.angle_pi)).collect();
            Ok(Outcome::one(
                "validate.txt",
                format!(
                    "ok: {} polygons, {} gluings, genus {}, cone angles [{}]\n",
                    s.polygons().len(),
                    s.gluings().len(),
                    s.genus(),
                    angles.join(", ")
                ),
            ))
        }
        Command::Flow { file, time, output } => {
            let s = load(file)?;
            let k = match (&time.t, &time.scale) {
                (Some(t), _) => scale_factor(*t)?,
                (None, Some(k)) => rational("scale", k)?,
                (None, None) => unreachable!("clap requires one of --t and --scale"),
            };
            surface_output("flow", &flow_exact(&s, &k)?, output.format)
        }
        Command::Vgraph { file, l, output } => {
            let s = load(file)?;
            let g = appended_graph(&s, &rational("L", l)?)?;
            match output.format {
                Format::Json => Ok(Outcome::one("vgraph.json", pretty(&json!({"graph": g, "sides": g.sides()})))),
                Format::Svg => Ok(Outcome::one("vgraph.svg", render_graph(&g)?)),
                f => Err(unsupported("vgraph", f)),
            }
        }
        Command::Limit { file, l, height, end, output } => {
            let s = load(file)?;
            let y = y_infinity(&s, &rational("L", l)?)?;
            match output.format {
                Format::Json => {
                    let ends = (0..y.ends.len()).map(|i| end_local_data(&y, i, None)).collect::<Result<Vec<_>, _>>()?;
                    let v = json!({
                        "half_planes": y.half_plane_count(),
                        "half_cylinders": y.cylinder_count(),
                        "components": y.component_count(),
                        "end_data": ends,
                        "boundary_exchange": boundary_exchange(&y),
                        "surface": y,
                    });
                    Ok(Outcome::one("limit.json", pretty(&v)))
                }
                Format::Svg => Ok(Outcome::one("truncation.svg", render_truncation(&truncate(&y, *end, &rational("height", height)?)?)?)),
                f => Err(unsupported("limit", f)),
            }
        }
        Command::Graft { file, locus, tau, curve, t, output } => match (file, tau) {
            (Some(file), _) => {
                let s = load(file)?;
                let arg = locus.as_deref().ok_or_else(|| LabError::Input("grafting a surface needs --locus".into()))?;
                let edges = arg
                    .split(',')
                    .map(|e| {
                        let (p, k) = e.split_once(':').ok_or_else(|| LabError::Input(format!("--locus: bad edge {e:?}")))?;
                        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| LabError::Input(format!("--locus: bad edge {e:?}")));
                        Ok(EdgeRef::new(num(p)?, num(k)?))
                    })
                    .collect::<Result<Vec<_>, LabError>>()?;
                surface_output("graft", &graft_cylinder(&s, &GraftLocus::new(edges), &rational("t", t)?)?, output.format)
            }
            (None, Some(tau)) => {
                let (re, im) = pair::<f64>("tau", tau)?;
                let (p, q) = pair::<i64>("curve", curve.as_deref().unwrap_or_default())?;
                let width: f64 = t.parse().map_err(|_| LabError::Input(format!("--t: {t:?} is not a number")))?;
                let out = graft_torus(&TorusPoint::new(Complex64::new(re, im))?, SimpleCurve::new(p, q)?, width)?;
                if output.format != Format::Json {
                    return Err(unsupported("graft", output.format));
                }
                Ok(Outcome::one("graft.json", pretty(&json!({"tau": [re, im], "curve": [p, q], "t": width, "grafted_tau": [out.tau.re, out.tau.im]}))))
            }
            (None, None) => Err(LabError::Input("graft needs a surface file or --tau".into())),
        },
        Command::Yt { file, t, scale, output } => {
            let text = read(file)?;
            let track: TrainTrackData = serde_json::from_str(&text).map_err(|e| LabError::Input(format!("{}: {e}", file.display())))?;
            let s = match (t, scale) {
                (_, Some(k)) => WidthScale::new(rational("scale", k)?)?,
                (Some(t), None) => WidthScale::from_time(*t)?,
                (None, None) => WidthScale::from_time(1.0)?,
            };
            surface_output("yt", &build_yt(&track, &s)?, output.format)
        }
        Command::Qc { op, grid, epsilon, output } => qc(*op, *grid, *epsilon, output.format),
        Command::Experiment { name, seed, grid, epsilon, l, horizon, trials, output } => {
            let cfg = ExperimentConfig {
                seed: *seed,
                grid: *grid,
                epsilon: *epsilon,
                feeler_length: rational("L", l)?,
                horizon: *horizon,
                trials: *trials,
            };
            let report = run_experiment(name, &cfg)?;
            let mut documents = match output.format {
                Format::Json => vec![("report.json".to_string(), report.to_json())],
                Format::Csv => {
                    let mut csv = String::from("assertion,passed,detail\n");
                    for a in &report.assertions {
                        csv.push_str(&format!("{:?},{},{:?}\n", a.name, a.passed, a.detail));
                    }
                    vec![("assertions.csv".to_string(), csv)]
                }
                Format::Svg => Vec::new(),
            };
            if output.out.is_some() || output.format == Format::Svg {
                documents.extend(report.artifacts.iter().map(|a| (a.name.clone(), a.content.clone())));
            }
            if documents.is_empty() {
                return Err(unsupported(name, Format::Svg));
            }
            Ok(Outcome { documents, passed: report.passed() })
        }
    }
}

fn qc(op: QcOp, grid: usize, eps: f64, format: Format) -> Result<Outcome, LabError> {
    if !(grid >= 8 && eps > 0.0 && eps < 0.5) {
        return Err(LabError::ConfigInvalid(format!("need grid ≥ 8 and 0 < ε < 1/2, got {grid} and {eps}")));
    }
    let square = Domain::Rectangle { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
    let quad = Quadrature::default();
    let (value, report) = match op {
        QcOp::Dilatation => {
            let shear = GridMap::sample(square.clone(), grid, grid, &move |z: Complex64| z + eps * z.conj())?;
            let curved = dilatation(&GridMap::sample(square, grid, grid, &exp_affine(Complex64::new(eps, 0.0)))?)?;
            let rep = dilatation(&shear)?;
            let v = json!({"closed_form": beltrami_k(eps), "shear_sup_k": rep.sup_k, "exp_sup_k": curved.sup_k, "quantiles": curved.quantiles});
            (v, Some(curved))
        }
        QcOp::Quasisymmetry => {
            let h = CircleMap::from_lift(grid, |x| x + eps * (TAU * x).sin() / TAU)?;
            (json!({"samples": grid, "quasisymmetry": quasisymmetry_constant(&h)}), None)
        }
        QcOp::Interpolate => {
            let h = CircleMap::rotation(grid, eps);
            let m = interpolate_identity(&h, 2.0, &quad, grid, 2 * grid)?;
            let rep = dilatation(&m)?;
            (json!({"depth": 2.0, "rotation_turns": eps, "sup_k": rep.sup_k}), Some(rep))
        }
        QcOp::Rectangle => {
            let l2 = 100.0 * (1.0 + eps);
            let good = Goodness { epsilon: 0.15, additive: 1.5 };
            let r = extend_good_rectangle_map(&GoodBoundary::linear(1001, l2), (100.0, 10.0), (l2, 10.0), &good, (grid, grid))?;
            (json!({"l1": 100.0, "l2": l2, "h": 10.0, "sup_k": r.report.sup_k, "constant": r.constant}), Some(r.report))
        }
        QcOp::Sew => {
            let m = (1.5f64).max((1.0 / eps).ln() / TAU + 0.5);
            let r = |y: f64| (-TAU * y).exp();
            let a1 = RoundAnnulus { inner: r(m), outer: 1.0 };
            let a2 = RoundAnnulus { inner: r(2.0 * m), outer: r(m) };
            let f1 = normalized_shear(Complex64::new(eps, 0.0));
            let f2 = normalized_shear(Complex64::new(0.0, eps));
            let glue = CircleMap::from_lift(4096, |x| x + eps * (2.0 * TAU * x).sin() / (2.0 * TAU))?;
            let cfg = SewConfig { epsilon: eps, grid: (grid, grid), ..SewConfig::default() };
            let out = sew_annuli(
                &AnnulusPiece { domain: a1, target: a1, map: &f1 },
                &AnnulusPiece { domain: a2, target: a2, map: &f2 },
                &glue,
                &cfg,
            )?;
            let v = json!({"modulus": m, "sup_k": out.sup_k(), "constant": (out.sup_k() - 1.0) / eps, "seam_defect": out.seam_defect});
            (v, Some(out.inner_report))
        }
    };
    match (format, report) {
        (Format::Json, _) => Ok(Outcome::one("qc.json", pretty(&value))),
        (Format::Csv, Some(rep)) => Ok(Outcome {
            documents: vec![("field.csv".into(), rep.field_csv()), ("quantiles.csv".into(), rep.quantiles_csv())],
            passed: true,
        }),
        (f, _) => Err(unsupported("qc", f)),
    }
}

/// Writes the documents into `dir`, or returns them joined for standard output.
pub fn emit(outcome: &Outcome, dir: Option<&Path>) -> Result<String, LabError> {
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| LabError::Io { path: dir.display().to_string(), source })?;
            let mut listing = String::new();
            for (name, content) in &outcome.documents {
                let path = dir.join(name);
                std::fs::write(&path, content).map_err(|source| LabError::Io { path: path.display().to_string(), source })?;
                listing.push_str(&format!("{}\n", path.display()));
            }
            Ok(listing)
        }
        None => Ok(outcome.documents.iter().map(|(_, c)| c.as_str()).collect::<Vec<_>>().join("\n")),
    }
}

impl Command {
    pub fn out_dir(&self) -> Option<&Path> {
        match self {
            Command::Validate { .. } => None,
            Command::Flow { output, .. }
            | Command::Vgraph { output, .. }
            | Command::Limit { output, .. }
            | Command::Graft { output, .. }
            | Command::Yt { output, .. }
            | Command::Qc { output, .. }
            | Command::Experiment { output, .. } => output.out.as_deref(),
        }
    }
}
