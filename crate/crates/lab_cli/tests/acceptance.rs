//! One PASS/FAIL line per acceptance criterion. Runs without the libtest harness so
//! every line prints even when an earlier criterion fails.

use lab_cli::{run_experiment, ExperimentConfig, ExperimentReport};
use std::time::{Duration, Instant};

struct Criterion {
    label: &'static str,
    experiment: &'static str,
    budget: Option<Duration>,
    /// Extra exact checks on the report beyond its own assertions.
    extra: fn(&ExperimentReport) -> Result<(), String>,
}

fn none(_: &ExperimentReport) -> Result<(), String> {
    Ok(())
}

fn slit(r: &ExperimentReport) -> Result<(), String> {
    let m = &r.measured;
    if m["boundary_exchange"].as_array().is_none_or(Vec::is_empty) {
        return Err("empty boundary exchange".into());
    }
    match (m["genus"].as_u64(), m["half_planes"].as_u64(), m["half_cylinders"].as_u64()) {
        (Some(2), Some(2), Some(0)) => Ok(()),
        other => Err(format!("genus, half-planes, cylinders = {other:?}")),
    }
}

fn ray(r: &ExperimentReport) -> Result<(), String> {
    match (r.measured["passes"].as_u64(), r.inputs["tracks"].as_u64()) {
        (Some(100), Some(100)) => Ok(()),
        other => Err(format!("passes/trials = {other:?}")),
    }
}

fn torus(r: &ExperimentReport) -> Result<(), String> {
    let n = r.assertions.iter().filter(|a| a.passed).count();
    if n == 6 {
        Ok(())
    } else {
        Err(format!("{n}/6 reading assertions"))
    }
}

fn residue(r: &ExperimentReport) -> Result<(), String> {
    match r.inputs["crowns"].as_u64() {
        Some(200) => Ok(()),
        other => Err(format!("crowns = {other:?}")),
    }
}

const CRITERIA: [Criterion; 6] = [
    Criterion { label: "slit-torus limit", experiment: "slit-torus-limit", budget: Some(Duration::from_secs(1)), extra: slit },
    Criterion { label: "generic limit count", experiment: "generic-limit", budget: Some(Duration::from_secs(5)), extra: none },
    Criterion { label: "ray property of Y_t", experiment: "yt-ray-property", budget: Some(Duration::from_secs(30)), extra: ray },
    Criterion { label: "torus asymptoticity", experiment: "torus-asymptoticity", budget: Some(Duration::from_secs(5)), extra: torus },
    Criterion { label: "qc numerical suite", experiment: "qc-suite", budget: Some(Duration::from_secs(120)), extra: none },
    Criterion { label: "residue suite", experiment: "residue-suite", budget: None, extra: residue },
];

fn main() {
    let cfg = ExperimentConfig::default();
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let result = run_experiment(c.experiment, &cfg);
        let elapsed = start.elapsed();
        let mut problems = Vec::new();
        match &result {
            Ok(report) => {
                problems.extend(report.assertions.iter().filter(|a| !a.passed).map(|a| format!("{}: {}", a.name, a.detail)));
                if let Err(e) = (c.extra)(report) {
                    problems.push(e);
                }
            }
            Err(e) => problems.push(e.to_string()),
        }
        if let Some(b) = c.budget {
            if elapsed > b {
                problems.push(format!("took {elapsed:.2?}, budget {b:?}"));
            }
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        let checks = result.as_ref().map_or(0, |r| r.assertions.len());
        println!("{status} {:<22} {checks:>2} checks  {elapsed:>10.2?}  {}", c.label, problems.join("; "));
        failed += !problems.is_empty() as usize;
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
