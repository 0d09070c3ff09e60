use std::path::{Path, PathBuf};

use kpzlab::exact::{bethe_roots, critical_z, periodic_radius_fraction, periodic_transition_certified, schuetz_transition, BetheRootSet};
use kpzlab::harness::{
    par_replicas, run_exact_vs_mc, run_experiment, Check, ExactSystem, ExactVsMcReport, ExactVsMcSpec, ExperimentReport,
    ExperimentSpec,
};
use kpzlab::limits::{painleve2_tw_cdf, tracy_widom_cdf, CdfTable};
use kpzlab::numerics::{self, Setting, CONTOUR_REL_TOL, NYSTROM_TOL, PAINLEVE_REFINE_TOL, RADIUS_SENSITIVITY_TOL};
use kpzlab::rng::streams;
use kpzlab::sampler::{
    default_brownian_grid, last_passage_value, sample_brownian_dk, sample_poisson_lis, sample_wishart_lmax,
    simulate_tasep_line, simulate_tasep_ring, step_line_state, thin_dlpp_sample, HeightQuery, HeightSample, StreamKey,
};
use kpzlab::Complex64;
use serde::Serialize;

use crate::args::{DistArgs, DistMethod, ExactArgs, ExactCommon, ExactSystemArgs, ExperimentArgs, Format, RootsArgs, SimModel, SimulateArgs};
use crate::output::{write_csv, write_json, Failure};

/// Settings shared by every subcommand.
pub struct Context {
    pub seed: u64,
    /// set when the seed came from the flag or the environment
    pub seed_explicit: bool,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: usize,
}

impl Context {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn output(&self) -> Option<&Path> {
        self.output.as_deref()
    }
}

#[derive(Serialize)]
struct NumericsArtifact {
    seed: u64,
    thresholds_version: &'static str,
    settings: Vec<Setting>,
}

pub fn describe_numerics(ctx: &Context) -> Result<(), Failure> {
    let settings = numerics::describe();
    match ctx.format_or(Format::Csv) {
        Format::Csv => write_csv(ctx.output(), ctx.seed, &["name", "value", "role"], &settings),
        Format::Json => write_json(
            ctx.output(),
            &NumericsArtifact { seed: ctx.seed, thresholds_version: numerics::THRESHOLDS_VERSION, settings },
        ),
    }
}

#[derive(Debug, Serialize)]
struct SimRow {
    replica: u64,
    x: Option<i64>,
    t: Option<f64>,
    value: f64,
    valid: bool,
}

#[derive(Serialize)]
struct SimArtifact {
    seed: u64,
    model: &'static str,
    stream: u64,
    samples: usize,
    parameters: serde_json::Value,
    rows: Vec<SimRow>,
}

fn height_rows(replica: u64, h: HeightSample) -> Vec<SimRow> {
    h.queries
        .iter()
        .zip(&h.values)
        .map(|(&(x, t), &v)| SimRow { replica, x: Some(x), t: Some(t), value: v as f64, valid: h.valid })
        .collect()
}

fn scalar_row(replica: u64, value: f64) -> Vec<SimRow> {
    vec![SimRow { replica, x: None, t: None, value, valid: true }]
}

fn latest(ts: &[f64]) -> f64 {
    ts.iter().copied().fold(0.0, f64::max)
}

pub fn simulate(ctx: &Context, args: &SimulateArgs) -> Result<(), Failure> {
    let seed = ctx.seed;
    let n = args.samples;
    let key = |r: usize, stream: u64| StreamKey::new(seed, r as u64, stream);
    let (model, stream, parameters, rows): (&str, u64, serde_json::Value, Vec<Vec<SimRow>>) = match &args.model {
        SimModel::TasepLine { particles, t, x } => {
            let init = step_line_state(*particles)?;
            let q = HeightQuery::grid(x, t);
            let rows = par_replicas(ctx.workers, n, |r| {
                let (h, _) = simulate_tasep_line(&init, latest(t), &q, key(r, streams::TASEP_LINE))?;
                Ok(height_rows(r as u64, h))
            })?;
            let p = serde_json::json!({ "particles": particles, "t": t, "x": x });
            ("tasep-line", streams::TASEP_LINE, p, rows)
        }
        SimModel::TasepRing { period, particles, t, x } => {
            let q = HeightQuery::grid(x, t);
            let rows = par_replicas(ctx.workers, n, |r| {
                let run = simulate_tasep_ring(*period, *particles, latest(t), &q, key(r, streams::TASEP_RING))?;
                Ok(height_rows(r as u64, run.heights))
            })?;
            let p = serde_json::json!({ "L": period, "N": particles, "t": t, "x": x });
            ("tasep-ring", streams::TASEP_RING, p, rows)
        }
        SimModel::PoissonLis { t, s } => {
            let s = s.unwrap_or(*t);
            let rows = par_replicas(ctx.workers, n, |r| {
                Ok(scalar_row(r as u64, sample_poisson_lis(*t, s, key(r, streams::POISSON_LIS))? as f64))
            })?;
            ("poisson-lis", streams::POISSON_LIS, serde_json::json!({ "t": t, "s": s }), rows)
        }
        SimModel::Dlpp { m, n: cols, weights } => {
            let rows = par_replicas(ctx.workers, n, |r| {
                let mut rng = key(r, streams::DLPP).rng();
                Ok(scalar_row(r as u64, last_passage_value(*m, *cols, || weights.draw(&mut rng))?))
            })?;
            ("dlpp", streams::DLPP, serde_json::json!({ "m": m, "n": cols, "weights": weights }), rows)
        }
        SimModel::ThinDlpp { n: long, k, exponent, weights } => {
            let k = k.unwrap_or_else(|| (*long as f64).powf(*exponent).floor() as usize);
            let rows = par_replicas(ctx.workers, n, |r| {
                Ok(scalar_row(r as u64, thin_dlpp_sample(*long, k, *weights, key(r, streams::DLPP))?))
            })?;
            ("thin-dlpp", streams::DLPP, serde_json::json!({ "n": long, "k": k, "weights": weights }), rows)
        }
        SimModel::Brownian { k, grid } => {
            let grid = grid.unwrap_or_else(|| default_brownian_grid(*k));
            let rows = par_replicas(ctx.workers, n, |r| {
                Ok(scalar_row(r as u64, sample_brownian_dk(*k, grid, key(r, streams::BROWNIAN))?))
            })?;
            ("brownian", streams::BROWNIAN, serde_json::json!({ "k": k, "grid": grid }), rows)
        }
        SimModel::Wishart { m, n: dim } => {
            let rows = par_replicas(ctx.workers, n, |r| {
                Ok(scalar_row(r as u64, sample_wishart_lmax(*dim, *m, key(r, streams::WISHART))?))
            })?;
            ("wishart", streams::WISHART, serde_json::json!({ "m": m, "n": dim }), rows)
        }
    };
    let rows: Vec<SimRow> = rows.into_iter().flatten().collect();
    let invalid = rows.iter().filter(|r| !r.valid).count();
    if invalid > 0 {
        eprintln!("warning: {invalid} rows come from runs whose leftmost particle moved; raise --particles");
    }
    match ctx.format_or(Format::Csv) {
        Format::Csv => write_csv(ctx.output(), seed, &["replica", "x", "t", "value", "valid"], &rows),
        Format::Json => {
            write_json(ctx.output(), &SimArtifact { seed, model, stream, samples: n, parameters, rows })
        }
    }
}

#[derive(Debug, Serialize)]
struct Diagnostics {
    method: &'static str,
    /// relative agreement required of successive contour refinements
    contour_rel_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius_sensitivity_tol: Option<f64>,
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
struct ExactRecord {
    X: Vec<i64>,
    Y: Vec<i64>,
    t: f64,
    L: Option<usize>,
    N: usize,
    probability: f64,
    diagnostics: Diagnostics,
}

#[derive(Serialize)]
struct ExactArtifact {
    seed: u64,
    records: Vec<ExactRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<ExactVsMcReport>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct ExactCsvRow {
    X: String,
    Y: String,
    t: f64,
    L: Option<usize>,
    N: usize,
    probability: f64,
    method: &'static str,
}

fn joined(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn exact(ctx: &Context, args: &ExactArgs) -> Result<(), Failure> {
    let (period, common): (Option<usize>, &ExactCommon) = match &args.system {
        ExactSystemArgs::Line(c) => (None, c),
        ExactSystemArgs::Ring { period, common } => (Some(*period), common),
    };
    let y = &common.initial;
    let t = common.t;
    let record = |x: &[i64]| -> Result<ExactRecord, Failure> {
        let (probability, diagnostics) = match period {
            None => (
                schuetz_transition(x, y, t)?,
                Diagnostics { method: "line-determinant", contour_rel_tol: CONTOUR_REL_TOL, radius_fraction: None, radius_sensitivity_tol: None },
            ),
            Some(l) => (
                periodic_transition_certified(x, y, l, t)?,
                Diagnostics {
                    method: "ring-determinant",
                    contour_rel_tol: CONTOUR_REL_TOL,
                    radius_fraction: Some(periodic_radius_fraction(x, y, l, t)?),
                    radius_sensitivity_tol: Some(RADIUS_SENSITIVITY_TOL),
                },
            ),
        };
        Ok(ExactRecord { X: x.to_vec(), Y: y.clone(), t, L: period, N: y.len(), probability, diagnostics })
    };

    let check = match common.check_samples {
        Some(samples) => {
            let system = match period {
                None => ExactSystem::Line { start: y.clone() },
                Some(period) => ExactSystem::Ring { period, start: y.clone() },
            };
            Some(run_exact_vs_mc(&ExactVsMcSpec { system, t, samples, seed: ctx.seed }, ctx.workers)?)
        }
        None => None,
    };
    let finals: Vec<Vec<i64>> = match (&check, common.finals.is_empty()) {
        (_, false) => common.finals.clone(),
        (Some(report), true) => report.states.iter().map(|s| s.state.clone()).collect(),
        (None, true) => return Err(Failure::Usage("give at least one --X or use --check-samples".into())),
    };
    let records = finals.iter().map(|x| record(x)).collect::<Result<Vec<_>, _>>()?;

    match ctx.format_or(Format::Json) {
        Format::Json => write_json(ctx.output(), &ExactArtifact { seed: ctx.seed, records, check: check.clone() })?,
        Format::Csv => {
            let rows: Vec<ExactCsvRow> = records
                .iter()
                .map(|r| ExactCsvRow {
                    X: joined(&r.X),
                    Y: joined(&r.Y),
                    t: r.t,
                    L: r.L,
                    N: r.N,
                    probability: r.probability,
                    method: r.diagnostics.method,
                })
                .collect();
            write_csv(ctx.output(), ctx.seed, &["X", "Y", "t", "L", "N", "probability", "method"], &rows)?
        }
    }
    match check {
        Some(r) if !r.pass => Err(Failure::Acceptance(failed_checks(&r.checks))),
        _ => Ok(()),
    }
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
struct DistRow {
    x: f64,
    F: f64,
    method: &'static str,
    tolerance: f64,
}

#[derive(Serialize)]
struct DistArtifact {
    seed: u64,
    rows: Vec<DistRow>,
}

pub fn dist(ctx: &Context, args: &DistArgs) -> Result<(), Failure> {
    let (method, tolerance, f): (&'static str, f64, fn(f64) -> kpzlab::Result<f64>) = match args.method {
        DistMethod::Fredholm => ("fredholm", NYSTROM_TOL, tracy_widom_cdf),
        DistMethod::Painleve => ("painleve", PAINLEVE_REFINE_TOL, painleve2_tw_cdf),
    };
    let xs = args.x.0.clone();
    let values = if xs.len() >= 2 {
        CdfTable::from_fn(xs.clone(), method, f)?.values().to_vec()
    } else {
        xs.iter().map(|&x| f(x)).collect::<kpzlab::Result<Vec<_>>>()?
    };
    let rows: Vec<DistRow> =
        xs.iter().zip(values).map(|(&x, value)| DistRow { x, F: value, method, tolerance }).collect();
    match ctx.format_or(Format::Csv) {
        Format::Csv => write_csv(ctx.output(), ctx.seed, &["x", "F", "method", "tolerance"], &rows),
        Format::Json => write_json(ctx.output(), &DistArtifact { seed: ctx.seed, rows }),
    }
}

#[derive(Serialize)]
struct RootsArtifact {
    seed: u64,
    critical_z: f64,
    z_abs_frac: f64,
    z_arg: f64,
    #[serde(flatten)]
    set: BetheRootSet,
    max_residual: f64,
    min_gap: f64,
}

#[derive(Serialize)]
struct RootRow {
    index: usize,
    re: f64,
    im: f64,
    residual: f64,
}

pub fn roots(ctx: &Context, args: &RootsArgs) -> Result<(), Failure> {
    if !(args.z_abs_frac > 0.0 && args.z_abs_frac.is_finite()) {
        return Err(Failure::Usage(format!("--z-abs-frac must be positive, got {}", args.z_abs_frac)));
    }
    let critical = critical_z(args.period, args.particles);
    let z = Complex64::from_polar(args.z_abs_frac * critical, args.z_arg);
    let set = bethe_roots(args.period, args.particles, z)?;
    match ctx.format_or(Format::Json) {
        Format::Json => write_json(
            ctx.output(),
            &RootsArtifact {
                seed: ctx.seed,
                critical_z: critical,
                z_abs_frac: args.z_abs_frac,
                z_arg: args.z_arg,
                max_residual: set.max_residual(),
                min_gap: set.min_gap(),
                set,
            },
        ),
        Format::Csv => {
            let rows: Vec<RootRow> = set
                .roots
                .iter()
                .zip(&set.residuals)
                .enumerate()
                .map(|(index, (w, &residual))| RootRow { index, re: w.re, im: w.im, residual })
                .collect();
            write_csv(ctx.output(), ctx.seed, &["index", "re", "im", "residual"], &rows)
        }
    }
}

fn failed_checks(checks: &[Check]) -> String {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} = {} (threshold {})", c.name, c.value, c.threshold))
        .collect();
    failed.join("; ")
}

pub fn experiment(ctx: &Context, args: &ExperimentArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.spec.display())))?;
    let mut spec: ExperimentSpec = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("invalid spec {}: {e}", args.spec.display())))?;
    if ctx.seed_explicit {
        spec.seed = ctx.seed;
    }
    let out = run_experiment(&spec, ctx.workers)?;
    let report: &ExperimentReport = &out.report;
    match ctx.format_or(Format::Json) {
        Format::Json => write_json(ctx.output(), report)?,
        Format::Csv => write_csv(ctx.output(), spec.seed, &["name", "value", "threshold", "pass"], &report.checks)?,
    }
    let dump = args.dump.clone().or_else(|| ctx.output.as_ref().map(|p| p.with_extension("samples.csv")));
    if let Some(path) = dump {
        write_csv(Some(&path), spec.seed, &["size", "replica", "point", "raw", "scaled"], &out.samples)?;
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Acceptance(failed_checks(&report.checks)))
    }
}
