//! Monte-Carlo experiments: sample a model over a size schedule, apply the
//! scaling of its limit theorem and compare with the limit law.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::parallel::par_replicas;
use super::stats::{ks_one_sample, ks_two_sample, linear_fit, KsCriterion, KsResult, LinearFit, Summary};
use crate::error::{Error, Result};
use crate::limits::{hydro_profile, tracy_widom_moments, CdfTable, ScalePoint};
use crate::numerics::*;
use crate::rng::{streams, StreamKey};
use crate::sampler::{
    default_brownian_grid, dlpp_heights, last_passage_value, sample_brownian_dk, sample_poisson_lis,
    sample_wishart_lmax, simulate_tasep_ring, thin_dlpp_sample, HeightQuery, WeightSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    PoissonLis,
    ExpDlpp,
    TasepLine,
    TasepRing,
    ThinDlpp,
    BrownianDk,
    Wishart,
    /// draws from the Tracy–Widom table itself
    TracyWidom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// `(l - 2t) / t^{1/3}`
    Ulam,
    /// `(h(gamma T^{2/3}, 2 tau T) + c - tau T) / (-T^{1/3})` with `c` the height offset
    KpzOnePoint,
    /// the same observable on a ring with `T = L^{3/2}`
    Relaxation,
    /// `(L - 2 sqrt(n k)) / (n^{1/2} k^{-1/6})`
    ThinLpp,
    /// `(L - (sqrt m + sqrt n)^2) / ((sqrt m + sqrt n)^{4/3} (m n)^{-1/6})`
    GueEdge,
    /// `(D - 2 sqrt k) k^{1/6}`
    BrownianEdge,
    /// `h(x, T) / T`
    Hydro,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    TracyWidom,
    Gaussian,
    TwoSample,
    Hydro,
}

/// Model-specific knobs; each field is ignored by models that do not use it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    /// thin-dlpp site weights
    pub weights: WeightSpec,
    /// thin-dlpp weights of the comparison sample for `two-sample`
    pub reference_weights: Option<WeightSpec>,
    /// thin-dlpp: `k = floor(n^exponent)`
    pub exponent: f64,
    pub gamma: f64,
    pub tau: f64,
    /// tasep-ring: one run per `(L, tau)`; empty means `[tau]`
    pub taus: Vec<f64>,
    /// tasep-line hydro: positions as fractions `x / T`
    pub grid: Vec<f64>,
    /// brownian-dk: grid points per unit time are `grid_factor * k`
    pub grid_factor: usize,
    /// exp-dlpp / wishart: number of rows `m >= n`; size is `n`
    pub rows: Option<usize>,
    /// rows of the Wishart comparison sample; defaults to `rows`
    pub reference_rows: Option<usize>,
    /// tasep-ring: also sample at `gamma + 1` and test equality in law
    pub periodicity: bool,
    /// added to TASEP heights before scaling; `h` counts flipped corners, so
    /// `h + 1` is the midpoint between successive flips
    pub height_offset: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            weights: WeightSpec::PlusMinusOne,
            reference_weights: None,
            exponent: THIN_DLPP_EXPONENT,
            gamma: 0.0,
            tau: 0.5,
            taus: Vec::new(),
            grid: (-10..=10).map(|k| k as f64 / 10.0).collect(),
            grid_factor: BROWNIAN_GRID_FACTOR,
            rows: None,
            reference_rows: None,
            periodicity: false,
            height_offset: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub model: Model,
    pub sizes: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub scaling: Scaling,
    pub target: Target,
    #[serde(default)]
    pub params: ModelParams,
    /// overrides the default KS bound of the model
    #[serde(default)]
    pub ks_threshold: Option<f64>,
}

impl ExperimentSpec {
    /// Spec with the theorem scaling and default parameters of `model`.
    pub fn new(model: Model, sizes: Vec<f64>, samples: usize, seed: u64, target: Target) -> Self {
        let scaling = match target {
            Target::Hydro => Scaling::Hydro,
            _ => canonical_scaling(model),
        };
        Self { model, sizes, samples, seed, scaling, target, params: ModelParams::default(), ks_threshold: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 100 {
            return Err(Error::invalid(format!("need at least 100 samples per size, got {}", self.samples)));
        }
        if self.sizes.is_empty() {
            return Err(Error::invalid("size schedule is empty"));
        }
        if self.sizes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::invalid(format!("sizes must be positive, got {:?}", self.sizes)));
        }
        if !self.sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!("sizes must be strictly increasing, got {:?}", self.sizes)));
        }
        let integral = !matches!(self.model, Model::PoissonLis | Model::TasepLine | Model::TracyWidom);
        if integral && self.sizes.iter().any(|s| s.fract() != 0.0) {
            return Err(Error::invalid(format!("{:?} needs integer sizes", self.model)));
        }
        let scaling_ok = self.scaling == canonical_scaling(self.model)
            || self.scaling == Scaling::Identity
            || (self.model == Model::TasepLine && self.scaling == Scaling::Hydro);
        if !scaling_ok {
            return Err(Error::invalid(format!("scaling {:?} does not apply to {:?}", self.scaling, self.model)));
        }
        let target_ok = match self.target {
            Target::TracyWidom => self.scaling != Scaling::Hydro,
            Target::Gaussian => self.model == Model::TasepRing,
            Target::TwoSample => match self.model {
                Model::ExpDlpp | Model::Wishart => true,
                Model::ThinDlpp => self.params.reference_weights.is_some(),
                _ => false,
            },
            Target::Hydro => self.model == Model::TasepLine && self.scaling == Scaling::Hydro,
        };
        if !target_ok {
            return Err(Error::invalid(format!(
                "target {:?} is not available for {:?} with scaling {:?}",
                self.target, self.model, self.scaling
            )));
        }
        let p = &self.params;
        if !(p.tau > 0.0 && p.tau.is_finite()) || p.taus.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::invalid("tau must be positive"));
        }
        if !p.gamma.is_finite() || !p.height_offset.is_finite() {
            return Err(Error::invalid("gamma must be finite"));
        }
        if self.model == Model::ThinDlpp {
            p.weights.validate()?;
            if let Some(w) = p.reference_weights {
                w.validate()?;
            }
            if !(p.exponent > 0.0 && p.exponent < 1.0) {
                return Err(Error::invalid(format!("thin exponent {} not in (0, 1)", p.exponent)));
            }
        }
        if self.model == Model::TasepRing && self.sizes.iter().any(|&l| l < 2.0 || l % 2.0 != 0.0) {
            return Err(Error::invalid("ring periods must be even (N = L/2)"));
        }
        if self.target == Target::Hydro && (p.grid.is_empty() || p.grid.iter().any(|f| !(f.abs() <= 1.0))) {
            return Err(Error::invalid("hydro grid must be nonempty and inside [-1, 1]"));
        }
        if matches!(self.model, Model::ExpDlpp | Model::Wishart) {
            let n = *self.sizes.last().unwrap() as usize;
            for rows in [p.rows, p.reference_rows].into_iter().flatten() {
                if rows < n {
                    return Err(Error::invalid(format!("rows {rows} must be at least the size {n}")));
                }
            }
        }
        if let Some(b) = self.ks_threshold {
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::invalid(format!("KS threshold {b} not in [0, 1]")));
            }
        }
        Ok(())
    }
}

pub fn canonical_scaling(model: Model) -> Scaling {
    match model {
        Model::PoissonLis => Scaling::Ulam,
        Model::ExpDlpp | Model::Wishart => Scaling::GueEdge,
        Model::TasepLine => Scaling::KpzOnePoint,
        Model::TasepRing => Scaling::Relaxation,
        Model::ThinDlpp => Scaling::ThinLpp,
        Model::BrownianDk => Scaling::BrownianEdge,
        Model::TracyWidom => Scaling::Identity,
    }
}

fn default_ks_bound(model: Model) -> Option<f64> {
    match model {
        Model::PoissonLis => Some(KS_POISSON_LIS),
        Model::TasepLine => Some(KS_TASEP_DLPP),
        Model::ThinDlpp => Some(KS_THIN_DLPP),
        Model::BrownianDk => Some(KS_BROWNIAN_DK),
        Model::ExpDlpp | Model::Wishart => Some(KS_GUE_EDGE),
        Model::TasepRing => Some(KS_RING_RELAXATION),
        Model::TracyWidom => None,
    }
}

/// Pass/fail item with the threshold it was judged against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, pass: value <= threshold }
    }

    fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, pass: value >= threshold }
    }

    fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, pass: value < threshold }
    }

    fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, pass: value > threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    /// requested fraction `x / T`
    pub fraction: f64,
    pub x: i64,
    pub mean: f64,
    pub limit: f64,
}

/// Results for one size (and, on the ring, one `tau`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeResult {
    pub size: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// model time of the observation, for growth models
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<Summary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled: Option<Summary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<KsResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub profile: Vec<ProfilePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceFit {
    pub size: f64,
    pub times: Vec<f64>,
    pub variances: Vec<f64>,
    pub fit: LinearFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
    pub streams: Vec<u64>,
    /// how replica ids of the stream keys are formed
    pub replica_layout: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_clock_seconds: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub thresholds_version: String,
    pub provenance: Provenance,
    pub results: Vec<SizeResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variance_fits: Vec<VarianceFit>,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub timing: Timing,
}

impl ExperimentReport {
    /// JSON of everything except timing; equal for equal seeds whatever the
    /// number of workers.
    pub fn fingerprint(&self) -> String {
        let mut r = self.clone();
        r.timing = Timing { wall_clock_seconds: 0.0, workers: 0 };
        serde_json::to_string(&r).expect("report serializes")
    }

    pub fn check(&self, prefix: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name.starts_with(prefix))
    }
}

/// One sample row of a CSV dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub size: f64,
    pub replica: u64,
    /// observation label, such as `x/T=0.5` or `tau=20`; empty for one-point runs
    pub point: String,
    pub raw: f64,
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub samples: Vec<SampleRow>,
}

const REPLICA_LAYOUT: &str = "replica = (entry index << 32) | sample index";
const REFERENCE_OFFSET: u64 = 1 << 16;
const SHIFTED_OFFSET: u64 = 1 << 20;

fn replica_id(entry: usize, sample: usize) -> u64 {
    ((entry as u64) << 32) | sample as u64
}

fn weight_tag(w: &WeightSpec) -> u64 {
    match w {
        WeightSpec::Exp => 0,
        WeightSpec::Geometric { .. } => 1,
        WeightSpec::PlusMinusOne => 2,
        WeightSpec::UniformCentered => 3,
        WeightSpec::GaussianScaled { .. } => 4,
    }
}

/// How one observation is drawn and rescaled at a given size.
#[derive(Debug, Clone)]
enum Plan {
    Lis { t: f64 },
    Lpp { rows: usize, cols: usize },
    Wishart { rows: usize, cols: usize },
    Line { x: i64, t: f64, side: usize, big_t: f64, offset: f64 },
    Ring { period: usize, x: i64, t: f64, big_t: f64, offset: f64 },
    Thin { n: usize, k: usize, weights: WeightSpec },
    Brownian { k: usize, grid: usize },
    Tw,
}

impl Plan {
    fn stream(&self) -> u64 {
        match self {
            Plan::Lis { .. } => streams::POISSON_LIS,
            Plan::Lpp { .. } | Plan::Line { .. } => streams::DLPP,
            Plan::Wishart { .. } => streams::WISHART,
            Plan::Ring { .. } => streams::TASEP_RING,
            Plan::Thin { weights, .. } => streams::DLPP | (weight_tag(weights) + 1) << 8,
            Plan::Brownian { .. } => streams::BROWNIAN,
            Plan::Tw => streams::TW_INVERSE,
        }
    }

    fn draw(&self, key: StreamKey) -> Result<f64> {
        match *self {
            Plan::Lis { t } => sample_poisson_lis(t, t, key).map(|l| l as f64),
            Plan::Lpp { rows, cols } => {
                let mut rng = key.rng();
                last_passage_value(rows, cols, || WeightSpec::Exp.draw(&mut rng))
            }
            Plan::Wishart { rows, cols } => sample_wishart_lmax(cols.min(rows), cols.max(rows), key),
            Plan::Line { x, t, side, .. } => Ok(dlpp_heights(side, side, &[x], t, key)?[0] as f64),
            Plan::Ring { period, x, t, .. } => {
                let run = simulate_tasep_ring(period, period / 2, t, &HeightQuery::at_time([x], t), key)?;
                Ok(run.heights.values[0] as f64)
            }
            Plan::Thin { n, k, weights } => thin_dlpp_sample(n, k, weights, key),
            Plan::Brownian { k, grid } => sample_brownian_dk(k, grid, key),
            Plan::Tw => {
                let mut rng = key.rng();
                Ok(CdfTable::tracy_widom().sample(&mut rng))
            }
        }
    }

    fn scale(&self, scaling: Scaling, raw: f64) -> f64 {
        match (scaling, self) {
            (Scaling::Identity, _) => raw,
            (Scaling::Ulam, Plan::Lis { t }) => (raw - 2.0 * t) / t.cbrt(),
            (Scaling::GueEdge, Plan::Lpp { rows, cols } | Plan::Wishart { rows, cols }) => {
                let (m, n) = (*rows as f64, *cols as f64);
                let r = m.sqrt() + n.sqrt();
                (raw - r * r) / (r.powf(4.0 / 3.0) * (m * n).powf(-1.0 / 6.0))
            }
            (Scaling::KpzOnePoint, Plan::Line { t, big_t, offset, .. })
            | (Scaling::Relaxation, Plan::Ring { t, big_t, offset, .. }) => (raw + offset - t / 2.0) / (-big_t.cbrt()),
            (Scaling::ThinLpp, Plan::Thin { n, k, .. }) => {
                let (n, k) = (*n as f64, *k as f64);
                (raw - 2.0 * (n * k).sqrt()) / (n.sqrt() * k.powf(-1.0 / 6.0))
            }
            (Scaling::BrownianEdge, Plan::Brownian { k, .. }) => {
                let k = *k as f64;
                (raw - 2.0 * k.sqrt()) * k.powf(1.0 / 6.0)
            }
            _ => unreachable!("scaling validated against the model"),
        }
    }

    fn time(&self) -> Option<f64> {
        match self {
            Plan::Line { t, .. } | Plan::Ring { t, .. } => Some(*t),
            _ => None,
        }
    }
}

/// Square DLPP side large enough for heights at `xs` and time `t`.
fn dlpp_side(xs: &[i64], t: f64) -> usize {
    let depth = |x: i64| {
        let ax = x.unsigned_abs() as f64;
        let k = if ax < t { (t - ax) * (t - ax) / (4.0 * t) } else { 0.0 };
        ax + k
    };
    let reach = xs.iter().map(|&x| depth(x)).fold(0.0, f64::max);
    (reach + 5.0 * t.cbrt() + 10.0).ceil() as usize
}

fn plan(spec: &ExperimentSpec, size: f64, tau: f64) -> Plan {
    let p = &spec.params;
    match spec.model {
        Model::PoissonLis => Plan::Lis { t: size },
        Model::ExpDlpp => Plan::Lpp { rows: p.rows.unwrap_or(size as usize), cols: size as usize },
        Model::Wishart => Plan::Wishart { rows: p.rows.unwrap_or(size as usize), cols: size as usize },
        Model::TasepLine => {
            let x = (p.gamma * size.powf(2.0 / 3.0)).round() as i64;
            let t = 2.0 * tau * size;
            Plan::Line { x, t, side: dlpp_side(&[x], t), big_t: size, offset: p.height_offset }
        }
        Model::TasepRing => {
            let period = size as usize;
            // T^{2/3} = L
            let x = (p.gamma * size).round() as i64;
            let big_t = size.powf(1.5);
            Plan::Ring { period, x, t: 2.0 * tau * big_t, big_t, offset: p.height_offset }
        }
        Model::ThinDlpp => {
            let n = size as usize;
            let k = (size.powf(p.exponent).floor() as usize).max(1);
            Plan::Thin { n, k, weights: p.weights }
        }
        Model::BrownianDk => {
            let k = size as usize;
            let grid = if p.grid_factor == BROWNIAN_GRID_FACTOR { default_brownian_grid(k) } else { p.grid_factor * k * k };
            Plan::Brownian { k, grid }
        }
        Model::TracyWidom => Plan::Tw,
    }
}

/// Comparison sample for `two-sample` targets.
fn reference_plan(spec: &ExperimentSpec, size: f64) -> Plan {
    let p = &spec.params;
    match spec.model {
        Model::ExpDlpp => Plan::Wishart { rows: p.reference_rows.or(p.rows).unwrap_or(size as usize), cols: size as usize },
        Model::Wishart => Plan::Lpp { rows: p.reference_rows.or(p.rows).unwrap_or(size as usize), cols: size as usize },
        Model::ThinDlpp => match plan(spec, size, p.tau) {
            Plan::Thin { n, k, .. } => Plan::Thin { n, k, weights: p.reference_weights.expect("validated") },
            _ => unreachable!(),
        },
        _ => unreachable!("validated"),
    }
}

fn sample_plan(
    plan: &Plan,
    spec: &ExperimentSpec,
    entry: usize,
    stream_offset: u64,
    workers: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let stream = plan.stream() + stream_offset;
    let raw = par_replicas(workers, spec.samples, |i| {
        plan.draw(StreamKey::new(spec.seed, replica_id(entry, i), stream))
    })
    .map_err(|e| match e {
        Error::Replica { replica, message } => {
            Error::Replica { replica: replica_id(entry, replica as usize), message }
        }
        e => e,
    })?;
    let scaled = raw.iter().map(|&r| plan.scale(spec.scaling, r)).collect();
    Ok((raw, scaled))
}

fn provenance(spec: &ExperimentSpec, streams: Vec<u64>) -> Provenance {
    let mut streams = streams;
    streams.sort_unstable();
    streams.dedup();
    Provenance {
        generator: "ChaCha8".into(),
        seed: spec.seed,
        streams,
        replica_layout: REPLICA_LAYOUT.into(),
    }
}

fn size_label(size: f64) -> String {
    format!("{size}")
}

fn one_sample_target(spec: &ExperimentSpec, plan: &Plan) -> impl Fn(f64) -> f64 {
    let table = CdfTable::tracy_widom();
    let (gamma, tau) = (spec.params.gamma, spec.params.tau);
    let composed = matches!(spec.scaling, Scaling::KpzOnePoint | Scaling::Relaxation)
        && matches!(plan, Plan::Line { .. } | Plan::Ring { .. });
    move |s: f64| {
        if composed {
            table.eval(ScalePoint { h: s, gamma, tau }.composed_argument())
        } else {
            table.eval(s)
        }
    }
}

fn decreasing_check(name: &str, values: &[f64]) -> Option<Check> {
    if values.len() < 2 {
        return None;
    }
    let worst = values.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    Some(Check::below(format!("{name} decreasing in size"), worst, 0.0))
}

fn finish(spec: &ExperimentSpec, prov: Provenance, results: Vec<SizeResult>, fits: Vec<VarianceFit>, checks: Vec<Check>, start: Instant, workers: usize) -> ExperimentReport {
    let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
    ExperimentReport {
        spec: spec.clone(),
        thresholds_version: THRESHOLDS_VERSION.into(),
        provenance: prov,
        results,
        variance_fits: fits,
        checks,
        pass,
        timing: Timing { wall_clock_seconds: start.elapsed().as_secs_f64(), workers },
    }
}

/// Runs any experiment spec on `workers` threads.
pub fn run_experiment(spec: &ExperimentSpec, workers: usize) -> Result<ExperimentOutput> {
    spec.validate()?;
    match (spec.target, spec.model) {
        (Target::Hydro, _) => run_hydro_experiment(spec, workers),
        (_, Model::TasepRing) => run_periodic_experiment(spec, workers),
        _ => run_tw_experiment(spec, workers),
    }
}

/// One-point experiments against Tracy–Widom or a second sampler.
///
/// Every size gets a KS result; the last size is judged against the bound,
/// and with several sizes the KS statistic must decrease.
pub fn run_tw_experiment(spec: &ExperimentSpec, workers: usize) -> Result<ExperimentOutput> {
    spec.validate()?;
    if matches!(spec.target, Target::Hydro | Target::Gaussian) || spec.model == Model::TasepRing {
        return Err(Error::invalid("use the hydro or periodic runner for this spec"));
    }
    let start = Instant::now();
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut used_streams = Vec::new();
    let two_sample = spec.target == Target::TwoSample;
    let criterion = if two_sample {
        KsCriterion::MinPValue(KS_P_THRESHOLD)
    } else {
        match spec.ks_threshold.or(default_ks_bound(spec.model)) {
            Some(b) => KsCriterion::MaxStatistic(b),
            None => KsCriterion::Dkw,
        }
    };
    for (entry, &size) in spec.sizes.iter().enumerate() {
        let pl = plan(spec, size, spec.params.tau);
        used_streams.push(pl.stream());
        let (raw, scaled) = sample_plan(&pl, spec, entry, 0, workers)?;
        let ks = if two_sample {
            let rp = reference_plan(spec, size);
            used_streams.push(rp.stream() + REFERENCE_OFFSET);
            let (_, other) = sample_plan(&rp, spec, entry, REFERENCE_OFFSET, workers)?;
            let other: Vec<f64> = other;
            ks_two_sample(&scaled, &other, criterion, DKW_DELTA)?
        } else {
            ks_one_sample(&scaled, one_sample_target(spec, &pl), criterion, DKW_DELTA)?
        };
        for (i, (&r, &s)) in raw.iter().zip(&scaled).enumerate() {
            rows.push(SampleRow { size, replica: replica_id(entry, i), point: String::new(), raw: r, scaled: s });
        }
        results.push(SizeResult {
            size,
            tau: matches!(spec.model, Model::TasepLine).then_some(spec.params.tau),
            time: pl.time(),
            samples: spec.samples,
            raw: Some(Summary::of(&raw)?),
            scaled: Some(Summary::of(&scaled)?),
            ks: Some(ks),
            profile: Vec::new(),
            sup_error: None,
        });
    }
    let mut checks = Vec::new();
    let last = results.last().and_then(|r| r.ks.clone()).expect("at least one size");
    let label = size_label(*spec.sizes.last().unwrap());
    checks.push(match criterion {
        KsCriterion::MaxStatistic(b) => Check::at_most(format!("ks[size={label}]"), last.statistic, b),
        KsCriterion::Dkw => Check::at_most(format!("ks[size={label}] within DKW band"), last.statistic, last.dkw_epsilon),
        KsCriterion::MinPValue(a) => Check::above(format!("two-sample p[size={label}]"), last.p_value, a),
    });
    if two_sample {
        for r in &results[..results.len() - 1] {
            let ks = r.ks.as_ref().unwrap();
            checks.push(Check::above(format!("two-sample p[size={}]", size_label(r.size)), ks.p_value, KS_P_THRESHOLD));
        }
    } else {
        let stats: Vec<f64> = results.iter().map(|r| r.ks.as_ref().unwrap().statistic).collect();
        checks.extend(decreasing_check("ks", &stats));
    }
    let report = finish(spec, provenance(spec, used_streams), results, Vec::new(), checks, start, workers);
    Ok(ExperimentOutput { report, samples: rows })
}

/// Mean of `h(x, T) / T` over a grid of `x / T` against the limit profile,
/// at every size `T` of the schedule.
pub fn run_hydro_experiment(spec: &ExperimentSpec, workers: usize) -> Result<ExperimentOutput> {
    spec.validate()?;
    if spec.target != Target::Hydro {
        return Err(Error::invalid("hydro runner needs the hydro target"));
    }
    let start = Instant::now();
    let grid = &spec.params.grid;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (entry, &big_t) in spec.sizes.iter().enumerate() {
        let xs: Vec<i64> = grid.iter().map(|f| (f * big_t).round() as i64).collect();
        let side = dlpp_side(&xs, big_t);
        let heights = par_replicas(workers, spec.samples, |i| {
            dlpp_heights(side, side, &xs, big_t, StreamKey::new(spec.seed, replica_id(entry, i), streams::DLPP))
        })
        .map_err(|e| match e {
            Error::Replica { replica, message } => Error::Replica { replica: replica_id(entry, replica as usize), message },
            e => e,
        })?;
        let mut profile = Vec::with_capacity(xs.len());
        for (g, (&f, &x)) in grid.iter().zip(&xs).enumerate() {
            let mean = heights.iter().map(|h| h[g] as f64).sum::<f64>() / (spec.samples as f64 * big_t);
            profile.push(ProfilePoint { fraction: f, x, mean, limit: hydro_profile(x as f64 / big_t, 1.0)? });
        }
        for (i, h) in heights.iter().enumerate() {
            for (&f, &v) in grid.iter().zip(h) {
                rows.push(SampleRow {
                    size: big_t,
                    replica: replica_id(entry, i),
                    point: format!("x/T={f}"),
                    raw: v as f64,
                    scaled: v as f64 / big_t,
                });
            }
        }
        let sup = profile.iter().map(|p| (p.mean - p.limit).abs()).fold(0.0, f64::max);
        errors.push(sup);
        results.push(SizeResult {
            size: big_t,
            tau: None,
            time: Some(big_t),
            samples: spec.samples,
            raw: None,
            scaled: None,
            ks: None,
            profile,
            sup_error: Some(sup),
        });
    }
    let label = size_label(*spec.sizes.last().unwrap());
    let mut checks = vec![Check::at_most(format!("hydro sup error[T={label}]"), *errors.last().unwrap(), HYDRO_SUP_ERROR)];
    checks.extend(decreasing_check("hydro sup error", &errors));
    let report = finish(spec, provenance(spec, vec![streams::DLPP]), results, Vec::new(), checks, start, workers);
    Ok(ExperimentOutput { report, samples: rows })
}

/// Ring TASEP with `N = L/2` across `(L, tau)` pairs in the relaxation-time
/// scaling.
///
/// With the `tracy-widom` target each pair must show negative skewness of
/// the height and a scaled skewness near the Tracy–Widom value; with the
/// `gaussian` target the height variance must be linear in time at each `L`
/// with three or more `tau`. The periodicity option adds a two-sample test
/// between independent runs at `gamma` and `gamma + 1`.
pub fn run_periodic_experiment(spec: &ExperimentSpec, workers: usize) -> Result<ExperimentOutput> {
    spec.validate()?;
    if spec.model != Model::TasepRing {
        return Err(Error::invalid("periodic runner needs the tasep-ring model"));
    }
    let start = Instant::now();
    let taus = if spec.params.taus.is_empty() { vec![spec.params.tau] } else { spec.params.taus.clone() };
    let tw_skew = tracy_widom_moments().skewness;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut fits = Vec::new();
    let mut used_streams = vec![streams::TASEP_RING];
    for (li, &size) in spec.sizes.iter().enumerate() {
        let mut times = Vec::new();
        let mut variances = Vec::new();
        for (ti, &tau) in taus.iter().enumerate() {
            let entry = li * taus.len() + ti;
            let pl = plan(spec, size, tau);
            let (raw, scaled) = sample_plan(&pl, spec, entry, 0, workers)?;
            let label = format!("L={},tau={tau}", size_label(size));
            let (raw_s, scaled_s) = (Summary::of(&raw)?, Summary::of(&scaled)?);
            let mut ks = None;
            if spec.params.periodicity {
                let shifted = match pl {
                    Plan::Ring { period, x, t, big_t, offset } => Plan::Ring { period, x: x + period as i64, t, big_t, offset },
                    _ => unreachable!(),
                };
                used_streams.push(streams::TASEP_RING + SHIFTED_OFFSET);
                let (_, other) = sample_plan(&shifted, spec, entry, SHIFTED_OFFSET, workers)?;
                let r = ks_two_sample(&scaled, &other, KsCriterion::MinPValue(KS_P_THRESHOLD), DKW_DELTA)?;
                checks.push(Check::above(format!("periodicity p[{label}]"), r.p_value, KS_P_THRESHOLD));
                ks = Some(r);
            }
            if spec.target == Target::TracyWidom {
                checks.push(Check::below(format!("height skewness negative[{label}]"), raw_s.skewness, 0.0));
                checks.push(Check::at_most(
                    format!("|scaled skewness - tracy-widom skewness|[{label}]"),
                    (scaled_s.skewness - tw_skew).abs(),
                    PERIODIC_SKEW_TOL,
                ));
            }
            for (i, (&r, &s)) in raw.iter().zip(&scaled).enumerate() {
                rows.push(SampleRow { size, replica: replica_id(entry, i), point: format!("tau={tau}"), raw: r, scaled: s });
            }
            times.push(pl.time().unwrap());
            variances.push(raw_s.variance);
            results.push(SizeResult {
                size,
                tau: Some(tau),
                time: pl.time(),
                samples: spec.samples,
                raw: Some(raw_s),
                scaled: Some(scaled_s),
                ks,
                profile: Vec::new(),
                sup_error: None,
            });
        }
        if spec.target == Target::Gaussian && taus.len() >= 3 {
            let fit = linear_fit(&times, &variances)?;
            checks.push(Check::at_least(format!("variance linear in time R^2[L={}]", size_label(size)), fit.r_squared, PERIODIC_R2_MIN));
            checks.push(Check::above(format!("variance slope positive[L={}]", size_label(size)), fit.slope, 0.0));
            fits.push(VarianceFit { size, times, variances, fit });
        }
    }
    let report = finish(spec, provenance(spec, used_streams), results, fits, checks, start, workers);
    Ok(ExperimentOutput { report, samples: rows })
}

/// Two-sample test of exponential DLPP `L(m, n)` against the largest
/// eigenvalue of an `n x m` complex Wishart matrix.
pub fn run_wishart_identity(m: usize, n: usize, samples: usize, seed: u64, workers: usize) -> Result<ExperimentOutput> {
    run_wishart_against(m, m, n, samples, seed, workers)
}

/// As [`run_wishart_identity`] with a Wishart comparison of `wishart_rows`
/// rows, to check that the test detects a wrong shape.
pub fn run_wishart_against(
    m: usize,
    wishart_rows: usize,
    n: usize,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<ExperimentOutput> {
    if m < n || n == 0 {
        return Err(Error::invalid(format!("need m >= n >= 1, got m = {m}, n = {n}")));
    }
    let mut spec = ExperimentSpec::new(Model::ExpDlpp, vec![n as f64], samples, seed, Target::TwoSample);
    spec.scaling = Scaling::Identity;
    spec.params.rows = Some(m);
    spec.params.reference_rows = Some(wishart_rows);
    run_tw_experiment(&spec, workers)
}
