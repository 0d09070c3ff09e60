use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpzlab::limits::uniform_grid;
use kpzlab::sampler::WeightSpec;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "kpzlab", version, about = "Simulation, exact formulas and limit laws for KPZ-class growth models")]
#[command(subcommand_required = false, arg_required_else_help = true)]
pub struct Cli {
    /// Seed of every random stream [default: 42]; overrides the seed of an experiment spec
    #[arg(long, global = true, env = "KPZLAB_SEED")]
    pub seed: Option<u64>,

    /// Write the artifact here instead of standard output
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Worker threads for replica fan-out
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Print every tolerance, grid and threshold in effect and exit
    #[arg(long)]
    pub describe_numerics: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw samples from one of the stochastic models
    Simulate(SimulateArgs),
    /// Exact TASEP transition probabilities
    Exact(ExactArgs),
    /// Tabulate the GUE Tracy-Widom distribution
    Dist(DistArgs),
    /// Run a Monte-Carlo experiment described by a JSON spec
    Experiment(ExperimentArgs),
    /// Bethe roots of w^N (w+1)^(L-N) = z
    Roots(RootsArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(subcommand)]
    pub model: SimModel,

    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum SimModel {
    /// Step-initial TASEP on Z; heights at every (x, t)
    TasepLine {
        #[arg(long)]
        particles: usize,
        /// Observation times, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        x: Vec<i64>,
    },
    /// TASEP on a ring from the step configuration
    TasepRing {
        #[arg(long = "L")]
        period: usize,
        #[arg(long = "N")]
        particles: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        x: Vec<i64>,
    },
    /// Longest increasing path through a Poisson cloud on [0, t] x [0, s]
    PoissonLis {
        #[arg(long)]
        t: f64,
        /// defaults to t
        #[arg(long)]
        s: Option<f64>,
    },
    /// Corner-to-corner last passage time on an m x n grid
    Dlpp {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "exp", value_parser = parse_weights)]
        weights: WeightSpec,
    },
    /// Last passage time on n x k with k = floor(n^exponent)
    ThinDlpp {
        #[arg(long)]
        n: usize,
        /// overrides the exponent rule
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = kpzlab::numerics::THIN_DLPP_EXPONENT)]
        exponent: f64,
        #[arg(long, default_value = "plus-minus-one", value_parser = parse_weights)]
        weights: WeightSpec,
    },
    /// Brownian last passage D_k over [0, 1]
    Brownian {
        #[arg(long)]
        k: usize,
        /// random-walk steps; defaults to the built-in grid rule
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Largest eigenvalue of an n x n complex Wishart matrix with m degrees of freedom
    Wishart {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(subcommand)]
    pub system: ExactSystemArgs,
}

#[derive(Debug, Subcommand)]
pub enum ExactSystemArgs {
    /// Finitely many particles on Z
    Line(ExactCommon),
    /// Lifted positions on a ring of L sites
    Ring {
        #[arg(long = "L")]
        period: usize,
        #[command(flatten)]
        common: ExactCommon,
    },
}

#[derive(Debug, Args)]
pub struct ExactCommon {
    /// Initial configuration, comma separated
    #[arg(long = "Y", visible_alias = "y", value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub initial: Vec<i64>,
    /// Final configuration; repeat for several
    #[arg(long = "X", visible_alias = "x", allow_hyphen_values = true, value_parser = parse_config)]
    pub finals: Vec<Vec<i64>>,
    #[arg(long)]
    pub t: f64,
    /// Compare with this many simulated runs and the master equation
    #[arg(long)]
    pub check_samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistMethod {
    Fredholm,
    Painleve,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, value_enum, default_value = "fredholm")]
    pub method: DistMethod,
    /// lo:hi:step, or comma-separated points
    #[arg(long, allow_hyphen_values = true, value_parser = parse_points)]
    pub x: Points,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Points(pub Vec<f64>);

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// CSV sample dump; defaults to <output>.samples.csv when --output is set
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long = "L")]
    pub period: usize,
    #[arg(long = "N")]
    pub particles: usize,
    /// |z| as a fraction of the critical value
    #[arg(long, default_value_t = kpzlab::numerics::DEFAULT_Z_FRACTION)]
    pub z_abs_frac: f64,
    /// arg z in radians
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_arg: f64,
}

pub fn parse_weights(s: &str) -> Result<WeightSpec, String> {
    let (name, param) = match s.split_once(':') {
        Some((n, p)) => (n, Some(p.parse::<f64>().map_err(|e| format!("bad parameter {p:?}: {e}"))?)),
        None => (s, None),
    };
    let spec = match (name, param) {
        ("exp", None) => WeightSpec::Exp,
        ("geometric", Some(q)) => WeightSpec::Geometric { q },
        ("plus-minus-one" | "pm1", None) => WeightSpec::PlusMinusOne,
        ("uniform", None) => WeightSpec::UniformCentered,
        ("gaussian", sigma) => WeightSpec::GaussianScaled { sigma: sigma.unwrap_or(1.0) },
        _ => {
            return Err(format!(
                "unknown weights {s:?}; expected exp, geometric:Q, plus-minus-one, uniform or gaussian[:SIGMA]"
            ))
        }
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

pub fn parse_config(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("bad position {p:?}: {e}")))
        .collect()
}

pub fn parse_points(s: &str) -> Result<Points, String> {
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if !(step > 0.0) || !(hi > lo) {
                return Err(format!("range {s:?} needs lo < hi and step > 0"));
            }
            Ok(Points(uniform_grid(lo, hi, step)))
        }
        [list] => Ok(Points(list.split(',').map(num).collect::<Result<_, _>>()?)),
        _ => Err(format!("expected lo:hi:step or a comma list, got {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_points("-2:4:0.5").unwrap().0.len(), 13);
        assert_eq!(parse_points("0.1,0.2").unwrap().0, vec![0.1, 0.2]);
        assert!(parse_points("1:0:0.5").is_err());
        assert!(parse_points("0:1:0").is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(parse_weights("geometric:0.5").unwrap(), WeightSpec::Geometric { q: 0.5 });
        assert_eq!(parse_weights("gaussian").unwrap(), WeightSpec::GaussianScaled { sigma: 1.0 });
        assert!(parse_weights("geometric:1.5").is_err());
        assert!(parse_weights("cauchy").is_err());
    }
}
