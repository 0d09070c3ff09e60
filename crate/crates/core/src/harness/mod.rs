//! Empirical statistics, the CTMC oracle and Monte-Carlo experiments.

pub mod ctmc;
pub mod exact_mc;
pub mod experiment;
mod parallel;
pub mod stats;

pub use ctmc::{ctmc_oracle, expm, CtmcDistribution, CtmcModel, CtmcOracle};

pub use stats::ks_statistic;
pub use stats::{
    dkw_epsilon, ks_one_sample, ks_p_value, ks_two_sample, linear_fit, Ecdf, KsCriterion, KsResult, LinearFit, Summary,
};
pub use exact_mc::{run_exact_vs_mc, ExactSystem, ExactVsMcReport, ExactVsMcSpec, StateComparison};
pub use experiment::{
    canonical_scaling, run_experiment, run_hydro_experiment, run_periodic_experiment, run_tw_experiment,
    run_wishart_against, run_wishart_identity, Check, ExperimentOutput, ExperimentReport, ExperimentSpec, Model,
    ModelParams, ProfilePoint, Provenance, SampleRow, Scaling, SizeResult, Target, Timing, VarianceFit,
};
pub use parallel::par_replicas;
